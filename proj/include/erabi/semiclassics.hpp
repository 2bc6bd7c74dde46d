// semiclassics.hpp - R -> infinity limit of the extended Rabi model
//
// For a fixed projection m' of the quasispin on the local field direction the field
// degree of freedom moves in
//
//   h(q,p) = (q^2 + p^2)/2 + sqrt2 N (mu gamma / w) q
//            + m' sqrt( A q^2 + B p^2 + (c + d q)^2 ),
//
// with A = 8 lambda^2/w^2, B = 8 lambda^2 delta^2/w^2, c = 1/N, d = sqrt8 mu/w.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "erabi/params.hpp"

namespace erabi {

struct ClassicalPoint {
    double q{0.0};
    double p{0.0};
};

/// Coefficients of h_{m'} for one parameter set.
class ClassicalHamiltonian {
public:
    ClassicalHamiltonian(const ModelParams& prm, double m_prime)
        : m_(m_prime),
          A_(8.0 * prm.lambda * prm.lambda / (prm.omega * prm.omega)),
          B_(A_ * prm.delta * prm.delta),
          c_(1.0 / prm.N),
          d_(std::sqrt(8.0) * prm.mu / prm.omega),
          a_(std::sqrt(2.0) * prm.N * prm.mu * prm.gamma / prm.omega)
    {
    }

    double m_prime() const { return m_; }

    /// |B| = sqrt(A q^2 + B p^2 + (c + d q)^2)
    double field(double q, double p) const
    {
        const double z = c_ + d_ * q;
        return std::sqrt(A_ * q * q + B_ * p * p + z * z);
    }

    double value(double q, double p) const { return 0.5 * (q * q + p * p) + a_ * q + m_ * field(q, p); }
    double value(const ClassicalPoint& x) const { return value(x.q, x.p); }

    Eigen::Vector2d gradient(double q, double p) const
    {
        const double s = field(q, p);
        const double u = (A_ + d_ * d_) * q + c_ * d_;
        return {q + a_ + m_ * u / s, p + m_ * B_ * p / s};
    }

    Eigen::Matrix2d hessian(double q, double p) const
    {
        const double s = field(q, p);
        const double u = (A_ + d_ * d_) * q + c_ * d_;
        const double v = B_ * p;
        const double s3 = s * s * s;
        Eigen::Matrix2d h;
        h(0, 0) = 1.0 + m_ * ((A_ + d_ * d_) / s - u * u / s3);
        h(1, 1) = 1.0 + m_ * (B_ / s - v * v / s3);
        h(0, 1) = h(1, 0) = -m_ * u * v / s3;
        return h;
    }

    /// Half-width of a q-window containing every point with min_p h(q,p) <= eps.
    double q_bound(double eps) const
    {
        const double am = std::abs(m_);
        const double beta = std::abs(a_) + am * (std::sqrt(A_) + std::abs(d_));
        const double g0 = eps + am * c_ + 0.5 * m_ * m_ * B_;
        const double disc = beta * beta + 2.0 * g0;
        if (disc < 0.0) return 0.0;
        return 1.01 * (beta + std::sqrt(disc)) + 1e-9;
    }

    /// Measure of {p : h(q,p) <= eps} at fixed q.
    double chord(double q, double eps) const
    {
        const double e = eps - 0.5 * q * q - a_ * q;
        const double z = c_ + d_ * q;
        const double C = A_ * q * q + z * z;
        const double k = m_ * m_;
        // g(s) = s/2 + m' sqrt(B s + C), s = p^2 >= 0
        auto g = [&](double s) { return 0.5 * s + m_ * std::sqrt(std::max(0.0, B_ * s + C)); };

        std::array<double, 4> bp{};
        int nb = 0;
        bp[static_cast<std::size_t>(nb++)] = 0.0;
        const double lin = e + k * B_;
        const double disc = 2.0 * e * k * B_ + k * k * B_ * B_ + k * C;
        if (disc >= 0.0) {
            const double r = 2.0 * std::sqrt(disc);
            for (double s : {2.0 * lin - r, 2.0 * lin + r}) {
                if (s <= 0.0) continue;
                const double lhs = 0.5 * s - e;
                if (m_ < 0.0 && lhs < -1e-12 * (1.0 + std::abs(e))) continue;
                if (m_ > 0.0 && lhs > 1e-12 * (1.0 + std::abs(e))) continue;
                bp[static_cast<std::size_t>(nb++)] = s;
            }
        }
        std::sort(bp.begin(), bp.begin() + nb);

        double len = 0.0;
        for (int i = 0; i < nb; ++i) {
            const double lo = bp[static_cast<std::size_t>(i)];
            const double hi = (i + 1 < nb) ? bp[static_cast<std::size_t>(i + 1)] : std::numeric_limits<double>::infinity();
            const double mid = std::isinf(hi) ? 2.0 * lo + 1.0 : 0.5 * (lo + hi);
            if (g(mid) <= e) {
                if (std::isinf(hi)) throw std::logic_error("unbounded energy shell");
                len += 2.0 * (std::sqrt(hi) - std::sqrt(lo));
            }
        }
        return len;
    }

private:
    double m_;
    double A_, B_, c_, d_, a_;
};

inline double classical_hamiltonian(const ModelParams& p, double m_prime, const ClassicalPoint& x)
{
    return ClassicalHamiltonian(p, m_prime).value(x);
}

inline Eigen::Vector2d classical_gradient(const ModelParams& p, double m_prime, const ClassicalPoint& x)
{
    return ClassicalHamiltonian(p, m_prime).gradient(x.q, x.p);
}

/// Second derivatives (h_qq, h_qp; h_pq, h_pp).
inline Eigen::Matrix2d hessian_at(const ModelParams& p, double m_prime, const ClassicalPoint& x)
{
    return ClassicalHamiltonian(p, m_prime).hessian(x.q, x.p);
}

struct CriticalCouplings {
    double lambda_c;
    double lambda_0;  // +infinity when delta = 0
};

/// lambda_c = w / 2N, lambda_0 = lambda_c / |delta|
inline CriticalCouplings critical_couplings(const ModelParams& p)
{
    const double lc = p.omega / (2.0 * p.N);
    const double l0 = p.delta == 0.0 ? std::numeric_limits<double>::infinity() : lc / std::abs(p.delta);
    return {lc, l0};
}

enum class PointKind { minimum, saddle, maximum, degenerate };

/// Level-density nonanalyticity generated by a stationary point above the global minimum.
enum class Singularity { none, upward_step, log_divergence, downward_step, unclassified };

inline const char* to_string(PointKind k)
{
    switch (k) {
    case PointKind::minimum: return "minimum";
    case PointKind::saddle: return "saddle";
    case PointKind::maximum: return "maximum";
    default: return "degenerate";
    }
}

inline const char* to_string(Singularity s)
{
    switch (s) {
    case Singularity::none: return "none";
    case Singularity::upward_step: return "upward_step";
    case Singularity::log_divergence: return "log_divergence";
    case Singularity::downward_step: return "downward_step";
    default: return "unclassified";
    }
}

struct StationaryPoint {
    ClassicalPoint point;
    double energy{0.0};
    Eigen::Matrix2d hessian{Eigen::Matrix2d::Zero()};
    int index_r{0};
    bool degenerate{false};
    PointKind kind{PointKind::minimum};
    Singularity singularity{Singularity::none};
};

struct StationarySearchOptions {
    int seeds_q{21};
    int seeds_p{11};
    double q_half_width{3.0};  // widened automatically for strong coupling
    double p_half_width{1.5};
    double dedup{1e-8};
    double gradient_tol{1e-11};
    double degenerate_tol{1e-8};
    int max_iter{200};
};

namespace detail {

inline StationaryPoint classify(const ClassicalHamiltonian& h, ClassicalPoint x, double tol)
{
    StationaryPoint sp;
    sp.point = x;
    sp.energy = h.value(x);
    sp.hessian = h.hessian(x.q, x.p);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sp.hessian, Eigen::EigenvaluesOnly);
    const auto ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    sp.degenerate = (std::abs(ev[0]) < tol * scale) || (std::abs(ev[1]) < tol * scale);
    sp.index_r = (ev[0] < 0.0 ? 1 : 0) + (ev[1] < 0.0 ? 1 : 0);
    if (sp.degenerate) {
        sp.kind = PointKind::degenerate;
    } else {
        sp.kind = sp.index_r == 0 ? PointKind::minimum : sp.index_r == 1 ? PointKind::saddle : PointKind::maximum;
    }
    return sp;
}

// Singularity types relative to the lowest point in the set.
inline void assign_singularities(std::vector<StationaryPoint>& pts)
{
    if (pts.empty()) return;
    double emin = pts.front().energy;
    for (const auto& s : pts) emin = std::min(emin, s.energy);
    for (auto& s : pts) {
        if (s.energy <= emin + 1e-10 * (1.0 + std::abs(emin))) {
            s.singularity = Singularity::none;
        } else if (s.degenerate) {
            s.singularity = Singularity::unclassified;
        } else {
            s.singularity = s.index_r == 1 ? Singularity::log_divergence
                            : s.index_r == 0 ? Singularity::upward_step
                                             : Singularity::downward_step;
        }
    }
    std::sort(pts.begin(), pts.end(), [](const StationaryPoint& a, const StationaryPoint& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.point.q != b.point.q) return a.point.q < b.point.q;
        return a.point.p < b.point.p;
    });
}

// Damped Newton iteration on grad h = 0 with a backtracking line search on |grad h|^2.
inline std::optional<ClassicalPoint> newton_stationary(const ClassicalHamiltonian& h, ClassicalPoint x,
                                                       const StationarySearchOptions& opt)
{
    auto merit = [&](double q, double p) { return h.gradient(q, p).squaredNorm(); };
    for (int it = 0; it < opt.max_iter; ++it) {
        if (h.field(x.q, x.p) < 1e-12) return std::nullopt;
        const Eigen::Vector2d g = h.gradient(x.q, x.p);
        const double f0 = g.squaredNorm();
        if (std::sqrt(f0) < 0.1 * opt.gradient_tol) return x;
        const Eigen::Matrix2d H = h.hessian(x.q, x.p);
        Eigen::Vector2d step;
        if (std::abs(H.determinant()) > 1e-14) {
            step = -H.fullPivLu().solve(g);
        } else {
            step = -g;
        }
        double t = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls) {
            const double q = x.q + t * step[0];
            const double p = x.p + t * step[1];
            if (std::isfinite(q) && std::isfinite(p) && merit(q, p) < f0) {
                x = {q, p};
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break;
        if (t * step.norm() < 1e-16 * (1.0 + std::abs(x.q) + std::abs(x.p))) break;
    }
    if (h.gradient(x.q, x.p).norm() < opt.gradient_tol) return x;
    return std::nullopt;
}

}  // namespace detail

/// Every stationary point found from a seed grid plus 1D warm starts along p = 0.
inline std::vector<StationaryPoint> stationary_points_numeric(const ModelParams& prm, double m_prime,
                                                              StationarySearchOptions opt = {})
{
    const ClassicalHamiltonian h(prm, m_prime);
    const auto cc = critical_couplings(prm);
    // closed-form minima sit at |q| ~ lambda/(sqrt2 lambda_c); keep them well inside the window
    const double reach = std::abs(m_prime) * 2.0 * prm.N * (prm.lambda / cc.lambda_c + 2.0 * prm.mu / cc.lambda_c) /
                         std::sqrt(2.0) + std::sqrt(2.0) * prm.N * prm.mu * 2.0 / prm.omega;
    opt.q_half_width = std::max(opt.q_half_width, 1.5 * reach);
    opt.p_half_width = std::max(opt.p_half_width, 0.75 * reach);

    std::vector<ClassicalPoint> seeds;
    for (int i = 0; i < opt.seeds_q; ++i)
        for (int k = 0; k < opt.seeds_p; ++k)
            seeds.push_back({-opt.q_half_width + 2.0 * opt.q_half_width * i / (opt.seeds_q - 1),
                             -opt.p_half_width + 2.0 * opt.p_half_width * k / (opt.seeds_p - 1)});
    // warm starts: local extrema of h along the q and p axes
    const int scan = 2001;
    for (int axis = 0; axis < 2; ++axis) {
        const double w = axis == 0 ? opt.q_half_width : opt.p_half_width;
        double prev2 = 0.0, prev1 = 0.0;
        for (int i = 0; i < scan; ++i) {
            const double s = -w + 2.0 * w * i / (scan - 1);
            const double v = axis == 0 ? h.value(s, 0.0) : h.value(0.0, s);
            if (i >= 2 && (prev1 - prev2) * (v - prev1) <= 0.0) {
                const double sm = -w + 2.0 * w * (i - 1) / (scan - 1);
                seeds.push_back(axis == 0 ? ClassicalPoint{sm, 0.0} : ClassicalPoint{0.0, sm});
            }
            prev2 = prev1;
            prev1 = v;
        }
    }
    seeds.push_back({0.0, 0.0});

    std::vector<ClassicalPoint> roots;
    for (const auto& s : seeds) {
        auto r = detail::newton_stationary(h, s, opt);
        if (!r) continue;
        bool dup = false;
        for (const auto& e : roots)
            if (std::hypot(e.q - r->q, e.p - r->p) < opt.dedup) dup = true;
        if (!dup) roots.push_back(*r);
    }
    std::vector<StationaryPoint> out;
    for (const auto& r : roots) out.push_back(detail::classify(h, r, opt.degenerate_tol));
    detail::assign_singularities(out);
    return out;
}

/// Closed-form stationary points of h_{-j} for mu = 0: the origin, the pair (+-q1, 0)
/// for lambda > lambda_c and the pair (0, +-p2) for lambda > lambda_0.
inline std::vector<StationaryPoint> stationary_points_closed_form(const ModelParams& prm)
{
    if (prm.mu != 0.0) throw std::invalid_argument("closed forms require mu = 0");
    const ClassicalHamiltonian h(prm, -prm.j());
    const auto cc = critical_couplings(prm);
    std::vector<ClassicalPoint> pts{{0.0, 0.0}};
    const double x = prm.lambda / cc.lambda_c;
    if (x > 1.0) {
        const double q1 = std::sqrt(0.5 * (x * x - 1.0 / (x * x)));
        pts.push_back({-q1, 0.0});
        pts.push_back({q1, 0.0});
    }
    const double y = prm.lambda / cc.lambda_0;
    if (y > 1.0) {
        const double p2 = std::sqrt(0.5 * (y * y - 1.0 / (y * y)));
        pts.push_back({0.0, -p2});
        pts.push_back({0.0, p2});
    }
    std::vector<StationaryPoint> out;
    for (const auto& r : pts) out.push_back(detail::classify(h, r, 1e-10));
    detail::assign_singularities(out);
    return out;
}

inline std::vector<StationaryPoint> stationary_points(const ModelParams& prm, double m_prime,
                                                      const StationarySearchOptions& opt = {})
{
    if (prm.mu == 0.0 && m_prime == -prm.j()) return stationary_points_closed_form(prm);
    return stationary_points_numeric(prm, m_prime, opt);
}

/// Lowest stationary point (the classical ground state of the m' branch).
inline StationaryPoint global_minimum(const ModelParams& prm, double m_prime)
{
    auto pts = stationary_points(prm, m_prime);
    if (pts.empty()) throw std::runtime_error("no stationary point found");
    return pts.front();
}

/// Eigenvalues of the linearized flow d(q,p)/dt = [[k_qp, k_pp], [-k_qq, -k_pq]] (q,p) at the origin.
inline std::array<std::complex<double>, 2> linearized_flow(const ModelParams& prm, double m_prime)
{
    if (prm.mu != 0.0 && prm.gamma != 1.0) throw std::domain_error("vacuum not a fixed point");
    const Eigen::Matrix2d k = hessian_at(prm, m_prime, {0.0, 0.0});
    // lambda^2 = k_qp^2 - k_qq k_pp
    const std::complex<double> s = std::sqrt(std::complex<double>(k(0, 1) * k(1, 0) - k(0, 0) * k(1, 1), 0.0));
    return {-s, s};
}

enum class VacuumPhaseLabel { N, S0, S1, S2 };

inline const char* to_string(VacuumPhaseLabel l)
{
    switch (l) {
    case VacuumPhaseLabel::N: return "N";
    case VacuumPhaseLabel::S0: return "S0";
    case VacuumPhaseLabel::S1: return "S1";
    default: return "S2";
    }
}

struct VacuumPhase {
    VacuumPhaseLabel label;
    double lambda_c;
    double lambda_0;
    std::optional<double> lambda_c_prime;
};

namespace detail {

// Energy of the lowest minimum away from the origin, if any.
inline std::optional<double> nonvacuum_minimum(const ModelParams& prm)
{
    auto pts = stationary_points_numeric(prm, -prm.j());
    std::optional<double> best;
    for (const auto& s : pts) {
        if (std::hypot(s.point.q, s.point.p) < 1e-7) continue;
        if (s.kind != PointKind::minimum && s.kind != PointKind::degenerate) continue;
        if (s.kind == PointKind::degenerate && s.index_r != 0) continue;
        if (!best || s.energy < *best) best = s.energy;
    }
    return best;
}

// > 0 while the vacuum is the global minimum.
inline double vacuum_gap(const ModelParams& prm)
{
    const auto e = nonvacuum_minimum(prm);
    if (!e) return 1.0;
    return *e - classical_hamiltonian(prm, -prm.j(), {0.0, 0.0});
}

}  // namespace detail

/// First-order ground-state transition point lambda'_c for gamma = 1, 0 < mu < 1/(2N):
/// the coupling where a non-vacuum minimum drops below the vacuum.
inline double first_order_critical(ModelParams prm, double tol = 1e-7)
{
    const double mu_max = 1.0 / (2.0 * prm.N) * prm.omega;
    if (prm.gamma != 1.0 || !(prm.mu > 0.0) || !(prm.mu < mu_max))
        throw std::domain_error("first-order transition requires gamma = 1 and 0 < mu < w/2N");
    const double lc = critical_couplings(prm).lambda_c;
    double lo = 1e-6 * lc;
    double hi = lc;
    prm.lambda = lo;
    const double glo = detail::vacuum_gap(prm);
    prm.lambda = hi;
    const double ghi = detail::vacuum_gap(prm);
    if (!(glo > 0.0) || !(ghi < 0.0)) throw std::runtime_error("first_order_critical: bracketing failure");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        prm.lambda = mid;
        (detail::vacuum_gap(prm) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline VacuumPhase classify_vacuum_phase(const ModelParams& prm)
{
    if (prm.mu != 0.0 && prm.gamma != 1.0) throw std::domain_error("vacuum not a fixed point");
    const auto cc = critical_couplings(prm);
    VacuumPhase out{VacuumPhaseLabel::N, cc.lambda_c, cc.lambda_0, std::nullopt};
    double lcp = cc.lambda_c;
    if (prm.mu > 0.0) {
        const double mu_max = prm.omega / (2.0 * prm.N);
        lcp = prm.mu < mu_max ? first_order_critical(prm) : 0.0;
        out.lambda_c_prime = lcp;
    }
    if (prm.lambda > cc.lambda_0) {
        out.label = VacuumPhaseLabel::S2;
    } else if (prm.lambda > cc.lambda_c) {
        out.label = VacuumPhaseLabel::S1;
    } else if (prm.mu > 0.0 && prm.lambda > lcp) {
        out.label = VacuumPhaseLabel::S0;
    }
    return out;
}

struct LevelDensityOptions {
    double diff_step{0.0};  // 0: half the smallest grid spacing, capped at 1e-3
    double rel_tol{1e-12};
    int scan_points{4001};
};

/// Phase-space area {h_{m'} <= eps}, integrated over q of the exact p-chord.
inline double phase_space_area(const ModelParams& prm, double m_prime, double eps, const LevelDensityOptions& opt = {})
{
    const ClassicalHamiltonian h(prm, m_prime);
    const double Q = h.q_bound(eps);
    if (Q <= 0.0) return 0.0;
    auto f = [&](double q) { return h.chord(q, eps); };

    // segment the q-axis where the chord topology changes (empty / filled / annular)
    auto state = [&](double q) {
        const double L = f(q);
        if (L <= 0.0) return 0;
        // annular when p = 0 lies outside the shell
        return h.value(q, 0.0) > eps ? 2 : 1;
    };
    const int n = opt.scan_points;
    std::vector<double> breaks{-Q};
    int prev = state(-Q);
    double qprev = -Q;
    for (int i = 1; i < n; ++i) {
        const double q = -Q + 2.0 * Q * i / (n - 1);
        const int st = state(q);
        if (st != prev) {
            double a = qprev, b = q;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (a + b);
                (state(mid) == prev ? a : b) = mid;
            }
            breaks.push_back(0.5 * (a + b));
        }
        prev = st;
        qprev = q;
    }
    breaks.push_back(Q);

    double area = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        if (b <= a) continue;
        if (f(0.5 * (a + b)) <= 0.0) continue;
        // q = a + (b - a)(1 - cos t)/2 removes the square-root behaviour at both ends
        const double half = 0.5 * (b - a);
        auto g = [&](double t) { return f(a + half * (1.0 - std::cos(t))) * half * std::sin(t); };
        area += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, M_PI, 15, opt.rel_tol);
    }
    return area;
}

/// Semiclassical level density rho(eps) = (1/2pi) dA/deps by central differences of the exact area.
inline std::vector<double> semiclassical_level_density(const ModelParams& prm, double m_prime,
                                                       const std::vector<double>& eps_grid,
                                                       LevelDensityOptions opt = {})
{
    if (!std::is_sorted(eps_grid.begin(), eps_grid.end()))
        throw std::invalid_argument("eps_grid must be sorted");
    double step = opt.diff_step;
    if (step <= 0.0) {
        step = 1e-3;
        for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i)
            if (eps_grid[i + 1] > eps_grid[i]) step = std::min(step, 0.5 * (eps_grid[i + 1] - eps_grid[i]));
    }
    std::vector<double> out;
    out.reserve(eps_grid.size());
    for (double e : eps_grid) {
        const double lo = phase_space_area(prm, m_prime, e - step, opt);
        const double hi = phase_space_area(prm, m_prime, e + step, opt);
        if (hi < lo - 1e-9 * (1.0 + std::abs(hi)))
            throw std::runtime_error("phase-space area not monotone at eps = " + std::to_string(e));
        out.push_back((hi - lo) / (2.0 * step) / (2.0 * M_PI));
    }
    return out;
}

struct EsqptPoint {
    double lambda;
    double energy;
    Singularity singularity;
    int index_r;
    ClassicalPoint point;
};

/// Energies and types of all stationary points above the global minimum, per lambda.
inline std::vector<EsqptPoint> esqpt_critical_lines(ModelParams prm, const std::vector<double>& lambda_grid,
                                                    double m_prime)
{
    std::vector<EsqptPoint> out;
    for (double lam : lambda_grid) {
        prm.lambda = lam;
        for (const auto& s : stationary_points(prm, m_prime)) {
            if (s.singularity == Singularity::none) continue;
            out.push_back({lam, s.energy, s.singularity, s.index_r, s.point});
        }
    }
    return out;
}

/// Largest radius sqrt(q^2 + p^2) reached by the shell {h_{m'} <= eps}.
inline double classical_extent(const ModelParams& prm, double m_prime, double eps)
{
    const ClassicalHamiltonian h(prm, m_prime);
    const double Q = std::max(1.0, h.q_bound(eps)) * 1.5;
    double rmax = 0.0;
    const int rays = 72;
    const int steps = 600;
    for (int a = 0; a < rays; ++a) {
        const double th = M_PI * a / rays;
        for (int s = steps; s >= 0; --s) {
            const double r = Q * s / steps;
            if (h.value(r * std::cos(th), r * std::sin(th)) <= eps ||
                h.value(-r * std::cos(th), -r * std::sin(th)) <= eps) {
                rmax = std::max(rmax, r);
                break;
            }
        }
    }
    return rmax;
}

}  // namespace erabi
