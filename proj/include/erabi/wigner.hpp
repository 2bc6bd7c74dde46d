// wigner.hpp - Wigner functions of the reduced field state

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "erabi/quench.hpp"

namespace erabi {

/// Normalized oscillator eigenfunctions psi_0..psi_n at x for effective Planck constant `scale`.
/// The upward recurrence carries a separate exponent so no intermediate under- or overflows.
inline Eigen::VectorXd oscillator_wavefunctions(int n, double x, double scale = 1.0)
{
    if (n < 0) throw std::invalid_argument("oscillator level must be non-negative");
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    const double s = x / std::sqrt(scale);
    const double norm = std::pow(M_PI * scale, -0.25);
    Eigen::VectorXd out(n + 1);
    double log_shift = -0.5 * s * s;
    double prev = 0.0;
    double cur = 1.0;
    out[0] = norm * std::exp(log_shift);
    for (int k = 0; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1.0)) * s * cur - std::sqrt(k / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > 1e150) {
            prev *= 1e-150;
            cur *= 1e-150;
            log_shift += 150.0 * std::log(10.0);
        }
        out[k + 1] = cur == 0.0 ? 0.0 : norm * std::copysign(std::exp(std::log(std::abs(cur)) + log_shift), cur);
    }
    return out;
}

inline double oscillator_wavefunction(int n, double x, double scale = 1.0)
{
    return oscillator_wavefunctions(n, x, scale)[n];
}

enum class WignerConvention { standard, scaled };

/// W sampled on a uniform grid; values(i, k) = W(x_axis[i], p_axis[k]).
struct WignerGrid {
    std::vector<double> x_axis;
    std::vector<double> p_axis;
    Eigen::MatrixXd values;
    WignerConvention convention{WignerConvention::standard};
    bool aliasing_warning{false};
    double size{1.0};  // NR used by the scaled convention

    double dx() const { return x_axis.size() > 1 ? x_axis[1] - x_axis[0] : 1.0; }
    double dp() const { return p_axis.size() > 1 ? p_axis[1] - p_axis[0] : 1.0; }

    /// Riemann sum of W over the grid.
    double integral() const { return values.sum() * dx() * dp(); }

    /// Marginal over p: density on x_axis.
    Eigen::VectorXd x_marginal() const { return values.rowwise().sum() * dp(); }
};

struct GridSpec {
    double x_min{-6.0}, x_max{6.0};
    int nx{201};
    double p_min{-6.0}, p_max{6.0};
    int np{201};
};

inline std::vector<double> uniform_axis(double a, double b, int n)
{
    if (n < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1.0);
    return v;
}

/// Highest Fock level carrying weight once the top tail below `tol` is dropped.
inline int effective_fock_extent(const Eigen::MatrixXcd& F, double tol = 1e-22)
{
    double tail = 0.0;
    for (Eigen::Index n = F.rows() - 1; n > 0; --n) {
        tail += F.row(n).squaredNorm();
        if (tail > tol) return static_cast<int>(n);
    }
    return 0;
}

/// Wigner function of rho_b = sum_k F_k F_k^dagger (columns of F are Fock-space factors),
/// in standard quadratures x = (b + b^+)/sqrt2:
///   W(x, p) = (1/pi) int dy <x+y|rho|x-y> e^{-2ipy}.
/// The y-integral is a trapezoid sum on a refined x lattice, exact to rounding for the
/// band-limited integrands produced by a finite Fock expansion.
inline WignerGrid wigner_from_factors(const Eigen::MatrixXcd& F, const GridSpec& spec)
{
    const int n_max = static_cast<int>(F.rows()) - 1;
    if (n_max < 0) throw std::invalid_argument("empty field state");
    WignerGrid g;
    g.x_axis = uniform_axis(spec.x_min, spec.x_max, spec.nx);
    g.p_axis = uniform_axis(spec.p_min, spec.p_max, spec.np);
    const double tail_start = 0.9 * n_max;
    double tail = 0.0;
    for (int n = 0; n <= n_max; ++n)
        if (n > tail_start) tail += F.row(n).squaredNorm();
    g.aliasing_warning = tail > 1e-6;
    const int n_eff = effective_fock_extent(F);
    if (n_eff < n_max) return wigner_from_factors(F.topRows(n_eff + 1), spec);

    // Support of the factors and the largest wavenumber they carry.
    const double turn = std::sqrt(2.0 * n_max + 1.0);
    const double support = turn + 8.0;
    const double k_max = turn + 2.0;
    const double p_abs = std::max(std::abs(spec.p_min), std::abs(spec.p_max));
    const double h_target = std::min(0.05, 2.0 * M_PI / (4.0 * k_max + 4.0 * p_abs + 8.0));
    const double dx = g.dx();
    const int sub = std::max(1, static_cast<int>(std::ceil(dx / h_target)));
    const double h = dx / sub;

    // lattice u_j = x_min + j h covering [-L, L]
    const double L = std::max({support, std::abs(spec.x_min), std::abs(spec.x_max)});
    const long j_lo = static_cast<long>(std::floor((-L - spec.x_min) / h));
    const long j_hi = static_cast<long>(std::ceil((L - spec.x_min) / h));
    const long nu = j_hi - j_lo + 1;
    Eigen::MatrixXcd phi(nu, F.cols());
    for (long j = 0; j < nu; ++j) {
        const double u = spec.x_min + static_cast<double>(j + j_lo) * h;
        const Eigen::VectorXd psi = oscillator_wavefunctions(n_max, u);
        phi.row(j) = psi.transpose().cast<Complex>() * F;
    }

    g.values.resize(spec.nx, spec.np);
    std::vector<Complex> corr;
    for (int i = 0; i < spec.nx; ++i) {
        const long c = static_cast<long>(i) * sub - j_lo;  // lattice row of x_i
        const long K = std::min(c, nu - 1 - c);
        corr.assign(static_cast<std::size_t>(std::max(K, 0L) + 1), Complex(0.0));
        for (long k = 0; k <= K; ++k) corr[static_cast<std::size_t>(k)] = phi.row(c + k).dot(phi.row(c - k));
        // dot conjugates its first argument: corr_k = sum_f conj(phi(x+kh)) phi(x-kh)
        for (int l = 0; l < spec.np; ++l) {
            const double p = g.p_axis[static_cast<std::size_t>(l)];
            const Complex step = std::polar(1.0, -2.0 * p * h);
            Complex z = 1.0;
            double acc = corr.empty() ? 0.0 : corr[0].real();
            for (long k = 1; k <= K; ++k) {
                z *= step;
                acc += 2.0 * (std::conj(corr[static_cast<std::size_t>(k)]) * z).real();
            }
            g.values(i, l) = acc * h / M_PI;
        }
    }
    return g;
}

/// Factors sqrt(w_k) v_k of a Hermitian density matrix.
inline Eigen::MatrixXcd density_factors(const Eigen::MatrixXcd& rho, double cutoff = 1e-14)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    if (es.info() != Eigen::Success) throw SolverError("density matrix eigensolver failed");
    std::vector<Eigen::Index> keep;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()[k] > cutoff) keep.push_back(k);
    Eigen::MatrixXcd F(rho.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        F.col(static_cast<Eigen::Index>(c)) = std::sqrt(es.eigenvalues()[keep[c]]) * es.eigenvectors().col(keep[c]);
    return F;
}

inline WignerGrid wigner(const ReducedDensity& rho_b, const GridSpec& spec)
{
    if (rho_b.subsystem != Subsystem::field) throw std::invalid_argument("Wigner function needs the field density");
    if (std::abs(rho_b.rho.trace().real() - 1.0) > 1e-8) throw std::invalid_argument("density matrix trace must be 1");
    return wigner_from_factors(density_factors(rho_b.rho), spec);
}

/// Wigner function of the field part of a global pure state (factors are the qubit-level slices).
inline WignerGrid wigner(const QuenchState& st, const HilbertBasis& basis, const GridSpec& spec)
{
    return wigner_from_factors(field_factors(st, basis), spec);
}

/// Tr(rho1 rho2) = 2 pi int int W1 W2 dx dp (standard), 2 pi / NR times the same (scaled).
inline double wigner_overlap(const WignerGrid& a, const WignerGrid& b)
{
    if (a.convention != b.convention) throw std::invalid_argument("Wigner grids use different conventions");
    if (a.x_axis != b.x_axis || a.p_axis != b.p_axis) throw std::invalid_argument("Wigner grids differ");
    if (a.size != b.size) throw std::invalid_argument("Wigner grids use different size parameters");
    const double pref = a.convention == WignerConvention::standard ? 2.0 * M_PI : 2.0 * M_PI / a.size;
    return pref * a.values.cwiseProduct(b.values).sum() * a.dx() * a.dp();
}

/// Axes divided by sqrt(NR) and values multiplied by NR, so the integral stays 1.
inline WignerGrid to_scaled_quadratures(WignerGrid g, double size)
{
    if (g.convention == WignerConvention::scaled) return g;
    const double s = std::sqrt(size);
    for (double& x : g.x_axis) x /= s;
    for (double& p : g.p_axis) p /= s;
    g.values *= size;
    g.size = size;
    g.convention = WignerConvention::scaled;
    return g;
}

/// Square grid centred on the origin that covers the state's classical support with a step
/// fine enough for exact Riemann sums; the vacuum gets 201 x 201 points over [-6, 6].
inline GridSpec default_grid(const Eigen::MatrixXcd& F)
{
    const double S = std::sqrt(2.0 * effective_fock_extent(F) + 1.0);
    const double L = S + 5.0;
    const double step = std::min(0.06, 0.75 * M_PI / L);
    const int half = static_cast<int>(std::ceil(L / step));
    return {-half * step, half * step, 2 * half + 1, -half * step, half * step, 2 * half + 1};
}

struct WignerSnapshot {
    double t;
    std::string tag;
    WignerGrid grid;
};

struct SnapshotTimes {
    double early;
    double dip;
    double revival;
};

/// Dip: minimum of the first excursion of P(t) below the midpoint between 1 and its scan
/// minimum. Revival: maximum of the next excursion above the midpoint between the dip and 1.
/// The early instant is half the dip time. Small fast ripples never trigger either event.
inline SnapshotTimes locate_snapshot_times(const Propagator& prop, double t_max = 50.0, int samples = 5001)
{
    std::vector<double> P(static_cast<std::size_t>(samples));
    const double dt = t_max / (samples - 1);
    for (int i = 0; i < samples; ++i) P[static_cast<std::size_t>(i)] = prop.survival(i * dt);
    const double p_min = *std::min_element(P.begin(), P.end());
    const double low = 0.5 * (1.0 + p_min);
    std::size_t i = 0;
    while (i < P.size() && P[i] >= low) ++i;
    if (i == P.size()) return {0.25 * t_max, 0.5 * t_max, t_max};
    std::size_t dip = i;
    for (; i < P.size() && P[i] < low; ++i)
        if (P[i] < P[dip]) dip = i;
    const double high = 0.5 * (1.0 + P[dip]);
    while (i < P.size() && P[i] <= high) ++i;
    std::size_t rev = std::min(i, P.size() - 1);
    for (; i < P.size() && P[i] > high; ++i)
        if (P[i] > P[rev]) rev = i;
    return {0.5 * static_cast<double>(dip) * dt, static_cast<double>(dip) * dt, static_cast<double>(rev) * dt};
}

inline std::vector<WignerSnapshot> wigner_snapshots(const QuenchSetup& s, std::vector<double> times = {},
                                                    const std::optional<GridSpec>& grid = std::nullopt)
{
    const auto s0 = initial_state(s.basis);
    const Propagator prop(s.eigs, s0);
    std::vector<std::string> tags;
    if (times.empty()) {
        const auto st = locate_snapshot_times(prop);
        times = {0.0, st.early, st.dip, st.revival};
        tags = {"initial", "early", "dip", "revival"};
    } else {
        tags.assign(times.size(), "requested");
    }
    // one common grid so snapshots can be overlapped with each other
    std::vector<Eigen::MatrixXcd> factors;
    GridSpec spec = grid ? *grid : default_grid(field_factors(s0, s.basis));
    for (double t : times) {
        factors.push_back(field_factors(prop.at(t), s.basis));
        const GridSpec g = default_grid(factors.back());
        if (!grid && g.nx > spec.nx) spec = g;
    }
    std::vector<WignerSnapshot> out;
    for (std::size_t i = 0; i < times.size(); ++i) out.push_back({times[i], tags[i], wigner_from_factors(factors[i], spec)});
    return out;
}

}  // namespace erabi
