// quench.hpp - quench protocol, survival probabilities and infinite-time averages

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "erabi/basis.hpp"
#include "erabi/operators.hpp"
#include "erabi/params.hpp"
#include "erabi/spectrum.hpp"

namespace erabi {

struct QuenchState {
    Eigen::VectorXcd c;  // amplitudes in HilbertBasis order
    double t{0.0};
};

/// |m = -j> (x) |n = 0>
inline QuenchState initial_state(const HilbertBasis& basis)
{
    QuenchState s;
    s.c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dimension()));
    s.c[static_cast<Eigen::Index>(basis.index_of(0, 0))] = 1.0;
    return s;
}

/// <psi|A|psi> for either storage phase of A.
inline double expectation(const QuenchState& st, const OperatorMatrix& obs)
{
    const Eigen::VectorXd re = st.c.real(), im = st.c.imag();
    const Eigen::VectorXd ar = obs.matrix * re, ai = obs.matrix * im;
    // <c|S|c> = (re - i im).(ar + i ai)
    const Complex v(re.dot(ar) + im.dot(ai), re.dot(ai) - im.dot(ar));
    return obs.phase == Phase::imaginary ? (Complex(0.0, -1.0) * v).real() : v.real();
}

/// Propagator built once from an eigendecomposition and an initial state.
class Propagator {
public:
    Propagator(const EigenDecomposition& eigs, const QuenchState& s0)
        : eigs_(&eigs), s0_(s0), a_(eigs.overlaps(s0.c))
    {
    }

    const Eigen::VectorXcd& amplitudes() const { return a_; }

    QuenchState at(double t) const
    {
        const double dt = t - s0_.t;
        Eigen::VectorXcd ct(a_.size());
        for (Eigen::Index i = 0; i < a_.size(); ++i)
            ct[i] = a_[i] * std::polar(1.0, -eigs_->energy(i) * dt);
        return {eigs_->synthesize(ct), t};
    }

    /// |<psi(0)|psi(t)>|^2 = |sum_i p_i e^{-i E_i t}|^2
    double survival(double t) const
    {
        Complex s = 0.0;
        for (Eigen::Index i = 0; i < a_.size(); ++i)
            s += std::norm(a_[i]) * std::polar(1.0, -eigs_->energy(i) * (t - s0_.t));
        return std::norm(s);
    }

private:
    const EigenDecomposition* eigs_;
    QuenchState s0_;
    Eigen::VectorXcd a_;
};

/// c(t) = V e^{-i Lambda t} V^T c(0)
inline std::vector<QuenchState> evolve(const EigenDecomposition& eigs, const QuenchState& s0,
                                       const std::vector<double>& times)
{
    const Propagator prop(eigs, s0);
    std::vector<QuenchState> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(prop.at(t));
    return out;
}

inline double survival_probability(const QuenchState& s0, const QuenchState& st)
{
    if (s0.c.size() != st.c.size()) throw std::invalid_argument("states live in different bases");
    return std::norm(s0.c.dot(st.c));
}

/// |sum_i p_i e^{-i E_i t}|^2 from a strength function.
inline double survival_probability(const StrengthFunction& sf, double t)
{
    Complex s = 0.0;
    for (Eigen::Index i = 0; i < sf.weights.size(); ++i) s += sf.weights[i] * std::polar(1.0, -sf.energies[i] * t);
    return std::norm(s);
}

// ---------------------------------------------------------------------------------------------
// Reduced density operators

enum class Subsystem { qubit, field };

struct ReducedDensity {
    Subsystem subsystem;
    Eigen::MatrixXcd rho;
};

/// rho_q[m,m'] = sum_n c_mn c*_m'n ; rho_b[n,n'] = sum_m c_mn c*_mn'
inline ReducedDensity reduced_density(const QuenchState& st, const HilbertBasis& basis, Subsystem which)
{
    const auto ns = static_cast<Eigen::Index>(basis.spin_dim());
    const auto nf = static_cast<Eigen::Index>(basis.fock_dim());
    // column k of C holds the Fock amplitudes of qubit level k
    const Eigen::Map<const Eigen::MatrixXcd> C(st.c.data(), nf, ns);
    ReducedDensity out{which, {}};
    if (which == Subsystem::qubit) {
        out.rho = (C.transpose() * C.conjugate());
    } else {
        out.rho = C * C.adjoint();
    }
    return out;
}

/// Factors phi_k (columns) with rho_b = sum_k phi_k phi_k^dagger, one per qubit level.
inline Eigen::MatrixXcd field_factors(const QuenchState& st, const HilbertBasis& basis)
{
    return Eigen::Map<const Eigen::MatrixXcd>(st.c.data(), static_cast<Eigen::Index>(basis.fock_dim()),
                                              static_cast<Eigen::Index>(basis.spin_dim()));
}

struct SubsystemSurvival {
    double qubit;  // <m=-j| rho_q |m=-j>
    double field;  // <n=0| rho_b |n=0>
};

inline SubsystemSurvival subsystem_survivals(const QuenchState& st, const HilbertBasis& basis)
{
    SubsystemSurvival s{0.0, 0.0};
    for (int n = 0; n <= basis.n_max(); ++n) s.qubit += std::norm(st.c[static_cast<Eigen::Index>(basis.index_of(0, n))]);
    for (int k = 0; k <= basis.two_j(); ++k) s.field += std::norm(st.c[static_cast<Eigen::Index>(basis.index_of(k, 0))]);
    return s;
}

struct BlochPurity {
    double jx, jy, jz;
    double purity;  // |Bloch vector| = 2|J|
};

inline BlochPurity bloch_and_purity(const QuenchState& st, const HilbertBasis& basis)
{
    if (basis.two_j() != 1) throw std::invalid_argument("Bloch parametrization requires N=1");
    const auto rq = reduced_density(st, basis, Subsystem::qubit).rho;
    // rho = 1/2 + J.sigma with index 0 = m=-1/2
    BlochPurity b{};
    b.jx = rq(0, 1).real();
    b.jy = rq(0, 1).imag();
    b.jz = 0.5 * (rq(1, 1).real() - rq(0, 0).real());
    b.purity = 2.0 * std::sqrt(b.jx * b.jx + b.jy * b.jy + b.jz * b.jz);
    return b;
}

/// Normalized purity sqrt((d Tr rho^2 - 1)/(d - 1)) of a d-level reduced state; equals the
/// Bloch-vector length for a qubit.
inline double normalized_purity(const ReducedDensity& r)
{
    const double d = static_cast<double>(r.rho.rows());
    if (d < 2) return 1.0;
    const double tr2 = r.rho.cwiseAbs2().sum();
    return std::sqrt(std::max(0.0, (d * tr2 - 1.0) / (d - 1.0)));
}

// ---------------------------------------------------------------------------------------------
// Infinite-time averages

/// Ranges [begin, end) of eigenvalue indices whose consecutive gaps are below tol * span.
inline std::vector<std::pair<Eigen::Index, Eigen::Index>> degenerate_clusters(const Eigen::VectorXd& energies,
                                                                              double rel_tol = 1e-9)
{
    std::vector<std::pair<Eigen::Index, Eigen::Index>> out;
    const Eigen::Index n = energies.size();
    if (n == 0) return out;
    const double tol = rel_tol * std::max(energies[n - 1] - energies[0], 1e-300);
    Eigen::Index b = 0;
    for (Eigen::Index i = 1; i <= n; ++i) {
        if (i == n || energies[i] - energies[i - 1] >= tol) {
            out.emplace_back(b, i);
            b = i;
        }
    }
    return out;
}

struct NamedObservable {
    std::string name;
    OperatorMatrix op;
};

struct InfiniteTimeAverages {
    double survival{0.0};  // sum over clusters of p_c^2
    std::map<std::string, double> observables;
};

/// Spectral infinite-time averages: P = sum_c p_c^2, A = sum_c <phi_c|A|phi_c> with
/// phi_c the projection of the initial state onto degenerate cluster c.
inline InfiniteTimeAverages infinite_time_averages(const EigenDecomposition& eigs, const QuenchState& s0,
                                                   const std::vector<NamedObservable>& obs, double rel_tol = 1e-9)
{
    const Eigen::VectorXcd a = eigs.overlaps(s0.c);
    InfiniteTimeAverages out;
    for (const auto& o : obs) out.observables[o.name] = 0.0;
    for (const auto& [b, e] : degenerate_clusters(eigs.energies(), rel_tol)) {
        double pc = 0.0;
        for (Eigen::Index i = b; i < e; ++i) pc += std::norm(a[i]);
        out.survival += pc * pc;
        if (pc == 0.0 || obs.empty()) continue;
        QuenchState phi;
        phi.c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(eigs.basis().dimension()));
        for (Eigen::Index i = b; i < e; ++i) {
            if (a[i] == Complex(0.0)) continue;
            phi.c += a[i] * eigs.vector(i).cast<Complex>();
        }
        for (const auto& o : obs) out.observables[o.name] += expectation(phi, o.op);
    }
    return out;
}

/// Average weight above 0.9 n_max of the time-averaged state, sum_i p_i sum_{n > 0.9 n_max} V_in^2.
inline double averaged_tail_weight(const EigenDecomposition& eigs, const QuenchState& s0, double fraction = 0.9)
{
    const Eigen::VectorXcd a = eigs.overlaps(s0.c);
    const HilbertBasis& basis = eigs.basis();
    const double n_cut = fraction * basis.n_max();
    double tail = 0.0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        const double p = std::norm(a[i]);
        if (p == 0.0) continue;
        const auto [blk_id, col] = eigs.locate(i);
        const auto& blk = eigs.blocks()[static_cast<std::size_t>(blk_id)];
        double w = 0.0;
        for (std::size_t r = 0; r < blk.indices.size(); ++r)
            if (basis.n_of(blk.indices[r]) > n_cut) w += blk.vectors(static_cast<Eigen::Index>(r), col) * blk.vectors(static_cast<Eigen::Index>(r), col);
        tail += p * w;
    }
    return tail;
}

// ---------------------------------------------------------------------------------------------
// Converged quench setup

struct QuenchSetup {
    ModelParams params;
    HilbertBasis basis{1, 0};
    EigenDecomposition eigs{HilbertBasis(1, 0), {}};
    double ground_change{0.0};  // scaled ground-energy change under cutoff growth
    double tail_weight{0.0};
};

/// Diagonalizes at a cutoff that passes the policy's ground-energy and tail-weight tests.
inline QuenchSetup prepare_quench(const ModelParams& p, const CutoffPolicy& policy = {})
{
    const bool blocked = p.mu == 0.0;
    const double scale = p.size() * p.omega;
    int n = policy.fixed >= 0 ? policy.fixed : quench_cutoff_estimate(p, policy);
    while (true) {
        HilbertBasis basis(p.two_j(), n);
        QuenchSetup s{p, basis, diagonalize(p, basis, blocked), 0.0, 0.0};
        s.tail_weight = averaged_tail_weight(s.eigs, initial_state(basis));
        if (policy.fixed >= 0) return s;
        const int next = static_cast<int>(std::ceil(policy.growth * n));
        s.ground_change = std::abs(lowest_energy(p, HilbertBasis(p.two_j(), next)) - s.eigs.energy(0)) / scale;
        if (s.ground_change < policy.energy_tol && s.tail_weight < policy.tail_tol) return s;
        if (next > policy.n_cap) throw SolverError("quench cutoff did not converge below n_cap");
        n = next;
    }
}

// ---------------------------------------------------------------------------------------------
// Records

struct QuenchAverages {
    double P{0}, Pq{0}, Pb{0};
    double Jx{0}, Jy{0}, Jz{0};
    double n{0}, q{0}, p{0};
};

struct QuenchRecord {
    std::vector<double> times;
    std::vector<double> P, Pq, Pb;
    std::vector<double> Jx, Jy, Jz;
    std::vector<double> n, q, p;
    std::vector<double> purity;
    QuenchAverages averages;
    int n_max{0};
    double residual{0.0};
    double tail_weight{0.0};
};

/// Observables recorded along a quench: J_x, J_y, J_z, n, q, p and the subsystem projectors.
inline std::vector<NamedObservable> quench_observables(const HilbertBasis& basis, const ModelParams& p)
{
    return {
        {"Jx", quasispin_operator(basis, SpinComponent::x)},
        {"Jy", quasispin_operator(basis, SpinComponent::y)},
        {"Jz", quasispin_operator(basis, SpinComponent::z)},
        {"n", boson_operator(basis, BosonKind::number)},
        {"q", boson_operator(basis, BosonKind::q, p.size())},
        {"p", boson_operator(basis, BosonKind::p, p.size())},
        {"Pq", qubit_projector(basis, 0)},
        {"Pb", fock_projector(basis, 0)},
    };
}

inline QuenchAverages quench_averages(const QuenchSetup& s)
{
    const auto avg = infinite_time_averages(s.eigs, initial_state(s.basis), quench_observables(s.basis, s.params));
    const auto& o = avg.observables;
    return {avg.survival, o.at("Pq"), o.at("Pb"), o.at("Jx"), o.at("Jy"), o.at("Jz"), o.at("n"), o.at("q"), o.at("p")};
}

inline QuenchRecord quench_record(const QuenchSetup& s, const std::vector<double>& times)
{
    QuenchRecord r;
    r.times = times;
    r.n_max = s.basis.n_max();
    r.residual = s.eigs.residual();
    r.tail_weight = s.tail_weight;
    const auto s0 = initial_state(s.basis);
    const Propagator prop(s.eigs, s0);
    const auto jx = quasispin_operator(s.basis, SpinComponent::x);
    const auto jy = quasispin_operator(s.basis, SpinComponent::y);
    const auto jz = quasispin_operator(s.basis, SpinComponent::z);
    const auto nn = boson_operator(s.basis, BosonKind::number);
    const auto qq = boson_operator(s.basis, BosonKind::q, s.params.size());
    const auto pp = boson_operator(s.basis, BosonKind::p, s.params.size());
    for (double t : times) {
        const auto st = prop.at(t);
        r.P.push_back(survival_probability(s0, st));
        const auto sub = subsystem_survivals(st, s.basis);
        r.Pq.push_back(sub.qubit);
        r.Pb.push_back(sub.field);
        r.Jx.push_back(expectation(st, jx));
        r.Jy.push_back(expectation(st, jy));
        r.Jz.push_back(expectation(st, jz));
        r.n.push_back(expectation(st, nn));
        r.q.push_back(expectation(st, qq));
        r.p.push_back(expectation(st, pp));
        r.purity.push_back(normalized_purity(reduced_density(st, s.basis, Subsystem::qubit)));
    }
    r.averages = quench_averages(s);
    return r;
}

// ---------------------------------------------------------------------------------------------
// Protocol variants

/// Stage-1 Hamiltonian (delta = +1) leaves the initial state frozen; returns the stage-2 start
/// state together with the stage-1 overlap probability.
struct TwoStepResult {
    QuenchState state;
    double stage1_overlap;
};

inline TwoStepResult two_step_quench(const ModelParams& target, const HilbertBasis& basis)
{
    if (target.mu != 0.0) throw std::invalid_argument("two-step protocol requires mu = 0");
    if (target.delta == 1.0) throw std::invalid_argument("target delta = 1 has no quench dynamics");
    ModelParams stage1 = target;
    stage1.delta = 1.0;
    const auto s0 = initial_state(basis);
    const auto eigs = diagonalize(stage1, basis, true);
    const Propagator prop(eigs, s0);
    const auto s1 = prop.at(1.0);
    return {QuenchState{s0.c, 0.0}, survival_probability(s0, s1)};
}

struct ScalingPoint {
    double R;
    double P;
    double Pq;
    int n_max;
};

inline std::vector<ScalingPoint> size_scaling_study(ModelParams p, const std::vector<double>& R_list,
                                                    const CutoffPolicy& policy = {})
{
    if (!std::is_sorted(R_list.begin(), R_list.end())) throw std::invalid_argument("R list must be ascending");
    std::vector<ScalingPoint> out;
    for (double R : R_list) {
        p.R = R;
        const auto s = prepare_quench(p, policy);
        const auto avg = infinite_time_averages(s.eigs, initial_state(s.basis), {{"Pq", qubit_projector(s.basis, 0)}});
        out.push_back({R, avg.survival, avg.observables.at("Pq"), s.basis.n_max()});
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Time grids

inline std::vector<double> linear_time_grid(double t0, double t1, std::size_t count)
{
    if (count < 2) return {t0};
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i) t[i] = t0 + (t1 - t0) * double(i) / double(count - 1);
    return t;
}

inline std::vector<double> log_time_grid(double t0 = 0.1, double t1 = 1e5, std::size_t count = 400)
{
    if (!(t0 > 0.0 && t1 > t0)) throw std::invalid_argument("log grid needs 0 < t0 < t1");
    if (count < 2) return {t0};
    std::vector<double> t(count);
    const double a = std::log(t0), b = std::log(t1);
    for (std::size_t i = 0; i < count; ++i) t[i] = std::exp(a + (b - a) * double(i) / double(count - 1));
    return t;
}

/// Trapezoidal average of P(t) over [0, T] from a strength function, with the phase
/// factors advanced by repeated multiplication.
inline double time_averaged_survival(const StrengthFunction& sf, double T, double dt, double min_weight = 1e-14)
{
    const auto steps = std::max<long>(1, static_cast<long>(std::ceil(T / dt)));
    const double h = T / static_cast<double>(steps);
    std::vector<Complex> phase, step;
    std::vector<double> w;
    for (Eigen::Index i = 0; i < sf.weights.size(); ++i) {
        if (sf.weights[i] < min_weight) continue;
        w.push_back(sf.weights[i]);
        phase.emplace_back(1.0, 0.0);
        step.push_back(std::polar(1.0, -sf.energies[i] * h));
    }
    double acc = 0.0;
    for (long s = 0; s <= steps; ++s) {
        if (s > 0 && s % 1024 == 0) {
            // re-anchor the phases to avoid drift
            std::size_t k = 0;
            for (Eigen::Index i = 0; i < sf.weights.size(); ++i) {
                if (sf.weights[i] < min_weight) continue;
                phase[k++] = std::polar(1.0, -sf.energies[i] * h * static_cast<double>(s));
            }
        }
        Complex amp = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) amp += w[k] * phase[k];
        const double f = std::norm(amp);
        acc += (s == 0 || s == steps) ? 0.5 * f : f;
        for (std::size_t k = 0; k < w.size(); ++k) phase[k] *= step[k];
    }
    return acc * h / T;
}

}  // namespace erabi
