// spectrum.hpp - diagonalization, strength functions and level densities

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "erabi/basis.hpp"
#include "erabi/eigensolver.hpp"
#include "erabi/hamiltonian.hpp"
#include "erabi/operators.hpp"
#include "erabi/params.hpp"
#include "erabi/semiclassics.hpp"

namespace erabi {

/// Eigenpairs of one invariant sector. Rows of `vectors` follow `indices`
/// (full-basis indices in n-major order, which makes the sector matrix banded).
struct EigenBlock {
    int label{0};  // parity +1 / -1, or 0 for the unblocked problem
    std::vector<std::size_t> indices;
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
};

class EigenDecomposition {
public:
    EigenDecomposition(HilbertBasis basis, std::vector<EigenBlock> blocks, ModelParams params = {})
        : params_(params), basis_(basis), blocks_(std::move(blocks))
    {
        const std::size_t dim = basis_.dimension();
        block_of_.assign(dim, -1);
        row_of_.assign(dim, -1);
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            for (std::size_t r = 0; r < blocks_[b].indices.size(); ++r) {
                block_of_[blocks_[b].indices[r]] = static_cast<int>(b);
                row_of_[blocks_[b].indices[r]] = static_cast<Eigen::Index>(r);
            }
            for (Eigen::Index k = 0; k < blocks_[b].energies.size(); ++k)
                order_.push_back({static_cast<int>(b), k});
        }
        std::stable_sort(order_.begin(), order_.end(), [&](const Ref& x, const Ref& y) {
            return blocks_[static_cast<std::size_t>(x.block)].energies[x.local] <
                   blocks_[static_cast<std::size_t>(y.block)].energies[y.local];
        });
        energies_.resize(static_cast<Eigen::Index>(order_.size()));
        for (std::size_t i = 0; i < order_.size(); ++i) energies_[static_cast<Eigen::Index>(i)] = raw_energy(i);
    }

    const ModelParams& params() const { return params_; }
    const HilbertBasis& basis() const { return basis_; }
    const std::vector<EigenBlock>& blocks() const { return blocks_; }
    Eigen::Index size() const { return energies_.size(); }
    const Eigen::VectorXd& energies() const { return energies_; }
    double energy(Eigen::Index i) const { return energies_[i]; }
    int label(Eigen::Index i) const { return blocks_[static_cast<std::size_t>(order_[static_cast<std::size_t>(i)].block)].label; }

    /// Position of eigenvalue i inside its block.
    std::pair<int, Eigen::Index> locate(Eigen::Index i) const
    {
        const auto& r = order_[static_cast<std::size_t>(i)];
        return {r.block, r.local};
    }

    /// <basis index | E_i>
    double component(Eigen::Index i, std::size_t basis_index) const
    {
        const auto& r = order_[static_cast<std::size_t>(i)];
        if (block_of_[basis_index] != r.block) return 0.0;
        return blocks_[static_cast<std::size_t>(r.block)].vectors(row_of_[basis_index], r.local);
    }

    /// Eigenvector i in full HilbertBasis coordinates.
    Eigen::VectorXd vector(Eigen::Index i) const
    {
        const auto& r = order_[static_cast<std::size_t>(i)];
        const auto& blk = blocks_[static_cast<std::size_t>(r.block)];
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_.dimension()));
        for (std::size_t k = 0; k < blk.indices.size(); ++k)
            v[static_cast<Eigen::Index>(blk.indices[k])] = blk.vectors(static_cast<Eigen::Index>(k), r.local);
        return v;
    }

    /// a_i = <E_i | psi>, in ascending-energy order.
    Eigen::VectorXcd overlaps(const Eigen::VectorXcd& psi) const
    {
        Eigen::VectorXcd out(size());
        std::vector<Eigen::VectorXcd> per_block;
        for (const auto& blk : blocks_) {
            const auto nb = static_cast<Eigen::Index>(blk.indices.size());
            Eigen::VectorXd re(nb), im(nb);
            for (Eigen::Index k = 0; k < nb; ++k) {
                re[k] = psi[static_cast<Eigen::Index>(blk.indices[static_cast<std::size_t>(k)])].real();
                im[k] = psi[static_cast<Eigen::Index>(blk.indices[static_cast<std::size_t>(k)])].imag();
            }
            Eigen::VectorXd ar = blk.vectors.transpose() * re;
            Eigen::VectorXd ai = blk.vectors.transpose() * im;
            Eigen::VectorXcd a(nb);
            for (Eigen::Index k = 0; k < nb; ++k) a[k] = Complex(ar[k], ai[k]);
            per_block.push_back(std::move(a));
        }
        for (std::size_t i = 0; i < order_.size(); ++i)
            out[static_cast<Eigen::Index>(i)] = per_block[static_cast<std::size_t>(order_[i].block)][order_[i].local];
        return out;
    }

    /// sum_i coeffs_i |E_i> in full basis coordinates.
    Eigen::VectorXcd synthesize(const Eigen::VectorXcd& coeffs) const
    {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_.dimension()));
        std::vector<Eigen::VectorXd> re, im;
        for (const auto& blk : blocks_) {
            re.emplace_back(Eigen::VectorXd::Zero(blk.energies.size()));
            im.emplace_back(Eigen::VectorXd::Zero(blk.energies.size()));
        }
        for (std::size_t i = 0; i < order_.size(); ++i) {
            const auto c = coeffs[static_cast<Eigen::Index>(i)];
            re[static_cast<std::size_t>(order_[i].block)][order_[i].local] = c.real();
            im[static_cast<std::size_t>(order_[i].block)][order_[i].local] = c.imag();
        }
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            const auto& blk = blocks_[b];
            if (blk.indices.empty()) continue;
            Eigen::VectorXd xr = blk.vectors * re[b];
            Eigen::VectorXd xi = blk.vectors * im[b];
            for (std::size_t k = 0; k < blk.indices.size(); ++k)
                out[static_cast<Eigen::Index>(blk.indices[k])] =
                    Complex(xr[static_cast<Eigen::Index>(k)], xi[static_cast<Eigen::Index>(k)]);
        }
        return out;
    }

    /// max_ij |(HV - V Lambda)_ij| over all blocks, recorded at construction by diagonalize().
    double residual() const { return residual_; }
    double hamiltonian_norm() const { return h_norm_; }
    void set_diagnostics(double residual, double h_norm)
    {
        residual_ = residual;
        h_norm_ = h_norm;
    }

    /// max |V^T V - I| over blocks (O(n^3); for tests and small problems).
    double orthonormality_error() const
    {
        double err = 0.0;
        for (const auto& blk : blocks_) {
            if (blk.indices.empty()) continue;
            Eigen::MatrixXd g = blk.vectors.transpose() * blk.vectors;
            g.diagonal().array() -= 1.0;
            err = std::max(err, g.cwiseAbs().maxCoeff());
        }
        return err;
    }

private:
    struct Ref {
        int block;
        Eigen::Index local;
    };
    double raw_energy(std::size_t i) const
    {
        return blocks_[static_cast<std::size_t>(order_[i].block)].energies[order_[i].local];
    }

    ModelParams params_;
    HilbertBasis basis_;
    std::vector<EigenBlock> blocks_;
    std::vector<Ref> order_;
    Eigen::VectorXd energies_;
    std::vector<int> block_of_;
    std::vector<Eigen::Index> row_of_;
    double residual_{0.0};
    double h_norm_{0.0};
};

namespace detail {

// Indices sorted n-major so the sector matrix is banded.
inline std::vector<std::size_t> band_order(const HilbertBasis& basis, std::vector<std::size_t> idx)
{
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const int na = basis.n_of(a), nb = basis.n_of(b);
        if (na != nb) return na < nb;
        return basis.excitation_of(a) < basis.excitation_of(b);
    });
    return idx;
}

// Restriction of `h` to `idx`; throws when `strict` and h couples idx to its complement.
inline SparseReal extract_block(const SparseReal& h, const std::vector<std::size_t>& idx, bool strict)
{
    std::vector<Eigen::Index> pos(static_cast<std::size_t>(h.rows()), -1);
    for (std::size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = static_cast<Eigen::Index>(k);
    std::vector<Eigen::Triplet<double>> t;
    for (Eigen::Index c = 0; c < h.outerSize(); ++c) {
        for (SparseReal::InnerIterator it(h, c); it; ++it) {
            const Eigen::Index r = pos[static_cast<std::size_t>(it.row())];
            const Eigen::Index cc = pos[static_cast<std::size_t>(it.col())];
            if (r >= 0 && cc >= 0) {
                t.emplace_back(r, cc, it.value());
            } else if (strict && (r >= 0) != (cc >= 0) && it.value() != 0.0) {
                throw std::invalid_argument("Hamiltonian couples parity sectors; parity blocking needs mu = 0");
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(idx.size());
    SparseReal out(n, n);
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

inline double inf_norm(const SparseReal& h)
{
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(h.rows());
    for (Eigen::Index c = 0; c < h.outerSize(); ++c)
        for (SparseReal::InnerIterator it(h, c); it; ++it) rows[it.row()] += std::abs(it.value());
    return rows.size() ? rows.maxCoeff() : 0.0;
}

inline std::vector<std::vector<std::size_t>> sectors(const HilbertBasis& basis, bool use_parity_blocks)
{
    if (use_parity_blocks) return {band_order(basis, basis.parity_sector(+1)), band_order(basis, basis.parity_sector(-1))};
    std::vector<std::size_t> all(basis.dimension());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return {band_order(basis, all)};
}

}  // namespace detail

/// Full spectrum of a real symmetric Hamiltonian. With `use_parity_blocks` the two parity
/// sectors are solved independently and merged; eigenvalue i carries the sector label.
inline EigenDecomposition diagonalize(const OperatorMatrix& H, const HilbertBasis& basis, bool use_parity_blocks,
                                      const ModelParams& params = {})
{
    if (H.phase != Phase::real) throw std::invalid_argument("Hamiltonian must be real symmetric");
    if (static_cast<std::size_t>(H.dimension()) != basis.dimension())
        throw std::invalid_argument("Hamiltonian and basis dimensions differ");
    const double hn = detail::inf_norm(H.matrix);
    std::vector<EigenBlock> blocks;
    double residual = 0.0;
    const auto secs = detail::sectors(basis, use_parity_blocks);
    for (std::size_t s = 0; s < secs.size(); ++s) {
        EigenBlock blk;
        blk.label = use_parity_blocks ? (s == 0 ? +1 : -1) : 0;
        blk.indices = secs[s];
        const SparseReal sub = detail::extract_block(H.matrix, blk.indices, use_parity_blocks);
        auto res = solve_symmetric(sub, true);
        blk.energies = std::move(res.values);
        blk.vectors = std::move(res.vectors);
        if (blk.energies.size() > 0) {
            Eigen::MatrixXd r = sub * blk.vectors - blk.vectors * blk.energies.asDiagonal();
            residual = std::max(residual, r.cwiseAbs().maxCoeff());
        }
        blocks.push_back(std::move(blk));
    }
    if (!(residual < 1e-7 * std::max(1.0, hn)))
        throw SolverError("eigensolver residual too large: " + std::to_string(residual), residual);
    EigenDecomposition out(basis, std::move(blocks), params);
    out.set_diagnostics(residual, hn);
    return out;
}

inline EigenDecomposition diagonalize(const ModelParams& p, const HilbertBasis& basis, bool use_parity_blocks)
{
    return diagonalize(build_hamiltonian(p, basis), basis, use_parity_blocks, p);
}

/// Lowest eigenvalue only (eigenvalue-only LAPACK path; parity sectors when mu = 0).
inline double lowest_energy(const ModelParams& p, const HilbertBasis& basis)
{
    const auto H = build_hamiltonian(p, basis);
    double e = std::numeric_limits<double>::infinity();
    for (const auto& idx : detail::sectors(basis, p.mu == 0.0)) {
        if (idx.empty()) continue;
        const auto res = solve_symmetric(detail::extract_block(H.matrix, idx, false), false, 1);
        e = std::min(e, res.values[0]);
    }
    return e;
}

struct StrengthFunction {
    Eigen::VectorXd energies;  // E_i, ascending
    Eigen::VectorXd weights;   // p_i = |<E_i|psi>|^2
    double mean{0.0};
    double variance{0.0};
};

inline StrengthFunction strength_function(const EigenDecomposition& eigs, const Eigen::VectorXcd& initial)
{
    if (std::abs(initial.norm() - 1.0) > 1e-10) throw std::invalid_argument("initial state must be normalized");
    StrengthFunction sf;
    sf.energies = eigs.energies();
    sf.weights = eigs.overlaps(initial).cwiseAbs2();
    // subtract a reference energy to keep the variance well conditioned
    const double ref = sf.energies.dot(sf.weights) / std::max(1e-300, sf.weights.sum());
    const Eigen::ArrayXd d = sf.energies.array() - ref;
    const double m1 = (sf.weights.array() * d).sum();
    sf.mean = ref + m1;
    sf.variance = (sf.weights.array() * d * d).sum() - m1 * m1;
    return sf;
}

/// Gaussian-smoothed density of scaled eigenvalues, divided by NR so the free case equals 1
/// per qubit branch.
class SmoothedDensity {
public:
    SmoothedDensity(std::vector<double> scaled_levels, double width, double size)
        : levels_(std::move(scaled_levels)), width_(width), size_(size)
    {
        if (!(width > 0.0)) throw std::invalid_argument("kernel width must be positive");
        std::sort(levels_.begin(), levels_.end());
    }

    double operator()(double eps) const
    {
        const double cut = 9.0 * width_;
        auto lo = std::lower_bound(levels_.begin(), levels_.end(), eps - cut);
        auto hi = std::upper_bound(levels_.begin(), levels_.end(), eps + cut);
        const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * width_ * size_);
        double s = 0.0;
        for (auto it = lo; it != hi; ++it) {
            const double x = (eps - *it) / width_;
            s += std::exp(-0.5 * x * x);
        }
        return norm * s;
    }

    double width() const { return width_; }

private:
    std::vector<double> levels_;
    double width_;
    double size_;
};

inline SmoothedDensity smoothed_level_density(const EigenDecomposition& eigs, const ModelParams& p,
                                              double kernel_width = 0.02)
{
    std::vector<double> lv(static_cast<std::size_t>(eigs.size()));
    for (Eigen::Index i = 0; i < eigs.size(); ++i) lv[static_cast<std::size_t>(i)] = scaled_energy(eigs.energy(i), p);
    return SmoothedDensity(std::move(lv), kernel_width, p.size());
}

// ---------------------------------------------------------------------------------------------
// Fock cutoff policy

struct CutoffPolicy {
    int n_min{64};
    double energy_tol{1e-9};   // scaled ground-state change under growth
    double tail_tol{1e-8};     // time-averaged weight above 0.9 n_max
    double growth{2.0};
    int n_cap{40000};
    int fixed{-1};             // >= 0 disables adaptation
};

/// Variance of H in |m=-j, n=0>: 4NR [ lambda^2 (1-delta)^2 j/2 + mu^2 j^2 (1-gamma)^2 ].
inline double quench_energy_variance(const ModelParams& p)
{
    const double j = p.j();
    const double a = p.lambda * (1.0 - p.delta);
    const double b = p.mu * j * (1.0 - p.gamma);
    return 4.0 * p.size() * (0.5 * a * a * j + b * b);
}

/// Fock cutoff covering the classical shells of every m' branch up to scaled energy eps_top.
inline int estimate_cutoff(const ModelParams& p, double eps_top, const CutoffPolicy& policy = {})
{
    double r = 0.0;
    for (int k = 0; k <= p.two_j(); ++k) r = std::max(r, classical_extent(p, k - p.j(), eps_top));
    const double n_classical = 0.5 * p.size() * r * r;
    const double n = 1.1 * n_classical + 8.0 * std::sqrt(n_classical + 1.0) + 32.0;
    return std::max(policy.n_min, static_cast<int>(std::ceil(n)));
}

inline int quench_cutoff_estimate(const ModelParams& p, const CutoffPolicy& policy = {})
{
    const double sigma = std::sqrt(quench_energy_variance(p)) / (p.size() * p.omega);
    return estimate_cutoff(p, -0.5 + 7.0 * sigma + 0.05, policy);
}

struct GroundStatePoint {
    double lambda;
    double eps_gs;
    int n_max;
};

/// Ground-state scaled energy with the cutoff grown until it is stable to policy.energy_tol.
inline GroundStatePoint converged_ground_state(const ModelParams& p, const CutoffPolicy& policy = {})
{
    const double scale = p.size() * p.omega;
    if (policy.fixed >= 0)
        return {p.lambda, lowest_energy(p, HilbertBasis(p.two_j(), policy.fixed)) / scale, policy.fixed};
    const double eps0 = global_minimum(p, -p.j()).energy;
    int n = estimate_cutoff(p, eps0 + 0.1, policy);
    double e = lowest_energy(p, HilbertBasis(p.two_j(), n));
    while (true) {
        const int next = static_cast<int>(std::ceil(policy.growth * n));
        if (next > policy.n_cap) throw SolverError("ground-state cutoff did not converge below n_cap");
        const double e2 = lowest_energy(p, HilbertBasis(p.two_j(), next));
        if (std::abs(e2 - e) / scale < policy.energy_tol) return {p.lambda, e / scale, n};
        n = next;
        e = e2;
    }
}

inline std::vector<GroundStatePoint> ground_state_curve(ModelParams p, const std::vector<double>& lambda_grid,
                                                        const CutoffPolicy& policy = {})
{
    if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end()))
        throw std::invalid_argument("lambda grid must be sorted");
    std::vector<GroundStatePoint> out;
    for (double lam : lambda_grid) {
        p.lambda = lam;
        out.push_back(converged_ground_state(p, policy));
    }
    return out;
}

}  // namespace erabi
