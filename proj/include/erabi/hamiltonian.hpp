// hamiltonian.hpp - assembly of the extended Rabi Hamiltonian

#pragma once

#include <cmath>
#include <vector>

#include "erabi/basis.hpp"
#include "erabi/operators.hpp"
#include "erabi/params.hpp"

namespace erabi {

/// Ladder-operator assembly
///   H = w[b^+b + R Jz] + 2 sqrt(NR) { lambda[ (1+delta)/2 (b^+J- + bJ+) + (1-delta)/2 (b^+J+ + bJ-) ]
///                                     + mu (b^+ + b)(Jz + gamma j) }.
/// The result is real symmetric in the |m,n> basis.
inline OperatorMatrix build_hamiltonian(const ModelParams& p, const HilbertBasis& basis)
{
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(basis.dimension() * 5);
    const int two_j = basis.two_j();
    const double j = basis.j();
    const double g = 2.0 * std::sqrt(p.size());
    const double rot = g * p.lambda * 0.5 * (1.0 + p.delta);
    const double counter = g * p.lambda * 0.5 * (1.0 - p.delta);

    auto sym = [&t](std::size_t a, std::size_t b, double v) {
        if (v == 0.0) return;
        t.emplace_back(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b), v);
        t.emplace_back(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a), v);
    };

    for (int k = 0; k <= two_j; ++k) {
        const double m = k - j;
        for (int n = 0; n <= basis.n_max(); ++n) {
            const std::size_t i = basis.index_of(k, n);
            t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i),
                           p.omega * (n + p.R * m));
            if (k < two_j) {
                const double a = detail::raise_coefficient(two_j, k);
                if (n >= 1) sym(basis.index_of(k + 1, n - 1), i, rot * std::sqrt(double(n)) * a);
                if (n < basis.n_max()) sym(basis.index_of(k + 1, n + 1), i, counter * std::sqrt(double(n + 1)) * a);
            }
            if (n < basis.n_max())
                sym(basis.index_of(k, n + 1), i, g * p.mu * std::sqrt(double(n + 1)) * (m + p.gamma * j));
        }
    }
    return detail::from_triplets(basis, t, Phase::real);
}

/// Coordinate-momentum assembly
///   H = NR w [ -1/(2NR) + (q^2 + p^2)/2 + sqrt2 N (mu gamma / w) q + B.J ],
///   B = ( sqrt8 (lambda/w) q, -sqrt8 (lambda delta / w) p, 1/N + sqrt8 (mu/w) q ).
/// Operator products are formed on a basis padded by one Fock level and then projected,
/// so q^2 + p^2 reproduces 2 b^+b + 1 up to the truncation edge exactly.
inline OperatorMatrix build_hamiltonian_coordinate_form(const ModelParams& p, const HilbertBasis& basis)
{
    const HilbertBasis big(basis.two_j(), basis.n_max() + 1);
    const double nr = p.size();
    const auto q = boson_operator(big, BosonKind::q, nr);
    const auto pm = boson_operator(big, BosonKind::p, nr);
    const auto jx = quasispin_operator(big, SpinComponent::x);
    const auto jy = quasispin_operator(big, SpinComponent::y);
    const auto jz = quasispin_operator(big, SpinComponent::z);
    const auto id = identity_operator(big);

    const double s8 = std::sqrt(8.0);
    OperatorMatrix h = (-1.0 / (2.0 * nr)) * id;
    h = h + 0.5 * (q * q + pm * pm);
    h = h + (std::sqrt(2.0) * p.N * p.mu * p.gamma / p.omega) * q;
    h = h + (s8 * p.lambda / p.omega) * (q * jx);
    h = h + (-s8 * p.lambda * p.delta / p.omega) * (pm * jy);
    h = h + (1.0 / p.N) * jz + (s8 * p.mu / p.omega) * (q * jz);

    std::vector<Eigen::Triplet<double>> sel;
    for (int k = 0; k <= basis.two_j(); ++k)
        for (int n = 0; n <= basis.n_max(); ++n)
            sel.emplace_back(static_cast<Eigen::Index>(basis.index_of(k, n)),
                             static_cast<Eigen::Index>(big.index_of(k, n)), 1.0);
    SparseReal proj(static_cast<Eigen::Index>(basis.dimension()), static_cast<Eigen::Index>(big.dimension()));
    proj.setFromTriplets(sel.begin(), sel.end());

    SparseReal out = (nr * p.omega) * (proj * h.matrix * proj.transpose());
    return {out.pruned(), Phase::real};
}

}  // namespace erabi
