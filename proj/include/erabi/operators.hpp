// operators.hpp - quasispin and boson operators on the truncated product basis

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "erabi/basis.hpp"

namespace erabi {

using SparseReal = Eigen::SparseMatrix<double>;
using Complex = std::complex<double>;

/// Real storage of an operator A.
///
/// Phase::real      : A = matrix.
/// Phase::imaginary : matrix = iA, so A = -i * matrix. Used for J_y and p, whose
///                    matrix elements in |m,n> are purely imaginary.
enum class Phase { real, imaginary };

struct OperatorMatrix {
    SparseReal matrix;
    Phase phase{Phase::real};

    Eigen::Index dimension() const { return matrix.rows(); }

    /// The represented operator as a complex dense matrix (tests and small problems).
    Eigen::MatrixXcd to_dense() const
    {
        Eigen::MatrixXcd out = Eigen::MatrixXd(matrix).cast<Complex>();
        if (phase == Phase::imaginary) out *= Complex(0.0, -1.0);
        return out;
    }
};

inline OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b)
{
    OperatorMatrix out;
    SparseReal prod = (a.matrix * b.matrix).pruned();
    if (a.phase == Phase::imaginary && b.phase == Phase::imaginary) {
        // (-iA)(-iB) = -AB
        out.matrix = -prod;
        out.phase = Phase::real;
    } else {
        out.matrix = prod;
        out.phase = (a.phase == Phase::imaginary || b.phase == Phase::imaginary) ? Phase::imaginary
                                                                                 : Phase::real;
    }
    return out;
}

inline OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b)
{
    if (a.phase != b.phase) throw std::invalid_argument("cannot add real and imaginary operators in real storage");
    return {SparseReal(a.matrix + b.matrix), a.phase};
}

inline OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b)
{
    if (a.phase != b.phase) throw std::invalid_argument("cannot subtract real and imaginary operators in real storage");
    return {SparseReal(a.matrix - b.matrix), a.phase};
}

inline OperatorMatrix operator*(double s, const OperatorMatrix& a) { return {SparseReal(s * a.matrix), a.phase}; }

/// [A, B] = AB - BA
inline OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) { return a * b - b * a; }

inline OperatorMatrix identity_operator(const HilbertBasis& basis)
{
    SparseReal id(static_cast<Eigen::Index>(basis.dimension()), static_cast<Eigen::Index>(basis.dimension()));
    id.setIdentity();
    return {id, Phase::real};
}

namespace detail {

inline OperatorMatrix from_triplets(const HilbertBasis& basis, const std::vector<Eigen::Triplet<double>>& t,
                                    Phase phase)
{
    const auto d = static_cast<Eigen::Index>(basis.dimension());
    SparseReal m(d, d);
    m.setFromTriplets(t.begin(), t.end());
    return {m, phase};
}

// <k+1| J+ |k> with k = m + j
inline double raise_coefficient(int two_j, int k) { return std::sqrt(double(k + 1) * double(two_j - k)); }

}  // namespace detail

enum class SpinComponent { x, y, z, plus, minus };

/// Standard angular-momentum matrices in the Jz eigenbasis, tensored with the Fock identity.
/// J_y is returned with Phase::imaginary (stored matrix iJ_y = (J+ - J-)/2).
inline OperatorMatrix quasispin_operator(const HilbertBasis& basis, SpinComponent c)
{
    std::vector<Eigen::Triplet<double>> t;
    const int two_j = basis.two_j();
    for (int k = 0; k <= two_j; ++k) {
        for (int n = 0; n <= basis.n_max(); ++n) {
            const auto col = static_cast<Eigen::Index>(basis.index_of(k, n));
            if (c == SpinComponent::z) {
                t.emplace_back(col, col, k - basis.j());
                continue;
            }
            if (k < two_j) {
                const auto up = static_cast<Eigen::Index>(basis.index_of(k + 1, n));
                const double a = detail::raise_coefficient(two_j, k);
                switch (c) {
                case SpinComponent::plus: t.emplace_back(up, col, a); break;
                case SpinComponent::minus: t.emplace_back(col, up, a); break;
                case SpinComponent::x:
                    t.emplace_back(up, col, 0.5 * a);
                    t.emplace_back(col, up, 0.5 * a);
                    break;
                case SpinComponent::y:
                    t.emplace_back(up, col, 0.5 * a);
                    t.emplace_back(col, up, -0.5 * a);
                    break;
                default: break;
                }
            }
        }
    }
    return detail::from_triplets(basis, t, c == SpinComponent::y ? Phase::imaginary : Phase::real);
}

enum class BosonKind { create, annihilate, number, q, p };

/// Field operators. q = (b^+ + b)/sqrt(2 NR), p = i(b^+ - b)/sqrt(2 NR) with [q, p] = i/NR
/// away from the truncation edge. p is returned with Phase::imaginary.
inline OperatorMatrix boson_operator(const HilbertBasis& basis, BosonKind kind, double size = 1.0)
{
    std::vector<Eigen::Triplet<double>> t;
    const double scale = 1.0 / std::sqrt(2.0 * size);
    for (int k = 0; k <= basis.two_j(); ++k) {
        for (int n = 0; n <= basis.n_max(); ++n) {
            const auto i = static_cast<Eigen::Index>(basis.index_of(k, n));
            if (kind == BosonKind::number) {
                t.emplace_back(i, i, double(n));
                continue;
            }
            if (n == basis.n_max()) continue;
            const auto up = static_cast<Eigen::Index>(basis.index_of(k, n + 1));
            const double a = std::sqrt(double(n + 1));
            switch (kind) {
            case BosonKind::create: t.emplace_back(up, i, a); break;
            case BosonKind::annihilate: t.emplace_back(i, up, a); break;
            case BosonKind::q:
                t.emplace_back(up, i, scale * a);
                t.emplace_back(i, up, scale * a);
                break;
            case BosonKind::p:
                // i p = (b - b^+)/sqrt(2NR)
                t.emplace_back(up, i, -scale * a);
                t.emplace_back(i, up, scale * a);
                break;
            default: break;
            }
        }
    }
    return detail::from_triplets(basis, t, kind == BosonKind::p ? Phase::imaginary : Phase::real);
}

/// Generalized parity (-1)^n (-1)^(n*), diagonal in the basis.
inline OperatorMatrix parity_operator(const HilbertBasis& basis)
{
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t i = 0; i < basis.dimension(); ++i)
        t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), double(basis.parity_of(i)));
    return detail::from_triplets(basis, t, Phase::real);
}

/// M_+ = n + n* (sign = +1) or M_- = n - n* (sign = -1).
inline OperatorMatrix excitation_operator(const HilbertBasis& basis, int sign)
{
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t i = 0; i < basis.dimension(); ++i)
        t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i),
                       double(basis.n_of(i) + sign * basis.excitation_of(i)));
    return detail::from_triplets(basis, t, Phase::real);
}

/// Projector onto a single qubit projection m = k - j (tensored with the Fock identity).
inline OperatorMatrix qubit_projector(const HilbertBasis& basis, int k)
{
    std::vector<Eigen::Triplet<double>> t;
    for (int n = 0; n <= basis.n_max(); ++n) {
        const auto i = static_cast<Eigen::Index>(basis.index_of(k, n));
        t.emplace_back(i, i, 1.0);
    }
    return detail::from_triplets(basis, t, Phase::real);
}

/// Projector onto Fock state |n> (tensored with the qubit identity).
inline OperatorMatrix fock_projector(const HilbertBasis& basis, int n)
{
    std::vector<Eigen::Triplet<double>> t;
    for (int k = 0; k <= basis.two_j(); ++k) {
        const auto i = static_cast<Eigen::Index>(basis.index_of(k, n));
        t.emplace_back(i, i, 1.0);
    }
    return detail::from_triplets(basis, t, Phase::real);
}

}  // namespace erabi
