// basis.hpp - truncated product basis |m>_q (x) |n>_b

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace erabi {

/// Product basis |m, n> with m = -j..+j and n = 0..n_max.
///
/// States are ordered m-major, n-minor: index = (m + j) * (n_max + 1) + n.
/// The excited-qubit number n* = m + j is stored as an integer so half-integer
/// projections never go through floating point.
class HilbertBasis {
public:
    HilbertBasis(int two_j, int n_max) : two_j_(two_j), n_max_(n_max)
    {
        if (two_j < 0) throw std::invalid_argument("two_j must be non-negative");
        if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
    }

    /// Convenience for the maximal quasispin of N qubits.
    static HilbertBasis for_qubits(int N, int n_max) { return HilbertBasis(N, n_max); }

    int two_j() const { return two_j_; }
    double j() const { return 0.5 * two_j_; }
    int n_max() const { return n_max_; }
    std::size_t spin_dim() const { return static_cast<std::size_t>(two_j_) + 1; }
    std::size_t fock_dim() const { return static_cast<std::size_t>(n_max_) + 1; }
    std::size_t dimension() const { return spin_dim() * fock_dim(); }

    /// k = m + j in 0..2j
    std::size_t index_of(int k, int n) const
    {
        return static_cast<std::size_t>(k) * fock_dim() + static_cast<std::size_t>(n);
    }
    int excitation_of(std::size_t index) const { return static_cast<int>(index / fock_dim()); }
    int n_of(std::size_t index) const { return static_cast<int>(index % fock_dim()); }
    double m_of(std::size_t index) const { return excitation_of(index) - j(); }

    /// (-1)^n (-1)^(m+j)
    int parity_of(std::size_t index) const
    {
        return ((n_of(index) + excitation_of(index)) % 2 == 0) ? 1 : -1;
    }

    /// Flat indices of one parity sector, in ascending basis order.
    std::vector<std::size_t> parity_sector(int parity) const
    {
        std::vector<std::size_t> out;
        out.reserve(dimension() / 2 + 1);
        for (std::size_t i = 0; i < dimension(); ++i)
            if (parity_of(i) == parity) out.push_back(i);
        return out;
    }

    bool operator==(const HilbertBasis& o) const { return two_j_ == o.two_j_ && n_max_ == o.n_max_; }

private:
    int two_j_;
    int n_max_;
};

inline HilbertBasis build_basis(int two_j, int n_max) { return HilbertBasis(two_j, n_max); }

}  // namespace erabi
