// eigensolver.hpp - LAPACK drivers for real symmetric matrices with small bandwidth
//
// The Hamiltonian couples |m,n> only to |m',n'> with |n - n'| <= 1, so in an n-major
// ordering it is banded with half-bandwidth 2j+2 (tridiagonal inside a parity sector
// for a single qubit). The drivers below pick the cheapest LAPACK path for that shape.
// No path relies on the BLAS level-3 kernels: OpenBLAS 0.3.20 with its AVX-512 dgemm returns
// wrong products above n ~ 128, which corrupts dsbevd/dsyevd/dsyevr back-transformations.
// Banded problems are reduced with dsbtrd, solved with MRRR (dstevr) and back-transformed
// with Eigen; dense problems go to Eigen's self-adjoint solver.

#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <lapacke.h>

namespace erabi {

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual = -1.0)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

struct SymmetricEigenResult {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns; empty when only values were requested
};

enum class SolverPath { diagonal, tridiagonal, banded, dense };

inline Eigen::Index half_bandwidth(const Eigen::SparseMatrix<double>& a)
{
    Eigen::Index kd = 0;
    for (Eigen::Index c = 0; c < a.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it)
            if (it.value() != 0.0) kd = std::max<Eigen::Index>(kd, std::abs(it.row() - it.col()));
    return kd;
}

inline SolverPath choose_path(Eigen::Index n, Eigen::Index kd)
{
    if (kd == 0) return SolverPath::diagonal;
    if (kd == 1) return SolverPath::tridiagonal;
    if (4 * kd < n) return SolverPath::banded;
    return SolverPath::dense;
}

namespace detail {

inline void check_info(lapack_int info, const char* routine)
{
    if (info != 0)
        throw SolverError(std::string(routine) + " failed with info = " + std::to_string(info));
}

// Column-major upper band storage, ab(kd + i - j, j) = A(i, j).
inline std::vector<double> band_storage(const Eigen::SparseMatrix<double>& a, Eigen::Index kd)
{
    const Eigen::Index n = a.rows();
    const Eigen::Index ld = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ld * n), 0.0);
    for (Eigen::Index c = 0; c < a.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it)
            if (it.row() <= it.col()) ab[static_cast<std::size_t>(kd + it.row() - it.col() + it.col() * ld)] = it.value();
    return ab;
}

}  // namespace detail

/// All eigenpairs (or only eigenvalues) of a real symmetric sparse matrix.
/// `count` > 0 restricts the output to the lowest `count` eigenvalues (values only).
inline SymmetricEigenResult solve_symmetric(const Eigen::SparseMatrix<double>& a, bool want_vectors = true,
                                            Eigen::Index count = 0)
{
    const Eigen::Index n = a.rows();
    SymmetricEigenResult out;
    if (n == 0) return out;
    const Eigen::Index kd = half_bandwidth(a);
    const SolverPath path = choose_path(n, kd);
    const bool partial = count > 0 && count < n;
    const char jobz = want_vectors && !partial ? 'V' : 'N';
    const Eigen::Index nv = partial ? count : n;

    if (path == SolverPath::diagonal) {
        Eigen::VectorXd d = Eigen::VectorXd(a.diagonal());
        std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return d[x] < d[y]; });
        out.values.resize(nv);
        if (jobz == 'V') out.vectors = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < nv; ++i) {
            out.values[i] = d[order[static_cast<std::size_t>(i)]];
            if (jobz == 'V') out.vectors(order[static_cast<std::size_t>(i)], i) = 1.0;
        }
        return out;
    }

    if (path == SolverPath::tridiagonal) {
        Eigen::VectorXd d = Eigen::VectorXd(a.diagonal());
        Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i + 1 < n; ++i) e[i] = a.coeff(i, i + 1);
        out.values.resize(n);
        lapack_int found = 0;
        std::vector<lapack_int> support(static_cast<std::size_t>(2 * n));
        if (jobz == 'V') out.vectors.resize(n, n);
        double dummy = 0.0;
        const lapack_int info = LAPACKE_dstevr(
            LAPACK_COL_MAJOR, jobz, partial ? 'I' : 'A', static_cast<lapack_int>(n), d.data(), e.data(), 0.0, 0.0,
            1, static_cast<lapack_int>(nv), 0.0, &found, out.values.data(),
            jobz == 'V' ? out.vectors.data() : &dummy, static_cast<lapack_int>(jobz == 'V' ? n : 1), support.data());
        detail::check_info(info, "dstevr");
        out.values.conservativeResize(found);
        return out;
    }

    if (path == SolverPath::banded) {
        auto ab = detail::band_storage(a, kd);
        if (partial) {
            out.values.resize(n);
            lapack_int found = 0;
            std::vector<lapack_int> fail(static_cast<std::size_t>(n));
            double q = 0.0;
            double z = 0.0;
            const lapack_int info = LAPACKE_dsbevx(
                LAPACK_COL_MAJOR, 'N', 'I', 'U', static_cast<lapack_int>(n), static_cast<lapack_int>(kd), ab.data(),
                static_cast<lapack_int>(kd + 1), &q, 1, 0.0, 0.0, 1,
                static_cast<lapack_int>(nv), 0.0, &found, out.values.data(), &z, 1, fail.data());
            detail::check_info(info, "dsbevx");
            out.values.conservativeResize(found);
            return out;
        }
        // reduce to tridiagonal form, solve with MRRR, back-transform
        Eigen::VectorXd d(n), e(n);
        Eigen::MatrixXd q(jobz == 'V' ? n : 1, jobz == 'V' ? n : 1);
        lapack_int info = LAPACKE_dsbtrd(LAPACK_COL_MAJOR, jobz == 'V' ? 'V' : 'N', 'U', static_cast<lapack_int>(n),
                                         static_cast<lapack_int>(kd), ab.data(), static_cast<lapack_int>(kd + 1), d.data(),
                                         e.data(), q.data(), static_cast<lapack_int>(q.rows()));
        detail::check_info(info, "dsbtrd");
        out.values.resize(n);
        Eigen::MatrixXd w(jobz == 'V' ? n : 1, jobz == 'V' ? n : 1);
        lapack_int found = 0;
        std::vector<lapack_int> support(static_cast<std::size_t>(2 * n));
        info = LAPACKE_dstevr(LAPACK_COL_MAJOR, jobz, 'A', static_cast<lapack_int>(n), d.data(), e.data(), 0.0, 0.0, 0, 0,
                              0.0, &found, out.values.data(), w.data(), static_cast<lapack_int>(w.rows()), support.data());
        detail::check_info(info, "dstevr");
        if (jobz == 'V') out.vectors.noalias() = q * w;
        return out;
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(a), jobz == 'V' ? Eigen::ComputeEigenvectors
                                                                                             : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed");
    out.values = es.eigenvalues().head(nv);
    if (jobz == 'V') out.vectors = es.eigenvectors();
    return out;
}

}  // namespace erabi
