#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "erabi/basis.hpp"
#include "erabi/hamiltonian.hpp"
#include "erabi/operators.hpp"
#include "erabi/params.hpp"

using namespace erabi;

namespace {

ModelParams make(double lambda, double delta, double mu = 0.0, double gamma = 0.0, double R = 100.0, int N = 1)
{
    ModelParams p;
    p.R = R;
    p.N = N;
    p.lambda = lambda;
    p.delta = delta;
    p.mu = mu;
    p.gamma = gamma;
    return p;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Spin matrices built directly from the standard formulas, basis index k = m + j.
Eigen::MatrixXcd spin_plus(int two_j)
{
    const double j = 0.5 * two_j;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(two_j + 1, two_j + 1);
    for (int k = 0; k < two_j; ++k) {
        const double m = k - j;
        s(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
    }
    return s;
}

Eigen::MatrixXcd annihilation(int n_max)
{
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(ValidateParams, AcceptsAdmissibleSet)
{
    auto p = make(0.75, 0.5);
    EXPECT_NO_THROW(validate_params(p));
}

TEST(ValidateParams, RejectsOutOfRangeFields)
{
    auto p = make(0.75, 1.5);
    try {
        validate_params(p);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_STREQ(e.what(), "delta out of [-1,1]");
    }
    p = make(-0.1, 0.5);
    try {
        validate_params(p);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_STREQ(e.what(), "lambda negative");
    }
    p = make(0.1, 0.5, -1.0);
    EXPECT_THROW(validate_params(p), ValidationError);
    p = make(0.1, 0.5, 0.1, 0.5);
    EXPECT_THROW(validate_params(p), ValidationError);
    p.allow_continuous_gamma = true;
    EXPECT_NO_THROW(validate_params(p));
    p = make(0.1, 0.5);
    p.R = 0.5;
    EXPECT_THROW(validate_params(p), ValidationError);
}

TEST(ValidateParams, SnapsGamma)
{
    auto p = make(0.1, 0.5, 0.1, 1.0 + 5e-13);
    EXPECT_EQ(validate_params(p).gamma, 1.0);
    p.gamma = -3e-13;
    EXPECT_EQ(validate_params(p).gamma, 0.0);
}

TEST(Basis, EnumerationAndParity)
{
    const auto b = build_basis(1, 1);
    ASSERT_EQ(b.dimension(), 4u);
    const double m[] = {-0.5, -0.5, 0.5, 0.5};
    const int n[] = {0, 1, 0, 1};
    const int par[] = {1, -1, -1, 1};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(b.m_of(i), m[i]);
        EXPECT_EQ(b.n_of(i), n[i]);
        EXPECT_EQ(b.parity_of(i), par[i]);
    }
    EXPECT_EQ(build_basis(2, 0).dimension(), 3u);
}

TEST(Basis, IndexIsBijection)
{
    const auto b = build_basis(3, 7);
    std::vector<int> seen(b.dimension(), 0);
    for (int k = 0; k <= 3; ++k)
        for (int n = 0; n <= 7; ++n) {
            const auto i = b.index_of(k, n);
            ASSERT_LT(i, b.dimension());
            ++seen[i];
            EXPECT_EQ(b.excitation_of(i), k);
            EXPECT_EQ(b.n_of(i), n);
        }
    for (int s : seen) EXPECT_EQ(s, 1);
    EXPECT_EQ(b.parity_sector(1).size() + b.parity_sector(-1).size(), b.dimension());
}

TEST(Operators, QuasispinBasics)
{
    const auto b = build_basis(1, 0);
    const auto jz = quasispin_operator(b, SpinComponent::z).to_dense();
    EXPECT_DOUBLE_EQ(jz(0, 0).real(), -0.5);
    EXPECT_DOUBLE_EQ(jz(1, 1).real(), 0.5);
    const auto jp = quasispin_operator(b, SpinComponent::plus).to_dense();
    EXPECT_DOUBLE_EQ(jp(1, 0).real(), 1.0);
    EXPECT_EQ(quasispin_operator(b, SpinComponent::y).phase, Phase::imaginary);
}

TEST(Operators, AngularMomentumAlgebra)
{
    const Complex I(0.0, 1.0);
    for (int two_j = 1; two_j <= 5; ++two_j) {
        const auto b = build_basis(two_j, 3);
        const auto jx = quasispin_operator(b, SpinComponent::x).to_dense();
        const auto jy = quasispin_operator(b, SpinComponent::y).to_dense();
        const auto jz = quasispin_operator(b, SpinComponent::z).to_dense();
        EXPECT_LT(max_abs(jx * jy - jy * jx - I * jz), 1e-13);
        EXPECT_LT(max_abs(jy * jz - jz * jy - I * jx), 1e-13);
        EXPECT_LT(max_abs(jz * jx - jx * jz - I * jy), 1e-13);
        // tagged-storage product must agree with the dense arithmetic
        const auto c = commutator(quasispin_operator(b, SpinComponent::x), quasispin_operator(b, SpinComponent::y));
        EXPECT_LT(max_abs(c.to_dense() - I * jz), 1e-13);
        // oracle: standard ladder formula
        const Eigen::MatrixXcd sp = kron(spin_plus(two_j), Eigen::MatrixXcd::Identity(4, 4));
        EXPECT_LT(max_abs(quasispin_operator(b, SpinComponent::plus).to_dense() - sp), 1e-14);
    }
}

TEST(Operators, BosonBasics)
{
    const auto b = build_basis(1, 2);
    const auto n = boson_operator(b, BosonKind::number).to_dense();
    for (int k = 0; k < 2; ++k)
        for (int m = 0; m <= 2; ++m) EXPECT_DOUBLE_EQ(n(k * 3 + m, k * 3 + m).real(), m);

    const auto big = build_basis(1, 10);
    const auto q = boson_operator(big, BosonKind::q, 100.0);
    const auto q2 = (q * q).to_dense();
    EXPECT_NEAR(q2(0, 0).real(), 0.005, 1e-15);
    EXPECT_EQ(boson_operator(big, BosonKind::p, 100.0).phase, Phase::imaginary);
}

TEST(Operators, CanonicalCommutatorAwayFromEdge)
{
    const int n_max = 12;
    const double NR = 100.0;
    const auto b = build_basis(1, n_max);
    const auto q = boson_operator(b, BosonKind::q, NR);
    const auto p = boson_operator(b, BosonKind::p, NR);
    const Eigen::MatrixXcd c = commutator(q, p).to_dense();
    double inner = 0.0, edge = 0.0;
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        const double dev = std::abs(c(i, i) - Complex(0.0, 1.0 / NR));
        if (b.n_of(i) < n_max) inner = std::max(inner, dev);
        else edge = std::max(edge, dev);
    }
    EXPECT_LT(inner, 1e-15);
    EXPECT_GT(edge, 1e-3);
    // matches the dense oracle built from b and b^+
    const Eigen::MatrixXcd a = kron(Eigen::MatrixXcd::Identity(2, 2), annihilation(n_max));
    const Eigen::MatrixXcd qd = (a.adjoint() + a) / std::sqrt(2.0 * NR);
    const Eigen::MatrixXcd pd = Complex(0.0, 1.0) * (a.adjoint() - a) / std::sqrt(2.0 * NR);
    EXPECT_LT(max_abs(q.to_dense() - qd), 1e-15);
    EXPECT_LT(max_abs(p.to_dense() - pd), 1e-15);
}

TEST(Operators, AddingMixedPhasesThrows)
{
    const auto b = build_basis(1, 2);
    EXPECT_THROW(quasispin_operator(b, SpinComponent::x) + quasispin_operator(b, SpinComponent::y),
                 std::invalid_argument);
}

TEST(Hamiltonian, FreeLimitIsDiagonal)
{
    const auto p = make(0.0, 0.3);
    const auto b = build_basis(1, 3);
    const Eigen::MatrixXd h = Eigen::MatrixXd(build_hamiltonian(p, b).matrix);
    EXPECT_LT((h - Eigen::MatrixXd(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
    for (std::size_t i = 0; i < b.dimension(); ++i)
        EXPECT_DOUBLE_EQ(h(i, i), b.n_of(i) + 100.0 * b.m_of(i));
}

TEST(Hamiltonian, MatchesKroneckerOracle)
{
    for (int two_j : {1, 2, 3}) {
        auto p = make(0.37, -0.6, 0.21, 1.0, 7.0, two_j);
        const int n_max = 9;
        const auto b = build_basis(two_j, n_max);
        const double j = 0.5 * two_j;
        const Eigen::MatrixXcd Jp = spin_plus(two_j), Jm = Jp.adjoint();
        Eigen::MatrixXcd Jz = Eigen::MatrixXcd::Zero(two_j + 1, two_j + 1);
        for (int k = 0; k <= two_j; ++k) Jz(k, k) = k - j;
        const Eigen::MatrixXcd a = annihilation(n_max), ad = a.adjoint();
        const auto I_s = Eigen::MatrixXcd::Identity(two_j + 1, two_j + 1);
        const auto I_b = Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1);
        const double g = 2.0 * std::sqrt(p.N * p.R);
        Eigen::MatrixXcd H = p.omega * (kron(I_s, ad * a) + p.R * kron(Jz, I_b));
        H += g * p.lambda * 0.5 * (1 + p.delta) * (kron(Jm, ad) + kron(Jp, a));
        H += g * p.lambda * 0.5 * (1 - p.delta) * (kron(Jp, ad) + kron(Jm, a));
        H += g * p.mu * kron(Jz + p.gamma * j * I_s, ad + a);
        const auto Hl = build_hamiltonian(p, b);
        EXPECT_LT(max_abs(Hl.to_dense() - H), 1e-12);
    }
}

TEST(Hamiltonian, RealSymmetric)
{
    const auto p = make(0.9, 0.2, 0.3, 1.0);
    const auto h = build_hamiltonian(p, build_basis(2, 20));
    EXPECT_EQ(h.phase, Phase::real);
    const Eigen::MatrixXd d = Eigen::MatrixXd(h.matrix);
    EXPECT_EQ((d - d.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hamiltonian, ParityConservedWithoutMu)
{
    for (double delta : {-0.7, 0.0, 0.5}) {
        const auto b = build_basis(1, 30);
        const auto h = build_hamiltonian(make(1.2, delta), b);
        const auto pi = parity_operator(b);
        EXPECT_LT(commutator(h, pi).to_dense().cwiseAbs().maxCoeff(), 1e-12);
    }
    const auto b = build_basis(1, 10);
    const auto h = build_hamiltonian(make(1.2, 0.5, 0.1, 0.0), b);
    EXPECT_GT(commutator(h, parity_operator(b)).to_dense().cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Hamiltonian, IntegrableLimitsConserveExcitations)
{
    for (int two_j : {1, 2}) {
        const int n_max = 15;
        const auto b = build_basis(two_j, n_max);
        for (int sign : {+1, -1}) {
            const auto h = build_hamiltonian(make(0.75, sign, 0.0, 0.0, 100.0, two_j), b);
            const Eigen::MatrixXcd c = commutator(h, excitation_operator(b, sign)).to_dense();
            double worst = 0.0;
            for (std::size_t r = 0; r < b.dimension(); ++r)
                for (std::size_t col = 0; col < b.dimension(); ++col)
                    if (b.n_of(r) < n_max && b.n_of(col) < n_max) worst = std::max(worst, std::abs(c(r, col)));
            EXPECT_LT(worst, 1e-10) << "two_j=" << two_j << " sign=" << sign;
        }
    }
}

TEST(Hamiltonian, CoordinateFormAgrees)
{
    for (int two_j : {1, 2}) {
        for (double gamma : {0.0, 1.0}) {
            const auto p = make(0.81, 0.35, 0.27, gamma, 30.0, two_j);
            const auto b = build_basis(two_j, 25);
            const Eigen::MatrixXd a = Eigen::MatrixXd(build_hamiltonian(p, b).matrix);
            const Eigen::MatrixXd c = Eigen::MatrixXd(build_hamiltonian_coordinate_form(p, b).matrix);
            EXPECT_LT((a - c).cwiseAbs().maxCoeff(), 1e-10);
        }
    }
}

TEST(ScaledEnergy, Examples)
{
    const auto p = make(0.0, 0.0);
    EXPECT_DOUBLE_EQ(scaled_energy(-50.0, p), -0.5);
    EXPECT_DOUBLE_EQ(scaled_energy(0.0, p), 0.0);
    EXPECT_DOUBLE_EQ(scaled_energy(100.0, p), 1.0);
}
