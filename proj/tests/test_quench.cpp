#include <cmath>
#include <random>

#include <boost/numeric/odeint.hpp>
#include <gtest/gtest.h>

#include "erabi/hamiltonian.hpp"
#include "erabi/quench.hpp"

using namespace erabi;

namespace {

ModelParams make(double lambda, double delta, double mu = 0.0, double gamma = 0.0, double R = 100.0)
{
    ModelParams p;
    p.R = R;
    p.lambda = lambda;
    p.delta = delta;
    p.mu = mu;
    p.gamma = gamma;
    return p;
}

CutoffPolicy fixed(int n)
{
    CutoffPolicy c;
    c.fixed = n;
    return c;
}

const QuenchSetup& s1_setup()
{
    static const QuenchSetup s = prepare_quench(make(0.75, 0.5));
    return s;
}

}  // namespace

TEST(InitialState, ProductVacuum)
{
    const auto b = build_basis(1, 2);
    const auto s = initial_state(b);
    EXPECT_EQ(s.c.size(), 6);
    EXPECT_EQ(s.c[static_cast<Eigen::Index>(b.index_of(0, 0))], Complex(1.0));
    EXPECT_DOUBLE_EQ(s.c.squaredNorm(), 1.0);
    EXPECT_DOUBLE_EQ(expectation(s, parity_operator(b)), 1.0);
    EXPECT_DOUBLE_EQ(expectation(s, quasispin_operator(b, SpinComponent::z)), -0.5);
    EXPECT_DOUBLE_EQ(expectation(s, boson_operator(b, BosonKind::number)), 0.0);
    const auto bp = bloch_and_purity(s, b);
    EXPECT_DOUBLE_EQ(bp.jz, -0.5);
    EXPECT_DOUBLE_EQ(bp.purity, 1.0);
}

TEST(InitialState, MeanEnergyIsFree)
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        auto p = make(2 * U(rng), 2 * U(rng) - 1, 0.5 * U(rng), U(rng) < 0.5 ? 0.0 : 1.0, 10 + 90 * U(rng));
        for (int two_j : {1, 2}) {
            p.N = two_j;
            const auto b = build_basis(two_j, 12);
            const double e = expectation(initial_state(b), build_hamiltonian(p, b));
            EXPECT_NEAR(e, -p.omega * p.R * 0.5 * two_j, 1e-10 * p.R);
        }
    }
}

TEST(Evolution, FreeModelOnlyPicksUpAPhase)
{
    const auto p = make(0.0, 0.3);
    const auto b = build_basis(1, 8);
    const auto eigs = diagonalize(p, b, true);
    const Propagator prop(eigs, initial_state(b));
    for (double t : {0.0, 0.7, 13.0}) {
        const auto st = prop.at(t);
        const Complex c = st.c[static_cast<Eigen::Index>(b.index_of(0, 0))];
        EXPECT_NEAR(std::abs(c - std::polar(1.0, p.omega * p.R * 0.5 * t)), 0.0, 1e-10);
        EXPECT_NEAR(prop.survival(t), 1.0, 1e-12);
    }
}

TEST(Evolution, JaynesCummingsIsFrozen)
{
    const auto s = prepare_quench(make(0.75, 1.0), fixed(40));
    const Propagator prop(s.eigs, initial_state(s.basis));
    for (double t = 0.0; t <= 100.0; t += 2.5) EXPECT_NEAR(prop.survival(t), 1.0, 1e-8);
}

TEST(Evolution, ConservationLaws)
{
    for (const auto& p : {make(0.75, 0.5), make(0.75, 0.5, 0.4, 1.0), make(1.5, -0.3, 0.2, 0.0)}) {
        const auto s = prepare_quench(p, fixed(120));
        const auto s0 = initial_state(s.basis);
        const auto H = build_hamiltonian(p, s.basis);
        const auto Pi = parity_operator(s.basis);
        const double e0 = expectation(s0, H);
        for (const auto& st : evolve(s.eigs, s0, {0.0, 0.3, 2.0, 17.0})) {
            EXPECT_NEAR(st.c.norm(), 1.0, 1e-10);
            EXPECT_NEAR(expectation(st, H), e0, 1e-8 * std::abs(e0));
            if (p.mu == 0.0) EXPECT_NEAR(expectation(st, Pi), 1.0, 1e-10);
        }
    }
}

TEST(Survival, StrengthFunctionRoute)
{
    const auto& s = s1_setup();
    const auto s0 = initial_state(s.basis);
    const auto sf = strength_function(s.eigs, s0.c);
    const Propagator prop(s.eigs, s0);
    for (double t : {0.0, 1.0, 5.5, 9.0, 40.0}) {
        const auto st = prop.at(t);
        EXPECT_NEAR(survival_probability(s0, st), survival_probability(sf, t), 1e-10);
        EXPECT_NEAR(prop.survival(t), survival_probability(sf, t), 1e-10);
    }
    EXPECT_NEAR(sf.mean / s.params.size(), -0.5, 1e-10);
}

TEST(Survival, TwoLevelToy)
{
    StrengthFunction sf;
    sf.energies = Eigen::Vector2d(0.0, M_PI);
    sf.weights = Eigen::Vector2d(0.5, 0.5);
    EXPECT_NEAR(survival_probability(sf, 1.0), 0.0, 1e-15);
    EXPECT_NEAR(survival_probability(sf, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(time_averaged_survival(sf, 1e4, 0.01), 0.5, 1e-4);
}

TEST(Survival, DeepFirstMinimumInS1)
{
    const auto& s = s1_setup();
    const Propagator prop(s.eigs, initial_state(s.basis));
    double pmin = 1.0;
    for (double t = 0.0; t <= 15.0; t += 0.01) pmin = std::min(pmin, prop.survival(t));
    EXPECT_LT(pmin, 0.1);
}

TEST(Averages, FreeModel)
{
    const auto b = build_basis(1, 6);
    const auto eigs = diagonalize(make(0.0, 0.0), b, true);
    const auto a = infinite_time_averages(eigs, initial_state(b), quench_observables(b, make(0.0, 0.0)));
    EXPECT_NEAR(a.survival, 1.0, 1e-14);
    EXPECT_NEAR(a.observables.at("n"), 0.0, 1e-14);
    EXPECT_NEAR(a.observables.at("Jz"), -0.5, 1e-14);
}

TEST(Averages, ClusterMerging)
{
    const Eigen::Vector4d e(0.0, 1e-13, 1.0, 2.0);
    const auto c = degenerate_clusters(e, 1e-9);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0], std::make_pair(Eigen::Index(0), Eigen::Index(2)));
    // a doublet populated half/half behaves like a single level
    const auto b = build_basis(1, 0);
    std::vector<EigenBlock> blocks{{0, {0, 1}, Eigen::Vector2d(-1.0, -1.0), Eigen::Matrix2d::Identity()}};
    EigenDecomposition eigs(b, blocks, make(0.0, 0.0));
    QuenchState s;
    s.c = Eigen::Vector2cd(std::sqrt(0.5), std::sqrt(0.5));
    EXPECT_NEAR(infinite_time_averages(eigs, s, {}).survival, 1.0, 1e-14);
    std::vector<EigenBlock> split{{0, {0, 1}, Eigen::Vector2d(-1.0, 1.0), Eigen::Matrix2d::Identity()}};
    EigenDecomposition eigs2(b, split, make(0.0, 0.0));
    EXPECT_NEAR(infinite_time_averages(eigs2, s, {}).survival, 0.5, 1e-14);
}

TEST(Averages, SpectralMatchesLongTimeAverage)
{
    const auto& s = s1_setup();
    const auto sf = strength_function(s.eigs, initial_state(s.basis).c);
    const double spectral = quench_averages(s).P;
    const double temporal = time_averaged_survival(sf, 1e4, 0.02);
    EXPECT_NEAR(temporal / spectral, 1.0, 0.05);
}

TEST(Averages, ParityViolatingNullAverages)
{
    for (double mu : {1e-3, 0.4}) {
        for (double gamma : {0.0, 1.0}) {
            const auto s = prepare_quench(make(0.75, 0.5, mu, gamma, 10.0));
            const auto a = quench_averages(s);
            EXPECT_LT(std::abs(a.Jy), 1e-8) << mu << " " << gamma;
            EXPECT_LT(std::abs(a.p), 1e-8) << mu << " " << gamma;
        }
    }
}

TEST(Identities, SingleQubitParityConserving)
{
    const auto& s = s1_setup();
    const auto r = quench_record(s, linear_time_grid(0.0, 30.0, 61));
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        EXPECT_NEAR(r.P[i], r.Pb[i], 1e-10);
        EXPECT_GE(r.Pq[i], r.P[i] - 1e-12);
        EXPECT_NEAR(r.Pq[i], 0.5 - r.Jz[i], 1e-10);
        EXPECT_NEAR(r.purity[i], 2 * std::abs(r.Jz[i]), 1e-10);
        for (double v : {r.Jx[i], r.Jy[i], r.q[i], r.p[i]}) EXPECT_LT(std::abs(v), 1e-8);
        for (double v : {r.P[i], r.Pq[i], r.Pb[i], r.purity[i]}) {
            EXPECT_GE(v, -1e-12);
            EXPECT_LE(v, 1 + 1e-12);
        }
    }
}

TEST(ReducedDensity, SpectraAgreeAndQubitIsDiagonal)
{
    const auto& s = s1_setup();
    const Propagator prop(s.eigs, initial_state(s.basis));
    for (double t : {0.0, 4.0, 9.0, 25.0}) {
        const auto st = prop.at(t);
        const auto rq = reduced_density(st, s.basis, Subsystem::qubit);
        const auto rb = reduced_density(st, s.basis, Subsystem::field);
        EXPECT_NEAR(rq.rho.trace().real(), 1.0, 1e-10);
        EXPECT_NEAR(rb.rho.trace().real(), 1.0, 1e-10);
        EXPECT_LT(std::abs(rq.rho(0, 1)), 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eq(rq.rho), eb(rb.rho);
        const Eigen::VectorXd lq = eq.eigenvalues(), lb = eb.eigenvalues();
        EXPECT_GE(lb.minCoeff(), -1e-12);
        for (int k = 0; k < 2; ++k) EXPECT_NEAR(lq[1 - k], lb[lb.size() - 1 - k], 1e-8);
        for (Eigen::Index k = 0; k + 2 < lb.size(); ++k) EXPECT_NEAR(lb[k], 0.0, 1e-8);
    }
}

TEST(ReducedDensity, ParityViolatingSpectraAgree)
{
    const auto s = prepare_quench(make(0.75, 0.5, 0.4, 1.0, 10.0));
    const auto st = Propagator(s.eigs, initial_state(s.basis)).at(3.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eq(reduced_density(st, s.basis, Subsystem::qubit).rho);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eb(reduced_density(st, s.basis, Subsystem::field).rho);
    const auto nb = eb.eigenvalues().size();
    EXPECT_NEAR(eq.eigenvalues()[1], eb.eigenvalues()[nb - 1], 1e-8);
    EXPECT_NEAR(eq.eigenvalues()[0], eb.eigenvalues()[nb - 2], 1e-8);
    const auto bp = bloch_and_purity(st, s.basis);
    const double tr2 = reduced_density(st, s.basis, Subsystem::qubit).rho.cwiseAbs2().sum();
    EXPECT_NEAR(tr2, 0.5 * (bp.purity * bp.purity + 1.0), 1e-12);
}

TEST(Bloch, MixedAndErrors)
{
    ReducedDensity r{Subsystem::qubit, Eigen::Matrix2cd::Identity() * 0.5};
    EXPECT_NEAR(normalized_purity(r), 0.0, 1e-15);
    const auto b = build_basis(2, 3);
    EXPECT_THROW(bloch_and_purity(initial_state(b), b), std::invalid_argument);
}

TEST(Oracle, MatchesDirectIntegration)
{
    const auto p = make(0.75, 0.5, 0.0, 0.0, 10.0);
    const auto b = build_basis(1, 6);
    const auto eigs = diagonalize(p, b, false);
    const Eigen::MatrixXd H = Eigen::MatrixXd(build_hamiltonian(p, b).matrix);
    using State = std::vector<Complex>;
    auto rhs = [&](const State& c, State& dc, double) {
        const Eigen::Map<const Eigen::VectorXcd> x(c.data(), static_cast<Eigen::Index>(c.size()));
        Eigen::Map<Eigen::VectorXcd> y(dc.data(), static_cast<Eigen::Index>(dc.size()));
        y = Complex(0.0, -1.0) * (H.cast<Complex>() * x);
    };
    namespace ode = boost::numeric::odeint;
    const auto s0 = initial_state(b);
    State c(s0.c.data(), s0.c.data() + s0.c.size());
    const Propagator prop(eigs, s0);
    double worst = 0.0;
    double t = 0.0;
    auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
    for (int k = 1; k <= 20; ++k) {
        const double t1 = 0.5 * k;
        ode::integrate_adaptive(stepper, rhs, c, t, t1, 1e-3);
        t = t1;
        const auto st = prop.at(t1);
        for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::abs(c[i] - st.c[static_cast<Eigen::Index>(i)]));
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(TwoStep, FrozenStageAndEquivalence)
{
    const auto b = build_basis(1, 60);
    for (double lam : {0.3, 0.75, 1.5}) {
        const auto target = make(lam, 0.5, 0.0, 0.0, 10.0);
        const auto ts = two_step_quench(target, b);
        EXPECT_NEAR(ts.stage1_overlap, 1.0, 1e-12);
        const auto eigs = diagonalize(target, b, true);
        const Propagator direct(eigs, initial_state(b)), staged(eigs, ts.state);
        for (double t : {0.5, 3.0, 11.0}) EXPECT_NEAR(direct.survival(t), staged.survival(t), 1e-10);
    }
    EXPECT_THROW(two_step_quench(make(0.75, 0.5, 0.1), b), std::invalid_argument);
    EXPECT_THROW(two_step_quench(make(0.75, 1.0), b), std::invalid_argument);
}

TEST(Cutoff, AdaptiveSetupConverged)
{
    const auto& s = s1_setup();
    EXPECT_LT(s.ground_change, 1e-9);
    EXPECT_LT(s.tail_weight, 1e-8);
    const auto a = quench_averages(s);
    // doubling the cutoff leaves the averages unchanged
    const auto big = prepare_quench(s.params, fixed(2 * s.basis.n_max()));
    const auto b = quench_averages(big);
    EXPECT_NEAR(a.P, b.P, 1e-8);
    EXPECT_NEAR(a.n, b.n, 1e-6 * std::max(1.0, a.n));
}

TEST(Scaling, RejectsUnsortedList)
{
    EXPECT_THROW(size_scaling_study(make(0.75, 0.5), {30, 10}), std::invalid_argument);
    const auto pts = size_scaling_study(make(1.5, 0.5), {10, 30});
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_GT(pts[1].P, pts[0].P);
    EXPECT_GT(pts[1].Pq, pts[0].Pq);
}

TEST(TimeGrids, Shapes)
{
    const auto lg = log_time_grid();
    ASSERT_EQ(lg.size(), 400u);
    EXPECT_NEAR(lg.front(), 0.1, 1e-15);
    EXPECT_NEAR(lg.back(), 1e5, 1e-9);
    EXPECT_THROW(log_time_grid(0.0, 1.0, 10), std::invalid_argument);
    const auto li = linear_time_grid(0.0, 1.0, 11);
    EXPECT_DOUBLE_EQ(li[5], 0.5);
}
