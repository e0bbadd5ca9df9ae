#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hheat/dynamics.hpp"
#include "hheat/errors.hpp"
#include "oracle.hpp"

using namespace hheat;

namespace {

LatticeSpec make_spec(const oracle::Params& p) {
    LatticeSpec s;
    s.dims = p.dims;
    s.omega = p.omega;
    s.coupling = p.V;
    s.bath_hot = BathSpec::with_occupation(p.g_hot, p.n_hot);
    s.bath_cold = BathSpec::with_occupation(p.g_cold, p.n_cold);
    s.dephasing_rate = p.gamma;
    return s;
}

oracle::Params random_params(std::mt19937& rng) {
    std::uniform_int_distribution<int> extent(2, 4), rank(1, 2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    oracle::Params p;
    p.dims.resize(static_cast<std::size_t>(rank(rng)));
    for (int& d : p.dims) d = extent(rng);
    p.omega = 1.0 + 9.0 * u(rng);
    p.V = 0.05 + 0.5 * u(rng);
    p.g_hot = 0.02 + 0.5 * u(rng);
    p.g_cold = 0.02 + 0.5 * u(rng);
    p.n_hot = 3.0 * u(rng);
    p.n_cold = 3.0 * u(rng);
    p.gamma = u(rng) < 0.5 ? 0.0 : 0.3 * u(rng);
    return p;
}

const oracle::Params kP0{{5}, 10.0, 0.1, 0.1, 0.1, 2.0, 1.0, 0.0};

}  // namespace

TEST(Vectorize, RoundTripAndColumnStacking) {
    std::mt19937 rng(1);
    const Eigen::MatrixXcd X = oracle::random_complex(rng, 4, 4);
    EXPECT_EQ(unvec(vec(X), 4), X);
    EXPECT_EQ(vec(X)(1), X(1, 0));
    EXPECT_THROW(unvec(vec(X), 3), DimensionError);
}

TEST(Generator, MatchesKroneckerOracle) {
    std::mt19937 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_params(rng);
        const auto G = build_lattice_generator(make_spec(p));
        const auto f = oracle::liouvillian(oracle::model(p));
        const Eigen::MatrixXcd A = Eigen::MatrixXcd(vectorized_generator(G));
        ASSERT_LT((A - f.A).cwiseAbs().maxCoeff(), 1e-13);

        const Eigen::MatrixXcd C = oracle::random_hermitian(rng, G.size());
        const Eigen::VectorXcd expect = f.A * oracle::flat(C) + f.b;
        EXPECT_LT((vec(apply_generator(C, G)) - expect).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Generator, AffineInC) {
    std::mt19937 rng(3);
    const auto G = build_lattice_generator(make_spec({{3, 3}, 5.0, 0.3, 0.2, 0.1, 1.0, 0.5, 0.1}));
    const Eigen::MatrixXcd X = oracle::random_hermitian(rng, 9), Y = oracle::random_hermitian(rng, 9);
    const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(9, 9);
    const double a = 0.7, b = -1.3;
    const Eigen::MatrixXcd lhs = apply_generator(a * X + b * Y, G) - apply_generator(zero, G);
    const Eigen::MatrixXcd rhs = a * (apply_generator(X, G) - apply_generator(zero, G)) +
                                 b * (apply_generator(Y, G) - apply_generator(zero, G));
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Generator, PreservesHermiticity) {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_params(rng);
        const auto G = build_lattice_generator(make_spec(p));
        const Eigen::MatrixXcd D = apply_generator(oracle::random_hermitian(rng, G.size()), G);
        EXPECT_LT((D - D.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Generator, TraceBalance) {
    // Hopping and dephasing conserve the total number; only baths change it.
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = random_params(rng);
        const auto G = build_lattice_generator(make_spec(p));
        const Eigen::MatrixXcd C = oracle::random_hermitian(rng, G.size());
        double expect = 0.0;
        for (int j = 0; j < G.size(); ++j) expect += 2.0 * G.L(j) * C(j, j).real() + G.M(j);
        EXPECT_NEAR(apply_generator(C, G).trace().real(), expect, 1e-12);
    }
}

TEST(SteadyState, MatchesOracleOnRandomSpecs) {
    std::mt19937 rng(6);
    for (int trial = 0; trial < 25; ++trial) {
        const auto p = random_params(rng);
        const auto G = build_lattice_generator(make_spec(p));
        const SteadyState ss = solve_steady_state(G);
        const Eigen::MatrixXcd ref = oracle::steady_state(p);
        const double scale = ref.cwiseAbs().maxCoeff();
        EXPECT_LT((ss.C - ref).cwiseAbs().maxCoeff(), 1e-9 * scale);
        EXPECT_LT(ss.residual, 1e-10 * G.M.maxCoeff());
        EXPECT_LT((ss.C - ss.C.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_GE(min_eigenvalue(ss.C), -1e-10);
        EXPECT_EQ(ss.solver.dimension, G.size() * G.size());
    }
}

TEST(SteadyState, DenseSparseAndEvolveAgree) {
    const auto G = build_lattice_generator(make_spec({{2, 4}, 10.0, 0.1, 0.1, 0.15, 2.0, 1.0, 0.05}));
    SolverOptions o;
    o.method = SolverMethod::Dense;
    const auto dense = solve_steady_state(G, o);
    o.method = SolverMethod::Sparse;
    const auto sparse = solve_steady_state(G, o);
    o.method = SolverMethod::Evolve;
    const auto relaxed = solve_steady_state(G, o);
    EXPECT_EQ(dense.solver.method, "dense");
    EXPECT_EQ(sparse.solver.method, "sparse");
    EXPECT_EQ(relaxed.solver.method, "evolve");
    EXPECT_GT(relaxed.solver.settle_time, 0.0);
    EXPECT_LT(operator_norm(dense.C - sparse.C), 1e-12);
    EXPECT_LT(operator_norm(dense.C - relaxed.C), 1e-6);
}

TEST(SteadyState, ZeroCouplingIsSingular) {
    auto s = make_spec(kP0);
    s.coupling = 0.0;
    const auto G = build_lattice_generator(s);
    for (auto m : {SolverMethod::Auto, SolverMethod::Dense, SolverMethod::Sparse}) {
        SolverOptions o;
        o.method = m;
        EXPECT_THROW(solve_steady_state(G, o), SingularSystemError);
    }
}

TEST(SteadyState, SingleBathRateIsSingular) {
    auto G = build_lattice_generator(make_spec(kP0));
    G.hot.rate = 0.0;
    G.L(0) = 0.0;
    G.M(0) = 0.0;
    try {
        solve_steady_state(G);
        FAIL() << "expected SingularSystemError";
    } catch (const SingularSystemError& e) {
        EXPECT_NE(std::string(e.what()).find("bath rate must be positive"), std::string::npos);
    }
}

TEST(SteadyState, SolverMethodNames) {
    EXPECT_EQ(solver_method_from_string("direct"), SolverMethod::Auto);
    EXPECT_EQ(solver_method_from_string("evolve"), SolverMethod::Evolve);
    EXPECT_EQ(to_string(SolverMethod::Auto), "direct");
    EXPECT_THROW(solver_method_from_string("magic"), DomainError);
}

TEST(Evolve, ReachesSteadyStateFromZero) {
    const auto G = build_lattice_generator(make_spec(kP0));
    const auto ss = solve_steady_state(G);
    EvolveOptions o;
    o.t_final = 2000.0;
    const auto traj = evolve(MomentMatrix::Zero(5, 5), G, o);
    EXPECT_LT(operator_norm(traj.final_state() - ss.C), 1e-6);
    ASSERT_EQ(traj.times.size(), 1u);
    EXPECT_DOUBLE_EQ(traj.times.back(), 2000.0);
}

TEST(Evolve, Sampling) {
    const auto G = build_lattice_generator(make_spec(kP0));
    EvolveOptions o;
    o.t_final = 10.0;
    o.dt = 0.5;
    o.sample_every = 4;
    const auto traj = evolve(MomentMatrix::Zero(5, 5), G, o);
    ASSERT_EQ(traj.times.size(), 6u);
    EXPECT_DOUBLE_EQ(traj.times.front(), 0.0);
    EXPECT_DOUBLE_EQ(traj.times.back(), 10.0);
    EXPECT_THROW(evolve(MomentMatrix::Zero(5, 5), G, {-1.0, 0.1, 0}), DomainError);
    EXPECT_THROW(evolve(MomentMatrix::Zero(4, 4), G, o), DimensionError);
}

TEST(Evolve, FourthOrderAgainstMatrixExponential) {
    const oracle::Params p{{3}, 10.0, 0.1, 0.1, 0.1, 2.0, 1.0, 0.05};
    const auto G = build_lattice_generator(make_spec(p));
    std::mt19937 rng(8);
    const Eigen::MatrixXcd C0 = oracle::random_hermitian(rng, 3);
    const double t = 20.0;
    const Eigen::MatrixXcd exact = oracle::exact_flow(p, C0, t);
    auto error = [&](double dt) {
        EvolveOptions o;
        o.t_final = t;
        o.dt = dt;
        return operator_norm(evolve(C0, G, o).final_state() - exact);
    };
    const double coarse = error(1.0), fine = error(0.5);
    EXPECT_GT(coarse / fine, 12.0) << coarse << " " << fine;
}

TEST(Evolve, DivergenceIsReported) {
    const auto G = build_lattice_generator(make_spec({{5}, 10.0, 5.0, 0.1, 0.1, 2.0, 1.0, 0.0}));
    EvolveOptions o;
    o.t_final = 1000.0;
    o.dt = 2.0;
    try {
        evolve(MomentMatrix::Zero(5, 5), G, o);
        FAIL() << "expected IntegrationError";
    } catch (const IntegrationError& e) {
        EXPECT_GT(e.time(), 0.0);
    }
}

TEST(Moments, SingleBathSiteDecayRates) {
    // Uncoupled bath sites: each moment is a damped phasor.
    const oracle::Params p{{2}, 10.0, 0.0, 0.4, 0.4, 1.0, 1.0, 0.1};
    auto s = make_spec(p);
    s.coupling = 0.0;
    const auto G = build_lattice_generator(s);
    FirstMoments a0(2);
    a0 << Complex(1.0, 0.5), Complex(-0.3, 0.2);
    AnomalousMoments B0 = AnomalousMoments::Zero(2, 2);
    B0(0, 0) = 1.0;
    B0(1, 1) = Complex(0.0, 2.0);
    EvolveOptions o;
    o.t_final = 7.0;
    o.dt = 0.01;
    const auto a = evolve_first_moments(a0, G, o);
    const auto B = evolve_anomalous(B0, G, o);
    // <a> decays at (Gamma + gamma) / 2 and rotates at omega.
    const Complex phase1 = std::exp(Complex(-(0.4 + 0.1) / 2.0, -10.0) * 7.0);
    EXPECT_LT(std::abs(a(0) - a0(0) * phase1), 1e-8);
    EXPECT_LT(std::abs(a(1) - a0(1) * phase1), 1e-8);
    // <a^2> decays at Gamma + 2 gamma and rotates at 2 omega.
    const Complex phase2 = std::exp(Complex(-(0.4 + 2.0 * 0.1), -20.0) * 7.0);
    EXPECT_LT(std::abs(B(0, 0) - B0(0, 0) * phase2), 1e-8);
    EXPECT_LT(std::abs(B(1, 1) - B0(1, 1) * phase2), 1e-8);
}

TEST(Moments, AnomalousDerivativeMatchesDefinition) {
    std::mt19937 rng(9);
    const auto G = build_lattice_generator(make_spec({{4}, 3.0, 0.2, 0.3, 0.1, 1.0, 0.0, 0.07}));
    Eigen::MatrixXcd B = oracle::random_complex(rng, 4, 4);
    B = (0.5 * (B + B.transpose())).eval();
    const Eigen::MatrixXcd W = G.dense_W().cast<Complex>();
    const Eigen::VectorXcd lam = (G.L - 0.5 * G.deph).cast<Complex>();
    Eigen::MatrixXcd expect = -Complex(0, 1) * (W * B + B * W);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) expect(i, j) += (lam(i) + lam(j)) * B(i, j);
        expect(i, i) -= G.deph(i) * B(i, i);
    }
    EXPECT_LT((anomalous_derivative(B, G) - expect).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Moments, DecayOnDampedChain) {
    std::mt19937 rng(10);
    const auto G = build_lattice_generator(make_spec({{4}, 10.0, 0.1, 0.1, 0.1, 2.0, 1.0, 0.0}));
    const Eigen::VectorXcd a0 = oracle::random_complex(rng, 4, 1);
    Eigen::MatrixXcd B0 = oracle::random_complex(rng, 4, 4);
    B0 = (0.5 * (B0 + B0.transpose())).eval();
    EvolveOptions o;
    o.t_final = 2000.0;
    EXPECT_LE(evolve_first_moments(a0, G, o).norm(), 1e-6 * a0.norm());
    EXPECT_LE(operator_norm(evolve_anomalous(B0, G, o)), 1e-6 * operator_norm(B0));
}

TEST(Norms, OperatorNormAndMinEigenvalue) {
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(2, 2);
    X(0, 0) = 3.0;
    X(1, 1) = -4.0;
    EXPECT_NEAR(operator_norm(X), 4.0, 1e-14);
    EXPECT_NEAR(min_eigenvalue(X), -4.0, 1e-14);
    X(0, 1) = Complex(0, 1);
    EXPECT_NEAR(operator_norm(X), X.jacobiSvd().singularValues()(0), 1e-12);
}

TEST(Moments, ZeroStaysZero) {
    const auto G = build_lattice_generator(make_spec({{4}, 10.0, 0.1, 0.1, 0.1, 2.0, 1.0, 0.05}));
    EvolveOptions o;
    o.t_final = 50.0;
    EXPECT_EQ(evolve_first_moments(FirstMoments::Zero(4), G, o).norm(), 0.0);
    EXPECT_EQ(evolve_anomalous(AnomalousMoments::Zero(4, 4), G, o).norm(), 0.0);
}

TEST(Moments, DephasingAcceleratesAnomalousDecay) {
    std::mt19937 rng(11);
    Eigen::MatrixXcd B0 = oracle::random_complex(rng, 5, 5);
    B0 = (0.5 * (B0 + B0.transpose())).eval();
    EvolveOptions o;
    o.t_final = 40.0;
    double previous = operator_norm(B0);
    for (double gamma : {0.0, 0.02, 0.05, 0.1}) {
        const auto G = build_lattice_generator(make_spec({{5}, 10.0, 0.1, 0.1, 0.1, 2.0, 1.0, gamma}));
        const double norm = operator_norm(evolve_anomalous(B0, G, o));
        EXPECT_LT(norm, previous) << gamma;
        previous = norm;
    }
}

TEST(Generator, EquilibriumIsFixedPoint) {
    for (double gamma : {0.0, 0.1}) {
        const auto G = build_lattice_generator(make_spec({{3, 4}, 10.0, 0.1, 0.2, 0.3, 1.5, 1.5, gamma}));
        const MomentMatrix C = 1.5 * MomentMatrix::Identity(12, 12);
        EXPECT_LT(apply_generator(C, G).cwiseAbs().maxCoeff(), 1e-14) << gamma;
        EvolveOptions o;
        o.t_final = 100.0;
        EXPECT_LT((evolve(C, G, o).final_state() - C).cwiseAbs().maxCoeff(), 1e-12) << gamma;
        const auto ss = solve_steady_state(G, SolverOptions{});
        EXPECT_LT((ss.C - C).cwiseAbs().maxCoeff(), 1e-10) << gamma;
    }
}

TEST(Generator, DephasingLeavesDiagonalStatesAlone) {
    std::mt19937 rng(12);
    auto with = make_spec({{6}, 10.0, 0.1, 0.1, 0.1, 2.0, 1.0, 0.2});
    auto without = with;
    without.dephasing_rate = 0.0;
    const auto Gd = build_lattice_generator(with);
    const auto G0 = build_lattice_generator(without);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    MomentMatrix C = MomentMatrix::Zero(6, 6);
    for (int j = 0; j < 6; ++j) C(j, j) = u(rng);
    EXPECT_LT((apply_generator(C, Gd) - apply_generator(C, G0)).cwiseAbs().maxCoeff(), 1e-15);
}
