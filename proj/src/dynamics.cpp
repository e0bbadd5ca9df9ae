#include "hheat/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "hheat/errors.hpp"

namespace hheat {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_shape(const Eigen::MatrixXcd& X, const GeneratorParts& G, const char* who) {
    const int n = G.size();
    if (X.rows() != n || X.cols() != n || G.W.rows() != n || G.M.size() != n || G.deph.size() != n) {
        std::ostringstream msg;
        msg << who << ": dimension mismatch (state " << X.rows() << "x" << X.cols() << ", generator " << n
            << ")";
        throw DimensionError(msg.str());
    }
}

// Diagonal of L + L_deph.
Eigen::VectorXd total_damping(const GeneratorParts& G) { return G.L - 0.5 * G.deph; }

Eigen::SparseMatrix<Complex> complex_W(const GeneratorParts& G) { return G.W.cast<Complex>(); }

double bath_norm(const GeneratorParts& G) { return G.M.cwiseAbs().maxCoeff(); }

// Every site must reach a damped site through the hopping graph; otherwise
// the undamped component keeps a free occupation and dC/dt = 0 has many solutions.
void require_connected_to_baths(const GeneratorParts& G) {
    const int n = G.size();
    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    for (int i = 0; i < n; ++i) {
        if (G.L(i) < 0.0) {
            seen[i] = 1;
            frontier.push(i);
        }
    }
    while (!frontier.empty()) {
        const int k = frontier.front();
        frontier.pop();
        for (Eigen::SparseMatrix<double>::InnerIterator it(G.W, k); it; ++it) {
            if (it.value() != 0.0 && !seen[it.row()]) {
                seen[it.row()] = 1;
                frontier.push(static_cast<int>(it.row()));
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!seen[i]) {
            std::ostringstream msg;
            msg << "non-unique steady state: site " << i << " is not coupled to any bath";
            throw SingularSystemError(msg.str());
        }
    }
}

template <class Derivative, class State>
State rk4_step(const Derivative& f, const State& y, double h) {
    const State k1 = f(y);
    const State k2 = f(y + (0.5 * h) * k1);
    const State k3 = f(y + (0.5 * h) * k2);
    const State k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct StepPlan {
    long steps;
    double h;
};

StepPlan plan_steps(const EvolveOptions& options, const GeneratorParts& G) {
    if (!(options.t_final > 0.0) || !std::isfinite(options.t_final)) {
        throw DomainError("evolve: t_final must be positive");
    }
    double dt = options.dt;
    if (dt == 0.0) dt = default_time_step(G);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("evolve: dt must be positive");
    const long steps = std::max(1L, static_cast<long>(std::ceil(options.t_final / dt - 1e-9)));
    return {steps, options.t_final / static_cast<double>(steps)};
}

// Copy of G with the mean on-site frequency removed from W. First and anomalous
// moments carry phases exp(-i w t) and exp(-2i w t) that RK4 would otherwise
// have to resolve; they are applied exactly afterwards.
GeneratorParts rotating_frame(const GeneratorParts& G, double& freq) {
    GeneratorParts R = G;
    freq = G.size() > 0 ? Eigen::MatrixXd(G.W).diagonal().mean() : 0.0;
    for (int i = 0; i < R.size(); ++i) R.W.coeffRef(i, i) -= freq;
    R.W.prune(0.0);
    return R;
}

template <class State>
void require_finite(const State& y, double t) {
    if (!y.allFinite()) {
        std::ostringstream msg;
        msg << "non-finite values at t = " << t << "; reduce the step size";
        throw IntegrationError(msg.str(), t);
    }
}

}  // namespace

MomentMatrix apply_generator(const MomentMatrix& C, const GeneratorParts& G) {
    check_shape(C, G, "apply_generator");
    const auto W = complex_W(G);
    MomentMatrix out = kI * (W * C - C * W);
    const Eigen::VectorXd lam = total_damping(G);
    const int n = G.size();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) out(i, j) += (lam(i) + lam(j)) * C(i, j);
    }
    for (int i = 0; i < n; ++i) out(i, i) += G.M(i) + G.deph(i) * C(i, i);
    return out;
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& X) {
    return Eigen::Map<const Eigen::VectorXcd>(X.data(), X.size());
}

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, int n) {
    if (v.size() != static_cast<Eigen::Index>(n) * n) throw DimensionError("unvec: length is not n^2");
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), n, n);
}

Eigen::SparseMatrix<Complex> vectorized_generator(const GeneratorParts& G) {
    const int n = G.size();
    // K = iW + Diag(L + L_deph); the homogeneous map is K C + C K^dag + Diag(deph_j C_jj).
    Eigen::SparseMatrix<Complex> K = kI * complex_W(G);
    const Eigen::VectorXd lam = total_damping(G);
    for (int i = 0; i < n; ++i) K.coeffRef(i, i) += lam(i);
    K.makeCompressed();

    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(static_cast<std::size_t>(2 * K.nonZeros() * n + n));
    for (int col = 0; col < n; ++col) {
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(K, col); it; ++it) {
            const int r = static_cast<int>(it.row());
            const int k = static_cast<int>(it.col());
            for (int j = 0; j < n; ++j) {
                // (K C)_{r j} gets K_{r k} C_{k j}
                t.emplace_back(r + j * n, k + j * n, it.value());
            }
            for (int i = 0; i < n; ++i) {
                // (C K^dag)_{i r} gets C_{i k} conj(K_{r k})
                t.emplace_back(i + r * n, i + k * n, std::conj(it.value()));
            }
        }
    }
    for (int i = 0; i < n; ++i) t.emplace_back(i + i * n, i + i * n, G.deph(i));

    Eigen::SparseMatrix<Complex> sys(n * n, n * n);
    sys.setFromTriplets(t.begin(), t.end());
    // The omega terms cancel exactly on the diagonal; drop the resulting zeros so
    // structurally singular systems are detected as such.
    sys.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return v != Complex(0.0, 0.0); });
    sys.makeCompressed();
    return sys;
}

std::string to_string(SolverMethod m) {
    switch (m) {
        case SolverMethod::Auto: return "direct";
        case SolverMethod::Dense: return "dense";
        case SolverMethod::Sparse: return "sparse";
        case SolverMethod::Evolve: return "evolve";
    }
    return "direct";
}

SolverMethod solver_method_from_string(const std::string& s) {
    if (s == "direct" || s == "auto") return SolverMethod::Auto;
    if (s == "dense") return SolverMethod::Dense;
    if (s == "sparse") return SolverMethod::Sparse;
    if (s == "evolve") return SolverMethod::Evolve;
    throw DomainError("unknown solver method '" + s + "' (expected direct, dense, sparse or evolve)");
}

double operator_norm(const Eigen::MatrixXcd& X) {
    if (X.size() == 0) return 0.0;
    const double scale = X.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    if ((X - X.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * scale) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (X + X.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(X);
    return svd.singularValues()(0);
}

double min_eigenvalue(const MomentMatrix& C) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (C + C.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double default_time_step(const GeneratorParts& G) {
    double rate = 0.0;
    for (int k = 0; k < G.W.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(G.W, k); it; ++it) {
            if (it.row() != it.col()) rate = std::max(rate, std::abs(it.value()));
        }
    }
    if (G.size() > 0) {
        rate = std::max(rate, (-2.0 * G.L).maxCoeff());
        rate = std::max(rate, G.deph.maxCoeff());
    }
    return rate > 0.0 ? 0.05 / rate : 0.05;
}

namespace {

MomentMatrix solve_vectorized(const GeneratorParts& G, bool dense) {
    const int n = G.size();
    const Eigen::SparseMatrix<Complex> sys = vectorized_generator(G);
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n) * n);
    for (int i = 0; i < n; ++i) rhs(i + i * n) = -G.M(i);

    Eigen::VectorXcd x;
    if (dense) {
        const Eigen::MatrixXcd dense_sys(sys);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(dense_sys);
        if (!(lu.rcond() > 1e-13)) {
            throw SingularSystemError("non-unique steady state: vectorized system is singular");
        }
        x = lu.solve(rhs);
    } else {
        Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
        lu.analyzePattern(sys);
        lu.factorize(sys);
        if (lu.info() != Eigen::Success) {
            throw SingularSystemError("non-unique steady state: vectorized system is singular (" +
                                      lu.lastErrorMessage() + ")");
        }
        x = lu.solve(rhs);
    }
    if (!x.allFinite()) throw SingularSystemError("non-unique steady state: solve produced non-finite values");
    MomentMatrix C = unvec(x, n);
    return 0.5 * (C + C.adjoint());
}

MomentMatrix relax_by_evolution(const GeneratorParts& G, const SolverOptions& options, double bound,
                                double& settle_time) {
    const int n = G.size();
    const double dt = options.dt > 0.0 ? options.dt : default_time_step(G);
    if (!(options.t_final > 0.0)) throw DomainError("evolve solver: t_final must be positive");
    const auto f = [&G](const MomentMatrix& C) { return apply_generator(C, G); };
    constexpr int check_every = 20;

    MomentMatrix C = MomentMatrix::Zero(n, n);
    double t = 0.0;
    long step = 0;
    while (true) {
        if (step % check_every == 0 && operator_norm(f(C)) <= bound) break;
        if (t >= options.t_final) {
            std::ostringstream msg;
            msg << "evolve solver did not reach the residual bound by t = " << options.t_final;
            throw SolverError(msg.str());
        }
        C = rk4_step(f, C, dt);
        C = 0.5 * (C + C.adjoint()).eval();
        t += dt;
        ++step;
        require_finite(C, t);
    }
    settle_time = t;
    return C;
}

}  // namespace

SteadyState solve_steady_state(const GeneratorParts& G, const SolverOptions& options) {
    const int n = G.size();
    if (n == 0) throw DimensionError("solve_steady_state: empty generator");
    check_shape(MomentMatrix::Zero(n, n), G, "solve_steady_state");
    if (!(G.hot.rate > 0.0) || !(G.cold.rate > 0.0)) {
        throw SingularSystemError("non-unique steady state: bath rate must be positive");
    }
    if (!(options.tol > 0.0)) throw DomainError("solve_steady_state: tol must be positive");
    require_connected_to_baths(G);

    const auto start = std::chrono::steady_clock::now();
    const double m_norm = bath_norm(G);
    const double bound = options.tol * (m_norm > 0.0 ? m_norm : 1.0);

    SteadyState out;
    out.solver.dimension = n * n;
    SolverMethod method = options.method;
    if (method == SolverMethod::Auto) {
        method = n <= options.dense_limit ? SolverMethod::Dense : SolverMethod::Sparse;
    }
    out.solver.method = to_string(method);

    switch (method) {
        case SolverMethod::Dense: out.C = solve_vectorized(G, true); break;
        case SolverMethod::Sparse: out.C = solve_vectorized(G, false); break;
        case SolverMethod::Evolve: out.C = relax_by_evolution(G, options, bound, out.solver.settle_time); break;
        case SolverMethod::Auto: break;
    }
    out.residual = operator_norm(apply_generator(out.C, G));
    out.solver.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!(out.residual <= bound)) {
        std::ostringstream msg;
        msg << "steady-state residual " << out.residual << " exceeds bound " << bound;
        throw SolverError(msg.str());
    }
    return out;
}

Trajectory evolve(const MomentMatrix& C0, const GeneratorParts& G, const EvolveOptions& options) {
    check_shape(C0, G, "evolve");
    const StepPlan plan = plan_steps(options, G);
    const auto f = [&G](const MomentMatrix& C) { return apply_generator(C, G); };

    Trajectory traj;
    MomentMatrix C = C0;
    if (options.sample_every > 0) {
        traj.times.push_back(0.0);
        traj.states.push_back(C);
    }
    for (long s = 1; s <= plan.steps; ++s) {
        C = rk4_step(f, C, plan.h);
        C = 0.5 * (C + C.adjoint()).eval();
        const double t = plan.h * static_cast<double>(s);
        require_finite(C, t);
        const bool last = s == plan.steps;
        if (last || (options.sample_every > 0 && s % options.sample_every == 0)) {
            traj.times.push_back(last ? options.t_final : t);
            traj.states.push_back(C);
        }
    }
    return traj;
}

FirstMoments evolve_first_moments(const FirstMoments& a0, const GeneratorParts& G,
                                  const EvolveOptions& options) {
    if (a0.size() != G.size()) throw DimensionError("evolve_first_moments: dimension mismatch");
    const StepPlan plan = plan_steps(options, G);
    double freq = 0.0;
    const GeneratorParts R = rotating_frame(G, freq);
    const auto W = complex_W(R);
    const Eigen::VectorXcd lam = total_damping(R).cast<Complex>();
    const auto f = [&](const FirstMoments& a) -> FirstMoments {
        return (-kI * (W * a)) + lam.cwiseProduct(a);
    };
    FirstMoments a = a0;
    for (long s = 1; s <= plan.steps; ++s) {
        a = rk4_step(f, a, plan.h);
        require_finite(a, plan.h * static_cast<double>(s));
    }
    return std::exp(-kI * (freq * options.t_final)) * a;
}

AnomalousMoments anomalous_derivative(const AnomalousMoments& B, const GeneratorParts& G) {
    check_shape(B, G, "anomalous_derivative");
    const auto W = complex_W(G);
    // W is symmetric, so B W^T = B W.
    AnomalousMoments out = -kI * (W * B + B * W);
    const Eigen::VectorXd lam = total_damping(G);
    const int n = G.size();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) out(i, j) += (lam(i) + lam(j)) * B(i, j);
    }
    for (int i = 0; i < n; ++i) out(i, i) -= G.deph(i) * B(i, i);
    return out;
}

AnomalousMoments evolve_anomalous(const AnomalousMoments& B0, const GeneratorParts& G,
                                  const EvolveOptions& options) {
    check_shape(B0, G, "evolve_anomalous");
    const StepPlan plan = plan_steps(options, G);
    double freq = 0.0;
    const GeneratorParts R = rotating_frame(G, freq);
    const auto f = [&R](const AnomalousMoments& B) { return anomalous_derivative(B, R); };
    AnomalousMoments B = B0;
    for (long s = 1; s <= plan.steps; ++s) {
        B = rk4_step(f, B, plan.h);
        B = 0.5 * (B + B.transpose()).eval();
        require_finite(B, plan.h * static_cast<double>(s));
    }
    return std::exp(-kI * (2.0 * freq * options.t_final)) * B;
}

}  // namespace hheat
