#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "hheat/model.hpp"

namespace hheat {

using Complex = std::complex<double>;

/// [C]_ij = <a_i^dag a_j>. Hermitian, PSD, real nonnegative diagonal.
using MomentMatrix = Eigen::MatrixXcd;
/// [a]_i = <a_i>.
using FirstMoments = Eigen::VectorXcd;
/// [B]_ij = <a_i a_j>. Complex symmetric.
using AnomalousMoments = Eigen::MatrixXcd;

/// dC/dt = i[W,C] + {L,C} + M + {L_deph,C} + Diag(deph_j C_jj), with L_deph = -deph/2.
MomentMatrix apply_generator(const MomentMatrix& C, const GeneratorParts& G);

/// Column-stacking vectorization: vec(X)[i + j*n] = X(i,j), so vec(A X) = (1 (x) A) vec(X).
Eigen::VectorXcd vec(const Eigen::MatrixXcd& X);
Eigen::MatrixXcd unvec(const Eigen::VectorXcd& v, int n);

/// The homogeneous part of apply_generator as an n^2 x n^2 sparse matrix acting on vec(C),
/// i.e. vec(dC/dt) = system * vec(C) + vec(M).
Eigen::SparseMatrix<Complex> vectorized_generator(const GeneratorParts& G);

enum class SolverMethod {
    Auto,    ///< dense LU up to dense_limit sites, sparse LU above
    Dense,   ///< dense partial-pivot LU on the vectorized system
    Sparse,  ///< sparse LU (COLAMD ordering) on the vectorized system
    Evolve,  ///< RK4 relaxation from C = 0 until the residual bound is met
};

std::string to_string(SolverMethod m);
SolverMethod solver_method_from_string(const std::string& s);

struct SolverOptions {
    SolverMethod method = SolverMethod::Auto;
    /// Residual bound relative to ||M||_2.
    double tol = 1e-10;
    /// Largest site count solved with dense LU under SolverMethod::Auto.
    int dense_limit = 16;
    /// Evolve only: step (0 = default 0.05/max(V, Gamma, gamma)) and time budget.
    double dt = 0.0;
    double t_final = 1e5;
};

struct SolverInfo {
    std::string method;
    int dimension = 0;  ///< size of the vectorized system, n^2
    double elapsed_seconds = 0.0;
    double settle_time = 0.0;  ///< evolve only: simulated time at convergence
};

struct SteadyState {
    MomentMatrix C;
    double residual = 0.0;  ///< ||dC/dt||_2 at C
    SolverInfo solver;
};

/// Solve dC/dt = 0. Throws SingularSystemError when the steady state is not
/// unique (zero bath rate, decoupled bulk) and SolverError when the result
/// misses the residual bound tol * ||M||_2.
SteadyState solve_steady_state(const GeneratorParts& G, const SolverOptions& options = {});

/// Operator (spectral) norm. Uses the Hermitian eigen solver when X is Hermitian.
double operator_norm(const Eigen::MatrixXcd& X);

/// Smallest eigenvalue of the Hermitian part of C.
double min_eigenvalue(const MomentMatrix& C);

/// Default RK4 step 0.05 / max(V, Gamma_max, gamma_max). The uniform omega
/// commutes out of i[W, C] and does not constrain the step.
double default_time_step(const GeneratorParts& G);

struct EvolveOptions {
    double t_final = 0.0;
    double dt = 0.0;  ///< 0 selects default_time_step
    /// Store every k-th step (the final state is always stored). 0 stores only the final state.
    int sample_every = 0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<MomentMatrix> states;

    const MomentMatrix& final_state() const { return states.back(); }
};

/// Fixed-step classical RK4 of apply_generator, re-symmetrizing C <- (C + C^dag)/2
/// after every step. The step is t_final / ceil(t_final / dt), so never larger than dt.
Trajectory evolve(const MomentMatrix& C0, const GeneratorParts& G, const EvolveOptions& options);

/// d<a>/dt = (-iW + L + L_deph) <a>.
FirstMoments evolve_first_moments(const FirstMoments& a0, const GeneratorParts& G,
                                  const EvolveOptions& options);

/// dB/dt = -i(W B + B W^T) + (L + L_deph) B + B (L + L_deph) - Diag(deph_j B_jj).
/// The last term makes <a_j^2> dephase at 2*gamma_j, as a doubly-charged operator must.
AnomalousMoments anomalous_derivative(const AnomalousMoments& B, const GeneratorParts& G);
AnomalousMoments evolve_anomalous(const AnomalousMoments& B0, const GeneratorParts& G,
                                  const EvolveOptions& options);

}  // namespace hheat
