#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hheat/dynamics.hpp"
#include "hheat/model.hpp"

namespace hheat {

enum class BathSide { Hot, Cold };

/// Energy flow from one bath into the lattice, Tr(H L_bath rho), summed over the
/// attached hyper-surface: sum_j Gamma omega (n - C_jj) - (Gamma/2) sum_{k~j} V (C_jk + C_kj).
/// Throws InvariantViolation when the side has no attached sites.
double boundary_current(const MomentMatrix& C, const GeneratorParts& G, BathSide side);

using Bond = std::pair<int, int>;

/// 2 omega V Re(i C_{j,k}) for a transport-axis bond (j, k), j on the hot side of k.
/// Throws InvariantViolation for pairs that are not transport-axis edges.
double bond_current(const MomentMatrix& C, const GeneratorParts& G, const Bond& bond);

/// Energy exchanged with the dephasing environments: -sum_edges V (gamma_j/2 C_jk + gamma_k/2 C_kj).
double dephasing_current(const MomentMatrix& C, const GeneratorParts& G);

/// diag(C). Throws InvariantViolation if any entry is below -tol * max|C|.
std::vector<double> occupation_profile(const MomentMatrix& C, double tol = 1e-10);

/// T_j = omega / ln(1 + 1/C_jj), with T_j = 0 where C_jj = 0.
std::vector<double> effective_temperatures(const MomentMatrix& C, double omega, double tol = 1e-10);

struct SeparabilityCertificate {
    bool certified = false;
    bool invariant_violation = false;  ///< C has an eigenvalue below -psd_tol
    double min_eigenvalue = 0.0;
    double first_moment_norm = 0.0;
    double anomalous_norm = 0.0;
    std::string reason;
};

/// Classicality test: a = 0, B = 0 and C >= 0 means the Gaussian state has a positive
/// P-function, hence is fully separable. psd_tol is relative to max|C|.
SeparabilityCertificate separability_certificate(const MomentMatrix& C, const AnomalousMoments& B,
                                                 const FirstMoments& a, double moment_tol = 1e-6,
                                                 double psd_tol = 1e-10);

/// max |C_ij| over pairs of sites in different transport chains. Throws DomainError for d = 1.
double transverse_coherence_norm(const MomentMatrix& C, const Lattice& lattice);

struct BondCurrent {
    Bond bond;
    double current = 0.0;
};

struct ObservableReport {
    double J_hot = 0.0;
    double J_cold = 0.0;
    std::vector<BondCurrent> J_bond;
    std::vector<double> occupations;
    std::vector<double> temps;
    double coherence_real_max = 0.0;  ///< max |Re C_jk| over transport bonds
    double deph_current = 0.0;
    double psd_min_eig = 0.0;
};

ObservableReport make_report(const MomentMatrix& C, const GeneratorParts& G);

}  // namespace hheat
