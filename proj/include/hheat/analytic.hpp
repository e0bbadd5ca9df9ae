#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hheat/model.hpp"

namespace hheat {

/// Parameters of a uniform boundary-driven chain.
struct ChainParams {
    double omega = 10.0;
    double coupling = 0.1;
    double rate_hot = 0.1;
    double rate_cold = 0.1;
    double n_hot = 2.0;
    double n_cold = 1.0;
    double dephasing = 0.0;

    /// Transport-axis chain parameters of a lattice spec (baths resolved to occupations).
    static ChainParams from_spec(const LatticeSpec& spec);
};

/// Steady state C = nbar*1 + dn*D with D tridiagonal: diagonal e, upper
/// off-diagonal x (purely imaginary), lower off-diagonal conj(x).
struct ChainClosedForm {
    int length = 0;
    std::complex<double> x;
    std::vector<double> e;
    double nbar = 0.0;
    double dn = 0.0;
    double current = 0.0;

    /// <a_j^dag a_{j+1}> = x * dn.
    std::complex<double> coherence() const { return x * dn; }
    double occupation(int site) const { return nbar + dn * e.at(site); }
    Eigen::MatrixXcd moment_matrix() const;
};

/// Closed-form steady state of the undephased chain, N >= 3.
/// Throws DomainError for N < 3 or nonpositive V, Gamma.
ChainClosedForm chain_closed_form(int length, const ChainParams& p);

/// Closed form with uniform dephasing gamma >= 0. Reduces to chain_closed_form at gamma = 0.
ChainClosedForm chain_closed_form_dephased(int length, const ChainParams& p);

/// Heat current of the (possibly dephased) chain: 4 omega V^2 G1 GN (n1 - nN) / denominator.
double chain_current(int length, const ChainParams& p);

/// Total current of a lattice of identical decoupled chains: transverse volume times chain current.
double lattice_current(const std::vector<int>& dims, double chain_current);

enum class TransportRegime { Ballistic, Diffusive };

/// Large-N behaviour of the chain current.
struct CurrentScaling {
    TransportRegime regime = TransportRegime::Ballistic;
    /// Ballistic: the N-independent current. Diffusive: 0.
    double limit = 0.0;
    /// Diffusive: J ~ prefactor / N with prefactor = 2 omega V^2 (n1 - nN) / gamma. Ballistic: 0.
    double prefactor = 0.0;
    ChainParams params;

    /// Exact finite-N current.
    double current(int length) const;
    /// ln(J(b)/J(a)) / ln(b/a).
    double local_slope(int a, int b) const;
};

CurrentScaling heat_current_asymptote(const ChainParams& p);

}  // namespace hheat
