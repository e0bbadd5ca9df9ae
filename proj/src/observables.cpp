#include "hheat/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hheat/errors.hpp"

namespace hheat {

double boundary_current(const MomentMatrix& C, const GeneratorParts& G, BathSide side) {
    const BathCoupling& bath = side == BathSide::Hot ? G.hot : G.cold;
    if (bath.sites.empty()) throw InvariantViolation("boundary_current: no sites attached to this bath");
    if (C.rows() != G.size() || C.cols() != G.size()) throw DimensionError("boundary_current: dimension mismatch");

    double J = 0.0;
    for (int j : bath.sites) {
        J += bath.rate * G.omega * (bath.occupation - C(j, j).real());
        for (Eigen::SparseMatrix<double>::InnerIterator it(G.W, j); it; ++it) {
            const auto k = it.row();
            if (k == j) continue;
            J -= 0.5 * bath.rate * it.value() * (C(j, k) + C(k, j)).real();
        }
    }
    return J;
}

double bond_current(const MomentMatrix& C, const GeneratorParts& G, const Bond& bond) {
    if (!G.lattice.is_transport_bond(bond.first, bond.second)) {
        std::ostringstream msg;
        msg << "bond_current: (" << bond.first << ", " << bond.second << ") is not a transport-axis edge";
        throw InvariantViolation(msg.str());
    }
    // The site with the smaller transport coordinate is upstream.
    const int j = std::min(bond.first, bond.second);
    const int k = std::max(bond.first, bond.second);
    return 2.0 * G.omega * G.coupling * (std::complex<double>(0.0, 1.0) * C(j, k)).real();
}

double dephasing_current(const MomentMatrix& C, const GeneratorParts& G) {
    double J = 0.0;
    for (const auto& [j, k] : G.lattice.edges()) {
        if (G.deph(j) == 0.0 && G.deph(k) == 0.0) continue;
        const double v = G.W.coeff(j, k);
        J -= v * (0.5 * G.deph(j) * C(j, k) + 0.5 * G.deph(k) * C(k, j)).real();
    }
    return J;
}

std::vector<double> occupation_profile(const MomentMatrix& C, double tol) {
    const double scale = C.size() ? C.cwiseAbs().maxCoeff() : 0.0;
    std::vector<double> out(static_cast<std::size_t>(C.rows()));
    for (Eigen::Index j = 0; j < C.rows(); ++j) {
        const double n = C(j, j).real();
        if (n < -tol * scale) {
            std::ostringstream msg;
            msg << "negative occupation " << n << " at site " << j;
            throw InvariantViolation(msg.str());
        }
        out[static_cast<std::size_t>(j)] = std::max(n, 0.0);
    }
    return out;
}

std::vector<double> effective_temperatures(const MomentMatrix& C, double omega, double tol) {
    std::vector<double> out = occupation_profile(C, tol);
    for (double& n : out) n = temperature_from_occupation(omega, n);
    return out;
}

SeparabilityCertificate separability_certificate(const MomentMatrix& C, const AnomalousMoments& B,
                                                 const FirstMoments& a, double moment_tol, double psd_tol) {
    SeparabilityCertificate cert;
    const double scale = C.size() ? std::max(C.cwiseAbs().maxCoeff(), 1.0) : 1.0;
    cert.min_eigenvalue = C.size() ? min_eigenvalue(C) : 0.0;
    cert.first_moment_norm = a.size() ? a.norm() : 0.0;
    cert.anomalous_norm = B.size() ? operator_norm(B) : 0.0;
    cert.invariant_violation = cert.min_eigenvalue < -psd_tol * scale;

    std::ostringstream reason;
    if (cert.invariant_violation) reason << "C is not positive semidefinite (min eigenvalue " << cert.min_eigenvalue << "); ";
    if (cert.first_moment_norm > moment_tol) reason << "first moments nonzero; ";
    if (cert.anomalous_norm > moment_tol) reason << "anomalous moments nonzero; ";
    cert.reason = reason.str();
    cert.certified = cert.reason.empty();
    if (cert.certified) cert.reason = "classical: a = 0, B = 0, C >= 0";
    return cert;
}

double transverse_coherence_norm(const MomentMatrix& C, const Lattice& lattice) {
    if (lattice.dimension() < 2) throw DomainError("transverse_coherence_norm: lattice has no transverse axis");
    double q = 0.0;
    for (Eigen::Index j = 0; j < C.cols(); ++j) {
        for (Eigen::Index i = 0; i < C.rows(); ++i) {
            if (lattice.transverse_separated(static_cast<int>(i), static_cast<int>(j))) {
                q = std::max(q, std::abs(C(i, j)));
            }
        }
    }
    return q;
}

ObservableReport make_report(const MomentMatrix& C, const GeneratorParts& G) {
    ObservableReport r;
    r.J_hot = boundary_current(C, G, BathSide::Hot);
    r.J_cold = boundary_current(C, G, BathSide::Cold);
    for (const Bond& b : G.lattice.transport_bonds()) {
        r.J_bond.push_back({b, bond_current(C, G, b)});
        r.coherence_real_max = std::max(r.coherence_real_max, std::abs(C(b.first, b.second).real()));
    }
    r.occupations = occupation_profile(C);
    r.temps = effective_temperatures(C, G.omega);
    r.deph_current = dephasing_current(C, G);
    r.psd_min_eig = min_eigenvalue(C);
    return r;
}

}  // namespace hheat
