#include "hheat/analytic.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "hheat/errors.hpp"

namespace hheat {

ChainParams ChainParams::from_spec(const LatticeSpec& spec) {
    ChainParams p;
    p.omega = spec.omega;
    p.coupling = spec.coupling;
    p.rate_hot = spec.bath_hot.rate;
    p.rate_cold = spec.bath_cold.rate;
    p.n_hot = spec.bath_hot.resolved_occupation(spec.omega);
    p.n_cold = spec.bath_cold.resolved_occupation(spec.omega);
    p.dephasing = spec.dephasing_rate;
    return p;
}

Eigen::MatrixXcd ChainClosedForm::moment_matrix() const {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(length, length);
    for (int j = 0; j < length; ++j) {
        C(j, j) = occupation(j);
        if (j + 1 < length) {
            C(j, j + 1) = coherence();
            C(j + 1, j) = std::conj(coherence());
        }
    }
    return C;
}

namespace {

void check_chain(int length, const ChainParams& p) {
    if (length < 3) {
        throw DomainError("closed form requires N >= 3 (got " + std::to_string(length) +
                          "); use the numeric solver");
    }
    if (!(p.coupling > 0.0)) throw DomainError("closed form requires V > 0");
    if (!(p.rate_hot > 0.0) || !(p.rate_cold > 0.0)) throw DomainError("closed form requires bath rates > 0");
    if (!(p.dephasing >= 0.0)) throw DomainError("closed form requires dephasing >= 0");
}

// Shared pieces, with the product G1*GN formed once.
struct Terms {
    double g1, gn, prod, v2, asym, denom, extra;
};

Terms terms(int length, const ChainParams& p) {
    Terms t{};
    t.g1 = p.rate_hot;
    t.gn = p.rate_cold;
    t.prod = t.g1 * t.gn;
    t.v2 = 4.0 * p.coupling * p.coupling;
    t.asym = t.v2 * (t.g1 - t.gn);
    t.extra = 2.0 * p.dephasing * t.prod;  // multiplied by site-dependent integers below
    t.denom = (t.v2 + t.prod) * (t.g1 + t.gn) + static_cast<double>(length - 1) * t.extra;
    return t;
}

}  // namespace

ChainClosedForm chain_closed_form_dephased(int length, const ChainParams& p) {
    check_chain(length, p);
    const Terms t = terms(length, p);
    const double n_minus_1 = static_cast<double>(length - 1);

    ChainClosedForm out;
    out.length = length;
    out.nbar = 0.5 * (p.n_hot + p.n_cold);
    out.dn = 0.5 * (p.n_hot - p.n_cold);
    out.x = {0.0, -4.0 * p.coupling * t.prod / t.denom};
    out.e.resize(static_cast<std::size_t>(length));
    out.e.front() = (t.asym + t.g1 * t.gn * t.gn + t.g1 * t.g1 * t.gn + n_minus_1 * t.extra) / t.denom;
    out.e.back() = (t.asym - t.g1 * t.gn * t.gn - t.g1 * t.g1 * t.gn - n_minus_1 * t.extra) / t.denom;
    const double bulk = t.asym + t.g1 * t.gn * t.gn - t.g1 * t.g1 * t.gn;
    for (int j = 2; j <= length - 1; ++j) {
        // 1-based site j carries the gradient term 2 (N - 2j + 1) gamma G1 GN.
        const double slope = static_cast<double>(length - 2 * j + 1) * t.extra;
        out.e[static_cast<std::size_t>(j - 1)] = (bulk + slope) / t.denom;
    }
    out.current = chain_current(length, p);
    return out;
}

ChainClosedForm chain_closed_form(int length, const ChainParams& p) {
    ChainParams undephased = p;
    undephased.dephasing = 0.0;
    return chain_closed_form_dephased(length, undephased);
}

double chain_current(int length, const ChainParams& p) {
    check_chain(length, p);
    const Terms t = terms(length, p);
    return p.omega * t.v2 * t.prod * (p.n_hot - p.n_cold) / t.denom;
}

double lattice_current(const std::vector<int>& dims, double chain_current) {
    if (dims.empty()) throw DomainError("lattice_current: dims must be nonempty");
    const long volume = std::accumulate(dims.begin(), dims.end() - 1, 1L, std::multiplies<long>());
    return static_cast<double>(volume) * chain_current;
}

double CurrentScaling::current(int length) const { return chain_current(length, params); }

double CurrentScaling::local_slope(int a, int b) const {
    return std::log(current(b) / current(a)) / std::log(static_cast<double>(b) / static_cast<double>(a));
}

CurrentScaling heat_current_asymptote(const ChainParams& p) {
    if (!(p.dephasing >= 0.0)) throw DomainError("heat_current_asymptote: dephasing must be >= 0");
    CurrentScaling s;
    s.params = p;
    if (p.dephasing == 0.0) {
        s.regime = TransportRegime::Ballistic;
        s.limit = chain_current(3, p);
    } else {
        s.regime = TransportRegime::Diffusive;
        s.prefactor = 2.0 * p.omega * p.coupling * p.coupling * (p.n_hot - p.n_cold) / p.dephasing;
    }
    return s;
}

}  // namespace hheat
