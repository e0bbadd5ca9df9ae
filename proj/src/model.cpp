#include "hheat/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "hheat/errors.hpp"

namespace hheat {

double occupation_from_temperature(double omega, double temperature) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw DomainError("occupation_from_temperature: omega must be positive");
    }
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw DomainError("occupation_from_temperature: temperature must be positive");
    }
    // expm1 keeps the high-temperature limit n ~ T/omega accurate.
    return 1.0 / std::expm1(omega / temperature);
}

double temperature_from_occupation(double omega, double occupation) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw DomainError("temperature_from_occupation: omega must be positive");
    }
    if (!(occupation >= 0.0) || !std::isfinite(occupation)) {
        throw DomainError("temperature_from_occupation: occupation must be nonnegative");
    }
    if (occupation == 0.0) return 0.0;
    return omega / std::log1p(1.0 / occupation);
}

BathSpec BathSpec::with_occupation(double rate, double n) {
    BathSpec b;
    b.rate = rate;
    b.occupation = n;
    return b;
}

BathSpec BathSpec::with_temperature(double rate, double T) {
    BathSpec b;
    b.rate = rate;
    b.temperature = T;
    return b;
}

double BathSpec::resolved_occupation(double omega) const {
    if (occupation) return *occupation;
    if (temperature) return occupation_from_temperature(omega, *temperature);
    throw ValidationError("bath needs either an occupation or a temperature");
}

LatticeSpec LatticeSpec::chain(int n, double omega, double coupling, BathSpec hot, BathSpec cold,
                               double dephasing) {
    LatticeSpec s;
    s.dims = {n};
    s.omega = omega;
    s.coupling = coupling;
    s.bath_hot = std::move(hot);
    s.bath_cold = std::move(cold);
    s.dephasing_rate = dephasing;
    return s;
}

namespace {

void check_bath(const BathSpec& bath, const char* side, std::vector<Diagnostic>& out) {
    auto error = [&](const char* code, const std::string& msg) {
        out.push_back({Severity::Error, code, std::string(side) + " bath: " + msg});
    };
    if (!(bath.rate > 0.0) || !std::isfinite(bath.rate)) {
        error("bath_rate", "bath rate must be positive");
    }
    if (bath.occupation.has_value() == bath.temperature.has_value()) {
        error("bath_state", "exactly one of occupation or temperature must be given");
        return;
    }
    if (bath.occupation && (!(*bath.occupation >= 0.0) || !std::isfinite(*bath.occupation))) {
        error("bath_occupation", "occupation must be nonnegative");
    }
    if (bath.temperature && (!(*bath.temperature > 0.0) || !std::isfinite(*bath.temperature))) {
        error("bath_temperature", "temperature must be positive");
    }
}

}  // namespace

std::vector<Diagnostic> validate_spec(const LatticeSpec& spec) {
    std::vector<Diagnostic> out;
    if (spec.dims.empty()) {
        out.push_back({Severity::Error, "dims", "dims must contain at least one axis"});
    }
    for (std::size_t k = 0; k < spec.dims.size(); ++k) {
        if (spec.dims[k] < 2) {
            std::ostringstream msg;
            msg << "dims[" << k << "] = " << spec.dims[k] << ": every axis needs at least 2 sites";
            out.push_back({Severity::Error, "dims", msg.str()});
        }
    }
    if (!(spec.omega > 0.0) || !std::isfinite(spec.omega)) {
        out.push_back({Severity::Error, "omega", "omega must be positive"});
    }
    if (!(spec.coupling >= 0.0) || !std::isfinite(spec.coupling)) {
        out.push_back({Severity::Error, "coupling", "coupling must be nonnegative"});
    }
    if (!(spec.dephasing_rate >= 0.0) || !std::isfinite(spec.dephasing_rate)) {
        out.push_back({Severity::Error, "dephasing", "dephasing rate must be nonnegative"});
    }
    check_bath(spec.bath_hot, "hot", out);
    check_bath(spec.bath_cold, "cold", out);

    if (spec.coupling >= spec.omega && spec.omega > 0.0) {
        out.push_back({Severity::Warning, "rwa",
                       "coupling >= omega: rotating-wave approximation requires omega >> V"});
    }
    if (spec.coupling == 0.0) {
        out.push_back({Severity::Warning, "non_unique",
                       "coupling is zero: bulk occupations are undetermined, steady state not unique"});
    }
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
        if (d.severity == Severity::Error) return true;
    }
    return false;
}

void require_valid(const LatticeSpec& spec) {
    for (const auto& d : validate_spec(spec)) {
        if (d.severity == Severity::Error) throw ValidationError(d.message);
    }
}

Lattice::Lattice(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw DimensionError("Lattice: need at least one axis");
    for (int n : dims_) {
        if (n < 1) throw DimensionError("Lattice: axis lengths must be positive");
    }
    strides_.assign(dims_.size(), 1);
    for (int k = static_cast<int>(dims_.size()) - 2; k >= 0; --k) {
        strides_[k] = strides_[k + 1] * dims_[k + 1];
    }
    size_ = strides_[0] * dims_[0];
}

int Lattice::flatten(const std::vector<int>& coords) const {
    if (coords.size() != dims_.size()) throw DimensionError("flatten: wrong coordinate count");
    int flat = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (coords[k] < 0 || coords[k] >= dims_[k]) throw DimensionError("flatten: coordinate out of range");
        flat += coords[k] * strides_[k];
    }
    return flat;
}

std::vector<int> Lattice::unflatten(int flat) const {
    if (flat < 0 || flat >= size_) throw DimensionError("unflatten: index out of range");
    std::vector<int> coords(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        coords[k] = flat / strides_[k];
        flat %= strides_[k];
    }
    return coords;
}

std::vector<std::pair<int, int>> Lattice::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size_; ++i) {
        auto c = unflatten(i);
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            if (c[k] + 1 < dims_[k]) out.emplace_back(i, i + strides_[k]);
        }
    }
    return out;
}

std::vector<std::pair<int, int>> Lattice::transport_bonds() const {
    std::vector<std::pair<int, int>> out;
    const int n = dims_.back();
    for (int i = 0; i < size_; ++i) {
        if (i % n + 1 < n) out.emplace_back(i, i + 1);
    }
    return out;
}

bool Lattice::is_edge(int i, int j) const {
    if (i < 0 || j < 0 || i >= size_ || j >= size_ || i == j) return false;
    auto a = unflatten(i);
    auto b = unflatten(j);
    int manhattan = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) manhattan += std::abs(a[k] - b[k]);
    return manhattan == 1;
}

bool Lattice::is_transport_bond(int i, int j) const {
    if (!is_edge(i, j)) return false;
    return unflatten(i).back() != unflatten(j).back();
}

std::vector<int> Lattice::hot_surface() const {
    std::vector<int> out;
    for (int i = 0; i < size_; i += dims_.back()) out.push_back(i);
    return out;
}

std::vector<int> Lattice::cold_surface() const {
    std::vector<int> out;
    for (int i = dims_.back() - 1; i < size_; i += dims_.back()) out.push_back(i);
    return out;
}

bool Lattice::transverse_separated(int i, int j) const {
    // Same chain iff same block of transport_length() consecutive indices.
    return i / dims_.back() != j / dims_.back();
}

Eigen::SparseMatrix<double> path_adjacency(int n) {
    Eigen::SparseMatrix<double> a(n, n);
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i + 1 < n; ++i) {
        t.emplace_back(i, i + 1, 1.0);
        t.emplace_back(i + 1, i, 1.0);
    }
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

namespace {

void attach_baths(const LatticeSpec& spec, GeneratorParts& g) {
    const int n = g.lattice.size();
    g.L = Eigen::VectorXd::Zero(n);
    g.M = Eigen::VectorXd::Zero(n);
    g.deph = Eigen::VectorXd::Constant(n, spec.dephasing_rate);

    g.hot = {spec.bath_hot.rate, spec.bath_hot.resolved_occupation(spec.omega), g.lattice.hot_surface()};
    g.cold = {spec.bath_cold.rate, spec.bath_cold.resolved_occupation(spec.omega), g.lattice.cold_surface()};
    for (const BathCoupling* bath : {&g.hot, &g.cold}) {
        for (int s : bath->sites) {
            g.L(s) = -0.5 * bath->rate;
            g.M(s) = bath->rate * bath->occupation;
        }
    }
}

}  // namespace

GeneratorParts build_chain_generator(const LatticeSpec& spec) {
    if (spec.dims.size() != 1) throw ValidationError("build_chain_generator: spec must be one-dimensional");
    require_valid(spec);
    const int n = spec.dims[0];

    GeneratorParts g;
    g.lattice = Lattice(spec.dims);
    g.omega = spec.omega;
    g.coupling = spec.coupling;
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, spec.omega);
        if (i + 1 < n && spec.coupling != 0.0) {
            t.emplace_back(i, i + 1, spec.coupling);
            t.emplace_back(i + 1, i, spec.coupling);
        }
    }
    g.W.resize(n, n);
    g.W.setFromTriplets(t.begin(), t.end());
    attach_baths(spec, g);
    return g;
}

GeneratorParts build_lattice_generator(const LatticeSpec& spec) {
    require_valid(spec);

    GeneratorParts g;
    g.lattice = Lattice(spec.dims);
    g.omega = spec.omega;
    g.coupling = spec.coupling;
    const int n = g.lattice.size();

    // Kronecker sum: axis k contributes 1_(before) (x) A_k (x) 1_(after).
    Eigen::SparseMatrix<double> hop(n, n);
    int before = 1;
    for (int axis_len : spec.dims) {
        const int after = n / (before * axis_len);
        Eigen::SparseMatrix<double> left(before, before);
        left.setIdentity();
        Eigen::SparseMatrix<double> right(after, after);
        right.setIdentity();
        Eigen::SparseMatrix<double> inner = Eigen::kroneckerProduct(path_adjacency(axis_len), right);
        Eigen::SparseMatrix<double> term = Eigen::kroneckerProduct(left, inner);
        hop += term;
        before *= axis_len;
    }
    Eigen::SparseMatrix<double> id(n, n);
    id.setIdentity();
    g.W = spec.omega * id + spec.coupling * hop;
    g.W.prune(0.0);
    g.W.makeCompressed();
    attach_baths(spec, g);
    return g;
}

}  // namespace hheat
