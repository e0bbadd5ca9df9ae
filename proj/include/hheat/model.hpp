#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace hheat {

/// Mean excitation number of a bosonic mode, n = 1/(exp(omega/T) - 1), with hbar = k_B = 1.
/// Throws DomainError unless omega > 0 and T > 0.
double occupation_from_temperature(double omega, double temperature);

/// Inverse of occupation_from_temperature: T = omega / ln(1 + 1/n).
/// Returns 0 for n == 0. Throws DomainError for omega <= 0 or n < 0.
double temperature_from_occupation(double omega, double occupation);

/// A thermal bath attached to a lattice boundary. Exactly one of occupation
/// and temperature is set; the occupation is resolved against the oscillator
/// frequency when the temperature form is used.
struct BathSpec {
    double rate = 0.0;
    std::optional<double> occupation;
    std::optional<double> temperature;

    static BathSpec with_occupation(double rate, double n);
    static BathSpec with_temperature(double rate, double T);

    double resolved_occupation(double omega) const;
};

/// Full problem definition: a hypercubic block of identical oscillators with
/// nearest-neighbour hopping. The transport axis is the last entry of dims;
/// the hot bath couples to every site with last coordinate 0, the cold bath
/// to every site with last coordinate dims.back() - 1.
struct LatticeSpec {
    std::vector<int> dims;
    double omega = 1.0;
    double coupling = 0.0;
    BathSpec bath_hot;
    BathSpec bath_cold;
    double dephasing_rate = 0.0;

    /// Convenience for the one-dimensional case.
    static LatticeSpec chain(int n, double omega, double coupling, BathSpec hot, BathSpec cold,
                             double dephasing = 0.0);
};

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity;
    std::string code;
    std::string message;
};

/// Check the spec invariants. Errors make the spec unusable; warnings flag
/// regimes where results are formally valid but physically questionable.
std::vector<Diagnostic> validate_spec(const LatticeSpec& spec);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Throws ValidationError carrying the first error diagnostic, if any.
void require_valid(const LatticeSpec& spec);

/// Row-major site indexing with the last (transport) axis varying fastest,
/// so every chain along the transport axis occupies a contiguous index range.
class Lattice {
public:
    Lattice() = default;
    explicit Lattice(std::vector<int> dims);

    const std::vector<int>& dims() const noexcept { return dims_; }
    int dimension() const noexcept { return static_cast<int>(dims_.size()); }
    int size() const noexcept { return size_; }
    int transport_length() const noexcept { return dims_.back(); }
    /// Number of sites on one bath-attached hyper-surface.
    int transverse_volume() const noexcept { return size_ / dims_.back(); }

    int flatten(const std::vector<int>& coords) const;
    std::vector<int> unflatten(int flat) const;

    /// All nearest-neighbour pairs (i < j) under open boundaries.
    std::vector<std::pair<int, int>> edges() const;
    /// Edges along the transport axis, ordered by flat index of the first site.
    std::vector<std::pair<int, int>> transport_bonds() const;
    bool is_edge(int i, int j) const;
    bool is_transport_bond(int i, int j) const;

    /// Sites with last coordinate 0 (hot) or dims.back() - 1 (cold), ascending.
    std::vector<int> hot_surface() const;
    std::vector<int> cold_surface() const;

    /// True when sites i and j differ in any non-transport coordinate.
    bool transverse_separated(int i, int j) const;

private:
    std::vector<int> dims_;
    std::vector<int> strides_;
    int size_ = 0;
};

/// One bath as seen by the generator.
struct BathCoupling {
    double rate = 0.0;
    double occupation = 0.0;
    std::vector<int> sites;
};

/// Matrices generating dC/dt = i[W,C] + {L,C} + M plus the dephasing terms.
/// L and M are diagonal and stored as their diagonals.
struct GeneratorParts {
    Lattice lattice;
    double omega = 0.0;
    double coupling = 0.0;
    Eigen::SparseMatrix<double> W;
    Eigen::VectorXd L;
    Eigen::VectorXd M;
    Eigen::VectorXd deph;
    BathCoupling hot;
    BathCoupling cold;

    int size() const noexcept { return static_cast<int>(L.size()); }
    Eigen::MatrixXd dense_W() const { return Eigen::MatrixXd(W); }
};

/// Chain generator: tridiagonal W, boundary-only L and M. Requires dims.size() == 1.
GeneratorParts build_chain_generator(const LatticeSpec& spec);

/// d-dimensional generator: W = omega*1 + V*(Kronecker sum of path adjacencies),
/// bath entries on both transport-axis hyper-surfaces.
GeneratorParts build_lattice_generator(const LatticeSpec& spec);

/// Path-graph adjacency matrix of length n.
Eigen::SparseMatrix<double> path_adjacency(int n);

}  // namespace hheat
