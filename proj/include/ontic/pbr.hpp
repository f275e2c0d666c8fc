#pragma once

// Two-qubit no-go check for preparation-independent ontological models of the
// non-orthogonal pair {|0>, |+>}.

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "ontic/ontology.hpp"

namespace ontic::pbr {

using Complex = std::complex<double>;

class Ket {
public:
    /// Throws NormalizationError unless sum |a_i|^2 = 1 within 1e-12.
    explicit Ket(std::vector<Complex> amplitudes);

    static Ket basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_[i]; }

private:
    std::vector<Complex> amplitudes_;
};

/// <a|b>, conjugate-linear in a.
Complex inner(const Ket& a, const Ket& b);
Ket tensor(const Ket& a, const Ket& b);

Ket zero();
Ket one();
Ket plus();
Ket minus();

class MeasurementBasis {
public:
    /// Throws DimensionMismatch unless the kets form a complete orthonormal set.
    explicit MeasurementBasis(std::vector<Ket> vectors);

    std::size_t dim() const { return vectors_.size(); }
    const std::vector<Ket>& vectors() const { return vectors_; }

private:
    std::vector<Ket> vectors_;
};

std::vector<double> born_prob(const Ket& state, const MeasurementBasis& basis);

/// The four entangled outcomes
///   xi1 = (|0,1> + |1,0>)/sqrt2,  xi2 = (|0,-> + |1,+>)/sqrt2,
///   xi3 = (|+,1> + |-,0>)/sqrt2,  xi4 = (|+,-> + |-,+>)/sqrt2.
MeasurementBasis pbr_basis();

inline constexpr std::array<const char*, 4> kPreparationNames = {"0,0", "0,+", "+,0", "+,+"};
inline constexpr std::array<const char*, 4> kOutcomeNames = {"xi1", "xi2", "xi3", "xi4"};

/// |0,0>, |0,+>, |+,0>, |+,+>.
std::array<Ket, 4> product_preparations();

using QuantumTable = std::array<std::array<double, 4>, 4>;  // [preparation][outcome]

QuantumTable quantum_targets();

/// Pairs (preparation, outcome) whose Born probability is below 1e-12.
std::vector<std::pair<std::size_t, std::size_t>> forbidden_pairs(const QuantumTable& table);

/// Three ontic states with mu_0 = (1-q, q, 0), mu_+ = (0, q, 1-q).
struct OverlapFamily {
    double q = 0.0;

    ontology::LambdaSpace space() const;
    ontology::EpistemicState mu_zero() const;
    ontology::EpistemicState mu_plus() const;
};

/// Joint model on Lambda_s x Lambda_s with mu_ij = mu_i (x) mu_j and born_targets
/// from quantum_targets(). Measurements are left for the caller.
struct ProductModel {
    ontology::OntModel single;
    ontology::OntModel joint;
};

ProductModel product_model(const OverlapFamily& family);

enum class Optimizer { LinearProgram, GridDescent };

struct ForbiddenResult {
    double value = 0.0;  // max forbidden-outcome probability at the optimum
    ontology::ResponseFunction witness;
    /// Joint model carrying the witness response and the quantum targets.
    ontology::OntModel model;
};

/// Minimizes, over joint response functions, the largest probability given to
/// any Born-forbidden (preparation, outcome) pair. The LP route is exact and
/// ignores `resolution`; the grid route restricts each cell to the simplex grid
/// {k / resolution} and runs coordinate descent, giving an upper bound.
ForbiddenResult min_forbidden_probability(double q, int resolution,
                                          Optimizer optimizer = Optimizer::LinearProgram);

struct TradeoffPoint {
    double eps = 0.0;
    double q_max = 0.0;
};

/// For each eps, the largest q (bisection to width 1e-6) whose minimal
/// forbidden probability is at most eps.
std::vector<TradeoffPoint> epsilon_overlap_tradeoff(std::span<const double> eps_grid, int resolution,
                                                    Optimizer optimizer = Optimizer::LinearProgram);

struct NamedOverlap {
    std::string first;
    std::string second;
    ontology::OverlapReport report;
};

struct CatModel {
    ontology::OntModel model;
    std::vector<NamedOverlap> overlaps;
};

inline constexpr const char* kAliveDead = "alive/dead";

/// Cat (x) atom before and after the interaction: disjoint ontic blocks for
/// |cat+>|atom-e>, |cat->|atom-d> and the superposition a|..e> + b|..d>.
CatModel cat_fixture(Complex a, Complex b);

}  // namespace ontic::pbr
