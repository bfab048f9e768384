#ifndef CAUSALGAP_QUANTUM_HPP
#define CAUSALGAP_QUANTUM_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "causalgap/graph.hpp"
#include "causalgap/table.hpp"

namespace causalgap {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Fixed numeric tolerances for model validation and evaluation.
namespace qtol {
inline constexpr double hermiticity = 1e-9;
inline constexpr double psd = 1e-9;
inline constexpr double completeness = 1e-9;
inline constexpr double trace = 1e-9;
inline constexpr double born_clamp = 1e-12;
inline constexpr double total_mass = 1e-10;
inline constexpr double snap = 1e-9;
}  // namespace qtol

/// cos(theta)|0> + sin(theta)|1>.
CVec ket_theta(double theta);

/// Two-outcome projective measurement onto |theta> and |theta + pi/2>.
std::vector<CMat> basis_povm(double theta);

/// Kronecker product; the first factor carries the most significant index.
CMat tensor(const CMat& a, const CMat& b);

/// A parentless latent node carrying a joint state, one Hilbert-space factor
/// per child, in declared order (first factor most significant in `state`).
struct QuantumSource {
    CMat state;
    std::vector<std::pair<std::string, int>> factors;  // (child node, dimension)
};

/// A parentless node (latent or observed) carrying a plain distribution.
struct ClassicalSource {
    std::vector<QSqrt2> probs;
};

/// An observed node with classical parents only: a conditional distribution.
/// Rows are indexed by the parent assignment in graph declaration order,
/// first parent most significant.
struct CpdAssignment {
    int card = 0;
    std::vector<std::vector<QSqrt2>> rows;
};

/// An observed node measuring the factors wired to it. One POVM per setting,
/// the setting being the assignment of the node's classical parents (graph
/// declaration order). Elements act on the node's wired factors ordered by
/// global slot order (source declaration order, then factor order).
struct PovmAssignment {
    int outcomes = 0;
    std::map<std::vector<int>, std::vector<CMat>> elements;
};

/// A network quantum model over a causal graph: quantum or classical sources
/// on parentless latent nodes, distributions on parentless observed nodes,
/// CPDs or setting-indexed POVMs on the rest.
struct QuantumModel {
    CausalGraph graph;
    std::map<std::string, QuantumSource> quantum;
    std::map<std::string, ClassicalSource> classical;
    std::map<std::string, CpdAssignment> cpds;
    std::map<std::string, PovmAssignment> povms;

    /// Alphabet size of a node with a classical value; throws for quantum
    /// latent nodes and unassigned nodes.
    int card_of(const std::string& node) const;

    /// Parents of `node` that carry classical values, in declaration order.
    /// Their joint assignment is the node's setting / CPD row index.
    std::vector<std::string> classical_inputs(const std::string& node) const;

    /// Observed nodes with cards, in graph declaration order; the variable
    /// layout of every evaluation result.
    std::vector<Alphabet> observed_vars() const;
};

struct Violation {
    enum class Kind { Hermiticity, Positivity, Completeness, Trace, Wiring, Setting, Distribution };
    Kind kind;
    std::string detail;
};

std::string to_string(Violation::Kind kind);

/// Everything wrong with the model, empty when it is sound. Reports rather
/// than throws; evaluation entry points throw ModelInvalidError on a
/// non-empty result.
std::vector<Violation> validate_model(const QuantumModel& m);

/// Probability of one complete observed assignment (values keyed by node
/// name), by the Born rule: sum over classical latent values of the product
/// of classical factors times tr((tensor of POVM elements)(tensor of states)).
/// Clamped to [0, 1]; raw value verified within qtol::born_clamp of range.
double born_probability(const QuantumModel& m, const std::map<std::string, int>& assignment);

/// Born probabilities for every observed assignment, lexicographic over
/// observed_vars(). Validates the model once; checks total mass within
/// qtol::total_mass of 1.
std::vector<double> evaluate_raw(const QuantumModel& m);

/// evaluate_raw snapped entrywise to Q(sqrt(2)) via snap_to_qsqrt2. Throws
/// SnapFailureError when an entry has no candidate within qtol::snap or the
/// snapped entries do not sum to exactly 1.
JointTable evaluate_distribution(const QuantumModel& m);

}  // namespace causalgap

#endif
