#ifndef CAUSALGAP_GRAPH_HPP
#define CAUSALGAP_GRAPH_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "causalgap/errors.hpp"

namespace causalgap {

enum class NodeKind { Observed, Latent };

struct Node {
    std::string name;
    NodeKind kind;
};

/// A step of a trail: `node`, and whether the edge to the next node on the
/// trail points forward (node -> next) or backward (next -> node).
struct Path {
    std::vector<std::string> nodes;
    std::vector<bool> forward;  // size = nodes.size() - 1
};

/// A directed acyclic graph over named nodes, each observed or latent.
/// Construction validates everything; instances are immutable afterwards.
/// Node kind does not enter any d-separation computation here; it is
/// metadata for the table and model layers.
class CausalGraph {
public:
    CausalGraph(std::vector<Node> nodes, std::vector<std::pair<std::string, std::string>> edges);

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::pair<std::string, std::string>>& edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }

    bool has_node(const std::string& name) const;
    /// Declaration index of `name`; throws UnknownNodeError.
    int index_of(const std::string& name) const;
    NodeKind kind_of(const std::string& name) const;
    bool has_edge(const std::string& parent, const std::string& child) const;

    /// Tails of edges into x, in declaration order.
    std::vector<std::string> parents(const std::string& x) const;
    /// Heads of edges out of x, in declaration order.
    std::vector<std::string> children(const std::string& x) const;
    /// Transitive closure of children, excluding x itself; declaration order.
    std::vector<std::string> descendants(const std::string& x) const;

    /// Names of nodes of a given kind, in declaration order.
    std::vector<std::string> nodes_of_kind(NodeKind kind) const;

    const std::vector<int>& parent_indices(int idx) const { return parents_[idx]; }
    const std::vector<int>& child_indices(int idx) const { return children_[idx]; }

private:
    std::vector<Node> nodes_;
    std::vector<std::pair<std::string, std::string>> edges_;
    std::vector<std::vector<int>> parents_;   // per node, ascending
    std::vector<std::vector<int>> children_;  // per node, ascending
};

/// True iff `p` is blocked by the conditioning set `z`: some interior node W
/// is a chain/fork node with W in z, or a collider with neither W nor any
/// descendant of W in z. Throws InvalidPathError when `p` is not a valid
/// trail of g, and OverlappingSetsError when z touches p's endpoints.
bool is_blocked(const CausalGraph& g, const Path& p, const std::vector<std::string>& z);

/// d-separation of node sets x and y given z, computed by ancestral
/// reachability over active trails (not by path enumeration; the two routes
/// are cross-checked in the test suite). Vacuously true when no trail exists.
bool d_separated(const CausalGraph& g, const std::vector<std::string>& x,
                 const std::vector<std::string>& y, const std::vector<std::string>& z);

/// All undirected simple trails between x and y, endpoints included, in a
/// deterministic order. Exact and exhaustive; intended for small graphs.
std::vector<Path> simple_paths(const CausalGraph& g, const std::string& x, const std::string& y);

/// Some trail from x to y (sets) left unblocked by z, or nothing when x and y
/// are d-separated. The witness printed by the CLI on negative verdicts.
std::optional<Path> find_unblocked_path(const CausalGraph& g, const std::vector<std::string>& x,
                                        const std::vector<std::string>& y,
                                        const std::vector<std::string>& z);

struct DsepTriple {
    std::string x;
    std::string y;
    std::vector<std::string> z;
};

/// Every triple (x, y, z) with x, y singletons drawn from `over` (x before y
/// in declaration order) and z ranging over subsets of `over` minus {x, y},
/// such that x and y are d-separated by z. Deterministic order: by x, then y,
/// then subset bitmask over the remaining nodes in declaration order.
std::vector<DsepTriple> all_dseps(const CausalGraph& g, const std::vector<std::string>& over);

}  // namespace causalgap

#endif
