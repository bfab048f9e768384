#include "causalgap/graph.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace causalgap {

namespace {

std::string join_names(const std::vector<std::string>& names, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
        if (i) out += sep;
        out += names[i];
    }
    return out;
}

}  // namespace

CausalGraph::CausalGraph(std::vector<Node> nodes,
                         std::vector<std::pair<std::string, std::string>> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::unordered_map<std::string, int> index;
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].name.empty()) throw DuplicateNodeError("empty node name");
        if (!index.emplace(nodes_[i].name, static_cast<int>(i)).second)
            throw DuplicateNodeError("duplicate node '" + nodes_[i].name + "'");
    }
    parents_.assign(nodes_.size(), {});
    children_.assign(nodes_.size(), {});
    std::set<std::pair<int, int>> seen;
    for (const auto& [from, to] : edges_) {
        auto fi = index.find(from);
        auto ti = index.find(to);
        if (fi == index.end()) throw UnknownEndpointError("unknown edge endpoint '" + from + "'");
        if (ti == index.end()) throw UnknownEndpointError("unknown edge endpoint '" + to + "'");
        if (fi->second == ti->second)
            throw CycleDetectedError("cycle: " + from + " -> " + from);
        if (!seen.emplace(fi->second, ti->second).second)
            throw DuplicateNodeError("duplicate edge " + from + " -> " + to);
        children_[fi->second].push_back(ti->second);
        parents_[ti->second].push_back(fi->second);
    }
    for (auto& v : parents_) std::sort(v.begin(), v.end());
    for (auto& v : children_) std::sort(v.begin(), v.end());

    // Cycle check by DFS; on failure name one cycle found via a back edge.
    enum { White, Grey, Black };
    std::vector<int> color(nodes_.size(), White);
    std::vector<int> stack, on_stack;
    for (size_t root = 0; root < nodes_.size(); ++root) {
        if (color[root] != White) continue;
        // Iterative DFS keeping the current chain for cycle reconstruction.
        std::vector<std::pair<int, size_t>> frames{{static_cast<int>(root), 0}};
        std::vector<int> chain{static_cast<int>(root)};
        color[root] = Grey;
        while (!frames.empty()) {
            auto& [u, next] = frames.back();
            if (next < children_[u].size()) {
                int v = children_[u][next++];
                if (color[v] == Grey) {
                    std::vector<std::string> cyc;
                    auto it = std::find(chain.begin(), chain.end(), v);
                    for (; it != chain.end(); ++it) cyc.push_back(nodes_[*it].name);
                    cyc.push_back(nodes_[v].name);
                    throw CycleDetectedError("cycle: " + join_names(cyc, " -> "));
                }
                if (color[v] == White) {
                    color[v] = Grey;
                    frames.emplace_back(v, 0);
                    chain.push_back(v);
                }
            } else {
                color[u] = Black;
                frames.pop_back();
                chain.pop_back();
            }
        }
    }
}

bool CausalGraph::has_node(const std::string& name) const {
    for (const auto& n : nodes_)
        if (n.name == name) return true;
    return false;
}

int CausalGraph::index_of(const std::string& name) const {
    for (size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].name == name) return static_cast<int>(i);
    throw UnknownNodeError("unknown node '" + name + "'");
}

NodeKind CausalGraph::kind_of(const std::string& name) const {
    return nodes_[index_of(name)].kind;
}

bool CausalGraph::has_edge(const std::string& parent, const std::string& child) const {
    int p = index_of(parent);
    int c = index_of(child);
    const auto& ch = children_[p];
    return std::find(ch.begin(), ch.end(), c) != ch.end();
}

std::vector<std::string> CausalGraph::parents(const std::string& x) const {
    std::vector<std::string> out;
    for (int i : parents_[index_of(x)]) out.push_back(nodes_[i].name);
    return out;
}

std::vector<std::string> CausalGraph::children(const std::string& x) const {
    std::vector<std::string> out;
    for (int i : children_[index_of(x)]) out.push_back(nodes_[i].name);
    return out;
}

std::vector<std::string> CausalGraph::descendants(const std::string& x) const {
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<int> todo{index_of(x)};
    while (!todo.empty()) {
        int u = todo.back();
        todo.pop_back();
        for (int v : children_[u]) {
            if (!seen[v]) {
                seen[v] = true;
                todo.push_back(v);
            }
        }
    }
    std::vector<std::string> out;
    for (size_t i = 0; i < nodes_.size(); ++i)
        if (seen[i]) out.push_back(nodes_[i].name);
    return out;
}

std::vector<std::string> CausalGraph::nodes_of_kind(NodeKind kind) const {
    std::vector<std::string> out;
    for (const auto& n : nodes_)
        if (n.kind == kind) out.push_back(n.name);
    return out;
}

namespace {

std::vector<int> to_indices(const CausalGraph& g, const std::vector<std::string>& names) {
    std::vector<int> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(g.index_of(n));
    return out;
}

// Z together with every ancestor of a node in Z.
std::vector<bool> ancestral_set(const CausalGraph& g, const std::vector<int>& z) {
    std::vector<bool> in(g.node_count(), false);
    std::vector<int> todo;
    for (int i : z) {
        if (!in[i]) {
            in[i] = true;
            todo.push_back(i);
        }
    }
    while (!todo.empty()) {
        int u = todo.back();
        todo.pop_back();
        for (int p : g.parent_indices(u)) {
            if (!in[p]) {
                in[p] = true;
                todo.push_back(p);
            }
        }
    }
    return in;
}

}  // namespace

bool is_blocked(const CausalGraph& g, const Path& p, const std::vector<std::string>& z) {
    if (p.nodes.size() < 2 || p.forward.size() != p.nodes.size() - 1)
        throw InvalidPathError("path must have >= 2 nodes and one direction per step");
    std::unordered_set<int> visited;
    std::vector<int> idx;
    for (const auto& name : p.nodes) {
        int i = g.index_of(name);
        if (!visited.insert(i).second)
            throw InvalidPathError("repeated node '" + name + "' on path");
        idx.push_back(i);
    }
    for (size_t s = 0; s + 1 < idx.size(); ++s) {
        const std::string& from = p.forward[s] ? p.nodes[s] : p.nodes[s + 1];
        const std::string& to = p.forward[s] ? p.nodes[s + 1] : p.nodes[s];
        if (!g.has_edge(from, to))
            throw InvalidPathError("no edge " + from + " -> " + to + " on path");
    }
    std::vector<bool> in_z(g.node_count(), false);
    for (int i : to_indices(g, z)) in_z[i] = true;
    if (in_z[idx.front()] || in_z[idx.back()])
        throw InvalidPathError("conditioning set contains a path endpoint");

    const std::vector<bool> anc_z = ancestral_set(g, to_indices(g, z));
    for (size_t i = 1; i + 1 < idx.size(); ++i) {
        const bool collider = p.forward[i - 1] && !p.forward[i];
        if (collider) {
            // Blocked collider: neither the node nor any descendant is in z,
            // i.e. the node is outside the ancestral closure of z.
            if (!anc_z[idx[i]]) return true;
        } else {
            if (in_z[idx[i]]) return true;
        }
    }
    return false;
}

bool d_separated(const CausalGraph& g, const std::vector<std::string>& x,
                 const std::vector<std::string>& y, const std::vector<std::string>& z) {
    if (x.empty() || y.empty()) throw OverlappingSetsError("x and y must be nonempty");
    const std::vector<int> xi = to_indices(g, x);
    const std::vector<int> yi = to_indices(g, y);
    const std::vector<int> zi = to_indices(g, z);
    std::vector<int> membership(g.node_count(), 0);
    for (int i : xi) membership[i] |= 1;
    for (int i : yi) membership[i] |= 2;
    for (int i : zi) membership[i] |= 4;
    for (size_t i = 0; i < g.node_count(); ++i) {
        int m = membership[i];
        if (m != 0 && m != 1 && m != 2 && m != 4)
            throw OverlappingSetsError("node '" + g.nodes()[i].name + "' appears in two sets");
    }

    // Active-trail reachability. State (node, dir): dir=true means the trail
    // arrived from a child of the node, dir=false from a parent.
    const std::vector<bool> anc_z = ancestral_set(g, zi);
    std::vector<bool> in_z(g.node_count(), false);
    for (int i : zi) in_z[i] = true;
    std::vector<std::array<bool, 2>> visited(g.node_count(), {false, false});
    std::vector<std::pair<int, bool>> todo;
    for (int i : xi) todo.emplace_back(i, true);
    while (!todo.empty()) {
        auto [u, from_child] = todo.back();
        todo.pop_back();
        auto& seen = visited[u][from_child ? 1 : 0];
        if (seen) continue;
        seen = true;
        if (membership[u] & 2) return false;
        if (from_child) {
            if (!in_z[u]) {
                for (int p : g.parent_indices(u)) todo.emplace_back(p, true);
                for (int c : g.child_indices(u)) todo.emplace_back(c, false);
            }
        } else {
            if (!in_z[u])
                for (int c : g.child_indices(u)) todo.emplace_back(c, false);
            if (anc_z[u])
                for (int p : g.parent_indices(u)) todo.emplace_back(p, true);
        }
    }
    return true;
}

std::vector<Path> simple_paths(const CausalGraph& g, const std::string& x, const std::string& y) {
    const int start = g.index_of(x);
    const int goal = g.index_of(y);
    std::vector<Path> out;
    if (start == goal) return out;
    std::vector<bool> on_path(g.node_count(), false);
    std::vector<int> nodes{start};
    std::vector<bool> dirs;
    on_path[start] = true;

    // Depth-first over the undirected skeleton, neighbours in index order.
    auto neighbours = [&](int u) {
        std::vector<std::pair<int, bool>> out_nb;
        for (int v = 0; v < static_cast<int>(g.node_count()); ++v) {
            const auto& ch = g.child_indices(u);
            const auto& pa = g.parent_indices(u);
            if (std::find(ch.begin(), ch.end(), v) != ch.end()) out_nb.emplace_back(v, true);
            if (std::find(pa.begin(), pa.end(), v) != pa.end()) out_nb.emplace_back(v, false);
        }
        return out_nb;
    };
    std::vector<std::pair<std::vector<std::pair<int, bool>>, size_t>> frames;
    frames.emplace_back(neighbours(start), 0);
    while (!frames.empty()) {
        auto& [nbs, next] = frames.back();
        if (next >= nbs.size()) {
            on_path[nodes.back()] = false;
            nodes.pop_back();
            if (!dirs.empty()) dirs.pop_back();
            frames.pop_back();
            continue;
        }
        auto [v, forward] = nbs[next++];
        if (on_path[v]) continue;
        nodes.push_back(v);
        dirs.push_back(forward);
        if (v == goal) {
            Path p;
            for (int i : nodes) p.nodes.push_back(g.nodes()[i].name);
            p.forward = dirs;
            out.push_back(std::move(p));
            nodes.pop_back();
            dirs.pop_back();
        } else {
            on_path[v] = true;
            frames.emplace_back(neighbours(v), 0);
        }
    }
    return out;
}

std::optional<Path> find_unblocked_path(const CausalGraph& g, const std::vector<std::string>& x,
                                        const std::vector<std::string>& y,
                                        const std::vector<std::string>& z) {
    for (const auto& xs : x) {
        for (const auto& ys : y) {
            for (const auto& p : simple_paths(g, xs, ys)) {
                if (!is_blocked(g, p, z)) return p;
            }
        }
    }
    return std::nullopt;
}

std::vector<DsepTriple> all_dseps(const CausalGraph& g, const std::vector<std::string>& over) {
    std::vector<int> idx = to_indices(g, over);
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw OverlappingSetsError("duplicate node in 'over'");
    std::vector<DsepTriple> out;
    for (size_t a = 0; a < idx.size(); ++a) {
        for (size_t b = a + 1; b < idx.size(); ++b) {
            std::vector<int> rest;
            for (size_t t = 0; t < idx.size(); ++t)
                if (t != a && t != b) rest.push_back(idx[t]);
            const std::string xn = g.nodes()[idx[a]].name;
            const std::string yn = g.nodes()[idx[b]].name;
            for (unsigned mask = 0; mask < (1u << rest.size()); ++mask) {
                std::vector<std::string> zn;
                for (size_t t = 0; t < rest.size(); ++t)
                    if (mask & (1u << t)) zn.push_back(g.nodes()[rest[t]].name);
                if (d_separated(g, {xn}, {yn}, zn)) out.push_back({xn, yn, zn});
            }
        }
    }
    return out;
}

}  // namespace causalgap
