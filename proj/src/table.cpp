#include "causalgap/table.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace causalgap {

namespace {

std::size_t product_of_cards(const std::vector<Alphabet>& vars) {
    std::size_t n = 1;
    for (const auto& v : vars) n *= static_cast<std::size_t>(v.card);
    return n;
}

void check_distribution(const std::vector<Alphabet>& vars, const std::vector<QSqrt2>& probs) {
    for (const auto& v : vars) {
        if (v.name.empty()) throw UnknownVariableError("empty variable name");
        if (v.card < 1) throw UnknownVariableError("variable '" + v.name + "' needs card >= 1");
    }
    std::set<std::string> names;
    for (const auto& v : vars)
        if (!names.insert(v.name).second)
            throw UnknownVariableError("duplicate variable '" + v.name + "'");
    if (probs.size() != product_of_cards(vars))
        throw VariableMismatchError("entry count does not match the product of cards");
    QSqrt2 sum;
    for (const auto& p : probs) {
        if (p.sign() < 0) throw ZeroProbabilityEventError("negative probability entry");
        sum += p;
    }
    if (sum != QSqrt2(1)) throw ZeroProbabilityEventError("entries do not sum to 1");
}

}  // namespace

JointTable::JointTable(std::vector<Alphabet> vars, std::vector<QSqrt2> probs)
    : vars_(std::move(vars)), probs_(std::move(probs)) {
    check_distribution(vars_, probs_);
}

JointTable JointTable::uniform(std::vector<Alphabet> vars) {
    const std::size_t n = product_of_cards(vars);
    std::vector<QSqrt2> probs(n, QSqrt2(Rational(1, static_cast<long>(n))));
    return JointTable(std::move(vars), std::move(probs));
}

bool JointTable::has_var(const std::string& name) const {
    for (const auto& v : vars_)
        if (v.name == name) return true;
    return false;
}

int JointTable::var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return static_cast<int>(i);
    throw UnknownVariableError("unknown variable '" + name + "'");
}

std::size_t JointTable::flat_index(const std::vector<int>& assignment) const {
    if (assignment.size() != vars_.size())
        throw VariableMismatchError("assignment length does not match variable count");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (assignment[i] < 0 || assignment[i] >= vars_[i].card)
            throw UnknownVariableError("value out of range for '" + vars_[i].name + "'");
        flat = flat * static_cast<std::size_t>(vars_[i].card) + static_cast<std::size_t>(assignment[i]);
    }
    return flat;
}

std::vector<int> JointTable::assignment_of(std::size_t flat) const {
    std::vector<int> out(vars_.size());
    for (std::size_t i = vars_.size(); i-- > 0;) {
        out[i] = static_cast<int>(flat % static_cast<std::size_t>(vars_[i].card));
        flat /= static_cast<std::size_t>(vars_[i].card);
    }
    return out;
}

bool operator==(const JointTable& a, const JointTable& b) {
    if (a.vars_.size() != b.vars_.size()) return false;
    for (std::size_t i = 0; i < a.vars_.size(); ++i)
        if (a.vars_[i].name != b.vars_[i].name || a.vars_[i].card != b.vars_[i].card) return false;
    return a.probs_ == b.probs_;
}

namespace {

// Positions in t of the given names, rejecting duplicates.
std::vector<int> positions_of(const JointTable& t, const std::vector<std::string>& names) {
    std::vector<int> out;
    std::set<int> seen;
    for (const auto& n : names) {
        int i = t.var_index(n);
        if (!seen.insert(i).second) throw OverlappingSetsError("variable '" + n + "' repeated");
        out.push_back(i);
    }
    return out;
}

}  // namespace

JointTable marginalize(const JointTable& t, const std::vector<std::string>& keep) {
    if (keep.empty()) throw UnknownVariableError("marginalize needs at least one variable");
    std::vector<int> kept_positions = positions_of(t, keep);
    std::sort(kept_positions.begin(), kept_positions.end());

    std::vector<Alphabet> new_vars;
    for (int p : kept_positions) new_vars.push_back(t.vars()[p]);
    std::vector<QSqrt2> probs(product_of_cards(new_vars));
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        const std::vector<int> asg = t.assignment_of(flat);
        std::size_t out = 0;
        for (std::size_t k = 0; k < kept_positions.size(); ++k)
            out = out * static_cast<std::size_t>(new_vars[k].card) +
                  static_cast<std::size_t>(asg[kept_positions[k]]);
        probs[out] += t.probs()[flat];
    }
    return JointTable(std::move(new_vars), std::move(probs));
}

JointTable condition(const JointTable& t, const std::vector<std::pair<std::string, int>>& on) {
    if (on.empty()) return t;
    std::vector<int> fixed(t.vars().size(), -1);
    for (const auto& [name, value] : on) {
        int i = t.var_index(name);
        if (value < 0 || value >= t.vars()[i].card)
            throw UnknownVariableError("value out of range for '" + name + "'");
        if (fixed[i] != -1) throw OverlappingSetsError("variable '" + name + "' repeated");
        fixed[i] = value;
    }
    std::vector<Alphabet> new_vars;
    std::vector<int> rest_positions;
    for (std::size_t i = 0; i < t.vars().size(); ++i) {
        if (fixed[i] == -1) {
            new_vars.push_back(t.vars()[i]);
            rest_positions.push_back(static_cast<int>(i));
        }
    }
    if (new_vars.empty()) throw UnknownVariableError("conditioning on every variable");

    QSqrt2 mass;
    std::vector<QSqrt2> probs(product_of_cards(new_vars));
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        const std::vector<int> asg = t.assignment_of(flat);
        bool match = true;
        for (std::size_t i = 0; i < asg.size(); ++i)
            if (fixed[i] != -1 && asg[i] != fixed[i]) match = false;
        if (!match) continue;
        mass += t.probs()[flat];
        std::size_t out = 0;
        for (std::size_t k = 0; k < rest_positions.size(); ++k)
            out = out * static_cast<std::size_t>(new_vars[k].card) +
                  static_cast<std::size_t>(asg[rest_positions[k]]);
        probs[out] += t.probs()[flat];
    }
    if (mass.is_zero()) throw ZeroProbabilityEventError("conditioning event has probability 0");
    for (auto& p : probs) p /= mass;
    return JointTable(std::move(new_vars), std::move(probs));
}

bool is_cond_independent(const JointTable& t, const std::vector<std::string>& x,
                         const std::vector<std::string>& y, const std::vector<std::string>& z) {
    if (x.empty() || y.empty()) throw OverlappingSetsError("x and y must be nonempty");
    std::vector<std::string> all = x;
    all.insert(all.end(), y.begin(), y.end());
    all.insert(all.end(), z.begin(), z.end());
    positions_of(t, all);  // throws on overlap or unknown names

    std::vector<std::string> xz = x;
    xz.insert(xz.end(), z.begin(), z.end());
    std::vector<std::string> yz = y;
    yz.insert(yz.end(), z.begin(), z.end());

    const JointTable m_xyz = marginalize(t, all);
    const JointTable m_xz = marginalize(t, xz);
    const JointTable m_yz = marginalize(t, yz);
    const std::optional<JointTable> m_z =
        z.empty() ? std::nullopt : std::optional<JointTable>(marginalize(t, z));

    // Project a full xyz-marginal assignment onto a sub-marginal.
    auto project = [&](const JointTable& sub, const std::vector<int>& asg) {
        std::vector<int> out(sub.vars().size());
        for (std::size_t k = 0; k < sub.vars().size(); ++k)
            out[k] = asg[m_xyz.var_index(sub.vars()[k].name)];
        return sub.prob(out);
    };

    for (std::size_t flat = 0; flat < m_xyz.size(); ++flat) {
        const std::vector<int> asg = m_xyz.assignment_of(flat);
        const QSqrt2 pz = m_z ? project(*m_z, asg) : QSqrt2(1);
        if (m_xyz.probs()[flat] * pz != project(m_xz, asg) * project(m_yz, asg)) return false;
    }
    return true;
}

bool factorize_check(const JointTable& t, const CausalGraph& g) {
    if (t.vars().size() != g.node_count())
        throw VariableMismatchError("table variables do not match graph nodes");
    for (const auto& n : g.nodes())
        if (!t.has_var(n.name))
            throw VariableMismatchError("graph node '" + n.name + "' missing from table");

    // Per node: marginals over {node} u parents and over parents alone.
    struct NodeMarginals {
        JointTable with_node;
        std::vector<int> with_positions;  // positions in t of with_node's vars
        std::vector<int> pa_positions;    // positions in t of the parent marginal's vars
        bool has_parents;
        JointTable pa_only;
    };
    std::vector<NodeMarginals> per_node;
    for (const auto& n : g.nodes()) {
        std::vector<std::string> fam = g.parents(n.name);
        fam.push_back(n.name);
        JointTable with_node = marginalize(t, fam);
        std::vector<int> wpos;
        for (const auto& v : with_node.vars()) wpos.push_back(t.var_index(v.name));
        const auto pa = g.parents(n.name);
        if (pa.empty()) {
            per_node.push_back({std::move(with_node), std::move(wpos), {}, false,
                                JointTable({{"_", 1}}, {QSqrt2(1)})});
        } else {
            JointTable pa_only = marginalize(t, pa);
            std::vector<int> ppos;
            for (const auto& v : pa_only.vars()) ppos.push_back(t.var_index(v.name));
            per_node.push_back(
                {std::move(with_node), std::move(wpos), std::move(ppos), true, std::move(pa_only)});
        }
    }

    // Cross-multiplied factorization: t(v) * prod P(pa_i) == prod P(x_i, pa_i).
    // Zero-mass parent configurations make both sides 0, exactly the vacuous case.
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        const std::vector<int> asg = t.assignment_of(flat);
        QSqrt2 lhs = t.probs()[flat];
        QSqrt2 rhs(1);
        for (const auto& nm : per_node) {
            std::vector<int> wasg(nm.with_positions.size());
            for (std::size_t k = 0; k < wasg.size(); ++k) wasg[k] = asg[nm.with_positions[k]];
            rhs *= nm.with_node.prob(wasg);
            if (nm.has_parents) {
                std::vector<int> pasg(nm.pa_positions.size());
                for (std::size_t k = 0; k < pasg.size(); ++k) pasg[k] = asg[nm.pa_positions[k]];
                lhs *= nm.pa_only.prob(pasg);
            }
        }
        if (lhs != rhs) return false;
    }
    return true;
}

JointTable build_from_conditionals(const CausalGraph& g, const std::map<std::string, Cpd>& cpds) {
    std::vector<Alphabet> vars;
    for (const auto& n : g.nodes()) {
        auto it = cpds.find(n.name);
        if (it == cpds.end()) throw MissingCpdError("no conditional for node '" + n.name + "'");
        const Cpd& c = it->second;
        if (c.card < 1) throw UnnormalizedCpdError("node '" + n.name + "' needs card >= 1");
        std::set<std::string> declared(c.parents.begin(), c.parents.end());
        const auto pa = g.parents(n.name);
        std::set<std::string> graph_pa(pa.begin(), pa.end());
        if (declared != graph_pa || declared.size() != c.parents.size())
            throw VariableMismatchError("conditional parents for '" + n.name +
                                        "' do not match the graph");
        vars.push_back({n.name, c.card});
    }

    auto card_of = [&](const std::string& name) { return cpds.at(name).card; };
    for (const auto& n : g.nodes()) {
        const Cpd& c = cpds.at(n.name);
        std::size_t rows = 1;
        for (const auto& p : c.parents) rows *= static_cast<std::size_t>(card_of(p));
        if (c.rows.size() != rows)
            throw UnnormalizedCpdError("wrong row count in conditional for '" + n.name + "'");
        for (const auto& row : c.rows) {
            if (row.size() != static_cast<std::size_t>(c.card))
                throw UnnormalizedCpdError("wrong row length in conditional for '" + n.name + "'");
            QSqrt2 sum;
            for (const auto& v : row) {
                if (v.sign() < 0)
                    throw UnnormalizedCpdError("negative entry in conditional for '" + n.name + "'");
                sum += v;
            }
            if (sum != QSqrt2(1))
                throw UnnormalizedCpdError("row does not sum to 1 for '" + n.name + "'");
        }
    }

    const std::size_t total = product_of_cards(vars);
    std::vector<QSqrt2> probs(total);
    std::vector<int> asg(vars.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (std::size_t i = vars.size(); i-- > 0;) {
            asg[i] = static_cast<int>(rem % static_cast<std::size_t>(vars[i].card));
            rem /= static_cast<std::size_t>(vars[i].card);
        }
        QSqrt2 p(1);
        for (std::size_t i = 0; i < vars.size() && !p.is_zero(); ++i) {
            const Cpd& c = cpds.at(vars[i].name);
            std::size_t row = 0;
            for (const auto& pname : c.parents)
                row = row * static_cast<std::size_t>(card_of(pname)) +
                      static_cast<std::size_t>(asg[g.index_of(pname)]);
            p *= c.rows[row][static_cast<std::size_t>(asg[i])];
        }
        probs[flat] = p;
    }
    return JointTable(std::move(vars), std::move(probs));
}

JointTable merge_variables(const JointTable& t, const std::string& first,
                           const std::string& second, const std::string& merged_name) {
    const int fi = t.var_index(first);
    const int si = t.var_index(second);
    if (fi == si) throw OverlappingSetsError("cannot merge a variable with itself");
    for (const auto& v : t.vars())
        if (v.name == merged_name && v.name != first && v.name != second)
            throw UnknownVariableError("merged name '" + merged_name + "' already in use");

    const int ca = t.vars()[fi].card;
    std::vector<Alphabet> new_vars;
    for (std::size_t i = 0; i < t.vars().size(); ++i) {
        if (static_cast<int>(i) == si) continue;
        if (static_cast<int>(i) == fi)
            new_vars.push_back({merged_name, ca * t.vars()[si].card});
        else
            new_vars.push_back(t.vars()[i]);
    }
    std::vector<QSqrt2> probs(t.size());
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        const std::vector<int> asg = t.assignment_of(flat);
        std::size_t out = 0;
        for (std::size_t i = 0; i < t.vars().size(); ++i) {
            if (static_cast<int>(i) == si) continue;
            int value = asg[i];
            int card = t.vars()[i].card;
            if (static_cast<int>(i) == fi) {
                value = asg[fi] + ca * asg[si];
                card = ca * t.vars()[si].card;
            }
            out = out * static_cast<std::size_t>(card) + static_cast<std::size_t>(value);
        }
        probs[out] += t.probs()[flat];
    }
    return JointTable(std::move(new_vars), std::move(probs));
}

JointTable split_variable(const JointTable& t, const std::string& name,
                          const std::string& first_name, int first_card,
                          const std::string& second_name) {
    const int vi = t.var_index(name);
    const int card = t.vars()[vi].card;
    if (first_card < 1 || card % first_card != 0)
        throw VariableMismatchError("card of '" + name + "' not divisible by the split card");
    for (const auto& v : t.vars()) {
        if (v.name != name && (v.name == first_name || v.name == second_name))
            throw UnknownVariableError("split name already in use");
    }
    if (first_name == second_name) throw UnknownVariableError("split names must differ");

    std::vector<Alphabet> new_vars;
    for (std::size_t i = 0; i < t.vars().size(); ++i) {
        if (static_cast<int>(i) == vi) {
            new_vars.push_back({first_name, first_card});
            new_vars.push_back({second_name, card / first_card});
        } else {
            new_vars.push_back(t.vars()[i]);
        }
    }
    std::vector<QSqrt2> probs(t.size());
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        const std::vector<int> asg = t.assignment_of(flat);
        std::size_t out = 0;
        for (std::size_t i = 0; i < t.vars().size(); ++i) {
            if (static_cast<int>(i) == vi) {
                out = out * static_cast<std::size_t>(first_card) +
                      static_cast<std::size_t>(asg[i] % first_card);
                out = out * static_cast<std::size_t>(card / first_card) +
                      static_cast<std::size_t>(asg[i] / first_card);
            } else {
                out = out * static_cast<std::size_t>(t.vars()[i].card) +
                      static_cast<std::size_t>(asg[i]);
            }
        }
        probs[out] = t.probs()[flat];
    }
    return JointTable(std::move(new_vars), std::move(probs));
}

JointTable reorder_vars(const JointTable& t, const std::vector<std::string>& order) {
    if (order.size() != t.vars().size())
        throw VariableMismatchError("reorder list must name every variable once");
    const std::vector<int> positions = positions_of(t, order);
    std::vector<Alphabet> new_vars;
    for (int p : positions) new_vars.push_back(t.vars()[p]);
    std::vector<QSqrt2> probs(t.size());
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        const std::vector<int> asg = t.assignment_of(flat);
        std::size_t out = 0;
        for (std::size_t k = 0; k < positions.size(); ++k)
            out = out * static_cast<std::size_t>(new_vars[k].card) +
                  static_cast<std::size_t>(asg[positions[k]]);
        probs[out] = t.probs()[flat];
    }
    return JointTable(std::move(new_vars), std::move(probs));
}

}  // namespace causalgap
