#ifndef CAUSALGAP_TABLE_HPP
#define CAUSALGAP_TABLE_HPP

#include <map>
#include <string>
#include <vector>

#include "causalgap/errors.hpp"
#include "causalgap/exact.hpp"
#include "causalgap/graph.hpp"

namespace causalgap {

/// A finite variable: `card` values 0 .. card-1.
struct Alphabet {
    std::string name;
    int card = 0;
};

/// An exact joint distribution over an ordered list of finite variables.
/// Entries are stored densely in lexicographic assignment order (first
/// variable most significant), sum to exactly 1, and are all >= 0.
/// No floating point enters this module.
class JointTable {
public:
    JointTable(std::vector<Alphabet> vars, std::vector<QSqrt2> probs);

    static JointTable uniform(std::vector<Alphabet> vars);

    const std::vector<Alphabet>& vars() const { return vars_; }
    std::size_t size() const { return probs_.size(); }
    const std::vector<QSqrt2>& probs() const { return probs_; }

    bool has_var(const std::string& name) const;
    /// Position of `name` in vars(); throws UnknownVariableError.
    int var_index(const std::string& name) const;
    int card_of(const std::string& name) const { return vars_[var_index(name)].card; }

    std::size_t flat_index(const std::vector<int>& assignment) const;
    std::vector<int> assignment_of(std::size_t flat) const;
    const QSqrt2& prob(const std::vector<int>& assignment) const {
        return probs_[flat_index(assignment)];
    }

    friend bool operator==(const JointTable& a, const JointTable& b);

private:
    std::vector<Alphabet> vars_;
    std::vector<QSqrt2> probs_;
};

/// Sum out every variable not in `keep`. Kept variables stay in their
/// original order regardless of the order of `keep`.
JointTable marginalize(const JointTable& t, const std::vector<std::string>& keep);

/// Condition on a partial assignment and renormalize over the remaining
/// variables. Throws ZeroProbabilityEventError when the event has mass 0.
JointTable condition(const JointTable& t, const std::vector<std::pair<std::string, int>>& on);

/// Exact test of X independent of Y given Z: P(xyz) P(z) = P(xz) P(yz) for
/// every assignment (cross-multiplied, so zero-mass z need no special case).
/// z may be empty.
bool is_cond_independent(const JointTable& t, const std::vector<std::string>& x,
                         const std::vector<std::string>& y, const std::vector<std::string>& z);

/// True iff t equals the product of its own conditionals given graph parents.
/// Checked in cross-multiplied form, which makes conditionals on zero-mass
/// parent configurations vacuous. Table variables must be exactly g's nodes.
bool factorize_check(const JointTable& t, const CausalGraph& g);

/// Conditional distribution of one variable given its parents, the building
/// block of forward construction. `rows` is indexed by the mixed-radix parent
/// assignment (parents in the declared order, first parent most significant).
struct Cpd {
    std::string var;
    int card = 0;
    std::vector<std::string> parents;
    std::vector<std::vector<QSqrt2>> rows;
};

/// Joint table over g's nodes (declaration order) equal to the product of the
/// given conditionals. factorize_check holds on the result by construction.
JointTable build_from_conditionals(const CausalGraph& g, const std::map<std::string, Cpd>& cpds);

/// Fuse two variables into one with card = card(first) * card(second) placed
/// at first's position; merged value = v_first + card(first) * v_second.
JointTable merge_variables(const JointTable& t, const std::string& first,
                           const std::string& second, const std::string& merged_name);

/// Inverse of merge_variables: replace `name` by `first_name` (same position,
/// low digit, card = first_card) and `second_name` (directly after).
JointTable split_variable(const JointTable& t, const std::string& name,
                          const std::string& first_name, int first_card,
                          const std::string& second_name);

/// Permute variables into the given order (a permutation of vars()).
JointTable reorder_vars(const JointTable& t, const std::vector<std::string>& order);

}  // namespace causalgap

#endif
