#ifndef CAUSALGAP_BELL_HPP
#define CAUSALGAP_BELL_HPP

#include <array>
#include <string>
#include <vector>

#include "causalgap/exact.hpp"
#include "causalgap/simplex.hpp"
#include "causalgap/table.hpp"

namespace causalgap {

/// Which table variables play which role in the two-party scenario.
/// Party 1 holds (setting1, outcome1); party 2 holds (setting2, outcome2).
struct BellRoles {
    std::string setting1;
    std::string setting2;
    std::string outcome1;
    std::string outcome2;
};

/// A two-setting/two-outcome-per-side correlation: exact conditionals
/// P(o1, o2 | s1, s2) plus the setting marginals of the source table.
struct BellData {
    QSqrt2 cond[2][2][2][2];     // [s1][s2][o1][o2]
    QSqrt2 setting_joint[2][2];  // P(s1, s2)
    QSqrt2 p_setting1[2];
    QSqrt2 p_setting2[2];
};

/// Conditionals and setting marginals extracted exactly from a joint table.
/// All four role variables must be binary and every setting pair must have
/// positive probability.
BellData extract_bell(const JointTable& t, const BellRoles& roles);

/// True iff the settings were independent in the source: P(s1,s2) = P(s1)P(s2).
bool settings_independent(const BellData& b);

/// A pair of deterministic response functions, one per party.
struct DetStrategy {
    std::array<int, 2> outcome1_for;  // o1 as a function of s1
    std::array<int, 2> outcome2_for;  // o2 as a function of s2

    QSqrt2 prob(int s1, int s2, int o1, int o2) const {
        return (outcome1_for[s1] == o1 && outcome2_for[s2] == o2) ? QSqrt2(1) : QSqrt2(0);
    }
};

/// All 16 response-function pairs. Order: strategy id = 4*r1 + r2 with
/// r = 2*f(0) + f(1) for each party's response f.
std::vector<DetStrategy> enumerate_strategies();

/// Verdict of exact membership in the convex hull of the 16 deterministic
/// strategies. Feasible carries weights (one per strategy, summing to 1)
/// that reproduce the conditionals exactly; Infeasible carries the Farkas
/// certificate (17 row multipliers: the 16 conditional cells in (s1,s2,o1,o2)
/// lexicographic order, then the normalization row).
struct LhvResult {
    bool feasible = false;
    std::vector<QSqrt2> weights;
    std::vector<QSqrt2> certificate;
};

LhvResult lhv_feasible(const BellData& b);

/// The winning-probability CHSH sum
/// P(o1=o2|00) + P(o1=o2|01) + P(o1=o2|10) + P(o1!=o2|11), exact.
QSqrt2 chsh_value(const BellData& b);

/// The CHSH sum under the 8 relabellings preserving the facet class:
/// setting flips on either side and a global outcome flip. Order is
/// lexicographic in (flip_s1, flip_s2, flip_outcome); index 0 is chsh_value.
/// Every entry <= 3 is necessary for membership in the LHV polytope.
std::vector<QSqrt2> chsh_all_symmetries(const BellData& b);

/// b with the given input/output relabelling applied.
BellData relabel(const BellData& b, bool flip_s1, bool flip_s2, bool flip_o1);

}  // namespace causalgap

#endif
