#ifndef CAUSALGAP_SELFTEST_HPP
#define CAUSALGAP_SELFTEST_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "causalgap/graph.hpp"
#include "causalgap/table.hpp"

namespace causalgap::selftest {

inline constexpr unsigned kDefaultSeed = 20240817;

/// Outcome of one randomized property driver.
struct SuiteResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::string first_failure;

    bool passed() const { return failures == 0 && checked > 0; }
};

/// Uniform draw in [0, n) from the raw engine. std::uniform_int_distribution
/// is not pinned across standard libraries, so results stay reproducible
/// only with this helper.
std::uint32_t draw_below(std::mt19937& rng, std::uint32_t n);

/// Random DAG with 2..max_nodes nodes, every node observed.
CausalGraph random_dag(std::mt19937& rng, int max_nodes);

/// Random exact conditional row: a composition of a denominator <= 16.
std::vector<QSqrt2> random_distribution(std::mt19937& rng, int card);

/// Random exact table factorizing over g with the given per-node cards.
JointTable random_factorized_table(std::mt19937& rng, const CausalGraph& g,
                                   const std::vector<int>& cards);

/// d_separated (reachability route) against the simple-path enumeration
/// oracle, every singleton pair and every conditioning subset, plus the
/// x/y symmetry of the verdict.
SuiteResult dsep_oracle_suite(unsigned seed, std::size_t num_dags);

/// On random factorized binary tables over random DAGs of <= 5 nodes,
/// every reported d-separation is an exact conditional independence.
SuiteResult markov_suite(unsigned seed, std::size_t num_tables);

/// Random exact classical models on g1 satisfying the side conditions
/// (F = (F_O, F_S), F_S = E determined by A; E ignores C and D) reduce to
/// the two-response-function mixture form.
SuiteResult g1_reduction_suite(unsigned seed, std::size_t num_models);

/// Triangle analogue of g1_reduction_suite.
SuiteResult triangle_reduction_suite(unsigned seed, std::size_t num_models);

/// Random tables factorizing over g2 also factorize over g1.
SuiteResult g2_in_g1_suite(unsigned seed, std::size_t num_tables);

/// Random rational mixtures of deterministic strategies are LHV-feasible,
/// reproduced exactly by the returned weights, score <= 3 on the CHSH orbit,
/// and keep their verdict under every orbit relabelling.
SuiteResult lhv_mixture_suite(unsigned seed, std::size_t num_points);

/// Every suite with its production sample counts.
std::vector<SuiteResult> run_all(unsigned seed);

}  // namespace causalgap::selftest

#endif
