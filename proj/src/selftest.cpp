#include "causalgap/selftest.hpp"

#include <algorithm>

#include "causalgap/bell.hpp"
#include "causalgap/scenarios.hpp"

namespace causalgap::selftest {

std::uint32_t draw_below(std::mt19937& rng, std::uint32_t n) { return rng() % n; }

CausalGraph random_dag(std::mt19937& rng, int max_nodes) {
    const int n = 2 + static_cast<int>(draw_below(rng, static_cast<std::uint32_t>(max_nodes - 1)));
    std::vector<Node> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back({"N" + std::to_string(i), NodeKind::Observed});
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (draw_below(rng, 10) < 4) edges.emplace_back(nodes[i].name, nodes[j].name);
    return CausalGraph(std::move(nodes), std::move(edges));
}

std::vector<QSqrt2> random_distribution(std::mt19937& rng, int card) {
    const int denominator = 1 + static_cast<int>(draw_below(rng, 16));
    // Composition of `denominator` into `card` nonnegative parts via sorted cuts.
    std::vector<int> cuts{0, denominator};
    for (int i = 0; i < card - 1; ++i)
        cuts.push_back(static_cast<int>(draw_below(rng, static_cast<std::uint32_t>(denominator + 1))));
    std::sort(cuts.begin(), cuts.end());
    std::vector<QSqrt2> out;
    for (int i = 0; i < card; ++i)
        out.emplace_back(Rational(cuts[i + 1] - cuts[i], denominator));
    return out;
}

JointTable random_factorized_table(std::mt19937& rng, const CausalGraph& g,
                                   const std::vector<int>& cards) {
    std::map<std::string, Cpd> cpds;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const auto& name = g.nodes()[i].name;
        Cpd cpd;
        cpd.var = name;
        cpd.card = cards[i];
        cpd.parents = g.parents(name);
        std::size_t rows = 1;
        for (const auto& p : cpd.parents)
            rows *= static_cast<std::size_t>(cards[static_cast<std::size_t>(g.index_of(p))]);
        for (std::size_t r = 0; r < rows; ++r) cpd.rows.push_back(random_distribution(rng, cpd.card));
        cpds[name] = std::move(cpd);
    }
    return build_from_conditionals(g, cpds);
}

namespace {

void record_failure(SuiteResult& result, const std::string& detail) {
    ++result.failures;
    if (result.first_failure.empty()) result.first_failure = detail;
}

std::vector<std::string> names_of(const CausalGraph& g) {
    std::vector<std::string> out;
    for (const auto& n : g.nodes()) out.push_back(n.name);
    return out;
}

}  // namespace

SuiteResult dsep_oracle_suite(unsigned seed, std::size_t num_dags) {
    SuiteResult result{"dsep-oracle", 0, 0, {}};
    std::mt19937 rng(seed);
    for (std::size_t iter = 0; iter < num_dags; ++iter) {
        const CausalGraph g = random_dag(rng, 7);
        const auto names = names_of(g);
        const int n = static_cast<int>(names.size());
        for (int xi = 0; xi < n; ++xi) {
            for (int yi = xi + 1; yi < n; ++yi) {
                std::vector<std::string> rest;
                for (int k = 0; k < n; ++k)
                    if (k != xi && k != yi) rest.push_back(names[static_cast<std::size_t>(k)]);
                for (unsigned mask = 0; mask < (1u << rest.size()); ++mask) {
                    std::vector<std::string> z;
                    for (std::size_t t = 0; t < rest.size(); ++t)
                        if (mask & (1u << t)) z.push_back(rest[t]);
                    const auto& x = names[static_cast<std::size_t>(xi)];
                    const auto& y = names[static_cast<std::size_t>(yi)];
                    ++result.checked;

                    // Oracle: every simple trail blocked.
                    bool oracle = true;
                    for (const auto& p : simple_paths(g, x, y))
                        if (!is_blocked(g, p, z)) {
                            oracle = false;
                            break;
                        }
                    const bool fast = d_separated(g, {x}, {y}, z);
                    const bool fast_sym = d_separated(g, {y}, {x}, z);
                    if (fast != oracle || fast_sym != oracle)
                        record_failure(result, "dag " + std::to_string(iter) + ": " + x + " vs " +
                                                   y + " given " + std::to_string(mask));
                }
            }
        }
    }
    return result;
}

SuiteResult markov_suite(unsigned seed, std::size_t num_tables) {
    SuiteResult result{"markov-forward", 0, 0, {}};
    std::mt19937 rng(seed);
    for (std::size_t iter = 0; iter < num_tables; ++iter) {
        const CausalGraph g = random_dag(rng, 5);
        const std::vector<int> cards(g.node_count(), 2);
        const JointTable t = random_factorized_table(rng, g, cards);
        for (const auto& triple : all_dseps(g, names_of(g))) {
            ++result.checked;
            if (!is_cond_independent(t, {triple.x}, {triple.y}, triple.z))
                record_failure(result, "table " + std::to_string(iter) + ": " + triple.x +
                                           " vs " + triple.y);
        }
    }
    return result;
}

namespace {

// Deterministic row: probability 1 on `value`.
std::vector<QSqrt2> point_row(int card, int value) {
    std::vector<QSqrt2> row(static_cast<std::size_t>(card), QSqrt2(0));
    row[static_cast<std::size_t>(value)] = QSqrt2(1);
    return row;
}

// Random classical model on g1 satisfying the side conditions: E = phi(A)
// with C and D ignored, F = (F_O, F_S) with F_S = phi(A) and F_O|A,B free.
JointTable random_g1_conditioned_table(std::mt19937& rng) {
    const CausalGraph g = build_g1();
    const int card_a = 2 + static_cast<int>(draw_below(rng, 2));
    const int card_b = 2 + static_cast<int>(draw_below(rng, 2));
    std::vector<int> phi;
    for (int a = 0; a < card_a; ++a) phi.push_back(static_cast<int>(draw_below(rng, 2)));

    std::map<std::string, Cpd> cpds;
    cpds["A"] = {"A", card_a, {}, {random_distribution(rng, card_a)}};
    cpds["B"] = {"B", card_b, {}, {random_distribution(rng, card_b)}};
    cpds["C"] = {"C", 2, {}, {random_distribution(rng, 2)}};

    Cpd d{"D", 2, {"B", "C"}, {}};
    for (int i = 0; i < card_b * 2; ++i) d.rows.push_back(random_distribution(rng, 2));
    cpds["D"] = std::move(d);

    Cpd e{"E", 2, {"A", "C", "D"}, {}};
    for (int a = 0; a < card_a; ++a)
        for (int cd = 0; cd < 4; ++cd) e.rows.push_back(point_row(2, phi[a]));
    cpds["E"] = std::move(e);

    // F value = F_O + 2 * F_S.
    Cpd f{"F", 4, {"A", "B"}, {}};
    for (int a = 0; a < card_a; ++a) {
        for (int b = 0; b < card_b; ++b) {
            const auto fo = random_distribution(rng, 2);
            std::vector<QSqrt2> row(4, QSqrt2(0));
            for (int v = 0; v < 2; ++v) row[static_cast<std::size_t>(v + 2 * phi[a])] = fo[v];
            f.rows.push_back(std::move(row));
        }
    }
    cpds["F"] = std::move(f);
    return build_from_conditionals(g, cpds);
}

// Random classical triangle model with S1 = psi1(C) copied into E's first
// component and S2 = psi2(A) copied into E's second component.
JointTable random_triangle_conditioned_table(std::mt19937& rng) {
    const CausalGraph g = build_triangle();
    const int card_a = 2;
    const int card_b = 2 + static_cast<int>(draw_below(rng, 2));
    const int card_c = 2;
    std::vector<int> psi1, psi2;
    for (int c = 0; c < card_c; ++c) psi1.push_back(static_cast<int>(draw_below(rng, 2)));
    for (int a = 0; a < card_a; ++a) psi2.push_back(static_cast<int>(draw_below(rng, 2)));

    std::map<std::string, Cpd> cpds;
    cpds["A"] = {"A", card_a, {}, {random_distribution(rng, card_a)}};
    cpds["B"] = {"B", card_b, {}, {random_distribution(rng, card_b)}};
    cpds["C"] = {"C", card_c, {}, {random_distribution(rng, card_c)}};

    // D = (S1, O1) = S1 + 2*O1, S1 = psi1(C), O1 | B, C free.
    Cpd d{"D", 4, {"B", "C"}, {}};
    for (int b = 0; b < card_b; ++b) {
        for (int c = 0; c < card_c; ++c) {
            const auto o1 = random_distribution(rng, 2);
            std::vector<QSqrt2> row(4, QSqrt2(0));
            for (int v = 0; v < 2; ++v) row[static_cast<std::size_t>(psi1[c] + 2 * v)] = o1[v];
            d.rows.push_back(std::move(row));
        }
    }
    cpds["D"] = std::move(d);

    // E = (S1', S2') = S1' + 2*S2' with S1' = psi1(C), S2' = psi2(A).
    Cpd e{"E", 4, {"A", "C"}, {}};
    for (int a = 0; a < card_a; ++a)
        for (int c = 0; c < card_c; ++c)
            e.rows.push_back(point_row(4, psi1[c] + 2 * psi2[a]));
    cpds["E"] = std::move(e);

    // F = (S2, O2) = S2 + 2*O2, S2 = psi2(A), O2 | A, B free.
    Cpd f{"F", 4, {"A", "B"}, {}};
    for (int a = 0; a < card_a; ++a) {
        for (int b = 0; b < card_b; ++b) {
            const auto o2 = random_distribution(rng, 2);
            std::vector<QSqrt2> row(4, QSqrt2(0));
            for (int v = 0; v < 2; ++v) row[static_cast<std::size_t>(psi2[a] + 2 * v)] = o2[v];
            f.rows.push_back(std::move(row));
        }
    }
    cpds["F"] = std::move(f);
    return build_from_conditionals(g, cpds);
}

}  // namespace

SuiteResult g1_reduction_suite(unsigned seed, std::size_t num_models) {
    SuiteResult result{"g1-reduction", 0, 0, {}};
    std::mt19937 rng(seed);
    for (std::size_t iter = 0; iter < num_models; ++iter) {
        ++result.checked;
        try {
            if (!g1_reduction_holds(random_g1_conditioned_table(rng)))
                record_failure(result, "model " + std::to_string(iter) + " failed to reduce");
        } catch (const std::exception& e) {
            record_failure(result, "model " + std::to_string(iter) + ": " + e.what());
        }
    }
    return result;
}

SuiteResult triangle_reduction_suite(unsigned seed, std::size_t num_models) {
    SuiteResult result{"triangle-reduction", 0, 0, {}};
    std::mt19937 rng(seed);
    for (std::size_t iter = 0; iter < num_models; ++iter) {
        ++result.checked;
        try {
            if (!triangle_reduction_holds(random_triangle_conditioned_table(rng)))
                record_failure(result, "model " + std::to_string(iter) + " failed to reduce");
        } catch (const std::exception& e) {
            record_failure(result, "model " + std::to_string(iter) + ": " + e.what());
        }
    }
    return result;
}

SuiteResult g2_in_g1_suite(unsigned seed, std::size_t num_tables) {
    SuiteResult result{"g2-in-g1", 0, 0, {}};
    std::mt19937 rng(seed);
    const CausalGraph g2 = build_g2();
    const CausalGraph g1 = build_g1();
    for (std::size_t iter = 0; iter < num_tables; ++iter) {
        ++result.checked;
        std::vector<int> cards;
        for (std::size_t i = 0; i < g2.node_count(); ++i)
            cards.push_back(2 + static_cast<int>(draw_below(rng, 2)));
        const JointTable t = random_factorized_table(rng, g2, cards);
        if (!factorize_check(t, g1))
            record_failure(result, "table " + std::to_string(iter) + " fails on g1");
    }
    return result;
}

SuiteResult lhv_mixture_suite(unsigned seed, std::size_t num_points) {
    SuiteResult result{"lhv-mixtures", 0, 0, {}};
    std::mt19937 rng(seed);
    const auto strategies = enumerate_strategies();
    const QSqrt2 quarter(Rational(1, 4));
    for (std::size_t iter = 0; iter < num_points; ++iter) {
        ++result.checked;
        const int denominator = 1 + static_cast<int>(draw_below(rng, 64));
        std::vector<int> cuts{0, denominator};
        for (std::size_t i = 0; i + 1 < strategies.size(); ++i)
            cuts.push_back(
                static_cast<int>(draw_below(rng, static_cast<std::uint32_t>(denominator + 1))));
        std::sort(cuts.begin(), cuts.end());

        BellData b;
        for (int s1 = 0; s1 < 2; ++s1) {
            b.p_setting1[s1] = QSqrt2(Rational(1, 2));
            b.p_setting2[s1] = QSqrt2(Rational(1, 2));
            for (int s2 = 0; s2 < 2; ++s2) {
                b.setting_joint[s1][s2] = quarter;
                for (int o1 = 0; o1 < 2; ++o1)
                    for (int o2 = 0; o2 < 2; ++o2) {
                        QSqrt2 cell;
                        for (std::size_t s = 0; s < strategies.size(); ++s)
                            cell += QSqrt2(Rational(cuts[s + 1] - cuts[s], denominator)) *
                                    strategies[s].prob(s1, s2, o1, o2);
                        b.cond[s1][s2][o1][o2] = cell;
                    }
            }
        }

        const LhvResult verdict = lhv_feasible(b);
        if (!verdict.feasible) {
            record_failure(result, "mixture " + std::to_string(iter) + " declared infeasible");
            continue;
        }
        // The returned weights must reproduce the conditionals exactly.
        bool reproduced = true;
        for (int s1 = 0; s1 < 2 && reproduced; ++s1)
            for (int s2 = 0; s2 < 2 && reproduced; ++s2)
                for (int o1 = 0; o1 < 2 && reproduced; ++o1)
                    for (int o2 = 0; o2 < 2 && reproduced; ++o2) {
                        QSqrt2 cell;
                        for (std::size_t s = 0; s < strategies.size(); ++s)
                            cell += verdict.weights[s] * strategies[s].prob(s1, s2, o1, o2);
                        reproduced = cell == b.cond[s1][s2][o1][o2];
                    }
        if (!reproduced) {
            record_failure(result, "mixture " + std::to_string(iter) + " weights do not reproduce");
            continue;
        }
        for (const auto& score : chsh_all_symmetries(b))
            if (score > QSqrt2(3)) {
                record_failure(result, "mixture " + std::to_string(iter) + " beats the bound");
                break;
            }
        // Verdict must be stable under every orbit relabelling.
        for (int flips = 1; flips < 8; ++flips) {
            const BellData r = relabel(b, flips & 4, flips & 2, flips & 1);
            if (!lhv_feasible(r).feasible) {
                record_failure(result, "mixture " + std::to_string(iter) + " relabelling flipped");
                break;
            }
        }
    }
    return result;
}

std::vector<SuiteResult> run_all(unsigned seed) {
    return {
        dsep_oracle_suite(seed, 200),     markov_suite(seed, 100),
        g1_reduction_suite(seed, 200),    triangle_reduction_suite(seed, 200),
        g2_in_g1_suite(seed, 50),         lhv_mixture_suite(seed, 500),
    };
}

}  // namespace causalgap::selftest
