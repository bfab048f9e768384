#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "causalgap/json_io.hpp"
#include "causalgap/scenarios.hpp"
#include "causalgap/selftest.hpp"
#include "causalgap/table.hpp"

using namespace causalgap;

namespace {

const QSqrt2 kCos2 = QSqrt2::from_parts(2, 1, 4);   // cos^2(pi/8)
const QSqrt2 kSin2 = QSqrt2::from_parts(2, -1, 4);  // sin^2(pi/8)

QSqrt2 total_mass(const JointTable& t) {
    QSqrt2 sum;
    for (const auto& p : t.probs()) sum += p;
    return sum;
}

// Product of two independent bits with distinct marginals; assignment
// order (x, y): (0,0), (0,1), (1,0), (1,1).
JointTable skewed_product_table() {
    const QSqrt2 px(Rational(1, 4));
    const QSqrt2 py(Rational(2, 3));
    return JointTable({{"X", 2}, {"Y", 2}},
                      {px * py, px * (QSqrt2(1) - py), (QSqrt2(1) - px) * py,
                       (QSqrt2(1) - px) * (QSqrt2(1) - py)});
}

}  // namespace

TEST_CASE("construction checks") {
    CHECK_THROWS_AS(JointTable({{"X", 2}}, {QSqrt2(1)}), VariableMismatchError);
    CHECK_THROWS_AS(JointTable({{"X", 2}}, {QSqrt2(1), QSqrt2(1)}), ZeroProbabilityEventError);
    CHECK_THROWS_AS(JointTable({{"X", 2}}, {QSqrt2(2), QSqrt2(-1)}), ZeroProbabilityEventError);
    CHECK_THROWS_AS(JointTable({{"X", 2}, {"X", 2}}, std::vector<QSqrt2>(4, QSqrt2(Rational(1, 4)))),
                    UnknownVariableError);
    CHECK(JointTable::uniform({{"X", 2}, {"Y", 3}}).size() == 6);
}

TEST_CASE("marginalize") {
    const JointTable u2 = JointTable::uniform({{"X", 2}, {"Y", 2}});
    const JointTable mx = marginalize(u2, {"X"});
    CHECK(mx.vars().size() == 1);
    CHECK(mx.prob({0}) == QSqrt2(Rational(1, 2)));

    // The bundled CHSH-spectrum table has uniform single-variable marginals.
    const JointTable t1 = g1_expected_table();
    const JointTable mc = marginalize(t1, {"C"});
    CHECK(mc.prob({0}) == QSqrt2(Rational(1, 2)));
    CHECK(mc.prob({1}) == QSqrt2(Rational(1, 2)));
    CHECK(total_mass(marginalize(t1, {"E", "F_O"})) == QSqrt2(1));

    CHECK_THROWS_AS(marginalize(t1, {"Q"}), UnknownVariableError);
    CHECK_THROWS_AS(marginalize(t1, {}), UnknownVariableError);
    // Kept variables stay in table order whatever the request order.
    CHECK(marginalize(t1, {"D", "C"}).vars()[0].name == "C");
}

TEST_CASE("condition") {
    const JointTable t1 = g1_expected_table();
    // Conditioned on both settings being 1, the outcomes agree with
    // probability sin^2(pi/8).
    const JointTable c11 = condition(t1, {{"C", 1}, {"E", 1}});
    CHECK(c11.vars().size() == 2);
    CHECK(c11.prob({0, 0}) + c11.prob({1, 1}) == kSin2);
    CHECK(c11.prob({0, 1}) + c11.prob({1, 0}) == kCos2);

    const JointTable prod = skewed_product_table();
    const JointTable given_x = condition(prod, {{"X", 1}});
    CHECK(given_x.prob({0}) == QSqrt2(Rational(2, 3)));

    std::vector<QSqrt2> point(4, QSqrt2(0));
    point[0] = QSqrt2(1);
    const JointTable mass_at_zero({{"X", 2}, {"Y", 2}}, point);
    CHECK_THROWS_AS(condition(mass_at_zero, {{"X", 1}}), ZeroProbabilityEventError);
    CHECK_THROWS_AS(condition(prod, {{"Q", 0}}), UnknownVariableError);
}

TEST_CASE("conditional independence") {
    const JointTable t1 = g1_expected_table();
    CHECK(is_cond_independent(t1, {"E"}, {"C", "D"}, {}));
    CHECK_FALSE(is_cond_independent(t1, {"D"}, {"C", "E", "F_O"}, {}));
    CHECK(is_cond_independent(skewed_product_table(), {"X"}, {"Y"}, {}));
    CHECK_THROWS_AS(is_cond_independent(t1, {"C"}, {"C"}, {}), OverlappingSetsError);
}

TEST_CASE("factorization against a graph") {
    std::mt19937 rng(5);
    const CausalGraph g1 = build_g1();
    const std::vector<int> cards{2, 2, 2, 2, 2, 2};
    const JointTable forward = selftest::random_factorized_table(rng, g1, cards);
    CHECK(factorize_check(forward, g1));

    // Perfectly correlated pair with no connecting edge.
    const CausalGraph pair({{"X", NodeKind::Observed}, {"Y", NodeKind::Observed}}, {});
    std::vector<QSqrt2> corr{QSqrt2(Rational(1, 2)), QSqrt2(0), QSqrt2(0),
                             QSqrt2(Rational(1, 2))};
    CHECK_FALSE(factorize_check(JointTable({{"X", 2}, {"Y", 2}}, corr), pair));

    CHECK_THROWS_AS(factorize_check(JointTable::uniform({{"X", 2}}), g1),
                    VariableMismatchError);
}

TEST_CASE("build_from_conditionals") {
    const CausalGraph chain({{"X", NodeKind::Observed}, {"Y", NodeKind::Observed}},
                            {{"X", "Y"}});
    std::map<std::string, Cpd> cpds;
    cpds["X"] = {"X", 2, {}, {{QSqrt2(Rational(1, 2)), QSqrt2(Rational(1, 2))}}};
    cpds["Y"] = {"Y", 2, {"X"}, {{QSqrt2(Rational(1, 2)), QSqrt2(Rational(1, 2))},
                                 {QSqrt2(Rational(1, 2)), QSqrt2(Rational(1, 2))}}};
    CHECK(build_from_conditionals(chain, cpds) == JointTable::uniform({{"X", 2}, {"Y", 2}}));

    // Deterministic conditionals give a point mass.
    cpds["X"].rows = {{QSqrt2(1), QSqrt2(0)}};
    cpds["Y"].rows = {{QSqrt2(0), QSqrt2(1)}, {QSqrt2(1), QSqrt2(0)}};
    const JointTable point = build_from_conditionals(chain, cpds);
    CHECK(point.prob({0, 1}) == QSqrt2(1));

    std::map<std::string, Cpd> missing = cpds;
    missing.erase("Y");
    CHECK_THROWS_AS(build_from_conditionals(chain, missing), MissingCpdError);
    std::map<std::string, Cpd> bad = cpds;
    bad["X"].rows = {{QSqrt2(1), QSqrt2(1)}};
    CHECK_THROWS_AS(build_from_conditionals(chain, bad), UnnormalizedCpdError);
}

TEST_CASE("shared-bit mixture correlates the two wings") {
    // B a uniform bit copied into both D and F_O; settings C and E free.
    const CausalGraph g({{"B", NodeKind::Latent},
                         {"C", NodeKind::Observed},
                         {"E", NodeKind::Observed},
                         {"D", NodeKind::Observed},
                         {"F_O", NodeKind::Observed}},
                        {{"B", "D"}, {"C", "D"}, {"B", "F_O"}, {"E", "F_O"}});
    const QSqrt2 half(Rational(1, 2));
    std::map<std::string, Cpd> cpds;
    cpds["B"] = {"B", 2, {}, {{half, half}}};
    cpds["C"] = {"C", 2, {}, {{half, half}}};
    cpds["E"] = {"E", 2, {}, {{half, half}}};
    Cpd d{"D", 2, {"B", "C"}, {}};
    Cpd f{"F_O", 2, {"B", "E"}, {}};
    for (int b = 0; b < 2; ++b) {
        for (int s = 0; s < 2; ++s) {
            std::vector<QSqrt2> copy_b{QSqrt2(b == 0 ? 1 : 0), QSqrt2(b == 1 ? 1 : 0)};
            d.rows.push_back(copy_b);
            f.rows.push_back(copy_b);
        }
    }
    cpds["D"] = std::move(d);
    cpds["F_O"] = std::move(f);
    const JointTable t = build_from_conditionals(g, cpds);
    // Direct product-sum: P(d, f_O agree) = 1, each wing uniform.
    const JointTable df = marginalize(t, {"D", "F_O"});
    CHECK(df.prob({0, 0}) == half);
    CHECK(df.prob({1, 1}) == half);
    CHECK(df.prob({0, 1}).is_zero());
    CHECK(factorize_check(t, g));
}

TEST_CASE("merge and split invert each other") {
    std::mt19937 rng(17);
    const CausalGraph g = build_triangle();
    const std::vector<int> cards{2, 3, 2, 4, 2, 2};
    const JointTable t = selftest::random_factorized_table(rng, g, cards);
    const JointTable split = split_variable(t, "D", "S1", 2, "O1");
    CHECK(split.vars()[3].name == "S1");
    CHECK(split.vars()[4].name == "O1");
    CHECK(merge_variables(split, "S1", "O1", "D") == t);
    CHECK(total_mass(split) == QSqrt2(1));
    CHECK_THROWS_AS(split_variable(t, "D", "S1", 3, "O1"), VariableMismatchError);
}

TEST_CASE("reorder permutes assignments consistently") {
    const JointTable t1 = g1_expected_table();
    const JointTable r = reorder_vars(t1, {"D", "F_O", "E", "C"});
    for (int c = 0; c < 2; ++c)
        for (int e = 0; e < 2; ++e)
            for (int f = 0; f < 2; ++f)
                for (int d = 0; d < 2; ++d) CHECK(r.prob({d, f, e, c}) == t1.prob({c, e, f, d}));
    CHECK_THROWS_AS(reorder_vars(t1, {"C", "E", "F_O"}), VariableMismatchError);
}

TEST_CASE("marginalize and condition commute") {
    std::mt19937 rng(23);
    std::size_t examined = 0;
    for (int iter = 0; iter < 30; ++iter) {
        const CausalGraph g = selftest::random_dag(rng, 4);
        if (g.node_count() < 3) continue;
        const std::vector<int> cards(g.node_count(), 2);
        const JointTable t = selftest::random_factorized_table(rng, g, cards);
        const std::string fixed = t.vars()[0].name;
        // Keep a strict subset of the remaining variables.
        std::vector<std::string> keep{t.vars()[1].name};
        std::vector<std::string> keep_with_fixed{fixed, t.vars()[1].name};
        const JointTable fixed_marginal = marginalize(t, {fixed});
        for (int v = 0; v < 2; ++v) {
            if (fixed_marginal.prob({v}).is_zero()) continue;
            ++examined;
            CHECK(condition(marginalize(t, keep_with_fixed), {{fixed, v}}) ==
                  marginalize(condition(t, {{fixed, v}}), keep));
        }
    }
    CHECK(examined > 20);
}

TEST_CASE("json round-trip") {
    const JointTable t1 = g1_expected_table();
    CHECK(table_from_json(table_to_json(t1)) == t1);

    std::mt19937 rng(29);
    const CausalGraph g = selftest::random_dag(rng, 4);
    const std::vector<int> cards(g.node_count(), 3);
    const JointTable t = selftest::random_factorized_table(rng, g, cards);
    CHECK(table_from_json(table_to_json(t)) == t);

    CHECK_THROWS_AS(table_from_json(njson::parse(R"({"vars":[]})")), ParseError);
}
