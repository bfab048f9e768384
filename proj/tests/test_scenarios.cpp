#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "causalgap/json_io.hpp"
#include "causalgap/scenarios.hpp"
#include "causalgap/selftest.hpp"

using namespace causalgap;

namespace {

const QSqrt2 kTsirelson = QSqrt2(2) + QSqrt2::sqrt2();

std::set<std::pair<std::string, std::string>> edge_set(const CausalGraph& g) {
    return {g.edges().begin(), g.edges().end()};
}

}  // namespace

TEST_CASE("bundled graphs") {
    const CausalGraph g1 = build_g1();
    CHECK(g1.edges().size() == 7);
    CHECK(g1.nodes_of_kind(NodeKind::Latent) == std::vector<std::string>{"A", "B"});
    CHECK(g1.nodes_of_kind(NodeKind::Observed) == std::vector<std::string>{"C", "D", "E", "F"});

    const CausalGraph g2 = build_g2();
    auto expected = edge_set(g1);
    expected.erase({"C", "E"});
    CHECK(edge_set(g2) == expected);

    const CausalGraph tri = build_triangle();
    CHECK(tri.edges().size() == 6);
    CHECK(tri.nodes_of_kind(NodeKind::Latent) == std::vector<std::string>{"A", "B", "C"});
    CHECK(tri.nodes_of_kind(NodeKind::Observed) == std::vector<std::string>{"D", "E", "F"});
}

TEST_CASE("bundled models validate and evaluate") {
    CHECK(validate_model(g1_quantum_model()).empty());
    CHECK(validate_model(g2_quantum_model()).empty());
    CHECK(validate_model(triangle_quantum_model()).empty());

    // The g1 evaluation projects onto the closed-form table.
    const JointTable t = evaluate_distribution(g1_quantum_model());
    const JointTable split = split_variable(t, "F", "F_O", 2, "F_S");
    const JointTable bell =
        reorder_vars(marginalize(split, {"C", "E", "F_O", "D"}), {"C", "E", "F_O", "D"});
    CHECK(bell == g1_expected_table());

    // E inherits A's uniform marginal.
    const JointTable me = marginalize(t, {"E"});
    CHECK(me.prob({0}) == QSqrt2(Rational(1, 2)));
}

TEST_CASE("triangle model satisfies its copy conditions") {
    const JointTable t = evaluate_distribution(triangle_quantum_model());
    JointTable split = split_variable(t, "D", "S1", 2, "O1");
    split = split_variable(split, "E", "S1p", 2, "S2p");
    split = split_variable(split, "F", "S2", 2, "O2");
    CHECK(copies_exactly(split, "S1p", "S1"));
    CHECK(copies_exactly(split, "S2p", "S2"));

    const JointTable bell =
        reorder_vars(marginalize(split, {"S1", "S2", "O1", "O2"}), {"S1", "S2", "O1", "O2"});
    CHECK(bell == triangle_expected_table());
    CHECK(chsh_value(extract_bell(bell, {"S1", "S2", "O1", "O2"})) == kTsirelson);

    const JointTable settings = marginalize(split, {"S1", "S2"});
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
            CHECK(settings.prob({s1, s2}) == QSqrt2(Rational(1, 4)));
}

TEST_CASE("condition checkers") {
    const JointTable t = evaluate_distribution(g1_quantum_model());
    const JointTable split = split_variable(t, "F", "F_O", 2, "F_S");
    CHECK(copies_exactly(split, "F_S", "E"));
    CHECK_FALSE(copies_exactly(split, "F_O", "E"));
    CHECK(independent_of(split, "E", {"C", "D"}));
    CHECK_FALSE(independent_of(split, "F_S", {"E"}));

    CHECK(independent_of(JointTable::uniform({{"E", 2}, {"C", 2}, {"D", 2}}), "E", {"C", "D"}));
    // e forced equal to d.
    std::vector<QSqrt2> probs(8, QSqrt2(0));
    probs[0] = QSqrt2(Rational(1, 2));  // (e,c,d) = (0,0,0)
    probs[5] = QSqrt2(Rational(1, 2));  // (e,c,d) = (1,0,1)
    CHECK_FALSE(
        independent_of(JointTable({{"E", 2}, {"C", 2}, {"D", 2}}, probs), "E", {"C", "D"}));
}

TEST_CASE("g1 reduction") {
    std::mt19937 rng(77);
    for (int iter = 0; iter < 25; ++iter) {
        // Drawn from the same restricted family the suite uses.
        const auto suite = selftest::g1_reduction_suite(1000 + iter, 1);
        CHECK(suite.failures == 0);
    }

    // Deterministic all-zeros model reduces trivially.
    const CausalGraph g = build_g1();
    std::map<std::string, Cpd> cpds;
    auto point = [](int card, int value) {
        std::vector<QSqrt2> row(static_cast<std::size_t>(card), QSqrt2(0));
        row[static_cast<std::size_t>(value)] = QSqrt2(1);
        return row;
    };
    cpds["A"] = {"A", 2, {}, {point(2, 0)}};
    cpds["B"] = {"B", 2, {}, {point(2, 0)}};
    cpds["C"] = {"C", 2, {}, {point(2, 0)}};
    Cpd d{"D", 2, {"B", "C"}, {}};
    for (int i = 0; i < 4; ++i) d.rows.push_back(point(2, 0));
    cpds["D"] = std::move(d);
    Cpd e{"E", 2, {"A", "C", "D"}, {}};
    for (int i = 0; i < 8; ++i) e.rows.push_back(point(2, 0));
    cpds["E"] = std::move(e);
    Cpd f{"F", 4, {"A", "B"}, {}};
    for (int i = 0; i < 4; ++i) f.rows.push_back(point(4, 0));
    cpds["F"] = std::move(f);
    CHECK(g1_reduction_holds(build_from_conditionals(g, cpds)));

    // Violating the independence condition is a precondition failure:
    // E copies C instead of ignoring it.
    auto violating = cpds;
    Cpd e2{"E", 2, {"A", "C", "D"}, {}};
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
            for (int dd = 0; dd < 2; ++dd) e2.rows.push_back(point(2, c));
    violating["E"] = std::move(e2);
    violating["C"] = {"C", 2, {}, {{QSqrt2(Rational(1, 2)), QSqrt2(Rational(1, 2))}}};
    CHECK_THROWS_AS(g1_reduction_holds(build_from_conditionals(g, violating)),
                    PreconditionViolatedError);

    // A table that does not factorize over g1 is also rejected.
    CHECK_THROWS_AS(
        g1_reduction_holds(JointTable(
            {{"A", 2}, {"B", 2}, {"C", 2}, {"D", 2}, {"E", 2}, {"F", 4}},
            [] {
                std::vector<QSqrt2> p(128, QSqrt2(0));
                p[0] = QSqrt2(Rational(1, 2));
                p[127] = QSqrt2(Rational(1, 2));
                return p;
            }())),
        PreconditionViolatedError);
}

TEST_CASE("triangle reduction") {
    const auto suite = selftest::triangle_reduction_suite(4242, 25);
    CHECK(suite.failures == 0);
    CHECK(suite.checked == 25);
}

TEST_CASE("g2 tables also factorize over g1") {
    const auto suite = selftest::g2_in_g1_suite(8, 10);
    CHECK(suite.failures == 0);
}

TEST_CASE("scenario pipelines") {
    for (const std::string name : {"g1", "g2", "triangle"}) {
        const ScenarioReport report = run_scenario(name);
        CAPTURE(name);
        CHECK(report.pass);
        CHECK(report.model_valid);
        CHECK(report.table_matches_expected);
        CHECK(report.settings_indep);
        CHECK(report.chsh == kTsirelson);
        CHECK(report.chsh.str() == "(2+1*sqrt2)/1");
        CHECK_FALSE(report.lhv_is_feasible);
        CHECK(report.certificate.size() == 17);
        CHECK(report.consistent);
        for (const auto& fact : report.dsep_facts) CHECK(fact.actual == fact.expected);
        for (const auto& cond : report.conditions) CHECK(cond.pass);
    }
    CHECK(run_scenario("g1").node_count == 6);
    CHECK(run_scenario("g1").edge_count == 7);
    CHECK(run_scenario("g2").edge_count == 6);
    CHECK_THROWS_AS(run_scenario("bogus"), PipelineStepFailedError);
}

TEST_CASE("reports are byte-stable") {
    const ScenarioReport a = run_scenario("g1");
    const ScenarioReport b = run_scenario("g1");
    CHECK(report_to_text(a) == report_to_text(b));
    CHECK(report_to_json(a).dump() == report_to_json(b).dump());
    CHECK(report_to_text(a).find("result: PASS") != std::string::npos);
    CHECK(report_to_text(a).find("chsh: (2+1*sqrt2)/1 ~ 3.414214") != std::string::npos);
}

TEST_CASE("model json round-trip preserves behaviour") {
    for (const QuantumModel& m :
         {g1_quantum_model(), g2_quantum_model(), triangle_quantum_model()}) {
        const QuantumModel back = model_from_json(model_to_json(m));
        CHECK(validate_model(back).empty());
        CHECK(evaluate_distribution(back) == evaluate_distribution(m));
    }
    const CausalGraph g = build_g1();
    CHECK(graph_from_json(graph_to_json(g)).edges() == g.edges());
}
