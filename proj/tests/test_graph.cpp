#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "causalgap/graph.hpp"
#include "causalgap/scenarios.hpp"
#include "causalgap/selftest.hpp"

using namespace causalgap;

TEST_CASE("construction and validation") {
    CHECK_NOTHROW(CausalGraph({}, {}));
    CHECK_THROWS_AS(CausalGraph({{"X", NodeKind::Observed}, {"X", NodeKind::Latent}}, {}),
                    DuplicateNodeError);
    CHECK_THROWS_AS(CausalGraph({{"X", NodeKind::Observed}}, {{"X", "Y"}}),
                    UnknownEndpointError);
    CHECK_THROWS_AS(
        CausalGraph({{"X", NodeKind::Observed}, {"Y", NodeKind::Observed}}, {{"X", "Y"}, {"Y", "X"}}),
        CycleDetectedError);
    CHECK_THROWS_AS(CausalGraph({{"X", NodeKind::Observed}}, {{"X", "X"}}), CycleDetectedError);

    try {
        CausalGraph({{"X", NodeKind::Observed}, {"Y", NodeKind::Observed}, {"Z", NodeKind::Observed}},
                    {{"X", "Y"}, {"Y", "Z"}, {"Z", "X"}});
        FAIL("expected a cycle");
    } catch (const CycleDetectedError& e) {
        // The message names one concrete cycle.
        CHECK(std::string(e.what()).find("->") != std::string::npos);
    }
    CHECK_NOTHROW(build_g1());
}

TEST_CASE("parents and descendants on g1") {
    const CausalGraph g = build_g1();
    CHECK(g.parents("D") == std::vector<std::string>{"B", "C"});
    CHECK(g.parents("A").empty());
    CHECK(g.parents("E") == std::vector<std::string>{"A", "C", "D"});
    CHECK(g.descendants("B") == std::vector<std::string>{"D", "E", "F"});
    CHECK(g.descendants("E").empty());
    CHECK_THROWS_AS(g.parents("Q"), UnknownNodeError);

    const CausalGraph chain({{"X", NodeKind::Observed}, {"Y", NodeKind::Observed},
                             {"Z", NodeKind::Observed}},
                            {{"X", "Y"}, {"Y", "Z"}});
    CHECK(chain.descendants("X") == std::vector<std::string>{"Y", "Z"});
}

TEST_CASE("path blocking") {
    const CausalGraph g = build_g1();
    const Path fork_at_b{{"F", "B", "D"}, {false, true}};
    CHECK(is_blocked(g, fork_at_b, {"B"}));
    CHECK_FALSE(is_blocked(g, fork_at_b, {}));

    const Path fork_at_a{{"F", "A", "E"}, {false, true}};
    CHECK_FALSE(is_blocked(g, fork_at_a, {"B"}));

    const Path collider_at_d{{"C", "D", "B"}, {true, false}};
    CHECK(is_blocked(g, collider_at_d, {}));
    CHECK_FALSE(is_blocked(g, collider_at_d, {"D"}));
    // E is a descendant of the collider D, so conditioning on E opens it.
    CHECK_FALSE(is_blocked(g, collider_at_d, {"E"}));

    CHECK_THROWS_AS(is_blocked(g, Path{{"F", "E"}, {true}}, {}), InvalidPathError);
    CHECK_THROWS_AS(is_blocked(g, Path{{"F", "B", "F"}, {false, true}}, {}), InvalidPathError);
    CHECK_THROWS_AS(is_blocked(g, fork_at_b, {"F"}), InvalidPathError);
}

TEST_CASE("d-separation facts used by the bundled scenarios") {
    const CausalGraph g1 = build_g1();
    CHECK(d_separated(g1, {"F"}, {"C", "D"}, {"B"}));
    CHECK(d_separated(g1, {"E"}, {"B"}, {"C", "D"}));
    CHECK(d_separated(g1, {"B"}, {"C"}, {}));
    CHECK_FALSE(d_separated(g1, {"F"}, {"E"}, {"B"}));

    const CausalGraph tri = build_triangle();
    CHECK(d_separated(tri, {"B"}, {"E"}, {}));
    CHECK(d_separated(tri, {"D"}, {"F"}, {"B"}));

    CHECK_THROWS_AS(d_separated(g1, {"F"}, {"F"}, {}), OverlappingSetsError);
    CHECK_THROWS_AS(d_separated(g1, {"F"}, {"E"}, {"F"}), OverlappingSetsError);
    CHECK_THROWS_AS(d_separated(g1, {}, {"E"}, {}), OverlappingSetsError);
    CHECK_THROWS_AS(d_separated(g1, {"Q"}, {"E"}, {}), UnknownNodeError);
}

TEST_CASE("witness paths") {
    const CausalGraph g = build_g1();
    const auto witness = find_unblocked_path(g, {"F"}, {"E"}, {"B"});
    REQUIRE(witness.has_value());
    CHECK_FALSE(is_blocked(g, *witness, {"B"}));
    CHECK(witness->nodes.front() == "F");
    CHECK(witness->nodes.back() == "E");
    CHECK_FALSE(find_unblocked_path(g, {"B"}, {"C"}, {}).has_value());
}

TEST_CASE("all_dseps enumeration") {
    const CausalGraph g1 = build_g1();
    const auto over_bc = all_dseps(g1, {"B", "C"});
    REQUIRE(over_bc.size() == 1);
    CHECK(over_bc[0].x == "B");
    CHECK(over_bc[0].y == "C");
    CHECK(over_bc[0].z.empty());

    CHECK(all_dseps(g1, {"B"}).empty());

    const auto tri = all_dseps(build_triangle(), {"D", "E", "F", "B"});
    const bool has_df_given_b =
        std::any_of(tri.begin(), tri.end(), [](const DsepTriple& t) {
            return t.x == "D" && t.y == "F" && t.z == std::vector<std::string>{"B"};
        });
    CHECK(has_df_given_b);
}

TEST_CASE("reachability agrees with the path oracle on random graphs") {
    const auto result = selftest::dsep_oracle_suite(123, 60);
    CHECK(result.failures == 0);
    CHECK(result.checked > 1000);
}

TEST_CASE("collider blocks survive shrinking the conditioning set") {
    std::mt19937 rng(31);
    std::size_t examined = 0;
    for (int iter = 0; iter < 80; ++iter) {
        const CausalGraph g = selftest::random_dag(rng, 6);
        const int n = static_cast<int>(g.node_count());
        if (n < 3) continue;
        const auto& names = g.nodes();
        for (int x = 0; x < n; ++x) {
            for (int y = x + 1; y < n; ++y) {
                for (const auto& p : simple_paths(g, names[x].name, names[y].name)) {
                    if (p.nodes.size() < 3) continue;
                    std::vector<std::string> z;
                    for (const auto& node : names) {
                        bool interior_ok = node.name != p.nodes.front() &&
                                           node.name != p.nodes.back();
                        if (interior_ok && selftest::draw_below(rng, 2)) z.push_back(node.name);
                    }
                    // Does a collider block the path under z?
                    bool collider_blocks = false;
                    for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i) {
                        if (!(p.forward[i - 1] && !p.forward[i])) continue;
                        bool touched = false;
                        for (const auto& w : z) {
                            if (w == p.nodes[i]) touched = true;
                            for (const auto& dsc : g.descendants(p.nodes[i]))
                                if (dsc == w) touched = true;
                        }
                        if (!touched) collider_blocks = true;
                    }
                    if (!collider_blocks || z.empty()) continue;
                    ++examined;
                    for (std::size_t drop = 0; drop < z.size(); ++drop) {
                        std::vector<std::string> smaller;
                        for (std::size_t k = 0; k < z.size(); ++k)
                            if (k != drop) smaller.push_back(z[k]);
                        CHECK(is_blocked(g, p, smaller));
                    }
                }
            }
        }
    }
    CHECK(examined > 50);
}
