// Regenerates the bundled fixture files (graphs, models, reference Bell
// tables) under the directory given as argv[1]. The expected-distribution
// fixture g1_expected.table.json is maintained by hand and never touched.

#include <iostream>

#include "causalgap/json_io.hpp"

using namespace causalgap;

namespace {

JointTable deterministic_bell_table(int strategy) {
    // Uniform independent settings, outcomes from deterministic strategy
    // id = 4*r1 + r2 (r = 2*f(0) + f(1)), variables (C, E, F_O, D).
    const auto strategies = enumerate_strategies();
    const DetStrategy s = strategies[static_cast<std::size_t>(strategy)];
    std::vector<QSqrt2> probs;
    for (int c = 0; c < 2; ++c)
        for (int e = 0; e < 2; ++e)
            for (int f = 0; f < 2; ++f)
                for (int d = 0; d < 2; ++d)
                    probs.push_back(QSqrt2(Rational(1, 4)) * s.prob(c, e, d, f));
    return JointTable({{"C", 2}, {"E", 2}, {"F_O", 2}, {"D", 2}}, std::move(probs));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "fixtures";
    save_json_file(dir + "/g1.graph.json", graph_to_json(build_g1()));
    save_json_file(dir + "/g2.graph.json", graph_to_json(build_g2()));
    save_json_file(dir + "/triangle.graph.json", graph_to_json(build_triangle()));
    save_json_file(dir + "/g1.model.json", model_to_json(g1_quantum_model()));
    save_json_file(dir + "/triangle.model.json", model_to_json(triangle_quantum_model()));
    save_json_file(dir + "/uniform_noise.table.json",
                   table_to_json(JointTable::uniform({{"C", 2}, {"E", 2}, {"F_O", 2}, {"D", 2}})));
    save_json_file(dir + "/det00.table.json", table_to_json(deterministic_bell_table(0)));
    std::cout << "fixtures written to " << dir << "\n";
    return 0;
}
