// causalgap: exact classical-vs-quantum gap analysis for small causal
// networks, driven by JSON files.
//
// Exit codes: 0 affirmative result, 1 substantive negative (not d-separated,
// LHV-infeasible, scenario or selftest failure), 2 input error, 3 internal
// numeric failure (exact snapping).

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "causalgap/json_io.hpp"
#include "causalgap/selftest.hpp"

namespace {

using namespace causalgap;

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        if (next > pos) out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

std::string render_path(const Path& p) {
    std::string out = p.nodes.front();
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
        out += (p.forward[i] ? " -> " : " <- ") + p.nodes[i + 1];
    return out;
}

BellRoles roles_from_flag(const std::string& csv) {
    const auto parts = split_csv(csv);
    if (parts.size() != 4)
        throw ParseError("--roles needs 'setting1,setting2,outcome1,outcome2'");
    return {parts[0], parts[1], parts[2], parts[3]};
}

void emit(const njson& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        save_json_file(out_path, j);
}

int run_dsep(const std::string& file, const std::string& x, const std::string& y,
             const std::string& given, const std::string& format) {
    const CausalGraph g = graph_from_json(load_json_file(file));
    const auto xs = split_csv(x);
    const auto ys = split_csv(y);
    const auto zs = split_csv(given);
    const bool separated = d_separated(g, xs, ys, zs);
    std::optional<Path> witness;
    if (!separated) witness = find_unblocked_path(g, xs, ys, zs);
    if (format == "json") {
        njson out{{"d_separated", separated}};
        out["witness"] = witness ? njson(render_path(*witness)) : njson(nullptr);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << (separated ? "true" : "false") << "\n";
        if (witness) std::cout << "witness: " << render_path(*witness) << "\n";
    }
    return separated ? 0 : 1;
}

int run_eval(const std::string& file, const std::string& out_path, const std::string& format) {
    const QuantumModel model = model_from_json(load_json_file(file));
    const JointTable table = evaluate_distribution(model);
    if (format == "json") {
        emit(table_to_json(table), out_path);
    } else {
        std::string text;
        for (std::size_t flat = 0; flat < table.size(); ++flat) {
            const auto asg = table.assignment_of(flat);
            std::string key;
            for (std::size_t i = 0; i < asg.size(); ++i)
                key += (i ? "," : "") + std::to_string(asg[i]);
            text += key + " = " + table.probs()[flat].str() + "\n";
        }
        if (out_path.empty())
            std::cout << text;
        else {
            std::ofstream f(out_path);
            f << text;
        }
    }
    return 0;
}

int run_chsh(const std::string& file, const std::string& roles_csv, const std::string& format) {
    const JointTable table = table_from_json(load_json_file(file));
    const BellData bell = extract_bell(table, roles_from_flag(roles_csv));
    const QSqrt2 value = chsh_value(bell);
    const auto orbit = chsh_all_symmetries(bell);
    if (format == "json") {
        njson orbit_json = njson::array();
        for (const auto& v : orbit) orbit_json.push_back(v.str());
        njson out{{"chsh", value.str()},
                  {"decimal", format_decimal(value.to_double())},
                  {"settings_independent", settings_independent(bell)},
                  {"orbit", std::move(orbit_json)}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "chsh = " << value.str() << " ~ " << format_decimal(value.to_double())
                  << "\n";
        std::cout << "orbit:";
        for (const auto& v : orbit) std::cout << " " << v.str();
        std::cout << "\n";
    }
    return 0;
}

int run_lhv(const std::string& file, const std::string& roles_csv, const std::string& format) {
    const JointTable table = table_from_json(load_json_file(file));
    const BellData bell = extract_bell(table, roles_from_flag(roles_csv));
    const LhvResult verdict = lhv_feasible(bell);
    if (format == "json") {
        std::cout << lhv_to_json(verdict).dump(2) << "\n";
    } else if (verdict.feasible) {
        std::cout << "FEASIBLE\n";
        for (std::size_t s = 0; s < verdict.weights.size(); ++s)
            if (!verdict.weights[s].is_zero())
                std::cout << "w[" << s << "] = " << verdict.weights[s].str() << "\n";
    } else {
        std::cout << "INFEASIBLE\n";
        std::cout << "certificate (16 cells + normalization):\n";
        for (const auto& y : verdict.certificate) std::cout << "  " << y.str() << "\n";
    }
    return verdict.feasible ? 0 : 1;
}

int run_scenario_cmd(const std::string& name, const std::string& format) {
    try {
        const ScenarioReport report = run_scenario(name);
        if (format == "json")
            std::cout << report_to_json(report).dump(2) << "\n";
        else
            std::cout << report_to_text(report);
        return report.pass ? 0 : 1;
    } catch (const PipelineStepFailedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_selftest(unsigned seed, const std::string& format) {
    const auto results = selftest::run_all(seed);
    bool all_pass = true;
    if (format == "json") {
        njson suites = njson::array();
        for (const auto& r : results) {
            suites.push_back({{"suite", r.name},
                              {"checked", r.checked},
                              {"failures", r.failures},
                              {"first_failure", r.first_failure}});
            all_pass = all_pass && r.passed();
        }
        std::cout << njson{{"seed", seed}, {"suites", std::move(suites)}}.dump(2) << "\n";
    } else {
        std::cout << "seed: " << seed << "\n";
        for (const auto& r : results) {
            all_pass = all_pass && r.passed();
            std::cout << (r.passed() ? "[pass] " : "[FAIL] ") << r.name << ": " << r.checked
                      << " checks, " << r.failures << " failures";
            if (!r.first_failure.empty()) std::cout << " (first: " << r.first_failure << ")";
            std::cout << "\n";
        }
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact classical-vs-quantum gap analysis for small causal networks"};
    app.require_subcommand(1);
    std::string file, out_path, format = "text";
    std::string x, y, given, roles, name;

    auto* dsep = app.add_subcommand("dsep", "decide d-separation in a graph file");
    dsep->add_option("graph", file, "graph JSON file")->required();
    dsep->add_option("--x", x, "first node set (comma separated)")->required();
    dsep->add_option("--y", y, "second node set (comma separated)")->required();
    dsep->add_option("--given", given, "conditioning set (comma separated)");

    auto* eval = app.add_subcommand("eval", "evaluate a quantum model to an exact table");
    eval->add_option("model", file, "model JSON file")->required();
    eval->add_option("--out", out_path, "write the table here instead of stdout");

    auto* chsh = app.add_subcommand("chsh", "CHSH value and relabelling orbit of a table");
    chsh->add_option("table", file, "table JSON file")->required();
    chsh->add_option("--roles", roles, "setting1,setting2,outcome1,outcome2")->required();

    auto* lhv = app.add_subcommand("lhv", "exact LHV-polytope membership of a table");
    lhv->add_option("table", file, "table JSON file")->required();
    lhv->add_option("--roles", roles, "setting1,setting2,outcome1,outcome2")->required();

    auto* scenario = app.add_subcommand("scenario", "run a bundled scenario pipeline");
    scenario->add_option("name", name, "g1 | g2 | triangle")
        ->required()
        ->check(CLI::IsMember({"g1", "g2", "triangle"}));

    auto* selftest_cmd = app.add_subcommand("selftest", "run the randomized property drivers");
    unsigned seed = causalgap::selftest::kDefaultSeed;
    if (const char* env_seed = std::getenv("CAUSALGAP_SEED"))
        seed = static_cast<unsigned>(std::strtoul(env_seed, nullptr, 10));
    selftest_cmd->add_option("--seed", seed, "property-driver seed");

    for (auto* sub : {dsep, eval, chsh, lhv, scenario, selftest_cmd})
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json"}));

    CLI11_PARSE(app, argc, argv);
    // eval emits JSON unless text is asked for; everything else defaults to text.
    if (app.got_subcommand(eval) && eval->get_option("--format")->count() == 0) format = "json";

    try {
        if (app.got_subcommand(dsep)) return run_dsep(file, x, y, given, format);
        if (app.got_subcommand(eval)) return run_eval(file, out_path, format);
        if (app.got_subcommand(chsh)) return run_chsh(file, roles, format);
        if (app.got_subcommand(lhv)) return run_lhv(file, roles, format);
        if (app.got_subcommand(scenario)) return run_scenario_cmd(name, format);
        if (app.got_subcommand(selftest_cmd)) return run_selftest(seed, format);
    } catch (const SnapFailureError& e) {
        std::cerr << "error: snap failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
