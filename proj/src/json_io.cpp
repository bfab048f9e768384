#include "causalgap/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace causalgap {

namespace {

std::string assignment_key(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(values[i]);
    }
    return out;
}

std::vector<int> parse_assignment_key(const std::string& key) {
    std::vector<int> out;
    if (key.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = key.find(',', pos);
        const std::string digit = key.substr(pos, next == std::string::npos ? next : next - pos);
        if (digit.empty() || digit.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad assignment key '" + key + "'");
        out.push_back(std::stoi(digit));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

njson matrix_to_json(const CMat& m) {
    njson rows = njson::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        njson row = njson::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(njson::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMat matrix_from_json(const njson& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
    CMat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& entry = row.at(static_cast<std::size_t>(c));
            if (!entry.is_array() || entry.size() != 2)
                throw ParseError("matrix entries must be [re, im] pairs");
            m(r, c) = std::complex<double>(entry.at(0).get<double>(), entry.at(1).get<double>());
        }
    }
    return m;
}

std::vector<QSqrt2> exact_list_from_json(const njson& j) {
    std::vector<QSqrt2> out;
    for (const auto& item : j) out.push_back(QSqrt2::parse(item.get<std::string>()));
    return out;
}

njson exact_list_to_json(const std::vector<QSqrt2>& values) {
    njson out = njson::array();
    for (const auto& v : values) out.push_back(v.str());
    return out;
}

}  // namespace

njson graph_to_json(const CausalGraph& g) {
    njson nodes = njson::array();
    for (const auto& n : g.nodes())
        nodes.push_back({{"name", n.name}, {"kind", n.kind == NodeKind::Latent ? "latent" : "observed"}});
    njson edges = njson::array();
    for (const auto& [from, to] : g.edges()) edges.push_back(njson::array({from, to}));
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

CausalGraph graph_from_json(const njson& j) {
    try {
        std::vector<Node> nodes;
        for (const auto& n : j.at("nodes")) {
            const std::string kind = n.at("kind").get<std::string>();
            if (kind != "latent" && kind != "observed")
                throw ParseError("node kind must be 'latent' or 'observed'");
            nodes.push_back({n.at("name").get<std::string>(),
                             kind == "latent" ? NodeKind::Latent : NodeKind::Observed});
        }
        std::vector<std::pair<std::string, std::string>> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edges must be [parent, child]");
            edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
        }
        return CausalGraph(std::move(nodes), std::move(edges));
    } catch (const njson::exception& e) {
        throw ParseError(std::string("bad graph json: ") + e.what());
    }
}

njson table_to_json(const JointTable& t) {
    njson vars = njson::array();
    for (const auto& v : t.vars()) vars.push_back({{"name", v.name}, {"card", v.card}});
    njson probs = njson::object();
    for (std::size_t flat = 0; flat < t.size(); ++flat)
        probs[assignment_key(t.assignment_of(flat))] = t.probs()[flat].str();
    return {{"vars", std::move(vars)}, {"probs", std::move(probs)}};
}

JointTable table_from_json(const njson& j) {
    try {
        std::vector<Alphabet> vars;
        for (const auto& v : j.at("vars"))
            vars.push_back({v.at("name").get<std::string>(), v.at("card").get<int>()});
        std::size_t total = 1;
        for (const auto& v : vars) total *= static_cast<std::size_t>(v.card);
        std::vector<QSqrt2> probs(total);
        std::vector<bool> seen(total, false);
        const auto& cells = j.at("probs");
        for (auto it = cells.begin(); it != cells.end(); ++it) {
            const std::vector<int> asg = parse_assignment_key(it.key());
            if (asg.size() != vars.size()) throw ParseError("assignment key of wrong length");
            std::size_t flat = 0;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                if (asg[i] < 0 || asg[i] >= vars[i].card)
                    throw ParseError("assignment key out of range");
                flat = flat * static_cast<std::size_t>(vars[i].card) +
                       static_cast<std::size_t>(asg[i]);
            }
            if (seen[flat]) throw ParseError("duplicate assignment key");
            seen[flat] = true;
            probs[flat] = QSqrt2::parse(it.value().get<std::string>());
        }
        // Unlisted cells default to zero.
        return JointTable(std::move(vars), std::move(probs));
    } catch (const njson::exception& e) {
        throw ParseError(std::string("bad table json: ") + e.what());
    }
}

njson model_to_json(const QuantumModel& m) {
    njson nodes = njson::object();
    for (const auto& node : m.graph.nodes()) {
        const auto& name = node.name;
        njson entry;
        if (auto it = m.quantum.find(name); it != m.quantum.end()) {
            entry["type"] = "quantum";
            entry["state"] = matrix_to_json(it->second.state);
            njson wiring = njson::array();
            for (const auto& [child, dim] : it->second.factors)
                wiring.push_back({{"latent", name}, {"factor", child}, {"dim", dim}});
            entry["wiring"] = std::move(wiring);
        } else if (auto ct = m.classical.find(name); ct != m.classical.end()) {
            entry["type"] = "classical";
            entry["probs"] = exact_list_to_json(ct->second.probs);
        } else if (auto dt = m.cpds.find(name); dt != m.cpds.end()) {
            entry["type"] = "cpd";
            entry["card"] = dt->second.card;
            njson rows = njson::object();
            const auto inputs = m.classical_inputs(name);
            std::vector<int> cards;
            for (const auto& p : inputs) cards.push_back(m.card_of(p));
            for (std::size_t r = 0; r < dt->second.rows.size(); ++r) {
                std::vector<int> asg(inputs.size());
                std::size_t rem = r;
                for (std::size_t i = inputs.size(); i-- > 0;) {
                    asg[i] = static_cast<int>(rem % static_cast<std::size_t>(cards[i]));
                    rem /= static_cast<std::size_t>(cards[i]);
                }
                rows[assignment_key(asg)] = exact_list_to_json(dt->second.rows[r]);
            }
            entry["rows"] = std::move(rows);
        } else if (auto pt = m.povms.find(name); pt != m.povms.end()) {
            entry["type"] = "povm";
            entry["outcomes"] = pt->second.outcomes;
            njson elements = njson::object();
            for (const auto& [setting, mats] : pt->second.elements) {
                njson list = njson::array();
                for (const auto& mat : mats) list.push_back(matrix_to_json(mat));
                elements[assignment_key(setting)] = std::move(list);
            }
            entry["elements"] = std::move(elements);
        } else {
            throw ModelInvalidError("node '" + name + "' has no assignment to serialize");
        }
        nodes[name] = std::move(entry);
    }
    return {{"graph", graph_to_json(m.graph)}, {"nodes", std::move(nodes)}};
}

QuantumModel model_from_json(const njson& j) {
    try {
        QuantumModel m{graph_from_json(j.at("graph")), {}, {}, {}, {}};
        struct PendingCpd {
            std::string name;
            njson rows;
        };
        std::vector<PendingCpd> pending;
        for (const auto& [name, entry] : j.at("nodes").items()) {
            const std::string type = entry.at("type").get<std::string>();
            if (type == "quantum") {
                QuantumSource src;
                src.state = matrix_from_json(entry.at("state"));
                for (const auto& w : entry.at("wiring")) {
                    if (w.at("latent").get<std::string>() != name)
                        throw ParseError("wiring record names a different latent node");
                    src.factors.emplace_back(w.at("factor").get<std::string>(),
                                             w.at("dim").get<int>());
                }
                m.quantum[name] = std::move(src);
            } else if (type == "classical") {
                m.classical[name] = {exact_list_from_json(entry.at("probs"))};
            } else if (type == "cpd") {
                CpdAssignment cpd;
                cpd.card = entry.at("card").get<int>();
                m.cpds[name] = std::move(cpd);
                pending.push_back({name, entry.at("rows")});
            } else if (type == "povm") {
                PovmAssignment povm;
                povm.outcomes = entry.at("outcomes").get<int>();
                for (const auto& [key, list] : entry.at("elements").items()) {
                    std::vector<CMat> mats;
                    for (const auto& mat : list) mats.push_back(matrix_from_json(mat));
                    povm.elements[parse_assignment_key(key)] = std::move(mats);
                }
                m.povms[name] = std::move(povm);
            } else {
                throw ParseError("unknown node type '" + type + "'");
            }
        }
        // Row order needs every input's card, so resolve conditionals last.
        for (auto& [name, rows] : pending) {
            const auto inputs = m.classical_inputs(name);
            std::vector<int> cards;
            std::size_t total = 1;
            for (const auto& p : inputs) {
                cards.push_back(m.card_of(p));
                total *= static_cast<std::size_t>(cards.back());
            }
            auto& cpd = m.cpds.at(name);
            cpd.rows.assign(total, {});
            for (const auto& [key, row] : rows.items()) {
                const std::vector<int> asg = parse_assignment_key(key);
                if (asg.size() != inputs.size()) throw ParseError("conditional row key mismatch");
                std::size_t flat = 0;
                for (std::size_t i = 0; i < asg.size(); ++i) {
                    if (asg[i] < 0 || asg[i] >= cards[i])
                        throw ParseError("conditional row key out of range");
                    flat = flat * static_cast<std::size_t>(cards[i]) +
                           static_cast<std::size_t>(asg[i]);
                }
                cpd.rows[flat] = exact_list_from_json(row);
            }
            for (const auto& row : cpd.rows)
                if (row.empty()) throw ParseError("missing conditional row for '" + name + "'");
        }
        return m;
    } catch (const njson::exception& e) {
        throw ParseError(std::string("bad model json: ") + e.what());
    }
}

njson bell_to_json(const BellData& b) {
    njson cond = njson::object();
    njson joint = njson::object();
    for (int s1 = 0; s1 < 2; ++s1) {
        for (int s2 = 0; s2 < 2; ++s2) {
            njson block = njson::object();
            for (int o1 = 0; o1 < 2; ++o1)
                for (int o2 = 0; o2 < 2; ++o2)
                    block[assignment_key({o1, o2})] = b.cond[s1][s2][o1][o2].str();
            cond[assignment_key({s1, s2})] = std::move(block);
            joint[assignment_key({s1, s2})] = b.setting_joint[s1][s2].str();
        }
    }
    return {{"cond", std::move(cond)},
            {"setting_joint", std::move(joint)},
            {"p_setting1", njson::array({b.p_setting1[0].str(), b.p_setting1[1].str()})},
            {"p_setting2", njson::array({b.p_setting2[0].str(), b.p_setting2[1].str()})}};
}

njson lhv_to_json(const LhvResult& r) {
    njson out;
    out["verdict"] = r.feasible ? "feasible" : "infeasible";
    if (r.feasible) {
        out["weights"] = exact_list_to_json(r.weights);
    } else {
        out["certificate"] = exact_list_to_json(r.certificate);
    }
    return out;
}

std::string format_decimal(double x) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6f", x);
    return buffer;
}

njson report_to_json(const ScenarioReport& r) {
    njson dsep = njson::array();
    for (const auto& fact : r.dsep_facts)
        dsep.push_back({{"relation", fact.label},
                        {"expected", fact.expected},
                        {"actual", fact.actual}});
    njson conditions = njson::array();
    for (const auto& c : r.conditions) conditions.push_back({{"label", c.label}, {"pass", c.pass}});
    njson orbit = njson::array();
    for (const auto& v : r.chsh_orbit) orbit.push_back(v.str());
    njson out{{"scenario", r.name},
              {"nodes", r.node_count},
              {"edges", r.edge_count},
              {"dsep_facts", std::move(dsep)},
              {"model_valid", r.model_valid},
              {"conditions", std::move(conditions)},
              {"table_matches_expected", r.table_matches_expected},
              {"settings_independent", r.settings_indep},
              {"chsh", r.chsh.str()},
              {"chsh_decimal", format_decimal(r.chsh.to_double())},
              {"chsh_orbit", std::move(orbit)},
              {"lhv", r.lhv_is_feasible ? "feasible" : "infeasible"},
              {"consistent", r.consistent},
              {"pass", r.pass}};
    if (!r.lhv_is_feasible) out["certificate"] = exact_list_to_json(r.certificate);
    return out;
}

std::string report_to_text(const ScenarioReport& r) {
    std::string out;
    auto mark = [](bool ok) { return ok ? std::string("[ok] ") : std::string("[!!] "); };
    out += "scenario: " + r.name + "\n";
    out += "graph: " + std::to_string(r.node_count) + " nodes, " + std::to_string(r.edge_count) +
           " edges\n";
    out += "d-separation:\n";
    for (const auto& fact : r.dsep_facts)
        out += "  " + mark(fact.actual == fact.expected) + fact.label + " = " +
               (fact.actual ? "true" : "false") + "\n";
    out += "model: " + std::string(r.model_valid ? "valid" : "INVALID") + "\n";
    out += "conditions:\n";
    for (const auto& c : r.conditions) out += "  " + mark(c.pass) + c.label + "\n";
    out += "bell table: " +
           std::string(r.table_matches_expected ? "matches expected" : "DOES NOT MATCH") + "\n";
    out += "settings independent: " + std::string(r.settings_indep ? "true" : "false") + "\n";
    out += "chsh: " + r.chsh.str() + " ~ " + format_decimal(r.chsh.to_double()) + "\n";
    QSqrt2 orbit_max = r.chsh_orbit.empty() ? r.chsh : r.chsh_orbit.front();
    for (const auto& v : r.chsh_orbit)
        if (v > orbit_max) orbit_max = v;
    out += "chsh orbit max: " + orbit_max.str() + "\n";
    out += "lhv: " + std::string(r.lhv_is_feasible ? "FEASIBLE" : "INFEASIBLE") + "\n";
    if (!r.lhv_is_feasible)
        out += "certificate rows: " + std::to_string(r.certificate.size()) + "\n";
    out += "consistency (chsh > 3 => infeasible): " + std::string(r.consistent ? "ok" : "BROKEN") +
           "\n";
    out += "result: " + std::string(r.pass ? "PASS" : "FAIL") + "\n";
    return out;
}

njson load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return njson::parse(in);
    } catch (const njson::exception& e) {
        throw ParseError("cannot parse '" + path + "': " + e.what());
    }
}

void save_json_file(const std::string& path, const njson& j) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace causalgap
