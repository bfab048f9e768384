#include "causalgap/scenarios.hpp"

#include <cmath>
#include <functional>
#include <numbers>

namespace causalgap {

namespace {

constexpr double kPi = std::numbers::pi;

const Rational kHalf(1, 2);

CMat maximally_entangled_pair() {
    CVec v(4);
    v << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
    return v * v.adjoint();
}

// Measurement bases of the bundled models: the D side uses +-pi/8, the
// F side uses 0 / pi/4, giving the pi/8 relative angles of the maximal
// CHSH violation.
double d_side_angle(int setting) { return setting == 0 ? kPi / 8 : -kPi / 8; }
double f_side_angle(int setting) { return setting == 0 ? 0.0 : kPi / 4; }

// Four-outcome POVM for a node carrying (measured bit, copied bit) encoded
// as value = outcome + 2 * copy: the element vanishes unless the copied bit
// equals `copy_value`, and measures basis_povm(angle) on the outcome bit.
std::vector<CMat> copy_tagged_povm(double angle, int copy_value) {
    const auto basis = basis_povm(angle);
    std::vector<CMat> elements;
    for (int value = 0; value < 4; ++value) {
        const int outcome = value & 1;
        const int copy = value >> 1;
        elements.push_back(copy == copy_value ? basis[static_cast<size_t>(outcome)]
                                              : CMat::Zero(2, 2));
    }
    return elements;
}

}  // namespace

CausalGraph build_g1() {
    return CausalGraph({{"A", NodeKind::Latent},
                        {"B", NodeKind::Latent},
                        {"C", NodeKind::Observed},
                        {"D", NodeKind::Observed},
                        {"E", NodeKind::Observed},
                        {"F", NodeKind::Observed}},
                       {{"B", "D"},
                        {"C", "D"},
                        {"A", "E"},
                        {"C", "E"},
                        {"D", "E"},
                        {"A", "F"},
                        {"B", "F"}});
}

CausalGraph build_g2() {
    return CausalGraph({{"A", NodeKind::Latent},
                        {"B", NodeKind::Latent},
                        {"C", NodeKind::Observed},
                        {"D", NodeKind::Observed},
                        {"E", NodeKind::Observed},
                        {"F", NodeKind::Observed}},
                       {{"B", "D"}, {"C", "D"}, {"A", "E"}, {"D", "E"}, {"A", "F"}, {"B", "F"}});
}

CausalGraph build_triangle() {
    return CausalGraph({{"A", NodeKind::Latent},
                        {"B", NodeKind::Latent},
                        {"C", NodeKind::Latent},
                        {"D", NodeKind::Observed},
                        {"E", NodeKind::Observed},
                        {"F", NodeKind::Observed}},
                       {{"B", "D"}, {"C", "D"}, {"A", "E"}, {"C", "E"}, {"A", "F"}, {"B", "F"}});
}

namespace {

QuantumModel g1_family_model(CausalGraph graph) {
    QuantumModel m{std::move(graph), {}, {}, {}, {}};
    m.classical["A"] = {{QSqrt2(kHalf), QSqrt2(kHalf)}};
    m.classical["C"] = {{QSqrt2(kHalf), QSqrt2(kHalf)}};
    m.quantum["B"] = {maximally_entangled_pair(), {{"D", 2}, {"F", 2}}};

    PovmAssignment d;
    d.outcomes = 2;
    d.elements[{0}] = basis_povm(d_side_angle(0));
    d.elements[{1}] = basis_povm(d_side_angle(1));
    m.povms["D"] = std::move(d);

    // E copies A whatever the other classical inputs are.
    CpdAssignment e;
    e.card = 2;
    const auto inputs = m.classical_inputs("E");
    const std::size_t rows = std::size_t{1} << inputs.size();
    for (std::size_t row = 0; row < rows; ++row) {
        std::size_t rem = row;
        int a_value = 0;
        for (std::size_t i = inputs.size(); i-- > 0;) {
            const int value = static_cast<int>(rem % 2);
            rem /= 2;
            if (inputs[i] == "A") a_value = value;
        }
        e.rows.push_back(a_value == 0 ? std::vector<QSqrt2>{QSqrt2(1), QSqrt2(0)}
                                      : std::vector<QSqrt2>{QSqrt2(0), QSqrt2(1)});
    }
    m.cpds["E"] = std::move(e);

    // F carries (F_O, F_S) = F_O + 2*F_S with F_S a copy of the setting A.
    PovmAssignment f;
    f.outcomes = 4;
    f.elements[{0}] = copy_tagged_povm(f_side_angle(0), 0);
    f.elements[{1}] = copy_tagged_povm(f_side_angle(1), 1);
    m.povms["F"] = std::move(f);
    return m;
}

}  // namespace

QuantumModel g1_quantum_model() { return g1_family_model(build_g1()); }

QuantumModel g2_quantum_model() { return g1_family_model(build_g2()); }

QuantumModel triangle_quantum_model() {
    QuantumModel m{build_triangle(), {}, {}, {}, {}};
    m.classical["A"] = {{QSqrt2(kHalf), QSqrt2(kHalf)}};
    m.classical["C"] = {{QSqrt2(kHalf), QSqrt2(kHalf)}};
    m.quantum["B"] = {maximally_entangled_pair(), {{"D", 2}, {"F", 2}}};

    // D carries (S1, O1) = S1 + 2*O1 with S1 a copy of C. Note the copied
    // bit sits in the LOW digit here, so the POVM is assembled directly.
    PovmAssignment d;
    d.outcomes = 4;
    for (int c = 0; c < 2; ++c) {
        const auto basis = basis_povm(d_side_angle(c));
        std::vector<CMat> elements;
        for (int value = 0; value < 4; ++value) {
            const int s1 = value & 1;
            const int o1 = value >> 1;
            elements.push_back(s1 == c ? basis[static_cast<size_t>(o1)] : CMat::Zero(2, 2));
        }
        d.elements[{c}] = std::move(elements);
    }
    m.povms["D"] = std::move(d);

    // E carries (S1', S2') = S1' + 2*S2' with S1' = C and S2' = A.
    CpdAssignment e;
    e.card = 4;
    for (int a = 0; a < 2; ++a) {
        for (int c = 0; c < 2; ++c) {
            std::vector<QSqrt2> row(4, QSqrt2(0));
            row[static_cast<size_t>(c + 2 * a)] = QSqrt2(1);
            e.rows.push_back(std::move(row));
        }
    }
    m.cpds["E"] = std::move(e);

    // F carries (S2, O2) = S2 + 2*O2 with S2 a copy of A.
    PovmAssignment f;
    f.outcomes = 4;
    for (int a = 0; a < 2; ++a) {
        const auto basis = basis_povm(f_side_angle(a));
        std::vector<CMat> elements;
        for (int value = 0; value < 4; ++value) {
            const int s2 = value & 1;
            const int o2 = value >> 1;
            elements.push_back(s2 == a ? basis[static_cast<size_t>(o2)] : CMat::Zero(2, 2));
        }
        f.elements[{a}] = std::move(elements);
    }
    m.povms["F"] = std::move(f);
    return m;
}

namespace {

JointTable chsh_spectrum_table(const std::vector<std::string>& names) {
    const QSqrt2 big = QSqrt2::from_parts(2, 1, 32);    // (2+sqrt2)/32
    const QSqrt2 small = QSqrt2::from_parts(2, -1, 32);  // (2-sqrt2)/32
    std::vector<Alphabet> vars;
    for (const auto& n : names) vars.push_back({n, 2});
    std::vector<QSqrt2> probs;
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v)
                    probs.push_back(((u == v) != (s1 == 1 && s2 == 1)) ? big : small);
    return JointTable(std::move(vars), std::move(probs));
}

}  // namespace

JointTable g1_expected_table() { return chsh_spectrum_table({"C", "E", "F_O", "D"}); }

JointTable triangle_expected_table() { return chsh_spectrum_table({"S1", "S2", "O1", "O2"}); }

bool copies_exactly(const JointTable& t, const std::string& a, const std::string& b) {
    if (t.card_of(a) != t.card_of(b)) return false;
    const JointTable m = reorder_vars(marginalize(t, {a, b}), {a, b});
    for (int u = 0; u < t.card_of(a); ++u)
        for (int v = 0; v < t.card_of(b); ++v)
            if (u != v && !m.prob({u, v}).is_zero()) return false;
    return true;
}

bool independent_of(const JointTable& t, const std::string& x,
                    const std::vector<std::string>& others) {
    return is_cond_independent(t, {x}, others, {});
}

namespace {

// Conditional P(extra | given) read off two marginals, with the convention
// that terms over zero-mass `given` cells are skipped by the caller.
struct ConditionalReader {
    JointTable joint;  // over given + extra (original order)
    JointTable base;   // over given

    QSqrt2 prob(const std::vector<int>& given_extra, const std::vector<int>& given) const {
        return joint.prob(given_extra) / base.prob(given);
    }
};

}  // namespace

bool g1_reduction_holds(const JointTable& q) {
    const CausalGraph g = build_g1();
    if (!factorize_check(q, g))
        throw PreconditionViolatedError("table does not factorize over g1");
    const int card_e = q.card_of("E");
    const int card_f = q.card_of("F");
    if (card_f % card_e != 0)
        throw PreconditionViolatedError("card of F is not a multiple of card of E");
    const JointTable split = split_variable(q, "F", "F_O", card_f / card_e, "F_S");
    if (!copies_exactly(split, "F_S", "E"))
        throw PreconditionViolatedError("F_S is not a copy of E");
    if (!independent_of(q, "E", {"C", "D"}))
        throw PreconditionViolatedError("E is not independent of {C, D}");

    // split variable order: A, B, C, D, E, F_O, F_S
    const JointTable lhs = marginalize(split, {"C", "D", "E", "F_O"});
    const JointTable m_b = marginalize(q, {"B"});
    const JointTable m_c = marginalize(q, {"C"});
    const JointTable m_e = marginalize(q, {"E"});
    const ConditionalReader d_given_bc{marginalize(q, {"B", "C", "D"}),
                                       marginalize(q, {"B", "C"})};
    const ConditionalReader f_given_be{marginalize(split, {"B", "E", "F_O"}),
                                       marginalize(split, {"B", "E"})};

    const int card_b = q.card_of("B");
    const int card_c = q.card_of("C");
    const int card_d = q.card_of("D");
    const int card_fo = card_f / card_e;
    for (int c = 0; c < card_c; ++c) {
        for (int d = 0; d < card_d; ++d) {
            for (int e = 0; e < card_e; ++e) {
                for (int fo = 0; fo < card_fo; ++fo) {
                    QSqrt2 rhs;
                    if (!m_c.prob({c}).is_zero() && !m_e.prob({e}).is_zero()) {
                        for (int b = 0; b < card_b; ++b) {
                            if (m_b.prob({b}).is_zero()) continue;
                            if (d_given_bc.base.prob({b, c}).is_zero()) continue;
                            if (f_given_be.base.prob({b, e}).is_zero()) continue;
                            rhs += m_b.prob({b}) * m_c.prob({c}) * m_e.prob({e}) *
                                   d_given_bc.prob({b, c, d}, {b, c}) *
                                   f_given_be.prob({b, e, fo}, {b, e});
                        }
                    }
                    if (lhs.prob({c, d, e, fo}) != rhs) return false;
                }
            }
        }
    }
    return true;
}

bool triangle_reduction_holds(const JointTable& q) {
    const CausalGraph g = build_triangle();
    if (!factorize_check(q, g))
        throw PreconditionViolatedError("table does not factorize over the triangle");
    for (const char* name : {"D", "E", "F"})
        if (q.card_of(name) != 4)
            throw PreconditionViolatedError("composite variables must be two bits each");

    JointTable t = split_variable(q, "D", "S1", 2, "O1");
    t = split_variable(t, "E", "S1p", 2, "S2p");
    t = split_variable(t, "F", "S2", 2, "O2");
    if (!copies_exactly(t, "S1p", "S1"))
        throw PreconditionViolatedError("S1' is not a copy of S1");
    if (!copies_exactly(t, "S2p", "S2"))
        throw PreconditionViolatedError("S2' is not a copy of S2");

    // t variable order: A, B, C, S1, O1, S1p, S2p, S2, O2
    const JointTable lhs = marginalize(t, {"S1", "O1", "S2", "O2"});
    const JointTable m_b = marginalize(t, {"B"});
    const JointTable m_s1 = marginalize(t, {"S1"});
    const JointTable m_s2 = marginalize(t, {"S2"});
    const ConditionalReader o1_given{marginalize(t, {"B", "S1", "O1"}),
                                     marginalize(t, {"B", "S1"})};
    const ConditionalReader o2_given{marginalize(t, {"B", "S2", "O2"}),
                                     marginalize(t, {"B", "S2"})};

    const int card_b = q.card_of("B");
    for (int s1 = 0; s1 < 2; ++s1) {
        for (int o1 = 0; o1 < 2; ++o1) {
            for (int s2 = 0; s2 < 2; ++s2) {
                for (int o2 = 0; o2 < 2; ++o2) {
                    QSqrt2 rhs;
                    if (!m_s1.prob({s1}).is_zero() && !m_s2.prob({s2}).is_zero()) {
                        for (int b = 0; b < card_b; ++b) {
                            if (m_b.prob({b}).is_zero()) continue;
                            if (o1_given.base.prob({b, s1}).is_zero()) continue;
                            if (o2_given.base.prob({b, s2}).is_zero()) continue;
                            rhs += m_b.prob({b}) * m_s1.prob({s1}) * m_s2.prob({s2}) *
                                   o1_given.prob({b, s1, o1}, {b, s1}) *
                                   o2_given.prob({b, s2, o2}, {b, s2});
                        }
                    }
                    if (lhs.prob({s1, o1, s2, o2}) != rhs) return false;
                }
            }
        }
    }
    return true;
}

namespace {

template <typename F>
auto pipeline_step(const std::string& id, F&& body) {
    try {
        return body();
    } catch (const PipelineStepFailedError&) {
        throw;
    } catch (const std::exception& e) {
        throw PipelineStepFailedError(id, e.what());
    }
}

std::string set_label(const std::vector<std::string>& names) {
    std::string out = "{";
    for (size_t i = 0; i < names.size(); ++i) {
        if (i) out += ",";
        out += names[i];
    }
    return out + "}";
}

DsepFact check_dsep(const CausalGraph& g, const std::vector<std::string>& x,
                    const std::vector<std::string>& y, const std::vector<std::string>& z,
                    bool expected) {
    DsepFact fact;
    fact.label = set_label(x) + " _|_ " + set_label(y) +
                 (z.empty() ? std::string() : " | " + set_label(z));
    fact.expected = expected;
    fact.actual = d_separated(g, x, y, z);
    return fact;
}

void finish_bell_stage(ScenarioReport& report, const JointTable& bell_table,
                       const BellRoles& roles, const JointTable& expected) {
    report.table_matches_expected = (bell_table == expected);
    const BellData bell = pipeline_step("extract-bell", [&] { return extract_bell(bell_table, roles); });
    report.settings_indep = settings_independent(bell);
    report.chsh = chsh_value(bell);
    report.chsh_orbit = chsh_all_symmetries(bell);
    const LhvResult lhv = pipeline_step("lhv-membership", [&] { return lhv_feasible(bell); });
    report.lhv_is_feasible = lhv.feasible;
    report.certificate = lhv.certificate;
    report.consistent = !(report.chsh > QSqrt2(3)) || !lhv.feasible;

    const QSqrt2 tsirelson = QSqrt2(2) + QSqrt2::sqrt2();
    QSqrt2 orbit_max = report.chsh_orbit.front();
    for (const auto& v : report.chsh_orbit)
        if (v > orbit_max) orbit_max = v;

    bool pass = report.model_valid && report.table_matches_expected && report.settings_indep &&
                report.chsh == tsirelson && orbit_max == tsirelson && !report.lhv_is_feasible &&
                report.consistent;
    for (const auto& fact : report.dsep_facts) pass = pass && (fact.actual == fact.expected);
    for (const auto& cond : report.conditions) pass = pass && cond.pass;
    report.pass = pass;
}

ScenarioReport run_g1_family(const std::string& name) {
    ScenarioReport report;
    report.name = name;
    const CausalGraph g = name == "g2" ? build_g2() : build_g1();
    report.node_count = g.node_count();
    report.edge_count = g.edges().size();

    report.dsep_facts = {
        check_dsep(g, {"F"}, {"C", "D"}, {"B"}, true),
        check_dsep(g, {"E"}, {"B"}, {"C", "D"}, true),
        check_dsep(g, {"B"}, {"C"}, {}, true),
        check_dsep(g, {"F"}, {"E"}, {"B"}, false),
    };

    const QuantumModel model = name == "g2" ? g2_quantum_model() : g1_quantum_model();
    report.model_valid = validate_model(model).empty();

    const JointTable table =
        pipeline_step("evaluate-model", [&] { return evaluate_distribution(model); });
    // observed variables: C, D, E, F with F = F_O + 2*F_S
    const JointTable split =
        pipeline_step("split-f", [&] { return split_variable(table, "F", "F_O", 2, "F_S"); });
    report.conditions = {
        {"F_S = E", copies_exactly(split, "F_S", "E")},
        {"E independent of {C,D}", independent_of(split, "E", {"C", "D"})},
    };

    const JointTable bell_table = pipeline_step("project-bell", [&] {
        return reorder_vars(marginalize(split, {"C", "E", "F_O", "D"}), {"C", "E", "F_O", "D"});
    });
    finish_bell_stage(report, bell_table, {"C", "E", "D", "F_O"}, g1_expected_table());
    return report;
}

ScenarioReport run_triangle() {
    ScenarioReport report;
    report.name = "triangle";
    const CausalGraph g = build_triangle();
    report.node_count = g.node_count();
    report.edge_count = g.edges().size();

    report.dsep_facts = {
        check_dsep(g, {"B"}, {"E"}, {}, true),
        check_dsep(g, {"D"}, {"F"}, {"B"}, true),
    };

    const QuantumModel model = triangle_quantum_model();
    report.model_valid = validate_model(model).empty();

    const JointTable table =
        pipeline_step("evaluate-model", [&] { return evaluate_distribution(model); });
    // observed variables: D, E, F, each two bits
    const JointTable split = pipeline_step("split-composites", [&] {
        JointTable t = split_variable(table, "D", "S1", 2, "O1");
        t = split_variable(t, "E", "S1p", 2, "S2p");
        return split_variable(t, "F", "S2", 2, "O2");
    });
    report.conditions = {
        {"S1' = S1", copies_exactly(split, "S1p", "S1")},
        {"S2' = S2", copies_exactly(split, "S2p", "S2")},
    };

    const JointTable bell_table = pipeline_step("project-bell", [&] {
        return reorder_vars(marginalize(split, {"S1", "S2", "O1", "O2"}),
                            {"S1", "S2", "O1", "O2"});
    });
    finish_bell_stage(report, bell_table, {"S1", "S2", "O1", "O2"}, triangle_expected_table());
    return report;
}

}  // namespace

ScenarioReport run_scenario(const std::string& name) {
    if (name == "g1" || name == "g2") return run_g1_family(name);
    if (name == "triangle") return run_triangle();
    throw PipelineStepFailedError("select-scenario", "unknown scenario '" + name + "'");
}

}  // namespace causalgap
