#ifndef CAUSALGAP_SCENARIOS_HPP
#define CAUSALGAP_SCENARIOS_HPP

#include <string>
#include <vector>

#include "causalgap/bell.hpp"
#include "causalgap/graph.hpp"
#include "causalgap/quantum.hpp"
#include "causalgap/table.hpp"

namespace causalgap {

/// The three bundled causal structures. g1: latent A, B over observed
/// C, D, E, F with F fed by A and B, D by B and C, E by A, C and D.
/// g2 is g1 without the C -> E edge. The triangle has latent A, B, C pairwise
/// feeding the observed D, E, F.
CausalGraph build_g1();
CausalGraph build_g2();
CausalGraph build_triangle();

/// The bundled quantum model on g1: A and C uniform bits, B a maximally
/// entangled qubit pair measured at D (basis angle +-pi/8 by C) and F
/// (basis angle 0 or pi/4 by A, with the F value carrying the pair
/// (F_O, F_S) = F_O + 2*F_S and F_S a copy of A), E a copy of A.
QuantumModel g1_quantum_model();

/// The same construction wired onto g2 (E keeps only A and D as parents).
QuantumModel g2_quantum_model();

/// The bundled triangle model: A and C uniform bits, B entangled; D carries
/// (S1, O1) = S1 + 2*O1 with S1 a copy of C, E carries (S1', S2') = S1' +
/// 2*S2' copying C and A, F carries (S2, O2) = S2 + 2*O2 with S2 a copy of A.
QuantumModel triangle_quantum_model();

/// Closed-form expected distribution of g1_quantum_model over (C, E, F_O, D):
/// (2+sqrt2)/32 where (F_O = D) xor (C and E), (2-sqrt2)/32 elsewhere.
JointTable g1_expected_table();

/// Closed-form expected Bell block of the triangle model over (S1, S2, O1, O2).
JointTable triangle_expected_table();

/// P(a = b) = 1, exactly. The split-variable side conditions of the bundled
/// scenarios are instances of this check.
bool copies_exactly(const JointTable& t, const std::string& a, const std::string& b);

/// Unconditional independence of x from the given variables, exact.
bool independent_of(const JointTable& t, const std::string& x,
                    const std::vector<std::string>& others);

/// Machine check that a table factorizing over g1 and satisfying the side
/// conditions (F = (F_O, F_S) with F_S = E always; E independent of {C, D})
/// has its observed marginal P(C, D, E, F_O) equal to the two-response-
/// function mixture sum_b Q(b)Q(c)Q(e)Q(d|bc)Q(f_O|be). Throws
/// PreconditionViolatedError when the preconditions fail.
bool g1_reduction_holds(const JointTable& q);

/// Triangle analogue: under S1' = S1 and S2' = S2, the marginal
/// P(S1, O1, S2, O2) equals sum_b Q(b)Q(s1)Q(s2)Q(o1|s1 b)Q(o2|s2 b).
bool triangle_reduction_holds(const JointTable& q);

struct DsepFact {
    std::string label;
    bool expected = false;
    bool actual = false;
};

struct ConditionFact {
    std::string label;
    bool pass = false;
};

/// Everything a scenario pipeline establishes, with per-step verdicts.
struct ScenarioReport {
    std::string name;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::vector<DsepFact> dsep_facts;
    bool model_valid = false;
    std::vector<ConditionFact> conditions;
    bool table_matches_expected = false;
    bool settings_indep = false;
    QSqrt2 chsh;
    std::vector<QSqrt2> chsh_orbit;
    bool lhv_is_feasible = true;
    std::vector<QSqrt2> certificate;
    bool consistent = false;  // chsh > 3 implies LHV-infeasible
    bool pass = false;
};

/// Full pipeline for "g1", "g2" or "triangle": build the graph, assert its
/// d-separation facts, validate and evaluate the quantum model, snap to
/// exact values, check the side conditions, extract the Bell block, compute
/// the CHSH orbit and decide LHV membership. Mechanical failures raise
/// PipelineStepFailedError; unmet expectations only clear `pass`.
ScenarioReport run_scenario(const std::string& name);

}  // namespace causalgap

#endif
