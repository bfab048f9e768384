#include "causalgap/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace causalgap {

CVec ket_theta(double theta) {
    CVec v(2);
    v << std::cos(theta), std::sin(theta);
    return v;
}

std::vector<CMat> basis_povm(double theta) {
    const CVec k0 = ket_theta(theta);
    const CVec k1 = ket_theta(theta + std::numbers::pi / 2);
    return {k0 * k0.adjoint(), k1 * k1.adjoint()};
}

CMat tensor(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

int QuantumModel::card_of(const std::string& node) const {
    if (auto it = classical.find(node); it != classical.end())
        return static_cast<int>(it->second.probs.size());
    if (auto it = cpds.find(node); it != cpds.end()) return it->second.card;
    if (auto it = povms.find(node); it != povms.end()) return it->second.outcomes;
    throw ModelInvalidError("node '" + node + "' has no classical value");
}

std::vector<std::string> QuantumModel::classical_inputs(const std::string& node) const {
    std::vector<std::string> out;
    for (const auto& p : graph.parents(node))
        if (!quantum.count(p)) out.push_back(p);
    return out;
}

std::vector<Alphabet> QuantumModel::observed_vars() const {
    std::vector<Alphabet> out;
    for (const auto& name : graph.nodes_of_kind(NodeKind::Observed))
        out.push_back({name, card_of(name)});
    return out;
}

std::string to_string(Violation::Kind kind) {
    switch (kind) {
        case Violation::Kind::Hermiticity: return "HermiticityViolation";
        case Violation::Kind::Positivity: return "PositivityViolation";
        case Violation::Kind::Completeness: return "CompletenessViolation";
        case Violation::Kind::Trace: return "TraceViolation";
        case Violation::Kind::Wiring: return "WiringViolation";
        case Violation::Kind::Setting: return "SettingViolation";
        case Violation::Kind::Distribution: return "DistributionViolation";
    }
    return "UnknownViolation";
}

namespace {

bool is_hermitian(const CMat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_psd(const CMat& m, double tol) {
    Eigen::SelfAdjointEigenSolver<CMat> solver((m + m.adjoint()) / 2.0);
    return solver.eigenvalues().minCoeff() >= -tol;
}

bool exact_distribution(const std::vector<QSqrt2>& probs) {
    QSqrt2 sum;
    for (const auto& p : probs) {
        if (p.sign() < 0) return false;
        sum += p;
    }
    return sum == QSqrt2(1);
}

// One Hilbert-space factor of the global space.
struct Slot {
    std::string source;
    std::string target;
    int dim;
};

std::vector<Slot> global_slots(const QuantumModel& m) {
    std::vector<Slot> slots;
    for (const auto& node : m.graph.nodes()) {
        auto it = m.quantum.find(node.name);
        if (it == m.quantum.end()) continue;
        for (const auto& [child, dim] : it->second.factors)
            slots.push_back({node.name, child, dim});
    }
    return slots;
}

// Positions in the slot list wired to `node`, ascending (= declaration order).
std::vector<int> slots_of(const std::vector<Slot>& slots, const std::string& node) {
    std::vector<int> out;
    for (size_t i = 0; i < slots.size(); ++i)
        if (slots[i].target == node) out.push_back(static_cast<int>(i));
    return out;
}

// Places `op` (acting on the listed slots, in that order) into the full
// space, identity elsewhere. Index digits follow slot order, first slot most
// significant — the same convention as tensor().
CMat embed(const CMat& op, const std::vector<Slot>& slots, const std::vector<int>& on) {
    Eigen::Index total = 1;
    for (const auto& s : slots) total *= s.dim;
    std::vector<int> digit_row(slots.size()), digit_col(slots.size());
    auto decompose = [&](Eigen::Index flat, std::vector<int>& digits) {
        for (size_t i = slots.size(); i-- > 0;) {
            digits[i] = static_cast<int>(flat % slots[i].dim);
            flat /= slots[i].dim;
        }
    };
    CMat out = CMat::Zero(total, total);
    for (Eigen::Index r = 0; r < total; ++r) {
        decompose(r, digit_row);
        for (Eigen::Index c = 0; c < total; ++c) {
            decompose(c, digit_col);
            bool identity_ok = true;
            for (size_t i = 0; i < slots.size() && identity_ok; ++i) {
                if (std::find(on.begin(), on.end(), static_cast<int>(i)) == on.end() &&
                    digit_row[i] != digit_col[i])
                    identity_ok = false;
            }
            if (!identity_ok) continue;
            Eigen::Index sr = 0, sc = 0;
            for (int i : on) {
                sr = sr * slots[i].dim + digit_row[i];
                sc = sc * slots[i].dim + digit_col[i];
            }
            out(r, c) = op(sr, sc);
        }
    }
    return out;
}

}  // namespace

std::vector<Violation> validate_model(const QuantumModel& m) {
    std::vector<Violation> out;
    auto add = [&](Violation::Kind kind, const std::string& detail) {
        out.push_back({kind, detail});
    };

    // Exactly one role per node, and the role must fit the node's position.
    for (const auto& node : m.graph.nodes()) {
        const auto& name = node.name;
        const int role_count = static_cast<int>(m.quantum.count(name)) +
                               static_cast<int>(m.classical.count(name)) +
                               static_cast<int>(m.cpds.count(name)) +
                               static_cast<int>(m.povms.count(name));
        if (role_count != 1) {
            add(Violation::Kind::Wiring, "node '" + name + "' needs exactly one assignment");
            continue;
        }
        const bool parentless = m.graph.parents(name).empty();
        if (node.kind == NodeKind::Latent) {
            if (!parentless)
                add(Violation::Kind::Wiring, "latent node '" + name + "' must be parentless");
            if (m.cpds.count(name) || m.povms.count(name))
                add(Violation::Kind::Wiring, "latent node '" + name + "' cannot be measured");
        } else {
            if (m.quantum.count(name))
                add(Violation::Kind::Wiring, "observed node '" + name + "' cannot carry a state");
            if (parentless && !m.classical.count(name))
                add(Violation::Kind::Wiring,
                    "parentless observed node '" + name + "' needs a distribution");
        }
    }
    auto check_known = [&](const auto& map, const char* what) {
        for (const auto& [name, _] : map) {
            if (!m.graph.has_node(name))
                add(Violation::Kind::Wiring,
                    std::string(what) + " assigned to unknown node '" + name + "'");
        }
    };
    check_known(m.quantum, "state");
    check_known(m.classical, "distribution");
    check_known(m.cpds, "conditional");
    check_known(m.povms, "measurement");

    // Quantum sources: factor wiring and state invariants.
    for (const auto& [name, src] : m.quantum) {
        if (!m.graph.has_node(name)) continue;
        std::multiset<std::string> wired;
        Eigen::Index dim = 1;
        for (const auto& [child, d] : src.factors) {
            wired.insert(child);
            if (d < 1) add(Violation::Kind::Wiring, "factor dimension < 1 on '" + name + "'");
            dim *= d;
            if (!m.povms.count(child))
                add(Violation::Kind::Wiring,
                    "factor of '" + name + "' wired to non-measuring node '" + child + "'");
        }
        const auto children = m.graph.children(name);
        std::multiset<std::string> expected(children.begin(), children.end());
        if (wired != expected)
            add(Violation::Kind::Wiring,
                "factors of '" + name + "' do not match its children one-to-one");
        if (src.state.rows() != dim || src.state.cols() != dim) {
            add(Violation::Kind::Wiring, "state dimension mismatch on '" + name + "'");
            continue;
        }
        if (!is_hermitian(src.state, qtol::hermiticity))
            add(Violation::Kind::Hermiticity, "state of '" + name + "' is not Hermitian");
        else if (!is_psd(src.state, qtol::psd))
            add(Violation::Kind::Positivity, "state of '" + name + "' is not PSD");
        if (std::abs(src.state.trace().real() - 1.0) > qtol::trace ||
            std::abs(src.state.trace().imag()) > qtol::trace)
            add(Violation::Kind::Trace, "state of '" + name + "' does not have unit trace");
    }

    for (const auto& [name, src] : m.classical) {
        if (src.probs.empty() || !exact_distribution(src.probs))
            add(Violation::Kind::Distribution,
                "distribution of '" + name + "' is not normalized");
    }

    // Settings of CPDs and POVMs must exactly cover the classical inputs.
    auto input_space = [&](const std::string& name) -> long {
        long n = 1;
        for (const auto& p : m.classical_inputs(name)) n *= m.card_of(p);
        return n;
    };

    for (const auto& [name, cpd] : m.cpds) {
        if (!m.graph.has_node(name)) continue;
        if (cpd.card < 1) {
            add(Violation::Kind::Distribution, "conditional for '" + name + "' needs card >= 1");
            continue;
        }
        for (const auto& p : m.graph.parents(name))
            if (m.quantum.count(p))
                add(Violation::Kind::Wiring,
                    "node '" + name + "' has quantum parent '" + p + "' but no measurement");
        long rows = 0;
        try {
            rows = input_space(name);
        } catch (const ModelInvalidError&) {
            continue;  // already reported via the parent's own violation
        }
        if (static_cast<long>(cpd.rows.size()) != rows) {
            add(Violation::Kind::Setting, "conditional for '" + name + "' has wrong row count");
            continue;
        }
        for (const auto& row : cpd.rows)
            if (static_cast<int>(row.size()) != cpd.card || !exact_distribution(row))
                add(Violation::Kind::Distribution,
                    "conditional row for '" + name + "' is not normalized");
    }

    const std::vector<Slot> slots = global_slots(m);
    for (const auto& [name, povm] : m.povms) {
        if (!m.graph.has_node(name)) continue;
        const std::vector<int> on = slots_of(slots, name);
        if (on.empty()) {
            add(Violation::Kind::Wiring, "measuring node '" + name + "' has no wired factor");
            continue;
        }
        Eigen::Index dim = 1;
        for (int i : on) dim *= slots[i].dim;
        if (povm.outcomes < 1)
            add(Violation::Kind::Distribution, "measurement on '" + name + "' needs outcomes >= 1");

        long expected_settings = 0;
        try {
            expected_settings = input_space(name);
        } catch (const ModelInvalidError&) {
            continue;
        }
        if (static_cast<long>(povm.elements.size()) != expected_settings)
            add(Violation::Kind::Setting,
                "measurement on '" + name + "' does not cover every setting");
        for (const auto& [setting, elements] : povm.elements) {
            std::string tag = "'" + name + "'";
            if (static_cast<int>(elements.size()) != povm.outcomes) {
                add(Violation::Kind::Setting, "wrong outcome count on " + tag);
                continue;
            }
            CMat sum = CMat::Zero(dim, dim);
            bool dims_ok = true;
            for (const auto& e : elements) {
                if (e.rows() != dim || e.cols() != dim) {
                    add(Violation::Kind::Wiring, "element dimension mismatch on " + tag);
                    dims_ok = false;
                    break;
                }
                if (!is_hermitian(e, qtol::hermiticity))
                    add(Violation::Kind::Hermiticity, "non-Hermitian element on " + tag);
                else if (!is_psd(e, qtol::psd))
                    add(Violation::Kind::Positivity, "non-PSD element on " + tag);
                sum += e;
            }
            if (dims_ok &&
                (sum - CMat::Identity(dim, dim)).cwiseAbs().maxCoeff() > qtol::completeness)
                add(Violation::Kind::Completeness, "elements on " + tag + " do not sum to identity");
        }
    }
    return out;
}

namespace {

// Shared by born_probability and evaluate_raw; assumes a validated model.
class Evaluator {
public:
    explicit Evaluator(const QuantumModel& m) : m_(m), slots_(global_slots(m)) {
        rho_ = CMat::Identity(1, 1);
        for (const auto& node : m.graph.nodes()) {
            auto it = m.quantum.find(node.name);
            if (it != m.quantum.end()) rho_ = tensor(rho_, it->second.state);
        }
        for (const auto& node : m.graph.nodes()) {
            if (node.kind == NodeKind::Latent && m.classical.count(node.name))
                latent_classical_.push_back(node.name);
            if (m.povms.count(node.name))
                povm_slots_.emplace_back(node.name, slots_of(slots_, node.name));
        }
        latent_total_ = 1;
        for (const auto& name : latent_classical_)
            latent_total_ *= static_cast<size_t>(m.card_of(name));
    }

    double probability(const std::map<std::string, int>& assignment) const {
        double p = 0.0;
        for (size_t hidden = 0; hidden < latent_total_; ++hidden) {
            std::map<std::string, int> latent;
            size_t rem = hidden;
            for (size_t i = latent_classical_.size(); i-- > 0;) {
                const size_t card = static_cast<size_t>(m_.card_of(latent_classical_[i]));
                latent[latent_classical_[i]] = static_cast<int>(rem % card);
                rem /= card;
            }
            auto value_of = [&](const std::string& node) -> int {
                if (auto it = assignment.find(node); it != assignment.end()) return it->second;
                return latent.at(node);
            };

            QSqrt2 weight(1);
            for (const auto& node : m_.graph.nodes()) {
                const auto& name = node.name;
                if (auto it = m_.classical.find(name); it != m_.classical.end()) {
                    weight *= it->second.probs[static_cast<size_t>(value_of(name))];
                } else if (auto ct = m_.cpds.find(name); ct != m_.cpds.end()) {
                    size_t row = 0;
                    for (const auto& parent : m_.classical_inputs(name))
                        row = row * static_cast<size_t>(m_.card_of(parent)) +
                              static_cast<size_t>(value_of(parent));
                    weight *= ct->second.rows[row][static_cast<size_t>(value_of(name))];
                }
                if (weight.is_zero()) break;
            }
            if (weight.is_zero()) continue;

            double trace_factor = 1.0;
            if (!slots_.empty()) {
                CMat op = CMat::Identity(rho_.rows(), rho_.cols());
                for (const auto& [name, on] : povm_slots_) {
                    const auto& povm = m_.povms.at(name);
                    std::vector<int> setting;
                    for (const auto& parent : m_.classical_inputs(name))
                        setting.push_back(value_of(parent));
                    op = op * embed(povm.elements.at(setting)[static_cast<size_t>(value_of(name))],
                                    slots_, on);
                }
                trace_factor = (op * rho_).trace().real();
            }
            p += weight.to_double() * trace_factor;
        }
        if (p < -qtol::born_clamp || p > 1.0 + qtol::born_clamp)
            throw ModelInvalidError("Born probability out of range");
        return std::clamp(p, 0.0, 1.0);
    }

private:
    const QuantumModel& m_;
    std::vector<Slot> slots_;
    CMat rho_;
    std::vector<std::string> latent_classical_;
    std::vector<std::pair<std::string, std::vector<int>>> povm_slots_;
    size_t latent_total_ = 1;
};

void require_valid(const QuantumModel& m) {
    const auto violations = validate_model(m);
    if (!violations.empty())
        throw ModelInvalidError(to_string(violations.front().kind) + ": " +
                                violations.front().detail);
}

}  // namespace

double born_probability(const QuantumModel& m, const std::map<std::string, int>& assignment) {
    require_valid(m);
    const auto vars = m.observed_vars();
    if (assignment.size() != vars.size())
        throw IncompleteAssignmentError("assignment must cover every observed node");
    for (const auto& v : vars) {
        auto it = assignment.find(v.name);
        if (it == assignment.end())
            throw IncompleteAssignmentError("missing value for '" + v.name + "'");
        if (it->second < 0 || it->second >= v.card)
            throw IncompleteAssignmentError("value out of range for '" + v.name + "'");
    }
    return Evaluator(m).probability(assignment);
}

std::vector<double> evaluate_raw(const QuantumModel& m) {
    require_valid(m);
    const auto vars = m.observed_vars();
    size_t total = 1;
    for (const auto& v : vars) total *= static_cast<size_t>(v.card);

    const Evaluator eval(m);
    std::vector<double> out(total);
    double mass = 0.0;
    for (size_t flat = 0; flat < total; ++flat) {
        std::map<std::string, int> assignment;
        size_t rem = flat;
        for (size_t i = vars.size(); i-- > 0;) {
            assignment[vars[i].name] = static_cast<int>(rem % static_cast<size_t>(vars[i].card));
            rem /= static_cast<size_t>(vars[i].card);
        }
        out[flat] = eval.probability(assignment);
        mass += out[flat];
    }
    if (std::abs(mass - 1.0) > qtol::total_mass)
        throw ModelInvalidError("evaluated distribution mass deviates from 1");
    return out;
}

JointTable evaluate_distribution(const QuantumModel& m) {
    const std::vector<double> raw = evaluate_raw(m);
    std::vector<QSqrt2> probs;
    probs.reserve(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        const auto snapped = snap_to_qsqrt2(raw[i], qtol::snap);
        if (!snapped)
            throw SnapFailureError("entry " + std::to_string(i) +
                                   " has no exact candidate within tolerance");
        probs.push_back(*snapped);
    }
    try {
        return JointTable(m.observed_vars(), std::move(probs));
    } catch (const Error& e) {
        throw SnapFailureError(std::string("snapped table is not a distribution: ") + e.what());
    }
}

}  // namespace causalgap
