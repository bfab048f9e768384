#include "causalgap/bell.hpp"

#include "causalgap/errors.hpp"

namespace causalgap {

BellData extract_bell(const JointTable& t, const BellRoles& roles) {
    const std::vector<std::string> names{roles.setting1, roles.setting2, roles.outcome1,
                                         roles.outcome2};
    for (const auto& name : names)
        if (t.card_of(name) != 2)
            throw NonBinaryVariableError("role variable '" + name + "' is not binary");

    const JointTable m = reorder_vars(marginalize(t, names), names);
    const JointTable settings = reorder_vars(marginalize(m, {roles.setting1, roles.setting2}),
                                             {roles.setting1, roles.setting2});
    const JointTable m1 = marginalize(m, {roles.setting1});
    const JointTable m2 = marginalize(m, {roles.setting2});

    BellData b;
    for (int s1 = 0; s1 < 2; ++s1) {
        b.p_setting1[s1] = m1.prob({s1});
        b.p_setting2[s1] = m2.prob({s1});
        for (int s2 = 0; s2 < 2; ++s2) {
            const QSqrt2 mass = settings.prob({s1, s2});
            if (mass.is_zero())
                throw ZeroSettingProbabilityError("setting pair (" + std::to_string(s1) + "," +
                                                  std::to_string(s2) + ") has probability 0");
            b.setting_joint[s1][s2] = mass;
            for (int o1 = 0; o1 < 2; ++o1)
                for (int o2 = 0; o2 < 2; ++o2)
                    b.cond[s1][s2][o1][o2] = m.prob({s1, s2, o1, o2}) / mass;
        }
    }
    return b;
}

bool settings_independent(const BellData& b) {
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
            if (b.setting_joint[s1][s2] != b.p_setting1[s1] * b.p_setting2[s2]) return false;
    return true;
}

std::vector<DetStrategy> enumerate_strategies() {
    std::vector<DetStrategy> out;
    out.reserve(16);
    for (int r1 = 0; r1 < 4; ++r1)
        for (int r2 = 0; r2 < 4; ++r2)
            out.push_back({{(r1 >> 1) & 1, r1 & 1}, {(r2 >> 1) & 1, r2 & 1}});
    return out;
}

LhvResult lhv_feasible(const BellData& b) {
    for (int s1 = 0; s1 < 2; ++s1) {
        for (int s2 = 0; s2 < 2; ++s2) {
            QSqrt2 sum;
            for (int o1 = 0; o1 < 2; ++o1) {
                for (int o2 = 0; o2 < 2; ++o2) {
                    if (b.cond[s1][s2][o1][o2].sign() < 0)
                        throw MalformedDataError("negative conditional entry");
                    sum += b.cond[s1][s2][o1][o2];
                }
            }
            if (sum != QSqrt2(1))
                throw MalformedDataError("conditional block does not sum to 1");
        }
    }

    const auto strategies = enumerate_strategies();
    // 16 cell equalities + the normalization row.
    std::vector<std::vector<QSqrt2>> A(17, std::vector<QSqrt2>(16));
    std::vector<QSqrt2> rhs(17);
    size_t row = 0;
    for (int s1 = 0; s1 < 2; ++s1) {
        for (int s2 = 0; s2 < 2; ++s2) {
            for (int o1 = 0; o1 < 2; ++o1) {
                for (int o2 = 0; o2 < 2; ++o2, ++row) {
                    rhs[row] = b.cond[s1][s2][o1][o2];
                    for (size_t s = 0; s < strategies.size(); ++s)
                        A[row][s] = strategies[s].prob(s1, s2, o1, o2);
                }
            }
        }
    }
    for (size_t s = 0; s < strategies.size(); ++s) A[16][s] = QSqrt2(1);
    rhs[16] = QSqrt2(1);

    const lp::Feasibility lp = lp::solve_equality_feasibility(A, rhs);
    LhvResult out;
    out.feasible = lp.feasible;
    if (lp.feasible)
        out.weights = lp.solution;
    else
        out.certificate = lp.certificate;
    return out;
}

QSqrt2 chsh_value(const BellData& b) {
    QSqrt2 total;
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
            for (int o1 = 0; o1 < 2; ++o1)
                for (int o2 = 0; o2 < 2; ++o2)
                    if ((o1 ^ o2) == (s1 & s2)) total += b.cond[s1][s2][o1][o2];
    return total;
}

BellData relabel(const BellData& b, bool flip_s1, bool flip_s2, bool flip_o1) {
    BellData out;
    for (int s1 = 0; s1 < 2; ++s1) {
        out.p_setting1[s1] = b.p_setting1[s1 ^ flip_s1];
        out.p_setting2[s1] = b.p_setting2[s1 ^ flip_s2];
        for (int s2 = 0; s2 < 2; ++s2) {
            out.setting_joint[s1][s2] = b.setting_joint[s1 ^ flip_s1][s2 ^ flip_s2];
            for (int o1 = 0; o1 < 2; ++o1)
                for (int o2 = 0; o2 < 2; ++o2)
                    out.cond[s1][s2][o1][o2] =
                        b.cond[s1 ^ flip_s1][s2 ^ flip_s2][o1 ^ flip_o1][o2];
        }
    }
    return out;
}

std::vector<QSqrt2> chsh_all_symmetries(const BellData& b) {
    std::vector<QSqrt2> out;
    out.reserve(8);
    for (int fs1 = 0; fs1 < 2; ++fs1)
        for (int fs2 = 0; fs2 < 2; ++fs2)
            for (int fo = 0; fo < 2; ++fo)
                out.push_back(chsh_value(relabel(b, fs1, fs2, fo)));
    return out;
}

}  // namespace causalgap
