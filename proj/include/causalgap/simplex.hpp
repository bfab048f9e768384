#ifndef CAUSALGAP_SIMPLEX_HPP
#define CAUSALGAP_SIMPLEX_HPP

#include <vector>

#include "causalgap/exact.hpp"

namespace causalgap::lp {

/// Outcome of an exact equality-form feasibility solve.
/// Feasible: `solution` satisfies A x = b, x >= 0 (exactly).
/// Infeasible: `certificate` y satisfies yT A <= 0 componentwise and
/// yT b > 0, a Farkas witness that no such x exists.
struct Feasibility {
    bool feasible = false;
    std::vector<QSqrt2> solution;
    std::vector<QSqrt2> certificate;
};

/// Decides whether {x >= 0 : A x = b} is nonempty, by a phase-1 primal
/// simplex over Q(sqrt(2)) with Bland's rule (ordered field, so the textbook
/// method applies verbatim and terminates). Every pivot is exact; the result
/// is re-verified against A and b before being returned.
Feasibility solve_equality_feasibility(const std::vector<std::vector<QSqrt2>>& A,
                                       const std::vector<QSqrt2>& b);

}  // namespace causalgap::lp

#endif
