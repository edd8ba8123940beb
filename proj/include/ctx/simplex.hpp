#pragma once

#include <vector>

#include "ctx/rational.hpp"

namespace ctx {

struct SimplexResult {
    bool feasible = false;
    /// Basic feasible solution (one value per column) when feasible.
    std::vector<Rational> solution;
    /// Farkas certificate (one multiplier per row) when infeasible:
    /// dual'A <= 0 componentwise and dual'b > 0, all exact.
    std::vector<Rational> dual;
};

/// Decides whether {x >= 0 : A x = b} is non-empty, exactly.
/// Phase-1 simplex with Bland's rule; rows may be linearly dependent.
/// The returned solution is the first basic feasible solution reached under
/// canonical (lowest-index) pivoting, so output is deterministic.
SimplexResult solve_equality_feasibility(const std::vector<std::vector<Rational>>& a,
                                         const std::vector<Rational>& b);

} // namespace ctx
