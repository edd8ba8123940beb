#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ctx/scenario.hpp"

namespace ctx {

/// One variable per global assignment; beyond this the LP is the wrong tool.
inline constexpr std::uint64_t default_assignment_cap = std::uint64_t{1} << 24;

/// All total assignments in lexicographic canonical order (measurements
/// sorted, last one varies fastest). Throws SizeLimitError above `cap`.
std::vector<GlobalAssignment> enumerate_assignments(const MeasurementScenario& scenario,
                                                    std::uint64_t cap = default_assignment_cap);

/// Weights over global assignments; only strictly positive entries are kept.
struct HiddenDistribution {
    std::vector<std::pair<GlobalAssignment, Rational>> weights;
};

/// Rational coefficients on (context, result) cells; missing cells count 0.
using CellFunctional = std::map<Context, std::map<JointResult, Rational>>;

/// Either a hidden distribution reproducing every table cell, or a separating
/// functional whose value on the model strictly exceeds its maximum over all
/// deterministic assignments.
struct FeasibilityCertificate {
    bool feasible = false;
    HiddenDistribution distribution;
    CellFunctional functional;
    Rational value;
    Rational classical_bound;
};

/// Exact rational feasibility of the global-distribution constraints:
/// q_g >= 0, and for every context cell the extending weights sum to the
/// table entry. Throws std::invalid_argument on an invalid model and
/// SizeLimitError above the assignment cap.
FeasibilityCertificate check_hidden_distribution(const EmpiricalModel& model,
                                                 std::uint64_t cap = default_assignment_cap);

bool is_weakly_contextual(const EmpiricalModel& model,
                          std::uint64_t cap = default_assignment_cap);

struct FunctionalEvaluation {
    Rational value;
    Rational classical_bound;
};

/// Value of the functional on the model's table, plus the exact maximum over
/// deterministic assignments. Throws std::invalid_argument on unknown
/// context or result keys.
FunctionalEvaluation bell_functional_value(const EmpiricalModel& model,
                                           const CellFunctional& functional,
                                           std::uint64_t cap = default_assignment_cap);

} // namespace ctx
