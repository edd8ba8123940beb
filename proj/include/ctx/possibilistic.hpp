#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctx/hidden.hpp"
#include "ctx/scenario.hpp"

namespace ctx {

enum class ContextualityLevel { NonContextual, Weak, Logical, Strong };

std::string to_string(ContextualityLevel level);

/// All assignments whose restriction lies in the support of every context.
std::vector<GlobalAssignment> global_sections(const EmpiricalModel& model,
                                              std::uint64_t cap = default_assignment_cap);

/// True iff some global section restricts to `result` on `context`.
/// Throws std::invalid_argument when the result is not in the support.
bool is_extendable(const EmpiricalModel& model, const Context& context,
                   const JointResult& result, std::uint64_t cap = default_assignment_cap);

struct ChainStep {
    std::string measurement;
    std::string outcome;
    Context via_context;

    bool operator==(const ChainStep& other) const = default;
};

/// Support-propagation chain from a partial assignment to a contradiction: a
/// sequence of forced values, each single-valued given the previous one, whose
/// last step re-forces an already assigned measurement to a different outcome.
/// Shortest chain, ties broken by canonical order; empty when no single-valued
/// chain exists (the non-extendability itself is certified exhaustively).
/// Throws std::invalid_argument when the input is actually extendable.
std::vector<ChainStep> non_extendability_chain(const EmpiricalModel& model,
                                               const GlobalAssignment& partial,
                                               std::uint64_t cap = default_assignment_cap);

std::vector<ChainStep> non_extendability_chain(const EmpiricalModel& model,
                                               const Context& context,
                                               const JointResult& result,
                                               std::uint64_t cap = default_assignment_cap);

struct NonExtendableWitness {
    Context context;
    JointResult result;
    std::vector<ChainStep> chain;
};

struct Classification {
    ContextualityLevel level = ContextualityLevel::NonContextual;
    bool signalling = false;
    std::vector<SignallingWitness> signalling_witnesses;
    /// Populated when level == Logical.
    std::optional<NonExtendableWitness> non_extendable;
    /// Feasible certificate for NonContextual, infeasible one for Weak.
    std::optional<FeasibilityCertificate> certificate;
};

/// Strong iff no global section; else Logical iff some supported cell is
/// non-extendable; else Weak iff the hidden-distribution LP is infeasible;
/// else NonContextual. Signalling is reported independently.
Classification classify(const EmpiricalModel& model,
                        std::uint64_t cap = default_assignment_cap);

} // namespace ctx
