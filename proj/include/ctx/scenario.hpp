#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ctx/rational.hpp"

namespace ctx {

/// A context and a joint result are both tuples of labels in canonical
/// (sorted-measurement) order.
using Context = std::vector<std::string>;
using JointResult = std::vector<std::string>;

/// Measurements, their outcome sets and the cover of jointly observable
/// contexts. Construction canonicalizes: measurements sorted, every context
/// sorted and de-duplicated, the context list itself sorted. Structural
/// invariants are reported by validate_model, never thrown here.
struct MeasurementScenario {
    std::vector<std::string> measurements;
    std::map<std::string, std::vector<std::string>> outcomes;
    std::vector<Context> contexts;

    static MeasurementScenario make(std::vector<std::string> measurements,
                                    std::map<std::string, std::vector<std::string>> outcomes,
                                    std::vector<Context> contexts);

    /// Index into contexts, -1 when absent. The argument is canonicalized first.
    int context_index(const Context& context) const;

    /// Outcome list of a measurement; throws std::invalid_argument when unknown.
    const std::vector<std::string>& outcomes_of(const std::string& measurement) const;
};

/// One exact-rational conditional table per context, aligned with
/// scenario.contexts. Keys are joint results in context order.
struct EmpiricalModel {
    MeasurementScenario scenario;
    std::vector<std::map<JointResult, Rational>> tables;

    const std::map<JointResult, Rational>& table(const Context& context) const;
};

/// A total map measurement -> outcome label.
struct GlobalAssignment {
    std::map<std::string, std::string> values;

    bool operator==(const GlobalAssignment& other) const { return values == other.values; }
    bool operator<(const GlobalAssignment& other) const { return values < other.values; }
};

/// Per-context sets of joint results with strictly positive probability.
struct Support {
    std::vector<std::set<JointResult>> by_context;

    bool contains(int context_index, const JointResult& result) const;
};

struct Violation {
    std::string location;
    std::string message;
};

std::string to_string(const Violation& violation);

/// Every broken invariant of the model, with its location; empty iff valid.
std::vector<Violation> validate_model(const EmpiricalModel& model);

/// Exact sum of table entries extending each partial result over `subset`.
/// Returns every partial result, zero entries included.
/// Throws std::invalid_argument on an unknown context or a non-subset.
std::map<JointResult, Rational> marginalize(const EmpiricalModel& model,
                                            const Context& context,
                                            const std::vector<std::string>& subset);

struct SignallingWitness {
    std::vector<std::string> overlap;
    Context context_a;
    Context context_b;
    std::map<JointResult, Rational> marginal_a;
    std::map<JointResult, Rational> marginal_b;
};

struct NoSignallingReport {
    bool no_signalling = true;
    std::vector<SignallingWitness> witnesses;
};

/// Exact marginal agreement on the full overlap of every context pair
/// (which implies agreement on every common subset).
NoSignallingReport check_no_signalling(const EmpiricalModel& model);

Support support_of(const EmpiricalModel& model);

/// The tuple of assignment values on the context's measurements, in context
/// order. Throws std::invalid_argument when the assignment misses one.
JointResult restrict_assignment(const GlobalAssignment& assignment, const Context& context);

/// All joint results of a context in canonical order (last measurement
/// varies fastest, outcome order as listed).
std::vector<JointResult> enumerate_results(const MeasurementScenario& scenario,
                                           const Context& context);

/// Key helpers shared by the file formats: tuples join with ",",
/// assignments join "m=o" pairs with ",".
std::string join_key(const std::vector<std::string>& parts);
std::vector<std::string> split_key(const std::string& key);
std::string assignment_key(const GlobalAssignment& assignment);
GlobalAssignment assignment_from_key(const std::string& key);

} // namespace ctx
