#include "ctx/hidden.hpp"

#include <algorithm>
#include <stdexcept>

#include "ctx/detail/assignment_space.hpp"
#include "ctx/errors.hpp"
#include "ctx/simplex.hpp"

namespace ctx {

namespace {

void require_valid(const EmpiricalModel& model) {
    const auto violations = validate_model(model);
    if (!violations.empty()) {
        throw std::invalid_argument("invalid model: " + to_string(violations.front()));
    }
}

/// Result index of an assignment within a context's canonical result order.
std::size_t result_index(const std::vector<int>& digits,
                         const std::vector<std::size_t>& positions,
                         const std::vector<std::size_t>& radices) {
    std::size_t index = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) {
        index = index * radices[k] + static_cast<std::size_t>(digits[positions[k]]);
    }
    return index;
}

struct CellIndex {
    // Per context: row offset, measurement positions, outcome radices and the
    // canonical result list.
    std::vector<std::size_t> offsets;
    std::vector<std::vector<std::size_t>> positions;
    std::vector<std::vector<std::size_t>> radices;
    std::vector<std::vector<JointResult>> results;
    std::size_t total_rows = 0;

    static CellIndex build(const EmpiricalModel& model, const detail::AssignmentSpace& space) {
        CellIndex cells;
        const auto& contexts = model.scenario.contexts;
        cells.offsets.reserve(contexts.size());
        for (const auto& context : contexts) {
            cells.offsets.push_back(cells.total_rows);
            cells.positions.push_back(space.context_positions(context));
            std::vector<std::size_t> radix;
            radix.reserve(context.size());
            for (const auto& m : context) radix.push_back(model.scenario.outcomes_of(m).size());
            cells.radices.push_back(std::move(radix));
            cells.results.push_back(enumerate_results(model.scenario, context));
            cells.total_rows += cells.results.back().size();
        }
        return cells;
    }
};

} // namespace

std::vector<GlobalAssignment> enumerate_assignments(const MeasurementScenario& scenario,
                                                    std::uint64_t cap) {
    const auto space = detail::AssignmentSpace::build(scenario, cap);
    std::vector<GlobalAssignment> out;
    out.reserve(static_cast<std::size_t>(space.total));
    for (std::uint64_t i = 0; i < space.total; ++i) {
        out.push_back(space.to_assignment(space.decode(i)));
    }
    return out;
}

FeasibilityCertificate check_hidden_distribution(const EmpiricalModel& model, std::uint64_t cap) {
    require_valid(model);
    const auto space = detail::AssignmentSpace::build(model.scenario, cap);
    const auto cells = CellIndex::build(model, space);
    const auto& contexts = model.scenario.contexts;

    const std::size_t n = static_cast<std::size_t>(space.total);
    std::vector<std::vector<Rational>> a(cells.total_rows, std::vector<Rational>(n, Rational(0)));
    std::vector<Rational> b(cells.total_rows, Rational(0));
    for (std::size_t c = 0; c < contexts.size(); ++c) {
        const auto& table = model.tables[c];
        for (std::size_t r = 0; r < cells.results[c].size(); ++r) {
            b[cells.offsets[c] + r] = table.at(cells.results[c][r]);
        }
    }
    for (std::uint64_t g = 0; g < space.total; ++g) {
        const auto digits = space.decode(g);
        for (std::size_t c = 0; c < contexts.size(); ++c) {
            const std::size_t row =
                cells.offsets[c] + result_index(digits, cells.positions[c], cells.radices[c]);
            a[row][static_cast<std::size_t>(g)] = 1;
        }
    }

    const auto lp = solve_equality_feasibility(a, b);
    FeasibilityCertificate certificate;
    certificate.feasible = lp.feasible;
    if (lp.feasible) {
        for (std::uint64_t g = 0; g < space.total; ++g) {
            const Rational& w = lp.solution[static_cast<std::size_t>(g)];
            if (w > 0) {
                certificate.distribution.weights.emplace_back(
                    space.to_assignment(space.decode(g)), w);
            }
        }
        return certificate;
    }

    // Farkas multipliers become the separating cell functional.
    for (std::size_t c = 0; c < contexts.size(); ++c) {
        for (std::size_t r = 0; r < cells.results[c].size(); ++r) {
            const Rational& y = lp.dual[cells.offsets[c] + r];
            if (y != 0) certificate.functional[contexts[c]][cells.results[c][r]] = y;
        }
    }
    const auto evaluation = bell_functional_value(model, certificate.functional, cap);
    certificate.value = evaluation.value;
    certificate.classical_bound = evaluation.classical_bound;
    if (!(certificate.value > certificate.classical_bound)) {
        throw std::logic_error("infeasibility certificate failed its strictness check");
    }
    return certificate;
}

bool is_weakly_contextual(const EmpiricalModel& model, std::uint64_t cap) {
    return !check_hidden_distribution(model, cap).feasible;
}

FunctionalEvaluation bell_functional_value(const EmpiricalModel& model,
                                           const CellFunctional& functional,
                                           std::uint64_t cap) {
    const auto space = detail::AssignmentSpace::build(model.scenario, cap);

    // The functional keyed by (context index, result index).
    std::vector<std::map<std::size_t, Rational>> coefficients(model.scenario.contexts.size());
    Rational value = 0;
    for (const auto& [context, cells] : functional) {
        const int c = model.scenario.context_index(context);
        if (c < 0) {
            throw std::invalid_argument("functional names unknown context '" +
                                        join_key(context) + "'");
        }
        const auto results = enumerate_results(model.scenario, model.scenario.contexts[c]);
        const auto& table = model.tables[static_cast<std::size_t>(c)];
        for (const auto& [result, coefficient] : cells) {
            const auto it = std::find(results.begin(), results.end(), result);
            if (it == results.end()) {
                throw std::invalid_argument("functional names unknown result '" +
                                            join_key(result) + "' in context '" +
                                            join_key(context) + "'");
            }
            coefficients[static_cast<std::size_t>(c)]
                        [static_cast<std::size_t>(it - results.begin())] = coefficient;
            const auto entry = table.find(result);
            if (entry == table.end()) {
                throw std::invalid_argument("model has no entry for result '" +
                                            join_key(result) + "' in context '" +
                                            join_key(context) + "'");
            }
            value += coefficient * entry->second;
        }
    }

    std::vector<std::vector<std::size_t>> positions;
    std::vector<std::vector<std::size_t>> radices;
    for (const auto& context : model.scenario.contexts) {
        positions.push_back(space.context_positions(context));
        std::vector<std::size_t> radix;
        for (const auto& m : context) radix.push_back(model.scenario.outcomes_of(m).size());
        radices.push_back(std::move(radix));
    }

    Rational bound = 0;
    bool first = true;
    for (std::uint64_t g = 0; g < space.total; ++g) {
        const auto digits = space.decode(g);
        Rational score = 0;
        for (std::size_t c = 0; c < positions.size(); ++c) {
            if (coefficients[c].empty()) continue;
            const auto it = coefficients[c].find(result_index(digits, positions[c], radices[c]));
            if (it != coefficients[c].end()) score += it->second;
        }
        if (first || score > bound) {
            bound = score;
            first = false;
        }
    }
    if (first) bound = 0; // no assignments at all (degenerate scenario)
    return {value, bound};
}

} // namespace ctx
