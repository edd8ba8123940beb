#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctx/errors.hpp"
#include "ctx/scenario.hpp"

namespace ctx::detail {

/// Index-based view of all global assignments of a scenario, odometer order
/// (canonical measurement order, last one fastest).
struct AssignmentSpace {
    std::vector<std::string> measurements;
    std::vector<std::vector<std::string>> outcomes;
    std::uint64_t total = 1;

    static AssignmentSpace build(const MeasurementScenario& scenario, std::uint64_t cap) {
        AssignmentSpace space;
        space.measurements = scenario.measurements;
        space.outcomes.reserve(scenario.measurements.size());
        for (const auto& m : scenario.measurements) {
            space.outcomes.push_back(scenario.outcomes_of(m));
            const std::uint64_t count = space.outcomes.back().size();
            if (count == 0) {
                space.total = 0;
                continue;
            }
            if (space.total > cap / count) {
                throw SizeLimitError("assignment count exceeds cap " + std::to_string(cap));
            }
            space.total *= count;
        }
        return space;
    }

    std::vector<int> decode(std::uint64_t index) const {
        std::vector<int> digits(measurements.size(), 0);
        for (std::size_t k = measurements.size(); k-- > 0;) {
            const std::uint64_t radix = outcomes[k].size();
            digits[k] = static_cast<int>(index % radix);
            index /= radix;
        }
        return digits;
    }

    GlobalAssignment to_assignment(const std::vector<int>& digits) const {
        GlobalAssignment g;
        for (std::size_t k = 0; k < measurements.size(); ++k) {
            g.values[measurements[k]] = outcomes[k][static_cast<std::size_t>(digits[k])];
        }
        return g;
    }

    /// Positions of a canonical context's measurements in the global order.
    std::vector<std::size_t> context_positions(const Context& context) const {
        std::vector<std::size_t> positions;
        positions.reserve(context.size());
        for (const auto& m : context) {
            const auto it = std::lower_bound(measurements.begin(), measurements.end(), m);
            positions.push_back(static_cast<std::size_t>(it - measurements.begin()));
        }
        return positions;
    }
};

} // namespace ctx::detail
