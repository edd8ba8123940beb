#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ctx/scenario.hpp"

namespace ctx {

/// Context weights must be positive and sum to exactly 1.
struct SamplingConfig {
    std::uint64_t rounds = 0;
    std::map<Context, Rational> context_weights;
    std::uint64_t seed = 0;
};

SamplingConfig uniform_sampling_config(const MeasurementScenario& scenario,
                                       std::uint64_t rounds, std::uint64_t seed);

struct SamplingResult {
    /// Aligned with the scenario's contexts.
    std::vector<std::uint64_t> context_counts;
    std::vector<std::map<JointResult, std::uint64_t>> result_counts;
    /// Empirical conditional tables; a context with zero rounds has no entry
    /// (its row is "undefined").
    std::vector<std::map<JointResult, Rational>> empirical;
    std::vector<bool> defined;
    /// |empirical - true| per cell, for defined rows.
    std::vector<std::map<JointResult, double>> deviations;
    double max_abs_deviation = 0.0;
};

/// rounds i.i.d. draws: context by the config weights, result by the
/// context's table row. Driven by mt19937_64 through 64-bit inversion
/// (two draws per round), so identical seeds give identical output bytes.
/// Throws std::invalid_argument on an invalid model or config.
SamplingResult run_sampling(const EmpiricalModel& model, const SamplingConfig& config);

} // namespace ctx
