#include "ctx/sampling.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace ctx {

namespace {

/// Exact comparison r / 2^64 < value.
bool fraction_less(std::uint64_t r, const Rational& value) {
    return BigInt(r) * denominator(value) < (numerator(value) << 64);
}

} // namespace

SamplingConfig uniform_sampling_config(const MeasurementScenario& scenario,
                                       std::uint64_t rounds, std::uint64_t seed) {
    SamplingConfig config;
    config.rounds = rounds;
    config.seed = seed;
    const std::size_t n = scenario.contexts.size();
    if (n == 0) throw std::invalid_argument("scenario has no contexts");
    for (const auto& context : scenario.contexts) {
        config.context_weights[context] = Rational(1, n);
    }
    return config;
}

SamplingResult run_sampling(const EmpiricalModel& model, const SamplingConfig& config) {
    const auto violations = validate_model(model);
    if (!violations.empty()) {
        throw std::invalid_argument("invalid model: " + to_string(violations.front()));
    }
    const auto& contexts = model.scenario.contexts;
    if (config.context_weights.size() != contexts.size()) {
        throw std::invalid_argument("context weights must cover exactly the scenario contexts");
    }
    Rational total = 0;
    for (const auto& context : contexts) {
        const auto it = config.context_weights.find(context);
        if (it == config.context_weights.end()) {
            throw std::invalid_argument("missing weight for context '" + join_key(context) + "'");
        }
        if (it->second <= 0) {
            throw std::invalid_argument("weight for context '" + join_key(context) +
                                        "' must be positive");
        }
        total += it->second;
    }
    if (total != 1) {
        throw std::invalid_argument("context weights sum to " + format_rational(total) +
                                    ", expected 1");
    }

    // Cumulative weights in canonical context order; per context the row's
    // cumulative probabilities in canonical result order.
    std::vector<Rational> context_cumulative;
    context_cumulative.reserve(contexts.size());
    Rational acc = 0;
    for (const auto& context : contexts) {
        acc += config.context_weights.at(context);
        context_cumulative.push_back(acc);
    }
    std::vector<std::vector<JointResult>> results;
    std::vector<std::vector<Rational>> result_cumulative;
    for (std::size_t c = 0; c < contexts.size(); ++c) {
        results.push_back(enumerate_results(model.scenario, contexts[c]));
        Rational racc = 0;
        std::vector<Rational> cumulative;
        cumulative.reserve(results[c].size());
        for (const auto& r : results[c]) {
            racc += model.tables[c].at(r);
            cumulative.push_back(racc);
        }
        result_cumulative.push_back(std::move(cumulative));
    }

    SamplingResult sample;
    sample.context_counts.assign(contexts.size(), 0);
    sample.result_counts.resize(contexts.size());
    sample.empirical.resize(contexts.size());
    sample.defined.assign(contexts.size(), false);
    sample.deviations.resize(contexts.size());

    std::mt19937_64 rng(config.seed);
    for (std::uint64_t round = 0; round < config.rounds; ++round) {
        const std::uint64_t draw_context = rng();
        const std::uint64_t draw_result = rng();
        std::size_t c = contexts.size() - 1;
        for (std::size_t i = 0; i < contexts.size(); ++i) {
            if (fraction_less(draw_context, context_cumulative[i])) {
                c = i;
                break;
            }
        }
        std::size_t r = results[c].size() - 1;
        for (std::size_t i = 0; i < results[c].size(); ++i) {
            if (fraction_less(draw_result, result_cumulative[c][i])) {
                r = i;
                break;
            }
        }
        sample.context_counts[c] += 1;
        sample.result_counts[c][results[c][r]] += 1;
    }

    for (std::size_t c = 0; c < contexts.size(); ++c) {
        if (sample.context_counts[c] == 0) continue;
        sample.defined[c] = true;
        const Rational denominator_count(sample.context_counts[c]);
        for (const auto& r : results[c]) {
            const auto it = sample.result_counts[c].find(r);
            const std::uint64_t count = (it == sample.result_counts[c].end()) ? 0 : it->second;
            const Rational empirical = Rational(count) / denominator_count;
            sample.empirical[c][r] = empirical;
            const double deviation = std::abs(to_double(empirical - model.tables[c].at(r)));
            sample.deviations[c][r] = deviation;
            sample.max_abs_deviation = std::max(sample.max_abs_deviation, deviation);
        }
    }
    return sample;
}

} // namespace ctx
