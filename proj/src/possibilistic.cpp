#include "ctx/possibilistic.hpp"

#include <algorithm>
#include <stdexcept>

#include "ctx/detail/assignment_space.hpp"
#include "ctx/errors.hpp"

namespace ctx {

namespace {

void require_valid(const EmpiricalModel& model) {
    const auto violations = validate_model(model);
    if (!violations.empty()) {
        throw std::invalid_argument("invalid model: " + to_string(violations.front()));
    }
}

bool extends(const GlobalAssignment& g, const GlobalAssignment& partial) {
    for (const auto& [m, o] : partial.values) {
        const auto it = g.values.find(m);
        if (it == g.values.end() || it->second != o) return false;
    }
    return true;
}

/// Support rows of one context filtered by a single pinned measurement value.
std::vector<const JointResult*> consistent_rows(const std::set<JointResult>& support,
                                                std::size_t position,
                                                const std::string& value) {
    std::vector<const JointResult*> rows;
    for (const auto& r : support) {
        if (r[position] == value) rows.push_back(&r);
    }
    return rows;
}

struct ChainSearch {
    const Support& support;
    const std::vector<Context>& contexts;

    std::vector<ChainStep> steps;
    std::map<std::string, std::string> assigned;

    bool dfs(const std::string& last, std::size_t depth_left) {
        if (depth_left == 0) return false;
        for (std::size_t c = 0; c < contexts.size(); ++c) {
            const auto& context = contexts[c];
            const auto here = std::find(context.begin(), context.end(), last);
            if (here == context.end()) continue;
            const auto position = static_cast<std::size_t>(here - context.begin());
            const auto rows = consistent_rows(support.by_context[c], position, assigned.at(last));
            if (rows.empty()) continue;
            for (std::size_t k = 0; k < context.size(); ++k) {
                if (k == position) continue;
                const std::string& next = context[k];
                const std::string& forced = (*rows.front())[k];
                bool single = true;
                for (const auto* row : rows) {
                    if ((*row)[k] != forced) {
                        single = false;
                        break;
                    }
                }
                if (!single) continue;
                const auto it = assigned.find(next);
                if (it != assigned.end()) {
                    if (it->second != forced) {
                        steps.push_back({next, forced, context});
                        return true; // contradiction closes the chain
                    }
                    continue;
                }
                steps.push_back({next, forced, context});
                assigned[next] = forced;
                if (dfs(next, depth_left - 1)) return true;
                assigned.erase(next);
                steps.pop_back();
            }
        }
        return false;
    }
};

} // namespace

std::string to_string(ContextualityLevel level) {
    switch (level) {
        case ContextualityLevel::NonContextual: return "noncontextual";
        case ContextualityLevel::Weak: return "weak";
        case ContextualityLevel::Logical: return "logical";
        case ContextualityLevel::Strong: return "strong";
    }
    return "unknown";
}

std::vector<GlobalAssignment> global_sections(const EmpiricalModel& model, std::uint64_t cap) {
    require_valid(model);
    const auto space = detail::AssignmentSpace::build(model.scenario, cap);
    const auto support = support_of(model);
    const auto& contexts = model.scenario.contexts;

    std::vector<std::vector<std::size_t>> positions;
    positions.reserve(contexts.size());
    for (const auto& context : contexts) positions.push_back(space.context_positions(context));

    std::vector<GlobalAssignment> sections;
    for (std::uint64_t g = 0; g < space.total; ++g) {
        const auto digits = space.decode(g);
        bool ok = true;
        for (std::size_t c = 0; c < contexts.size() && ok; ++c) {
            JointResult r;
            r.reserve(contexts[c].size());
            for (const auto pos : positions[c]) {
                r.push_back(space.outcomes[pos][static_cast<std::size_t>(digits[pos])]);
            }
            ok = support.contains(static_cast<int>(c), r);
        }
        if (ok) sections.push_back(space.to_assignment(digits));
    }
    return sections;
}

bool is_extendable(const EmpiricalModel& model, const Context& context,
                   const JointResult& result, std::uint64_t cap) {
    const int idx = model.scenario.context_index(context);
    if (idx < 0) {
        throw std::invalid_argument("unknown context '" + join_key(context) + "'");
    }
    const auto support = support_of(model);
    if (!support.contains(idx, result)) {
        throw std::invalid_argument("result '" + join_key(result) +
                                    "' is not in the support of context '" +
                                    join_key(context) + "'");
    }
    const auto& canonical = model.scenario.contexts[static_cast<std::size_t>(idx)];
    for (const auto& g : global_sections(model, cap)) {
        if (restrict_assignment(g, canonical) == result) return true;
    }
    return false;
}

std::vector<ChainStep> non_extendability_chain(const EmpiricalModel& model,
                                               const GlobalAssignment& partial,
                                               std::uint64_t cap) {
    require_valid(model);
    if (partial.values.empty()) {
        throw std::invalid_argument("empty partial assignment");
    }
    for (const auto& [m, o] : partial.values) {
        const auto& outcomes = model.scenario.outcomes_of(m);
        if (std::find(outcomes.begin(), outcomes.end(), o) == outcomes.end()) {
            throw std::invalid_argument("'" + o + "' is not an outcome of measurement '" + m + "'");
        }
    }
    for (const auto& g : global_sections(model, cap)) {
        if (extends(g, partial)) {
            throw std::invalid_argument("assignment '" + assignment_key(partial) +
                                        "' extends to a global section");
        }
    }

    const auto support = support_of(model);
    ChainSearch search{support, model.scenario.contexts, {}, {}};

    // Iterative deepening gives the shortest chain; seed measurements,
    // contexts and in-context measurements are all explored in canonical
    // order, which fixes ties.
    const std::size_t max_depth = model.scenario.measurements.size() + 1;
    for (std::size_t depth = 1; depth <= max_depth; ++depth) {
        for (const auto& [m, o] : partial.values) {
            search.steps.clear();
            search.assigned.clear();
            for (const auto& [pm, po] : partial.values) search.assigned[pm] = po;
            if (search.dfs(m, depth)) return search.steps;
        }
    }
    return {};
}

std::vector<ChainStep> non_extendability_chain(const EmpiricalModel& model,
                                               const Context& context,
                                               const JointResult& result,
                                               std::uint64_t cap) {
    const int idx = model.scenario.context_index(context);
    if (idx < 0) {
        throw std::invalid_argument("unknown context '" + join_key(context) + "'");
    }
    const auto& canonical = model.scenario.contexts[static_cast<std::size_t>(idx)];
    if (result.size() != canonical.size()) {
        throw std::invalid_argument("result arity does not match context '" +
                                    join_key(canonical) + "'");
    }
    GlobalAssignment partial;
    for (std::size_t k = 0; k < canonical.size(); ++k) partial.values[canonical[k]] = result[k];
    return non_extendability_chain(model, partial, cap);
}

Classification classify(const EmpiricalModel& model, std::uint64_t cap) {
    require_valid(model);
    Classification classification;

    const auto signalling = check_no_signalling(model);
    classification.signalling = !signalling.no_signalling;
    classification.signalling_witnesses = signalling.witnesses;

    const auto sections = global_sections(model, cap);
    if (sections.empty()) {
        classification.level = ContextualityLevel::Strong;
        return classification;
    }

    const auto support = support_of(model);
    const auto& contexts = model.scenario.contexts;
    for (std::size_t c = 0; c < contexts.size(); ++c) {
        for (const auto& result : support.by_context[c]) {
            bool extendable = false;
            for (const auto& g : sections) {
                if (restrict_assignment(g, contexts[c]) == result) {
                    extendable = true;
                    break;
                }
            }
            if (!extendable) {
                classification.level = ContextualityLevel::Logical;
                NonExtendableWitness witness;
                witness.context = contexts[c];
                witness.result = result;
                witness.chain = non_extendability_chain(model, contexts[c], result, cap);
                classification.non_extendable = std::move(witness);
                return classification;
            }
        }
    }

    auto certificate = check_hidden_distribution(model, cap);
    classification.level = certificate.feasible ? ContextualityLevel::NonContextual
                                                : ContextualityLevel::Weak;
    classification.certificate = std::move(certificate);
    return classification;
}

} // namespace ctx
