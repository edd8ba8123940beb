#include "ctx/scenario.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ctx {

namespace {

bool label_ok(const std::string& s) {
    return !s.empty() && s.find(',') == std::string::npos && s.find('=') == std::string::npos;
}

} // namespace

MeasurementScenario MeasurementScenario::make(
    std::vector<std::string> measurements,
    std::map<std::string, std::vector<std::string>> outcomes,
    std::vector<Context> contexts) {
    MeasurementScenario s;
    std::sort(measurements.begin(), measurements.end());
    measurements.erase(std::unique(measurements.begin(), measurements.end()), measurements.end());
    s.measurements = std::move(measurements);
    s.outcomes = std::move(outcomes);
    for (auto& context : contexts) {
        std::sort(context.begin(), context.end());
        context.erase(std::unique(context.begin(), context.end()), context.end());
    }
    std::sort(contexts.begin(), contexts.end());
    contexts.erase(std::unique(contexts.begin(), contexts.end()), contexts.end());
    s.contexts = std::move(contexts);
    return s;
}

int MeasurementScenario::context_index(const Context& context) const {
    Context canonical = context;
    std::sort(canonical.begin(), canonical.end());
    const auto it = std::lower_bound(contexts.begin(), contexts.end(), canonical);
    if (it == contexts.end() || *it != canonical) return -1;
    return static_cast<int>(it - contexts.begin());
}

const std::vector<std::string>& MeasurementScenario::outcomes_of(const std::string& measurement) const {
    const auto it = outcomes.find(measurement);
    if (it == outcomes.end()) {
        throw std::invalid_argument("unknown measurement '" + measurement + "'");
    }
    return it->second;
}

const std::map<JointResult, Rational>& EmpiricalModel::table(const Context& context) const {
    const int idx = scenario.context_index(context);
    if (idx < 0) {
        throw std::invalid_argument("unknown context '" + join_key(context) + "'");
    }
    return tables[static_cast<std::size_t>(idx)];
}

bool Support::contains(int context_index, const JointResult& result) const {
    const auto& set = by_context[static_cast<std::size_t>(context_index)];
    return set.find(result) != set.end();
}

std::string to_string(const Violation& violation) {
    return violation.location + ": " + violation.message;
}

std::vector<JointResult> enumerate_results(const MeasurementScenario& scenario,
                                           const Context& context) {
    std::vector<const std::vector<std::string>*> lists;
    lists.reserve(context.size());
    for (const auto& m : context) lists.push_back(&scenario.outcomes_of(m));
    std::vector<JointResult> out;
    std::vector<std::size_t> idx(context.size(), 0);
    if (context.empty()) {
        out.push_back({});
        return out;
    }
    for (const auto* list : lists) {
        if (list->empty()) return out;
    }
    for (;;) {
        JointResult r;
        r.reserve(context.size());
        for (std::size_t k = 0; k < context.size(); ++k) r.push_back((*lists[k])[idx[k]]);
        out.push_back(std::move(r));
        // odometer, last position fastest
        std::size_t k = context.size();
        for (;;) {
            if (k == 0) return out;
            --k;
            if (++idx[k] < lists[k]->size()) break;
            idx[k] = 0;
            if (k == 0) return out;
        }
    }
}

std::vector<Violation> validate_model(const EmpiricalModel& model) {
    std::vector<Violation> out;
    const auto& s = model.scenario;

    std::set<std::string> known(s.measurements.begin(), s.measurements.end());
    for (const auto& m : s.measurements) {
        if (!label_ok(m)) {
            out.push_back({"measurement '" + m + "'",
                           "identifiers must be non-empty and free of ',' and '='"});
        }
        const auto it = s.outcomes.find(m);
        if (it == s.outcomes.end()) {
            out.push_back({"measurement '" + m + "'", "no outcome list"});
            continue;
        }
        if (it->second.empty()) {
            out.push_back({"measurement '" + m + "'", "outcome list is empty"});
        }
        std::set<std::string> seen;
        for (const auto& o : it->second) {
            if (!label_ok(o)) {
                out.push_back({"measurement '" + m + "'",
                               "outcome '" + o + "' must be non-empty and free of ',' and '='"});
            }
            if (!seen.insert(o).second) {
                out.push_back({"measurement '" + m + "'", "duplicate outcome '" + o + "'"});
            }
        }
    }
    for (const auto& [m, _] : s.outcomes) {
        if (known.find(m) == known.end()) {
            out.push_back({"outcomes", "entry for unknown measurement '" + m + "'"});
        }
    }

    std::set<std::string> covered;
    for (const auto& c : s.contexts) {
        if (c.empty()) {
            out.push_back({"contexts", "empty context"});
            continue;
        }
        for (const auto& m : c) {
            if (known.find(m) == known.end()) {
                out.push_back({"context '" + join_key(c) + "'", "unknown measurement '" + m + "'"});
            }
            covered.insert(m);
        }
    }
    for (const auto& m : s.measurements) {
        if (covered.find(m) == covered.end()) {
            out.push_back({"measurement '" + m + "'", "not in any context"});
        }
    }
    for (std::size_t i = 0; i < s.contexts.size(); ++i) {
        for (std::size_t j = 0; j < s.contexts.size(); ++j) {
            if (i == j) continue;
            const auto& a = s.contexts[i];
            const auto& b = s.contexts[j];
            if (a.size() > b.size()) continue;
            if (std::includes(b.begin(), b.end(), a.begin(), a.end())) {
                out.push_back({"context '" + join_key(a) + "'",
                               "subset of context '" + join_key(b) + "' (cover must be an antichain)"});
            }
        }
    }

    if (model.tables.size() != s.contexts.size()) {
        out.push_back({"tables", "expected " + std::to_string(s.contexts.size()) +
                                     " tables, found " + std::to_string(model.tables.size())});
        return out;
    }
    if (!out.empty()) return out; // structural problems make the cell checks unreliable

    for (std::size_t i = 0; i < s.contexts.size(); ++i) {
        const auto& context = s.contexts[i];
        const auto& table = model.tables[i];
        const std::string where = "context '" + join_key(context) + "'";
        const auto results = enumerate_results(s, context);
        const std::set<JointResult> expected(results.begin(), results.end());
        Rational sum = 0;
        for (const auto& [r, p] : table) {
            if (expected.find(r) == expected.end()) {
                out.push_back({where, "unknown result '" + join_key(r) + "'"});
                continue;
            }
            if (p < 0) {
                out.push_back({where, "negative probability " + format_rational(p) +
                                          " at result '" + join_key(r) + "'"});
            }
            sum += p;
        }
        for (const auto& r : results) {
            if (table.find(r) == table.end()) {
                out.push_back({where, "missing entry for result '" + join_key(r) + "'"});
            }
        }
        if (sum != 1) {
            out.push_back({where, "probabilities sum to " + format_rational(sum) + ", expected 1"});
        }
    }
    return out;
}

std::map<JointResult, Rational> marginalize(const EmpiricalModel& model,
                                            const Context& context,
                                            const std::vector<std::string>& subset) {
    const int idx = model.scenario.context_index(context);
    if (idx < 0) {
        throw std::invalid_argument("unknown context '" + join_key(context) + "'");
    }
    const Context& canonical = model.scenario.contexts[static_cast<std::size_t>(idx)];

    std::vector<std::string> sub = subset;
    std::sort(sub.begin(), sub.end());
    sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
    if (!std::includes(canonical.begin(), canonical.end(), sub.begin(), sub.end())) {
        throw std::invalid_argument("'" + join_key(sub) + "' is not a subset of context '" +
                                    join_key(canonical) + "'");
    }

    std::vector<std::size_t> positions;
    positions.reserve(sub.size());
    for (const auto& m : sub) {
        positions.push_back(static_cast<std::size_t>(
            std::lower_bound(canonical.begin(), canonical.end(), m) - canonical.begin()));
    }

    std::map<JointResult, Rational> out;
    for (const auto& r : enumerate_results(model.scenario, sub)) out[r] = 0;
    for (const auto& [r, p] : model.tables[static_cast<std::size_t>(idx)]) {
        JointResult partial;
        partial.reserve(positions.size());
        for (const auto pos : positions) partial.push_back(r[pos]);
        out[partial] += p;
    }
    return out;
}

NoSignallingReport check_no_signalling(const EmpiricalModel& model) {
    NoSignallingReport report;
    const auto& contexts = model.scenario.contexts;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        for (std::size_t j = i + 1; j < contexts.size(); ++j) {
            std::vector<std::string> overlap;
            std::set_intersection(contexts[i].begin(), contexts[i].end(),
                                  contexts[j].begin(), contexts[j].end(),
                                  std::back_inserter(overlap));
            if (overlap.empty()) continue;
            auto ma = marginalize(model, contexts[i], overlap);
            auto mb = marginalize(model, contexts[j], overlap);
            if (ma != mb) {
                report.witnesses.push_back({overlap, contexts[i], contexts[j],
                                            std::move(ma), std::move(mb)});
            }
        }
    }
    report.no_signalling = report.witnesses.empty();
    return report;
}

Support support_of(const EmpiricalModel& model) {
    Support support;
    support.by_context.resize(model.tables.size());
    for (std::size_t i = 0; i < model.tables.size(); ++i) {
        for (const auto& [r, p] : model.tables[i]) {
            if (p > 0) support.by_context[i].insert(r);
        }
    }
    return support;
}

JointResult restrict_assignment(const GlobalAssignment& assignment, const Context& context) {
    Context canonical = context;
    std::sort(canonical.begin(), canonical.end());
    JointResult out;
    out.reserve(canonical.size());
    for (const auto& m : canonical) {
        const auto it = assignment.values.find(m);
        if (it == assignment.values.end()) {
            throw std::invalid_argument("assignment has no value for measurement '" + m + "'");
        }
        out.push_back(it->second);
    }
    return out;
}

std::string join_key(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    return out;
}

std::vector<std::string> split_key(const std::string& key) {
    std::vector<std::string> out;
    if (key.empty()) return out;
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(part);
    if (!key.empty() && key.back() == ',') out.push_back("");
    return out;
}

std::string assignment_key(const GlobalAssignment& assignment) {
    std::string out;
    bool first = true;
    for (const auto& [m, o] : assignment.values) {
        if (!first) out += ',';
        first = false;
        out += m + "=" + o;
    }
    return out;
}

GlobalAssignment assignment_from_key(const std::string& key) {
    GlobalAssignment g;
    for (const auto& part : split_key(key)) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("bad assignment key part '" + part + "'");
        }
        g.values[part.substr(0, eq)] = part.substr(eq + 1);
    }
    return g;
}

} // namespace ctx
