#include "ctx/bundle.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ctx/errors.hpp"

namespace ctx {

BundleGraph build_bundle_graph(const EmpiricalModel& model) {
    BundleGraph graph;
    graph.base_vertices = model.scenario.measurements;
    for (const auto& m : model.scenario.measurements) {
        graph.fibres[m] = model.scenario.outcomes_of(m);
    }
    for (std::size_t c = 0; c < model.scenario.contexts.size(); ++c) {
        const auto& context = model.scenario.contexts[c];
        if (context.size() != 2) {
            throw UnsupportedShapeError("bundle diagrams need two-measurement contexts; '" +
                                        join_key(context) + "' has " +
                                        std::to_string(context.size()));
        }
        graph.base_edges.emplace_back(context[0], context[1]);
        for (const auto& result : enumerate_results(model.scenario, context)) {
            const auto it = model.tables[c].find(result);
            const Rational weight = (it == model.tables[c].end()) ? Rational(0) : it->second;
            graph.section_edges.push_back({context, result, weight});
        }
    }
    return graph;
}

namespace {

/// Cycle order of a connected 2-regular base graph, empty otherwise.
std::vector<std::string> base_cycle(const BundleGraph& graph) {
    std::map<std::string, std::vector<std::string>> neighbours;
    for (const auto& [a, b] : graph.base_edges) {
        neighbours[a].push_back(b);
        neighbours[b].push_back(a);
    }
    if (graph.base_vertices.size() < 3) return {};
    for (const auto& v : graph.base_vertices) {
        if (neighbours[v].size() != 2) return {};
    }
    std::vector<std::string> cycle;
    std::string current = graph.base_vertices.front();
    std::string previous;
    do {
        cycle.push_back(current);
        auto next = neighbours[current];
        std::sort(next.begin(), next.end());
        const std::string step = (next[0] != previous) ? next[0] : next[1];
        previous = current;
        current = step;
    } while (current != cycle.front() && cycle.size() <= graph.base_vertices.size());
    if (cycle.size() != graph.base_vertices.size()) return {};
    return cycle;
}

std::string fibre_id(const std::string& measurement, const std::string& outcome) {
    return measurement + "." + outcome;
}

} // namespace

std::string to_dot(const BundleGraph& graph) {
    std::ostringstream out;
    out << "graph bundle {\n";
    const auto cycle = base_cycle(graph);
    if (!cycle.empty()) {
        out << "  // layout: base cycle";
        for (const auto& v : cycle) out << ' ' << v;
        out << "\n";
    }
    out << "  node [shape=circle];\n";
    for (const auto& v : graph.base_vertices) {
        out << "  \"" << v << "\";\n";
    }
    for (const auto& [a, b] : graph.base_edges) {
        out << "  \"" << a << "\" -- \"" << b << "\" [style=bold];\n";
    }
    out << "  node [shape=point];\n";
    for (const auto& v : graph.base_vertices) {
        const auto it = graph.fibres.find(v);
        for (const auto& o : it->second) {
            out << "  \"" << fibre_id(v, o) << "\" [xlabel=\"" << o << "\"];\n";
        }
    }
    for (const auto& edge : graph.section_edges) {
        out << "  \"" << fibre_id(edge.context[0], edge.result[0]) << "\" -- \""
            << fibre_id(edge.context[1], edge.result[1]) << "\" [label=\""
            << format_rational(edge.weight) << "\"";
        if (edge.weight == 0) out << ", style=dashed";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace ctx
