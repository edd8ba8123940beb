#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ctx/scenario.hpp"

namespace ctx {

/// Base graph of measurements and two-measurement contexts, outcome fibres,
/// and weighted section edges (one per joint result).
struct BundleGraph {
    std::vector<std::string> base_vertices;
    std::vector<std::pair<std::string, std::string>> base_edges;
    std::map<std::string, std::vector<std::string>> fibres;

    struct SectionEdge {
        Context context;
        JointResult result;
        Rational weight;
    };
    std::vector<SectionEdge> section_edges;
};

/// Throws UnsupportedShapeError when some context does not have exactly two
/// measurements.
BundleGraph build_bundle_graph(const EmpiricalModel& model);

/// Deterministic DOT text. Zero-probability section edges are dashed; every
/// edge carries its exact rational weight. When the base graph is a single
/// cycle its order is emitted as a layout comment.
std::string to_dot(const BundleGraph& graph);

} // namespace ctx
