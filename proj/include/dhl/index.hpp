#pragma once

#include "graph.hpp"
#include "labelling.hpp"
#include "query_hierarchy.hpp"
#include "update_hierarchy.hpp"

#include <string>

namespace dhl {

struct BuildOptions {
    HierarchyOptions hierarchy;
    uint64_t seed = 0;
    std::string dataset;
};

struct BuildMeta {
    uint16_t format_version = 1;
    double beta = 0.2;
    uint32_t leaf_size = 16;
    uint64_t seed = 0;
    uint64_t built_at_unix = 0;     // set once at build, stable thereafter
    std::string dataset;

    bool operator==(const BuildMeta &other) const = default;
};

// the full index: graph, both hierarchies and the labelling share one
// vertex universe and one vertex order
struct HierarchicalIndex {
    Graph graph;
    QueryHierarchy hq;
    UpdateHierarchy hu;
    Labelling labels;
    BuildMeta meta;

    distance_t query(NodeID s, NodeID t) const { return query_distance(hq, labels, s, t); }

    static HierarchicalIndex build(Graph g, const BuildOptions &opt = {},
                                   uint64_t built_at_unix = 0)
    {
        HierarchicalIndex index;
        index.hq = QueryHierarchy::build(g, opt.hierarchy);
        index.hu = UpdateHierarchy::build(g, index.hq);
        index.labels = Labelling::build(index.hq, index.hu);
        index.graph = std::move(g);
        index.meta.beta = opt.hierarchy.beta;
        index.meta.leaf_size = opt.hierarchy.leaf_size;
        index.meta.seed = opt.seed;
        index.meta.dataset = opt.dataset;
        index.meta.built_at_unix = built_at_unix;
        return index;
    }
};

} // namespace dhl
