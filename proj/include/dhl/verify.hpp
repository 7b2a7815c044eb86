#pragma once

#include "index.hpp"
#include "oracle.hpp"

#include <string>
#include <vector>

namespace dhl {

struct VerifyResult {
    uint64_t checked = 0;
    std::vector<std::string> mismatches;

    bool ok() const { return mismatches.empty(); }

    void merge(const VerifyResult &o)
    {
        checked += o.checked;
        mismatches.insert(mismatches.end(), o.mismatches.begin(), o.mismatches.end());
    }
};

namespace detail {
constexpr size_t max_reported_mismatches = 16;
}

// sampled queries against bidirectional Dijkstra
inline VerifyResult verify_queries(const HierarchicalIndex &index, size_t samples, uint64_t seed)
{
    VerifyResult res;
    Rng rng(seed);
    const size_t n = index.graph.node_count();
    for (size_t i = 0; i < samples; i++) {
        NodeID s = static_cast<NodeID>(rng.next_below(n));
        NodeID t = static_cast<NodeID>(rng.next_below(n));
        distance_t got = index.query(s, t);
        distance_t want = oracle::bidirectional_dijkstra(index.graph, s, t);
        res.checked++;
        if (got != want && res.mismatches.size() < detail::max_reported_mismatches)
            res.mismatches.push_back("query(" + std::to_string(s) + "," + std::to_string(t) +
                ") = " + std::to_string(got) + ", expected " + std::to_string(want));
    }
    return res;
}

// sampled label entries against the induced-subgraph oracle
inline VerifyResult verify_labels(const HierarchicalIndex &index, size_t samples, uint64_t seed)
{
    VerifyResult res;
    Rng rng(seed);
    const size_t n = index.graph.node_count();
    for (size_t i = 0; i < samples; i++) {
        NodeID v = static_cast<NodeID>(rng.next_below(n));
        uint32_t pos = static_cast<uint32_t>(rng.next_below(index.hq.rank(v) + 1));
        NodeID root = index.hq.ancestor_at(v, pos);
        distance_t got = index.labels.entry(v, pos);
        distance_t want = oracle::induced_subgraph_distance(index.graph, index.hq, root, v);
        res.checked++;
        if (got != want && res.mismatches.size() < detail::max_reported_mismatches)
            res.mismatches.push_back("label(" + std::to_string(v) + ")[" + std::to_string(pos) +
                "] = " + std::to_string(got) + ", expected " + std::to_string(want) +
                " (root " + std::to_string(root) + ")");
    }
    return res;
}

// sampled shortcuts against the minimum weight property
inline VerifyResult verify_shortcuts(const HierarchicalIndex &index, size_t samples, uint64_t seed)
{
    VerifyResult res;
    Rng rng(seed);
    const size_t n = index.graph.node_count();
    for (size_t i = 0; i < samples; i++) {
        NodeID v = static_cast<NodeID>(rng.next_below(n));
        const auto &ups = index.hu.upward(v);
        if (ups.empty())
            continue;
        size_t j = rng.next_below(ups.size());
        distance_t got = index.hu.upward_weights(v)[j];
        distance_t want = index.hu.recompute(index.graph, v, ups[j]);
        res.checked++;
        if (got != want && res.mismatches.size() < detail::max_reported_mismatches)
            res.mismatches.push_back("shortcut (" + std::to_string(v) + "," +
                std::to_string(ups[j]) + ") = " + std::to_string(got) + ", expected " +
                std::to_string(want));
    }
    return res;
}

// exhaustive scan: structure, all shortcuts, all label entries, all queries
inline VerifyResult verify_full(const HierarchicalIndex &index, double beta)
{
    const size_t n = index.graph.node_count();
    if (n > 2000)
        throw std::invalid_argument("full verification is limited to 2000 vertices; "
            "use a sampled level");
    VerifyResult res;
    std::vector<std::string> issues = index.hq.check_structure(index.graph, beta);
    std::vector<std::string> weight_issues =
        index.hu.verify_weights(index.graph, detail::max_reported_mismatches);
    issues.insert(issues.end(), weight_issues.begin(), weight_issues.end());
    for (std::string &issue : issues)
        if (res.mismatches.size() < detail::max_reported_mismatches)
            res.mismatches.push_back(std::move(issue));
    res.checked += n + index.hu.shortcut_count();
    for (NodeID v = 0; v < n; v++)
        for (uint32_t i = 0; i <= index.hq.rank(v); i++) {
            NodeID root = index.hq.ancestor_at(v, i);
            distance_t got = index.labels.entry(v, i);
            distance_t want = oracle::induced_subgraph_distance(index.graph, index.hq, root, v);
            res.checked++;
            if (got != want && res.mismatches.size() < detail::max_reported_mismatches)
                res.mismatches.push_back("label(" + std::to_string(v) + ")[" +
                    std::to_string(i) + "] = " + std::to_string(got) + ", expected " +
                    std::to_string(want));
        }
    for (NodeID s = 0; s < n; s++) {
        std::vector<distance_t> dist = oracle::dijkstra(index.graph, s);
        for (NodeID t = 0; t < n; t++) {
            distance_t got = index.query(s, t);
            res.checked++;
            if (got != dist[t] && res.mismatches.size() < detail::max_reported_mismatches)
                res.mismatches.push_back("query(" + std::to_string(s) + "," +
                    std::to_string(t) + ") = " + std::to_string(got) + ", expected " +
                    std::to_string(dist[t]));
        }
    }
    return res;
}

} // namespace dhl
