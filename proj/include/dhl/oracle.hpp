#pragma once

// Ground-truth engines for verification. These deliberately share no
// relaxation helpers with the index structures they are used to check.

#include "graph.hpp"
#include "query_hierarchy.hpp"

#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

namespace dhl::oracle {

struct SearchNode {
    distance_t distance;
    NodeID node;
    // reversed for min-heap ordering
    bool operator<(const SearchNode &other) const { return distance > other.distance; }
};

inline std::vector<distance_t> dijkstra(const Graph &g, NodeID s)
{
    if (s >= g.node_count())
        throw std::out_of_range("source vertex out of range");
    std::vector<distance_t> dist(g.node_count(), infinity);
    dist[s] = 0;
    std::priority_queue<SearchNode> q;
    q.push({0, s});
    while (!q.empty()) {
        SearchNode next = q.top();
        q.pop();
        if (next.distance > dist[next.node])
            continue;
        for (const Neighbor &n : g.neighbors(next.node)) {
            distance_t d = safe_sum(next.distance, n.distance);
            if (d < dist[n.node]) {
                dist[n.node] = d;
                q.push({d, n.node});
            }
        }
    }
    return dist;
}

// early-exit point-to-point variant
inline distance_t dijkstra_pair(const Graph &g, NodeID s, NodeID t)
{
    if (s >= g.node_count() || t >= g.node_count())
        throw std::out_of_range("vertex out of range");
    if (s == t)
        return 0;
    std::vector<distance_t> dist(g.node_count(), infinity);
    dist[s] = 0;
    std::priority_queue<SearchNode> q;
    q.push({0, s});
    while (!q.empty()) {
        SearchNode next = q.top();
        q.pop();
        if (next.node == t)
            return next.distance;
        if (next.distance > dist[next.node])
            continue;
        for (const Neighbor &n : g.neighbors(next.node)) {
            distance_t d = safe_sum(next.distance, n.distance);
            if (d < dist[n.node]) {
                dist[n.node] = d;
                q.push({d, n.node});
            }
        }
    }
    return infinity;
}

inline distance_t bidirectional_dijkstra(const Graph &g, NodeID s, NodeID t)
{
    if (s >= g.node_count() || t >= g.node_count())
        throw std::out_of_range("vertex out of range");
    if (s == t)
        return 0;
    std::vector<distance_t> dist[2] = {
        std::vector<distance_t>(g.node_count(), infinity),
        std::vector<distance_t>(g.node_count(), infinity)
    };
    std::priority_queue<SearchNode> q[2];
    dist[0][s] = dist[1][t] = 0;
    q[0].push({0, s});
    q[1].push({0, t});
    distance_t best = infinity;
    int side = 0;
    while (!q[0].empty() || !q[1].empty()) {
        if (q[side].empty() || (!q[1 - side].empty() && q[1 - side].top().distance < q[side].top().distance))
            side = 1 - side;
        SearchNode next = q[side].top();
        q[side].pop();
        // frontiers have met once the smaller radius exceeds the best meeting point
        if (safe_sum(next.distance, q[1 - side].empty() ? infinity : q[1 - side].top().distance) >= best
            && next.distance >= best)
            break;
        if (next.distance > dist[side][next.node])
            continue;
        for (const Neighbor &n : g.neighbors(next.node)) {
            distance_t d = safe_sum(next.distance, n.distance);
            if (d < dist[side][n.node]) {
                dist[side][n.node] = d;
                q[side].push({d, n.node});
                distance_t meet = safe_sum(d, dist[1 - side][n.node]);
                if (meet < best)
                    best = meet;
            }
        }
    }
    return best;
}

// slow cross-check used to validate the oracles themselves
inline std::vector<distance_t> bellman_ford(const Graph &g, NodeID s)
{
    std::vector<distance_t> dist(g.node_count(), infinity);
    dist[s] = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeID u = 0; u < g.node_count(); u++) {
            if (dist[u] == infinity)
                continue;
            for (const Neighbor &n : g.neighbors(u)) {
                distance_t d = safe_sum(dist[u], n.distance);
                if (d < dist[n.node]) {
                    dist[n.node] = d;
                    changed = true;
                }
            }
        }
    }
    return dist;
}

// distance from root u to v in the subgraph of g induced by the
// hierarchy descendants of u; this is the value every label entry stores
inline distance_t induced_subgraph_distance(const Graph &g, const QueryHierarchy &hq,
                                            NodeID u, NodeID v)
{
    if (!hq.is_ancestor(u, v))
        throw std::invalid_argument("root is not an ancestor of target");
    if (u == v)
        return 0;
    std::vector<distance_t> dist(g.node_count(), infinity);
    dist[u] = 0;
    std::priority_queue<SearchNode> q;
    q.push({0, u});
    while (!q.empty()) {
        SearchNode next = q.top();
        q.pop();
        if (next.distance > dist[next.node])
            continue;
        for (const Neighbor &n : g.neighbors(next.node)) {
            if (!hq.is_ancestor(u, n.node))
                continue;
            distance_t d = safe_sum(next.distance, n.distance);
            if (d < dist[n.node]) {
                dist[n.node] = d;
                q.push({d, n.node});
            }
        }
    }
    return dist[v];
}

// exhaustive valley-path enumeration; returns each comparably-ordered pair
// (deeper vertex first) connected by a valley path with its minimum length
inline std::map<std::pair<NodeID,NodeID>, distance_t>
enumerate_valley_shortcuts(const Graph &g, const QueryHierarchy &hq)
{
    const size_t n = g.node_count();
    if (n > 12)
        throw std::invalid_argument("valley-path enumeration limited to 12 vertices");
    std::map<std::pair<NodeID,NodeID>, distance_t> result;
    std::vector<uint8_t> on_path(n, 0);
    for (NodeID v = 0; v < n; v++) {
        for (NodeID w = 0; w < n; w++) {
            if (v == w || !hq.is_ancestor(w, v) || hq.is_ancestor(v, w))
                continue;
            // DFS over all simple paths whose intermediates are strict
            // descendants of v (the deeper endpoint)
            distance_t best = infinity;
            struct Frame { NodeID node; size_t edge; distance_t length; };
            std::vector<Frame> stack;
            stack.push_back({v, 0, 0});
            on_path[v] = 1;
            while (!stack.empty()) {
                Frame &f = stack.back();
                if (f.edge >= g.neighbors(f.node).size()) {
                    on_path[f.node] = 0;
                    stack.pop_back();
                    continue;
                }
                const Neighbor &nb = g.neighbors(f.node)[f.edge++];
                distance_t len = safe_sum(f.length, nb.distance);
                if (nb.node == w) {
                    if (len < best)
                        best = len;
                    continue;
                }
                if (on_path[nb.node])
                    continue;
                // intermediates must lie strictly below v
                if (nb.node == v || !hq.is_ancestor(v, nb.node))
                    continue;
                on_path[nb.node] = 1;
                stack.push_back({nb.node, 0, len});
            }
            on_path[v] = 0;
            if (best < infinity)
                result[{v, w}] = best;
        }
    }
    return result;
}

} // namespace dhl::oracle
