#pragma once

#include "graph.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

namespace dhl {

struct Partition {
    std::vector<NodeID> cut;    // separator, ascending ID
    std::vector<NodeID> left;
    std::vector<NodeID> right;
};

// Balanced separator search over induced subgraphs of one fixed graph.
// Candidate vertex orderings (coordinate projections plus a double-sweep
// distance-difference order) define source/sink slabs; a minimum vertex cut
// between the slabs is computed via Dinic on the middle region. Falls back
// to a BFS-ball boundary cut, which always satisfies the balance bound.
class Partitioner {
    const Graph &g;
    // epoch-stamped per-vertex scratch, reused across calls
    std::vector<uint32_t> stamp;        // subgraph membership
    std::vector<uint32_t> mark_stamp;   // visited / region / center marks
    uint32_t epoch = 0;
    uint32_t mark_epoch = 0;
    std::vector<uint8_t> region_;       // 0 = left slab, 1 = middle, 2 = right slab
    std::vector<distance_t> dist_a, dist_b;
    std::vector<uint32_t> center_idx;

    // flow network scratch (rebuilt per cut attempt)
    struct FlowArc { uint32_t to; uint32_t cap; };
    std::vector<FlowArc> arcs;
    std::vector<std::vector<uint32_t>> flow_adj;
    std::vector<uint32_t> level, iter;

public:
    explicit Partitioner(const Graph &graph)
        : g(graph), stamp(graph.node_count(), 0), mark_stamp(graph.node_count(), 0),
          region_(graph.node_count(), 0), dist_a(graph.node_count()), dist_b(graph.node_count()),
          center_idx(graph.node_count()) {}

    bool contains(NodeID v) const { return stamp[v] == epoch; }

    void activate(std::span<const NodeID> vertices)
    {
        epoch++;
        for (NodeID v : vertices)
            stamp[v] = epoch;
    }

    std::vector<std::vector<NodeID>> components(std::span<const NodeID> vertices)
    {
        activate(vertices);
        uint32_t visited = ++mark_epoch;
        std::vector<std::vector<NodeID>> comps;
        std::vector<NodeID> stack;
        for (NodeID start : vertices) {
            if (mark_stamp[start] == visited)
                continue;
            comps.emplace_back();
            std::vector<NodeID> &cc = comps.back();
            stack.push_back(start);
            mark_stamp[start] = visited;
            while (!stack.empty()) {
                NodeID v = stack.back();
                stack.pop_back();
                cc.push_back(v);
                for (const Neighbor &n : g.neighbors(v))
                    if (contains(n.node) && mark_stamp[n.node] != visited) {
                        mark_stamp[n.node] = visited;
                        stack.push_back(n.node);
                    }
            }
            std::sort(cc.begin(), cc.end());
        }
        return comps;
    }

    // cut plus bin-packed sides; cut is nonempty whenever |vertices| >= 2
    Partition partition(std::span<const NodeID> vertices, double beta)
    {
        assert(vertices.size() >= 2);
        const size_t total = vertices.size();
        const size_t max_side = static_cast<size_t>(std::floor((1.0 - beta) * total));
        auto comps = components(vertices);
        std::sort(comps.begin(), comps.end(), [](const auto &a, const auto &b) {
            return a.size() != b.size() ? a.size() > b.size() : a.front() < b.front();
        });

        std::vector<NodeID> cut;
        if (comps[0].size() > max_side)
            cut = connected_cut(comps[0], beta, max_side);
        if (cut.empty())
            cut.push_back(comps.back().front());    // node members must not be empty
        std::sort(cut.begin(), cut.end());

        Partition p;
        p.cut = cut;
        pack_sides(vertices, p, max_side);
        return p;
    }

    // separator for a connected vertex set; parts after removal are bounded by max_side
    std::vector<NodeID> connected_cut(const std::vector<NodeID> &comp, double beta, size_t max_side)
    {
        const size_t n = comp.size();
        size_t slab = std::max<size_t>(1, static_cast<size_t>(std::ceil(beta * n)));
        if (n > max_side)
            slab = std::max(slab, n - max_side);
        slab = std::max<size_t>(1, std::min(slab, n / 2));

        std::vector<NodeID> best;
        for (const auto &order : candidate_orders(comp)) {
            std::vector<NodeID> cut = slab_flow_cut(order, slab);
            if (cut.empty() || !cut_is_valid(comp, cut, max_side))
                continue;
            if (best.empty() || cut.size() < best.size())
                best = std::move(cut);
        }
        if (best.empty())
            best = ball_cut(comp, slab);
        std::sort(best.begin(), best.end());
        return best;
    }

private:
    // all parts left after removing the cut must fit a side
    bool cut_is_valid(const std::vector<NodeID> &comp, const std::vector<NodeID> &cut,
                      size_t max_side)
    {
        std::vector<NodeID> rest = subtract(comp, cut);
        size_t a = 0, b = 0;
        for (const auto &cc : components(rest)) {
            (a <= b ? a : b) += cc.size();
            if (std::max(a, b) > max_side)
                return false;
        }
        return true;
    }

    std::vector<NodeID> subtract(std::span<const NodeID> vertices, const std::vector<NodeID> &cut)
    {
        uint32_t removed = ++mark_epoch;
        for (NodeID v : cut)
            mark_stamp[v] = removed;
        std::vector<NodeID> rest;
        rest.reserve(vertices.size());
        for (NodeID v : vertices)
            if (mark_stamp[v] != removed)
                rest.push_back(v);
        return rest;
    }

    void pack_sides(std::span<const NodeID> vertices, Partition &p, size_t max_side)
    {
        auto comps = components(subtract(vertices, p.cut));
        std::sort(comps.begin(), comps.end(), [](const auto &a, const auto &b) {
            return a.size() != b.size() ? a.size() > b.size() : a.front() < b.front();
        });
        // greedily fill the lighter side; components that fit neither side
        // are absorbed into the cut (only reachable for extreme beta)
        size_t lsize = 0, rsize = 0;
        for (const auto &cc : comps) {
            std::vector<NodeID> &lighter = lsize <= rsize ? p.left : p.right;
            std::vector<NodeID> &heavier = lsize <= rsize ? p.right : p.left;
            size_t &lighter_size = lsize <= rsize ? lsize : rsize;
            size_t &heavier_size = lsize <= rsize ? rsize : lsize;
            if (lighter_size + cc.size() <= max_side) {
                lighter.insert(lighter.end(), cc.begin(), cc.end());
                lighter_size += cc.size();
            } else if (heavier_size + cc.size() <= max_side) {
                heavier.insert(heavier.end(), cc.begin(), cc.end());
                heavier_size += cc.size();
            } else {
                p.cut.insert(p.cut.end(), cc.begin(), cc.end());
            }
        }
        std::sort(p.cut.begin(), p.cut.end());
        std::sort(p.left.begin(), p.left.end());
        std::sort(p.right.begin(), p.right.end());
    }

    std::vector<std::vector<NodeID>> candidate_orders(const std::vector<NodeID> &comp)
    {
        std::vector<std::vector<NodeID>> orders;
        if (g.has_coordinates()) {
            auto key_order = [&](auto key) {
                std::vector<NodeID> order(comp);
                std::stable_sort(order.begin(), order.end(), [&](NodeID a, NodeID b) {
                    auto ka = key(a), kb = key(b);
                    return ka != kb ? ka < kb : a < b;
                });
                return order;
            };
            const auto &co = g.coordinates;
            orders.push_back(key_order([&](NodeID v) { return co[v].x; }));
            orders.push_back(key_order([&](NodeID v) { return co[v].y; }));
            orders.push_back(key_order([&](NodeID v) { return co[v].x + co[v].y; }));
            orders.push_back(key_order([&](NodeID v) { return co[v].x - co[v].y; }));
        }
        orders.push_back(distance_difference_order(comp));
        return orders;
    }

    // order along an approximate diameter: sort by d(p,.) - d(q,.) where p,q
    // are found by a double Dijkstra sweep
    std::vector<NodeID> distance_difference_order(const std::vector<NodeID> &comp)
    {
        activate(comp);
        NodeID p = comp.front();
        dijkstra_within(p, comp, dist_a);
        p = furthest(comp, dist_a);
        dijkstra_within(p, comp, dist_a);
        NodeID q = furthest(comp, dist_a);
        dijkstra_within(q, comp, dist_b);
        std::vector<NodeID> order(comp);
        std::stable_sort(order.begin(), order.end(), [&](NodeID a, NodeID b) {
            int64_t ka = static_cast<int64_t>(dist_a[a]) - static_cast<int64_t>(dist_b[a]);
            int64_t kb = static_cast<int64_t>(dist_a[b]) - static_cast<int64_t>(dist_b[b]);
            return ka != kb ? ka < kb : a < b;
        });
        return order;
    }

    NodeID furthest(const std::vector<NodeID> &comp, const std::vector<distance_t> &dist)
    {
        NodeID best = comp.front();
        for (NodeID v : comp)
            if (dist[v] != infinity && (dist[best] == infinity || dist[v] > dist[best]))
                best = v;
        return best;
    }

    void dijkstra_within(NodeID src, std::span<const NodeID> active, std::vector<distance_t> &dist)
    {
        struct Item {
            distance_t d;
            NodeID v;
            bool operator<(const Item &o) const { return d > o.d; }
        };
        for (NodeID v : active)
            dist[v] = infinity;
        dist[src] = 0;
        std::priority_queue<Item> q;
        q.push({0, src});
        while (!q.empty()) {
            Item it = q.top();
            q.pop();
            if (it.d > dist[it.v])
                continue;
            for (const Neighbor &n : g.neighbors(it.v)) {
                if (!contains(n.node))
                    continue;
                distance_t d = safe_sum(it.d, n.distance);
                if (d < dist[n.node]) {
                    dist[n.node] = d;
                    q.push({d, n.node});
                }
            }
        }
    }

    // slab endpoints of any left-right edge migrate to the middle so a
    // vertex cut between the slabs always exists
    std::vector<NodeID> slab_flow_cut(const std::vector<NodeID> &order, size_t slab)
    {
        const size_t n = order.size();
        activate(order);
        uint32_t region_epoch = ++mark_epoch;
        for (size_t i = 0; i < n; i++) {
            mark_stamp[order[i]] = region_epoch;
            region_[order[i]] = i < slab ? 0 : (i >= n - slab ? 2 : 1);
        }
        for (NodeID v : order) {
            if (region_[v] != 0)
                continue;
            for (const Neighbor &nb : g.neighbors(v))
                if (contains(nb.node) && region_[nb.node] == 2) {
                    region_[v] = 1;
                    region_[nb.node] = 1;
                }
        }
        size_t left_count = 0, right_count = 0;
        std::vector<NodeID> center;
        for (NodeID v : order) {
            switch (region_[v]) {
                case 0: left_count++; break;
                case 2: right_count++; break;
                default: center.push_back(v);
            }
        }
        if (left_count == 0 || right_count == 0 || center.empty())
            return {};
        return min_vertex_cut(center);
    }

    void add_arc(uint32_t from, uint32_t to, uint32_t cap)
    {
        flow_adj[from].push_back(static_cast<uint32_t>(arcs.size()));
        arcs.push_back({to, cap});
        flow_adj[to].push_back(static_cast<uint32_t>(arcs.size()));
        arcs.push_back({from, 0});
    }

    // minimum vertex cut between the contracted slabs, Dinic with node
    // splitting; center vertex i maps to flow nodes 2i (in) and 2i+1 (out).
    // region_ marks of the surrounding slabs must still be current.
    std::vector<NodeID> min_vertex_cut(const std::vector<NodeID> &center)
    {
        const uint32_t c = static_cast<uint32_t>(center.size());
        const uint32_t src = 2 * c, snk = 2 * c + 1;
        uint32_t center_epoch = ++mark_epoch;
        for (uint32_t i = 0; i < c; i++)
            center_idx[center[i]] = i;
        // region_ values stay valid: center vertices get a fresh mark,
        // slab vertices keep the previous epoch's mark
        for (uint32_t i = 0; i < c; i++)
            mark_stamp[center[i]] = center_epoch;
        arcs.clear();
        flow_adj.assign(2 * c + 2, {});
        const uint32_t big = UINT32_MAX / 2;
        for (uint32_t i = 0; i < c; i++) {
            NodeID v = center[i];
            add_arc(2 * i, 2 * i + 1, 1);
            bool from_src = false, to_snk = false;
            for (const Neighbor &nb : g.neighbors(v)) {
                if (!contains(nb.node))
                    continue;
                if (mark_stamp[nb.node] == center_epoch) {
                    if (nb.node > v) {  // one undirected edge, two directed arcs
                        uint32_t j = center_idx[nb.node];
                        add_arc(2 * i + 1, 2 * j, big);
                        add_arc(2 * j + 1, 2 * i, big);
                    }
                } else if (region_[nb.node] == 0) {
                    from_src = true;
                } else {
                    to_snk = true;
                }
            }
            if (from_src)
                add_arc(src, 2 * i, big);
            if (to_snk)
                add_arc(2 * i + 1, snk, big);
        }
        level.assign(2 * c + 2, UINT32_MAX);
        while (flow_bfs(src, snk))
            blocking_flow(src, snk);
        // vertices whose internal arc crosses the final level cut
        std::vector<NodeID> cut;
        for (uint32_t i = 0; i < c; i++)
            if (level[2 * i] != UINT32_MAX && level[2 * i + 1] == UINT32_MAX)
                cut.push_back(center[i]);
        return cut;
    }

    bool flow_bfs(uint32_t src, uint32_t snk)
    {
        std::fill(level.begin(), level.end(), UINT32_MAX);
        std::queue<uint32_t> q;
        level[src] = 0;
        q.push(src);
        while (!q.empty()) {
            uint32_t v = q.front();
            q.pop();
            for (uint32_t a : flow_adj[v])
                if (arcs[a].cap > 0 && level[arcs[a].to] == UINT32_MAX) {
                    level[arcs[a].to] = level[v] + 1;
                    q.push(arcs[a].to);
                }
        }
        return level[snk] != UINT32_MAX;
    }

    void blocking_flow(uint32_t src, uint32_t snk)
    {
        iter.assign(flow_adj.size(), 0);
        std::vector<uint32_t> path;     // arc IDs from src to current node
        uint32_t v = src;
        while (true) {
            if (v == snk) {
                uint32_t bottleneck = UINT32_MAX;
                for (uint32_t a : path)
                    bottleneck = std::min(bottleneck, arcs[a].cap);
                for (uint32_t a : path) {
                    arcs[a].cap -= bottleneck;
                    arcs[a ^ 1].cap += bottleneck;
                }
                size_t keep = 0;
                while (keep < path.size() && arcs[path[keep]].cap > 0)
                    keep++;
                path.resize(keep);
                v = path.empty() ? src : arcs[path.back()].to;
                continue;
            }
            bool advanced = false;
            for (uint32_t &i = iter[v]; i < flow_adj[v].size(); i++) {
                uint32_t a = flow_adj[v][i];
                if (arcs[a].cap > 0 && level[arcs[a].to] == level[v] + 1) {
                    path.push_back(a);
                    v = arcs[a].to;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) {
                if (v == src)
                    break;
                level[v] = UINT32_MAX;  // dead end
                path.pop_back();
                v = path.empty() ? src : arcs[path.back()].to;
            }
        }
    }

    // grow a BFS ball of the slab size from a peripheral vertex; its outer
    // boundary is a separator and both sides respect the balance bound
    std::vector<NodeID> ball_cut(const std::vector<NodeID> &comp, size_t slab)
    {
        activate(comp);
        NodeID p = comp.front();
        dijkstra_within(p, comp, dist_a);
        p = furthest(comp, dist_a);
        uint32_t ball_epoch = ++mark_epoch;
        std::vector<NodeID> ball, frontier{p};
        mark_stamp[p] = ball_epoch;
        size_t head = 0;
        while (ball.size() < slab && head < frontier.size()) {
            NodeID v = frontier[head++];
            ball.push_back(v);
            for (const Neighbor &n : g.neighbors(v))
                if (contains(n.node) && mark_stamp[n.node] != ball_epoch) {
                    mark_stamp[n.node] = ball_epoch;
                    frontier.push_back(n.node);
                }
        }
        return {frontier.begin() + static_cast<long>(head), frontier.end()};
    }
};

// balanced separator for a stand-alone subgraph given by a vertex list
inline std::vector<NodeID> find_separator(const Graph &g, std::span<const NodeID> vertices,
                                          double beta)
{
    if (beta <= 0.0 || beta > 0.5)
        throw std::invalid_argument("balance parameter must be in (0, 0.5]");
    Partitioner part(g);
    return part.partition(vertices, beta).cut;
}

} // namespace dhl
