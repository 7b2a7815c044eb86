#pragma once

#include "types.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cstring>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace dhl {

struct Neighbor {
    NodeID node;
    distance_t distance;
    bool operator<(const Neighbor &other) const { return node < other.node; }
    bool operator==(const Neighbor &other) const = default;
};

struct Coordinate {
    int64_t x = 0, y = 0;
    bool operator==(const Coordinate &other) const = default;
};

// undirected road network with mutable edge weights; internal IDs are dense
// and 0-based, the original file IDs are kept for I/O
class Graph {
    std::vector<std::vector<Neighbor>> adj;
    std::vector<NodeID> external;   // internal -> original 1-based ID
    size_t edges_ = 0;

public:
    std::vector<Coordinate> coordinates;    // empty unless a .co file was loaded
    std::vector<uint8_t> coordinate_known;  // parallel to coordinates
    uint32_t merge_conflicts = 0;           // parallel arcs with differing weights
    uint32_t self_loops_dropped = 0;
    uint64_t arcs_read = 0;

    Graph() = default;

    explicit Graph(size_t n) : adj(n)
    {
        external.reserve(n);
        for (size_t v = 0; v < n; v++)
            external.push_back(static_cast<NodeID>(v + 1));
    }

    size_t node_count() const { return adj.size(); }
    size_t edge_count() const { return edges_; }

    const std::vector<Neighbor>& neighbors(NodeID v) const { return adj[v]; }
    size_t degree(NodeID v) const { return adj[v].size(); }

    NodeID external_id(NodeID v) const { return external[v]; }
    std::vector<NodeID>& external_ids() { return external; }
    const std::vector<NodeID>& external_ids() const { return external; }

    // original file ID -> internal ID
    std::optional<NodeID> to_internal(NodeID ext) const
    {
        if (ext < 1 || ext > adj.size())
            return std::nullopt;
        return ext - 1;
    }

    bool has_coordinates() const
    {
        return !coordinates.empty() &&
            std::find(coordinate_known.begin(), coordinate_known.end(), 0) == coordinate_known.end();
    }

    // keeps minimum weight for parallel edges, drops self-loops
    void add_edge(NodeID u, NodeID v, distance_t w)
    {
        assert(u < adj.size() && v < adj.size());
        if (u == v) {
            self_loops_dropped++;
            return;
        }
        Neighbor probe{v, 0};
        auto it = std::lower_bound(adj[u].begin(), adj[u].end(), probe);
        if (it != adj[u].end() && it->node == v) {
            if (it->distance != w) {
                merge_conflicts++;
                distance_t kept = std::min(it->distance, w);
                it->distance = kept;
                auto rit = std::lower_bound(adj[v].begin(), adj[v].end(), Neighbor{u, 0});
                rit->distance = kept;
            }
            return;
        }
        adj[u].insert(it, Neighbor{v, w});
        auto rit = std::lower_bound(adj[v].begin(), adj[v].end(), Neighbor{u, 0});
        adj[v].insert(rit, Neighbor{u, w});
        edges_++;
    }

    const Neighbor* find_edge(NodeID u, NodeID v) const
    {
        if (u >= adj.size() || v >= adj.size())
            return nullptr;
        auto it = std::lower_bound(adj[u].begin(), adj[u].end(), Neighbor{v, 0});
        return it != adj[u].end() && it->node == v ? &*it : nullptr;
    }

    distance_t edge_weight(NodeID u, NodeID v) const
    {
        const Neighbor *n = find_edge(u, v);
        return n ? n->distance : infinity;
    }

    // updates both directions, returns previous weight
    distance_t set_edge_weight(NodeID u, NodeID v, distance_t w)
    {
        auto it = std::lower_bound(adj[u].begin(), adj[u].end(), Neighbor{v, 0});
        assert(it != adj[u].end() && it->node == v);
        distance_t old = it->distance;
        it->distance = w;
        auto rit = std::lower_bound(adj[v].begin(), adj[v].end(), Neighbor{u, 0});
        rit->distance = w;
        return old;
    }

    // canonical edge list (u < v), ordered
    std::vector<std::pair<NodeID,NodeID>> edge_list() const
    {
        std::vector<std::pair<NodeID,NodeID>> edges;
        edges.reserve(edges_);
        for (NodeID u = 0; u < adj.size(); u++)
            for (const Neighbor &n : adj[u])
                if (n.node > u)
                    edges.emplace_back(u, n.node);
        return edges;
    }

    bool is_symmetric() const
    {
        for (NodeID u = 0; u < adj.size(); u++)
            for (const Neighbor &n : adj[u]) {
                const Neighbor *back = find_edge(n.node, u);
                if (!back || back->distance != n.distance)
                    return false;
            }
        return true;
    }

    bool operator==(const Graph &other) const
    {
        return adj == other.adj && external == other.external &&
            coordinates == other.coordinates && coordinate_known == other.coordinate_known &&
            merge_conflicts == other.merge_conflicts &&
            self_loops_dropped == other.self_loops_dropped && arcs_read == other.arcs_read;
    }
};

//--------------------------- weight updates ------------------------

struct WeightUpdate {
    NodeID u, v;
    distance_t new_weight;
    distance_t old_weight = infinity;   // filled when applied
};

// deduplicated set of edge weight changes; at most one update per edge
struct UpdateBatch {
    std::vector<WeightUpdate> updates;
    uint32_t duplicates_collapsed = 0;

    // last writer wins for repeated edges; (u,v) and (v,u) are the same edge
    static UpdateBatch collect(const std::vector<WeightUpdate> &raw)
    {
        UpdateBatch batch;
        std::vector<std::pair<uint64_t,size_t>> keyed;
        keyed.reserve(raw.size());
        for (size_t i = 0; i < raw.size(); i++) {
            NodeID a = std::min(raw[i].u, raw[i].v), b = std::max(raw[i].u, raw[i].v);
            keyed.emplace_back((uint64_t(a) << 32) | b, i);
        }
        std::stable_sort(keyed.begin(), keyed.end(),
            [](const auto &x, const auto &y) { return x.first < y.first; });
        for (size_t i = 0; i < keyed.size(); i++) {
            if (i + 1 < keyed.size() && keyed[i].first == keyed[i + 1].first) {
                batch.duplicates_collapsed++;
                continue;   // a later update to the same edge follows
            }
            batch.updates.push_back(raw[keyed[i].second]);
        }
        return batch;
    }
};

// batch after application to a graph, split by direction of change
struct AppliedBatch {
    std::vector<WeightUpdate> increases;
    std::vector<WeightUpdate> decreases;
    uint32_t noops_dropped = 0;
};

// mutates graph weights; validates the whole batch before any change
inline AppliedBatch apply_batch_weights(Graph &g, const UpdateBatch &batch)
{
    for (const WeightUpdate &u : batch.updates)
        if (!g.find_edge(u.u, u.v))
            throw std::invalid_argument("no such edge: (" + std::to_string(u.u) +
                "," + std::to_string(u.v) + ")");
    AppliedBatch applied;
    for (const WeightUpdate &u : batch.updates) {
        distance_t old = g.edge_weight(u.u, u.v);
        if (old == u.new_weight) {
            applied.noops_dropped++;
            continue;
        }
        g.set_edge_weight(u.u, u.v, u.new_weight);
        WeightUpdate filled = u;
        filled.old_weight = old;
        (u.new_weight > old ? applied.increases : applied.decreases).push_back(filled);
    }
    return applied;
}

//--------------------------- DIMACS parsing ------------------------

namespace detail {

inline const char* skip_ws(const char *p, const char *end)
{
    while (p != end && (*p == ' ' || *p == '\t' || *p == '\r'))
        p++;
    return p;
}

template <typename Int>
const char* parse_int(const char *p, const char *end, Int &out, size_t line, const char *what)
{
    p = skip_ws(p, end);
    if (p != end && *p == '-')
        throw parse_error(line, std::string("negative ") + what);
    auto res = std::from_chars(p, end, out);
    if (res.ec != std::errc())
        throw parse_error(line, std::string("expected ") + what);
    return res.ptr;
}

} // namespace detail

// DIMACS shortest-path .gr format: 'c' comments, 'p sp <n> <m>', 'a <u> <v> <w>'
inline Graph parse_dimacs_gr(std::istream &in)
{
    Graph g;
    bool have_problem = false;
    uint64_t declared_arcs = 0;
    distance_t weight_sum = 0;
    size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        line_no++;
        const char *p = line.data(), *end = line.data() + line.size();
        p = detail::skip_ws(p, end);
        if (p == end || *p == 'c')
            continue;
        if (*p == 'p') {
            if (have_problem)
                throw parse_error(line_no, "duplicate problem line");
            p = detail::skip_ws(p + 1, end);
            if (end - p < 2 || p[0] != 's' || p[1] != 'p')
                throw parse_error(line_no, "problem line is not 'p sp'");
            uint64_t n = 0;
            p = detail::parse_int(p + 2, end, n, line_no, "vertex count");
            detail::parse_int(p, end, declared_arcs, line_no, "arc count");
            if (n >= NO_NODE)
                throw parse_error(line_no, "vertex count too large");
            g = Graph(n);
            have_problem = true;
        } else if (*p == 'a') {
            if (!have_problem)
                throw parse_error(line_no, "arc before problem line");
            uint64_t u = 0, v = 0, w = 0;
            p = detail::parse_int(p + 1, end, u, line_no, "tail vertex");
            p = detail::parse_int(p, end, v, line_no, "head vertex");
            detail::parse_int(p, end, w, line_no, "arc weight");
            if (u < 1 || u > g.node_count() || v < 1 || v > g.node_count())
                throw parse_error(line_no, "vertex ID outside [1," +
                    std::to_string(g.node_count()) + "]");
            if (w >= infinity)
                throw parse_error(line_no, "arc weight too large");
            weight_sum = safe_sum(weight_sum, w);
            g.arcs_read++;
            g.add_edge(static_cast<NodeID>(u - 1), static_cast<NodeID>(v - 1), w);
        } else {
            throw parse_error(line_no, std::string("unknown line type '") + *p + "'");
        }
    }
    if (!have_problem)
        throw parse_error(line_no, "missing problem line");
    if (g.arcs_read != declared_arcs)
        throw parse_error(line_no, "arc count mismatch: declared " +
            std::to_string(declared_arcs) + ", read " + std::to_string(g.arcs_read));
    if (weight_sum >= infinity)
        throw parse_error(line_no, "total edge weight exceeds representable distance");
    return g;
}

// DIMACS .co format: 'v <id> <x> <y>'; vertices without a row are flagged
// so the partitioner can fall back to its coordinate-free strategy
inline uint32_t parse_dimacs_co(std::istream &in, Graph &g)
{
    g.coordinates.assign(g.node_count(), Coordinate{});
    g.coordinate_known.assign(g.node_count(), 0);
    size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        line_no++;
        const char *p = line.data(), *end = line.data() + line.size();
        p = detail::skip_ws(p, end);
        if (p == end || *p == 'c' || *p == 'p')
            continue;
        if (*p != 'v')
            throw parse_error(line_no, std::string("unknown line type '") + *p + "'");
        uint64_t id = 0;
        int64_t x = 0, y = 0;
        p = detail::skip_ws(p + 1, end);
        auto res = std::from_chars(p, end, id);
        if (res.ec != std::errc())
            throw parse_error(line_no, "expected vertex ID");
        if (id < 1 || id > g.node_count())
            throw parse_error(line_no, "vertex ID outside [1," +
                std::to_string(g.node_count()) + "]");
        p = detail::skip_ws(res.ptr, end);
        res = std::from_chars(p, end, x);
        if (res.ec != std::errc())
            throw parse_error(line_no, "expected x coordinate");
        p = detail::skip_ws(res.ptr, end);
        res = std::from_chars(p, end, y);
        if (res.ec != std::errc())
            throw parse_error(line_no, "expected y coordinate");
        NodeID v = static_cast<NodeID>(id - 1);
        if (g.coordinate_known[v])
            throw parse_error(line_no, "duplicate coordinates for vertex " + std::to_string(id));
        g.coordinates[v] = Coordinate{x, y};
        g.coordinate_known[v] = 1;
    }
    uint32_t missing = 0;
    for (uint8_t known : g.coordinate_known)
        if (!known)
            missing++;
    return missing;
}

} // namespace dhl
