#pragma once

// shared helpers for the test suites

#include <dhl/graph.hpp>
#include <dhl/index.hpp>
#include <dhl/types.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

namespace support {

using namespace dhl;

struct EdgeSpec {
    NodeID u, v;
    distance_t w;
};

inline Graph make_graph(size_t n, const std::vector<EdgeSpec> &edges)
{
    Graph g(n);
    for (const EdgeSpec &e : edges)
        g.add_edge(e.u, e.v, e.w);
    return g;
}

// connected: random spanning tree plus extra random edges
inline Graph random_connected_graph(Rng &rng, size_t n, size_t extra_edges,
                                    distance_t wmin = 1, distance_t wmax = 100)
{
    Graph g(n);
    for (NodeID v = 1; v < n; v++)
        g.add_edge(v, static_cast<NodeID>(rng.next_below(v)), rng.next_range(wmin, wmax));
    for (size_t i = 0; i < extra_edges && n > 2; i++) {
        NodeID u = static_cast<NodeID>(rng.next_below(n));
        NodeID v = static_cast<NodeID>(rng.next_below(n));
        if (u != v)
            g.add_edge(u, v, rng.next_range(wmin, wmax));
    }
    return g;
}

// possibly disconnected: union of 1-3 connected pieces
inline Graph random_graph(Rng &rng, size_t n, distance_t wmin = 1, distance_t wmax = 100)
{
    Graph g(n);
    size_t pieces = 1 + rng.next_below(3);
    std::vector<NodeID> piece_of(n);
    for (NodeID v = 0; v < n; v++)
        piece_of[v] = static_cast<NodeID>(rng.next_below(pieces));
    std::vector<NodeID> last(pieces, NO_NODE);
    for (NodeID v = 0; v < n; v++) {
        NodeID p = piece_of[v];
        if (last[p] != NO_NODE)
            g.add_edge(v, last[p], rng.next_range(wmin, wmax));
        last[p] = v;
    }
    for (size_t i = 0; i < n; i++) {
        NodeID u = static_cast<NodeID>(rng.next_below(n));
        NodeID v = static_cast<NodeID>(rng.next_below(n));
        if (u != v && piece_of[u] == piece_of[v])
            g.add_edge(u, v, rng.next_range(wmin, wmax));
    }
    return g;
}

// mixed update batch over existing edges; may set weights to infinity
// (edge deletion) and may restore previously deleted edges
inline UpdateBatch random_batch(Rng &rng, const Graph &g, size_t count, bool allow_infinite)
{
    auto edges = g.edge_list();
    std::vector<WeightUpdate> raw;
    for (size_t i = 0; i < count && !edges.empty(); i++) {
        auto [u, v] = edges[rng.next_below(edges.size())];
        distance_t w;
        switch (rng.next_below(allow_infinite ? 4 : 3)) {
            case 0: w = rng.next_range(1, 50); break;           // likely decrease
            case 1: w = rng.next_range(50, 200); break;         // likely increase
            case 2: w = g.edge_weight(u, v); break;             // no-op candidate
            default: w = infinity; break;                       // deletion
        }
        raw.push_back({u, v, w});
    }
    return UpdateBatch::collect(raw);
}

// stage a mixed batch the way maintenance consumes it: increases are
// applied to the graph and handed to the increase pass first, decreases after
struct StagedBatch {
    std::vector<WeightUpdate> increases, decreases;
};

inline StagedBatch classify_batch(const Graph &g, const UpdateBatch &batch)
{
    StagedBatch staged;
    for (const WeightUpdate &u : batch.updates) {
        distance_t cur = g.edge_weight(u.u, u.v);
        if (u.new_weight == cur)
            continue;
        WeightUpdate filled = u;
        filled.old_weight = cur;
        (u.new_weight > cur ? staged.increases : staged.decreases).push_back(filled);
    }
    return staged;
}

inline void apply_updates(Graph &g, const std::vector<WeightUpdate> &updates)
{
    for (const WeightUpdate &u : updates)
        g.set_edge_weight(u.u, u.v, u.new_weight);
}

inline std::string to_dimacs_gr(const Graph &g)
{
    std::ostringstream out;
    out << "p sp " << g.node_count() << ' ' << 2 * g.edge_count() << '\n';
    for (NodeID u = 0; u < g.node_count(); u++)
        for (const Neighbor &n : g.neighbors(u))
            out << "a " << g.external_id(u) << ' ' << g.external_id(n.node)
                << ' ' << n.distance << '\n';
    return out.str();
}

inline std::string to_dimacs_co(const Graph &g)
{
    std::ostringstream out;
    for (NodeID v = 0; v < g.node_count(); v++)
        if (!g.coordinate_known.empty() && g.coordinate_known[v])
            out << "v " << g.external_id(v) << ' ' << g.coordinates[v].x
                << ' ' << g.coordinates[v].y << '\n';
    return out.str();
}

// hierarchical bisection network: two recursively built halves joined by a
// handful of bridge vertices, giving road-like small separators at every
// scale; deterministic in the seed
inline Graph synthetic_road_network(size_t target, uint64_t seed)
{
    Rng rng(seed);
    struct Builder {
        Rng &rng;
        std::vector<Coordinate> coords;
        std::vector<EdgeSpec> edges;

        NodeID fresh(int64_t x0, int64_t y0, int64_t x1, int64_t y1)
        {
            coords.push_back({static_cast<int64_t>(x0 + rng.next_below(std::max<int64_t>(1, x1 - x0))),
                              static_cast<int64_t>(y0 + rng.next_below(std::max<int64_t>(1, y1 - y0)))});
            return static_cast<NodeID>(coords.size() - 1);
        }

        // returns the vertices of the region
        std::vector<NodeID> region(size_t count, int64_t x0, int64_t y0, int64_t x1, int64_t y1)
        {
            if (count <= 24) {
                std::vector<NodeID> vs;
                for (size_t i = 0; i < count; i++) {
                    NodeID v = fresh(x0, y0, x1, y1);
                    if (i > 0)
                        edges.push_back({v, vs[rng.next_below(vs.size())],
                                         rng.next_range(10, 10000)});
                    vs.push_back(v);
                }
                for (size_t i = 0; i + 4 < count; i += 4)
                    edges.push_back({vs[i], vs[rng.next_below(vs.size())],
                                     rng.next_range(10, 10000)});
                return vs;
            }
            size_t half = count / 2;
            bool vertical = (x1 - x0) >= (y1 - y0);
            std::vector<NodeID> a, b;
            if (vertical) {
                int64_t xm = (x0 + x1) / 2;
                a = region(half, x0, y0, xm, y1);
                b = region(count - half, xm, y0, x1, y1);
            } else {
                int64_t ym = (y0 + y1) / 2;
                a = region(half, x0, y0, x1, ym);
                b = region(count - half, x0, ym, x1, y1);
            }
            // bridge the halves through a few nearest-the-split vertices
            size_t k = 3 + rng.next_below(4);
            auto nearest = [&](std::vector<NodeID> &side, bool from_max) {
                std::vector<NodeID> picks(side);
                auto key = [&](NodeID v) { return vertical ? coords[v].x : coords[v].y; };
                std::sort(picks.begin(), picks.end(), [&](NodeID p, NodeID q) {
                    auto kp = key(p), kq = key(q);
                    if (kp != kq) return from_max ? kp > kq : kp < kq;
                    return p < q;
                });
                picks.resize(std::min(k, picks.size()));
                return picks;
            };
            std::vector<NodeID> pa = nearest(a, true), pb = nearest(b, false);
            for (size_t i = 0; i < std::min(pa.size(), pb.size()); i++)
                edges.push_back({pa[i], pb[i], rng.next_range(10, 10000)});
            a.insert(a.end(), b.begin(), b.end());
            return a;
        }
    } builder{rng, {}, {}};
    builder.region(target, 0, 0, 1 << 20, 1 << 20);
    Graph g(builder.coords.size());
    for (const EdgeSpec &e : builder.edges)
        g.add_edge(e.u, e.v, e.w);
    g.coordinates = std::move(builder.coords);
    g.coordinate_known.assign(g.node_count(), 1);
    return g;
}

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string &tag)
    {
        path = std::filesystem::temp_directory_path() /
            ("dhl_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::filesystem::path file(const std::string &name) const { return path / name; }
};

inline void write_file(const std::filesystem::path &p, const std::string &content)
{
    std::ofstream out(p, std::ios::binary);
    out << content;
}

inline std::vector<uint8_t> read_file_bytes(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// entrywise shortcut weight comparison between two hierarchies over the
// same structure
inline bool same_shortcut_weights(const UpdateHierarchy &a, const UpdateHierarchy &b)
{
    if (a.vertex_count() != b.vertex_count())
        return false;
    for (NodeID v = 0; v < a.vertex_count(); v++)
        if (a.upward(v) != b.upward(v) || a.upward_weights(v) != b.upward_weights(v))
            return false;
    return true;
}

} // namespace support
