#pragma once

#include "graph.hpp"
#include "oracle.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

namespace dhl::workload {

// batch files are plain text: one "<u> <v> <new_weight>" per line with
// original vertex IDs; "inf" deletes the edge; '#' starts a comment

struct BatchLine {
    NodeID ext_u, ext_v;
    distance_t new_weight;
};

inline void write_batch_file(const std::filesystem::path &path,
                             const std::vector<BatchLine> &lines)
{
    std::ofstream out(path);
    if (!out)
        throw data_error("cannot write " + path.string());
    for (const BatchLine &l : lines) {
        out << l.ext_u << ' ' << l.ext_v << ' ';
        if (l.new_weight >= infinity)
            out << "inf";
        else
            out << l.new_weight;
        out << '\n';
    }
}

inline std::vector<BatchLine> parse_batch_lines(std::istream &in)
{
    std::vector<BatchLine> lines;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        const char *p = line.data(), *end = line.data() + line.size();
        p = detail::skip_ws(p, end);
        if (p == end || *p == '#')
            continue;
        uint64_t u = 0, v = 0, w = 0;
        p = detail::parse_int(p, end, u, line_no, "vertex ID");
        p = detail::parse_int(p, end, v, line_no, "vertex ID");
        p = detail::skip_ws(p, end);
        if (end - p >= 3 && p[0] == 'i' && p[1] == 'n' && p[2] == 'f') {
            w = infinity;
        } else {
            detail::parse_int(p, end, w, line_no, "weight");
            if (w > infinity)
                throw parse_error(line_no, "weight too large");
        }
        if (u > UINT32_MAX || v > UINT32_MAX)
            throw parse_error(line_no, "vertex ID too large");
        lines.push_back({static_cast<NodeID>(u), static_cast<NodeID>(v), w});
    }
    return lines;
}

// translate to internal IDs and deduplicate; unknown vertices are an error
inline UpdateBatch to_update_batch(const std::vector<BatchLine> &lines, const Graph &g)
{
    std::vector<WeightUpdate> raw;
    raw.reserve(lines.size());
    for (const BatchLine &l : lines) {
        auto u = g.to_internal(l.ext_u), v = g.to_internal(l.ext_v);
        if (!u || !v)
            throw std::invalid_argument("unknown vertex in batch: (" +
                std::to_string(l.ext_u) + "," + std::to_string(l.ext_v) + ")");
        raw.push_back({*u, *v, l.new_weight});
    }
    return UpdateBatch::collect(raw);
}

//--------------------------- generation ----------------------------

// distinct random edges, deterministic partial Fisher-Yates
inline std::vector<std::pair<NodeID,NodeID>> sample_edges(const Graph &g, Rng &rng, size_t count)
{
    std::vector<std::pair<NodeID,NodeID>> edges = g.edge_list();
    count = std::min(count, edges.size());
    for (size_t i = 0; i < count; i++) {
        size_t j = i + rng.next_below(edges.size() - i);
        std::swap(edges[i], edges[j]);
    }
    edges.resize(count);
    return edges;
}

struct GeneratedWorkload {
    std::vector<std::string> files;     // in processing order
    std::vector<std::string> warnings;
};

inline std::string batch_name(const char *prefix, size_t idx, const char *phase)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s_%03zu_%s.txt", prefix, idx, phase);
    return buf;
}

// per batch: double each sampled edge weight, then restore it
inline GeneratedWorkload generate_x2_restore(const Graph &g, uint64_t seed,
                                             size_t batches, size_t batch_size,
                                             const std::filesystem::path &dir)
{
    GeneratedWorkload out;
    Rng rng(seed);
    for (size_t b = 0; b < batches; b++) {
        auto edges = sample_edges(g, rng, batch_size);
        std::vector<BatchLine> doubled, restore;
        for (auto [u, v] : edges) {
            distance_t w = g.edge_weight(u, v);
            doubled.push_back({g.external_id(u), g.external_id(v), safe_sum(w, w)});
            restore.push_back({g.external_id(u), g.external_id(v), w});
        }
        std::string inc = batch_name("x2", b, "increase"), res = batch_name("x2", b, "restore");
        write_batch_file(dir / inc, doubled);
        write_batch_file(dir / res, restore);
        out.files.push_back(inc);
        out.files.push_back(res);
    }
    return out;
}

// batch t scales weights by (t+1), then restores
inline GeneratedWorkload generate_multiplier_sweep(const Graph &g, uint64_t seed,
                                                   size_t batches, size_t batch_size,
                                                   const std::filesystem::path &dir)
{
    GeneratedWorkload out;
    Rng rng(seed);
    for (size_t b = 0; b < batches; b++) {
        uint64_t factor = b + 2;
        auto edges = sample_edges(g, rng, batch_size);
        std::vector<BatchLine> scaled, restore;
        for (auto [u, v] : edges) {
            distance_t w = g.edge_weight(u, v);
            distance_t sw = w >= infinity / factor ? infinity : w * factor;
            scaled.push_back({g.external_id(u), g.external_id(v), sw});
            restore.push_back({g.external_id(u), g.external_id(v), w});
        }
        std::string inc = batch_name("sweep", b, "increase"), res = batch_name("sweep", b, "restore");
        write_batch_file(dir / inc, scaled);
        write_batch_file(dir / res, restore);
        out.files.push_back(inc);
        out.files.push_back(res);
    }
    return out;
}

struct BandSpec {
    distance_t l_min = 1000;
    size_t bands = 10;
    size_t pairs_per_band = 10000;
    size_t max_sources = 256;
};

// query sets banded by distance: band i holds pairs with distance in
// (l_min * x^(i-1), l_min * x^i], where x = (l_max / l_min)^(1/bands)
inline GeneratedWorkload generate_distance_bands(const Graph &g, uint64_t seed,
                                                 const BandSpec &spec,
                                                 const std::filesystem::path &dir)
{
    GeneratedWorkload out;
    Rng rng(seed);
    const size_t n = g.node_count();
    // estimate the maximum query distance from sampled sources
    distance_t l_max = 0;
    size_t probes = std::min<size_t>(n, 32);
    for (size_t i = 0; i < probes; i++) {
        NodeID s = static_cast<NodeID>(rng.next_below(n));
        for (distance_t d : oracle::dijkstra(g, s))
            if (d != infinity && d > l_max)
                l_max = d;
    }
    if (l_max <= spec.l_min) {
        out.warnings.push_back("graph diameter below l_min; all bands empty");
        for (size_t b = 1; b <= spec.bands; b++) {
            std::string name = batch_name("band", b, "pairs");
            write_batch_file(dir / name, {});
            out.files.push_back(name);
        }
        return out;
    }
    const double x = std::pow(double(l_max) / double(spec.l_min), 1.0 / double(spec.bands));
    std::vector<double> bound(spec.bands + 1);
    for (size_t b = 0; b <= spec.bands; b++)
        bound[b] = double(spec.l_min) * std::pow(x, double(b));
    std::vector<std::vector<std::pair<NodeID,NodeID>>> band_pairs(spec.bands);
    auto band_of = [&](distance_t d) -> size_t {
        if (d == infinity || d <= spec.l_min)
            return SIZE_MAX;
        for (size_t b = 1; b <= spec.bands; b++)
            if (double(d) <= bound[b])
                return b - 1;
        return SIZE_MAX;    // beyond the sampled l_max estimate
    };
    size_t filled = 0;
    for (size_t tries = 0; tries < spec.max_sources && filled < spec.bands; tries++) {
        NodeID s = static_cast<NodeID>(rng.next_below(n));
        std::vector<distance_t> dist = oracle::dijkstra(g, s);
        for (NodeID t = 0; t < n && filled < spec.bands; t++) {
            if (t == s)
                continue;
            size_t b = band_of(dist[t]);
            if (b == SIZE_MAX || band_pairs[b].size() >= spec.pairs_per_band)
                continue;
            band_pairs[b].emplace_back(s, t);
            if (band_pairs[b].size() == spec.pairs_per_band)
                filled++;
        }
    }
    for (size_t b = 0; b < spec.bands; b++) {
        if (band_pairs[b].size() < spec.pairs_per_band)
            out.warnings.push_back("band " + std::to_string(b + 1) + " short: " +
                std::to_string(band_pairs[b].size()) + "/" +
                std::to_string(spec.pairs_per_band) + " pairs");
        std::string name = batch_name("band", b + 1, "pairs");
        std::ofstream f(dir / name);
        for (auto [s, t] : band_pairs[b])
            f << g.external_id(s) << ' ' << g.external_id(t) << '\n';
        out.files.push_back(name);
    }
    // record the exact boundaries so every emitted pair can be re-verified
    {
        std::ofstream meta(dir / "bands_meta.txt");
        meta.precision(17);
        meta << "# l_min l_max x\n" << spec.l_min << ' ' << l_max << ' ' << x << '\n';
        meta << "# band lo hi count\n";
        for (size_t b = 0; b < spec.bands; b++)
            meta << b + 1 << ' ' << bound[b] << ' ' << bound[b + 1] << ' '
                 << band_pairs[b].size() << '\n';
        out.files.push_back("bands_meta.txt");
    }
    return out;
}

// one pool of updates processed in growing batch sizes
inline GeneratedWorkload generate_scalability(const Graph &g, uint64_t seed,
                                              size_t pool_size, size_t steps,
                                              const std::filesystem::path &dir)
{
    GeneratedWorkload out;
    Rng rng(seed);
    auto pool = sample_edges(g, rng, pool_size);
    if (pool.size() < pool_size)
        out.warnings.push_back("graph has only " + std::to_string(pool.size()) + " edges");
    for (size_t s = 1; s <= steps; s++) {
        size_t size = std::min(pool.size(), s * pool.size() / steps);
        std::vector<BatchLine> inc, res;
        for (size_t i = 0; i < size; i++) {
            auto [u, v] = pool[i];
            distance_t w = g.edge_weight(u, v);
            inc.push_back({g.external_id(u), g.external_id(v), safe_sum(w, w)});
            res.push_back({g.external_id(u), g.external_id(v), w});
        }
        std::string si = batch_name("scale", size, "increase"), sr = batch_name("scale", size, "restore");
        write_batch_file(dir / si, inc);
        write_batch_file(dir / sr, res);
        out.files.push_back(si);
        out.files.push_back(sr);
    }
    return out;
}

// "<u> <v>" per line, original IDs
inline std::vector<std::pair<NodeID,NodeID>> parse_pair_file(std::istream &in)
{
    std::vector<std::pair<NodeID,NodeID>> pairs;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        const char *p = line.data(), *end = line.data() + line.size();
        p = detail::skip_ws(p, end);
        if (p == end || *p == '#')
            continue;
        uint64_t u = 0, v = 0;
        p = detail::parse_int(p, end, u, line_no, "vertex ID");
        detail::parse_int(p, end, v, line_no, "vertex ID");
        pairs.emplace_back(static_cast<NodeID>(u), static_cast<NodeID>(v));
    }
    return pairs;
}

} // namespace dhl::workload
