#pragma once

#include "query_hierarchy.hpp"
#include "update_hierarchy.hpp"

#include <cassert>
#include <span>
#include <vector>

namespace dhl {

// Per-vertex distance arrays; entry i of vertex v holds the distance from v
// to its rank-i ancestor within the subgraph spanned by the vertices between
// them in the partial order (not the full-graph distance).
class Labelling {
    std::vector<uint64_t> offset_;      // size n+1
    std::vector<distance_t> entry_;

public:
    Labelling() = default;

    size_t vertex_count() const { return offset_.empty() ? 0 : offset_.size() - 1; }
    size_t entry_count() const { return entry_.size(); }
    size_t byte_size() const { return entry_.size() * sizeof(distance_t); }

    size_t label_length(NodeID v) const { return offset_[v + 1] - offset_[v]; }

    size_t max_label_length() const
    {
        size_t m = 0;
        for (NodeID v = 0; v < vertex_count(); v++)
            m = std::max(m, label_length(v));
        return m;
    }

    std::span<const distance_t> label(NodeID v) const
    {
        return {entry_.data() + offset_[v], entry_.data() + offset_[v + 1]};
    }

    std::span<distance_t> label(NodeID v)
    {
        return {entry_.data() + offset_[v], entry_.data() + offset_[v + 1]};
    }

    distance_t entry(NodeID v, uint32_t i) const
    {
        if (i >= label_length(v))
            throw std::out_of_range("label position beyond vertex rank");
        return entry_[offset_[v] + i];
    }

    const std::vector<distance_t>& raw_entries() const { return entry_; }
    const std::vector<uint64_t>& raw_offsets() const { return offset_; }

    bool operator==(const Labelling &other) const = default;

    static Labelling from_parts(std::vector<uint64_t> offsets, std::vector<distance_t> entries)
    {
        Labelling l;
        l.offset_ = std::move(offsets);
        l.entry_ = std::move(entries);
        if (l.offset_.empty() || l.offset_.back() != l.entry_.size())
            throw data_error("label offsets inconsistent with entry array");
        return l;
    }

    // bottom-up construction: a vertex pulls every ancestor column through
    // each of its upward shortcuts, in increasing rank order
    static Labelling build(const QueryHierarchy &hq, const UpdateHierarchy &hu)
    {
        const size_t n = hq.vertex_count();
        Labelling l;
        l.offset_.resize(n + 1);
        l.offset_[0] = 0;
        for (NodeID v = 0; v < n; v++)
            l.offset_[v + 1] = l.offset_[v] + hq.label_length(v);
        l.entry_.assign(l.offset_[n], infinity);
        for (NodeID v = 0; v < n; v++)
            l.entry_[l.offset_[v] + hq.rank(v)] = 0;    // self entry

        for (NodeID v : hu.vertices_by_rank()) {
            std::span<distance_t> lv = l.label(v);
            const std::vector<NodeID> &ups = hu.upward(v);
            const std::vector<distance_t> &ws = hu.upward_weights(v);
            for (size_t j = 0; j < ups.size(); j++) {
                std::span<const distance_t> lw = l.label(ups[j]);
                distance_t w = ws[j];
                for (size_t i = 0; i < lw.size(); i++) {
                    distance_t d = safe_sum(w, lw[i]);
                    if (d < lv[i])
                        lv[i] = d;
                }
            }
        }
        return l;
    }
};

// exact distance: scan the common-ancestor prefix of both labels
inline distance_t query_distance(const QueryHierarchy &hq, const Labelling &l,
                                 NodeID s, NodeID t)
{
    if (s >= hq.vertex_count() || t >= hq.vertex_count())
        throw std::out_of_range("query vertex out of range");
    uint32_t k = hq.common_ancestor_count(s, t);
    std::span<const distance_t> ls = l.label(s), lt = l.label(t);
    assert(k <= ls.size() && k <= lt.size());
    distance_t best = infinity;
    for (uint32_t i = 0; i < k; i++) {
        distance_t d = ls[i] + lt[i];   // cannot wrap, clamped below
        if (d < best)
            best = d;
    }
    return best >= infinity ? infinity : best;
}

struct LabelStats {
    uint64_t entries;
    uint64_t bytes;
    uint64_t max_length;
};

inline LabelStats label_stats(const Labelling &l)
{
    return {l.entry_count(), l.byte_size(), l.max_label_length()};
}

} // namespace dhl
