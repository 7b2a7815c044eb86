#pragma once

#include "graph.hpp"
#include "query_hierarchy.hpp"

#include <algorithm>
#include <cassert>
#include <optional>
#include <queue>
#include <string>
#include <unordered_set>
#include <vector>

namespace dhl {

// open-addressed map from canonical shortcut pair to a small payload;
// key 0 is free since a pair never has both endpoints equal to vertex 0
class PairMap {
    std::vector<uint64_t> keys_;
    std::vector<uint32_t> vals_;
    uint64_t mask_ = 0;
    size_t count_ = 0;

    static uint64_t mix(uint64_t k)
    {
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdull;
        k ^= k >> 33;
        return k;
    }

public:
    void reserve(size_t n)
    {
        size_t cap = 16;
        while (cap < 2 * n + 1)
            cap <<= 1;
        keys_.assign(cap, 0);
        vals_.assign(cap, 0);
        mask_ = cap - 1;
        count_ = 0;
    }

    size_t size() const { return count_; }

    void insert(uint64_t key, uint32_t val)
    {
        assert(key != 0);
        if (keys_.empty() || 2 * (count_ + 1) > keys_.size())
            grow();
        uint64_t i = mix(key) & mask_;
        while (keys_[i] != 0) {
            if (keys_[i] == key) {
                vals_[i] = val;
                return;
            }
            i = (i + 1) & mask_;
        }
        keys_[i] = key;
        vals_[i] = val;
        count_++;
    }

    const uint32_t* find(uint64_t key) const
    {
        if (keys_.empty())
            return nullptr;
        uint64_t i = mix(key) & mask_;
        while (keys_[i] != 0) {
            if (keys_[i] == key)
                return &vals_[i];
            i = (i + 1) & mask_;
        }
        return nullptr;
    }

private:
    void grow()
    {
        std::vector<uint64_t> old_keys = std::move(keys_);
        std::vector<uint32_t> old_vals = std::move(vals_);
        size_t cap = old_keys.empty() ? 16 : old_keys.size() * 2;
        keys_.assign(cap, 0);
        vals_.assign(cap, 0);
        mask_ = cap - 1;
        count_ = 0;
        for (size_t i = 0; i < old_keys.size(); i++)
            if (old_keys[i] != 0)
                insert(old_keys[i], old_vals[i]);
    }
};

// shortcut whose weight changed during a maintenance pass; v is the deeper
// endpoint; weight carries the new value (decrease) or old value (increase)
struct ShortcutChange {
    NodeID v, w;
    distance_t weight;
};

// Shortcut graph over all valley-path-connected vertex pairs. The edge set
// is a function of graph structure and the vertex order alone; maintenance
// only ever rewrites weights.
class UpdateHierarchy {
    std::vector<uint32_t> rank_;
    std::vector<std::vector<NodeID>> up_;           // ancestors by ascending rank
    std::vector<std::vector<distance_t>> up_weight_;
    std::vector<std::vector<NodeID>> down_;         // descendants by ascending ID
    PairMap slot_;                                  // (deeper, ancestor) -> index in up_[deeper]
    size_t shortcut_count_ = 0;

    static uint64_t pair_key(NodeID deeper, NodeID anc)
    {
        return (uint64_t(deeper) << 32) | anc;
    }

public:
    UpdateHierarchy() = default;

    size_t vertex_count() const { return rank_.size(); }
    size_t shortcut_count() const { return shortcut_count_; }
    uint32_t rank(NodeID v) const { return rank_[v]; }
    const std::vector<NodeID>& upward(NodeID v) const { return up_[v]; }
    const std::vector<distance_t>& upward_weights(NodeID v) const { return up_weight_[v]; }
    const std::vector<NodeID>& downward(NodeID v) const { return down_[v]; }

    // orients an unordered pair; null when the pair is not a shortcut
    const distance_t* find_weight(NodeID u, NodeID v) const
    {
        if (u >= rank_.size() || v >= rank_.size() || rank_[u] == rank_[v])
            return nullptr;
        NodeID deeper = rank_[u] > rank_[v] ? u : v;
        NodeID anc = deeper == u ? v : u;
        const uint32_t *j = slot_.find(pair_key(deeper, anc));
        return j ? &up_weight_[deeper][*j] : nullptr;
    }

    std::optional<distance_t> weight(NodeID u, NodeID v) const
    {
        const distance_t *w = find_weight(u, v);
        return w ? std::optional<distance_t>(*w) : std::nullopt;
    }

    // first index into upward(v) whose ancestor rank is >= r
    size_t upward_suffix(NodeID v, uint32_t r) const
    {
        const std::vector<NodeID> &ups = up_[v];
        size_t lo = 0, hi = ups.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (rank_[ups[mid]] < r)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

    // FNV-1a over the structure (pairs only, no weights)
    uint64_t structure_hash() const
    {
        uint64_t h = 0xcbf29ce484222325ull;
        auto feed = [&h](uint64_t x) {
            for (int b = 0; b < 64; b += 8) {
                h ^= (x >> b) & 0xff;
                h *= 0x100000001b3ull;
            }
        };
        for (NodeID v = 0; v < up_.size(); v++)
            for (NodeID w : up_[v]) {
                feed(v);
                feed(w);
            }
        return h;
    }

    std::vector<NodeID> vertices_by_rank() const
    {
        std::vector<NodeID> order(rank_.size());
        for (NodeID v = 0; v < order.size(); v++)
            order[v] = v;
        std::sort(order.begin(), order.end(), [this](NodeID a, NodeID b) {
            return rank_[a] != rank_[b] ? rank_[a] < rank_[b] : a < b;
        });
        return order;
    }

    // contraction without witness search: vertices are contracted deepest
    // first, and every pair of remaining neighbors receives a shortcut
    static UpdateHierarchy build(const Graph &g, const QueryHierarchy &hq)
    {
        const size_t n = g.node_count();
        UpdateHierarchy hu;
        hu.rank_.resize(n);
        for (NodeID v = 0; v < n; v++)
            hu.rank_[v] = hq.rank(v);
        for (NodeID u = 0; u < n; u++)
            for (const Neighbor &nb : g.neighbors(u))
                if (u < nb.node && !hq.is_ancestor(u, nb.node) && !hq.is_ancestor(nb.node, u))
                    throw std::invalid_argument("edge (" + std::to_string(u) + "," +
                        std::to_string(nb.node) + ") joins vertices the hierarchy does not order");

        // working pair store; each pair lives in the deeper endpoint's list
        PairMap weight_of;
        std::vector<distance_t> weights;
        std::vector<std::pair<NodeID,NodeID>> pairs;
        std::vector<std::vector<NodeID>> work(n);
        auto relax = [&](NodeID a, NodeID b, distance_t w) {
            assert(hu.rank_[a] != hu.rank_[b]);
            NodeID deeper = hu.rank_[a] > hu.rank_[b] ? a : b;
            NodeID anc = deeper == a ? b : a;
            uint64_t key = pair_key(deeper, anc);
            const uint32_t *j = weight_of.find(key);
            if (j) {
                weights[*j] = std::min(weights[*j], w);
            } else {
                weight_of.insert(key, static_cast<uint32_t>(weights.size()));
                weights.push_back(w);
                pairs.emplace_back(deeper, anc);
                work[deeper].push_back(anc);
            }
        };
        for (NodeID u = 0; u < n; u++)
            for (const Neighbor &nb : g.neighbors(u))
                if (u < nb.node)
                    relax(u, nb.node, nb.distance);

        std::vector<NodeID> order = hu.vertices_by_rank();
        for (size_t i = order.size(); i-- > 0;) {
            NodeID v = order[i];
            std::vector<NodeID> &nbrs = work[v];
            std::sort(nbrs.begin(), nbrs.end());
            nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
            for (size_t a = 0; a < nbrs.size(); a++) {
                distance_t wa = weights[*weight_of.find(pair_key(v, nbrs[a]))];
                for (size_t b = a + 1; b < nbrs.size(); b++) {
                    distance_t wb = weights[*weight_of.find(pair_key(v, nbrs[b]))];
                    relax(nbrs[a], nbrs[b], safe_sum(wa, wb));
                }
            }
        }

        // freeze into per-vertex lists
        hu.up_.resize(n);
        hu.up_weight_.resize(n);
        hu.down_.resize(n);
        std::sort(pairs.begin(), pairs.end());
        for (const auto &[v, w] : pairs) {
            hu.up_[v].push_back(w);
            hu.up_weight_[v].push_back(weights[*weight_of.find(pair_key(v, w))]);
        }
        hu.finalize();
        return hu;
    }

    // reassemble from per-vertex upward lists (deserialization)
    static UpdateHierarchy from_parts(std::vector<uint32_t> ranks,
                                      std::vector<std::vector<NodeID>> up,
                                      std::vector<std::vector<distance_t>> up_weight)
    {
        UpdateHierarchy hu;
        hu.rank_ = std::move(ranks);
        hu.up_ = std::move(up);
        hu.up_weight_ = std::move(up_weight);
        hu.down_.resize(hu.rank_.size());
        hu.finalize();
        return hu;
    }

    //--------------------------- maintenance ---------------------------

    // weight-decrease pass; the decreases must already be applied to the
    // graph; returns every shortcut whose weight changed, with new weights
    std::vector<ShortcutChange> apply_decreases(const std::vector<WeightUpdate> &updates)
    {
        WorkQueue q;
        std::vector<std::pair<NodeID,NodeID>> changed;
        std::unordered_set<uint64_t> changed_set;
        auto touch = [&](NodeID v, NodeID w) {
            if (changed_set.insert(pair_key(v, w)).second)
                changed.emplace_back(v, w);
        };
        for (const WeightUpdate &upd : updates) {
            auto [v, w] = orient(upd.u, upd.v);
            distance_t *slot = mutable_weight(v, w);
            assert(slot);
            if (*slot > upd.new_weight) {
                *slot = upd.new_weight;
                touch(v, w);
                q.push(rank_[v], v, w);
            }
        }
        while (!q.empty()) {
            auto [v, w] = q.pop();
            distance_t wv = *mutable_weight(v, w);
            const std::vector<NodeID> &ups = up_[v];
            for (size_t j = 0; j < ups.size(); j++) {
                NodeID other = ups[j];
                if (other == w)
                    continue;
                distance_t d = safe_sum(wv, up_weight_[v][j]);
                auto [a, b] = orient(w, other);
                distance_t *slot = mutable_weight(a, b);
                assert(slot);    // triangle closure
                if (*slot > d) {
                    *slot = d;
                    touch(a, b);
                    q.push(rank_[a], a, b);
                }
            }
        }
        std::vector<ShortcutChange> result;
        result.reserve(changed.size());
        for (auto [v, w] : changed)
            result.push_back({v, w, *mutable_weight(v, w)});
        return result;
    }

    // weight-increase pass; recomputes flagged shortcuts from the minimum
    // weight property; returns changed shortcuts with their old weights
    std::vector<ShortcutChange> apply_increases(const Graph &g,
                                                const std::vector<WeightUpdate> &updates)
    {
        WorkQueue q;
        // seed guards are evaluated against pre-pass weights, before any pop
        for (const WeightUpdate &upd : updates) {
            auto [v, w] = orient(upd.u, upd.v);
            const distance_t *slot = find_weight(v, w);
            assert(slot);
            if (*slot == upd.old_weight)
                q.push(rank_[v], v, w);
        }
        std::vector<ShortcutChange> changed;
        std::unordered_set<uint64_t> changed_set;
        while (!q.empty()) {
            auto [v, w] = q.pop();
            distance_t old = *mutable_weight(v, w);
            distance_t fresh = recompute(g, v, w);
            if (fresh == old)
                continue;
            // flag shortcuts that may have run through (v,w), then write
            const std::vector<NodeID> &ups = up_[v];
            for (size_t j = 0; j < ups.size(); j++) {
                NodeID other = ups[j];
                if (other == w)
                    continue;
                auto [a, b] = orient(w, other);
                const distance_t *slot = find_weight(a, b);
                assert(slot);
                if (*slot == safe_sum(old, up_weight_[v][j]))
                    q.push(rank_[a], a, b);
            }
            if (changed_set.insert(pair_key(v, w)).second)
                changed.push_back({v, w, old});
            *mutable_weight(v, w) = fresh;
        }
        return changed;
    }

    // minimum weight property for one shortcut against the current graph;
    // v is the deeper endpoint, supports are common downward neighbors
    distance_t recompute(const Graph &g, NodeID v, NodeID w) const
    {
        distance_t best = g.edge_weight(v, w);
        const std::vector<NodeID> &dv = down_[v], &dw = down_[w];
        bool probe_v = dv.size() <= dw.size();
        for (NodeID x : probe_v ? dv : dw) {
            // entries of the shallower list ranked between the endpoints
            // are not descendants of v and carry no valley route
            if (!probe_v && rank_[x] <= rank_[v])
                continue;
            const distance_t *a = find_weight(x, probe_v ? w : v);
            if (!a)
                continue;
            const distance_t *b = find_weight(x, probe_v ? v : w);
            best = std::min(best, safe_sum(*a, *b));
        }
        return best;
    }

    // full minimum-weight-property scan; returns violations (capped)
    std::vector<std::string> verify_weights(const Graph &g, size_t max_issues = 8) const
    {
        std::vector<std::string> issues;
        for (NodeID v = 0; v < up_.size() && issues.size() < max_issues; v++)
            for (size_t j = 0; j < up_[v].size() && issues.size() < max_issues; j++) {
                distance_t expect = recompute(g, v, up_[v][j]);
                if (up_weight_[v][j] != expect)
                    issues.push_back("shortcut (" + std::to_string(v) + "," +
                        std::to_string(up_[v][j]) + ") weight " +
                        std::to_string(up_weight_[v][j]) + " != " + std::to_string(expect));
            }
        return issues;
    }

private:
    std::pair<NodeID,NodeID> orient(NodeID a, NodeID b) const
    {
        assert(rank_[a] != rank_[b]);
        return rank_[a] > rank_[b] ? std::pair{a, b} : std::pair{b, a};
    }

    distance_t* mutable_weight(NodeID deeper, NodeID anc)
    {
        const uint32_t *j = slot_.find(pair_key(deeper, anc));
        return j ? &up_weight_[deeper][*j] : nullptr;
    }

    void finalize()
    {
        shortcut_count_ = 0;
        for (NodeID v = 0; v < up_.size(); v++)
            shortcut_count_ += up_[v].size();
        slot_.reserve(shortcut_count_);
        for (NodeID v = 0; v < up_.size(); v++) {
            auto &ups = up_[v];
            auto &ws = up_weight_[v];
            if (ups.size() != ws.size())
                throw data_error("upward list length mismatch");
            // sort by ancestor rank (pairs arrive sorted by ID)
            std::vector<size_t> idx(ups.size());
            for (size_t i = 0; i < idx.size(); i++)
                idx[i] = i;
            std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
                return rank_[ups[a]] < rank_[ups[b]];
            });
            std::vector<NodeID> sorted_up(ups.size());
            std::vector<distance_t> sorted_w(ups.size());
            for (size_t i = 0; i < idx.size(); i++) {
                sorted_up[i] = ups[idx[i]];
                sorted_w[i] = ws[idx[i]];
            }
            ups = std::move(sorted_up);
            ws = std::move(sorted_w);
            for (size_t i = 0; i < ups.size(); i++) {
                if (rank_[ups[i]] >= rank_[v])
                    throw data_error("upward neighbor does not precede vertex");
                slot_.insert(pair_key(v, ups[i]), static_cast<uint32_t>(i));
            }
        }
        for (NodeID v = 0; v < up_.size(); v++)
            for (NodeID w : up_[v])
                down_[w].push_back(v);  // v ascending, lists stay sorted by ID
    }

    // max-heap keyed by the deeper endpoint's rank, deterministic tie order
    class WorkQueue {
        struct Item {
            uint32_t rank;
            NodeID v, w;
            bool operator<(const Item &o) const
            {
                if (rank != o.rank) return rank < o.rank;
                if (v != o.v) return v < o.v;
                return w < o.w;
            }
        };
        std::priority_queue<Item> heap_;
        std::unordered_set<uint64_t> in_queue_;

    public:
        bool empty() const { return heap_.empty(); }

        void push(uint32_t rank, NodeID v, NodeID w)
        {
            if (in_queue_.insert(pair_key(v, w)).second)
                heap_.push({rank, v, w});
        }

        std::pair<NodeID,NodeID> pop()
        {
            Item it = heap_.top();
            heap_.pop();
            in_queue_.erase(pair_key(it.v, it.w));
            return {it.v, it.w};
        }
    };
};

} // namespace dhl
