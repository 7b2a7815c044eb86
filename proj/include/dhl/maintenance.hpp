#pragma once

#include "index.hpp"

#include <chrono>
#include <queue>
#include <string>
#include <thread>
#include <vector>

namespace dhl {

struct MaintenanceReport {
    uint64_t edges_changed = 0;     // applied weight updates
    uint64_t shortcuts_changed = 0;
    uint64_t labels_changed = 0;    // entries whose value differs afterwards
    uint64_t popped = 0;            // work items processed in phase 2
    uint64_t enqueued = 0;          // distinct work items ever queued
    uint64_t phase1_ns = 0;         // shortcut maintenance + label seeding
    uint64_t phase2_ns = 0;         // descendant propagation

    void merge(const MaintenanceReport &o)
    {
        edges_changed += o.edges_changed;
        shortcuts_changed += o.shortcuts_changed;
        labels_changed += o.labels_changed;
        popped += o.popped;
        enqueued += o.enqueued;
        phase1_ns += o.phase1_ns;
        phase2_ns += o.phase2_ns;
    }

    static const char* csv_header()
    {
        return "E_delta,S_delta,L_delta,popped,enqueued,phase1_ns,phase2_ns";
    }

    std::string csv_row() const
    {
        return std::to_string(edges_changed) + "," + std::to_string(shortcuts_changed) +
            "," + std::to_string(labels_changed) + "," + std::to_string(popped) +
            "," + std::to_string(enqueued) + "," + std::to_string(phase1_ns) +
            "," + std::to_string(phase2_ns);
    }
};

enum class UpdateMode { sequential, parallel };

namespace detail {

inline uint64_t now_ns()
{
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now().time_since_epoch()).count();
}

// min-heap over (rank, vertex, column); duplicates are suppressed through
// a flag per label entry, cleared again when the item is popped
class ItemQueue {
    using Entry = std::pair<uint64_t, uint64_t>;    // ((rank<<32)|v, (v<<32)|i)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
    std::vector<uint8_t> in_queue_;                 // indexed by label entry ID
    const std::vector<uint64_t> &offset_;

public:
    uint64_t distinct_enqueued = 0;

    explicit ItemQueue(const Labelling &l)
        : in_queue_(l.entry_count(), 0), offset_(l.raw_offsets()) {}

    bool empty() const { return heap_.empty(); }

    void push(uint32_t rank, NodeID v, uint32_t i)
    {
        uint64_t eid = offset_[v] + i;
        if (!in_queue_[eid]) {
            in_queue_[eid] = 1;
            distinct_enqueued++;
            heap_.push({(uint64_t(rank) << 32) | v, (uint64_t(v) << 32) | i});
        }
    }

    std::pair<NodeID,uint32_t> pop()
    {
        auto [key, payload] = heap_.top();
        heap_.pop();
        NodeID v = static_cast<NodeID>(payload >> 32);
        uint32_t i = static_cast<uint32_t>(payload);
        in_queue_[offset_[v] + i] = 0;
        return {v, i};
    }
};

} // namespace detail

// label maintenance for applied weight decreases (both phases sequential)
inline MaintenanceReport decrease_pass(HierarchicalIndex &index,
                                       const std::vector<WeightUpdate> &decreases)
{
    MaintenanceReport rep;
    rep.edges_changed = decreases.size();
    if (decreases.empty())
        return rep;
    uint64_t t0 = detail::now_ns();
    std::vector<ShortcutChange> delta = index.hu.apply_decreases(decreases);
    rep.shortcuts_changed = delta.size();

    UpdateHierarchy &hu = index.hu;
    Labelling &l = index.labels;
    detail::ItemQueue q(index.labels);
    // phase 1: refresh columns of each changed shortcut's ancestor range
    for (const ShortcutChange &c : delta) {
        uint32_t rw = hu.rank(c.w);
        std::span<distance_t> lv = l.label(c.v);
        if (c.weight >= lv[rw])
            continue;
        std::span<const distance_t> lw = l.label(c.w);
        for (uint32_t i = 0; i <= rw; i++) {
            distance_t d = safe_sum(c.weight, lw[i]);
            if (d < lv[i]) {
                lv[i] = d;
                q.push(hu.rank(c.v), c.v, i);
            }
        }
    }
    uint64_t t1 = detail::now_ns();
    rep.phase1_ns = t1 - t0;
    // phase 2: propagate improved columns to descendants, shallow first
    while (!q.empty()) {
        auto [v, i] = q.pop();
        rep.popped++;
        distance_t lvi = l.label(v)[i];
        uint32_t rv = hu.rank(v);
        for (NodeID u : hu.downward(v)) {
            std::span<distance_t> lu = l.label(u);
            distance_t d = safe_sum(lu[rv], lvi);
            if (d < lu[i]) {
                lu[i] = d;
                q.push(hu.rank(u), u, i);
            }
        }
    }
    rep.enqueued = q.distinct_enqueued;
    rep.labels_changed = q.distinct_enqueued;   // every decrease write is a first-time improvement
    rep.phase2_ns = detail::now_ns() - t1;
    return rep;
}

// label maintenance for applied weight increases; flagged entries are
// recomputed from upward shortcuts and may turn out unchanged
inline MaintenanceReport increase_pass(HierarchicalIndex &index,
                                       const std::vector<WeightUpdate> &increases)
{
    MaintenanceReport rep;
    rep.edges_changed = increases.size();
    if (increases.empty())
        return rep;
    uint64_t t0 = detail::now_ns();
    std::vector<ShortcutChange> delta = index.hu.apply_increases(index.graph, increases);
    rep.shortcuts_changed = delta.size();

    UpdateHierarchy &hu = index.hu;
    Labelling &l = index.labels;
    detail::ItemQueue q(index.labels);
    // phase 1: flag entries whose value was realized through a changed shortcut
    for (const ShortcutChange &c : delta) {
        uint32_t rw = hu.rank(c.w);
        std::span<const distance_t> lv = l.label(c.v);
        if (c.weight != lv[rw])     // c.weight is the old shortcut weight
            continue;
        std::span<const distance_t> lw = l.label(c.w);
        for (uint32_t i = 0; i <= rw; i++)
            if (lv[i] != infinity && safe_sum(c.weight, lw[i]) == lv[i])
                q.push(hu.rank(c.v), c.v, i);
    }
    uint64_t t1 = detail::now_ns();
    rep.phase1_ns = t1 - t0;
    while (!q.empty()) {
        auto [v, i] = q.pop();
        rep.popped++;
        std::span<distance_t> lv = l.label(v);
        distance_t old = lv[i];
        distance_t fresh = infinity;
        const std::vector<NodeID> &ups = hu.upward(v);
        const std::vector<distance_t> &ws = hu.upward_weights(v);
        for (size_t j = hu.upward_suffix(v, i); j < ups.size(); j++) {
            distance_t d = safe_sum(ws[j], l.label(ups[j])[i]);
            if (d < fresh)
                fresh = d;
        }
        // the recomputation can confirm the present value; only strict growth propagates
        if (fresh <= old)
            continue;
        uint32_t rv = hu.rank(v);
        for (NodeID u : hu.downward(v)) {
            std::span<const distance_t> lu = l.label(u);
            if (lu[i] != infinity && safe_sum(lu[rv], old) == lu[i])
                q.push(hu.rank(u), u, i);
        }
        lv[i] = fresh;
        rep.labels_changed++;
    }
    rep.enqueued = q.distinct_enqueued;
    rep.phase2_ns = detail::now_ns() - t1;
    return rep;
}

namespace detail {

// column-local queue for the parallel phase 2; items of one column never
// leave it, so each column runs to exhaustion independently
struct ColumnWork {
    uint32_t column;
    std::vector<std::pair<uint32_t,NodeID>> seeds;  // (rank, vertex)
};

template <typename ProcessColumn>
void run_columns(std::vector<ColumnWork> &columns, unsigned workers, ProcessColumn process)
{
    if (workers <= 1) {
        for (ColumnWork &cw : columns)
            process(cw);
        return;
    }
    std::vector<std::thread> threads;
    for (unsigned wid = 0; wid < workers; wid++)
        threads.emplace_back([&, wid] {
            for (size_t c = wid; c < columns.size(); c += workers)
                process(columns[c]);
        });
    for (std::thread &t : threads)
        t.join();
}

inline std::vector<ColumnWork> group_by_column(std::vector<std::tuple<uint32_t,NodeID,uint32_t>> seeds)
{
    std::sort(seeds.begin(), seeds.end(), [](const auto &a, const auto &b) {
        if (std::get<2>(a) != std::get<2>(b)) return std::get<2>(a) < std::get<2>(b);
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
    });
    std::vector<ColumnWork> columns;
    for (const auto &[rank, v, i] : seeds) {
        if (columns.empty() || columns.back().column != i)
            columns.push_back({i, {}});
        columns.back().seeds.emplace_back(rank, v);
    }
    return columns;
}

} // namespace detail

// parallel decrease maintenance: phase 1 is sequential and identical to the
// sequential pass; phase 2 partitions work by ancestor column, and the
// descendant test reads the shortcut weight instead of a foreign column
inline MaintenanceReport decrease_pass_parallel(HierarchicalIndex &index,
                                                const std::vector<WeightUpdate> &decreases,
                                                unsigned workers)
{
    MaintenanceReport rep;
    rep.edges_changed = decreases.size();
    if (decreases.empty())
        return rep;
    uint64_t t0 = detail::now_ns();
    std::vector<ShortcutChange> delta = index.hu.apply_decreases(decreases);
    rep.shortcuts_changed = delta.size();

    UpdateHierarchy &hu = index.hu;
    Labelling &l = index.labels;
    const std::vector<uint64_t> &offset = l.raw_offsets();
    std::vector<uint8_t> in_queue(l.entry_count(), 0);  // shared; columns touch disjoint entries
    std::vector<std::tuple<uint32_t,NodeID,uint32_t>> seeds;
    for (const ShortcutChange &c : delta) {
        uint32_t rw = hu.rank(c.w);
        std::span<distance_t> lv = l.label(c.v);
        if (c.weight >= lv[rw])
            continue;
        std::span<const distance_t> lw = l.label(c.w);
        for (uint32_t i = 0; i <= rw; i++) {
            distance_t d = safe_sum(c.weight, lw[i]);
            if (d < lv[i]) {
                lv[i] = d;
                if (!in_queue[offset[c.v] + i]) {
                    in_queue[offset[c.v] + i] = 1;
                    seeds.emplace_back(hu.rank(c.v), c.v, i);
                }
            }
        }
    }
    uint64_t t1 = detail::now_ns();
    rep.phase1_ns = t1 - t0;

    auto columns = detail::group_by_column(std::move(seeds));
    std::vector<MaintenanceReport> col_reps(columns.size());
    detail::run_columns(columns, workers, [&](detail::ColumnWork &cw) {
        MaintenanceReport &r = col_reps[&cw - columns.data()];
        const uint32_t i = cw.column;
        std::priority_queue<std::pair<uint64_t,NodeID>, std::vector<std::pair<uint64_t,NodeID>>,
                            std::greater<>> heap;
        for (auto [rank, v] : cw.seeds) {
            heap.push({(uint64_t(rank) << 32) | v, v});
            r.enqueued++;
        }
        while (!heap.empty()) {
            NodeID v = heap.top().second;
            heap.pop();
            in_queue[offset[v] + i] = 0;
            r.popped++;
            distance_t lvi = l.label(v)[i];
            const std::vector<NodeID> &downs = hu.downward(v);
            for (NodeID u : downs) {
                const distance_t *wuv = hu.find_weight(u, v);
                distance_t d = safe_sum(*wuv, lvi);
                std::span<distance_t> lu = l.label(u);
                if (d < lu[i]) {
                    lu[i] = d;
                    if (!in_queue[offset[u] + i]) {
                        in_queue[offset[u] + i] = 1;
                        heap.push({(uint64_t(hu.rank(u)) << 32) | u, u});
                        r.enqueued++;
                    }
                }
            }
        }
        r.labels_changed = r.enqueued;
    });
    for (const MaintenanceReport &r : col_reps) {
        rep.labels_changed += r.labels_changed;
        rep.popped += r.popped;
        rep.enqueued += r.enqueued;
    }
    rep.phase2_ns = detail::now_ns() - t1;
    return rep;
}

// parallel increase maintenance, same column partitioning
inline MaintenanceReport increase_pass_parallel(HierarchicalIndex &index,
                                                const std::vector<WeightUpdate> &increases,
                                                unsigned workers)
{
    MaintenanceReport rep;
    rep.edges_changed = increases.size();
    if (increases.empty())
        return rep;
    uint64_t t0 = detail::now_ns();
    std::vector<ShortcutChange> delta = index.hu.apply_increases(index.graph, increases);
    rep.shortcuts_changed = delta.size();

    UpdateHierarchy &hu = index.hu;
    Labelling &l = index.labels;
    const std::vector<uint64_t> &offset = l.raw_offsets();
    std::vector<uint8_t> in_queue(l.entry_count(), 0);  // shared; columns touch disjoint entries
    std::vector<std::tuple<uint32_t,NodeID,uint32_t>> seeds;
    for (const ShortcutChange &c : delta) {
        uint32_t rw = hu.rank(c.w);
        std::span<const distance_t> lv = l.label(c.v);
        if (c.weight != lv[rw])
            continue;
        std::span<const distance_t> lw = l.label(c.w);
        for (uint32_t i = 0; i <= rw; i++)
            if (lv[i] != infinity && safe_sum(c.weight, lw[i]) == lv[i])
                if (!in_queue[offset[c.v] + i]) {
                    in_queue[offset[c.v] + i] = 1;
                    seeds.emplace_back(hu.rank(c.v), c.v, i);
                }
    }
    uint64_t t1 = detail::now_ns();
    rep.phase1_ns = t1 - t0;

    auto columns = detail::group_by_column(std::move(seeds));
    std::vector<MaintenanceReport> col_reps(columns.size());
    detail::run_columns(columns, workers, [&](detail::ColumnWork &cw) {
        MaintenanceReport &r = col_reps[&cw - columns.data()];
        const uint32_t i = cw.column;
        std::priority_queue<std::pair<uint64_t,NodeID>, std::vector<std::pair<uint64_t,NodeID>>,
                            std::greater<>> heap;
        for (auto [rank, v] : cw.seeds) {
            heap.push({(uint64_t(rank) << 32) | v, v});
            r.enqueued++;
        }
        while (!heap.empty()) {
            NodeID v = heap.top().second;
            heap.pop();
            in_queue[offset[v] + i] = 0;
            r.popped++;
            std::span<distance_t> lv = l.label(v);
            distance_t old = lv[i];
            distance_t fresh = infinity;
            const std::vector<NodeID> &ups = hu.upward(v);
            const std::vector<distance_t> &ws = hu.upward_weights(v);
            for (size_t j = hu.upward_suffix(v, i); j < ups.size(); j++) {
                distance_t d = safe_sum(ws[j], l.label(ups[j])[i]);
                if (d < fresh)
                    fresh = d;
            }
            if (fresh <= old)
                continue;
            for (NodeID u : hu.downward(v)) {
                const distance_t *wuv = hu.find_weight(u, v);
                std::span<const distance_t> lu = l.label(u);
                if (lu[i] != infinity && safe_sum(*wuv, old) == lu[i])
                    if (!in_queue[offset[u] + i]) {
                        in_queue[offset[u] + i] = 1;
                        heap.push({(uint64_t(hu.rank(u)) << 32) | u, u});
                        r.enqueued++;
                    }
            }
            lv[i] = fresh;
            r.labels_changed++;
        }
    });
    for (const MaintenanceReport &r : col_reps) {
        rep.labels_changed += r.labels_changed;
        rep.popped += r.popped;
        rep.enqueued += r.enqueued;
    }
    rep.phase2_ns = detail::now_ns() - t1;
    return rep;
}

// full batch dispatch: increases are applied and maintained first, then
// decreases; batches touching nonexistent edges are rejected untouched
inline MaintenanceReport apply_batch(HierarchicalIndex &index, const UpdateBatch &batch,
                                     UpdateMode mode = UpdateMode::sequential,
                                     unsigned workers = 0)
{
    for (const WeightUpdate &u : batch.updates)
        if (!index.graph.find_edge(u.u, u.v))
            throw std::invalid_argument("no such edge: (" + std::to_string(u.u) +
                "," + std::to_string(u.v) + ")");
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());

    std::vector<WeightUpdate> increases, decreases;
    for (const WeightUpdate &u : batch.updates) {
        distance_t cur = index.graph.edge_weight(u.u, u.v);
        if (u.new_weight == cur)
            continue;
        WeightUpdate filled = u;
        filled.old_weight = cur;
        (u.new_weight > cur ? increases : decreases).push_back(filled);
    }
    MaintenanceReport rep;
    for (const WeightUpdate &u : increases)
        index.graph.set_edge_weight(u.u, u.v, u.new_weight);
    rep.merge(mode == UpdateMode::sequential
        ? increase_pass(index, increases)
        : increase_pass_parallel(index, increases, workers));
    for (const WeightUpdate &u : decreases)
        index.graph.set_edge_weight(u.u, u.v, u.new_weight);
    MaintenanceReport dec = mode == UpdateMode::sequential
        ? decrease_pass(index, decreases)
        : decrease_pass_parallel(index, decreases, workers);
    rep.merge(dec);
    return rep;
}

} // namespace dhl
