#include "fixture.hpp"
#include "support.hpp"

#include <dhl/maintenance.hpp>
#include <dhl/serialize.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace dhl;

namespace {

HierarchicalIndex fixture_index()
{
    HierarchicalIndex index;
    index.graph = fixture::graph();
    index.hq = fixture::hierarchy();
    index.hu = UpdateHierarchy::build(index.graph, index.hq);
    index.labels = Labelling::build(index.hq, index.hu);
    return index;
}

std::vector<std::vector<distance_t>> all_labels(const Labelling &l)
{
    std::vector<std::vector<distance_t>> out(l.vertex_count());
    for (NodeID v = 0; v < l.vertex_count(); v++)
        out[v].assign(l.label(v).begin(), l.label(v).end());
    return out;
}

Labelling rebuild_labels(const HierarchicalIndex &index)
{
    return Labelling::build(index.hq, UpdateHierarchy::build(index.graph, index.hq));
}

} // namespace

TEST_CASE("decrease maintenance on the fixture updates the expected entries")
{
    HierarchicalIndex index = fixture_index();
    MaintenanceReport rep = apply_batch(index, UpdateBatch::collect({{6, 3, 1, 0}}));
    REQUIRE(rep.edges_changed == 1);
    REQUIRE(rep.shortcuts_changed == 3);
    REQUIRE(index.labels.entry(6, 1) == 1);
    REQUIRE(index.labels.entry(0, 1) == 5);
    REQUIRE(index.labels.entry(3, 0) == 6);
    REQUIRE(all_labels(index.labels) == fixture::labels_after_decrease());
    REQUIRE(index.labels == rebuild_labels(index));
}

TEST_CASE("increase maintenance on the fixture recomputes the expected entries")
{
    HierarchicalIndex index = fixture_index();
    MaintenanceReport rep = apply_batch(index, UpdateBatch::collect({{6, 3, 5, 0}}));
    REQUIRE(rep.edges_changed == 1);
    REQUIRE(rep.shortcuts_changed == 3);
    REQUIRE(index.labels.entry(6, 1) == 5);
    REQUIRE(index.labels.entry(0, 1) == 7);     // a tie through vertex 9 survives
    REQUIRE(index.labels.entry(3, 0) == 10);
    REQUIRE(all_labels(index.labels) == fixture::labels_after_increase());
    REQUIRE(index.labels == rebuild_labels(index));
    // recomputation may pop entries that keep their value
    REQUIRE(rep.labels_changed <= rep.popped);
}

TEST_CASE("updates that change no shortcut leave the labelling untouched")
{
    // the shortcut between 1 and 0 runs through vertex 2 at weight 2
    Graph g = support::make_graph(3, {{0, 1, 5}, {0, 2, 1}, {1, 2, 1}});
    std::vector<TreeNode> nodes(3);
    for (uint32_t i = 0; i < 3; i++) {
        nodes[i].members = {static_cast<NodeID>(i)};
        nodes[i].depth = static_cast<uint8_t>(i);
        nodes[i].parent = i == 0 ? NO_NODE : i - 1;
    }
    HierarchicalIndex index;
    index.graph = std::move(g);
    index.hq = QueryHierarchy::from_parts(3, std::move(nodes));
    index.hu = UpdateHierarchy::build(index.graph, index.hq);
    index.labels = Labelling::build(index.hq, index.hu);

    SECTION("harmless decrease") {
        MaintenanceReport rep = apply_batch(index, UpdateBatch::collect({{0, 1, 3, 0}}));
        REQUIRE(rep.shortcuts_changed == 0);
        REQUIRE(rep.labels_changed == 0);
        REQUIRE(index.labels == rebuild_labels(index));
    }
    SECTION("harmless increase") {
        MaintenanceReport rep = apply_batch(index, UpdateBatch::collect({{0, 1, 9, 0}}));
        REQUIRE(rep.shortcuts_changed == 0);
        REQUIRE(rep.labels_changed == 0);
        REQUIRE(index.labels == rebuild_labels(index));
    }
}

TEST_CASE("empty batch is a no-op")
{
    HierarchicalIndex index = fixture_index();
    std::vector<uint8_t> before = serialize_index(index);
    MaintenanceReport rep = apply_batch(index, UpdateBatch{});
    REQUIRE(rep.edges_changed == 0);
    REQUIRE(rep.labels_changed == 0);
    REQUIRE(rep.popped == 0);
    REQUIRE(serialize_index(index) == before);
}

TEST_CASE("batches touching nonexistent edges are rejected before mutation")
{
    HierarchicalIndex index = fixture_index();
    std::vector<uint8_t> before = serialize_index(index);
    UpdateBatch bad = UpdateBatch::collect({{6, 3, 1, 0}, {0, 9, 5, 0}});
    REQUIRE_THROWS_AS(apply_batch(index, bad), std::invalid_argument);
    REQUIRE(serialize_index(index) == before);
}

TEST_CASE("double then restore leaves the serialized index bit-identical")
{
    HierarchicalIndex index = fixture_index();
    std::vector<uint8_t> before = serialize_index(index);
    std::vector<WeightUpdate> doubled, restore;
    for (auto [u, v] : index.graph.edge_list()) {
        distance_t w = index.graph.edge_weight(u, v);
        doubled.push_back({u, v, 2 * w, 0});
        restore.push_back({u, v, w, 0});
    }
    apply_batch(index, UpdateBatch::collect(doubled));
    apply_batch(index, UpdateBatch::collect(restore));
    REQUIRE(serialize_index(index) == before);
}

TEST_CASE("maintained labelling equals a from-scratch rebuild")
{
    Rng rng(606);
    for (int round = 0; round < 20; round++) {
        size_t n = 5 + rng.next_below(46);
        Graph g = support::random_graph(rng, n);
        HierarchicalIndex index = HierarchicalIndex::build(std::move(g), {{0.2, 3}, 0, ""});
        for (int batch = 0; batch < 6; batch++) {
            UpdateBatch b = support::random_batch(rng, index.graph,
                1 + rng.next_below(8), true);
            apply_batch(index, b);
            INFO("round " << round << " batch " << batch);
            REQUIRE(index.labels == rebuild_labels(index));
        }
    }
}

TEST_CASE("parallel maintenance produces the sequential labelling for any worker count")
{
    Rng rng(707);
    for (int round = 0; round < 8; round++) {
        size_t n = 8 + rng.next_below(43);
        Graph g = support::random_graph(rng, n);
        HierarchicalIndex seq = HierarchicalIndex::build(std::move(g), {{0.2, 3}, 0, ""});
        HierarchicalIndex par1 = seq, par2 = seq, par8 = seq;
        for (int batch = 0; batch < 4; batch++) {
            UpdateBatch b = support::random_batch(rng, seq.graph, 1 + rng.next_below(8), true);
            apply_batch(seq, b, UpdateMode::sequential);
            apply_batch(par1, b, UpdateMode::parallel, 1);
            apply_batch(par2, b, UpdateMode::parallel, 2);
            apply_batch(par8, b, UpdateMode::parallel, 8);
            INFO("round " << round << " batch " << batch);
            REQUIRE(par1.labels == seq.labels);
            REQUIRE(par2.labels == seq.labels);
            REQUIRE(par8.labels == seq.labels);
            REQUIRE(support::same_shortcut_weights(par8.hu, seq.hu));
        }
        REQUIRE(seq.labels == rebuild_labels(seq));
    }
}

TEST_CASE("single-worker parallel run matches a column-serialized schedule")
{
    HierarchicalIndex a = fixture_index(), b = fixture_index();
    UpdateBatch batch = UpdateBatch::collect({{6, 3, 1, 0}});
    MaintenanceReport ra = apply_batch(a, batch, UpdateMode::parallel, 1);
    MaintenanceReport rb = apply_batch(b, batch, UpdateMode::parallel, 4);
    REQUIRE(a.labels == b.labels);
    REQUIRE(ra.popped == rb.popped);
    REQUIRE(ra.enqueued == rb.enqueued);
    REQUIRE(ra.labels_changed == rb.labels_changed);
}

TEST_CASE("report counters stay consistent")
{
    Rng rng(808);
    Graph g = support::random_connected_graph(rng, 40, 30);
    HierarchicalIndex index = HierarchicalIndex::build(std::move(g), {{0.2, 3}, 0, ""});
    for (int batch = 0; batch < 10; batch++) {
        UpdateBatch b = support::random_batch(rng, index.graph, 5, false);
        MaintenanceReport rep = apply_batch(index, b);
        REQUIRE(rep.labels_changed <= rep.popped + rep.enqueued);
        REQUIRE(rep.popped <= rep.enqueued);
    }
}

TEST_CASE("deleting and restoring an edge round-trips through infinity")
{
    HierarchicalIndex index = fixture_index();
    Labelling original = index.labels;
    apply_batch(index, UpdateBatch::collect({{3, 9, infinity, 0}}));
    REQUIRE(index.labels == rebuild_labels(index));
    REQUIRE(index.query(6, 9) == 9);    // reroutes over the longer path
    apply_batch(index, UpdateBatch::collect({{3, 9, 1, 0}}));
    REQUIRE(index.labels == original);
    REQUIRE(index.query(6, 9) == 4);
}
