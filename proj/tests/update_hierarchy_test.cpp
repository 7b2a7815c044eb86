#include "fixture.hpp"
#include "support.hpp"

#include <dhl/oracle.hpp>
#include <dhl/update_hierarchy.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <map>

using namespace dhl;

namespace {

// chain hierarchy: vertex 0 on top, each vertex its own node
QueryHierarchy chain_hierarchy(size_t n)
{
    std::vector<TreeNode> nodes(n);
    for (uint32_t i = 0; i < n; i++) {
        nodes[i].members = {static_cast<NodeID>(i)};
        nodes[i].depth = static_cast<uint8_t>(i);
        nodes[i].parent = i == 0 ? NO_NODE : i - 1;
        nodes[i].bits = 0;
    }
    return QueryHierarchy::from_parts(n, std::move(nodes));
}

std::map<std::pair<NodeID,NodeID>, distance_t> shortcut_map(const UpdateHierarchy &hu)
{
    std::map<std::pair<NodeID,NodeID>, distance_t> m;
    for (NodeID v = 0; v < hu.vertex_count(); v++)
        for (size_t j = 0; j < hu.upward(v).size(); j++)
            m[{v, hu.upward(v)[j]}] = hu.upward_weights(v)[j];
    return m;
}

// applies updates to the graph and classifies them for the hierarchy passes
AppliedBatch apply(Graph &g, const std::vector<WeightUpdate> &raw)
{
    return apply_batch_weights(g, UpdateBatch::collect(raw));
}

} // namespace

TEST_CASE("path graph produces only its edges as shortcuts")
{
    Graph g = support::make_graph(3, {{0, 1, 2}, {1, 2, 3}});
    QueryHierarchy hq = QueryHierarchy::build(g, {0.2, 1});
    UpdateHierarchy hu = UpdateHierarchy::build(g, hq);
    REQUIRE(hu.shortcut_count() == 2);
    REQUIRE(hu.weight(0, 1) == 2);
    REQUIRE(hu.weight(2, 1) == 3);
    REQUIRE_FALSE(hu.weight(0, 2).has_value());    // endpoints are incomparable
}

TEST_CASE("contraction relaxes triangles")
{
    // chain order a=0, b=1, c=2; contracting c inserts nothing new but
    // lowers (1,0) through the two unit edges
    Graph g = support::make_graph(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}});
    UpdateHierarchy hu = UpdateHierarchy::build(g, chain_hierarchy(3));
    REQUIRE(hu.shortcut_count() == 3);
    REQUIRE(hu.weight(1, 0) == 1);
    REQUIRE(hu.weight(2, 0) == 1);
    REQUIRE(hu.weight(2, 1) == 1);

    Graph g2 = support::make_graph(3, {{0, 1, 5}, {0, 2, 1}, {1, 2, 1}});
    UpdateHierarchy hu2 = UpdateHierarchy::build(g2, chain_hierarchy(3));
    REQUIRE(hu2.weight(1, 0) == 2);    // valley route through vertex 2
}

TEST_CASE("fixture shortcut set and weights")
{
    Graph g = fixture::graph();
    UpdateHierarchy hu = UpdateHierarchy::build(g, fixture::hierarchy());
    std::map<std::pair<NodeID,NodeID>, distance_t> expect;
    for (auto [v, w, d] : fixture::expected_shortcuts())
        expect[{v, w}] = d;
    REQUIRE(shortcut_map(hu) == expect);
    REQUIRE(hu.weight(0, 3) == 7);
    REQUIRE(hu.downward(3) == std::vector<NodeID>{0, 1, 4, 6, 7, 8, 9});
    REQUIRE(hu.verify_weights(g).empty());
}

TEST_CASE("triangle closure holds after construction")
{
    Rng rng(5150);
    for (int round = 0; round < 10; round++) {
        size_t n = 5 + rng.next_below(40);
        Graph g = support::random_graph(rng, n);
        QueryHierarchy hq = QueryHierarchy::build(g, {0.2, 2});
        UpdateHierarchy hu = UpdateHierarchy::build(g, hq);
        for (NodeID v = 0; v < n; v++) {
            const auto &ups = hu.upward(v);
            for (size_t a = 0; a < ups.size(); a++)
                for (size_t b = a + 1; b < ups.size(); b++)
                    REQUIRE(hu.weight(ups[a], ups[b]).has_value());
        }
        // every edge is a shortcut, never heavier than the edge
        for (NodeID u = 0; u < n; u++)
            for (const Neighbor &nb : g.neighbors(u)) {
                auto w = hu.weight(u, nb.node);
                REQUIRE(w.has_value());
                REQUIRE(*w <= nb.distance);
            }
    }
}

TEST_CASE("shortcut set equals exhaustive valley-path enumeration")
{
    Rng rng(86);
    for (int round = 0; round < 30; round++) {
        size_t n = 2 + rng.next_below(11);
        Graph g = support::random_graph(rng, n, 1, 30);
        QueryHierarchy hq = QueryHierarchy::build(g, {0.25, 2});
        UpdateHierarchy hu = UpdateHierarchy::build(g, hq);
        auto enumerated = oracle::enumerate_valley_shortcuts(g, hq);
        std::map<std::pair<NodeID,NodeID>, distance_t> built = shortcut_map(hu);
        INFO("round " << round << ", n = " << n);
        REQUIRE(built.size() == enumerated.size());
        for (auto &[pair, w] : enumerated)
            REQUIRE(built.at(pair) == w);
    }
}

TEST_CASE("decrease maintenance on the fixture")
{
    Graph g = fixture::graph();
    UpdateHierarchy hu = UpdateHierarchy::build(g, fixture::hierarchy());
    AppliedBatch applied = apply(g, {{6, 3, 1, 0}});
    std::vector<ShortcutChange> delta = hu.apply_decreases(applied.decreases);

    std::map<std::pair<NodeID,NodeID>, distance_t> changed;
    for (const ShortcutChange &c : delta)
        changed[{c.v, c.w}] = c.weight;
    std::map<std::pair<NodeID,NodeID>, distance_t> expect{
        {{6, 3}, 1}, {{0, 3}, 5}, {{3, 2}, 6}};
    REQUIRE(changed == expect);
    REQUIRE(hu.weight(6, 3) == 1);
    REQUIRE(hu.weight(0, 3) == 5);
    REQUIRE(hu.weight(3, 2) == 6);
    REQUIRE(hu.verify_weights(g).empty());
}

TEST_CASE("increase maintenance on the fixture")
{
    Graph g = fixture::graph();
    UpdateHierarchy hu = UpdateHierarchy::build(g, fixture::hierarchy());
    AppliedBatch applied = apply(g, {{6, 3, 5, 0}});
    std::vector<ShortcutChange> delta = hu.apply_increases(g, applied.increases);

    std::map<std::pair<NodeID,NodeID>, distance_t> changed;
    for (const ShortcutChange &c : delta)
        changed[{c.v, c.w}] = c.weight;    // old weights
    std::map<std::pair<NodeID,NodeID>, distance_t> expect{
        {{6, 3}, 3}, {{0, 3}, 7}, {{3, 2}, 8}};
    REQUIRE(changed == expect);
    REQUIRE(hu.weight(6, 3) == 5);
    REQUIRE(hu.weight(0, 3) == 8);     // through vertex 4 now
    REQUIRE(hu.weight(3, 2) == 10);    // through vertex 6 at the new weight
    REQUIRE(hu.verify_weights(g).empty());
}

TEST_CASE("maintenance guards suppress non-changes")
{
    // shortcut (1,0) runs through vertex 2 at weight 2, below the direct edge
    Graph g = support::make_graph(3, {{0, 1, 5}, {0, 2, 1}, {1, 2, 1}});
    UpdateHierarchy hu = UpdateHierarchy::build(g, chain_hierarchy(3));
    REQUIRE(hu.weight(1, 0) == 2);
    SECTION("decrease down to the current shortcut weight changes nothing") {
        AppliedBatch applied = apply(g, {{0, 1, 2, 0}});
        REQUIRE(hu.apply_decreases(applied.decreases).empty());
        REQUIRE(hu.verify_weights(g).empty());
    }
    SECTION("increase of an edge with a better valley route changes nothing") {
        AppliedBatch applied = apply(g, {{0, 1, 7, 0}});
        REQUIRE(hu.apply_increases(g, applied.increases).empty());
        REQUIRE(hu.verify_weights(g).empty());
    }
}

TEST_CASE("maintained weights equal a from-scratch rebuild")
{
    Rng rng(2024);
    for (int round = 0; round < 25; round++) {
        size_t n = 5 + rng.next_below(46);
        Graph g = support::random_graph(rng, n);
        QueryHierarchy hq = QueryHierarchy::build(g, {0.2, 3});
        UpdateHierarchy hu = UpdateHierarchy::build(g, hq);
        uint64_t structure = hu.structure_hash();
        for (int batch = 0; batch < 5; batch++) {
            UpdateBatch b = support::random_batch(rng, g, 1 + rng.next_below(6), true);
            support::StagedBatch staged = support::classify_batch(g, b);
            support::apply_updates(g, staged.increases);
            hu.apply_increases(g, staged.increases);
            support::apply_updates(g, staged.decreases);
            hu.apply_decreases(staged.decreases);
            UpdateHierarchy fresh = UpdateHierarchy::build(g, hq);
            INFO("round " << round << " batch " << batch);
            REQUIRE(support::same_shortcut_weights(hu, fresh));
            REQUIRE(hu.structure_hash() == structure);    // structural stability
            REQUIRE(hu.verify_weights(g).empty());        // minimum weight property
        }
    }
}

TEST_CASE("affected shortcuts stay within the updated region")
{
    // bounded searching: every affected endpoint precedes-or-equals an
    // endpoint of some updated edge
    Rng rng(31337);
    for (int round = 0; round < 10; round++) {
        size_t n = 8 + rng.next_below(30);
        Graph g = support::random_connected_graph(rng, n, n / 2);
        QueryHierarchy hq = QueryHierarchy::build(g, {0.2, 2});
        UpdateHierarchy hu = UpdateHierarchy::build(g, hq);
        UpdateBatch b = support::random_batch(rng, g, 3, false);
        support::StagedBatch staged = support::classify_batch(g, b);
        auto check_region = [&](const std::vector<ShortcutChange> &delta,
                                const std::vector<WeightUpdate> &updates) {
            for (const ShortcutChange &c : delta)
                for (NodeID endpoint : {c.v, c.w}) {
                    bool covered = false;
                    for (const WeightUpdate &u : updates)
                        if (hq.is_ancestor(endpoint, u.u) || hq.is_ancestor(endpoint, u.v))
                            covered = true;
                    REQUIRE(covered);
                }
        };
        support::apply_updates(g, staged.increases);
        check_region(hu.apply_increases(g, staged.increases), staged.increases);
        support::apply_updates(g, staged.decreases);
        check_region(hu.apply_decreases(staged.decreases), staged.decreases);
    }
}

TEST_CASE("constant-time weight lookups answer absent for non-shortcuts")
{
    Graph g = fixture::graph();
    UpdateHierarchy hu = UpdateHierarchy::build(g, fixture::hierarchy());
    REQUIRE_FALSE(hu.weight(4, 6).has_value());    // incomparable
    REQUIRE_FALSE(hu.weight(5, 3).has_value());    // comparable but no valley path
    REQUIRE(hu.weight(9, 2) == 15);
}
