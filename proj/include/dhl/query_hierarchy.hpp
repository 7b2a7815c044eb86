#pragma once

#include "graph.hpp"
#include "partition.hpp"

#include <bit>
#include <cassert>
#include <span>
#include <string>
#include <vector>

namespace dhl {

struct HierarchyOptions {
    double beta = 0.2;      // balance parameter, in (0, 0.5]
    uint32_t leaf_size = 16;    // subgraphs at most this size become one node
};

// node of the balanced separator tree; bits encode the root path
// (left = 0, right = 1), packed into a word with the recorded depth
struct TreeNode {
    uint64_t bits = 0;
    uint8_t depth = 0;
    uint32_t parent = NO_NODE;
    uint32_t child[2] = {NO_NODE, NO_NODE};
    uint32_t base = 0;              // vertices assigned to strict ancestors
    std::vector<NodeID> members;    // separator vertices, ascending ID
};

// Balanced binary separator tree over the graph. Induces the vertex partial
// order: u precedes v iff u's node is a strict ancestor of v's node, or both
// share a node and u comes first in member order. rank(v) counts the strict
// predecessors of v and doubles as v's label length minus one.
class QueryHierarchy {
public:
    struct Placement {
        uint32_t node = 0;
        uint32_t position = 0;
        uint32_t rank = 0;
    };

private:
    std::vector<TreeNode> nodes_;
    std::vector<Placement> place_;

public:
    QueryHierarchy() = default;

    size_t node_count() const { return nodes_.size(); }
    size_t vertex_count() const { return place_.size(); }
    const TreeNode& node(uint32_t id) const { return nodes_[id]; }
    const Placement& placement(NodeID v) const { return place_[v]; }

    uint32_t rank(NodeID v) const { return place_[v].rank; }
    uint32_t label_length(NodeID v) const { return place_[v].rank + 1; }

    // paths can be 64 bits long, so a shift by the full width must be legal
    static uint64_t drop_low_bits(uint64_t bits, uint8_t count)
    {
        return count >= 64 ? 0 : bits >> count;
    }

    // u precedes-or-equals v in the vertex partial order
    bool is_ancestor(NodeID u, NodeID v) const
    {
        const Placement &pu = place_[u], &pv = place_[v];
        if (pu.node == pv.node)
            return pu.position <= pv.position;
        const TreeNode &nu = nodes_[pu.node], &nv = nodes_[pv.node];
        return nu.depth < nv.depth && drop_low_bits(nv.bits, nv.depth - nu.depth) == nu.bits;
    }

    // number of common ancestors of s and t; the common ancestors are
    // exactly the vertices at label positions [0, k) of both s and t
    uint32_t common_ancestor_count(NodeID s, NodeID t) const
    {
        const Placement &ps = place_[s], &pt = place_[t];
        const TreeNode &ns = nodes_[ps.node], &nt = nodes_[pt.node];
        uint8_t m = std::min(ns.depth, nt.depth);
        uint64_t diff = drop_low_bits(ns.bits, ns.depth - m) ^ drop_low_bits(nt.bits, nt.depth - m);
        uint8_t prefix = m - static_cast<uint8_t>(std::bit_width(diff));
        uint32_t a = ns.depth <= nt.depth ? ps.node : pt.node;
        while (nodes_[a].depth > prefix)
            a = nodes_[a].parent;
        uint32_t below_a = nodes_[a].base + static_cast<uint32_t>(nodes_[a].members.size());
        return std::min({ps.rank + 1, pt.rank + 1, below_a});
    }

    // the unique ancestor u of v with rank(u) == i
    NodeID ancestor_at(NodeID v, uint32_t i) const
    {
        assert(i <= place_[v].rank);
        uint32_t n = place_[v].node;
        while (nodes_[n].base > i)
            n = nodes_[n].parent;
        return nodes_[n].members[i - nodes_[n].base];
    }

    // all ancestors of v, by ascending rank
    std::vector<NodeID> ancestors(NodeID v) const
    {
        std::vector<NodeID> anc(place_[v].rank + 1);
        for (uint32_t i = 0; i <= place_[v].rank; i++)
            anc[i] = ancestor_at(v, i);
        return anc;
    }

    uint8_t tree_depth() const
    {
        uint8_t d = 0;
        for (const TreeNode &n : nodes_)
            d = std::max(d, n.depth);
        return d;
    }

    static QueryHierarchy build(const Graph &g, const HierarchyOptions &opt = {})
    {
        if (opt.beta <= 0.0 || opt.beta > 0.5)
            throw std::invalid_argument("balance parameter must be in (0, 0.5]");
        if (g.node_count() == 0)
            throw std::invalid_argument("cannot build hierarchy of empty graph");
        const uint32_t leaf_size = std::max(1u, opt.leaf_size);
        QueryHierarchy hq;
        hq.place_.resize(g.node_count());
        Partitioner part(g);

        struct Task {
            std::vector<NodeID> vertices;
            uint32_t parent;
            uint8_t side;
        };
        std::vector<Task> pending;
        std::vector<NodeID> all(g.node_count());
        for (NodeID v = 0; v < g.node_count(); v++)
            all[v] = v;
        pending.push_back({std::move(all), NO_NODE, 0});

        while (!pending.empty()) {
            Task task = std::move(pending.back());
            pending.pop_back();
            uint32_t id = static_cast<uint32_t>(hq.nodes_.size());
            hq.nodes_.emplace_back();
            TreeNode &node = hq.nodes_.back();
            node.parent = task.parent;
            if (task.parent != NO_NODE) {
                TreeNode &par = hq.nodes_[task.parent];
                par.child[task.side] = id;
                if (par.depth >= 64)
                    throw std::runtime_error("separator tree exceeds depth 64");
                node.depth = par.depth + 1;
                node.bits = (par.bits << 1) | task.side;
                node.base = par.base + static_cast<uint32_t>(par.members.size());
            }
            std::vector<NodeID> left, right;
            if (task.vertices.size() <= leaf_size) {
                node.members = std::move(task.vertices);
                std::sort(node.members.begin(), node.members.end());
            } else {
                Partition p = part.partition(task.vertices, opt.beta);
                node.members = std::move(p.cut);
                left = std::move(p.left);
                right = std::move(p.right);
            }
            for (uint32_t pos = 0; pos < node.members.size(); pos++)
                hq.place_[node.members[pos]] =
                    Placement{id, pos, node.base + pos};
            // push right first so the left child gets the next node ID
            if (!right.empty())
                pending.push_back({std::move(right), id, 1});
            if (!left.empty())
                pending.push_back({std::move(left), id, 0});
        }
        return hq;
    }

    // assemble from explicit node rows (deserialization and fixtures);
    // parents must precede children
    static QueryHierarchy from_parts(size_t vertex_count, std::vector<TreeNode> nodes)
    {
        QueryHierarchy hq;
        hq.nodes_ = std::move(nodes);
        hq.place_.resize(vertex_count);
        std::vector<uint8_t> placed(vertex_count, 0);
        for (uint32_t id = 0; id < hq.nodes_.size(); id++) {
            TreeNode &node = hq.nodes_[id];
            node.child[0] = node.child[1] = NO_NODE;
            if (node.members.empty())
                throw data_error("hierarchy node without members");
            if (node.parent == NO_NODE) {
                if (id != 0)
                    throw data_error("non-root hierarchy node without parent");
                node.base = 0;
                node.depth = 0;
                node.bits = 0;
            } else {
                if (node.parent >= id)
                    throw data_error("hierarchy parent does not precede child");
                TreeNode &par = hq.nodes_[node.parent];
                uint8_t side = static_cast<uint8_t>(node.bits & 1);
                if (par.child[side] != NO_NODE)
                    throw data_error("duplicate hierarchy child");
                par.child[side] = id;
                if (node.depth != par.depth + 1 || (node.bits >> 1) != par.bits)
                    throw data_error("hierarchy bitstring mismatch");
                if (node.depth > 64)
                    throw data_error("hierarchy deeper than 64 levels");
                node.base = par.base + static_cast<uint32_t>(par.members.size());
            }
            for (uint32_t pos = 0; pos < node.members.size(); pos++) {
                NodeID v = node.members[pos];
                if (v >= vertex_count || placed[v])
                    throw data_error("hierarchy member out of range or duplicated");
                placed[v] = 1;
                hq.place_[v] = Placement{id, pos, node.base + pos};
            }
        }
        for (uint8_t p : placed)
            if (!p)
                throw data_error("hierarchy does not cover all vertices");
        return hq;
    }

    // structural sanity scan; returns human-readable violations
    std::vector<std::string> check_structure(const Graph &g, double beta) const
    {
        std::vector<std::string> issues;
        std::vector<size_t> subtree(nodes_.size(), 0);
        for (uint32_t id = static_cast<uint32_t>(nodes_.size()); id-- > 0;) {
            subtree[id] += nodes_[id].members.size();
            if (nodes_[id].members.empty())
                issues.push_back("node " + std::to_string(id) + " has no members");
            if (nodes_[id].parent != NO_NODE)
                subtree[nodes_[id].parent] += subtree[id];
        }
        for (uint32_t id = 0; id < nodes_.size(); id++) {
            const TreeNode &n = nodes_[id];
            size_t bound = static_cast<size_t>(std::floor((1.0 - beta) * subtree[id]));
            for (int side = 0; side < 2; side++)
                if (n.child[side] != NO_NODE && subtree[n.child[side]] > bound)
                    issues.push_back("balance bound violated at node " + std::to_string(id));
        }
        for (NodeID u = 0; u < g.node_count(); u++)
            for (const Neighbor &nb : g.neighbors(u))
                if (u < nb.node && !is_ancestor(u, nb.node) && !is_ancestor(nb.node, u))
                    issues.push_back("edge (" + std::to_string(u) + "," +
                        std::to_string(nb.node) + ") joins incomparable vertices");
        for (NodeID v = 0; v < g.node_count(); v++) {
            const Placement &p = place_[v];
            if (nodes_[p.node].members[p.position] != v)
                issues.push_back("placement mismatch for vertex " + std::to_string(v));
            if (p.rank != nodes_[p.node].base + p.position)
                issues.push_back("rank mismatch for vertex " + std::to_string(v));
        }
        return issues;
    }
};

} // namespace dhl
