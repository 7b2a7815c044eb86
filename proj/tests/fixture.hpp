#pragma once

// 10-vertex road network with a hand-constructed separator tree. All
// expected values below (shortcut set, labels, maintenance effects) were
// derived by hand and double-checked against the oracles.
//
//   tree:        {2,3,9}
//            {0}         {1}
//          {4} {6}     {7} {5}
//                      {8}
//
// ranks: 2:0 3:1 9:2 0:3 1:3 4:4 5:4 6:4 7:4 8:5

#include "support.hpp"

#include <dhl/query_hierarchy.hpp>

namespace fixture {

using namespace dhl;

inline Graph graph()
{
    return support::make_graph(10, {
        {0, 4, 2}, {0, 6, 4}, {6, 3, 3}, {6, 2, 5}, {4, 9, 4}, {4, 3, 6},
        {3, 9, 1}, {5, 9, 4}, {5, 1, 2}, {1, 7, 1}, {7, 8, 3}, {8, 9, 2},
        {8, 3, 4},
    });
}

inline QueryHierarchy hierarchy()
{
    auto node = [](uint64_t bits, uint8_t depth, uint32_t parent,
                   std::vector<NodeID> members) {
        TreeNode n;
        n.bits = bits;
        n.depth = depth;
        n.parent = parent;
        n.members = std::move(members);
        return n;
    };
    std::vector<TreeNode> nodes;
    nodes.push_back(node(0, 0, NO_NODE, {2, 3, 9}));
    nodes.push_back(node(0b0, 1, 0, {0}));
    nodes.push_back(node(0b00, 2, 1, {4}));
    nodes.push_back(node(0b01, 2, 1, {6}));
    nodes.push_back(node(0b1, 1, 0, {1}));
    nodes.push_back(node(0b10, 2, 4, {7}));
    nodes.push_back(node(0b100, 3, 5, {8}));
    nodes.push_back(node(0b11, 2, 4, {5}));
    return QueryHierarchy::from_parts(10, std::move(nodes));
}

// (deeper endpoint, ancestor, weight), ascending
inline std::vector<std::tuple<NodeID,NodeID,distance_t>> expected_shortcuts()
{
    return {
        {0, 2, 9}, {0, 3, 7}, {0, 9, 6},
        {1, 3, 8}, {1, 9, 6},
        {3, 2, 8},
        {4, 0, 2}, {4, 3, 6}, {4, 9, 4},
        {5, 1, 2}, {5, 9, 4},
        {6, 0, 4}, {6, 2, 5}, {6, 3, 3},
        {7, 1, 1}, {7, 3, 7}, {7, 9, 5},
        {8, 3, 4}, {8, 7, 3}, {8, 9, 2},
        {9, 2, 15}, {9, 3, 1},
    };
}

// labels by vertex, positions 0..rank(v)
inline std::vector<std::vector<distance_t>> expected_labels()
{
    return {
        /*0*/ {9, 7, 6, 0},
        /*1*/ {15, 7, 6, 0},
        /*2*/ {0},
        /*3*/ {8, 0},
        /*4*/ {11, 5, 4, 2, 0},
        /*5*/ {13, 5, 4, 2, 0},
        /*6*/ {5, 3, 10, 4, 0},
        /*7*/ {14, 6, 5, 1, 0},
        /*8*/ {11, 3, 2, 4, 3, 0},
        /*9*/ {9, 1, 0},
    };
}

// after decreasing edge (6,3) from 3 to 1
inline std::vector<std::vector<distance_t>> labels_after_decrease()
{
    auto l = expected_labels();
    l[6][1] = 1;
    l[0][1] = 5;
    l[3][0] = 6;
    l[9][0] = 7;
    l[1][0] = 13;
    l[5][0] = 11;
    l[7][0] = 12;
    l[8][0] = 9;
    return l;
}

// after increasing edge (6,3) from 3 to 5
inline std::vector<std::vector<distance_t>> labels_after_increase()
{
    auto l = expected_labels();
    l[6][1] = 5;
    l[3][0] = 10;
    l[9][0] = 11;
    l[1][0] = 17;
    l[5][0] = 15;
    l[7][0] = 16;
    l[8][0] = 13;
    return l;
}

} // namespace fixture
