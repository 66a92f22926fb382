#pragma once

#include <cstdint>
#include <vector>

#include "percolab/multigraph.hpp"

namespace percolab {

// Exact component decomposition. Component ids are assigned by decreasing
// size, ties broken by the smallest member vertex id.
struct ComponentSummary {
    std::vector<std::uint64_t> sizes;       // non-increasing
    std::vector<std::uint32_t> membership;  // vertex -> component id
};

ComponentSummary union_find_components(const MultiGraph& g);

// Same, with externally supplied open flags (for repeated percolation of a
// fixed graph).
ComponentSummary union_find_components(const MultiGraph& g, const std::vector<std::uint8_t>& edge_open);

// Count tuples outside the given component by their number of closed edges
// into it: result[k] = number of k-damaged outside tuples. g must carry
// per-edge open flags (a full contraction, not open-only).
std::vector<std::uint64_t> damage_counts(const MultiGraph& g, const ComponentSummary& summary,
                                         std::uint32_t component_id);

struct DiameterResult {
    std::uint64_t value = 0;
    bool exact = true;  // false: double-sweep lower bound
};

// Exact diameter (BFS from every member) when the component has at most
// exact_cap vertices, otherwise a double-sweep lower bound.
DiameterResult bfs_diameter(const MultiGraph& g, const ComponentSummary& summary,
                            std::uint32_t component_id, std::uint64_t exact_cap = 5000);

}  // namespace percolab
