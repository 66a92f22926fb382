#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "percolab/degree_sequence.hpp"
#include "percolab/matching.hpp"

namespace percolab {

// Contracted graph on tuples. Loops and parallel edges are allowed; the edge
// list order follows half-edge order of the matching it was built from. A
// full contraction keeps the percolation flag per edge; an open-only one
// drops closed edges and leaves edge_open empty.
struct MultiGraph {
    std::uint64_t vertex_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::uint8_t> edge_open;
    std::vector<std::uint32_t> half_edge_owner;

    std::uint64_t edge_count() const { return edges.size(); }
};

// Contract each tuple of the degree sequence to a vertex, one edge per
// matched pair. With open_only, closed pairs are dropped.
MultiGraph contract(const Matching& m, const DegreeSequence& deg, bool open_only);

// True iff no loops and no parallel edges.
bool is_simple(const MultiGraph& g);

// Simplicity of the contraction straight from a matching, without building
// the graph.
bool matching_simple(const Matching& m, const DegreeSequence& deg);

// Fresh percolation flags for the edges of a fixed graph.
std::vector<std::uint8_t> percolate_edges(const MultiGraph& g, double p, Rng& rng);

struct SimpleSample {
    Matching matching;   // retained so the caller can percolate it
    MultiGraph graph;
    int attempts = 0;
};

// Rejection-sample matchings until contraction is simple. Throws
// sampling_failure with the attempt count when max_retries is exhausted.
SimpleSample sample_simple_regular(std::uint64_t n, int d, Rng& rng, int max_retries = 1000);

// Deterministic d-regular graph: vertex i adjacent to i+-1, ..., i+-floor(d/2)
// (mod n), plus i+n/2 when d is odd.
MultiGraph circulant_regular(std::uint64_t n, int d);

}  // namespace percolab
