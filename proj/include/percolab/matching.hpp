#pragma once

#include <cstdint>
#include <vector>

#include "percolab/error.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// A perfect matching on half-edge indices 0..H-1 with a per-pair percolation
// flag. partner is a fixed-point-free involution; the open flag is shared by
// both endpoints of a pair.
struct Matching {
    std::vector<std::uint32_t> partner;
    std::vector<std::uint8_t> open;  // indexed by half-edge, symmetric across a pair

    std::uint64_t half_edge_count() const { return partner.size(); }
    bool pair_open(std::uint64_t h) const { return open[h] != 0; }
};

// Uniform perfect matching on an even number of half-edges. Pairs are drawn
// sequentially: lowest unmatched index gets a uniform partner from the
// remaining pool. All open flags start unset.
Matching sample_matching(std::uint64_t half_edge_count, Rng& rng);

// Set each pair's open flag independently with probability p. Partner map is
// untouched.
void percolate(Matching& m, double p, Rng& rng);

}  // namespace percolab
