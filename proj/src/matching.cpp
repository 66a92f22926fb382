#include "percolab/matching.hpp"

#include <numeric>

namespace percolab {

Matching sample_matching(std::uint64_t half_edge_count, Rng& rng) {
    if (half_edge_count == 0 || half_edge_count % 2 != 0)
        throw Error(ErrorCode::invalid_input, "half_edge_count must be even and positive");

    Matching m;
    m.partner.resize(half_edge_count);
    m.open.assign(half_edge_count, 0);

    // pool of unmatched half-edges, kept in index order so the lowest
    // unmatched one is always at the front
    std::vector<std::uint32_t> pool(half_edge_count);
    std::iota(pool.begin(), pool.end(), 0u);
    std::vector<std::uint32_t> pos(half_edge_count);
    std::iota(pos.begin(), pos.end(), 0u);

    std::uint64_t live = half_edge_count;
    auto remove_at = [&](std::uint64_t idx) {
        std::uint32_t last = pool[live - 1];
        pool[idx] = last;
        pos[last] = static_cast<std::uint32_t>(idx);
        --live;
    };

    // The front of the pool is not the lowest index once swaps happen, so
    // track the lowest unmatched explicitly.
    std::uint64_t next = 0;
    std::vector<std::uint8_t> matched(half_edge_count, 0);
    while (live > 0) {
        while (matched[next]) ++next;
        std::uint32_t a = static_cast<std::uint32_t>(next);
        remove_at(pos[a]);
        std::uint32_t b = pool[uniform_below(rng, live)];
        remove_at(pos[b]);
        m.partner[a] = b;
        m.partner[b] = a;
        matched[a] = matched[b] = 1;
    }
    return m;
}

void percolate(Matching& m, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::invalid_input, "p must lie in [0, 1]");
    for (std::uint64_t h = 0; h < m.partner.size(); ++h) {
        if (m.partner[h] > h) {
            std::uint8_t flag = bernoulli(rng, p) ? 1 : 0;
            m.open[h] = flag;
            m.open[m.partner[h]] = flag;
        }
    }
}

}  // namespace percolab
