#include "percolab/multigraph.hpp"

#include <algorithm>

namespace percolab {

MultiGraph contract(const Matching& m, const DegreeSequence& deg, bool open_only) {
    if (m.half_edge_count() != deg.half_edge_count())
        throw Error(ErrorCode::invalid_input, "matching size does not match degree sequence");

    MultiGraph g;
    g.vertex_count = deg.tuple_count();
    g.half_edge_owner.resize(m.half_edge_count());
    for (std::uint64_t h = 0; h < m.half_edge_count(); ++h)
        g.half_edge_owner[h] = static_cast<std::uint32_t>(deg.owner(h));

    g.edges.reserve(m.half_edge_count() / 2);
    if (!open_only) g.edge_open.reserve(m.half_edge_count() / 2);
    for (std::uint64_t h = 0; h < m.half_edge_count(); ++h) {
        std::uint64_t q = m.partner[h];
        if (q <= h) continue;
        if (open_only && !m.pair_open(h)) continue;
        g.edges.emplace_back(g.half_edge_owner[h], g.half_edge_owner[q]);
        if (!open_only) g.edge_open.push_back(m.open[h]);
    }
    return g;
}

namespace {

bool keys_simple(std::vector<std::uint64_t>& keys) {
    std::sort(keys.begin(), keys.end());
    return std::adjacent_find(keys.begin(), keys.end()) == keys.end();
}

}  // namespace

bool is_simple(const MultiGraph& g) {
    std::vector<std::uint64_t> keys;
    keys.reserve(g.edges.size());
    for (const auto& [u, v] : g.edges) {
        if (u == v) return false;  // loop
        std::uint64_t a = std::min(u, v), b = std::max(u, v);
        keys.push_back((a << 32) | b);
    }
    return keys_simple(keys);
}

bool matching_simple(const Matching& m, const DegreeSequence& deg) {
    if (m.half_edge_count() != deg.half_edge_count())
        throw Error(ErrorCode::invalid_input, "matching size does not match degree sequence");
    std::vector<std::uint64_t> keys;
    keys.reserve(m.half_edge_count() / 2);
    for (std::uint64_t h = 0; h < m.half_edge_count(); ++h) {
        std::uint64_t q = m.partner[h];
        if (q <= h) continue;
        std::uint64_t a = deg.owner(h), b = deg.owner(q);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        keys.push_back((a << 32) | b);
    }
    return keys_simple(keys);
}

std::vector<std::uint8_t> percolate_edges(const MultiGraph& g, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::invalid_input, "p must lie in [0, 1]");
    std::vector<std::uint8_t> open(g.edges.size());
    for (auto& flag : open) flag = bernoulli(rng, p) ? 1 : 0;
    return open;
}

SimpleSample sample_simple_regular(std::uint64_t n, int d, Rng& rng, int max_retries) {
    if (d < 3) throw Error(ErrorCode::invalid_input, "d must be >= 3");
    if (n * static_cast<std::uint64_t>(d) % 2 != 0)
        throw Error(ErrorCode::invalid_input, "n*d must be even");

    DegreeSequence deg = DegreeSequence::regular(n, d);
    for (int attempt = 1; attempt <= max_retries; ++attempt) {
        Matching m = sample_matching(deg.half_edge_count(), rng);
        MultiGraph g = contract(m, deg, /*open_only=*/false);
        if (is_simple(g)) return SimpleSample{std::move(m), std::move(g), attempt};
    }
    throw Error(ErrorCode::sampling_failure,
                "no simple graph after " + std::to_string(max_retries) + " attempts");
}

MultiGraph circulant_regular(std::uint64_t n, int d) {
    if (d < 1 || static_cast<std::uint64_t>(d) >= n)
        throw Error(ErrorCode::invalid_input, "circulant needs 1 <= d < n");
    if (n * static_cast<std::uint64_t>(d) % 2 != 0)
        throw Error(ErrorCode::invalid_input, "n*d must be even");

    MultiGraph g;
    g.vertex_count = n;
    g.edges.reserve(n * static_cast<std::uint64_t>(d) / 2);
    for (std::uint64_t i = 0; i < n; ++i) {
        for (int j = 1; j <= d / 2; ++j)
            g.edges.emplace_back(static_cast<std::uint32_t>(i),
                                 static_cast<std::uint32_t>((i + j) % n));
        if (d % 2 == 1 && i < n / 2)
            g.edges.emplace_back(static_cast<std::uint32_t>(i),
                                 static_cast<std::uint32_t>(i + n / 2));
    }
    return g;
}

}  // namespace percolab
