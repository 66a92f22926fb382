#include "percolab/components.hpp"

#include <algorithm>
#include <numeric>

#include "percolab/error.hpp"

namespace percolab {

namespace {

struct DisjointSet {
    std::vector<std::uint32_t> parent;
    std::vector<std::uint32_t> rank;

    explicit DisjointSet(std::uint64_t n) : parent(n), rank(n, 0) {
        std::iota(parent.begin(), parent.end(), 0u);
    }

    std::uint32_t find(std::uint32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) ++rank[a];
    }
};

// Adjacency in CSR form over the open edges of a full graph, or all edges of
// an open-only graph.
struct Csr {
    std::vector<std::uint64_t> offsets;
    std::vector<std::uint32_t> neighbors;
};

Csr build_adjacency(const MultiGraph& g) {
    Csr csr;
    csr.offsets.assign(g.vertex_count + 1, 0);
    auto edge_is_present = [&](std::size_t e) {
        return g.edge_open.empty() || g.edge_open[e] != 0;
    };
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (!edge_is_present(e)) continue;
        ++csr.offsets[g.edges[e].first + 1];
        ++csr.offsets[g.edges[e].second + 1];
    }
    for (std::size_t v = 1; v <= g.vertex_count; ++v) csr.offsets[v] += csr.offsets[v - 1];
    csr.neighbors.resize(csr.offsets.back());
    std::vector<std::uint64_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (!edge_is_present(e)) continue;
        auto [u, v] = g.edges[e];
        csr.neighbors[cursor[u]++] = v;
        csr.neighbors[cursor[v]++] = u;
    }
    return csr;
}

}  // namespace

namespace {

ComponentSummary components_from_edges(const MultiGraph& g, const std::vector<std::uint8_t>* edge_open) {
    DisjointSet dsu(g.vertex_count);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (edge_open && !edge_open->empty() && (*edge_open)[e] == 0) continue;
        dsu.unite(g.edges[e].first, g.edges[e].second);
    }

    std::vector<std::uint32_t> root(g.vertex_count);
    std::vector<std::uint64_t> size_of_root(g.vertex_count, 0);
    std::vector<std::uint32_t> min_member(g.vertex_count, 0);
    for (std::uint32_t v = 0; v < g.vertex_count; ++v) {
        root[v] = dsu.find(v);
        if (size_of_root[root[v]] == 0) min_member[root[v]] = v;  // first hit is the smallest id
        ++size_of_root[root[v]];
    }

    std::vector<std::uint32_t> roots;
    for (std::uint32_t v = 0; v < g.vertex_count; ++v)
        if (root[v] == v) roots.push_back(v);
    std::sort(roots.begin(), roots.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (size_of_root[a] != size_of_root[b]) return size_of_root[a] > size_of_root[b];
        return min_member[a] < min_member[b];
    });

    ComponentSummary summary;
    summary.sizes.reserve(roots.size());
    std::vector<std::uint32_t> id_of_root(g.vertex_count, 0);
    for (std::uint32_t i = 0; i < roots.size(); ++i) {
        id_of_root[roots[i]] = i;
        summary.sizes.push_back(size_of_root[roots[i]]);
    }
    summary.membership.resize(g.vertex_count);
    for (std::uint32_t v = 0; v < g.vertex_count; ++v) summary.membership[v] = id_of_root[root[v]];
    return summary;
}

}  // namespace

ComponentSummary union_find_components(const MultiGraph& g) {
    return components_from_edges(g, &g.edge_open);
}

ComponentSummary union_find_components(const MultiGraph& g, const std::vector<std::uint8_t>& edge_open) {
    if (edge_open.size() != g.edges.size())
        throw Error(ErrorCode::invalid_input, "edge_open size does not match the edge list");
    return components_from_edges(g, &edge_open);
}

std::vector<std::uint64_t> damage_counts(const MultiGraph& g, const ComponentSummary& summary,
                                         std::uint32_t component_id) {
    if (component_id >= summary.sizes.size())
        throw Error(ErrorCode::invalid_input, "unknown component id");
    if (g.edge_open.size() != g.edges.size())
        throw Error(ErrorCode::invalid_input, "damage counts need a full contraction with open flags");

    std::vector<std::uint32_t> closed_into(g.vertex_count, 0);
    std::vector<std::uint32_t> touched;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (g.edge_open[e] != 0) continue;
        auto [a, b] = g.edges[e];
        const bool a_in = summary.membership[a] == component_id;
        const bool b_in = summary.membership[b] == component_id;
        if (a_in == b_in) continue;
        std::uint32_t outside = a_in ? b : a;
        if (closed_into[outside]++ == 0) touched.push_back(outside);
    }

    std::uint32_t max_k = 0;
    for (std::uint32_t v : touched) max_k = std::max(max_k, closed_into[v]);
    std::vector<std::uint64_t> counts(max_k + 1, 0);
    for (std::uint32_t v : touched) ++counts[closed_into[v]];
    return counts;
}

DiameterResult bfs_diameter(const MultiGraph& g, const ComponentSummary& summary,
                            std::uint32_t component_id, std::uint64_t exact_cap) {
    if (component_id >= summary.sizes.size())
        throw Error(ErrorCode::invalid_input, "unknown component id");

    Csr csr = build_adjacency(g);
    std::vector<std::uint32_t> members;
    for (std::uint32_t v = 0; v < g.vertex_count; ++v)
        if (summary.membership[v] == component_id) members.push_back(v);

    std::vector<std::int64_t> dist(g.vertex_count, -1);
    std::vector<std::uint32_t> queue;
    queue.reserve(members.size());
    auto bfs = [&](std::uint32_t source) -> std::pair<std::uint64_t, std::uint32_t> {
        for (std::uint32_t m : members) dist[m] = -1;
        queue.clear();
        queue.push_back(source);
        dist[source] = 0;
        std::uint64_t best = 0;
        std::uint32_t far = source;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            std::uint32_t v = queue[head];
            for (std::uint64_t i = csr.offsets[v]; i < csr.offsets[v + 1]; ++i) {
                std::uint32_t u = csr.neighbors[i];
                if (dist[u] >= 0) continue;
                dist[u] = dist[v] + 1;
                if (static_cast<std::uint64_t>(dist[u]) > best) {
                    best = dist[u];
                    far = u;
                }
                queue.push_back(u);
            }
        }
        return {best, far};
    };

    DiameterResult result;
    if (members.size() <= exact_cap) {
        for (std::uint32_t m : members) result.value = std::max(result.value, bfs(m).first);
        result.exact = true;
    } else {
        auto [d1, far] = bfs(members.front());
        auto [d2, far2] = bfs(far);
        (void)far2;
        result.value = std::max(d1, d2);
        result.exact = false;
    }
    return result;
}

}  // namespace percolab
