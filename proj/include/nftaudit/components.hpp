#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "nftaudit/graph.hpp"

namespace nftaudit {

// Partition of graph nodes into components. Component ids are canonical:
// ordered by smallest member node id (callers working over accounts can
// reorder by address, see reorder_by_account). Excluded nodes carry npos.
struct ComponentIndex {
    static constexpr uint32_t npos = UINT32_MAX;

    std::vector<uint32_t> comp_of_node;
    std::vector<std::vector<uint32_t>> members; // each sorted ascending

    bool same_component(uint32_t a, uint32_t b) const {
        return comp_of_node[a] != npos && comp_of_node[a] == comp_of_node[b];
    }
    size_t size_of(uint32_t node) const {
        uint32_t c = comp_of_node[node];
        return c == npos ? 0 : members[c].size();
    }
};

namespace detail {

// Accepts arbitrary (possibly sparse) labels; npos marks excluded nodes.
inline ComponentIndex make_component_index(uint32_t n, const std::vector<uint32_t>& raw) {
    std::unordered_map<uint32_t, uint32_t> dense;
    uint32_t ncomp = 0;
    for (uint32_t v = 0; v < n; ++v)
        if (raw[v] != ComponentIndex::npos && dense.emplace(raw[v], ncomp).second) ++ncomp;

    std::vector<std::vector<uint32_t>> groups(ncomp);
    for (uint32_t v = 0; v < n; ++v)
        if (raw[v] != ComponentIndex::npos) groups[dense[raw[v]]].push_back(v); // stays sorted

    std::vector<uint32_t> order(ncomp);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return groups[a][0] < groups[b][0]; });

    ComponentIndex out;
    out.comp_of_node.assign(n, ComponentIndex::npos);
    out.members.reserve(ncomp);
    for (uint32_t rank = 0; rank < ncomp; ++rank) {
        auto& g = groups[order[rank]];
        for (uint32_t v : g) out.comp_of_node[v] = rank;
        out.members.push_back(std::move(g));
    }
    return out;
}

struct Dsu {
    std::vector<uint32_t> parent, size;

    explicit Dsu(uint32_t n) : parent(n), size(n, 1) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    uint32_t find(uint32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
    void unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

} // namespace detail

// Strongly connected components, Tarjan with an explicit stack.
inline ComponentIndex scc(const Digraph& g) {
    const uint32_t n = g.node_count;
    const uint32_t unset = ComponentIndex::npos;
    Adjacency adj = Adjacency::build(g, /*undirected=*/false);

    std::vector<uint32_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<uint8_t> on_stack(n, 0);
    std::vector<uint32_t> stack;
    struct Frame {
        uint32_t v, ei;
    };
    std::vector<Frame> frames;
    uint32_t counter = 0, ncomp = 0;

    for (uint32_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        frames.push_back({root, 0});
        while (!frames.empty()) {
            Frame& f = frames.back();
            uint32_t v = f.v;
            if (f.ei == 0) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (f.ei < adj.degree(v)) {
                uint32_t w = adj.target(v, f.ei++);
                if (index[w] == unset) {
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                while (true) {
                    uint32_t w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = ncomp;
                    if (w == v) break;
                }
                ++ncomp;
            }
            frames.pop_back();
            if (!frames.empty()) {
                Frame& parent = frames.back();
                low[parent.v] = std::min(low[parent.v], low[v]);
            }
        }
    }
    return detail::make_component_index(n, comp);
}

// Weakly connected components via union-find. Isolated nodes form singletons.
inline ComponentIndex wcc(const Digraph& g) {
    detail::Dsu dsu(g.node_count);
    for (auto [s, d] : g.edges) dsu.unite(s, d);
    std::vector<uint32_t> comp(g.node_count);
    for (uint32_t v = 0; v < g.node_count; ++v) comp[v] = dsu.find(v);
    return detail::make_component_index(g.node_count, comp);
}

struct HubExclusionResult {
    ComponentIndex components;       // hubs carry ComponentIndex::npos
    std::vector<uint32_t> excluded;  // hub node ids, ascending
};

// Weak components after dropping nodes whose distinct-neighbor count exceeds
// the cutoff. Exchange-style hot wallets touch thousands of counterparties
// and would otherwise glue unrelated users into one giant component.
inline HubExclusionResult wcc_excluding_hubs(const Digraph& g, uint32_t max_distinct_neighbors) {
    const uint32_t n = g.node_count;
    std::vector<std::pair<uint32_t, uint32_t>> und;
    und.reserve(g.edges.size());
    for (auto [s, d] : g.edges)
        if (s != d) und.emplace_back(std::min(s, d), std::max(s, d));
    std::sort(und.begin(), und.end());
    und.erase(std::unique(und.begin(), und.end()), und.end());

    std::vector<uint32_t> neighbor_count(n, 0);
    for (auto [a, b] : und) {
        ++neighbor_count[a];
        ++neighbor_count[b];
    }

    HubExclusionResult out;
    std::vector<uint8_t> is_hub(n, 0);
    for (uint32_t v = 0; v < n; ++v) {
        if (neighbor_count[v] > max_distinct_neighbors) {
            is_hub[v] = 1;
            out.excluded.push_back(v);
        }
    }

    detail::Dsu dsu(n);
    for (auto [s, d] : g.edges)
        if (!is_hub[s] && !is_hub[d]) dsu.unite(s, d);
    std::vector<uint32_t> comp(n);
    for (uint32_t v = 0; v < n; ++v)
        comp[v] = is_hub[v] ? ComponentIndex::npos : dsu.find(v);
    out.components = detail::make_component_index(n, comp);
    return out;
}

// Renumbers components so ids follow the smallest member account address.
inline void reorder_by_account(ComponentIndex& idx, const std::vector<AccountId>& nodes) {
    const uint32_t ncomp = uint32_t(idx.members.size());
    std::vector<uint32_t> order(ncomp);
    std::iota(order.begin(), order.end(), 0);
    auto min_addr = [&](uint32_t c) -> const AccountId& {
        const AccountId* best = &nodes[idx.members[c][0]];
        for (uint32_t v : idx.members[c])
            if (nodes[v] < *best) best = &nodes[v];
        return *best;
    };
    std::sort(order.begin(), order.end(),
              [&](uint32_t a, uint32_t b) { return min_addr(a) < min_addr(b); });

    std::vector<std::vector<uint32_t>> members(ncomp);
    std::vector<uint32_t> rank(ncomp);
    for (uint32_t r = 0; r < ncomp; ++r) {
        rank[order[r]] = r;
        members[r] = std::move(idx.members[order[r]]);
    }
    for (auto& c : idx.comp_of_node)
        if (c != ComponentIndex::npos) c = rank[c];
    idx.members = std::move(members);
}

} // namespace nftaudit
