#pragma once

// Small independent oracles shared by the unit suites.

#include <gtest/gtest.h>

#include <functional>
#include <queue>

#include <pathdec/testbed.hpp>

namespace support {

using namespace pathdec;

inline MultiGraph complete_bipartite(std::uint32_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> es;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) es.push_back({i, n + j});
    return new_bipartite(n, n, es);
}

inline Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return Errc::InvariantBroken;
}

// Edmonds-Karp on a dense capacity matrix, by vertex index.
inline std::size_t matrix_flow(const MultiGraph& g, std::uint32_t s, std::uint32_t t) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<int>> cap(n, std::vector<int>(n, 0));
    for (std::uint32_t ei = 0; ei < g.edge_count(); ++ei) {
        ++cap[g.tail_at(ei)][g.head_at(ei)];
        ++cap[g.head_at(ei)][g.tail_at(ei)];
    }
    std::size_t flow = 0;
    while (true) {
        std::vector<int> prev(n, -1);
        prev[s] = int(s);
        std::queue<std::uint32_t> q;
        q.push(s);
        while (!q.empty() && prev[t] < 0) {
            auto x = q.front();
            q.pop();
            for (std::uint32_t y = 0; y < n; ++y)
                if (prev[y] < 0 && cap[x][y] > 0) {
                    prev[y] = int(x);
                    q.push(y);
                }
        }
        if (prev[t] < 0) return flow;
        for (std::uint32_t y = t; y != s; y = std::uint32_t(prev[y])) {
            --cap[prev[y]][y];
            ++cap[y][prev[y]];
        }
        ++flow;
    }
}

inline std::size_t matrix_connectivity(const MultiGraph& g) {
    if (g.vertex_count() < 2) return 0;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::uint32_t y = 1; y < g.vertex_count(); ++y) best = std::min(best, matrix_flow(g, 0, y));
    return best;
}

// degrees counted straight from the edge list, by vertex index
inline std::vector<std::size_t> count_degrees(const MultiGraph& g, const EdgeSet& f) {
    std::vector<std::size_t> d(g.vertex_count(), 0);
    for (EdgeId e : f) {
        const Edge& ed = g.edge(e);
        ++d[g.vindex(ed.u)];
        ++d[g.vindex(ed.v)];
    }
    return d;
}

inline bool is_tree_by_dfs(const MultiGraph& g, const EdgeSet& t) {
    const std::size_t n = g.vertex_count();
    if (t.size() + 1 != n) return false;
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (EdgeId e : t) {
        auto ei = g.eindex(e);
        adj[g.tail_at(ei)].push_back(g.head_at(ei));
        adj[g.head_at(ei)].push_back(g.tail_at(ei));
    }
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> st{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!st.empty()) {
        auto x = st.back();
        st.pop_back();
        for (auto y : adj[x])
            if (!seen[y]) {
                seen[y] = 1;
                ++reached;
                st.push_back(y);
            }
    }
    return reached == n;
}

} // namespace support
