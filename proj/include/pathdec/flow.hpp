#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "graph.hpp"

namespace pathdec {

// Unit-capacity undirected Dinic over vertex indices. Built once, queried many times.
class UnitFlow {
public:
    explicit UnitFlow(const MultiGraph& g) : n_(static_cast<std::uint32_t>(g.vertex_count())) {
        head_.assign(n_, -1);
        for (std::uint32_t ei = 0; ei < g.edge_count(); ++ei) {
            add_arc(g.tail_at(ei), g.head_at(ei));
            add_arc(g.head_at(ei), g.tail_at(ei));
        }
    }

    // Max flow from s to t, stopping once `limit` is reached.
    std::size_t run(std::uint32_t s, std::uint32_t t,
                    std::size_t limit = std::numeric_limits<std::size_t>::max()) {
        for (auto& c : cap_) c = 1;
        std::size_t flow = 0;
        while (flow < limit && bfs(s, t)) {
            it_ = head_;
            while (flow < limit && dfs(s, t)) ++flow;
        }
        return flow;
    }

    // After run(): vertices reachable from s in the residual network.
    std::vector<char> source_side(std::uint32_t s) const {
        std::vector<char> seen(n_, 0);
        std::vector<std::uint32_t> st{s};
        seen[s] = 1;
        while (!st.empty()) {
            auto u = st.back();
            st.pop_back();
            for (int a = head_[u]; a != -1; a = next_[a])
                if (cap_[a] > 0 && !seen[to_[a]]) {
                    seen[to_[a]] = 1;
                    st.push_back(to_[a]);
                }
        }
        return seen;
    }

    std::uint32_t size() const { return n_; }

private:
    // arcs come in pairs: 2i is u->v, 2i+1 its residual twin
    void add_arc(std::uint32_t u, std::uint32_t v) {
        to_.push_back(v);
        next_.push_back(head_[u]);
        head_[u] = static_cast<int>(to_.size()) - 1;
        cap_.push_back(1);
    }
    static int twin(int a) { return a ^ 1; }

    bool bfs(std::uint32_t s, std::uint32_t t) {
        level_.assign(n_, -1);
        std::queue<std::uint32_t> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            for (int a = head_[u]; a != -1; a = next_[a])
                if (cap_[a] > 0 && level_[to_[a]] < 0) {
                    level_[to_[a]] = level_[u] + 1;
                    q.push(to_[a]);
                }
        }
        return level_[t] >= 0;
    }

    // iterative augmenting dfs along the level graph, one unit at a time
    bool dfs(std::uint32_t s, std::uint32_t t) {
        std::vector<int> path;
        std::uint32_t u = s;
        while (u != t) {
            int& a = it_[u];
            while (a != -1 && !(cap_[a] > 0 && level_[to_[a]] == level_[u] + 1)) a = next_[a];
            if (a == -1) {
                if (path.empty()) return false;
                level_[u] = -1;
                int back = path.back();
                path.pop_back();
                u = to_[twin(back)];
                it_[u] = next_[it_[u]];
                continue;
            }
            path.push_back(a);
            u = to_[a];
        }
        for (int a : path) {
            --cap_[a];
            ++cap_[twin(a)];
        }
        return true;
    }

    std::uint32_t n_;
    std::vector<int> head_, next_, it_, level_;
    std::vector<std::uint32_t> to_;
    std::vector<int> cap_;
};

inline std::size_t local_edge_connectivity(const MultiGraph& g, VertexId x, VertexId y) {
    auto xi = g.vindex(x), yi = g.vindex(y);
    if (xi == yi) fail(Errc::SameVertex, "x == y");
    UnitFlow f(g);
    return f.run(xi, yi);
}

struct EdgeCut {
    std::size_t value = 0;
    std::vector<VertexId> side; // source side
};

inline EdgeCut cut_from(const MultiGraph& g, const UnitFlow& f, std::uint32_t s, std::size_t value) {
    EdgeCut c;
    c.value = value;
    auto seen = f.source_side(s);
    for (std::uint32_t i = 0; i < g.vertex_count(); ++i)
        if (seen[i]) c.side.push_back(g.vertices()[i].id);
    return c;
}

inline EdgeCut min_edge_cut(const MultiGraph& g) {
    if (g.vertex_count() < 2) fail(Errc::TooFewVertices, "need two vertices");
    UnitFlow f(g);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::uint32_t best_t = 1;
    for (std::uint32_t t = 1; t < g.vertex_count(); ++t) {
        auto v = f.run(0, t, best);
        if (v < best) {
            best = v;
            best_t = t;
            if (best == 0) break;
        }
    }
    f.run(0, best_t);
    return cut_from(g, f, 0, best);
}

inline std::size_t edge_connectivity(const MultiGraph& g) {
    if (g.vertex_count() < 2) fail(Errc::TooFewVertices, "need two vertices");
    UnitFlow f(g);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::uint32_t t = 1; t < g.vertex_count() && best > 0; ++t) best = std::min(best, f.run(0, t, best));
    return best;
}

// Some cut with fewer than k edges, or nothing if g is k-edge-connected.
inline std::optional<EdgeCut> cut_below(const MultiGraph& g, std::size_t k) {
    if (g.vertex_count() < 2) return std::nullopt;
    UnitFlow f(g);
    for (std::uint32_t t = 1; t < g.vertex_count(); ++t) {
        auto v = f.run(0, t, k);
        if (v < k) return cut_from(g, f, 0, v);
    }
    return std::nullopt;
}

inline bool is_k_edge_connected(const MultiGraph& g, std::size_t k) {
    if (g.vertex_count() < 2) return k == 0 || g.vertex_count() == 1;
    return !cut_below(g, k).has_value();
}

inline bool is_connected(const MultiGraph& g) { return g.vertex_count() <= 1 || is_k_edge_connected(g, 1); }

inline bool is_eulerian_subset(const MultiGraph& g, const EdgeSet& f) {
    check_subset(g, f);
    for (auto d : subset_degrees(g, f))
        if (d % 2) return false;
    return true;
}

struct Arc {
    EdgeId edge;
    VertexId tail;
    VertexId head;
};

// Sorted by edge id.
class Orientation {
public:
    Orientation() = default;
    explicit Orientation(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
        std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) { return a.edge < b.edge; });
    }
    const std::vector<Arc>& arcs() const { return arcs_; }
    std::size_t size() const { return arcs_.size(); }
    const Arc& at(EdgeId e) const {
        auto it = std::lower_bound(arcs_.begin(), arcs_.end(), e,
                                   [](const Arc& a, EdgeId x) { return a.edge < x; });
        if (it == arcs_.end() || it->edge != e) fail(Errc::UnknownEdge, "edge not oriented");
        return *it;
    }

private:
    std::vector<Arc> arcs_;
};

// Closed-walk orientation: every walk returns to its start in an even subgraph.
inline Orientation eulerian_orientation(const MultiGraph& g, const EdgeSet& f) {
    if (!is_eulerian_subset(g, f)) fail(Errc::NotEulerian, "odd degree in subset");
    std::vector<char> in(g.edge_count(), 0), used(g.edge_count(), 0);
    for (EdgeId e : f) in[g.eindex(e)] = 1;
    std::vector<std::size_t> ptr(g.vertex_count(), 0);
    std::vector<Arc> arcs;
    arcs.reserve(f.size());
    for (std::uint32_t start = 0; start < g.vertex_count(); ++start) {
        while (true) {
            auto& inc = g.incident_at(start);
            while (ptr[start] < inc.size() && (!in[inc[ptr[start]]] || used[inc[ptr[start]]])) ++ptr[start];
            if (ptr[start] == inc.size()) break;
            std::uint32_t u = start;
            do {
                auto& iu = g.incident_at(u);
                while (ptr[u] < iu.size() && (!in[iu[ptr[u]]] || used[iu[ptr[u]]])) ++ptr[u];
                auto ei = iu[ptr[u]];
                used[ei] = 1;
                std::uint32_t w = g.tail_at(ei) == u ? g.head_at(ei) : g.tail_at(ei);
                arcs.push_back({g.edges()[ei].id, g.vertices()[u].id, g.vertices()[w].id});
                u = w;
            } while (u != start);
        }
    }
    return Orientation(std::move(arcs));
}

} // namespace pathdec
