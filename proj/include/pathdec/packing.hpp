#pragma once

#include <deque>
#include <numeric>
#include <random>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/push_relabel_max_flow.hpp>

#include "flow.hpp"

namespace pathdec {

using TreePack = std::vector<EdgeSet>;

namespace detail {

struct Dsu {
    std::vector<std::uint32_t> p;
    explicit Dsu(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[a] = b;
        return true;
    }
};

// Rooted view of one forest for path queries.
struct RootedForest {
    std::vector<int> up_edge;
    std::vector<std::uint32_t> parent, root, depth;
};

inline RootedForest root_forest(const MultiGraph& g, const std::vector<std::vector<std::uint32_t>>& adj) {
    std::size_t n = g.vertex_count();
    RootedForest r;
    r.up_edge.assign(n, -1);
    r.parent.assign(n, npos32);
    r.root.assign(n, npos32);
    r.depth.assign(n, 0);
    for (std::uint32_t s = 0; s < n; ++s) {
        if (r.root[s] != npos32) continue;
        r.root[s] = s;
        std::vector<std::uint32_t> st{s};
        while (!st.empty()) {
            auto x = st.back();
            st.pop_back();
            for (auto ei : adj[x]) {
                auto y = g.tail_at(ei) == x ? g.head_at(ei) : g.tail_at(ei);
                if (r.root[y] != npos32) continue;
                r.root[y] = s;
                r.parent[y] = x;
                r.up_edge[y] = static_cast<int>(ei);
                r.depth[y] = r.depth[x] + 1;
                st.push_back(y);
            }
        }
    }
    return r;
}

inline std::vector<std::uint32_t> forest_path(const RootedForest& r, std::uint32_t a, std::uint32_t b) {
    std::vector<std::uint32_t> left, right;
    while (a != b) {
        if (r.depth[a] >= r.depth[b]) {
            left.push_back(static_cast<std::uint32_t>(r.up_edge[a]));
            a = r.parent[a];
        } else {
            right.push_back(static_cast<std::uint32_t>(r.up_edge[b]));
            b = r.parent[b];
        }
    }
    left.insert(left.end(), right.rbegin(), right.rend());
    return left;
}

} // namespace detail

inline bool is_spanning_tree(const MultiGraph& g, const EdgeSet& t) {
    if (g.vertex_count() == 0) return t.empty();
    if (t.size() + 1 != g.vertex_count()) return false;
    detail::Dsu d(g.vertex_count());
    for (EdgeId e : t) {
        if (!g.has_edge(e)) return false;
        auto ei = g.eindex(e);
        if (!d.unite(g.tail_at(ei), g.head_at(ei))) return false;
    }
    return true;
}

// k edge-disjoint spanning trees via matroid-union augmenting paths.
inline TreePack pack_spanning_trees(const MultiGraph& g, std::size_t k) {
    const std::size_t n = g.vertex_count(), m = g.edge_count();
    if (k == 0) return {};
    if (n <= 1) return TreePack(k);
    if (m < k * (n - 1)) fail(Errc::NoPacking, "too few edges");

    std::vector<int> owner(m, -1);
    std::vector<std::vector<std::vector<std::uint32_t>>> adj(k, std::vector<std::vector<std::uint32_t>>(n));
    std::vector<std::size_t> sizes(k, 0);
    auto put = [&](std::uint32_t ei, int f) {
        owner[ei] = f;
        adj[f][g.tail_at(ei)].push_back(ei);
        adj[f][g.head_at(ei)].push_back(ei);
        ++sizes[f];
    };
    auto take = [&](std::uint32_t ei) {
        int f = owner[ei];
        for (auto x : {g.tail_at(ei), g.head_at(ei)}) {
            auto& a = adj[f][x];
            a.erase(std::find(a.begin(), a.end(), ei));
        }
        owner[ei] = -1;
        --sizes[f];
    };

    // greedy fill
    std::vector<detail::Dsu> dsu(k, detail::Dsu(n));
    std::vector<std::uint32_t> rest;
    for (std::uint32_t ei = 0; ei < m; ++ei) {
        bool placed = false;
        for (std::size_t f = 0; f < k && !placed; ++f)
            if (sizes[f] + 1 < n && dsu[f].unite(g.tail_at(ei), g.head_at(ei))) {
                put(ei, static_cast<int>(f));
                placed = true;
            }
        if (!placed) rest.push_back(ei);
    }

    auto full = [&] {
        for (auto s : sizes)
            if (s + 1 != n) return false;
        return true;
    };

    for (auto e0 : rest) {
        if (full()) break;
        std::vector<detail::RootedForest> rf;
        for (std::size_t f = 0; f < k; ++f) rf.push_back(detail::root_forest(g, adj[f]));
        std::vector<std::int64_t> parent(m, -2); // -2 unlabeled, -1 root
        parent[e0] = -1;
        std::deque<std::uint32_t> q{e0};
        std::int64_t hit = -1;
        int hit_forest = -1;
        while (!q.empty() && hit < 0) {
            auto x = q.front();
            q.pop_front();
            auto a = g.tail_at(x), b = g.head_at(x);
            for (std::size_t f = 0; f < k && hit < 0; ++f) {
                if (owner[x] == static_cast<int>(f)) continue;
                if (rf[f].root[a] != rf[f].root[b]) {
                    if (sizes[f] + 1 >= n) continue;
                    hit = x;
                    hit_forest = static_cast<int>(f);
                    break;
                }
                for (auto y : detail::forest_path(rf[f], a, b))
                    if (parent[y] == -2) {
                        parent[y] = x;
                        q.push_back(y);
                    }
            }
        }
        if (hit < 0) continue;
        // shift along the path back to e0
        auto x = static_cast<std::uint32_t>(hit);
        int f = hit_forest;
        while (true) {
            int old = owner[x];
            if (old >= 0) take(x);
            put(x, f);
            if (parent[x] == -1) break;
            auto px = static_cast<std::uint32_t>(parent[x]);
            f = old;
            x = px;
        }
    }
    if (!full()) fail(Errc::NoPacking, "union of forests short of k spanning trees");

    TreePack pack(k);
    std::vector<std::vector<EdgeId>> ids(k);
    for (std::uint32_t ei = 0; ei < m; ++ei)
        if (owner[ei] >= 0) ids[owner[ei]].push_back(g.edges()[ei].id);
    for (std::size_t f = 0; f < k; ++f) {
        pack[f] = EdgeSet(std::move(ids[f]));
        if (!is_spanning_tree(g, pack[f])) fail(Errc::InvariantBroken, "packed forest is not a spanning tree");
    }
    return pack;
}

// Local search: swap a tree edge at an overloaded vertex for a non-tree edge
// whose endpoints have slack. Bounds are indexed by vertex index.
inline EdgeSet bounded_spanning_tree(const MultiGraph& g, const std::vector<std::size_t>& bound,
                                     std::optional<EdgeSet> start = std::nullopt) {
    const std::size_t n = g.vertex_count();
    if (n == 0) return {};
    if (!is_connected(g)) fail(Errc::NotConnected, "input is disconnected");
    std::vector<char> in_tree(g.edge_count(), 0);
    if (start) {
        for (EdgeId e : *start) in_tree[g.eindex(e)] = 1;
    } else {
        // BFS tree from the vertex of largest degree bound, favouring low-degree growth
        detail::Dsu d(n);
        std::vector<std::uint32_t> order(g.edge_count());
        std::iota(order.begin(), order.end(), 0u);
        for (auto ei : order)
            if (d.unite(g.tail_at(ei), g.head_at(ei))) in_tree[ei] = 1;
    }
    std::vector<std::size_t> deg(n, 0);
    for (std::uint32_t ei = 0; ei < g.edge_count(); ++ei)
        if (in_tree[ei]) ++deg[g.tail_at(ei)], ++deg[g.head_at(ei)];

    auto rebuild = [&] {
        std::vector<std::vector<std::uint32_t>> adj(n);
        for (std::uint32_t ei = 0; ei < g.edge_count(); ++ei)
            if (in_tree[ei]) adj[g.tail_at(ei)].push_back(ei), adj[g.head_at(ei)].push_back(ei);
        return detail::root_forest(g, adj);
    };

    std::size_t guard = 0, limit = 4 * g.edge_count() * n + 16;
    while (true) {
        std::int64_t worst = -1;
        for (std::uint32_t v = 0; v < n; ++v)
            if (deg[v] > bound[v] && (worst < 0 || deg[v] - bound[v] > deg[worst] - bound[worst])) worst = v;
        if (worst < 0) break;
        if (++guard > limit) fail(Errc::BoundNotMet, "local search exhausted");
        auto v = static_cast<std::uint32_t>(worst);
        auto rf = rebuild();
        bool moved = false;
        for (std::uint32_t ei = 0; ei < g.edge_count() && !moved; ++ei) {
            if (in_tree[ei]) continue;
            auto x = g.tail_at(ei), y = g.head_at(ei);
            if (x == v || y == v || deg[x] + 1 > bound[x] || deg[y] + 1 > bound[y]) continue;
            auto path = detail::forest_path(rf, x, y);
            for (auto pe : path) {
                if (g.tail_at(pe) != v && g.head_at(pe) != v) continue;
                in_tree[pe] = 0;
                in_tree[ei] = 1;
                --deg[g.tail_at(pe)];
                --deg[g.head_at(pe)];
                ++deg[x];
                ++deg[y];
                moved = true;
                break;
            }
        }
        if (!moved) fail(Errc::BoundNotMet, "no improving swap at an overloaded vertex");
    }
    std::vector<EdgeId> ids;
    for (std::uint32_t ei = 0; ei < g.edge_count(); ++ei)
        if (in_tree[ei]) ids.push_back(g.edges()[ei].id);
    return EdgeSet(std::move(ids));
}

inline EdgeSet degree_bounded_spanning_tree(const MultiGraph& g, std::size_t m) {
    if (m == 0) fail(Errc::PreconditionViolation, "m must be positive");
    std::vector<std::size_t> bound(g.vertex_count());
    for (std::uint32_t i = 0; i < g.vertex_count(); ++i) bound[i] = 4 * g.incident_at(i).size() / m;
    auto t = bounded_spanning_tree(g, bound);
    for (std::uint32_t i = 0; i < g.vertex_count(); ++i)
        if (subset_degrees(g, t)[i] * m > 4 * g.incident_at(i).size())
            fail(Errc::BoundNotMet, "tree degree above bound");
    return t;
}

struct SplitPair {
    EdgeSet first;
    EdgeSet second;
};

inline bool spans_and_connected(const MultiGraph& g, const EdgeSet& part, std::size_t r) {
    auto h = induced_by_edges(g, part);
    if (h.vertex_count() != g.vertex_count()) return false;
    return is_k_edge_connected(h, r);
}

// Postconditions of the two-sided split, checked from scratch.
inline bool verify_connected_split(const MultiGraph& g, const SplitPair& s, std::size_t k, std::size_t r) {
    if (!s.first.disjoint(s.second) || (s.first | s.second) != g.all_edges()) return false;
    auto d1 = subset_degrees(g, s.first), d2 = subset_degrees(g, s.second);
    for (std::uint32_t i = 0; i < g.vertex_count(); ++i) {
        Side sd = g.vertices()[i].side;
        if (sd == Side::A && d1[i] % k) return false;
        if (sd == Side::B && d2[i] % k) return false;
    }
    return spans_and_connected(g, s.first, r) && spans_and_connected(g, s.second, r);
}

namespace detail {

// Directed max-flow over a small explicit network; returns the flow on each listed arc.
class ArcFlow {
public:
    explicit ArcFlow(std::size_t n) : g_(n) {}
    std::size_t arc(std::size_t a, std::size_t b, long cap) {
        auto [e, ok1] = boost::add_edge(a, b, g_);
        auto [r, ok2] = boost::add_edge(b, a, g_);
        boost::put(boost::edge_capacity, g_, e, cap);
        boost::put(boost::edge_capacity, g_, r, 0);
        boost::put(boost::edge_reverse, g_, e, r);
        boost::put(boost::edge_reverse, g_, r, e);
        arcs_.push_back(e);
        return arcs_.size() - 1;
    }
    long run(std::size_t s, std::size_t t) { return boost::push_relabel_max_flow(g_, s, t); }
    long flow(std::size_t i) const {
        return boost::get(boost::edge_capacity, g_, arcs_[i]) - boost::get(boost::edge_residual_capacity, g_, arcs_[i]);
    }

private:
    using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
    using Net = boost::adjacency_list<
        boost::vecS, boost::vecS, boost::directedS, boost::no_property,
        boost::property<boost::edge_capacity_t, long,
                        boost::property<boost::edge_residual_capacity_t, long,
                                        boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;
    Net g_;
    std::vector<Traits::edge_descriptor> arcs_;
};

} // namespace detail

// Two spanning r-edge-connected halves; A-degrees in the first and B-degrees
// in the second divisible by k. Trees are skeletons; every vertex gets an own-side
// target near half its degree and a flow picks the free edges to meet all targets.
inline SplitPair connected_split(const MultiGraph& g, std::size_t k, std::size_t r, std::uint64_t seed,
                                 std::size_t budget, const std::optional<SplitPair>& certified = std::nullopt) {
    if (k == 0) fail(Errc::PreconditionViolation, "k must be positive");
    if (certified) {
        if (verify_connected_split(g, *certified, k, r)) return *certified;
        fail(Errc::InvariantBroken, "attached split does not verify");
    }
    const std::size_t n = g.vertex_count(), m = g.edge_count();
    if (m % k) fail(Errc::BudgetExhausted, "edge count not divisible by k");
    for (const auto& v : g.vertices())
        if (v.side == Side::None) fail(Errc::PreconditionViolation, "split needs a bipartite input");
    TreePack pack;
    try {
        pack = pack_spanning_trees(g, 2 * r);
    } catch (const Error& e) {
        if (e.code() == Errc::NoPacking) fail(Errc::BudgetExhausted, "cannot pack 2r spanning trees");
        throw;
    }
    std::vector<int> locked(m, -1);
    for (std::size_t t = 0; t < pack.size(); ++t)
        for (EdgeId e : pack[t]) locked[g.eindex(e)] = t < r ? 0 : 1;

    // own-side degree window per vertex: own half is 0 for A, 1 for B
    std::vector<long> lo(n, 0), hi(n, 0), deg(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        int own = g.vertices()[i].side == Side::A ? 0 : 1;
        deg[i] = long(g.incident_at(i).size());
        long mine = 0, theirs = 0;
        for (auto ei : g.incident_at(i)) {
            if (locked[ei] == own) ++mine;
            else if (locked[ei] >= 0) ++theirs;
        }
        lo[i] = mine;
        hi[i] = deg[i] - theirs;
    }
    const long kk = long(k);
    auto up = [&](long x) { return (x + kk - 1) / kk * kk; };

    std::mt19937_64 rng(seed);
    for (std::size_t attempt = 0; attempt < std::max<std::size_t>(budget, 1); ++attempt) {
        // targets: a multiple of k near d/2 inside the window, then nudged until they sum to |E|
        std::vector<long> target(n);
        bool empty_window = false;
        for (std::uint32_t i = 0; i < n; ++i) {
            long first = up(lo[i]);
            if (first > hi[i]) {
                empty_window = true;
                break;
            }
            long want = attempt == 0 ? deg[i] / 2 : deg[i] / 2 + long(rng() % (2 * k + 1)) - kk;
            long t = std::clamp(want / kk * kk + ((want % kk) * 2 >= kk ? kk : 0), first, hi[i] / kk * kk);
            target[i] = t;
        }
        if (empty_window) fail(Errc::BudgetExhausted, "tree skeleton leaves no admissible degree");
        long sum = std::accumulate(target.begin(), target.end(), 0L);
        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        std::shuffle(order.begin(), order.end(), rng);
        bool fixable = true;
        while (sum != long(m) && fixable) {
            long step = sum < long(m) ? kk : -kk;
            // move the vertex whose target sits furthest on the other side of d/2
            std::int64_t best = -1;
            long score = 0;
            for (auto i : order) {
                long t = target[i] + step;
                if (t < lo[i] || t > hi[i]) continue;
                long s = std::abs(2 * t - deg[i]);
                if (best < 0 || s < score) best = i, score = s;
            }
            if (best < 0) fixable = false;
            else target[best] += step, sum += step;
        }
        if (!fixable) fail(Errc::BudgetExhausted, "degree targets cannot sum to the edge count");

        // flow: source -> A vertex (first-half edges it still needs), edge arcs, B vertex -> sink
        const std::size_t src = n, snk = n + 1;
        detail::ArcFlow net(n + 2);
        long need = 0;
        std::vector<std::uint32_t> free_edges;
        for (std::uint32_t ei = 0; ei < m; ++ei)
            if (locked[ei] < 0) free_edges.push_back(ei);
        std::shuffle(free_edges.begin(), free_edges.end(), rng);
        for (std::uint32_t i = 0; i < n; ++i) {
            long in_first = 0;
            for (auto ei : g.incident_at(i)) in_first += locked[ei] == 0;
            if (g.vertices()[i].side == Side::A) {
                long c = target[i] - in_first;
                need += c;
                net.arc(src, i, c);
            } else {
                net.arc(i, snk, deg[i] - target[i] - in_first);
            }
        }
        std::vector<std::size_t> arc_of(m, 0);
        for (auto ei : free_edges) {
            auto a = g.vertices()[g.tail_at(ei)].side == Side::A ? g.tail_at(ei) : g.head_at(ei);
            auto b = a == g.tail_at(ei) ? g.head_at(ei) : g.tail_at(ei);
            arc_of[ei] = net.arc(a, b, 1);
        }
        if (net.run(src, snk) != need) continue;
        std::vector<EdgeId> a, b;
        for (std::uint32_t ei = 0; ei < m; ++ei) {
            bool first = locked[ei] >= 0 ? locked[ei] == 0 : net.flow(arc_of[ei]) == 1;
            (first ? a : b).push_back(g.edges()[ei].id);
        }
        SplitPair s{EdgeSet(std::move(a)), EdgeSet(std::move(b))};
        if (verify_connected_split(g, s, k, r)) return s;
    }
    fail(Errc::BudgetExhausted, "no verified split within budget");
}

// Spanning Gk with d_Gk(v) = k/(k+r) d_G(v) on A, m-edge-connected; Gr the rest.
inline SplitPair fraction_split(const MultiGraph& g, std::size_t k, std::size_t m, std::size_t r,
                                Side side = Side::A) {
    if (k == 0 || m == 0) fail(Errc::PreconditionViolation, "k and m must be positive");
    const std::size_t n = g.vertex_count();
    std::vector<std::size_t> target(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (g.vertices()[i].side != side) continue;
        auto d = g.incident_at(i).size();
        if (d % (k + r)) fail(Errc::DivisibilityViolation, "A-degree not divisible by k+r");
        target[i] = d / (k + r) * k;
    }
    std::size_t c = (k + r + k - 1) / k;
    std::vector<EdgeSet> trees;
    try {
        auto pack = pack_spanning_trees(g, 4 * m * c);
        for (std::size_t grp = 0; grp < m; ++grp) {
            EdgeSet h;
            for (std::size_t j = 0; j < 4 * c; ++j) h = h | pack[grp * 4 * c + j];
            auto sub = induced_by_edges(g, h);
            trees.push_back(degree_bounded_spanning_tree(sub, 4 * c));
        }
    } catch (const Error& e) {
        if (e.code() != Errc::NoPacking) throw;
        // fewer trees available: take m and push their A-degrees under target/m
        TreePack pack;
        try {
            pack = pack_spanning_trees(g, m);
        } catch (const Error& e2) {
            if (e2.code() == Errc::NoPacking) fail(Errc::PackingFailed, "cannot pack m spanning trees");
            throw;
        }
        trees.clear();
        for (std::size_t t = 0; t < m; ++t) {
            std::vector<std::size_t> bound(n);
            for (std::uint32_t i = 0; i < n; ++i)
                bound[i] = g.vertices()[i].side == side ? std::max<std::size_t>(1, target[i] / m) : n;
            auto rest = g.all_edges();
            for (std::size_t u = 0; u < m; ++u)
                if (u != t) rest = rest - pack[u];
            for (const auto& done : trees) rest = rest - done;
            auto sub = induced_by_edges(g, rest);
            auto tree = bounded_spanning_tree(sub, [&] {
                std::vector<std::size_t> b(sub.vertex_count());
                for (std::uint32_t i = 0; i < sub.vertex_count(); ++i) b[i] = bound[g.vindex(sub.vertices()[i].id)];
                return b;
            }(), pack[t]);
            trees.push_back(tree);
        }
    }
    EdgeSet base;
    for (const auto& t : trees) base = base | t;
    auto deg = subset_degrees(g, base);
    std::vector<EdgeId> add;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (g.vertices()[i].side != side) continue;
        if (deg[i] > target[i]) fail(Errc::BoundNotMet, "tree degrees exceed the target share");
        auto need = target[i] - deg[i];
        std::vector<EdgeId> cand;
        for (auto ei : g.incident_at(i))
            if (!base.contains(g.edges()[ei].id)) cand.push_back(g.edges()[ei].id);
        std::sort(cand.begin(), cand.end());
        add.insert(add.end(), cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(need));
    }
    SplitPair out{base | EdgeSet(std::move(add)), {}};
    out.second = g.all_edges() - out.first;
    auto dk = subset_degrees(g, out.first);
    for (std::uint32_t i = 0; i < n; ++i)
        if (g.vertices()[i].side == side && dk[i] != target[i])
            fail(Errc::InvariantBroken, "fraction split degree mismatch");
    if (!spans_and_connected(g, out.first, m)) fail(Errc::InvariantBroken, "Gk not m-edge-connected");
    return out;
}

} // namespace pathdec
