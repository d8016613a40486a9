#pragma once

#include <map>
#include <random>

#include "pathdec.hpp"

namespace pathdec {

// A = 0..n-1, B = n..2n-1; edge a_i b_{i+s} gets id j*n + i for the j-th listed offset.
inline MultiGraph gen_circulant(std::size_t n, const std::vector<std::size_t>& offsets) {
    std::vector<char> seen(n, 0);
    for (auto s : offsets) {
        if (s >= n || seen[s]) fail(Errc::BadOffset, "offset " + std::to_string(s) + " out of range or repeated");
        seen[s] = 1;
    }
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < 2 * n; ++i) vs.push_back({VertexId(std::uint32_t(i)), i < n ? Side::A : Side::B});
    std::vector<Edge> es;
    for (std::size_t j = 0; j < offsets.size(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            es.push_back({EdgeId(std::uint32_t(j * n + i)), VertexId(std::uint32_t(i)),
                          VertexId(std::uint32_t(n + (i + offsets[j]) % n))});
    return MultiGraph(std::move(vs), std::move(es));
}

inline std::vector<std::size_t> offset_range(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> v;
    for (std::size_t s = lo; s < hi; ++s) v.push_back(s);
    return v;
}

// edges of the offsets listed at positions [lo, hi) of a circulant on n
inline EdgeSet offset_block(std::size_t n, std::size_t lo, std::size_t hi) {
    std::vector<EdgeId> ids;
    for (std::size_t i = lo * n; i < hi * n; ++i) ids.push_back(EdgeId(std::uint32_t(i)));
    return EdgeSet(std::move(ids));
}

struct Fixture {
    std::string name;
    MultiGraph graph;
    std::optional<Bifactorization> bif;
    std::size_t ell = 0;
    std::size_t edges = 0;
    std::size_t paths = 0;
    std::optional<TrackingDecomposition> tracking; // tangle fixture only
};

namespace detail {

// blocks: lengths of consecutive offset blocks, matchings first then Eulerian factors
inline FractionalFactorization block_factorization(std::size_t n, Side side, std::size_t first,
                                                   const std::vector<std::size_t>& mats,
                                                   const std::vector<std::size_t>& eulers, std::size_t k) {
    FractionalFactorization ff;
    ff.side = side;
    ff.k = k;
    std::size_t at = first;
    for (auto w : mats) {
        ff.matchings.push_back(offset_block(n, at, at + w));
        at += w;
    }
    for (auto w : eulers) {
        ff.eulerians.push_back(offset_block(n, at, at + w));
        at += w;
    }
    return ff;
}

inline Fixture block_fixture(std::string name, std::size_t n, const std::vector<std::size_t>& mats,
                             const std::vector<std::size_t>& eulers, std::size_t k, std::size_t ell) {
    std::size_t half = 0;
    for (auto w : mats) half += w;
    for (auto w : eulers) half += w;
    Fixture f{std::move(name), gen_circulant(n, offset_range(0, 2 * half)), std::nullopt, ell, 0, 0, std::nullopt};
    Bifactorization bif;
    bif.first = block_factorization(n, Side::A, 0, mats, eulers, k);
    bif.second = block_factorization(n, Side::B, half, mats, eulers, k);
    if (!verify_strong(f.graph, bif)) fail(Errc::InvariantBroken, f.name + " bifactorization does not verify");
    f.bif = std::move(bif);
    f.edges = f.graph.edge_count();
    f.paths = f.edges / ell;
    return f;
}

// K_{24,24} with a 3-complete 4-tracking decomposition that still has tangled members.
inline std::optional<TrackingDecomposition> tangle_attempt(const MultiGraph& g, std::mt19937_64& rng) {
    const std::size_t n = 24;
    auto core = offset_block(n, 0, 12);
    auto orient = eulerian_orientation(g, core);
    // out-arcs at each vertex, shuffled, paired into 2-paths centred there
    std::vector<std::vector<Arc>> out(g.vertex_count());
    for (const auto& a : orient.arcs()) out[g.vindex(a.tail)].push_back(a);
    std::vector<Tracking> mids;
    for (auto& arcs : out) {
        std::shuffle(arcs.begin(), arcs.end(), rng);
        for (std::size_t i = 0; i + 1 < arcs.size(); i += 2)
            mids.push_back({{arcs[i].head, arcs[i].tail, arcs[i + 1].head}, {arcs[i].edge, arcs[i + 1].edge}});
    }
    // extension edges: offsets 12-17 wait at their A end, 18-23 at their B end
    std::vector<std::vector<EdgeId>> spare(g.vertex_count());
    for (EdgeId e : offset_block(n, 12, 18)) spare[g.vindex(g.edge(e).u)].push_back(e);
    for (EdgeId e : offset_block(n, 18, 24)) spare[g.vindex(g.edge(e).v)].push_back(e);
    for (auto& s : spare) std::shuffle(s.begin(), s.end(), rng);
    TrackingDecomposition d{4, {}};
    for (auto& m : mids) {
        auto& s0 = spare[g.vindex(m.front())];
        auto& s1 = spare[g.vindex(m.back())];
        if (s0.empty() || s1.empty()) return std::nullopt;
        EdgeId e0 = s0.back(), e1 = s1.back();
        s0.pop_back();
        s1.pop_back();
        d.trackings.push_back({{g.other(e0, m.front()), m.vertices[0], m.vertices[1], m.vertices[2], g.other(e1, m.back())},
                               {e0, m.edges[0], m.edges[1], e1}});
    }
    check_decomposition(g, d);
    try {
        d = improve_completeness(g, std::move(d), 3);
    } catch (const Error&) {
        return std::nullopt;
    }
    if (d.tau() == 0 || !is_complete(g, d, 3)) return std::nullopt;
    return d;
}

} // namespace detail

inline Fixture tangle_fixture(std::uint64_t seed) {
    Fixture f{"FIX-TANGLE", gen_circulant(24, offset_range(0, 24)), std::nullopt, 4, 576, 144, std::nullopt};
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        if (auto d = detail::tangle_attempt(f.graph, rng)) {
            f.tracking = std::move(d);
            return f;
        }
    }
    fail(Errc::InternalExhaustion, "could not build a tangled complete decomposition");
}

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names{"FIX-ODD3", "FIX-ODD5", "FIX-EVEN2", "FIX-EVEN4", "FIX-FULL3", "FIX-TANGLE"};
    return names;
}

inline Fixture fixture(const std::string& name, std::uint64_t seed = 0) {
    if (name == "FIX-ODD3") return detail::block_fixture(name, 24, {4}, {8}, 3, 3);
    if (name == "FIX-ODD5") return detail::block_fixture(name, 60, {6}, {12, 12}, 5, 5);
    if (name == "FIX-EVEN2") return detail::block_fixture(name, 16, {2, 2}, {4}, 4, 2);
    if (name == "FIX-EVEN4") return detail::block_fixture(name, 48, {3, 3}, {6, 6, 6}, 8, 4);
    if (name == "FIX-FULL3") {
        Fixture f{name, gen_circulant(63, offset_range(0, 63)), std::nullopt, 3, 3969, 1323, std::nullopt};
        return f;
    }
    if (name == "FIX-TANGLE") return tangle_fixture(seed);
    fail(Errc::UnknownFixture, "unknown fixture " + name);
}

inline nlohmann::json to_json(const Fixture& f) {
    nlohmann::json o{{"name", f.name}, {"graph", to_json(f.graph)}, {"ell", f.ell},
                     {"edges", f.edges}, {"paths", f.paths}};
    if (f.bif) o["bifactorization"] = to_json(*f.bif);
    if (f.tracking) o["tracking"] = to_json(*f.tracking);
    return o;
}

inline Fixture fixture_from_json(const nlohmann::json& o) {
    try {
        Fixture f{o.at("name").get<std::string>(), graph_from_json(o.at("graph")), std::nullopt,
                  o.at("ell").get<std::size_t>(), o.at("edges").get<std::size_t>(), o.at("paths").get<std::size_t>(),
                  std::nullopt};
        if (o.contains("bifactorization")) {
            f.bif = bifactorization_from_json(o.at("bifactorization"));
            if (!verify_strong(f.graph, *f.bif)) fail(Errc::InvariantBroken, f.name + ": attached bifactorization fails");
        }
        if (o.contains("tracking")) {
            f.tracking = tracking_decomposition_from_json(o.at("tracking"));
            check_decomposition(f.graph, *f.tracking);
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ParseError, std::string("fixture: ") + e.what());
    }
}

// ---- exhaustive oracle ----

inline std::optional<PathDecomposition> brute_force_decompose(const MultiGraph& g, std::size_t ell) {
    if (g.edge_count() > 16) fail(Errc::TooLarge, "oracle limited to 16 edges");
    if (ell == 0) fail(Errc::PreconditionViolation, "l must be positive");
    if (g.edge_count() % ell) return std::nullopt;
    const std::uint32_t m = g.edge_count();
    std::vector<char> used(m, 0), on(g.vertex_count(), 0);
    std::vector<std::vector<std::uint32_t>> chosen;

    // all simple paths of length ell through edge `anchor` (fixed orientation, so each path once)
    auto through = [&](std::uint32_t anchor) {
        std::vector<std::vector<std::uint32_t>> found;
        std::uint32_t u = g.tail_at(anchor), v = g.head_at(anchor);
        std::vector<std::uint32_t> left, right;
        on[u] = on[v] = 1;
        std::function<void(std::uint32_t, std::size_t, std::vector<std::uint32_t>&, std::function<void()>)> grow =
            [&](std::uint32_t at, std::size_t need, std::vector<std::uint32_t>& acc, std::function<void()> done) {
                if (need == 0) {
                    done();
                    return;
                }
                for (auto ei : g.incident_at(at)) {
                    if (used[ei]) continue;
                    std::uint32_t w = g.tail_at(ei) == at ? g.head_at(ei) : g.tail_at(ei);
                    if (on[w]) continue;
                    on[w] = 1;
                    acc.push_back(ei);
                    grow(w, need - 1, acc, done);
                    acc.pop_back();
                    on[w] = 0;
                }
            };
        for (std::size_t a = 0; a < ell; ++a) {
            grow(u, a, left, [&] {
                grow(v, ell - 1 - a, right, [&] {
                    std::vector<std::uint32_t> p(left.rbegin(), left.rend());
                    p.push_back(anchor);
                    p.insert(p.end(), right.begin(), right.end());
                    found.push_back(std::move(p));
                });
            });
        }
        on[u] = on[v] = 0;
        return found;
    };
    std::function<bool()> solve = [&]() {
        std::uint32_t anchor = 0;
        while (anchor < m && used[anchor]) ++anchor;
        if (anchor == m) return true;
        used[anchor] = 1;
        auto options = through(anchor);
        for (const auto& p : options) {
            for (auto ei : p) used[ei] = 1;
            chosen.push_back(p);
            if (solve()) return true;
            chosen.pop_back();
            for (auto ei : p) used[ei] = 0;
            used[anchor] = 1;
        }
        used[anchor] = 0;
        return false;
    };
    if (!solve()) return std::nullopt;
    PathDecomposition d;
    d.ell = ell;
    for (const auto& p : chosen) {
        std::vector<EdgeId> es;
        for (auto ei : p) es.push_back(g.edges()[ei].id);
        // vertex walk from the edge order
        std::vector<VertexId> vs;
        std::uint32_t a = g.tail_at(p[0]), b = g.head_at(p[0]);
        std::uint32_t start = a;
        if (p.size() > 1 && (a == g.tail_at(p[1]) || a == g.head_at(p[1]))) start = b;
        vs.push_back(g.vertices()[start].id);
        std::uint32_t cur = start;
        for (auto ei : p) {
            cur = g.tail_at(ei) == cur ? g.head_at(ei) : g.tail_at(ei);
            vs.push_back(g.vertices()[cur].id);
        }
        d.paths.push_back(std::move(vs));
        d.edges.push_back(std::move(es));
    }
    return d;
}

// ---- small connected bipartite graphs up to isomorphism ----

struct SmallBipartite {
    std::size_t a = 0, b = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges; // (A index, B index)

    MultiGraph graph() const {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> es;
        for (auto [x, y] : edges) es.push_back({x, std::uint32_t(a + y)});
        return new_bipartite(a, b, es);
    }
};

namespace detail {

// Minimum biadjacency string over side-preserving relabellings that respect refined colours.
inline std::string canonical_key(std::size_t na, std::size_t nb, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& es) {
    const std::size_t n = na + nb;
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [x, y] : es) {
        adj[x].push_back(na + y);
        adj[na + y].push_back(x);
    }
    std::vector<std::size_t> color(n);
    for (std::size_t v = 0; v < n; ++v) color[v] = adj[v].size();
    for (std::size_t round = 0; round < n; ++round) {
        std::vector<std::pair<std::size_t, std::vector<std::size_t>>> sig(n);
        for (std::size_t v = 0; v < n; ++v) {
            sig[v].first = color[v];
            for (auto w : adj[v]) sig[v].second.push_back(color[w]);
            std::sort(sig[v].second.begin(), sig[v].second.end());
        }
        auto sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<std::size_t> next(n);
        for (std::size_t v = 0; v < n; ++v)
            next[v] = std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin();
        bool same = true;
        for (std::size_t v = 0; v < n && same; ++v)
            for (std::size_t w = 0; w < n && same; ++w) same = (color[v] == color[w]) == (next[v] == next[w]);
        color = next;
        if (same) break;
    }
    // twins (equal neighbourhoods) are interchangeable
    std::vector<std::vector<std::size_t>> nb_sorted(n);
    for (std::size_t v = 0; v < n; ++v) {
        nb_sorted[v] = adj[v];
        std::sort(nb_sorted[v].begin(), nb_sorted[v].end());
    }
    auto key_for = [&](bool swap) {
        std::size_t p = swap ? nb : na, q = swap ? na : nb;
        auto rows_of = [&](bool a_side) {
            std::vector<std::size_t> vs;
            for (std::size_t v = 0; v < n; ++v)
                if ((v < na) == a_side) vs.push_back(v);
            return vs;
        };
        auto rows = rows_of(!swap), cols = rows_of(swap);
        auto by_color = [&](std::vector<std::size_t>& vs) {
            std::stable_sort(vs.begin(), vs.end(), [&](auto x, auto y) { return color[x] < color[y]; });
        };
        by_color(rows);
        by_color(cols);
        // classes of equal colour, each enumerated as multiset permutations of twin labels
        struct Block {
            std::size_t begin, end;
            std::vector<std::size_t> labels;
            std::vector<std::vector<std::size_t>> members;
        };
        auto blocks_of = [&](const std::vector<std::size_t>& vs) {
            std::vector<Block> out;
            for (std::size_t i = 0; i < vs.size();) {
                std::size_t j = i;
                while (j < vs.size() && color[vs[j]] == color[vs[i]]) ++j;
                Block bl{i, j, {}, {}};
                for (std::size_t t = i; t < j; ++t) {
                    std::size_t lab = bl.members.size();
                    for (std::size_t g2 = 0; g2 < bl.members.size(); ++g2)
                        if (nb_sorted[bl.members[g2][0]] == nb_sorted[vs[t]]) lab = g2;
                    if (lab == bl.members.size()) bl.members.push_back({});
                    bl.members[lab].push_back(vs[t]);
                    bl.labels.push_back(lab);
                }
                std::sort(bl.labels.begin(), bl.labels.end());
                out.push_back(std::move(bl));
                i = j;
            }
            return out;
        };
        auto rb = blocks_of(rows), cb = blocks_of(cols);
        std::vector<Block*> all;
        for (auto& x : rb) all.push_back(&x);
        for (auto& x : cb) all.push_back(&x);
        std::string best;
        std::vector<std::size_t> ro(p), co(q);
        auto realize = [&](std::vector<Block>& bs, std::vector<std::size_t>& order) {
            for (auto& bl : bs) {
                std::vector<std::size_t> used(bl.members.size(), 0);
                for (std::size_t t = 0; t < bl.labels.size(); ++t)
                    order[bl.begin + t] = bl.members[bl.labels[t]][used[bl.labels[t]]++];
            }
        };
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == all.size()) {
                realize(rb, ro);
                realize(cb, co);
                std::string s(p * q, '0');
                for (std::size_t x = 0; x < p; ++x)
                    for (auto w : adj[ro[x]])
                        for (std::size_t y = 0; y < q; ++y)
                            if (co[y] == w) s[x * q + y] = '1';
                if (best.empty() || s < best) best = s;
                return;
            }
            auto& labels = all[i]->labels;
            std::sort(labels.begin(), labels.end());
            do rec(i + 1);
            while (std::next_permutation(labels.begin(), labels.end()));
        };
        rec(0);
        return std::to_string(p) + "x" + std::to_string(q) + ":" + best;
    };
    auto k1 = key_for(false), k2 = key_for(true);
    return std::min(k1, k2);
}

} // namespace detail

// All connected simple bipartite graphs with 1..max_edges edges, one per isomorphism class.
inline std::vector<SmallBipartite> enumerate_connected_bipartite(std::size_t max_edges) {
    std::vector<SmallBipartite> all;
    std::map<std::string, SmallBipartite> level;
    SmallBipartite one{1, 1, {{0, 0}}};
    level.emplace(detail::canonical_key(1, 1, one.edges), one);
    for (std::size_t m = 1; m <= max_edges; ++m) {
        for (auto& [k, g] : level) all.push_back(g);
        if (m == max_edges) break;
        std::map<std::string, SmallBipartite> next;
        auto offer = [&](SmallBipartite h) {
            auto key = detail::canonical_key(h.a, h.b, h.edges);
            next.emplace(std::move(key), std::move(h));
        };
        for (auto& [k, g] : level) {
            std::set<std::pair<std::uint32_t, std::uint32_t>> have(g.edges.begin(), g.edges.end());
            for (std::size_t x = 0; x < g.a; ++x)
                for (std::size_t y = 0; y < g.b; ++y)
                    if (!have.count({x, y})) {
                        auto h = g;
                        h.edges.push_back({std::uint32_t(x), std::uint32_t(y)});
                        offer(std::move(h));
                    }
            for (std::size_t x = 0; x < g.a; ++x) {
                auto h = g;
                h.edges.push_back({std::uint32_t(x), std::uint32_t(h.b++)});
                offer(std::move(h));
            }
            for (std::size_t y = 0; y < g.b; ++y) {
                auto h = g;
                h.edges.push_back({std::uint32_t(h.a++), std::uint32_t(y)});
                offer(std::move(h));
            }
        }
        level = std::move(next);
    }
    return all;
}

} // namespace pathdec
