#pragma once

#include <functional>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "packing.hpp"
#include "surgery.hpp"

namespace pathdec {

// (X, l, k) shape: l = matchings.size(), (k - l)/2 Eulerian factors.
struct FractionalFactorization {
    Side side = Side::A;
    std::size_t k = 0;
    std::vector<EdgeSet> matchings;
    std::vector<EdgeSet> eulerians;

    std::size_t ell() const { return matchings.size(); }
    EdgeSet edges() const {
        EdgeSet all;
        for (const auto& m : matchings) all = all | m;
        for (const auto& f : eulerians) all = all | f;
        return all;
    }
};

struct Bifactorization {
    FractionalFactorization first;  // side A
    FractionalFactorization second; // side B
};

struct OrientedFactorSplit {
    EdgeSet forw;
    EdgeSet back;
};

// Diagnostics of the regular auxiliary graph built while factorizing.
struct RegularCoreReport {
    std::size_t vertices = 0;
    std::size_t edges = 0;
    bool regular = false;
    bool even_order = false;
    std::size_t connectivity = 0;
    bool side_independent = false;
    std::size_t lifts = 0;
    std::size_t suppressions = 0;
};

inline bool verify_factor(const MultiGraph& g, const EdgeSet& f, Side x, std::size_t r, std::size_t k) {
    check_subset(g, f);
    if (k == 0) return false;
    auto df = subset_degrees(g, f);
    for (std::uint32_t i = 0; i < g.vertex_count(); ++i) {
        if (g.vertices()[i].side != x) continue;
        if (df[i] * k != r * g.incident_at(i).size()) return false;
    }
    return true;
}

inline bool verify_fractional(const MultiGraph& g, const FractionalFactorization& ff) {
    std::size_t total = 0;
    for (const auto& m : ff.matchings) total += m.size();
    for (const auto& f : ff.eulerians) total += f.size();
    auto all = ff.edges();
    if (all.size() != total) return false; // overlap
    for (EdgeId e : all)
        if (!g.has_edge(e)) return false;
    if (ff.k < ff.ell() || (ff.k - ff.ell()) % 2 || ff.eulerians.size() != (ff.k - ff.ell()) / 2) return false;
    auto host = induced_by_edges(g, all);
    for (const auto& m : ff.matchings)
        if (!verify_factor(host, m, ff.side, 1, ff.k)) return false;
    for (const auto& f : ff.eulerians)
        if (!is_eulerian_subset(host, f) || !verify_factor(host, f, ff.side, 2, ff.k)) return false;
    return true;
}

inline bool verify_bifactorization(const MultiGraph& g, const Bifactorization& bif) {
    if (bif.first.side != Side::A || bif.second.side != Side::B) return false;
    auto e1 = bif.first.edges(), e2 = bif.second.edges();
    if (!e1.disjoint(e2) || (e1 | e2) != g.all_edges()) return false;
    return verify_fractional(g, bif.first) && verify_fractional(g, bif.second);
}

// Degree floor (k/p)((k/p)+p) on each owning side, p the number of matchings.
inline std::size_t strong_floor(std::size_t p, std::size_t k) {
    if (p == 0 || k % p) return 0;
    return (k / p) * (k / p + p);
}

inline bool verify_strong(const MultiGraph& g, const Bifactorization& bif) {
    if (!verify_bifactorization(g, bif)) return false;
    if (bif.first.ell() != bif.second.ell() || bif.first.k != bif.second.k) return false;
    auto floor = strong_floor(bif.first.ell(), bif.first.k);
    if (floor == 0) return false;
    auto d1 = subset_degrees(g, bif.first.edges()), d2 = subset_degrees(g, bif.second.edges());
    for (std::uint32_t i = 0; i < g.vertex_count(); ++i) {
        Side s = g.vertices()[i].side;
        if (s == Side::A && d1[i] < floor) return false;
        if (s == Side::B && d2[i] < floor) return false;
    }
    return true;
}

inline OrientedFactorSplit split_factor_by_orientation(const MultiGraph& g, const EdgeSet& f, Side side) {
    auto o = eulerian_orientation(g, f);
    std::vector<EdgeId> fw, bk;
    for (const auto& a : o.arcs()) (g.side(a.tail) == side ? fw : bk).push_back(a.edge);
    return {EdgeSet(std::move(fw)), EdgeSet(std::move(bk))};
}

inline EdgeSet perfect_matching(const MultiGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n % 2) fail(Errc::NoPerfectMatching, "odd order");
    using BG = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
    BG bg(n);
    std::map<std::pair<std::uint32_t, std::uint32_t>, EdgeId> rep;
    for (std::uint32_t ei = 0; ei < g.edge_count(); ++ei) {
        auto a = std::min(g.tail_at(ei), g.head_at(ei)), b = std::max(g.tail_at(ei), g.head_at(ei));
        auto id = g.edges()[ei].id;
        auto [it, fresh] = rep.emplace(std::make_pair(a, b), id);
        if (fresh) boost::add_edge(a, b, bg);
        else if (id < it->second) it->second = id;
    }
    std::vector<boost::graph_traits<BG>::vertex_descriptor> mate(n);
    boost::edmonds_maximum_cardinality_matching(bg, &mate[0]);
    std::vector<EdgeId> out;
    for (std::uint32_t v = 0; v < n; ++v) {
        auto u = mate[v];
        if (u == boost::graph_traits<BG>::null_vertex()) fail(Errc::NoPerfectMatching, "vertex left unmatched");
        if (v < u) out.push_back(rep.at({v, static_cast<std::uint32_t>(u)}));
    }
    return EdgeSet(std::move(out));
}

inline std::vector<EdgeSet> two_factorization(const MultiGraph& g) {
    const std::size_t n = g.vertex_count();
    if (n == 0) return {};
    std::size_t d = g.incident_at(0).size();
    for (std::uint32_t i = 0; i < n; ++i)
        if (g.incident_at(i).size() != d || d % 2) fail(Errc::NotEvenRegular, "input is not 2k-regular");
    const std::size_t k = d / 2;
    auto o = eulerian_orientation(g, g.all_edges());
    // out-copy i on the left, in-copy j on the right
    std::vector<std::vector<std::pair<std::uint32_t, EdgeId>>> adj(n);
    for (const auto& a : o.arcs()) adj[g.vindex(a.tail)].push_back({g.vindex(a.head), a.edge});
    std::set<EdgeId> used;
    std::vector<EdgeSet> parts;
    for (std::size_t round = 0; round < k; ++round) {
        std::vector<std::int64_t> right_mate(n, -1);
        std::vector<EdgeId> via(n);
        std::vector<char> seen;
        std::function<bool(std::uint32_t)> augment = [&](std::uint32_t u) -> bool {
            for (auto [w, e] : adj[u]) {
                if (used.count(e) || seen[w]) continue;
                seen[w] = 1;
                if (right_mate[w] < 0 || augment(static_cast<std::uint32_t>(right_mate[w]))) {
                    right_mate[w] = u;
                    via[w] = e;
                    return true;
                }
            }
            return false;
        };
        for (std::uint32_t u = 0; u < n; ++u) {
            seen.assign(n, 0);
            if (!augment(u)) fail(Errc::InvariantBroken, "regular bipartite graph without perfect matching");
        }
        std::vector<EdgeId> part;
        for (std::uint32_t w = 0; w < n; ++w) {
            part.push_back(via[w]);
            used.insert(via[w]);
        }
        parts.emplace_back(std::move(part));
    }
    return parts;
}

// (X,1,2k+1)-fractional factorization of a 2k-edge-connected bipartite graph:
// detach into (2k+1)/2k-degree copies, lift and suppress the other side down to
// a (2k+1)-regular core, match it, 2-factor the rest, pull everything back.
inline FractionalFactorization fractional_factorization_odd(const MultiGraph& g, Side side, std::size_t k,
                                                            std::uint64_t seed, std::size_t budget,
                                                            RegularCoreReport* report = nullptr) {
    if (k == 0) fail(Errc::PreconditionViolation, "k must be positive");
    if (side == Side::None) fail(Errc::PreconditionViolation, "side must be A or B");
    const std::size_t odd = 2 * k + 1, even = 2 * k;
    SplitSpec spec;
    for (const auto& v : g.vertices()) {
        std::size_t d = g.degree(v.id);
        if (v.side == side) {
            if (d % odd) fail(Errc::PreconditionViolation, "side degree not divisible by 2k+1");
            if (d > odd) spec[v.id] = std::vector<std::size_t>(d / odd, odd);
        } else {
            if (d < even) fail(Errc::PreconditionViolation, "degree below 2k");
            std::size_t s = d / even, rem = d % even;
            std::vector<std::size_t> parts(s, even);
            parts[0] += rem;
            if (s > 1) spec[v.id] = parts;
        }
    }
    RegularCoreReport rep;
    auto det = detach_connected(g, spec, k, seed, budget);
    MultiGraph h = std::move(det.graph);
    RewriteTrace trace = std::move(det.trace);
    Side other = opposite(side);

    auto other_degree_ok = [&](const MultiGraph& x) {
        for (const auto& v : x.vertices())
            if (v.side == other) {
                auto d = x.degree(v.id);
                if (d < 2 || d > 4 * k - 1) return false;
            }
        return true;
    };
    if (!other_degree_ok(h)) fail(Errc::InvariantBroken, "detached degree outside [2, 4k-1]");

    // lift until every other-side vertex has degree 1, 2 or 2k+1
    while (true) {
        std::optional<VertexId> pick;
        std::size_t best = 0;
        for (const auto& v : h.vertices()) {
            if (v.side != other) continue;
            auto d = h.degree(v.id);
            if (d == 1) fail(Errc::InvariantBroken, "degree one after lifting");
            if (d == 2 || d == odd) continue;
            if (!pick || d < best) {
                pick = v.id;
                best = d;
            }
        }
        if (!pick) break;
        auto [u, w] = find_admissible_lifting(h, *pick, even);
        auto lifted = lift(h, *pick, u, w, std::move(trace));
        h = std::move(lifted.graph);
        trace = std::move(lifted.trace);
        ++rep.lifts;
        if (!other_degree_ok(h)) fail(Errc::InvariantBroken, "lifted degree outside [2, 4k-1]");
    }
    // suppress degree-2 vertices; loops are avoided by retrying later
    while (true) {
        bool progress = false, left = false;
        std::vector<VertexId> twos;
        for (const auto& v : h.vertices())
            if (v.side == other && h.degree(v.id) == 2) twos.push_back(v.id);
        for (VertexId v : twos) {
            try {
                auto s = suppress_degree_two(h, v, std::move(trace));
                h = std::move(s.graph);
                trace = std::move(s.trace);
                ++rep.suppressions;
                progress = true;
            } catch (const Error& e) {
                if (e.code() != Errc::WouldCreateLoop) throw;
                left = true;
            }
        }
        if (!left) break;
        if (!progress) fail(Errc::WouldCreateLoop, "every remaining suppression would create a loop");
    }

    rep.vertices = h.vertex_count();
    rep.edges = h.edge_count();
    rep.regular = true;
    for (const auto& v : h.vertices())
        if (h.degree(v.id) != odd) rep.regular = false;
    rep.even_order = h.vertex_count() % 2 == 0;
    rep.connectivity = h.vertex_count() >= 2 ? edge_connectivity(h) : 0;
    rep.side_independent = true;
    for (const auto& e : h.edges())
        if (h.side(e.u) == other && h.side(e.v) == other) rep.side_independent = false;
    if (report) *report = rep;
    if (!rep.regular || !rep.even_order || rep.connectivity < even || !rep.side_independent)
        fail(Errc::InvariantBroken, "regular core fails its checks");

    auto mstar = perfect_matching(h);
    auto rest = h.all_edges() - mstar;
    auto factors = two_factorization(induced_by_edges(h, rest));

    FractionalFactorization ff;
    ff.side = side;
    ff.k = odd;
    ff.matchings.push_back(pullback(trace, mstar));
    for (const auto& f : factors) ff.eulerians.push_back(pullback(trace, f));
    if (ff.edges() != g.all_edges() || !verify_fractional(g, ff))
        fail(Errc::InvariantBroken, "pulled-back factorization does not verify");
    return ff;
}

// (X,2,2k+2) shape: fraction split with parameters 2k+1, m=2k, r=1, then the odd
// factorization on the larger part; the smaller part becomes the second matching.
inline FractionalFactorization fractional_factorization_even2(const MultiGraph& g, Side side, std::size_t k,
                                                              std::uint64_t seed, std::size_t budget) {
    if (k == 0) fail(Errc::PreconditionViolation, "k must be positive");
    for (const auto& v : g.vertices())
        if (v.side == side && g.degree(v.id) % (2 * k + 2))
            fail(Errc::PreconditionViolation, "side degree not divisible by 2k+2");
    auto parts = fraction_split(g, 2 * k + 1, 2 * k, 1, side);
    auto gk = induced_by_edges(g, parts.first);
    auto inner = fractional_factorization_odd(gk, side, k, seed, budget);
    FractionalFactorization ff;
    ff.side = side;
    ff.k = 2 * k + 2;
    ff.matchings = {inner.matchings[0], parts.second};
    ff.eulerians = inner.eulerians;
    if (ff.edges() != g.all_edges() || !verify_fractional(g, ff))
        fail(Errc::InvariantBroken, "even factorization does not verify");
    return ff;
}

struct BifactorizeOptions {
    std::uint64_t seed = 0;
    std::size_t budget = 64;
    std::optional<SplitPair> certified;           // attached split, verified before use
    bool allow_smaller_r = true;                  // retry with the minimum connectivity the next step needs
    std::function<void(const std::string&)> warn; // optional diagnostics sink
};

inline std::size_t odd_split_r(std::size_t k) { return (2 * k + 1) * (2 * k + 2); }
inline std::size_t even_split_r(std::size_t k) { return std::max(32 * k, (k + 1) * (k + 3)); }

namespace detail {

inline SplitPair split_with_fallback(const MultiGraph& g, std::size_t divisor, std::size_t r, std::size_t r_min,
                                     const BifactorizeOptions& opt) {
    try {
        return connected_split(g, divisor, r, opt.seed, opt.budget, opt.certified);
    } catch (const Error& e) {
        if (e.code() != Errc::BudgetExhausted || !opt.allow_smaller_r || r_min >= r) throw;
        if (opt.warn) opt.warn("split with r=" + std::to_string(r) + " failed; retrying with r=" + std::to_string(r_min));
        return connected_split(g, divisor, r_min, opt.seed, opt.budget);
    }
}

} // namespace detail

inline Bifactorization bifactorize_odd(const MultiGraph& g, std::size_t k, const BifactorizeOptions& opt = {}) {
    if (k == 0) fail(Errc::PreconditionViolation, "k must be positive");
    if (g.edge_count() % (2 * k + 1)) fail(Errc::DivisibilityError, "|E| not divisible by 2k+1");
    auto split = detail::split_with_fallback(g, 2 * k + 1, odd_split_r(k), 2 * k, opt);
    Bifactorization bif;
    bif.first = fractional_factorization_odd(induced_by_edges(g, split.first), Side::A, k, opt.seed, opt.budget);
    bif.second = fractional_factorization_odd(induced_by_edges(g, split.second), Side::B, k, opt.seed + 1, opt.budget);
    if (!verify_strong(g, bif)) fail(Errc::BudgetExhausted, "split halves too thin for a strong bifactorization");
    return bif;
}

inline Bifactorization bifactorize_even(const MultiGraph& g, std::size_t k, const BifactorizeOptions& opt = {}) {
    if (k == 0) fail(Errc::PreconditionViolation, "k must be positive");
    if (g.edge_count() % (2 * k + 2)) fail(Errc::DivisibilityError, "|E| not divisible by 2k+2");
    auto split = detail::split_with_fallback(g, 2 * k + 2, even_split_r(k), 2 * k, opt);
    Bifactorization bif;
    bif.first = fractional_factorization_even2(induced_by_edges(g, split.first), Side::A, k, opt.seed, opt.budget);
    bif.second = fractional_factorization_even2(induced_by_edges(g, split.second), Side::B, k, opt.seed + 1, opt.budget);
    if (!verify_strong(g, bif)) fail(Errc::BudgetExhausted, "split halves too thin for a strong bifactorization");
    return bif;
}

// ---- documents ----

inline nlohmann::json to_json(const FractionalFactorization& ff) {
    nlohmann::json o{{"side", side_name(ff.side)}, {"k", ff.k}};
    o["M"] = edge_ids_json(ff.matchings.empty() ? EdgeSet{} : ff.matchings[0]);
    if (ff.matchings.size() > 1) o["N"] = edge_ids_json(ff.matchings[1]);
    nlohmann::json fs = nlohmann::json::array();
    for (const auto& f : ff.eulerians) fs.push_back(edge_ids_json(f));
    o["F"] = std::move(fs);
    return o;
}

inline FractionalFactorization factorization_from_json(const nlohmann::json& o) {
    FractionalFactorization ff;
    try {
        auto s = o.at("side").get<std::string>();
        ff.side = s == "A" ? Side::A : s == "B" ? Side::B : Side::None;
        ff.k = o.at("k").get<std::size_t>();
        ff.matchings.push_back(edge_ids_from_json(o.at("M")));
        if (o.contains("N")) ff.matchings.push_back(edge_ids_from_json(o.at("N")));
        for (const auto& f : o.at("F")) ff.eulerians.push_back(edge_ids_from_json(f));
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ParseError, std::string("factorization: ") + e.what());
    }
    return ff;
}

inline nlohmann::json to_json(const Bifactorization& b) {
    return {{"first", to_json(b.first)}, {"second", to_json(b.second)}};
}

inline Bifactorization bifactorization_from_json(const nlohmann::json& o) {
    try {
        return {factorization_from_json(o.at("first")), factorization_from_json(o.at("second"))};
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ParseError, std::string("bifactorization: ") + e.what());
    }
}

} // namespace pathdec
