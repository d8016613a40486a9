#pragma once

#include "disentangle.hpp"
#include "factorize.hpp"
#include "verify.hpp"

namespace pathdec {

// Bookkeeping identities checked while descending and climbing back out.
struct InductionAudit {
    std::size_t levels = 0;
    std::size_t degree_checks = 0;      // d_{G'_i}(v) against d*(v)
    std::size_t extension_checks = 0;   // |S_v| against B'(v)
    std::size_t orientation_checks = 0; // forward and backward halves agree
    std::size_t balance_checks = 0;
    std::size_t rounds = 0;             // disentangling rounds over all levels
    std::vector<std::string> violations;
};

struct InductionOptions {
    InductionAudit* audit = nullptr;
    std::vector<SwapRecord>* swaps = nullptr;
};

namespace detail {

inline void audit_check(InductionAudit* audit, std::size_t InductionAudit::*counter, bool ok, Errc code,
                        const std::string& what) {
    if (audit) ++(audit->*counter);
    if (ok) return;
    if (audit) audit->violations.push_back(what);
    fail(code, what);
}

// Closed trails covering an Eulerian edge set, each starting on `side`.
inline std::vector<Tracking> closed_trails(const MultiGraph& g, const EdgeSet& f, Side side) {
    const std::uint32_t n = g.vertex_count();
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (EdgeId e : f) {
        auto ei = g.eindex(e);
        adj[g.tail_at(ei)].push_back(ei);
        adj[g.head_at(ei)].push_back(ei);
    }
    std::vector<char> used(g.edge_count(), 0);
    std::vector<std::size_t> next(n, 0);
    std::vector<Tracking> out;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (g.vertices()[s].side != side) continue;
        while (true) {
            while (next[s] < adj[s].size() && used[adj[s][next[s]]]) ++next[s];
            if (next[s] == adj[s].size()) break;
            Tracking t;
            t.vertices.push_back(g.vertices()[s].id);
            std::uint32_t cur = s;
            while (true) {
                while (next[cur] < adj[cur].size() && used[adj[cur][next[cur]]]) ++next[cur];
                if (next[cur] == adj[cur].size()) break;
                auto ei = adj[cur][next[cur]];
                used[ei] = 1;
                cur = g.tail_at(ei) == cur ? g.head_at(ei) : g.tail_at(ei);
                t.edges.push_back(g.edges()[ei].id);
                t.vertices.push_back(g.vertices()[cur].id);
            }
            if (cur != s) fail(Errc::NotEulerian, "trail did not close");
            out.push_back(std::move(t));
        }
    }
    return out;
}

// Consecutive 2-trackings of closed trails; both ends on `side`.
inline std::vector<Tracking> two_trackings(const MultiGraph& g, const EdgeSet& f, Side side) {
    std::vector<Tracking> out;
    for (const auto& t : closed_trails(g, f, side)) {
        if (t.edges.size() % 2) fail(Errc::InvariantBroken, "odd closed trail in a bipartite graph");
        for (std::size_t i = 0; i < t.edges.size(); i += 2)
            out.push_back({{t.vertices[i], t.vertices[i + 1], t.vertices[i + 2]}, {t.edges[i], t.edges[i + 1]}});
    }
    return out;
}

inline void require_shape(const Bifactorization& bif, std::size_t p, std::size_t ell) {
    for (const auto* ff : {&bif.first, &bif.second})
        if (ff->ell() != p || ff->k != p * ell || ff->eulerians.size() * 2 + p != ff->k)
            fail(Errc::ShapeMismatch, "bifactorization shape does not match the path length");
    if (bif.first.side != Side::A || bif.second.side != Side::B)
        fail(Errc::ShapeMismatch, "bifactorization sides out of order");
}

} // namespace detail

inline TrackingDecomposition base_odd(const MultiGraph& g, const Bifactorization& bif) {
    detail::require_shape(bif, 1, 3);
    TrackingDecomposition d{3, {}};
    for (const auto* ff : {&bif.first, &bif.second}) {
        // matching edges waiting at each owning vertex
        std::vector<std::vector<EdgeId>> spare(g.vertex_count());
        for (EdgeId e : ff->matchings[0]) {
            const Edge& x = g.edge(e);
            spare[g.vindex(g.side(x.u) == ff->side ? x.u : x.v)].push_back(e);
        }
        std::vector<std::size_t> taken(g.vertex_count(), 0);
        for (auto& t : detail::two_trackings(g, ff->eulerians[0], ff->side)) {
            auto vi = g.vindex(t.vertices[0]);
            if (taken[vi] == spare[vi].size()) fail(Errc::ExtensionMismatch, "more trails start here than matching edges");
            EdgeId m = spare[vi][taken[vi]++];
            t.vertices.insert(t.vertices.begin(), g.other(m, t.vertices[0]));
            t.edges.insert(t.edges.begin(), m);
            d.trackings.push_back(std::move(t));
        }
        for (std::size_t i = 0; i < spare.size(); ++i)
            if (taken[i] != spare[i].size()) fail(Errc::ExtensionMismatch, "matching edge left over");
    }
    check_decomposition(g, d);
    return d;
}

inline TrackingDecomposition base_even(const MultiGraph& g, const Bifactorization& bif) {
    detail::require_shape(bif, 2, 2);
    TrackingDecomposition d{2, {}};
    for (const auto* ff : {&bif.first, &bif.second}) {
        for (auto& t : detail::two_trackings(g, ff->eulerians[0], ff->side)) d.trackings.push_back(std::move(t));
        auto mn = ff->matchings[0] | ff->matchings[1];
        std::vector<std::vector<EdgeId>> at(g.vertex_count());
        for (EdgeId e : mn) {
            const Edge& x = g.edge(e);
            at[g.vindex(g.side(x.u) == ff->side ? x.u : x.v)].push_back(e);
        }
        for (std::uint32_t vi = 0; vi < g.vertex_count(); ++vi) {
            auto& es = at[vi];
            if (es.empty()) continue;
            if (es.size() % 2) fail(Errc::DegreeMismatch, "odd number of matching edges at a vertex");
            VertexId v = g.vertices()[vi].id;
            std::stable_sort(es.begin(), es.end(), [&](EdgeId a, EdgeId b) { return g.other(a, v) < g.other(b, v); });
            const std::size_t h = es.size() / 2;
            for (std::size_t i = 0; i < h; ++i)
                d.trackings.push_back({{g.other(es[i], v), v, g.other(es[i + h], v)}, {es[i], es[i + h]}});
        }
    }
    check_decomposition(g, d);
    return d;
}

namespace detail {

// One level of the induction on a strong (p, p*ell) bifactorization.
inline TrackingDecomposition induce(const MultiGraph& g, const Bifactorization& bif, std::size_t ell,
                                    const InductionOptions& opt) {
    const std::size_t p = bif.first.ell();
    auto* audit = opt.audit;
    if (audit) ++audit->levels;
    if (p == 1 && ell == 3) {
        auto d = base_odd(g, bif);
        audit_check(audit, &InductionAudit::balance_checks, is_balanced(g, d, bif), Errc::InvariantBroken,
                    "base case not balanced");
        return d;
    }
    if (p == 2 && ell == 2) {
        auto d = base_even(g, bif);
        audit_check(audit, &InductionAudit::balance_checks, is_balanced(g, d, bif), Errc::InvariantBroken,
                    "base case not balanced");
        return d;
    }
    if (ell < 3) fail(Errc::ShapeMismatch, "path length below the recursion floor");
    require_shape(bif, p, ell);
    const std::size_t K = p * ell, E = bif.first.eulerians.size();

    Bifactorization inner;
    EdgeSet removed;
    std::vector<std::pair<EdgeSet, bool>> owned; // (edges, owned by the factor's own side)
    for (int i = 0; i < 2; ++i) {
        const auto& ff = i == 0 ? bif.first : bif.second;
        auto& nf = i == 0 ? inner.first : inner.second;
        nf.side = ff.side;
        nf.k = K - 2 * p;
        EdgeSet forw;
        for (std::size_t j = E - p; j < E; ++j) {
            auto half = split_factor_by_orientation(g, ff.eulerians[j], ff.side);
            auto df = subset_degrees(g, half.forw), db = subset_degrees(g, half.back);
            bool even = true;
            for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
                if (g.vertices()[v].side == ff.side && df[v] != db[v]) even = false;
            audit_check(audit, &InductionAudit::orientation_checks, even, Errc::InvariantBroken,
                        "forward and backward halves differ on the owning side");
            forw = forw | half.forw;
            nf.matchings.push_back(half.back);
        }
        for (std::size_t j = 0; j + p < E; ++j) nf.eulerians.push_back(ff.eulerians[j]);
        EdgeSet mats;
        for (const auto& m : ff.matchings) mats = mats | m;
        owned.push_back({mats, true});
        owned.push_back({forw, false});
        removed = removed | mats | forw;

        // d_{G'_i}(v) = (K - 2p) d*(v) with d*(v) = d_{G_i}(v) / K
        auto dg = subset_degrees(g, ff.edges()), dgp = subset_degrees(g, nf.edges());
        for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
            if (g.vertices()[v].side != ff.side) continue;
            bool ok = dg[v] % K == 0 && dgp[v] == (K - 2 * p) * (dg[v] / K);
            audit_check(audit, &InductionAudit::degree_checks, ok, Errc::InvariantBroken,
                        "reduced degree identity fails at vertex " + std::to_string(g.vertices()[v].id.value));
        }
    }
    auto rest = g.all_edges() - removed;
    auto gp = induced_by_edges(g, rest);
    auto sub = induce(gp, inner, ell - 2, opt);

    // S_v: matching edges at their owner, forward halves at the far side
    std::vector<std::vector<EdgeId>> s(g.vertex_count());
    for (std::size_t i = 0; i < owned.size(); ++i) {
        Side own = i < 2 ? bif.first.side : bif.second.side;
        Side at = owned[i].second ? own : opposite(own);
        for (EdgeId e : owned[i].first) {
            const Edge& x = g.edge(e);
            s[g.vindex(g.side(x.u) == at ? x.u : x.v)].push_back(e);
        }
    }
    auto sub_stats = stats(gp, sub);
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
        VertexId id = g.vertices()[v].id;
        std::size_t bv = gp.has_vertex(id) ? sub_stats.b_total[gp.vindex(id)] : 0;
        audit_check(audit, &InductionAudit::extension_checks, bv == s[v].size(), Errc::ExtensionMismatch,
                    "|S_v| differs from the end count at vertex " + std::to_string(id.value));
        std::sort(s[v].begin(), s[v].end());
    }
    std::vector<std::size_t> taken(g.vertex_count(), 0);
    auto grab = [&](VertexId v) {
        auto vi = g.vindex(v);
        return s[vi][taken[vi]++];
    };
    TrackingDecomposition d{ell, {}};
    for (const auto& b : sub.trackings) {
        Tracking t;
        EdgeId e0 = grab(b.front()), e1 = grab(b.back());
        t.vertices.push_back(g.other(e0, b.front()));
        t.vertices.insert(t.vertices.end(), b.vertices.begin(), b.vertices.end());
        t.vertices.push_back(g.other(e1, b.back()));
        t.edges.push_back(e0);
        t.edges.insert(t.edges.end(), b.edges.begin(), b.edges.end());
        t.edges.push_back(e1);
        d.trackings.push_back(std::move(t));
    }
    check_decomposition(g, d);
    audit_check(audit, &InductionAudit::balance_checks, is_balanced(g, d, bif), Errc::InvariantBroken,
                "extended decomposition not balanced");
    const std::size_t t = ceil_half(ell + 1);
    audit_check(audit, &InductionAudit::balance_checks, is_precomplete(g, d, 2 * t - 1), Errc::NotPrecomplete,
                "extended decomposition not pre-complete");
    d = improve_completeness(g, std::move(d), t);
    audit_check(audit, &InductionAudit::balance_checks, is_complete(g, d, t) && is_balanced(g, d, bif),
                Errc::InvariantBroken, "completeness step lost balance");
    std::size_t rounds = 0;
    DisentangleOptions dop;
    dop.audit = opt.swaps;
    dop.rounds = &rounds;
    d = disentangle(g, std::move(d), t, dop);
    if (audit) audit->rounds += rounds;
    audit_check(audit, &InductionAudit::balance_checks, d.tau() == 0 && is_balanced(g, d, bif),
                Errc::InvariantBroken, "disentangled decomposition not balanced");
    return d;
}

} // namespace detail

inline PathDecomposition to_path_decomposition(const TrackingDecomposition& d) {
    PathDecomposition out;
    out.ell = d.ell;
    for (const auto& b : d.trackings) {
        if (!is_path(b)) fail(Errc::InvariantBroken, "tracking is not a path");
        out.paths.push_back(b.vertices);
        out.edges.push_back(b.edges);
    }
    return out;
}

inline PathDecomposition gate(const MultiGraph& g, PathDecomposition d) {
    auto rep = verify_decomposition(g, d.ell, d);
    if (!rep.ok) fail(Errc::VerificationFailed, rep.violations.empty() ? "verifier rejected" : rep.violations[0]);
    return d;
}

// l = 2k+1 from a strong (1, 2k+1)-bifactorization.
inline PathDecomposition decompose_odd(const MultiGraph& g, const Bifactorization& bif, std::size_t k,
                                       const InductionOptions& opt = {}) {
    if (k == 0) fail(Errc::PreconditionViolation, "k must be positive");
    detail::require_shape(bif, 1, 2 * k + 1);
    return gate(g, to_path_decomposition(detail::induce(g, bif, 2 * k + 1, opt)));
}

// l = 2k+2 from a strong (2, 2(2k+2))-bifactorization.
inline PathDecomposition decompose_even(const MultiGraph& g, const Bifactorization& bif, std::size_t k,
                                        const InductionOptions& opt = {}) {
    detail::require_shape(bif, 2, 2 * k + 2);
    return gate(g, to_path_decomposition(detail::induce(g, bif, 2 * k + 2, opt)));
}

enum class EvenVariant { DoubleDivisor, SingleDivisor };

struct ConnectivityRequirement {
    std::size_t ell = 0;
    std::size_t threshold = 0;
    std::size_t divisor = 0;
};

inline ConnectivityRequirement required_connectivity(std::size_t ell, EvenVariant v = EvenVariant::DoubleDivisor) {
    if (ell == 0) fail(Errc::PreconditionViolation, "l must be positive");
    if (ell == 1) return {1, 0, 1};
    if (ell % 2) {
        std::size_t k = (ell - 1) / 2, r = (2 * k + 1) * (2 * k + 2);
        return {ell, 2 * (6 * k + 2 * r + 1), ell};
    }
    std::size_t k = (ell - 2) / 2, r = std::max(32 * (2 * k + 1), (2 * k + 2) * (2 * k + 4));
    if (v == EvenVariant::DoubleDivisor) return {ell, 2 * (12 * k + 2 * r + 10), 2 * ell};
    return {ell, 2 * (26 * k + 4 * r + 22), ell};
}

// A simple l-path, preferring edges outside the protected trees.
inline Tracking find_path_copy(const MultiGraph& g, std::size_t ell, const TreePack& protect = {}) {
    if (ell == 0) fail(Errc::PreconditionViolation, "l must be positive");
    std::vector<std::size_t> hits(g.edge_count(), 0);
    for (const auto& t : protect)
        for (EdgeId e : t) ++hits[g.eindex(e)];
    std::vector<std::vector<std::uint32_t>> adj(g.vertex_count());
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
        adj[v] = g.incident_at(v);
        std::sort(adj[v].begin(), adj[v].end(), [&](std::uint32_t a, std::uint32_t b) {
            return std::pair(hits[a], a) < std::pair(hits[b], b);
        });
    }
    std::vector<char> on(g.vertex_count(), 0);
    std::vector<std::uint32_t> vs, es;
    std::size_t steps = 0;
    const std::size_t cap = 1'000'000;
    std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t v) {
        if (es.size() == ell) return true;
        if (++steps > cap) return false;
        for (auto ei : adj[v]) {
            std::uint32_t w = g.tail_at(ei) == v ? g.head_at(ei) : g.tail_at(ei);
            if (on[w]) continue;
            on[w] = 1;
            vs.push_back(w);
            es.push_back(ei);
            if (dfs(w)) return true;
            on[w] = 0;
            vs.pop_back();
            es.pop_back();
        }
        return false;
    };
    for (std::uint32_t s = 0; s < g.vertex_count() && steps <= cap; ++s) {
        on.assign(g.vertex_count(), 0);
        vs = {s};
        es.clear();
        on[s] = 1;
        if (dfs(s)) {
            Tracking t;
            for (auto v : vs) t.vertices.push_back(g.vertices()[v].id);
            for (auto e : es) t.edges.push_back(g.edges()[e].id);
            return t;
        }
    }
    fail(Errc::NoPath, "no simple path of length " + std::to_string(ell));
}

struct DecomposeOptions {
    std::uint64_t seed = 0;
    std::size_t budget = 64;
    std::optional<Bifactorization> hint;   // skip factorization when supplied
    std::optional<SplitPair> certified;    // attached connected split
    std::function<void(const std::string&)> warn;
    InductionAudit* audit = nullptr;
    std::vector<SwapRecord>* swaps = nullptr;
};

inline PathDecomposition decompose(const MultiGraph& g, std::size_t ell, const DecomposeOptions& opt = {}) {
    if (ell == 0) fail(Errc::PreconditionViolation, "l must be positive");
    if (g.relaxed()) fail(Errc::PreconditionViolation, "input is not bipartite");
    if (g.edge_count() % ell) fail(Errc::DivisibilityError, "|E| is not divisible by l");
    PathDecomposition out;
    out.ell = ell;
    if (g.edge_count() == 0) return out;
    if (ell == 1) {
        for (const auto& e : g.edges()) {
            out.paths.push_back({e.u, e.v});
            out.edges.push_back({e.id});
        }
        return gate(g, out);
    }
    const bool odd = ell % 2;
    if (!odd && g.edge_count() % (2 * ell)) {
        // |E| = 2rl + l: set one path aside and decompose the rest
        TreePack pack;
        auto lambda = edge_connectivity(g);
        try {
            if (lambda >= 2) pack = pack_spanning_trees(g, lambda / 2);
        } catch (const Error&) {
            pack.clear();
        }
        auto t = find_path_copy(g, ell, pack);
        auto rest = without_edges(g, EdgeSet(t.edges));
        DecomposeOptions sub = opt;
        sub.hint.reset();
        sub.certified.reset();
        out = decompose(rest, ell, sub);
        out.paths.push_back(t.vertices);
        out.edges.push_back(t.edges);
        return gate(g, out);
    }
    auto need = required_connectivity(ell);
    if (opt.warn) {
        auto lambda = edge_connectivity(g);
        if (lambda < need.threshold)
            opt.warn("edge connectivity " + std::to_string(lambda) + " is below the sufficient threshold " +
                     std::to_string(need.threshold) + "; proceeding");
    }
    BifactorizeOptions bo;
    bo.seed = opt.seed;
    bo.budget = opt.budget;
    bo.certified = opt.certified;
    bo.warn = opt.warn;
    InductionOptions io{opt.audit, opt.swaps};
    const std::size_t k = odd ? (ell - 1) / 2 : (ell - 2) / 2;
    Bifactorization bif;
    if (opt.hint) {
        if (!verify_strong(g, *opt.hint)) fail(Errc::PreconditionViolation, "supplied bifactorization is not strong");
        bif = *opt.hint;
    } else {
        bif = odd ? bifactorize_odd(g, k, bo) : bifactorize_even(g, ell - 1, bo);
    }
    return odd ? decompose_odd(g, bif, k, io) : decompose_even(g, bif, k, io);
}

} // namespace pathdec
