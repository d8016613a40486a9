#pragma once

#include <array>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "flow.hpp"

namespace pathdec {

struct Provenance {
    bool two_path = false;
    EdgeId first;   // the original edge, or the first half of a 2-path
    VertexId mid;   // meaningful only for 2-paths
    EdgeId second;
};

// Identity unless recorded: an unlisted edge stands for itself, an unlisted vertex is original.
class RewriteTrace {
public:
    Provenance of(EdgeId e) const {
        auto it = edges_.find(e);
        if (it != edges_.end()) return it->second;
        return Provenance{false, e, VertexId(), e};
    }
    VertexId origin(VertexId v) const {
        auto it = copies_.find(v);
        return it == copies_.end() ? v : it->second;
    }
    void record_edge(EdgeId e, Provenance p) { edges_[e] = p; }
    void record_copy(VertexId copy, VertexId orig) { copies_[copy] = origin(orig); }
    const std::map<EdgeId, Provenance>& edge_entries() const { return edges_; }
    const std::map<VertexId, VertexId>& copy_entries() const { return copies_; }

private:
    std::map<EdgeId, Provenance> edges_;
    std::map<VertexId, VertexId> copies_;
};

struct Rewrite {
    MultiGraph graph;
    RewriteTrace trace;
};

using SplitSpec = std::map<VertexId, std::vector<std::size_t>>;

inline EdgeSet pullback(const RewriteTrace& trace, const EdgeSet& f) {
    std::vector<EdgeId> out;
    for (EdgeId e : f) {
        auto p = trace.of(e);
        out.push_back(p.first);
        if (p.two_path) out.push_back(p.second);
    }
    return EdgeSet(std::move(out));
}

inline Rewrite split_vertex(const MultiGraph& g, VertexId v, const std::vector<std::size_t>& subdegrees,
                            const std::vector<EdgeSet>& assignment, RewriteTrace trace = {}) {
    auto vi = g.vindex(v);
    if (subdegrees.size() != assignment.size()) fail(Errc::BadPartition, "part count mismatch");
    std::map<EdgeId, std::size_t> part;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i].size() != subdegrees[i]) fail(Errc::DegreeMismatch, "part size differs from subdegree");
        for (EdgeId e : assignment[i]) {
            if (!part.emplace(e, i).second) fail(Errc::BadPartition, "edge in two parts");
        }
    }
    std::size_t loops_at_v = 0;
    for (auto ei : g.incident_at(vi)) {
        if (!part.count(g.edges()[ei].id)) fail(Errc::BadPartition, "incident edge unassigned");
        ++loops_at_v;
    }
    if (loops_at_v != part.size()) fail(Errc::BadPartition, "assigned edge not incident to vertex");

    std::uint32_t next = g.next_vertex_id();
    std::vector<Vertex> vs;
    for (const auto& x : g.vertices())
        if (x.id != v) vs.push_back(x);
    std::vector<VertexId> copy_ids;
    for (std::size_t i = 0; i < subdegrees.size(); ++i) {
        VertexId c(next++);
        copy_ids.push_back(c);
        vs.push_back({c, g.vertices()[vi].side});
        trace.record_copy(c, v);
    }
    std::vector<Edge> es = g.edges();
    for (auto& e : es) {
        auto it = part.find(e.id);
        if (it == part.end()) continue;
        if (e.u == v) e.u = copy_ids[it->second];
        else e.v = copy_ids[it->second];
    }
    return {MultiGraph(std::move(vs), std::move(es), g.relaxed()), std::move(trace)};
}

namespace detail {

// Detachment state: edge endpoints as copy indices.
struct Detached {
    std::vector<Vertex> vertices;
    std::vector<std::uint32_t> owner;          // copy index -> original vertex index
    std::vector<std::array<std::uint32_t, 2>> ends; // per edge index
    std::vector<std::vector<std::uint32_t>> copies_of; // original index -> copy indices

    MultiGraph build(const MultiGraph& g) const {
        std::vector<Edge> es;
        es.reserve(ends.size());
        for (std::uint32_t ei = 0; ei < ends.size(); ++ei)
            es.push_back({g.edges()[ei].id, vertices[ends[ei][0]].id, vertices[ends[ei][1]].id});
        return MultiGraph(vertices, std::move(es), g.relaxed());
    }
};

} // namespace detail

inline Rewrite detach_connected(const MultiGraph& g, const SplitSpec& spec, std::size_t k, std::uint64_t seed,
                                std::size_t budget, RewriteTrace trace = {}) {
    for (const auto& [v, parts] : spec) {
        std::size_t sum = 0;
        for (auto d : parts) {
            if (d == 0) fail(Errc::SpecViolation, "zero subdegree");
            if (d < 2 * k) fail(Errc::SpecViolation, "subdegree below 2k");
            sum += d;
        }
        if (sum != g.degree(v)) fail(Errc::SpecViolation, "subdegrees do not sum to the degree");
    }
    const std::size_t target = 2 * k;
    std::mt19937_64 rng(seed);

    detail::Detached base;
    base.copies_of.assign(g.vertex_count(), {});
    std::uint32_t next = g.next_vertex_id();
    for (std::uint32_t i = 0; i < g.vertex_count(); ++i) {
        const auto& vx = g.vertices()[i];
        auto it = spec.find(vx.id);
        std::size_t parts = it == spec.end() ? 1 : it->second.size();
        for (std::size_t p = 0; p < parts; ++p) {
            VertexId id = parts == 1 ? vx.id : VertexId(next++);
            base.copies_of[i].push_back(static_cast<std::uint32_t>(base.vertices.size()));
            base.vertices.push_back({id, vx.side});
            base.owner.push_back(i);
        }
    }
    auto finish = [&](const detail::Detached& d) {
        for (std::uint32_t c = 0; c < d.vertices.size(); ++c) {
            const auto& orig = g.vertices()[d.owner[c]].id;
            if (d.vertices[c].id != orig) trace.record_copy(d.vertices[c].id, orig);
        }
        return Rewrite{d.build(g), trace};
    };

    for (std::size_t attempt = 0; attempt < std::max<std::size_t>(budget, 1); ++attempt) {
        detail::Detached d = base;
        d.ends.assign(g.edge_count(), {0, 0});
        for (std::uint32_t ei = 0; ei < g.edge_count(); ++ei) {
            d.ends[ei][0] = d.copies_of[g.tail_at(ei)][0];
            d.ends[ei][1] = d.copies_of[g.head_at(ei)][0];
        }
        for (const auto& [v, parts] : spec) {
            auto vi = g.vindex(v);
            std::vector<std::uint32_t> inc = g.incident_at(vi);
            std::shuffle(inc.begin(), inc.end(), rng);
            std::size_t pos = 0;
            for (std::size_t p = 0; p < parts.size(); ++p)
                for (std::size_t j = 0; j < parts[p]; ++j, ++pos) {
                    auto ei = inc[pos];
                    int slot = g.tail_at(ei) == vi ? 0 : 1;
                    d.ends[ei][slot] = d.copies_of[vi][p];
                }
        }
        if (target == 0) return finish(d);

        const std::size_t rounds = 4 * d.vertices.size() + 64;
        for (std::size_t round = 0; round < rounds; ++round) {
            MultiGraph h = d.build(g);
            auto cut = cut_below(h, target);
            if (!cut) return finish(d);
            std::vector<char> in_s(d.vertices.size(), 0);
            for (VertexId x : cut->side) in_s[h.vindex(x)] = 1;
            // incident edge lists per copy
            std::vector<std::vector<std::uint32_t>> inc(d.vertices.size());
            for (std::uint32_t ei = 0; ei < d.ends.size(); ++ei) {
                inc[d.ends[ei][0]].push_back(ei);
                inc[d.ends[ei][1]].push_back(ei);
            }
            auto far = [&](std::uint32_t ei, std::uint32_t c) {
                return d.ends[ei][0] == c ? d.ends[ei][1] : d.ends[ei][0];
            };
            std::size_t need = (target - cut->value + 1) / 2;
            std::vector<std::uint32_t> order;
            for (std::uint32_t i = 0; i < g.vertex_count(); ++i)
                if (d.copies_of[i].size() > 1) order.push_back(i);
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<char> touched(d.ends.size(), 0);
            std::size_t done = 0;
            for (auto vi : order) {
                if (done >= need) break;
                std::vector<std::uint32_t> ins, outs;
                for (auto c : d.copies_of[vi]) (in_s[c] ? ins : outs).push_back(c);
                if (ins.empty() || outs.empty()) continue;
                bool swapped = false;
                for (auto c1 : ins) {
                    for (auto c2 : outs) {
                        std::vector<std::uint32_t> e1s, e2s;
                        for (auto ei : inc[c1])
                            if (!touched[ei] && in_s[far(ei, c1)]) e1s.push_back(ei);
                        for (auto ei : inc[c2])
                            if (!touched[ei] && !in_s[far(ei, c2)]) e2s.push_back(ei);
                        if (e1s.empty() || e2s.empty()) continue;
                        auto e1 = e1s[rng() % e1s.size()], e2 = e2s[rng() % e2s.size()];
                        int s1 = d.ends[e1][0] == c1 ? 0 : 1, s2 = d.ends[e2][0] == c2 ? 0 : 1;
                        d.ends[e1][s1] = c2;
                        d.ends[e2][s2] = c1;
                        touched[e1] = touched[e2] = 1;
                        swapped = true;
                        break;
                    }
                    if (swapped) break;
                }
                if (swapped) ++done;
            }
            if (done == 0) break; // cut not repairable from here, restart
        }
    }
    fail(Errc::BudgetExhausted, "no verified detachment within budget");
}

inline Rewrite lift(const MultiGraph& g, VertexId v, VertexId u, VertexId w, RewriteTrace trace = {}) {
    if (u == w || u == v || w == v) fail(Errc::SameVertex, "lift needs three distinct vertices");
    auto pick = [&](VertexId a) {
        std::optional<EdgeId> best;
        for (auto ei : g.incident_at(g.vindex(v))) {
            const Edge& e = g.edges()[ei];
            if ((e.u == a || e.v == a) && (!best || e.id < *best)) best = e.id;
        }
        if (!best) fail(Errc::MissingEdge, "no edge to lift");
        return *best;
    };
    EdgeId e1 = pick(u), e2 = pick(w);
    auto p1 = trace.of(e1), p2 = trace.of(e2);
    if (p1.two_path || p2.two_path) fail(Errc::DepthExceeded, "lifting an already lifted edge");
    EdgeId fresh(g.next_edge_id());
    std::vector<Edge> es;
    for (const auto& e : g.edges())
        if (e.id != e1 && e.id != e2) es.push_back(e);
    es.push_back({fresh, u, w});
    trace.record_edge(fresh, Provenance{true, p1.first, trace.origin(v), p2.first});
    Side su = g.side(u), sw = g.side(w);
    bool relaxed = g.relaxed() || (su != Side::None && su == sw);
    return {MultiGraph(g.vertices(), std::move(es), relaxed), std::move(trace)};
}

inline Rewrite suppress_degree_two(const MultiGraph& g, VertexId v, RewriteTrace trace = {}) {
    auto vi = g.vindex(v);
    const auto& inc = g.incident_at(vi);
    if (inc.size() != 2) fail(Errc::WrongDegree, "suppression needs degree two");
    const Edge& a = g.edges()[inc[0]];
    const Edge& b = g.edges()[inc[1]];
    VertexId u = a.u == v ? a.v : a.u, w = b.u == v ? b.v : b.u;
    if (u == w) fail(Errc::WouldCreateLoop, "both edges reach the same neighbour");
    auto p1 = trace.of(a.id), p2 = trace.of(b.id);
    if (p1.two_path || p2.two_path) fail(Errc::DepthExceeded, "suppressing through a lifted edge");
    EdgeId fresh(g.next_edge_id());
    std::vector<Edge> es;
    for (const auto& e : g.edges())
        if (e.id != a.id && e.id != b.id) es.push_back(e);
    es.push_back({fresh, u, w});
    std::vector<Vertex> vs;
    for (const auto& x : g.vertices())
        if (x.id != v) vs.push_back(x);
    EdgeId first = a.id < b.id ? p1.first : p2.first, second = a.id < b.id ? p2.first : p1.first;
    trace.record_edge(fresh, Provenance{true, first, trace.origin(v), second});
    Side su = g.side(u), sw = g.side(w);
    bool relaxed = g.relaxed() || (su != Side::None && su == sw);
    return {MultiGraph(std::move(vs), std::move(es), relaxed), std::move(trace)};
}

inline bool is_cut_vertex(const MultiGraph& g, VertexId v) {
    auto vi = g.vindex(v);
    std::vector<std::uint32_t> nbrs;
    for (auto ei : g.incident_at(vi)) nbrs.push_back(g.tail_at(ei) == vi ? g.head_at(ei) : g.tail_at(ei));
    if (nbrs.empty()) return false;
    std::vector<char> seen(g.vertex_count(), 0);
    seen[vi] = 1;
    std::vector<std::uint32_t> st{nbrs[0]};
    seen[nbrs[0]] = 1;
    while (!st.empty()) {
        auto x = st.back();
        st.pop_back();
        for (auto ei : g.incident_at(x)) {
            auto y = g.tail_at(ei) == x ? g.head_at(ei) : g.tail_at(ei);
            if (!seen[y]) {
                seen[y] = 1;
                st.push_back(y);
            }
        }
    }
    for (auto n : nbrs)
        if (!seen[n]) return true;
    return false;
}

inline std::pair<VertexId, VertexId> find_admissible_lifting(const MultiGraph& g, VertexId v, std::size_t kbar) {
    auto vi = g.vindex(v);
    if (g.degree(v) < 4) fail(Errc::PreconditionViolation, "lifting needs degree at least 4");
    std::map<VertexId, std::pair<std::size_t, EdgeId>> mult; // neighbour -> (multiplicity, lowest edge)
    for (auto ei : g.incident_at(vi)) {
        const Edge& e = g.edges()[ei];
        VertexId x = e.u == v ? e.v : e.u;
        auto [it, fresh] = mult.emplace(x, std::make_pair(0, e.id));
        ++it->second.first;
        if (e.id < it->second.second) it->second.second = e.id;
    }
    if (mult.size() < 2) fail(Errc::PreconditionViolation, "lifting needs two distinct neighbours");
    if (is_cut_vertex(g, v)) fail(Errc::CutVertex, "vertex separates its neighbours");

    std::vector<VertexId> nb;
    for (const auto& [x, m] : mult) nb.push_back(x);
    auto pairs_p = [&](const MultiGraph& h) {
        UnitFlow f(h);
        std::vector<std::size_t> p;
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j) p.push_back(f.run(h.vindex(nb[i]), h.vindex(nb[j]), kbar));
        return p;
    };
    auto before = pairs_p(g);

    struct Cand {
        VertexId u, w;
        std::size_t weight;
        EdgeId a, b;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
            auto [mu, eu] = mult[nb[i]];
            auto [mw, ew] = mult[nb[j]];
            cands.push_back({nb[i], nb[j], mu + mw, std::min(eu, ew), std::max(eu, ew)});
        }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.weight != y.weight) return x.weight > y.weight;
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    for (const auto& c : cands) {
        auto lifted = lift(g, v, c.u, c.w).graph;
        auto after = pairs_p(lifted);
        bool ok = true;
        for (std::size_t i = 0; i < after.size() && ok; ++i) ok = after[i] >= std::min(kbar, before[i]);
        if (ok) return {c.u, c.w};
    }
    fail(Errc::NoAdmissiblePair, "no pair keeps the neighbour connectivity");
}

} // namespace pathdec
