#pragma once

#include "factorize.hpp"

namespace pathdec {

struct Tracking {
    std::vector<VertexId> vertices; // x_0 .. x_l
    std::vector<EdgeId> edges;      // e_i joins x_i and x_{i+1}

    std::size_t length() const { return edges.size(); }
    VertexId front() const { return vertices.front(); }
    VertexId back() const { return vertices.back(); }
    friend bool operator==(const Tracking&, const Tracking&) = default;
};

inline Tracking reverse(const Tracking& b) {
    return {std::vector<VertexId>(b.vertices.rbegin(), b.vertices.rend()),
            std::vector<EdgeId>(b.edges.rbegin(), b.edges.rend())};
}

inline std::size_t occurrences(const Tracking& b, VertexId v) {
    return static_cast<std::size_t>(std::count(b.vertices.begin(), b.vertices.end(), v));
}

// degree of v in the trail: interior visits count twice, end visits once
inline std::size_t trail_degree(const Tracking& b, VertexId v) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < b.vertices.size(); ++i)
        if (b.vertices[i] == v) d += (i == 0 || i + 1 == b.vertices.size()) ? 1 : 2;
    return d;
}

inline std::size_t tau(const Tracking& b) {
    return (occurrences(b, b.front()) > 1 ? 1 : 0) + (occurrences(b, b.back()) > 1 ? 1 : 0);
}

inline bool is_path(const Tracking& b) { return tau(b) == 0; }

inline bool contains_vertex(const Tracking& b, VertexId v) {
    return std::find(b.vertices.begin(), b.vertices.end(), v) != b.vertices.end();
}

inline void check_tracking(const MultiGraph& g, const Tracking& b) {
    if (b.vertices.size() != b.edges.size() + 1) fail(Errc::EdgeMismatch, "sequence lengths disagree");
    for (std::size_t i = 0; i < b.edges.size(); ++i) {
        if (!g.has_edge(b.edges[i])) fail(Errc::EdgeMismatch, "unknown edge " + std::to_string(b.edges[i].value));
        const Edge& e = g.edge(b.edges[i]);
        VertexId x = b.vertices[i], y = b.vertices[i + 1];
        if (!((e.u == x && e.v == y) || (e.u == y && e.v == x)))
            fail(Errc::EdgeMismatch, "edge " + std::to_string(e.id.value) + " does not join its neighbours");
    }
    std::vector<EdgeId> es = b.edges;
    std::sort(es.begin(), es.end());
    if (std::adjacent_find(es.begin(), es.end()) != es.end()) fail(Errc::RepeatedEdge, "edge used twice");
    if (b.vertices.size() > 2) {
        std::vector<VertexId> inner(b.vertices.begin() + 1, b.vertices.end() - 1);
        std::sort(inner.begin(), inner.end());
        if (std::adjacent_find(inner.begin(), inner.end()) != inner.end())
            fail(Errc::NotVanilla, "interior revisits a vertex");
    }
}

inline Tracking make_tracking(const MultiGraph& g, std::vector<VertexId> vertices, std::vector<EdgeId> edges) {
    Tracking b{std::move(vertices), std::move(edges)};
    check_tracking(g, b);
    return b;
}

struct TrackingDecomposition {
    std::size_t ell = 0;
    std::vector<Tracking> trackings;

    std::size_t tau() const {
        std::size_t t = 0;
        for (const auto& b : trackings) t += pathdec::tau(b);
        return t;
    }
    friend bool operator==(const TrackingDecomposition&, const TrackingDecomposition&) = default;
};

inline void check_decomposition(const MultiGraph& g, const TrackingDecomposition& d) {
    std::vector<char> seen(g.edge_count(), 0);
    std::size_t covered = 0;
    for (const auto& b : d.trackings) {
        if (b.length() != d.ell) fail(Errc::EdgeMismatch, "tracking of the wrong length");
        check_tracking(g, b);
        for (EdgeId e : b.edges) {
            auto ei = g.eindex(e);
            if (seen[ei]) fail(Errc::RepeatedEdge, "edge in two trackings");
            seen[ei] = 1;
            ++covered;
        }
    }
    if (covered != g.edge_count()) fail(Errc::EdgeMismatch, "edges left uncovered");
}

inline bool is_valid_decomposition(const MultiGraph& g, const TrackingDecomposition& d) {
    try {
        check_decomposition(g, d);
        return true;
    } catch (const Error&) {
        return false;
    }
}

// One end edge of a tracking: `inner` is x_1 (or x_{l-1}), `far` is x_0 (or x_l).
struct EndSlot {
    std::size_t tracking;
    int end; // 0 = start, 1 = finish
    VertexId inner;
    VertexId far;
    EdgeId edge;
};

inline EndSlot end_slot(const TrackingDecomposition& d, std::size_t t, int end) {
    const auto& b = d.trackings[t];
    std::size_t l = b.length();
    if (end == 0) return {t, 0, b.vertices[1], b.vertices[0], b.edges[0]};
    return {t, 1, b.vertices[l - 1], b.vertices[l], b.edges[l - 1]};
}

inline bool is_hanging(const TrackingDecomposition& d, const EndSlot& s) {
    return occurrences(d.trackings[s.tracking], s.far) == 1;
}

struct TrackingStats {
    std::vector<std::size_t> hang, prehang, b_odd, b_even, b_total; // by host vertex index
    std::size_t tau = 0;
};

inline TrackingStats stats(const MultiGraph& g, const TrackingDecomposition& d) {
    const std::size_t n = g.vertex_count();
    TrackingStats s;
    s.hang.assign(n, 0);
    s.prehang.assign(n, 0);
    s.b_odd.assign(n, 0);
    s.b_even.assign(n, 0);
    s.b_total.assign(n, 0);
    for (std::size_t t = 0; t < d.trackings.size(); ++t) {
        const auto& b = d.trackings[t];
        s.tau += pathdec::tau(b);
        for (int end = 0; end < 2; ++end) {
            auto slot = end_slot(d, t, end);
            auto vi = g.vindex(slot.inner);
            ++s.prehang[vi];
            if (is_hanging(d, slot)) ++s.hang[vi];
        }
        ++s.b_total[g.vindex(b.front())];
        ++s.b_total[g.vindex(b.back())];
        if (b.front() == b.back()) ++s.b_even[g.vindex(b.front())];
        else {
            ++s.b_odd[g.vindex(b.front())];
            ++s.b_odd[g.vindex(b.back())];
        }
    }
    return s;
}

inline bool is_precomplete(const MultiGraph& g, const TrackingDecomposition& d, std::size_t k) {
    auto s = stats(g, d);
    return std::all_of(s.prehang.begin(), s.prehang.end(), [&](std::size_t x) { return x > k; });
}

inline bool is_complete(const MultiGraph& g, const TrackingDecomposition& d, std::size_t k) {
    auto s = stats(g, d);
    return std::all_of(s.hang.begin(), s.hang.end(), [&](std::size_t x) { return x > k; });
}

// B(v) = d_{G_own}(v)/l + sum of the other side's matching degrees at v.
inline bool is_balanced(const MultiGraph& g, const TrackingDecomposition& d, const Bifactorization& bif) {
    const std::size_t l = d.ell;
    if (l == 0) return false;
    auto s = stats(g, d);
    auto own_a = subset_degrees(g, bif.first.edges()), own_b = subset_degrees(g, bif.second.edges());
    std::vector<std::size_t> match_a(g.vertex_count(), 0), match_b(g.vertex_count(), 0);
    for (const auto& m : bif.second.matchings) {
        auto dm = subset_degrees(g, m);
        for (std::size_t i = 0; i < dm.size(); ++i) match_a[i] += dm[i];
    }
    for (const auto& m : bif.first.matchings) {
        auto dm = subset_degrees(g, m);
        for (std::size_t i = 0; i < dm.size(); ++i) match_b[i] += dm[i];
    }
    for (std::uint32_t i = 0; i < g.vertex_count(); ++i) {
        Side sd = g.vertices()[i].side;
        std::size_t own = sd == Side::A ? own_a[i] : own_b[i];
        std::size_t cross = sd == Side::A ? match_a[i] : match_b[i];
        if (sd == Side::None) return false;
        if (own % l || s.b_total[i] != own / l + cross) return false;
    }
    return true;
}

inline bool is_balanced_odd(const MultiGraph& g, const TrackingDecomposition& d, const Bifactorization& bif,
                            std::size_t k) {
    if (d.ell != 2 * k + 1 || bif.first.ell() != 1 || bif.first.k != 2 * k + 1 || bif.second.ell() != 1 ||
        bif.second.k != 2 * k + 1)
        fail(Errc::ShapeMismatch, "expected a (1,2k+1) bifactorization and (2k+1)-trackings");
    return is_balanced(g, d, bif);
}

inline bool is_balanced_even(const MultiGraph& g, const TrackingDecomposition& d, const Bifactorization& bif,
                             std::size_t k) {
    if (d.ell != 2 * k + 2 || bif.first.ell() != 2 || bif.first.k != 2 * (2 * k + 2) || bif.second.ell() != 2 ||
        bif.second.k != 2 * (2 * k + 2))
        fail(Errc::ShapeMismatch, "expected a (2,2(2k+2)) bifactorization and (2k+2)-trackings");
    return is_balanced(g, d, bif);
}

// ---- documents ----

inline nlohmann::json to_json(const TrackingDecomposition& d) {
    nlohmann::json ts = nlohmann::json::array();
    for (const auto& b : d.trackings) {
        nlohmann::json vs = nlohmann::json::array(), es = nlohmann::json::array();
        for (auto v : b.vertices) vs.push_back(v.value);
        for (auto e : b.edges) es.push_back(e.value);
        ts.push_back({{"vertices", std::move(vs)}, {"edges", std::move(es)}});
    }
    return {{"ell", d.ell}, {"trackings", std::move(ts)}};
}

inline TrackingDecomposition tracking_decomposition_from_json(const nlohmann::json& o) {
    TrackingDecomposition d;
    try {
        d.ell = o.at("ell").get<std::size_t>();
        for (const auto& t : o.at("trackings")) {
            Tracking b;
            for (const auto& v : t.at("vertices")) b.vertices.push_back(VertexId(v.get<std::uint32_t>()));
            for (const auto& e : t.at("edges")) b.edges.push_back(EdgeId(e.get<std::uint32_t>()));
            d.trackings.push_back(std::move(b));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ParseError, std::string("tracking decomposition: ") + e.what());
    }
    return d;
}

} // namespace pathdec
