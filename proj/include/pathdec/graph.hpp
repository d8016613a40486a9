#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace pathdec {

template <class Tag>
struct Id {
    std::uint32_t value = 0;
    constexpr Id() = default;
    constexpr explicit Id(std::uint32_t v) : value(v) {}
    friend constexpr auto operator<=>(Id, Id) = default;
};

using VertexId = Id<struct VertexTag>;
using EdgeId = Id<struct EdgeTag>;

enum class Side : std::uint8_t { None, A, B };

inline Side opposite(Side s) {
    return s == Side::A ? Side::B : s == Side::B ? Side::A : Side::None;
}

inline const char* side_name(Side s) { return s == Side::A ? "A" : s == Side::B ? "B" : ""; }

struct Vertex {
    VertexId id;
    Side side = Side::None;
};

struct Edge {
    EdgeId id;
    VertexId u;
    VertexId v;
};

inline constexpr std::uint32_t npos32 = std::numeric_limits<std::uint32_t>::max();

// Sorted set of edge ids. Value type, cheap set algebra.
class EdgeSet {
public:
    EdgeSet() = default;
    explicit EdgeSet(std::vector<EdgeId> ids) : ids_(std::move(ids)) {
        std::sort(ids_.begin(), ids_.end());
        ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    }
    EdgeSet(std::initializer_list<EdgeId> ids) : EdgeSet(std::vector<EdgeId>(ids)) {}

    bool contains(EdgeId e) const { return std::binary_search(ids_.begin(), ids_.end(), e); }
    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    auto begin() const { return ids_.begin(); }
    auto end() const { return ids_.end(); }
    const std::vector<EdgeId>& ids() const { return ids_; }

    friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

    friend EdgeSet operator|(const EdgeSet& a, const EdgeSet& b) {
        EdgeSet r;
        std::set_union(a.ids_.begin(), a.ids_.end(), b.ids_.begin(), b.ids_.end(),
                       std::back_inserter(r.ids_));
        return r;
    }
    friend EdgeSet operator-(const EdgeSet& a, const EdgeSet& b) {
        EdgeSet r;
        std::set_difference(a.ids_.begin(), a.ids_.end(), b.ids_.begin(), b.ids_.end(),
                            std::back_inserter(r.ids_));
        return r;
    }
    friend EdgeSet operator&(const EdgeSet& a, const EdgeSet& b) {
        EdgeSet r;
        std::set_intersection(a.ids_.begin(), a.ids_.end(), b.ids_.begin(), b.ids_.end(),
                              std::back_inserter(r.ids_));
        return r;
    }
    bool disjoint(const EdgeSet& o) const { return (*this & o).empty(); }

private:
    std::vector<EdgeId> ids_;
};

class MultiGraph {
public:
    MultiGraph() = default;

    // Validates ids, loops and (unless relaxed) side crossing.
    MultiGraph(std::vector<Vertex> vertices, std::vector<Edge> edges, bool relaxed = false)
        : vertices_(std::move(vertices)), edges_(std::move(edges)), relaxed_(relaxed) {
        index();
    }

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool relaxed() const { return relaxed_; }
    bool labeled() const { return labeled_; }

    bool has_vertex(VertexId v) const { return v.value < vidx_.size() && vidx_[v.value] != npos32; }
    bool has_edge(EdgeId e) const { return e.value < eidx_.size() && eidx_[e.value] != npos32; }

    std::uint32_t vindex(VertexId v) const {
        if (!has_vertex(v)) fail(Errc::UnknownVertex, "vertex " + std::to_string(v.value));
        return vidx_[v.value];
    }
    std::uint32_t eindex(EdgeId e) const {
        if (!has_edge(e)) fail(Errc::ForeignEdge, "edge " + std::to_string(e.value));
        return eidx_[e.value];
    }

    const Edge& edge(EdgeId e) const { return edges_[eindex(e)]; }
    Side side(VertexId v) const { return vertices_[vindex(v)].side; }
    VertexId other(EdgeId e, VertexId v) const {
        const Edge& ed = edge(e);
        return ed.u == v ? ed.v : ed.u;
    }

    // incident edge indices by vertex index
    const std::vector<std::uint32_t>& incident_at(std::uint32_t vi) const { return inc_[vi]; }
    // endpoint vertex indices by edge index
    std::uint32_t tail_at(std::uint32_t ei) const { return eu_[ei]; }
    std::uint32_t head_at(std::uint32_t ei) const { return ev_[ei]; }

    std::size_t degree(VertexId v) const { return inc_[vindex(v)].size(); }

    std::vector<EdgeId> incident(VertexId v) const {
        std::vector<EdgeId> out;
        for (auto ei : inc_[vindex(v)]) out.push_back(edges_[ei].id);
        return out;
    }

    EdgeSet all_edges() const {
        std::vector<EdgeId> ids;
        ids.reserve(edges_.size());
        for (const auto& e : edges_) ids.push_back(e.id);
        return EdgeSet(std::move(ids));
    }

    std::vector<VertexId> vertices_on(Side s) const {
        std::vector<VertexId> out;
        for (const auto& v : vertices_)
            if (v.side == s) out.push_back(v.id);
        return out;
    }

    std::uint32_t next_vertex_id() const {
        std::uint32_t m = 0;
        for (const auto& v : vertices_) m = std::max(m, v.id.value + 1);
        return m;
    }
    std::uint32_t next_edge_id() const {
        std::uint32_t m = 0;
        for (const auto& e : edges_) m = std::max(m, e.id.value + 1);
        return m;
    }

    friend bool operator==(const MultiGraph& a, const MultiGraph& b) {
        auto key = [](const MultiGraph& g) {
            std::vector<std::tuple<std::uint32_t, int>> vs;
            for (const auto& v : g.vertices_) vs.emplace_back(v.id.value, int(v.side));
            std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> es;
            for (const auto& e : g.edges_)
                es.emplace_back(e.id.value, std::min(e.u.value, e.v.value), std::max(e.u.value, e.v.value));
            std::sort(vs.begin(), vs.end());
            std::sort(es.begin(), es.end());
            return std::make_pair(vs, es);
        };
        return a.relaxed_ == b.relaxed_ && key(a) == key(b);
    }

private:
    void index() {
        std::uint32_t vmax = 0, emax = 0;
        for (const auto& v : vertices_) vmax = std::max(vmax, v.id.value + 1);
        for (const auto& e : edges_) emax = std::max(emax, e.id.value + 1);
        vidx_.assign(vmax, npos32);
        eidx_.assign(emax, npos32);
        labeled_ = false;
        for (std::uint32_t i = 0; i < vertices_.size(); ++i) {
            auto& slot = vidx_[vertices_[i].id.value];
            if (slot != npos32) fail(Errc::DuplicateId, "vertex " + std::to_string(vertices_[i].id.value));
            slot = i;
            if (vertices_[i].side != Side::None) labeled_ = true;
        }
        inc_.assign(vertices_.size(), {});
        eu_.resize(edges_.size());
        ev_.resize(edges_.size());
        for (std::uint32_t i = 0; i < edges_.size(); ++i) {
            const Edge& e = edges_[i];
            auto& slot = eidx_[e.id.value];
            if (slot != npos32) fail(Errc::DuplicateId, "edge " + std::to_string(e.id.value));
            slot = i;
            if (e.u == e.v) fail(Errc::LoopEdge, "edge " + std::to_string(e.id.value));
            std::uint32_t a = vindex(e.u), b = vindex(e.v);
            Side sa = vertices_[a].side, sb = vertices_[b].side;
            if (!relaxed_ && sa != Side::None && sa == sb)
                fail(Errc::SameSideEdge, "edge " + std::to_string(e.id.value));
            eu_[i] = a;
            ev_[i] = b;
            inc_[a].push_back(i);
            inc_[b].push_back(i);
        }
    }

    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    bool relaxed_ = false;
    bool labeled_ = false;
    std::vector<std::uint32_t> vidx_, eidx_;
    std::vector<std::vector<std::uint32_t>> inc_;
    std::vector<std::uint32_t> eu_, ev_;
};

// Vertices 0..a-1 are side A, a..a+b-1 side B. Pairs use these ids.
inline MultiGraph new_bipartite(std::size_t a_count, std::size_t b_count,
                                const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
    std::vector<Vertex> vs;
    for (std::uint32_t i = 0; i < a_count + b_count; ++i)
        vs.push_back({VertexId(i), i < a_count ? Side::A : Side::B});
    std::vector<Edge> es;
    std::uint32_t next = 0;
    for (auto [u, v] : pairs) {
        if (u == v) fail(Errc::LoopEdge, "pair (" + std::to_string(u) + "," + std::to_string(v) + ")");
        es.push_back({EdgeId(next++), VertexId(u), VertexId(v)});
    }
    return MultiGraph(std::move(vs), std::move(es));
}

inline void check_subset(const MultiGraph& g, const EdgeSet& f) {
    for (EdgeId e : f)
        if (!g.has_edge(e)) fail(Errc::ForeignEdge, "edge " + std::to_string(e.value));
}

inline std::size_t subset_degree(const MultiGraph& g, const EdgeSet& f, VertexId v) {
    check_subset(g, f);
    std::size_t d = 0;
    for (auto ei : g.incident_at(g.vindex(v)))
        if (f.contains(g.edges()[ei].id)) ++d;
    return d;
}

// d_F for all vertices, indexed by vertex index.
inline std::vector<std::size_t> subset_degrees(const MultiGraph& g, const EdgeSet& f) {
    std::vector<std::size_t> d(g.vertex_count(), 0);
    for (EdgeId e : f) {
        auto ei = g.eindex(e);
        ++d[g.tail_at(ei)];
        ++d[g.head_at(ei)];
    }
    return d;
}

inline MultiGraph induced_by_edges(const MultiGraph& g, const EdgeSet& f) {
    check_subset(g, f);
    std::vector<char> keep(g.vertex_count(), 0);
    std::vector<Edge> es;
    for (EdgeId e : f) {
        auto ei = g.eindex(e);
        keep[g.tail_at(ei)] = keep[g.head_at(ei)] = 1;
        es.push_back(g.edges()[ei]);
    }
    std::vector<Vertex> vs;
    for (std::uint32_t i = 0; i < g.vertex_count(); ++i)
        if (keep[i]) vs.push_back(g.vertices()[i]);
    return MultiGraph(std::move(vs), std::move(es), g.relaxed());
}

inline MultiGraph without_edges(const MultiGraph& g, const EdgeSet& f) {
    return induced_by_edges(g, g.all_edges() - f);
}

// ---- serialization ----

inline nlohmann::json to_json(const MultiGraph& g) {
    nlohmann::json vs = nlohmann::json::array(), es = nlohmann::json::array();
    for (const auto& v : g.vertices()) {
        nlohmann::json o{{"id", v.id.value}};
        if (v.side != Side::None) o["side"] = side_name(v.side);
        vs.push_back(std::move(o));
    }
    for (const auto& e : g.edges()) es.push_back({{"id", e.id.value}, {"u", e.u.value}, {"v", e.v.value}});
    nlohmann::json doc{{"vertices", std::move(vs)}, {"edges", std::move(es)}};
    if (g.relaxed()) doc["relaxed"] = true;
    return doc;
}

inline std::string serialize(const MultiGraph& g) { return to_json(g).dump(); }

inline MultiGraph graph_from_json(const nlohmann::json& doc) {
    auto where = [](const std::string& path) { return "at " + path; };
    try {
        if (!doc.is_object()) fail(Errc::ParseError, where("$") + ": expected object");
        if (!doc.contains("vertices") || !doc.contains("edges"))
            fail(Errc::ParseError, where("$") + ": missing vertices/edges");
        std::vector<Vertex> vs;
        const auto& jv = doc.at("vertices");
        for (std::size_t i = 0; i < jv.size(); ++i) {
            const auto& o = jv[i];
            std::string p = "$.vertices[" + std::to_string(i) + "]";
            if (!o.contains("id") || !o["id"].is_number_unsigned())
                fail(Errc::ParseError, where(p) + ": bad id");
            Side s = Side::None;
            if (o.contains("side")) {
                auto t = o["side"].get<std::string>();
                if (t == "A") s = Side::A;
                else if (t == "B") s = Side::B;
                else fail(Errc::ParseError, where(p) + ": bad side '" + t + "'");
            }
            vs.push_back({VertexId(o["id"].get<std::uint32_t>()), s});
        }
        std::vector<Edge> es;
        const auto& je = doc.at("edges");
        for (std::size_t i = 0; i < je.size(); ++i) {
            const auto& o = je[i];
            std::string p = "$.edges[" + std::to_string(i) + "]";
            for (const char* k : {"id", "u", "v"})
                if (!o.contains(k) || !o[k].is_number_unsigned())
                    fail(Errc::ParseError, where(p) + ": bad field " + k);
            es.push_back({EdgeId(o["id"].get<std::uint32_t>()), VertexId(o["u"].get<std::uint32_t>()),
                          VertexId(o["v"].get<std::uint32_t>())});
        }
        bool relaxed = doc.contains("relaxed") && doc["relaxed"].get<bool>();
        try {
            return MultiGraph(std::move(vs), std::move(es), relaxed);
        } catch (const Error& e) {
            fail(Errc::ParseError, std::string("$: ") + e.what());
        }
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ParseError, e.what());
    }
}

inline MultiGraph parse(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(Errc::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return graph_from_json(doc);
}

inline nlohmann::json edge_ids_json(const EdgeSet& f) {
    nlohmann::json a = nlohmann::json::array();
    for (EdgeId e : f) a.push_back(e.value);
    return a;
}

inline EdgeSet edge_ids_from_json(const nlohmann::json& a) {
    std::vector<EdgeId> ids;
    for (const auto& x : a) ids.push_back(EdgeId(x.get<std::uint32_t>()));
    return EdgeSet(std::move(ids));
}

} // namespace pathdec

template <class Tag>
struct std::hash<pathdec::Id<Tag>> {
    std::size_t operator()(pathdec::Id<Tag> id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
