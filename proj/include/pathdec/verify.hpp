#pragma once

#include <unordered_map>

#include "graph.hpp"

namespace pathdec {

struct PathDecomposition {
    std::size_t ell = 0;
    std::vector<std::vector<VertexId>> paths;
    std::vector<std::vector<EdgeId>> edges;

    std::size_t size() const { return edges.size(); }
};

struct VerificationReport {
    bool ok = false;
    std::size_t violation_count = 0;
    std::vector<std::string> violations; // first ten only

    std::string text() const {
        std::string s = ok ? "ok\n" : "FAILED (" + std::to_string(violation_count) + " violations)\n";
        for (const auto& v : violations) s += "  " + v + "\n";
        return s;
    }
};

// Standalone coverage check. Only raw edge lookups; nothing from the constructors.
inline VerificationReport verify_decomposition(const MultiGraph& g, std::size_t ell, const PathDecomposition& d) {
    VerificationReport rep;
    auto bad = [&](std::string m) {
        ++rep.violation_count;
        if (rep.violations.size() < 10) rep.violations.push_back(std::move(m));
    };
    if (ell == 0) bad("path length must be positive");
    if (d.ell != ell) bad("document length " + std::to_string(d.ell) + " differs from " + std::to_string(ell));
    if (d.paths.size() != d.edges.size()) bad("vertex and edge lists differ in count");

    std::unordered_map<std::uint32_t, std::size_t> owner;
    for (std::size_t p = 0; p < d.edges.size(); ++p) {
        const auto& es = d.edges[p];
        std::string tag = "member " + std::to_string(p) + ": ";
        if (es.size() != ell) bad(tag + "has " + std::to_string(es.size()) + " edges");
        std::vector<std::uint32_t> walk;
        bool resolvable = true;
        for (EdgeId e : es) {
            if (!g.has_edge(e)) {
                bad(tag + "unknown edge " + std::to_string(e.value));
                resolvable = false;
                continue;
            }
            auto [it, fresh] = owner.emplace(e.value, p);
            if (!fresh) bad(tag + "edge covered twice (" + std::to_string(e.value) + ")");
        }
        if (!resolvable || es.empty()) continue;
        // rebuild the vertex walk from the edges alone
        const Edge& first = g.edge(es[0]);
        if (es.size() == 1) {
            walk = {first.u.value, first.v.value};
        } else {
            const Edge& second = g.edge(es[1]);
            std::uint32_t start;
            if (first.v == second.u || first.v == second.v) start = first.u.value;
            else if (first.u == second.u || first.u == second.v) start = first.v.value;
            else {
                bad(tag + "edges do not form a walk");
                continue;
            }
            walk.push_back(start);
            bool broken = false;
            for (EdgeId e : es) {
                const Edge& x = g.edge(e);
                std::uint32_t at = walk.back();
                if (x.u.value == at) walk.push_back(x.v.value);
                else if (x.v.value == at) walk.push_back(x.u.value);
                else {
                    broken = true;
                    break;
                }
            }
            if (broken) {
                bad(tag + "edges do not form a walk");
                continue;
            }
        }
        auto sorted = walk;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) bad(tag + "not a simple path");
        if (p < d.paths.size()) {
            const auto& vs = d.paths[p];
            bool same = vs.size() == walk.size(), rev = same;
            for (std::size_t i = 0; same && i < vs.size(); ++i) same = vs[i].value == walk[i];
            for (std::size_t i = 0; rev && i < vs.size(); ++i) rev = vs[i].value == walk[walk.size() - 1 - i];
            if (!same && !rev) bad(tag + "vertex list disagrees with its edges");
        }
    }
    for (const auto& e : g.edges())
        if (!owner.count(e.id.value)) bad("edge " + std::to_string(e.id.value) + " not covered");
    rep.ok = rep.violation_count == 0;
    return rep;
}

inline nlohmann::json to_json(const PathDecomposition& d) {
    nlohmann::json ps = nlohmann::json::array(), es = nlohmann::json::array();
    for (const auto& p : d.paths) {
        nlohmann::json a = nlohmann::json::array();
        for (auto v : p) a.push_back(v.value);
        ps.push_back(std::move(a));
    }
    for (const auto& p : d.edges) {
        nlohmann::json a = nlohmann::json::array();
        for (auto e : p) a.push_back(e.value);
        es.push_back(std::move(a));
    }
    return {{"ell", d.ell}, {"paths", std::move(ps)}, {"edges", std::move(es)}};
}

inline PathDecomposition path_decomposition_from_json(const nlohmann::json& o) {
    PathDecomposition d;
    try {
        d.ell = o.at("ell").get<std::size_t>();
        for (const auto& p : o.at("paths")) {
            d.paths.emplace_back();
            for (const auto& v : p) d.paths.back().push_back(VertexId(v.get<std::uint32_t>()));
        }
        for (const auto& p : o.at("edges")) {
            d.edges.emplace_back();
            for (const auto& e : p) d.edges.back().push_back(EdgeId(e.get<std::uint32_t>()));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ParseError, std::string("path decomposition: ") + e.what());
    }
    return d;
}

} // namespace pathdec
