#pragma once

#include <random>
#include <set>

#include "tracking.hpp"

namespace pathdec {

struct SequenceElement {
    std::size_t tracking = 0;
    bool reversed = false; // true when B_i is the stored tracking read backwards
    friend bool operator==(const SequenceElement&, const SequenceElement&) = default;
};

struct AugmentingSequence {
    std::vector<SequenceElement> elements;
    std::size_t size() const { return elements.size(); }
};

struct SwapRecord {
    std::size_t step;
    std::size_t first_tracking;
    std::size_t second_tracking;
    EdgeId moved_to_second; // e_i, leaves the first trail
    EdgeId moved_to_first;  // f_{i+1}, leaves the second trail
};

inline Tracking oriented(const TrackingDecomposition& d, const SequenceElement& s) {
    const auto& b = d.trackings.at(s.tracking);
    return s.reversed ? reverse(b) : b;
}

inline std::size_t ceil_half(std::size_t x) { return (x + 1) / 2; }

namespace detail {

// smallest positive index holding `pivot`, or npos
inline std::size_t first_return(const Tracking& b, VertexId pivot) {
    for (std::size_t i = 1; i < b.vertices.size(); ++i)
        if (b.vertices[i] == pivot) return i;
    return std::size_t(-1);
}

// vertices of (edges of trail) - remove + add, isolated vertices dropped
inline std::set<VertexId> edited_trail_vertices(const MultiGraph& g, const Tracking& trail,
                                                const std::vector<EdgeId>& remove, const std::vector<EdgeId>& add) {
    std::multiset<EdgeId> es(trail.edges.begin(), trail.edges.end());
    for (EdgeId e : remove) {
        auto it = es.find(e);
        if (it != es.end()) es.erase(it);
    }
    for (EdgeId e : add) es.insert(e);
    std::set<VertexId> vs;
    for (EdgeId e : es) {
        vs.insert(g.edge(e).u);
        vs.insert(g.edge(e).v);
    }
    return vs;
}

} // namespace detail

struct SequenceCheck {
    bool valid = false;
    bool full = false;
    std::vector<std::string> violations;
};

// Item-by-item check of the augmenting-sequence definition, written without the builder.
inline SequenceCheck check_augmenting_sequence(const MultiGraph& g, const TrackingDecomposition& d,
                                               const AugmentingSequence& seq) {
    SequenceCheck out;
    auto bad = [&](const std::string& m) { out.violations.push_back(m); };
    const std::size_t r = seq.size();
    if (r < 2) {
        bad("sequence shorter than two");
        return out;
    }
    for (const auto& e : seq.elements)
        if (e.tracking >= d.trackings.size()) {
            bad("element outside the decomposition");
            return out;
        }
    std::vector<Tracking> b;
    for (const auto& e : seq.elements) b.push_back(oriented(d, e));
    const VertexId pivot = b[0].vertices[0];
    const std::size_t npos = std::size_t(-1);

    std::vector<std::size_t> s(r, npos);
    std::vector<VertexId> star(r);
    std::vector<EdgeId> e(r), f(r);
    for (std::size_t i = 0; i < r; ++i) {
        f[i] = b[i].edges[0];
        s[i] = detail::first_return(b[i], pivot);
        if (s[i] != npos) {
            star[i] = b[i].vertices[s[i] - 1];
            e[i] = b[i].edges[s[i] - 1];
        }
    }
    // opening element
    if (tau(b[0]) == 0) bad("opening: first trail is a path");
    if (trail_degree(b[0], pivot) <= 1) bad("opening: first start vertex has trail degree 1");
    if (contains_vertex(b[0], b[1].vertices[0])) bad("opening: second start lies on the first tracking");
    // every element but the last must return to the pivot
    for (std::size_t i = 0; i + 1 < r; ++i)
        if (s[i] == npos) {
            bad("element " + std::to_string(i + 1) + " never returns to the first start vertex");
            return out;
        }
    // closing element
    if (b[r - 1].vertices[1] != star[r - 2]) bad("closing: last element does not continue from the previous b*");
    for (std::size_t i = 1; i + 1 < r; ++i) {
        std::string tag = " at element " + std::to_string(i + 1);
        if (!contains_vertex(b[i], pivot)) bad("middle: missing the first start vertex" + tag);
        if (b[i].vertices[1] != star[i - 1]) bad("middle: second vertex is not the previous b*" + tag);
        VertexId next0 = b[i + 1].vertices[0];
        bool repeated = false;
        for (std::size_t h = 0; h < i; ++h)
            if (seq.elements[h].tracking == seq.elements[i].tracking) repeated = true;
        // a fresh trail must not contain the next start
        if (!repeated && contains_vertex(b[i], next0)) bad("fresh: next start lies on a new trail" + tag);
        if (seq.elements[i].tracking == seq.elements[0].tracking) {
            auto vs = detail::edited_trail_vertices(g, d.trackings[seq.elements[0].tracking], {e[0]}, {f[1]});
            if (vs.count(next0)) bad("repeat: next start lies on the edited first trail" + tag);
        }
        for (std::size_t h = 1; h < i; ++h) {
            if (seq.elements[h].tracking != seq.elements[i].tracking) continue;
            auto vs = detail::edited_trail_vertices(g, d.trackings[seq.elements[h].tracking], {f[h], e[h]},
                                                    {e[h - 1], f[h + 1]});
            if (vs.count(next0)) bad("repeat: next start lies on an edited repeated trail" + tag);
        }
    }
    out.full = !contains_vertex(b[r - 1], pivot);
    // consequences asserted alongside: distinct b* values and no element twice
    for (std::size_t i = 0; i + 1 < r; ++i)
        for (std::size_t j = i + 1; j + 1 < r; ++j)
            if (star[i] == star[j]) bad("b* repeats");
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j)
            if (seq.elements[i] == seq.elements[j]) bad("an element occurs twice");
    out.valid = out.violations.empty();
    return out;
}

struct BuilderOptions {
    std::mt19937_64* rng = nullptr; // random choice among qualifying edges instead of the smallest id
    bool require_complete = true;
};

inline AugmentingSequence find_full_augmenting_sequence(const MultiGraph& g, const TrackingDecomposition& d,
                                                        const BuilderOptions& opt = {}) {
    if (d.tau() == 0) fail(Errc::AlreadyPaths, "every tracking is a path");
    if (opt.require_complete && !is_complete(g, d, ceil_half(d.ell + 1)))
        fail(Errc::NotComplete, "decomposition not complete at ceil((l+1)/2)");

    // hanging slots by inner vertex
    std::vector<std::vector<EndSlot>> hanging(g.vertex_count());
    for (std::size_t t = 0; t < d.trackings.size(); ++t)
        for (int end = 0; end < 2; ++end) {
            auto s = end_slot(d, t, end);
            if (is_hanging(d, s)) hanging[g.vindex(s.inner)].push_back(s);
        }

    AugmentingSequence seq;
    if (opt.rng) {
        std::vector<std::size_t> tangled;
        for (std::size_t t = 0; t < d.trackings.size(); ++t)
            if (tau(d.trackings[t]) > 0) tangled.push_back(t);
        std::size_t t = tangled[(*opt.rng)() % tangled.size()];
        const auto& b = d.trackings[t];
        bool fwd = occurrences(b, b.front()) > 1, bwd = occurrences(b, b.back()) > 1;
        bool rev = fwd && bwd ? bool((*opt.rng)() & 1) : !fwd;
        seq.elements.push_back({t, rev});
    } else {
        for (std::size_t t = 0; t < d.trackings.size(); ++t) {
            const auto& b = d.trackings[t];
            if (tau(b) == 0) continue;
            seq.elements.push_back({t, occurrences(b, b.front()) <= 1});
            break;
        }
    }
    const VertexId pivot = oriented(d, seq.elements[0]).vertices[0];
    std::vector<Tracking> cur{oriented(d, seq.elements[0])};
    std::vector<EdgeId> e, f{cur[0].edges[0]};
    const std::size_t limit = 2 * d.trackings.size() + 2;

    while (true) {
        const Tracking& br = cur.back();
        const std::size_t r = cur.size();
        if (r >= 2 && !contains_vertex(br, pivot)) return seq;
        if (r > limit) fail(Errc::InternalExhaustion, "sequence grew past 2|B|");
        auto s = detail::first_return(br, pivot);
        if (s == std::size_t(-1) || s < 2) fail(Errc::InternalExhaustion, "no return to the first start vertex");
        VertexId star = br.vertices[s - 1];
        e.push_back(br.edges[s - 1]);

        std::set<VertexId> forbidden;
        bool repeated = false;
        const auto& me = seq.elements.back();
        if (r > 1 && me.tracking == seq.elements[0].tracking) {
            repeated = true;
            auto vs = detail::edited_trail_vertices(g, d.trackings[me.tracking], {e[0]}, {f[1]});
            forbidden.insert(vs.begin(), vs.end());
        }
        for (std::size_t h = 1; h + 1 < r; ++h) {
            if (seq.elements[h].tracking != me.tracking) continue;
            repeated = true;
            auto vs = detail::edited_trail_vertices(g, d.trackings[me.tracking], {f[h], e[h]}, {e[h - 1], f[h + 1]});
            forbidden.insert(vs.begin(), vs.end());
        }
        if (!repeated || r == 1) forbidden.insert(br.vertices.begin(), br.vertices.end());

        std::vector<EndSlot> ok;
        for (const auto& slot : hanging[g.vindex(star)]) {
            if (forbidden.count(slot.far)) continue;
            SequenceElement next{slot.tracking, slot.end == 1};
            if (std::find(seq.elements.begin(), seq.elements.end(), next) != seq.elements.end()) continue;
            ok.push_back(slot);
        }
        if (ok.empty()) fail(Errc::InternalExhaustion, "no hanging edge avoids the forbidden set");
        std::sort(ok.begin(), ok.end(), [](const EndSlot& a, const EndSlot& b) { return a.edge < b.edge; });
        const EndSlot& pick = opt.rng ? ok[(*opt.rng)() % ok.size()] : ok.front();
        SequenceElement next{pick.tracking, pick.end == 1};
        seq.elements.push_back(next);
        cur.push_back(oriented(d, next));
        f.push_back(cur.back().edges[0]);
    }
}

struct ApplyOptions {
    std::optional<std::size_t> k;          // completeness level to preserve, if any
    std::vector<SwapRecord>* audit = nullptr;
};

// Exchange e_i and f_{i+1} along the sequence; later elements on a modified trail
// keep pointing at it with flipped orientation.
inline TrackingDecomposition apply_augmenting_sequence(const MultiGraph& g, const TrackingDecomposition& d,
                                                       const AugmentingSequence& seq, const ApplyOptions& opt = {}) {
    if (seq.size() < 2) fail(Errc::NotFullSequence, "sequence shorter than two");
    for (const auto& el : seq.elements)
        if (el.tracking >= d.trackings.size()) fail(Errc::NotFullSequence, "element outside the decomposition");
    const VertexId pivot = oriented(d, seq.elements[0]).vertices[0];
    if (contains_vertex(oriented(d, seq.elements.back()), pivot)) fail(Errc::NotFullSequence, "sequence is not full");

    auto before = stats(g, d);
    TrackingDecomposition out = d;
    std::vector<SequenceElement> cur = seq.elements;
    for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
        Tracking p = oriented(out, cur[j]), q = oriented(out, cur[j + 1]);
        if (cur[j].tracking == cur[j + 1].tracking) fail(Errc::NotFullSequence, "consecutive elements share a trail");
        if (p.vertices[0] != pivot) fail(Errc::InvariantBroken, "current element lost the pivot start");
        auto s = detail::first_return(p, pivot);
        if (s == std::size_t(-1) || s < 2) fail(Errc::NotFullSequence, "element does not return to the pivot");
        if (q.vertices[1] != p.vertices[s - 1]) fail(Errc::NotFullSequence, "next element does not leave from b*");
        const std::size_t l = p.length();

        Tracking p2, q2;
        p2.vertices.push_back(q.vertices[0]);
        p2.edges.push_back(q.edges[0]);
        for (std::size_t i = s; i-- > 0;) p2.vertices.push_back(p.vertices[i]);
        for (std::size_t i = s - 1; i-- > 0;) p2.edges.push_back(p.edges[i]);
        for (std::size_t i = s + 1; i <= l; ++i) p2.vertices.push_back(p.vertices[i]);
        for (std::size_t i = s; i < l; ++i) p2.edges.push_back(p.edges[i]);
        q2 = q;
        q2.vertices[0] = pivot;
        q2.edges[0] = p.edges[s - 1];
        if (opt.audit) opt.audit->push_back({j + 1, cur[j].tracking, cur[j + 1].tracking, p.edges[s - 1], q.edges[0]});

        out.trackings[cur[j].tracking] = p2;
        out.trackings[cur[j + 1].tracking] = q2;
        for (std::size_t m = j + 2; m < cur.size(); ++m) {
            for (std::size_t who : {j, j + 1}) {
                if (cur[m].tracking != cur[who].tracking) continue;
                if (cur[m].reversed == cur[who].reversed) fail(Errc::NotFullSequence, "element repeats with the same orientation");
                cur[m].reversed = true;
            }
        }
        cur[j].reversed = false;
        cur[j + 1].reversed = false;
    }

    check_decomposition(g, out);
    auto after = stats(g, out);
    if (!(after.tau < before.tau)) fail(Errc::InvariantBroken, "tau did not drop");
    if (after.b_total != before.b_total) fail(Errc::InvariantBroken, "end-vertex counts changed");
    if (opt.k)
        for (auto h : after.hang)
            if (h <= *opt.k) fail(Errc::InvariantBroken, "completeness lost");
    return out;
}

// Hill-climb on the total number of hanging edges by exchanging first edges of
// two trackings that share an inner vertex.
inline TrackingDecomposition improve_completeness(const MultiGraph& g, TrackingDecomposition d, std::size_t threshold) {
    if (threshold == 0 ? false : !is_precomplete(g, d, 2 * threshold - 1))
        fail(Errc::NotPrecomplete, "not pre-complete at 2t-1");
    auto before = stats(g, d).b_total;
    auto hang_of = [&](const Tracking& b) {
        std::size_t h = 0;
        if (occurrences(b, b.front()) == 1) ++h;
        if (occurrences(b, b.back()) == 1) ++h;
        return h;
    };
    auto set_end = [](Tracking& b, int end, VertexId far, EdgeId e) {
        if (end == 0) {
            b.vertices.front() = far;
            b.edges.front() = e;
        } else {
            b.vertices.back() = far;
            b.edges.back() = e;
        }
    };
    while (true) {
        auto st = stats(g, d);
        std::int64_t low = -1;
        for (std::uint32_t i = 0; i < g.vertex_count(); ++i)
            if (st.hang[i] <= threshold) {
                low = i;
                break;
            }
        if (low < 0) break;
        VertexId v = g.vertices()[low].id;
        std::vector<EndSlot> slots;
        for (std::size_t t = 0; t < d.trackings.size(); ++t)
            for (int end = 0; end < 2; ++end) {
                auto s = end_slot(d, t, end);
                if (s.inner == v) slots.push_back(s);
            }
        std::sort(slots.begin(), slots.end(), [](const EndSlot& a, const EndSlot& b) { return a.edge < b.edge; });
        bool moved = false;
        for (const auto& a : slots) {
            if (is_hanging(d, a)) continue;
            for (const auto& b : slots) {
                if (b.tracking == a.tracking) continue;
                if (contains_vertex(d.trackings[a.tracking], b.far)) continue;
                Tracking ta = d.trackings[a.tracking], tb = d.trackings[b.tracking];
                std::size_t old_h = hang_of(ta) + hang_of(tb);
                set_end(ta, a.end, b.far, b.edge);
                set_end(tb, b.end, a.far, a.edge);
                if (hang_of(ta) + hang_of(tb) <= old_h) continue;
                d.trackings[a.tracking] = std::move(ta);
                d.trackings[b.tracking] = std::move(tb);
                moved = true;
                break;
            }
            if (moved) break;
        }
        if (!moved) fail(Errc::InternalExhaustion, "no improving exchange at a deficient vertex");
    }
    check_decomposition(g, d);
    if (stats(g, d).b_total != before) fail(Errc::InvariantBroken, "end-vertex counts changed");
    return d;
}

struct DisentangleOptions {
    std::vector<SwapRecord>* audit = nullptr;
    std::function<void(const TrackingDecomposition&)> on_round;
    std::size_t* rounds = nullptr;
};

inline TrackingDecomposition disentangle(const MultiGraph& g, TrackingDecomposition d, std::size_t k,
                                         const DisentangleOptions& opt = {}) {
    if (k < ceil_half(d.ell + 1)) fail(Errc::PreconditionViolation, "k below ceil((l+1)/2)");
    if (!is_complete(g, d, k)) fail(Errc::NotComplete, "decomposition not k-complete");
    std::size_t rounds = 0;
    const std::size_t cap = 2 * d.trackings.size();
    while (d.tau() > 0) {
        if (++rounds > cap) fail(Errc::InternalExhaustion, "more rounds than 2|B|");
        auto seq = find_full_augmenting_sequence(g, d);
        ApplyOptions ao;
        ao.k = k;
        ao.audit = opt.audit;
        d = apply_augmenting_sequence(g, d, seq, ao);
        if (opt.on_round) opt.on_round(d);
    }
    if (opt.rounds) *opt.rounds = rounds;
    return d;
}

} // namespace pathdec
