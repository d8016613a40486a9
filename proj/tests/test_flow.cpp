#include <gtest/gtest.h>

#include <random>

#include <pathdec/testbed.hpp>

using namespace pathdec;

namespace {

MultiGraph complete_bipartite(std::uint32_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> es;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) es.push_back({i, n + j});
    return new_bipartite(n, n, es);
}

// Min over all vertex bipartitions of the crossing edge count.
std::size_t brute_min_cut(const MultiGraph& g) {
    const std::size_t n = g.vertex_count();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::uint64_t mask = 1; mask + 1 < (1ull << n); mask += 2) { // vertex 0 always inside
        std::size_t c = 0;
        for (std::uint32_t ei = 0; ei < g.edge_count(); ++ei)
            if (((mask >> g.tail_at(ei)) & 1) != ((mask >> g.head_at(ei)) & 1)) ++c;
        best = std::min(best, c);
    }
    return best;
}

// Min x-y cut by brute force over subsets containing x and not y.
std::size_t brute_local(const MultiGraph& g, std::uint32_t x, std::uint32_t y) {
    const std::size_t n = g.vertex_count();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        if (!((mask >> x) & 1) || ((mask >> y) & 1)) continue;
        std::size_t c = 0;
        for (std::uint32_t ei = 0; ei < g.edge_count(); ++ei)
            if (((mask >> g.tail_at(ei)) & 1) != ((mask >> g.head_at(ei)) & 1)) ++c;
        best = std::min(best, c);
    }
    return best;
}

MultiGraph random_bipartite(std::mt19937_64& rng, std::uint32_t a, std::uint32_t b, std::size_t m) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> es;
    for (std::size_t i = 0; i < m; ++i) es.push_back({std::uint32_t(rng() % a), std::uint32_t(a + rng() % b)});
    return new_bipartite(a, b, es);
}

} // namespace

TEST(LocalConnectivity, CompleteBipartite) {
    auto g = complete_bipartite(4);
    EXPECT_EQ(local_edge_connectivity(g, VertexId(0), VertexId(5)), 4u);
    EXPECT_EQ(brute_local(g, 0, 5), 4u);
}

TEST(LocalConnectivity, ParallelEdges) {
    auto g = new_bipartite(1, 1, {{0, 1}, {0, 1}, {0, 1}});
    EXPECT_EQ(local_edge_connectivity(g, VertexId(0), VertexId(1)), 3u);
}

TEST(LocalConnectivity, Disconnected) {
    auto g = new_bipartite(2, 2, {{0, 2}, {1, 3}});
    EXPECT_EQ(local_edge_connectivity(g, VertexId(0), VertexId(3)), 0u);
}

TEST(EdgeConnectivity, CompleteBipartiteMatchesBruteForce) {
    for (std::uint32_t n : {2u, 3u, 4u}) {
        auto g = complete_bipartite(n);
        EXPECT_EQ(brute_min_cut(g), n);
        EXPECT_EQ(edge_connectivity(g), n);
    }
}

TEST(EdgeConnectivity, PathAndDisconnected) {
    auto path = new_bipartite(2, 2, {{0, 2}, {2, 1}, {1, 3}});
    EXPECT_EQ(edge_connectivity(path), 1u);
    auto split = new_bipartite(2, 2, {{0, 2}, {1, 3}});
    EXPECT_EQ(edge_connectivity(split), 0u);
}

TEST(EdgeConnectivity, RandomSmallGraphsAgreeWithPairwiseMinimum) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = random_bipartite(rng, 2 + rng() % 3, 2 + rng() % 3, 4 + rng() % 10);
        std::size_t pairwise = std::numeric_limits<std::size_t>::max();
        for (std::uint32_t x = 0; x < g.vertex_count(); ++x)
            for (std::uint32_t y = x + 1; y < g.vertex_count(); ++y) {
                auto l = local_edge_connectivity(g, g.vertices()[x].id, g.vertices()[y].id);
                EXPECT_EQ(l, brute_local(g, x, y));
                pairwise = std::min(pairwise, l);
            }
        EXPECT_EQ(edge_connectivity(g), pairwise);
        EXPECT_EQ(edge_connectivity(g), brute_min_cut(g));
    }
}

TEST(EulerianSubset, Cases) {
    auto g = complete_bipartite(2);
    EXPECT_TRUE(is_eulerian_subset(g, EdgeSet{}));
    EXPECT_TRUE(is_eulerian_subset(g, g.all_edges()));
    EXPECT_FALSE(is_eulerian_subset(g, EdgeSet{EdgeId(0)}));
}

namespace {

void expect_balanced(const MultiGraph& g, const EdgeSet& f, const Orientation& o) {
    ASSERT_EQ(o.size(), f.size());
    std::vector<int> in(g.vertex_count(), 0), out(g.vertex_count(), 0);
    std::set<EdgeId> seen;
    for (const auto& a : o.arcs()) {
        EXPECT_TRUE(f.contains(a.edge));
        EXPECT_TRUE(seen.insert(a.edge).second);
        const Edge& e = g.edge(a.edge);
        EXPECT_TRUE((e.u == a.tail && e.v == a.head) || (e.v == a.tail && e.u == a.head));
        ++out[g.vindex(a.tail)];
        ++in[g.vindex(a.head)];
    }
    EXPECT_EQ(in, out);
}

} // namespace

TEST(EulerianOrientation, FourCycle) {
    auto g = complete_bipartite(2);
    auto o = eulerian_orientation(g, g.all_edges());
    expect_balanced(g, g.all_edges(), o);
    for (const auto& v : g.vertices()) {
        int in = 0;
        for (const auto& a : o.arcs()) in += a.head == v.id;
        EXPECT_EQ(in, 1);
    }
}

TEST(EulerianOrientation, TwoDisjointCycles) {
    auto g = new_bipartite(4, 4, {{0, 4}, {4, 1}, {1, 5}, {5, 0}, {2, 6}, {6, 3}, {3, 7}, {7, 2}});
    expect_balanced(g, g.all_edges(), eulerian_orientation(g, g.all_edges()));
}

TEST(EulerianOrientation, FixtureFactor) {
    auto f = fixture("FIX-ODD3");
    const auto& f1 = f.bif->first.eulerians[0];
    auto o = eulerian_orientation(f.graph, f1);
    expect_balanced(f.graph, f1, o);
    std::vector<int> in(f.graph.vertex_count(), 0);
    for (const auto& a : o.arcs()) ++in[f.graph.vindex(a.head)];
    for (auto x : in) EXPECT_EQ(x, 4);
}

TEST(EulerianOrientation, OddSubsetRejected) {
    auto g = complete_bipartite(2);
    EXPECT_THROW(eulerian_orientation(g, EdgeSet{EdgeId(0)}), Error);
}
