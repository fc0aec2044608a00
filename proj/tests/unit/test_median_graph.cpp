#include "cubefix/error.hpp"
#include "cubefix/median_graph.hpp"
#include "../support/fixtures.hpp"

#include <doctest.h>

#include <set>

using namespace cubefix;
using namespace fixtures;

namespace {

MedianGraph V(const RawGraph& r) { return MedianGraph::validate(r); }

int vid(const MedianGraph& g, const std::string& s) { return g.index_of(s); }

int class_of(const MedianGraph& g, const std::string& a, const std::string& b) {
    return g.class_of_edge(g.edge_id(vid(g, a), vid(g, b)));
}

// brute-force median: the vertex on geodesics between all three pairs
int median_oracle(const MedianGraph& g, int x, int y, int z) {
    int found = -1;
    for (int m = 0; m < g.vertex_count(); ++m)
        if (g.distance(x, m) + g.distance(m, y) == g.distance(x, y) && g.distance(y, m) + g.distance(m, z) == g.distance(y, z) &&
            g.distance(x, m) + g.distance(m, z) == g.distance(x, z)) {
            REQUIRE(found == -1);
            found = m;
        }
    return found;
}

std::vector<MedianGraph> corpus() {
    std::vector<MedianGraph> gs;
    gs.push_back(V(path_graph(1)));
    gs.push_back(V(path_graph(5)));
    gs.push_back(V(grid_graph(3, 3)));
    gs.push_back(V(grid_graph(2, 4)));
    gs.push_back(V(cube_graph(3)));
    gs.push_back(V(staircase_graph({3, 2, 1})));
    gs.push_back(V(star_graph(4)));
    return gs;
}

}  // namespace

TEST_CASE("validation accepts paths and grids, rejects odd cycles") {
    MedianGraph p = V(path_graph(3));
    CHECK(p.class_count() == 2);
    CHECK(V(grid_graph(3, 3)).class_count() == 4);
    try {
        V(complete_graph(3));
        FAIL("K3 accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotMedian);
        CHECK(e.witness.size() == 3);
    }
    RawGraph two;
    two.add_vertex("a");
    two.add_vertex("b");
    CHECK_THROWS_AS(V(two), Error);
    // K_{2,3} has two medians for its three degree-2 vertices
    RawGraph k23;
    for (int i = 0; i < 5; ++i) k23.add_vertex(std::to_string(i));
    for (int i = 0; i < 2; ++i)
        for (int j = 2; j < 5; ++j) k23.add_edge(i, j);
    CHECK_THROWS_AS(V(k23), Error);
}

TEST_CASE("hyperplanes of a path and a grid") {
    MedianGraph p = V(path_graph(3));
    Hyperplane h = hyperplane_of_edge(p, vid(p, "0"), vid(p, "1"));
    CHECK(h.minus == std::vector<int>{vid(p, "0")});
    CHECK(h.plus.size() == 2);
    CHECK(separates(p, h.id, vid(p, "0"), vid(p, "2")));
    CHECK_THROWS_AS(hyperplane_of_edge(p, vid(p, "0"), vid(p, "2")), Error);

    MedianGraph g = V(grid_graph(3, 3));
    Hyperplane v = hyperplane_of_edge(g, vid(g, "0,0"), vid(g, "1,0"));
    CHECK(v.edges.size() == 3);
    CHECK(v.minus.size() == 3);
    for (int m : v.minus) CHECK(g.name(m)[0] == '0');
    CHECK(v.carrier.size() == 6);
    CHECK(g.separates(v.id, vid(g, "0,2"), vid(g, "2,0")));

    MedianGraph sq = V(grid_graph(2, 2));
    CHECK(hyperplane_of_edge(sq, 0, 1).edges.size() == 2);
}

TEST_CASE("distances, medians and crossings on small graphs") {
    MedianGraph g = V(grid_graph(3, 3));
    CHECK(g.distance(vid(g, "0,0"), vid(g, "2,1")) == 3);
    CHECK(median(g, vid(g, "0,0"), vid(g, "2,0"), vid(g, "0,2")) == vid(g, "0,0"));
    CHECK(median(V(path_graph(3)), 0, 1, 2) == 1);
    CHECK(crossing_relation(g, class_of(g, "0,0", "1,0"), class_of(g, "0,0", "0,1")) == Relation::Cross);
    CHECK(crossing_relation(g, class_of(g, "0,0", "1,0"), class_of(g, "1,0", "2,0")) == Relation::Parallel);
    CHECK(crossing_relation(g, 0, 0) == Relation::Equal);
    CHECK(dimension(g) == 2);
    CHECK(dimension(V(path_graph(4))) == 1);
    CHECK(dimension(V(cube_graph(3))) == 3);
    CHECK(dimension(V(cube_graph(4))) == 4);
}

TEST_CASE("distance equals the number of separating hyperplanes") {
    for (const MedianGraph& g : corpus())
        for (int x = 0; x < g.vertex_count(); ++x)
            for (int y = 0; y < g.vertex_count(); ++y) {
                int sep = 0;
                for (int h = 0; h < g.class_count(); ++h) sep += g.separates(h, x, y);
                CHECK(sep == g.distance(x, y));
            }
}

TEST_CASE("median agrees with the brute-force oracle and is symmetric") {
    for (const MedianGraph& g : corpus()) {
        const int n = g.vertex_count();
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                CHECK(median(g, x, x, y) == x);
                for (int z = 0; z < n; z += 2) {
                    int m = median(g, x, y, z);
                    CHECK(m == median_oracle(g, x, y, z));
                    CHECK(m == median(g, z, x, y));
                    CHECK(m == median(g, y, z, x));
                }
            }
    }
}

TEST_CASE("halfspaces and carriers are convex; carriers pair up") {
    for (const MedianGraph& g : corpus()) {
        for (int h = 0; h < g.class_count(); ++h) {
            Hyperplane hp = g.hyperplane(h);
            CHECK(hp.minus.size() + hp.plus.size() == static_cast<size_t>(g.vertex_count()));
            CHECK(is_convex(g, hp.minus));
            CHECK(is_convex(g, hp.plus));
            CHECK(is_convex(g, hp.carrier));
            CHECK(is_convex_by_intervals(g, hp.carrier) == is_convex_local(g, hp.carrier));
            CHECK(hp.carrier.size() == 2 * hp.edges.size());
            CHECK(std::find(hp.minus.begin(), hp.minus.end(), 0) != hp.minus.end());
        }
    }
    MedianGraph g = V(grid_graph(3, 3));
    CHECK(is_convex(g, {vid(g, "1,1")}));
    CHECK_FALSE(is_convex(g, {vid(g, "0,0"), vid(g, "2,2")}));
}

TEST_CASE("pairwise crossing hyperplanes share a carrier vertex") {
    for (const MedianGraph& g : corpus()) {
        const int m = g.class_count();
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                if (g.crossing(a, b) != Relation::Cross) continue;
                for (int c = b + 1; c <= m; ++c) {
                    if (c < m && (g.crossing(a, c) != Relation::Cross || g.crossing(b, c) != Relation::Cross)) continue;
                    bool common = false;
                    for (int v = 0; v < g.vertex_count() && !common; ++v)
                        common = g.in_carrier(a, v) && g.in_carrier(b, v) && (c == m || g.in_carrier(c, v));
                    CHECK(common);
                }
            }
    }
}

TEST_CASE("subdivision") {
    MedianGraph edge = V(path_graph(2));
    Subdivision s = subdivide(edge);
    CHECK(s.graph.vertex_count() == 3);
    CHECK(s.graph.edge_count() == 2);

    Subdivision sq = subdivide(V(grid_graph(2, 2)));
    CHECK(sq.graph.vertex_count() == 9);
    CHECK(sq.graph.edge_count() == 12);

    CHECK(subdivide(V(path_graph(3))).graph.vertex_count() == 5);

    for (const MedianGraph& g : corpus()) {
        Subdivision d = subdivide(g);
        MedianGraph::validate(RawGraph{d.graph.names(), [&] {
                                           std::vector<std::pair<int, int>> es;
                                           for (int e = 0; e < d.graph.edge_count(); ++e) es.push_back(d.graph.edge(e));
                                           return es;
                                       }()});
        for (int x = 0; x < g.vertex_count(); ++x)
            for (int y = 0; y < g.vertex_count(); ++y)
                CHECK(d.graph.distance(d.vertex_map[x], d.vertex_map[y]) == 2 * g.distance(x, y));
    }
}

TEST_CASE("sparse mode agrees with dense mode") {
    // a path longer than the dense limit
    MedianGraph big = MedianGraph::trusted(path_graph(MedianGraph::kDenseLimit + 10));
    CHECK_FALSE(big.dense());
    CHECK(big.distance(0, 2050) == 2050);
    int h = big.class_of_edge(big.edge_id(99, 100));
    CHECK(big.side(h, 5) == 0);
    CHECK(big.side(h, 1000) == 1);
    CHECK(big.distance_to_carrier(h, 500) == 400);
}

TEST_CASE("convex expansion finds every median graph on up to six vertices") {
    std::set<std::vector<unsigned>> expanded, brute;
    for (const SmallGraph& g : median_graphs_up_to(6)) {
        CHECK_NOTHROW(V(g.raw()));
        expanded.insert(canonical_key(g));
    }
    for (int n = 1; n <= 6; ++n) {
        std::vector<std::pair<int, int>> slots;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
        for (unsigned mask = 0; mask < (1u << slots.size()); ++mask) {
            SmallGraph g;
            g.n = n;
            g.adj.assign(static_cast<size_t>(n), 0);
            for (size_t s = 0; s < slots.size(); ++s)
                if ((mask >> s) & 1u) {
                    g.adj[slots[s].first] |= 1u << slots[s].second;
                    g.adj[slots[s].second] |= 1u << slots[s].first;
                }
            try {
                V(g.raw());
            } catch (const Error&) {
                continue;
            }
            brute.insert(canonical_key(g));
        }
    }
    CHECK(expanded == brute);
    // 6 vertices: six trees, the domino, a square with a 2-path tail, and a square with two
    // pendant vertices at one corner, adjacent corners or opposite corners
    CHECK(brute.size() == 1 + 1 + 1 + 3 + 4 + 11);
}
