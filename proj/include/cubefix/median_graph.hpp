#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cubefix {

struct RawGraph {
    std::vector<std::string> vertices;
    std::vector<std::pair<int, int>> edges;  // indices into vertices

    int add_vertex(const std::string& name);
    int index_of(const std::string& name) const;  // -1 if absent
    void add_edge(int u, int v) { edges.emplace_back(u, v); }
};

enum class Relation { Equal, Cross, Parallel };
const char* relation_name(Relation r);

struct Hyperplane {
    int id = -1;
    std::vector<int> edges;
    std::vector<int> minus;  // contains the smallest vertex index
    std::vector<int> plus;
    std::vector<int> carrier;
};

/// Finite median graph with theta classes (hyperplanes).
///
/// Vertex "ids" are the positions in the vertex list; the smallest id is index 0.
/// Queries on graphs with up to kDenseLimit vertices use a dense distance table;
/// larger graphs (windows onto infinite complexes) answer by bounded BFS.
class MedianGraph {
public:
    static constexpr int kDenseLimit = 2048;
    static constexpr int kValidateLimit = 800;

    // Full check: simple, connected, every triple has exactly one median.
    static MedianGraph validate(const RawGraph& raw);
    // Skips the median check. Used for constructions that are median by construction.
    static MedianGraph trusted(const RawGraph& raw);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int class_count() const { return static_cast<int>(class_edges_.size()); }

    const std::string& name(int v) const { return names_[static_cast<size_t>(v)]; }
    const std::vector<std::string>& names() const { return names_; }
    int index_of(const std::string& name) const;  // throws UnknownVertex

    int degree(int v) const { return off_[v + 1] - off_[v]; }
    const int* nbr_begin(int v) const { return adj_.data() + off_[v]; }
    const int* nbr_end(int v) const { return adj_.data() + off_[v + 1]; }
    const int* nbr_edge(int v) const { return adj_edge_.data() + off_[v]; }

    std::pair<int, int> edge(int e) const { return edges_[static_cast<size_t>(e)]; }
    int edge_id(int u, int v) const;  // -1 if not adjacent
    int class_of_edge(int e) const { return edge_class_[static_cast<size_t>(e)]; }
    const std::vector<int>& class_edges(int h) const { return class_edges_[static_cast<size_t>(h)]; }
    int representative_edge(int h) const { return class_edges_[static_cast<size_t>(h)].front(); }
    int minus_end(int e) const { return minus_end_[static_cast<size_t>(e)]; }

    int distance(int u, int v) const;
    std::vector<int> bfs(int source) const;
    // 0 = minus halfspace, 1 = plus halfspace
    int side(int h, int z) const;
    bool separates(int h, int x, int y) const { return side(h, x) != side(h, y); }
    bool in_carrier(int h, int z) const;
    int distance_to_carrier(int h, int z) const;
    Relation crossing(int h1, int h2) const;
    const std::vector<int>& crossing_classes(int h) const { return crosses_[static_cast<size_t>(h)]; }
    Hyperplane hyperplane(int h) const;

    bool dense() const { return !dist_.empty(); }

private:
    static MedianGraph build(const RawGraph& raw, bool check_median);
    void check_medians() const;

    int n_ = 0;
    std::vector<std::string> names_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> off_, adj_, adj_edge_;
    std::vector<int> edge_class_, minus_end_;
    std::vector<std::vector<int>> class_edges_;
    std::vector<std::vector<int>> crosses_;
    std::vector<uint16_t> dist_;
};

Hyperplane hyperplane_of_edge(const MedianGraph& g, int u, int v);
inline bool separates(const MedianGraph& g, int h, int x, int y) { return g.separates(h, x, y); }
inline int distance(const MedianGraph& g, int x, int y) { return g.distance(x, y); }
int median(const MedianGraph& g, int x, int y, int z);
inline Relation crossing_relation(const MedianGraph& g, int h1, int h2) { return g.crossing(h1, h2); }

// Maximum number of pairwise crossing hyperplanes among `classes`.
int max_crossing_clique(const MedianGraph& g, const std::vector<int>& classes);
int dimension(const MedianGraph& g);

// Geodesic convexity. Exact interval enumeration when cheap; for large inputs the
// equivalent median-graph criterion (connected and closed under common neighbours of
// pairs at distance two) is used.
bool is_convex(const MedianGraph& g, const std::vector<int>& subset);
bool is_convex_by_intervals(const MedianGraph& g, const std::vector<int>& subset);
bool is_convex_local(const MedianGraph& g, const std::vector<int>& subset);

struct Subdivision {
    MedianGraph graph;
    std::vector<std::vector<int>> cubes;  // new vertex -> sorted vertex set of the cube in the old graph
    std::vector<int> vertex_map;          // old vertex -> new vertex (its 0-cube)
};

// First cubical subdivision. Requires a graph small enough for dense distances.
Subdivision subdivide(const MedianGraph& g);

}  // namespace cubefix
