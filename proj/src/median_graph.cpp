#include "cubefix/median_graph.hpp"
#include "cubefix/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace cubefix {

int RawGraph::add_vertex(const std::string& name) {
    vertices.push_back(name);
    return static_cast<int>(vertices.size()) - 1;
}

int RawGraph::index_of(const std::string& name) const {
    for (size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == name) return static_cast<int>(i);
    return -1;
}

const char* relation_name(Relation r) {
    switch (r) {
        case Relation::Equal: return "equal";
        case Relation::Cross: return "cross";
        case Relation::Parallel: return "parallel";
    }
    return "?";
}

namespace {

// Scratch space for bounded searches, reused across calls on one thread.
struct Scratch {
    std::vector<unsigned> stamp;
    std::vector<int> dist;
    std::vector<int> queue;
    unsigned cur = 0;

    void prepare(int n) {
        if (static_cast<int>(stamp.size()) < n) {
            stamp.assign(static_cast<size_t>(n), 0);
            dist.assign(static_cast<size_t>(n), 0);
            cur = 0;
        }
        if (++cur == 0) {
            std::fill(stamp.begin(), stamp.end(), 0);
            cur = 1;
        }
        queue.clear();
    }
};

thread_local Scratch scratch;

struct ParityUnionFind {
    std::vector<int> parent, rank;
    std::vector<int> parity;  // parity relative to parent

    explicit ParityUnionFind(int n) : parent(static_cast<size_t>(n)), rank(static_cast<size_t>(n), 0), parity(static_cast<size_t>(n), 0) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    std::pair<int, int> find(int x) {
        int p = 0;
        int r = x;
        while (parent[r] != r) {
            p ^= parity[r];
            r = parent[r];
        }
        // path compression with parity fix-up
        int cur = x, cp = p;
        while (parent[cur] != cur) {
            int next = parent[cur];
            int np = cp ^ parity[cur];
            parent[cur] = r;
            parity[cur] = cp;
            cur = next;
            cp = np;
        }
        return {r, p};
    }

    void unite(int a, int b, int rel) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return;
        if (rank[ra] < rank[rb]) {
            std::swap(ra, rb);
            std::swap(pa, pb);
        }
        parent[rb] = ra;
        parity[rb] = pa ^ pb ^ rel;
        if (rank[ra] == rank[rb]) ++rank[ra];
    }
};

}  // namespace

MedianGraph MedianGraph::validate(const RawGraph& raw) { return build(raw, true); }
MedianGraph MedianGraph::trusted(const RawGraph& raw) { return build(raw, false); }

MedianGraph MedianGraph::build(const RawGraph& raw, bool check_median) {
    MedianGraph g;
    g.n_ = static_cast<int>(raw.vertices.size());
    if (g.n_ == 0) fail(ErrorKind::NotConnected, "graph has no vertices");
    g.names_ = raw.vertices;
    {
        std::set<std::string> seen(raw.vertices.begin(), raw.vertices.end());
        if (seen.size() != raw.vertices.size()) fail(ErrorKind::NotSimple, "duplicate vertex id");
    }
    std::vector<std::pair<int, int>> es;
    es.reserve(raw.edges.size());
    for (auto [u, v] : raw.edges) {
        if (u < 0 || v < 0 || u >= g.n_ || v >= g.n_) fail(ErrorKind::UnknownVertex, "edge endpoint out of range");
        if (u == v) fail(ErrorKind::NotSimple, "loop at " + raw.vertices[static_cast<size_t>(u)]);
        es.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(es.begin(), es.end());
    if (std::adjacent_find(es.begin(), es.end()) != es.end()) fail(ErrorKind::NotSimple, "repeated edge");
    g.edges_ = es;

    std::vector<int> deg(static_cast<size_t>(g.n_), 0);
    for (auto [u, v] : es) {
        ++deg[u];
        ++deg[v];
    }
    g.off_.assign(static_cast<size_t>(g.n_) + 1, 0);
    for (int v = 0; v < g.n_; ++v) g.off_[v + 1] = g.off_[v] + deg[v];
    g.adj_.assign(static_cast<size_t>(g.off_[g.n_]), 0);
    g.adj_edge_.assign(g.adj_.size(), 0);
    std::vector<int> fill(g.off_.begin(), g.off_.end() - 1);
    for (size_t e = 0; e < es.size(); ++e) {
        auto [u, v] = es[e];
        g.adj_[fill[u]] = v;
        g.adj_edge_[fill[u]++] = static_cast<int>(e);
        g.adj_[fill[v]] = u;
        g.adj_edge_[fill[v]++] = static_cast<int>(e);
    }
    for (int v = 0; v < g.n_; ++v) {
        std::vector<std::pair<int, int>> tmp;
        for (int i = g.off_[v]; i < g.off_[v + 1]; ++i) tmp.emplace_back(g.adj_[i], g.adj_edge_[i]);
        std::sort(tmp.begin(), tmp.end());
        for (int i = g.off_[v]; i < g.off_[v + 1]; ++i) {
            g.adj_[i] = tmp[static_cast<size_t>(i - g.off_[v])].first;
            g.adj_edge_[i] = tmp[static_cast<size_t>(i - g.off_[v])].second;
        }
    }

    std::vector<int> d0 = g.bfs(0);
    for (int v = 0; v < g.n_; ++v)
        if (d0[v] < 0) {
            Error err(ErrorKind::NotConnected, "vertex " + g.names_[v] + " unreachable from " + g.names_[0]);
            err.witness = {0, v};
            throw err;
        }

    if (g.n_ <= kDenseLimit) {
        g.dist_.assign(static_cast<size_t>(g.n_) * static_cast<size_t>(g.n_), 0);
        for (int s = 0; s < g.n_; ++s) {
            std::vector<int> d = s == 0 ? d0 : g.bfs(s);
            for (int t = 0; t < g.n_; ++t) g.dist_[static_cast<size_t>(s) * g.n_ + t] = static_cast<uint16_t>(d[t]);
        }
    }
    if (check_median) {
        if (g.n_ > kValidateLimit)
            fail(ErrorKind::OutOfRange, "median validation is limited to " + std::to_string(kValidateLimit) + " vertices");
        g.check_medians();
    }

    // Theta classes: union-find over opposite edges of 4-cycles, tracking orientation parity.
    ParityUnionFind uf(g.edge_count());
    std::vector<std::pair<int, int>> crossing_pairs;
    auto tail_bit = [&](int e, int from) { return g.edges_[e].first == from ? 0 : 1; };
    for (int u = 0; u < g.n_; ++u) {
        for (int i = g.off_[u]; i < g.off_[u + 1]; ++i) {
            for (int j = i + 1; j < g.off_[u + 1]; ++j) {
                int v = g.adj_[i], w = g.adj_[j];
                // common neighbours of v and w other than u
                const int* a = g.nbr_begin(v);
                const int* ae = g.nbr_end(v);
                const int* b = g.nbr_begin(w);
                const int* be = g.nbr_end(w);
                while (a != ae && b != be) {
                    if (*a < *b) {
                        ++a;
                    } else if (*b < *a) {
                        ++b;
                    } else {
                        int x = *a;
                        if (x != u) {
                            int e_uv = g.adj_edge_[i], e_uw = g.adj_edge_[j];
                            int e_wx = g.edge_id(w, x), e_vx = g.edge_id(v, x);
                            uf.unite(e_uv, e_wx, tail_bit(e_uv, u) ^ tail_bit(e_wx, w));
                            uf.unite(e_uw, e_vx, tail_bit(e_uw, u) ^ tail_bit(e_vx, v));
                            crossing_pairs.emplace_back(e_uv, e_uw);
                        }
                        ++a;
                        ++b;
                    }
                }
            }
        }
    }
    std::map<int, int> root_class;
    g.edge_class_.assign(es.size(), -1);
    std::vector<int> par(es.size());
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [r, p] = uf.find(e);
        par[e] = p;
        auto it = root_class.find(r);
        if (it == root_class.end()) {
            it = root_class.emplace(r, static_cast<int>(g.class_edges_.size())).first;
            g.class_edges_.emplace_back();
        }
        g.edge_class_[e] = it->second;
        g.class_edges_[it->second].push_back(e);
    }
    g.minus_end_.assign(es.size(), -1);
    for (auto& ce : g.class_edges_) {
        int e0 = ce.front();
        auto [a0, b0] = g.edges_[e0];
        bool first_is_minus = d0[a0] < d0[b0];
        for (int e : ce) {
            bool same = par[e] == par[e0];
            bool f = same ? first_is_minus : !first_is_minus;
            g.minus_end_[e] = f ? g.edges_[e].first : g.edges_[e].second;
        }
    }
    g.crosses_.assign(g.class_edges_.size(), {});
    for (auto [e1, e2] : crossing_pairs) {
        int h1 = g.edge_class_[e1], h2 = g.edge_class_[e2];
        g.crosses_[h1].push_back(h2);
        g.crosses_[h2].push_back(h1);
    }
    for (auto& c : g.crosses_) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    return g;
}

void MedianGraph::check_medians() const {
    const int n = n_;
    const size_t words = (static_cast<size_t>(n) + 63) / 64;
    auto d = [&](int a, int b) { return static_cast<int>(dist_[static_cast<size_t>(a) * n + b]); };
    // interval bitsets I(x,y) for x < y, stored row-major over the upper triangle
    auto pair_index = [&](int x, int y) {
        if (x > y) std::swap(x, y);
        return (static_cast<size_t>(x) * (2 * static_cast<size_t>(n) - x - 1)) / 2 + (y - x - 1);
    };
    size_t pairs = static_cast<size_t>(n) * (n - 1) / 2;
    std::vector<uint64_t> iv(pairs * words, 0);
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            uint64_t* row = &iv[pair_index(x, y) * words];
            int dxy = d(x, y);
            for (int m = 0; m < n; ++m)
                if (d(x, m) + d(m, y) == dxy) row[m >> 6] |= uint64_t(1) << (m & 63);
        }
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            for (int z = y + 1; z < n; ++z) {
                const uint64_t* a = &iv[pair_index(x, y) * words];
                const uint64_t* b = &iv[pair_index(y, z) * words];
                const uint64_t* c = &iv[pair_index(x, z) * words];
                int count = 0;
                for (size_t w = 0; w < words && count < 2; ++w) count += __builtin_popcountll(a[w] & b[w] & c[w]);
                if (count != 1) {
                    Error err(ErrorKind::NotMedian, "triple (" + names_[x] + ", " + names_[y] + ", " + names_[z] + ") has " +
                                                        (count == 0 ? std::string("no median") : std::string("several medians")));
                    err.witness = {x, y, z};
                    throw err;
                }
            }
}

int MedianGraph::index_of(const std::string& name) const {
    for (int i = 0; i < n_; ++i)
        if (names_[i] == name) return i;
    fail(ErrorKind::UnknownVertex, "no vertex '" + name + "'");
}

int MedianGraph::edge_id(int u, int v) const {
    const int* b = nbr_begin(u);
    const int* e = nbr_end(u);
    const int* it = std::lower_bound(b, e, v);
    if (it == e || *it != v) return -1;
    return adj_edge_[off_[u] + (it - b)];
}

std::vector<int> MedianGraph::bfs(int source) const {
    std::vector<int> d(static_cast<size_t>(n_), -1);
    std::vector<int> q;
    q.reserve(static_cast<size_t>(n_));
    d[source] = 0;
    q.push_back(source);
    for (size_t i = 0; i < q.size(); ++i) {
        int u = q[i];
        for (const int* p = nbr_begin(u); p != nbr_end(u); ++p)
            if (d[*p] < 0) {
                d[*p] = d[u] + 1;
                q.push_back(*p);
            }
    }
    return d;
}

int MedianGraph::distance(int u, int v) const {
    if (dense()) return dist_[static_cast<size_t>(u) * n_ + v];
    if (u == v) return 0;
    Scratch& s = scratch;
    s.prepare(n_);
    s.stamp[u] = s.cur;
    s.dist[u] = 0;
    s.queue.push_back(u);
    for (size_t i = 0; i < s.queue.size(); ++i) {
        int a = s.queue[i];
        for (const int* p = nbr_begin(a); p != nbr_end(a); ++p) {
            if (s.stamp[*p] == s.cur) continue;
            s.stamp[*p] = s.cur;
            s.dist[*p] = s.dist[a] + 1;
            if (*p == v) return s.dist[*p];
            s.queue.push_back(*p);
        }
    }
    return -1;
}

bool MedianGraph::in_carrier(int h, int z) const {
    const int* ed = nbr_edge(z);
    for (int i = 0; i < degree(z); ++i)
        if (edge_class_[ed[i]] == h) return true;
    return false;
}

namespace {

// Class edge incident to z, or -1.
int class_edge_at(const MedianGraph& g, int h, int z) {
    const int* ed = g.nbr_edge(z);
    for (int i = 0; i < g.degree(z); ++i)
        if (g.class_of_edge(ed[i]) == h) return ed[i];
    return -1;
}

}  // namespace

int MedianGraph::side(int h, int z) const {
    if (dense()) {
        int e = class_edges_[h].front();
        int m = minus_end_[e];
        int p = edges_[e].first == m ? edges_[e].second : edges_[e].first;
        return distance(z, m) < distance(z, p) ? 0 : 1;
    }
    // The first carrier vertex reached is the gate of z in N(h), which lies on z's side.
    int e = class_edge_at(*this, h, z);
    if (e >= 0) return minus_end_[e] == z ? 0 : 1;
    Scratch& s = scratch;
    s.prepare(n_);
    s.stamp[z] = s.cur;
    s.queue.push_back(z);
    for (size_t i = 0; i < s.queue.size(); ++i) {
        int a = s.queue[i];
        for (const int* p = nbr_begin(a); p != nbr_end(a); ++p) {
            if (s.stamp[*p] == s.cur) continue;
            s.stamp[*p] = s.cur;
            int f = class_edge_at(*this, h, *p);
            if (f >= 0) return minus_end_[f] == *p ? 0 : 1;
            s.queue.push_back(*p);
        }
    }
    fail(ErrorKind::UnknownEdge, "hyperplane unreachable");
}

int MedianGraph::distance_to_carrier(int h, int z) const {
    if (dense()) {
        int best = n_;
        for (int e : class_edges_[h]) best = std::min({best, distance(z, edges_[e].first), distance(z, edges_[e].second)});
        return best;
    }
    if (in_carrier(h, z)) return 0;
    Scratch& s = scratch;
    s.prepare(n_);
    s.stamp[z] = s.cur;
    s.dist[z] = 0;
    s.queue.push_back(z);
    for (size_t i = 0; i < s.queue.size(); ++i) {
        int a = s.queue[i];
        for (const int* p = nbr_begin(a); p != nbr_end(a); ++p) {
            if (s.stamp[*p] == s.cur) continue;
            s.stamp[*p] = s.cur;
            s.dist[*p] = s.dist[a] + 1;
            if (in_carrier(h, *p)) return s.dist[*p];
            s.queue.push_back(*p);
        }
    }
    return -1;
}

Relation MedianGraph::crossing(int h1, int h2) const {
    if (h1 == h2) return Relation::Equal;
    const auto& c = crosses_[h1];
    return std::binary_search(c.begin(), c.end(), h2) ? Relation::Cross : Relation::Parallel;
}

Hyperplane MedianGraph::hyperplane(int h) const {
    Hyperplane H;
    H.id = h;
    H.edges = class_edges_[h];
    // halfspaces are the components after deleting the class edges
    std::vector<int> comp(static_cast<size_t>(n_), -1);
    std::vector<int> q{0};
    comp[0] = 0;
    for (size_t i = 0; i < q.size(); ++i) {
        int u = q[i];
        for (int k = off_[u]; k < off_[u + 1]; ++k) {
            if (edge_class_[adj_edge_[k]] == h) continue;
            int v = adj_[k];
            if (comp[v] < 0) {
                comp[v] = 0;
                q.push_back(v);
            }
        }
    }
    for (int v = 0; v < n_; ++v) (comp[v] == 0 ? H.minus : H.plus).push_back(v);
    for (int e : H.edges) {
        H.carrier.push_back(edges_[e].first);
        H.carrier.push_back(edges_[e].second);
    }
    std::sort(H.carrier.begin(), H.carrier.end());
    H.carrier.erase(std::unique(H.carrier.begin(), H.carrier.end()), H.carrier.end());
    return H;
}

Hyperplane hyperplane_of_edge(const MedianGraph& g, int u, int v) {
    int e = (u >= 0 && v >= 0 && u < g.vertex_count() && v < g.vertex_count()) ? g.edge_id(u, v) : -1;
    if (e < 0) fail(ErrorKind::UnknownEdge, "no edge between the given vertices");
    return g.hyperplane(g.class_of_edge(e));
}

int median(const MedianGraph& g, int x, int y, int z) {
    // Walk from x towards y and z simultaneously; in a median graph this ends at the median.
    int m = x;
    while (true) {
        int dy = g.distance(m, y), dz = g.distance(m, z);
        int next = -1;
        for (const int* p = g.nbr_begin(m); p != g.nbr_end(m); ++p)
            if (g.distance(*p, y) < dy && g.distance(*p, z) < dz) {
                next = *p;
                break;
            }
        if (next < 0) return m;
        m = next;
    }
}

int max_crossing_clique(const MedianGraph& g, const std::vector<int>& classes) {
    if (classes.empty()) return 0;
    int best = 1;
    std::vector<int> cur;
    // simple branch and bound over the candidate list
    auto rec = [&](auto&& self, std::vector<int>& cand) -> void {
        if (static_cast<int>(cur.size()) > best) best = static_cast<int>(cur.size());
        while (!cand.empty()) {
            if (static_cast<int>(cur.size() + cand.size()) <= best) return;
            int h = cand.back();
            cand.pop_back();
            std::vector<int> next;
            for (int c : cand)
                if (g.crossing(h, c) == Relation::Cross) next.push_back(c);
            cur.push_back(h);
            self(self, next);
            cur.pop_back();
        }
    };
    std::vector<int> cand = classes;
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    // classes with no crossings cannot beat 1
    std::vector<int> useful;
    for (int h : cand)
        if (!g.crossing_classes(h).empty()) useful.push_back(h);
    rec(rec, useful);
    return best;
}

int dimension(const MedianGraph& g) {
    std::vector<int> all(static_cast<size_t>(g.class_count()));
    std::iota(all.begin(), all.end(), 0);
    return max_crossing_clique(g, all);
}

bool is_convex_by_intervals(const MedianGraph& g, const std::vector<int>& subset) {
    const int n = g.vertex_count();
    std::vector<char> in(static_cast<size_t>(n), 0);
    for (int v : subset) in[v] = 1;
    std::vector<char> on(static_cast<size_t>(n));
    std::vector<int> d(static_cast<size_t>(n)), order;
    order.reserve(static_cast<size_t>(n));
    for (int a : subset) {
        std::fill(d.begin(), d.end(), -1);
        order.assign(1, a);
        d[a] = 0;
        for (size_t i = 0; i < order.size(); ++i)
            for (const int* p = g.nbr_begin(order[i]); p != g.nbr_end(order[i]); ++p)
                if (d[*p] < 0) {
                    d[*p] = d[order[i]] + 1;
                    order.push_back(*p);
                }
        // on[v]: v lies on a geodesic from a to some vertex of the subset; farthest first
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int v = *it;
            on[v] = in[v];
            if (!on[v])
                for (const int* p = g.nbr_begin(v); p != g.nbr_end(v); ++p)
                    if (d[*p] == d[v] + 1 && on[*p]) {
                        on[v] = 1;
                        break;
                    }
            if (on[v] && !in[v]) return false;
        }
    }
    return true;
}

bool is_convex_local(const MedianGraph& g, const std::vector<int>& subset) {
    if (subset.empty()) return true;
    const int n = g.vertex_count();
    std::vector<char> in(static_cast<size_t>(n), 0);
    for (int v : subset) in[v] = 1;
    // connected inside the subset
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<int> q{subset.front()};
    seen[subset.front()] = 1;
    for (size_t i = 0; i < q.size(); ++i)
        for (const int* p = g.nbr_begin(q[i]); p != g.nbr_end(q[i]); ++p)
            if (in[*p] && !seen[*p]) {
                seen[*p] = 1;
                q.push_back(*p);
            }
    if (q.size() != std::set<int>(subset.begin(), subset.end()).size()) return false;
    // every common neighbour of two subset vertices at distance two lies in the subset
    for (int v = 0; v < n; ++v) {
        if (in[v]) continue;
        int count = 0;
        for (const int* p = g.nbr_begin(v); p != g.nbr_end(v); ++p) count += in[*p];
        if (count >= 2) return false;  // bipartite: two subset neighbours of v are at distance two
    }
    return true;
}

bool is_convex(const MedianGraph& g, const std::vector<int>& subset) {
    double cost = static_cast<double>(subset.size()) * (g.vertex_count() + 2.0 * g.edge_count());
    if (cost <= 4e7) return is_convex_by_intervals(g, subset);
    return is_convex_local(g, subset);
}

Subdivision subdivide(const MedianGraph& g) {
    const int n = g.vertex_count();
    if (!g.dense()) fail(ErrorKind::OutOfRange, "subdivision needs a graph with at most " + std::to_string(MedianGraph::kDenseLimit) + " vertices");
    int dim = dimension(g);
    std::map<std::vector<int>, int> index;
    std::vector<std::vector<int>> cubes;
    for (int v = 0; v < n; ++v) {
        index[{v}] = v;
        cubes.push_back({v});
    }
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            int d = g.distance(u, v);
            if (d > dim) continue;
            std::vector<int> iv;
            for (int m = 0; m < n; ++m)
                if (g.distance(u, m) + g.distance(m, v) == d) iv.push_back(m);
            if (static_cast<int>(iv.size()) != (1 << d)) continue;
            if (index.emplace(iv, static_cast<int>(cubes.size())).second) cubes.push_back(iv);
        }
    RawGraph raw;
    for (auto& c : cubes) {
        if (c.size() == 1) {
            raw.add_vertex(g.name(c[0]));
            continue;
        }
        std::string nm = "[";
        for (size_t i = 0; i < c.size(); ++i) nm += (i ? "|" : "") + g.name(c[i]);
        raw.add_vertex(nm + "]");
    }
    for (size_t ci = 0; ci < cubes.size(); ++ci) {
        const auto& c = cubes[ci];
        if (c.size() == 1) continue;
        std::set<int> classes;
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = i + 1; j < c.size(); ++j) {
                int e = g.edge_id(c[i], c[j]);
                if (e >= 0) classes.insert(g.class_of_edge(e));
            }
        for (int h : classes)
            for (int sd = 0; sd < 2; ++sd) {
                std::vector<int> face;
                for (int v : c)
                    if (g.side(h, v) == sd) face.push_back(v);
                raw.add_edge(index.at(face), static_cast<int>(ci));
            }
    }
    Subdivision out{MedianGraph::trusted(raw), cubes, {}};
    out.vertex_map.resize(static_cast<size_t>(n));
    std::iota(out.vertex_map.begin(), out.vertex_map.end(), 0);
    return out;
}

}  // namespace cubefix
