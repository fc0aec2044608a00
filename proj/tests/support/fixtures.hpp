#pragma once

#include "cubefix/action.hpp"
#include "cubefix/automaton.hpp"
#include "cubefix/median_graph.hpp"
#include "cubefix/random_groups.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace fixtures {

using namespace cubefix;

inline RawGraph path_graph(int n) {
    RawGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex(std::to_string(i));
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

inline std::string xy(int i, int j) { return std::to_string(i) + "," + std::to_string(j); }

// w x h vertices, named "i,j"
inline RawGraph grid_graph(int w, int h) {
    RawGraph g;
    for (int i = 0; i < w; ++i)
        for (int j = 0; j < h; ++j) g.add_vertex(xy(i, j));
    for (int i = 0; i < w; ++i)
        for (int j = 0; j < h; ++j) {
            if (i + 1 < w) g.add_edge(g.index_of(xy(i, j)), g.index_of(xy(i + 1, j)));
            if (j + 1 < h) g.add_edge(g.index_of(xy(i, j)), g.index_of(xy(i, j + 1)));
        }
    return g;
}

inline RawGraph cube_graph(int d) {
    RawGraph g;
    for (int v = 0; v < (1 << d); ++v) g.add_vertex(std::to_string(v));
    for (int v = 0; v < (1 << d); ++v)
        for (int b = 0; b < d; ++b)
            if (!(v & (1 << b))) g.add_edge(v, v | (1 << b));
    return g;
}

// Young-diagram staircase: column i has heights[i] squares stacked from the bottom.
inline RawGraph staircase_graph(const std::vector<int>& heights) {
    RawGraph g;
    const int w = static_cast<int>(heights.size());
    auto top = [&](int i) {  // highest vertex row in vertex column i
        int h = 0;
        if (i > 0) h = std::max(h, heights[static_cast<size_t>(i - 1)]);
        if (i < w) h = std::max(h, heights[static_cast<size_t>(i)]);
        return h;
    };
    for (int i = 0; i <= w; ++i)
        for (int j = 0; j <= top(i); ++j) g.add_vertex(xy(i, j));
    for (int i = 0; i <= w; ++i)
        for (int j = 0; j <= top(i); ++j) {
            if (j + 1 <= top(i)) g.add_edge(g.index_of(xy(i, j)), g.index_of(xy(i, j + 1)));
            if (i < w && j <= heights[static_cast<size_t>(i)]) g.add_edge(g.index_of(xy(i, j)), g.index_of(xy(i + 1, j)));
        }
    return g;
}

inline RawGraph star_graph(int leaves) {
    RawGraph g;
    g.add_vertex("c");
    for (int i = 0; i < leaves; ++i) {
        g.add_vertex("l" + std::to_string(i));
        g.add_edge(0, i + 1);
    }
    return g;
}

inline RawGraph complete_graph(int n) {
    RawGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex(std::to_string(i));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

inline RawGraph random_tree(std::mt19937_64& rng, int n) {
    RawGraph g;
    g.add_vertex("0");
    for (int i = 1; i < n; ++i) {
        g.add_vertex(std::to_string(i));
        g.add_edge(static_cast<int>(rng() % static_cast<unsigned>(i)), i);
    }
    return g;
}

// ---- small graphs as adjacency bitmasks ----

struct SmallGraph {
    int n = 0;
    std::vector<unsigned> adj;

    bool edge(int u, int v) const { return (adj[static_cast<size_t>(u)] >> v) & 1u; }
    RawGraph raw() const {
        RawGraph g;
        for (int i = 0; i < n; ++i) g.add_vertex(std::to_string(i));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (edge(i, j)) g.add_edge(i, j);
        return g;
    }
};

inline std::vector<std::vector<int>> all_distances(const SmallGraph& g) {
    std::vector<std::vector<int>> d(static_cast<size_t>(g.n), std::vector<int>(static_cast<size_t>(g.n), -1));
    for (int s = 0; s < g.n; ++s) {
        std::vector<int> q{s};
        d[s][s] = 0;
        for (size_t i = 0; i < q.size(); ++i)
            for (int t = 0; t < g.n; ++t)
                if (g.edge(q[i], t) && d[s][t] < 0) {
                    d[s][t] = d[s][q[i]] + 1;
                    q.push_back(t);
                }
    }
    return d;
}

// subset closed under geodesics, by interval membership
inline bool convex_mask(const SmallGraph& g, const std::vector<std::vector<int>>& d, unsigned mask) {
    for (int a = 0; a < g.n; ++a)
        for (int b = 0; b < g.n; ++b) {
            if (!((mask >> a) & 1u) || !((mask >> b) & 1u)) continue;
            for (int z = 0; z < g.n; ++z)
                if (!((mask >> z) & 1u) && d[a][z] + d[z][b] == d[a][b]) return false;
        }
    return true;
}

inline std::vector<unsigned> canonical_key(const SmallGraph& g) {
    // vertex invariant: degree, then sorted neighbour degrees
    std::vector<std::pair<std::vector<int>, int>> inv;
    for (int v = 0; v < g.n; ++v) {
        std::vector<int> key{__builtin_popcount(g.adj[v])};
        std::vector<int> nd;
        for (int u = 0; u < g.n; ++u)
            if (g.edge(u, v)) nd.push_back(__builtin_popcount(g.adj[u]));
        std::sort(nd.begin(), nd.end());
        key.insert(key.end(), nd.begin(), nd.end());
        inv.emplace_back(key, v);
    }
    std::sort(inv.begin(), inv.end());
    std::vector<int> order;
    std::vector<int> cls;
    for (size_t i = 0; i < inv.size(); ++i) {
        order.push_back(inv[i].second);
        cls.push_back(i == 0 || inv[i].first != inv[i - 1].first ? static_cast<int>(i) : cls.back());
    }
    // permute within invariant classes
    std::vector<unsigned> best;
    std::vector<int> perm = order;
    std::function<void(size_t)> rec = [&](size_t start) {
        if (start == perm.size()) {
            std::vector<unsigned> key(static_cast<size_t>(g.n), 0);
            for (int i = 0; i < g.n; ++i)
                for (int j = 0; j < g.n; ++j)
                    if (g.edge(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)])) key[static_cast<size_t>(i)] |= 1u << j;
            if (best.empty() || key < best) best = key;
            return;
        }
        size_t end = start;
        while (end < perm.size() && cls[end] == cls[start]) ++end;
        std::sort(perm.begin() + static_cast<long>(start), perm.begin() + static_cast<long>(end));
        do {
            rec(end);
        } while (std::next_permutation(perm.begin() + static_cast<long>(start), perm.begin() + static_cast<long>(end)));
    };
    rec(0);
    return best;
}

// All median graphs up to isomorphism with at most max_n vertices, by convex expansion from K1.
inline std::vector<SmallGraph> median_graphs_up_to(int max_n) {
    std::vector<SmallGraph> out;
    std::set<std::vector<unsigned>> seen;
    SmallGraph k1;
    k1.n = 1;
    k1.adj = {0};
    out.push_back(k1);
    seen.insert(canonical_key(k1));
    for (size_t idx = 0; idx < out.size(); ++idx) {
        const SmallGraph g = out[idx];
        auto d = all_distances(g);
        std::vector<unsigned> convex;
        for (unsigned m = 1; m < (1u << g.n); ++m)
            if (convex_mask(g, d, m)) convex.push_back(m);
        const unsigned full = (1u << g.n) - 1;
        for (unsigned w1 : convex)
            for (unsigned w2 : convex) {
                if (w1 > w2 || (w1 | w2) != full || !(w1 & w2)) continue;
                const unsigned only1 = w1 & ~w2, only2 = w2 & ~w1;
                bool cut = false;
                for (int u = 0; u < g.n && !cut; ++u)
                    if ((only1 >> u) & 1u)
                        for (int v = 0; v < g.n; ++v)
                            if (((only2 >> v) & 1u) && g.edge(u, v)) cut = true;
                if (cut) continue;
                const int extra = __builtin_popcount(w1 & w2);
                if (g.n + extra > max_n) continue;
                // copy 1 = W1 (original indices), copy 2 = W2 with W1 ∩ W2 duplicated
                SmallGraph h;
                h.n = g.n + extra;
                h.adj.assign(static_cast<size_t>(h.n), 0);
                std::vector<int> twin(static_cast<size_t>(g.n), -1);
                int next = g.n;
                for (int v = 0; v < g.n; ++v)
                    if ((w1 & w2) >> v & 1u) twin[v] = next++;
                auto link = [&](int a, int b) {
                    h.adj[a] |= 1u << b;
                    h.adj[b] |= 1u << a;
                };
                // in the expansion, W1-copy keeps the vertices of W1, W2-copy uses the twins for W1 ∩ W2
                auto copy2 = [&](int v) { return twin[v] >= 0 ? twin[v] : v; };
                for (int u = 0; u < g.n; ++u)
                    for (int v = u + 1; v < g.n; ++v) {
                        if (!g.edge(u, v)) continue;
                        if ((w1 >> u & 1u) && (w1 >> v & 1u)) link(u, v);
                        if ((w2 >> u & 1u) && (w2 >> v & 1u)) link(copy2(u), copy2(v));
                    }
                for (int v = 0; v < g.n; ++v)
                    if (twin[v] >= 0) link(v, twin[v]);
                auto key = canonical_key(h);
                if (seen.insert(key).second) out.push_back(h);
            }
    }
    return out;
}

using Perm = std::vector<int>;

inline std::vector<Perm> automorphisms(const SmallGraph& g) {
    std::vector<Perm> out;
    Perm p(static_cast<size_t>(g.n), -1);
    std::vector<bool> used(static_cast<size_t>(g.n), false);
    std::function<void(int)> rec = [&](int v) {
        if (v == g.n) {
            out.push_back(p);
            return;
        }
        for (int t = 0; t < g.n; ++t) {
            if (used[t] || __builtin_popcount(g.adj[v]) != __builtin_popcount(g.adj[t])) continue;
            bool ok = true;
            for (int u = 0; u < v && ok; ++u)
                if (g.edge(u, v) != g.edge(p[u], t)) ok = false;
            if (!ok) continue;
            p[v] = t;
            used[t] = true;
            rec(v + 1);
            used[t] = false;
        }
        p[v] = -1;
    };
    rec(0);
    return out;
}

// ---- random labeled trees ----

inline void add_word(CheckpointTree& t, const Word& w) {
    int v = 0;
    for (Letter s : w) v = t.add_child(v, s);
}

// Factor-closed random tree: every suffix of every vertex word is a vertex word.
inline CheckpointTree random_star_tree(std::mt19937_64& rng, int alphabet, int depth, int words) {
    CheckpointTree t;
    for (int i = 0; i < words; ++i) {
        int len = 1 + static_cast<int>(rng() % static_cast<unsigned>(depth));
        Word w;
        for (int j = 0; j < len; ++j) w.push_back(static_cast<Letter>(rng() % static_cast<unsigned>(alphabet)));
        for (size_t a = 0; a < w.size(); ++a) add_word(t, Word(w.begin() + static_cast<long>(a), w.end()));
    }
    return t;
}

// ---- random automata ----

inline Automaton random_automaton(std::mt19937_64& rng, const Alphabet& alphabet, int vertices, int min_labels,
                                  int max_labels, bool deterministic) {
    Automaton a;
    a.alphabet = alphabet;
    for (int v = 0; v < vertices; ++v) a.add_vertex(v == 0 ? "s" : "v" + std::to_string(v));
    const int S = alphabet.size();
    for (int v = 0; v < vertices; ++v) {
        int count = min_labels + static_cast<int>(rng() % static_cast<unsigned>(max_labels - min_labels + 1));
        std::vector<int> labels(static_cast<size_t>(S));
        std::iota(labels.begin(), labels.end(), 0);
        std::shuffle(labels.begin(), labels.end(), rng);
        for (int i = 0; i < count && i < S; ++i) {
            int reps = deterministic ? 1 : 1 + static_cast<int>(rng() % 2);
            for (int r = 0; r < reps; ++r) a.add_edge(v, static_cast<int>(rng() % static_cast<unsigned>(vertices)), labels[static_cast<size_t>(i)]);
        }
    }
    return a;
}

}  // namespace fixtures
