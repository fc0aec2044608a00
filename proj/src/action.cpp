#include "cubefix/action.hpp"
#include "cubefix/error.hpp"

#include <algorithm>
#include <map>

namespace cubefix {

Action Action::total(std::shared_ptr<const MedianGraph> g, const std::vector<std::vector<int>>& generator_maps) {
    const int n = g->vertex_count();
    Action a;
    a.graph_ = std::move(g);
    for (size_t gi = 0; gi < generator_maps.size(); ++gi) {
        const auto& m = generator_maps[gi];
        if (static_cast<int>(m.size()) != n) fail(ErrorKind::Format, "generator map has wrong size");
        std::vector<int> inv(static_cast<size_t>(n), -1);
        for (int v = 0; v < n; ++v) {
            if (m[v] < 0 || m[v] >= n || inv[m[v]] >= 0)
                fail(ErrorKind::PreconditionViolated, "generator " + letter_name(letter(static_cast<int>(gi), false)) + " is not a bijection");
            inv[m[v]] = v;
        }
        for (int e = 0; e < a.graph_->edge_count(); ++e) {
            auto [u, v] = a.graph_->edge(e);
            if (a.graph_->edge_id(m[u], m[v]) < 0)
                fail(ErrorKind::PreconditionViolated, "generator " + letter_name(letter(static_cast<int>(gi), false)) + " does not preserve adjacency");
        }
        a.maps_.push_back(m);
        a.maps_.push_back(inv);
    }
    return a;
}

Action Action::window(std::shared_ptr<const MedianGraph> g, std::vector<std::vector<int>> letter_maps, int radius, int basepoint) {
    Action a;
    a.graph_ = std::move(g);
    a.maps_ = std::move(letter_maps);
    a.window_ = true;
    a.radius_ = radius;
    a.basepoint_ = basepoint;
    return a;
}

std::vector<Letter> Action::letters() const {
    std::vector<Letter> out;
    for (int l = 0; l < letter_count(); ++l) out.push_back(l);
    return out;
}

int Action::try_apply(const Word& w, int v) const {
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (*it < 0 || *it >= letter_count()) fail(ErrorKind::OutOfRange, "letter outside the generating set");
        v = step(*it, v);
        if (v < 0) return -1;
    }
    return v;
}

int Action::apply(const Word& w, int v) const {
    for (size_t i = w.size(); i-- > 0;) {
        if (w[i] < 0 || w[i] >= letter_count()) fail(ErrorKind::OutOfRange, "letter outside the generating set");
        int next = step(w[i], v);
        if (next < 0)
            fail(ErrorKind::OutOfWindow, "word " + format_word(w) + " leaves the window at position " + std::to_string(i + 1) +
                                             " from " + graph().name(v));
        v = next;
    }
    return v;
}

Action tree_ball_action(int rank, int radius) {
    if (rank < 1 || radius < 1) fail(ErrorKind::OutOfRange, "tree ball needs rank >= 1 and radius >= 1");
    const int L = 2 * rank;
    RawGraph raw;
    std::vector<int> parent{-1}, last{-1};
    std::vector<std::vector<int>> child;
    std::vector<Word> words{{}};
    raw.add_vertex("e");
    child.emplace_back(L, -1);
    for (size_t i = 0; i < words.size(); ++i) {
        if (static_cast<int>(words[i].size()) == radius) continue;
        for (Letter s = 0; s < L; ++s) {
            if (last[i] >= 0 && s == inverse(last[i])) continue;
            Word w = words[i];
            w.push_back(s);
            int id = raw.add_vertex(format_word(w));
            words.push_back(std::move(w));
            parent.push_back(static_cast<int>(i));
            last.push_back(s);
            child.emplace_back(L, -1);
            child[i][s] = id;
            raw.add_edge(static_cast<int>(i), id);
        }
    }
    const int n = static_cast<int>(words.size());
    auto right = [&](int v, Letter s) -> int {
        if (v < 0) return -1;
        if (last[v] >= 0 && last[v] == inverse(s)) return parent[v];
        return child[v][s];
    };
    std::vector<std::vector<int>> maps(static_cast<size_t>(L), std::vector<int>(static_cast<size_t>(n), -1));
    for (Letter l = 0; l < L; ++l) {
        maps[l][0] = child[0][l];
        for (int v = 1; v < n; ++v) maps[l][v] = right(maps[l][parent[v]], last[v]);
    }
    auto g = std::make_shared<const MedianGraph>(MedianGraph::trusted(raw));
    return Action::window(g, std::move(maps), radius, 0);
}

Action grid_box_action(const std::vector<int>& radii) {
    if (radii.empty()) fail(ErrorKind::OutOfRange, "grid box needs at least one dimension");
    const int k = static_cast<int>(radii.size());
    std::vector<int> side(radii.size()), stride(radii.size());
    long long n = 1;
    for (int i = k - 1; i >= 0; --i) {
        if (radii[i] < 1) fail(ErrorKind::OutOfRange, "grid radius must be >= 1");
        side[i] = 2 * radii[i] + 1;
        stride[i] = static_cast<int>(n);
        n *= side[i];
    }
    if (n > 5000000) fail(ErrorKind::OutOfRange, "grid box too large");
    RawGraph raw;
    auto coords = [&](int v) {
        std::vector<int> c(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) c[i] = (v / stride[i]) % side[i] - radii[i];
        return c;
    };
    for (int v = 0; v < n; ++v) {
        auto c = coords(v);
        std::string nm;
        for (int i = 0; i < k; ++i) nm += (i ? "," : "") + std::to_string(c[i]);
        raw.add_vertex(nm);
    }
    for (int v = 0; v < n; ++v) {
        auto c = coords(v);
        for (int i = 0; i < k; ++i)
            if (c[i] < radii[i]) raw.add_edge(v, v + stride[i]);
    }
    std::vector<std::vector<int>> maps(static_cast<size_t>(2 * k), std::vector<int>(static_cast<size_t>(n), -1));
    int origin = 0;
    for (int i = 0; i < k; ++i) origin += radii[i] * stride[i];
    for (int v = 0; v < n; ++v) {
        auto c = coords(v);
        for (int i = 0; i < k; ++i) {
            if (c[i] < radii[i]) maps[letter(i, false)][v] = v + stride[i];
            if (c[i] > -radii[i]) maps[letter(i, true)][v] = v - stride[i];
        }
    }
    auto g = std::make_shared<const MedianGraph>(MedianGraph::trusted(raw));
    return Action::window(g, std::move(maps), *std::min_element(radii.begin(), radii.end()), origin);
}

long long displacement(const Action& a, int x) {
    long long sum = 0;
    for (Letter l = 0; l < a.letter_count(); ++l) {
        int y = a.step(l, x);
        if (y < 0) fail(ErrorKind::OutOfWindow, "displacement undefined at " + a.graph().name(x));
        sum += a.graph().distance(x, y);
    }
    return sum;
}

Displacement minimize_displacement(const Action& a) {
    if (a.is_window()) fail(ErrorKind::PreconditionViolated, "displacement minimization needs a total action");
    Displacement best{0, displacement(a, 0)};
    for (int v = 1; v < a.graph().vertex_count(); ++v) {
        long long d = displacement(a, v);
        if (d < best.sum) best = {v, d};
    }
    return best;
}

std::vector<Letter> fix_set(const Action& a, int x, const std::vector<Letter>& letters) {
    std::vector<Letter> out;
    for (Letter l : letters) {
        int y = a.step(l, x);
        if (y < 0) fail(ErrorKind::OutOfWindow, "letter " + letter_name(l) + " undefined at " + a.graph().name(x));
        if (y == x) out.push_back(l);
    }
    return out;
}

bool VisibleHyperplanes::contains(int h) const { return std::binary_search(all.begin(), all.end(), h); }

VisibleHyperplanes visible_hyperplanes(const Action& a, int x, const std::vector<Letter>& letters) {
    const MedianGraph& g = a.graph();
    VisibleHyperplanes vh;
    vh.x = x;
    vh.per_letter.assign(static_cast<size_t>(a.letter_count()), {});
    for (Letter l : letters) {
        int y = a.step(l, x);
        if (y < 0) fail(ErrorKind::OutOfWindow, "letter " + letter_name(l) + " undefined at " + g.name(x));
        if (y == x) continue;
        int d = g.distance(x, y);
        const int* nb = g.nbr_begin(x);
        for (int i = 0; i < g.degree(x); ++i)
            if (g.distance(nb[i], y) < d) vh.per_letter[l].push_back(g.class_of_edge(g.nbr_edge(x)[i]));
        std::sort(vh.per_letter[l].begin(), vh.per_letter[l].end());
        vh.all.insert(vh.all.end(), vh.per_letter[l].begin(), vh.per_letter[l].end());
    }
    std::sort(vh.all.begin(), vh.all.end());
    vh.all.erase(std::unique(vh.all.begin(), vh.all.end()), vh.all.end());
    return vh;
}

int try_translate_hyperplane(const Action& a, const Word& w, int h) {
    const MedianGraph& g = a.graph();
    if (w.empty()) return h;
    for (int e : g.class_edges(h)) {
        auto [u, v] = g.edge(e);
        int pu = a.try_apply(w, u);
        if (pu < 0) continue;
        int pv = a.try_apply(w, v);
        if (pv < 0) continue;
        int f = g.edge_id(pu, pv);
        if (f < 0) fail(ErrorKind::PreconditionViolated, "action does not preserve adjacency");
        return g.class_of_edge(f);
    }
    return -1;
}

int translate_hyperplane(const Action& a, const Word& w, int h) {
    int r = try_translate_hyperplane(a, w, h);
    if (r < 0) fail(ErrorKind::OutOfWindow, "translate of hyperplane by " + format_word(w) + " leaves the window");
    return r;
}

std::optional<Inversion> detect_inversions(const Action& a) {
    const MedianGraph& g = a.graph();
    for (Letter l = 0; l < a.letter_count(); ++l) {
        for (int h = 0; h < g.class_count(); ++h) {
            for (int e : g.class_edges(h)) {
                auto [u, v] = g.edge(e);
                int pu = a.step(l, u), pv = a.step(l, v);
                if (pu < 0 || pv < 0) continue;
                int f = g.edge_id(pu, pv);
                if (f < 0 || g.class_of_edge(f) != h) break;
                int m = g.minus_end(e);
                if (a.step(l, m) != g.minus_end(f)) return Inversion{l, h};
                break;
            }
        }
    }
    return std::nullopt;
}

SubdividedAction subdivide_action(const Action& a) {
    if (a.is_window()) fail(ErrorKind::PreconditionViolated, "subdivision needs a total action");
    Subdivision sd = subdivide(a.graph());
    std::map<std::vector<int>, int> index;
    for (size_t i = 0; i < sd.cubes.size(); ++i) index[sd.cubes[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> gens;
    for (int gi = 0; gi < a.generator_count(); ++gi) {
        std::vector<int> m(sd.cubes.size());
        for (size_t i = 0; i < sd.cubes.size(); ++i) {
            std::vector<int> img;
            for (int v : sd.cubes[i]) img.push_back(a.step(letter(gi, false), v));
            std::sort(img.begin(), img.end());
            m[i] = index.at(img);
        }
        gens.push_back(std::move(m));
    }
    auto g = std::make_shared<const MedianGraph>(sd.graph);
    Action sub = Action::total(g, gens);
    return {std::move(sd), std::move(sub)};
}

}  // namespace cubefix
