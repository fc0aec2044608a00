#include "cubefix/automaton.hpp"
#include "cubefix/error.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace cubefix {

Alphabet Alphabet::plain(int k) {
    Alphabet a;
    a.k = k;
    for (Letter l = 0; l < 2 * k; ++l) a.symbols.push_back({l});
    return a;
}

Alphabet Alphabet::blocks(int k, int m, bool reduced_only) {
    if (k < 1 || m < 1) fail(ErrorKind::OutOfRange, "block alphabet needs k >= 1 and m >= 1");
    Alphabet a;
    a.k = k;
    Word w(static_cast<size_t>(m), 0);
    const int L = 2 * k;
    while (true) {
        if (!reduced_only || is_reduced(w)) a.symbols.push_back(w);
        int i = m - 1;
        while (i >= 0 && w[i] == L - 1) w[i--] = 0;
        if (i < 0) break;
        ++w[i];
    }
    return a;
}

int Alphabet::index_of(const Word& w) const {
    for (size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i] == w) return static_cast<int>(i);
    return -1;
}

int Automaton::add_vertex(const std::string& name) {
    vertices.push_back(name);
    return static_cast<int>(vertices.size()) - 1;
}

int Automaton::index_of(const std::string& name) const {
    for (size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == name) return static_cast<int>(i);
    fail(ErrorKind::UnknownVertex, "no automaton vertex named " + name);
}

std::vector<std::vector<AutEdge>> Automaton::out_edges() const {
    std::vector<std::vector<AutEdge>> out(vertices.size());
    for (const auto& e : edges) out[static_cast<size_t>(e.from)].push_back(e);
    for (auto& v : out)
        std::stable_sort(v.begin(), v.end(), [](const AutEdge& p, const AutEdge& q) { return p.label < q.label; });
    return out;
}

int Automaton::distinct_out_labels(int v) const {
    std::set<int> labels;
    for (const auto& e : edges)
        if (e.from == v) labels.insert(e.label);
    return static_cast<int>(labels.size());
}

bool Automaton::deterministic() const {
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges)
        if (!seen.insert({e.from, e.label}).second) return false;
    return true;
}

Word Automaton::spell(const std::vector<int>& symbols) const {
    Word w;
    for (int s : symbols) {
        const Word& b = alphabet.symbols[static_cast<size_t>(s)];
        w.insert(w.end(), b.begin(), b.end());
    }
    return w;
}

namespace {

using StateSet = std::vector<int>;

// Successor sets of the subset construction, per symbol.
struct SubsetStepper {
    const Automaton& a;
    std::vector<std::vector<AutEdge>> outs;

    explicit SubsetStepper(const Automaton& aut) : a(aut), outs(aut.out_edges()) {}

    std::map<int, StateSet> step(const StateSet& s) const {
        std::map<int, StateSet> next;
        for (int v : s)
            for (const auto& e : outs[static_cast<size_t>(v)]) next[e.label].push_back(e.to);
        for (auto& [sym, set] : next) {
            std::sort(set.begin(), set.end());
            set.erase(std::unique(set.begin(), set.end()), set.end());
        }
        return next;
    }
};

void enumerate_from(const Automaton& a, int v, int L, bool exact_length,
                    const std::function<void(const SymbolWord&)>& f) {
    SubsetStepper st(a);
    SymbolWord w;
    std::function<void(const StateSet&)> rec = [&](const StateSet& s) {
        if (!exact_length || static_cast<int>(w.size()) == L) f(w);
        if (static_cast<int>(w.size()) == L) return;
        for (auto& [sym, next] : st.step(s)) {
            w.push_back(sym);
            rec(next);
            w.pop_back();
        }
    };
    rec(StateSet{v});
}

BigInt count_from(const Automaton& a, int v, int L, bool up_to) {
    SubsetStepper st(a);
    std::map<StateSet, BigInt> layer{{StateSet{v}, BigInt(1)}};
    BigInt total = up_to ? BigInt(1) : BigInt(0);
    for (int i = 0; i < L; ++i) {
        std::map<StateSet, BigInt> next;
        for (const auto& [s, c] : layer)
            for (auto& [sym, t] : st.step(s)) next[t] += c;
        layer = std::move(next);
        if (up_to)
            for (const auto& [s, c] : layer) total += c;
    }
    if (up_to) return total;
    for (const auto& [s, c] : layer) total += c;
    return total;
}

}  // namespace

bool Automaton::accepts(const std::vector<int>& symbols) const {
    SubsetStepper st(*this);
    StateSet s{start};
    for (int sym : symbols) {
        auto next = st.step(s);
        auto it = next.find(sym);
        if (it == next.end()) return false;
        s = it->second;
    }
    return true;
}

std::vector<SymbolWord> accepted_words(const Automaton& a, int L) {
    std::vector<SymbolWord> out;
    enumerate_from(a, a.start, L, true, [&](const SymbolWord& w) { out.push_back(w); });
    return out;
}

BigInt count_accepted(const Automaton& a, int L) { return count_from(a, a.start, L, false); }

// Words of length <= L labeling paths from v.
std::vector<SymbolWord> prefix_language(const Automaton& a, int v, int L) {
    if (v < 0 || v >= a.vertex_count()) fail(ErrorKind::UnknownVertex, "vertex " + std::to_string(v) + " not in automaton");
    std::vector<SymbolWord> out;
    enumerate_from(a, v, L, false, [&](const SymbolWord& w) { out.push_back(w); });
    return out;
}

BigInt count_prefix_language(const Automaton& a, int v, int L) {
    if (v < 0 || v >= a.vertex_count()) fail(ErrorKind::UnknownVertex, "vertex " + std::to_string(v) + " not in automaton");
    return count_from(a, v, L, true);
}

void for_each_accepted(const Automaton& a, int L, const std::function<void(const SymbolWord&)>& f) {
    enumerate_from(a, a.start, L, false, f);
}

GrowthCertificate check_lambda_large(const Automaton& a, const Rational& lambda) {
    const int n = a.vertex_count();
    GrowthCertificate c;
    c.lambda = lambda;
    c.large.assign(static_cast<size_t>(n), false);
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (const auto& e : a.edges) adj[e.from].push_back(e.to);
    for (int v = 0; v < n; ++v) c.large[v] = at_least_fraction(a.distinct_out_labels(v), lambda, a.alphabet.size());

    std::vector<bool> reach(static_cast<size_t>(n), false);
    std::vector<int> stack{a.start};
    reach[a.start] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adj[v])
            if (!reach[u]) {
                reach[u] = true;
                stack.push_back(u);
            }
    }

    // Tarjan SCCs, iterative
    std::vector<int> index(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0), comp(static_cast<size_t>(n), -1);
    std::vector<bool> on(static_cast<size_t>(n), false);
    std::vector<int> st;
    int counter = 0, ncomp = 0;
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<std::pair<int, size_t>> call{{root, 0}};
        index[root] = low[root] = counter++;
        st.push_back(root);
        on[root] = true;
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i < adj[v].size()) {
                int u = adj[v][i++];
                if (index[u] < 0) {
                    index[u] = low[u] = counter++;
                    st.push_back(u);
                    on[u] = true;
                    call.emplace_back(u, 0);
                } else if (on[u]) {
                    low[v] = std::min(low[v], index[u]);
                }
            } else {
                int vv = v;
                if (low[vv] == index[vv]) {
                    while (true) {
                        int u = st.back();
                        st.pop_back();
                        on[u] = false;
                        comp[u] = ncomp;
                        if (u == vv) break;
                    }
                    ++ncomp;
                }
                call.pop_back();
                if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[vv]);
            }
        }
    }
    std::vector<int> comp_size(static_cast<size_t>(ncomp), 0);
    for (int v = 0; v < n; ++v) ++comp_size[comp[v]];
    std::vector<bool> on_cycle(static_cast<size_t>(n), false);
    for (int v = 0; v < n; ++v) {
        if (comp_size[comp[v]] > 1) on_cycle[v] = true;
        for (int u : adj[v])
            if (u == v) on_cycle[v] = true;
    }
    // vertices reachable from a reachable cycle
    std::vector<bool> after_cycle(static_cast<size_t>(n), false);
    for (int v = 0; v < n; ++v)
        if (reach[v] && on_cycle[v] && !after_cycle[v]) {
            after_cycle[v] = true;
            stack.assign(1, v);
            while (!stack.empty()) {
                int w = stack.back();
                stack.pop_back();
                for (int u : adj[w])
                    if (!after_cycle[u]) {
                        after_cycle[u] = true;
                        stack.push_back(u);
                    }
            }
        }
    for (int v = 0; v < n; ++v)
        if (reach[v] && after_cycle[v] && !c.large[v]) {
            c.holds = false;
            c.witness = v;
            return c;
        }
    // longest path from the start to each vertex in the acyclic part, by memoized DFS
    std::vector<int> longest(static_cast<size_t>(n), -1);
    std::function<int(int)> depth_from_start;
    std::vector<std::vector<int>> pred(static_cast<size_t>(n));
    for (const auto& e : a.edges)
        if (reach[e.from]) pred[e.to].push_back(e.from);
    depth_from_start = [&](int v) -> int {
        if (longest[v] >= 0) return longest[v];
        int best = v == a.start ? 0 : -1;
        for (int p : pred[v]) best = std::max(best, depth_from_start(p) + 1);
        return longest[v] = std::max(best, 0);
    };
    int K = 1;
    for (int v = 0; v < n; ++v)
        if (reach[v] && !c.large[v]) K = std::max(K, depth_from_start(v) + 1);
    c.holds = true;
    c.K = K;
    return c;
}

namespace {

int apply_checked(const Action& act, const Word& w, int x) {
    int y = act.try_apply(w, x);
    if (y < 0) fail(ErrorKind::OutOfWindow, "word " + format_word(w) + " leaves the window");
    return y;
}

bool has_checkpoint_free_cycle(const Automaton& a) {
    const int n = a.vertex_count();
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (const auto& e : a.edges)
        if (!a.checkpoints.count(e.from) && !a.checkpoints.count(e.to)) adj[e.from].push_back(e.to);
    std::vector<int> color(static_cast<size_t>(n), 0);
    std::function<bool(int)> dfs = [&](int v) {
        color[v] = 1;
        for (int u : adj[v]) {
            if (color[u] == 1) return true;
            if (color[u] == 0 && dfs(u)) return true;
        }
        color[v] = 2;
        return false;
    };
    for (int v = 0; v < n; ++v)
        if (!a.checkpoints.count(v) && color[v] == 0 && dfs(v)) return true;
    return false;
}

}  // namespace

ProgressReport verify_progressing(const Automaton& a, const Action& act, int x, int max_len) {
    if (a.checkpoints.count(a.start)) fail(ErrorKind::PreconditionViolated, "the start vertex cannot be a checkpoint");
    if (a.alphabet.k != act.generator_count())
        fail(ErrorKind::PreconditionViolated, "automaton and action have different generating sets");
    const MedianGraph& g = act.graph();
    for (const auto& [c, h] : a.checkpoints)
        if (h < 0 || h >= g.class_count()) fail(ErrorKind::OutOfRange, "checkpoint label is not a hyperplane");

    ProgressReport r;
    r.max_len = max_len < 0 ? a.vertex_count() + 1 : max_len;
    r.checkpoint_free_cycle = has_checkpoint_free_cycle(a);
    const auto outs = a.out_edges();

    std::vector<int> path;
    SymbolWord word;
    Word spelled;
    auto violate = [&](int clause, const std::string& why) {
        r.ok = false;
        r.violation = Violation{clause, path, word, why};
    };

    // clause: 1 for paths from the start, 2 for paths from checkpoint c1 with label H1
    std::function<bool(int, int)> walk = [&](int clause, int H1) -> bool {
        int v = path.back();
        for (const auto& e : outs[static_cast<size_t>(v)]) {
            const Word& b = a.alphabet.symbols[static_cast<size_t>(e.label)];
            path.push_back(e.to);
            word.push_back(e.label);
            spelled.insert(spelled.end(), b.begin(), b.end());
            ++r.paths_checked;
            int wx = apply_checked(act, spelled, x);
            auto cp = a.checkpoints.find(e.to);
            bool good = true;
            if (clause == 1) {
                if (wx == x) {
                    violate(1, "wx = x");
                    good = false;
                } else if (cp != a.checkpoints.end()) {
                    int img = try_translate_hyperplane(act, spelled, cp->second);
                    if (img < 0) fail(ErrorKind::OutOfWindow, "translate leaves the window");
                    if (!g.separates(img, x, wx)) {
                        violate(1, "wH(c) does not separate x and wx");
                        good = false;
                    }
                }
            } else {
                if (g.separates(H1, x, wx)) {
                    violate(2, "H(c1) separates x and wx");
                    good = false;
                } else if (cp != a.checkpoints.end()) {
                    int img = try_translate_hyperplane(act, spelled, cp->second);
                    if (img < 0) fail(ErrorKind::OutOfWindow, "translate leaves the window");
                    bool ok = img == H1 || (g.crossing(img, H1) == Relation::Parallel && g.separates(img, x, wx));
                    if (!ok) {
                        violate(2, "wH(c2) is neither H(c1) nor a parallel separator of x and wx");
                        good = false;
                    }
                }
            }
            if (good && cp == a.checkpoints.end() && static_cast<int>(word.size()) < r.max_len) good = walk(clause, H1);
            path.pop_back();
            word.pop_back();
            spelled.resize(spelled.size() - b.size());
            if (!good) return false;
        }
        return true;
    };

    path = {a.start};
    if (!walk(1, -1)) return r;
    for (const auto& [c, h] : a.checkpoints) {
        path = {c};
        if (!walk(2, h)) return r;
    }
    return r;
}

LemmaReport verify_checkpoints_lemma(const Automaton& a, const Action& act, int x, int max_len) {
    const MedianGraph& g = act.graph();
    const auto outs = a.out_edges();
    LemmaReport r;
    SymbolWord word;
    Word spelled;
    // last checkpoint seen: its label and the length of the spelled prefix reaching it
    std::function<bool(int, int, size_t)> walk = [&](int v, int last_h, size_t last_len) -> bool {
        for (const auto& e : outs[static_cast<size_t>(v)]) {
            const Word& b = a.alphabet.symbols[static_cast<size_t>(e.label)];
            word.push_back(e.label);
            spelled.insert(spelled.end(), b.begin(), b.end());
            ++r.words_checked;
            int h = last_h;
            size_t len = last_len;
            if (auto cp = a.checkpoints.find(e.to); cp != a.checkpoints.end()) {
                h = cp->second;
                len = spelled.size();
            }
            int wx = apply_checked(act, spelled, x);
            bool good = true;
            if (wx == x) {
                r.reason = "wx = x";
                good = false;
            } else if (h >= 0) {
                Word prefix(spelled.begin(), spelled.begin() + static_cast<long>(len));
                int img = try_translate_hyperplane(act, prefix, h);
                if (img < 0) fail(ErrorKind::OutOfWindow, "translate leaves the window");
                if (!g.separates(img, x, wx)) {
                    r.reason = "last checkpoint translate does not separate x and wx";
                    good = false;
                }
            }
            if (!good) {
                r.ok = false;
                r.counterexample = word;
            } else if (static_cast<int>(word.size()) < max_len) {
                good = walk(e.to, h, len);
            }
            word.pop_back();
            spelled.resize(spelled.size() - b.size());
            if (!good) return false;
        }
        return true;
    };
    walk(a.start, -1, 0);
    return r;
}

bool verify_progressing_pair(const Action& act, int x, const Word& w, int root_label, int witness, std::string* reason) {
    if (w.empty()) fail(ErrorKind::PreconditionViolated, "progressing pair needs a non-empty word");
    const MedianGraph& g = act.graph();
    auto no = [&](const std::string& why) {
        if (reason) *reason = why;
        return false;
    };
    Word prefix;
    for (Letter s : w) {
        prefix.push_back(s);
        int px = apply_checked(act, prefix, x);
        if (root_label == kStartLabel) {
            if (px == x) return no("prefix " + format_word(prefix) + " fixes x");
        } else if (g.separates(root_label, x, px)) {
            return no("H separates x and " + format_word(prefix) + "x");
        }
    }
    int wx = apply_checked(act, w, x);
    int img = try_translate_hyperplane(act, w, witness);
    if (img < 0) fail(ErrorKind::OutOfWindow, "translate leaves the window");
    if (root_label == kStartLabel) {
        if (!g.separates(img, x, wx)) return no("wH' does not separate x and wx");
        return true;
    }
    if (img == root_label) return true;
    if (g.crossing(img, root_label) == Relation::Parallel && g.separates(img, x, wx)) return true;
    return no("wH' is neither H nor a parallel separator of x and wx");
}

int CheckpointTree::add_child(int v, Letter s) {
    auto it = nodes[static_cast<size_t>(v)].children.find(s);
    if (it != nodes[static_cast<size_t>(v)].children.end()) return it->second;
    Node c;
    c.parent = v;
    c.label = s;
    c.depth = nodes[static_cast<size_t>(v)].depth + 1;
    nodes.push_back(c);
    int id = static_cast<int>(nodes.size()) - 1;
    nodes[static_cast<size_t>(v)].children[s] = id;
    return id;
}

Word CheckpointTree::word_of(int v) const {
    Word w;
    for (; v > 0; v = nodes[static_cast<size_t>(v)].parent) w.push_back(nodes[static_cast<size_t>(v)].label);
    std::reverse(w.begin(), w.end());
    return w;
}

int CheckpointTree::follow(const Word& w, int from) const {
    int v = from;
    for (Letter s : w) {
        auto it = nodes[static_cast<size_t>(v)].children.find(s);
        if (it == nodes[static_cast<size_t>(v)].children.end()) return -1;
        v = it->second;
    }
    return v;
}

std::vector<int> CheckpointTree::preorder() const {
    std::vector<int> out, stack{0};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        out.push_back(v);
        const auto& ch = nodes[static_cast<size_t>(v)].children;
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(it->second);
    }
    return out;
}

std::vector<int> CheckpointTree::leaves() const {
    std::vector<int> out;
    if (nodes.size() == 1) return out;
    for (int v : preorder())
        if (is_leaf(v)) out.push_back(v);
    return out;
}

int CheckpointTree::depth() const {
    int d = 0;
    for (const auto& n : nodes) d = std::max(d, n.depth);
    return d;
}

int CheckpointTree::min_branching() const {
    int m = -1;
    for (const auto& n : nodes)
        if (!n.children.empty()) m = m < 0 ? static_cast<int>(n.children.size()) : std::min(m, static_cast<int>(n.children.size()));
    return std::max(m, 0);
}

CheckpointTree CheckpointTree::restricted(const std::vector<bool>& keep) const {
    CheckpointTree t(root_label);
    std::vector<int> map(nodes.size(), -1);
    map[0] = 0;
    for (int v : preorder()) {
        if (v == 0 || !keep[static_cast<size_t>(v)]) continue;
        int p = map[static_cast<size_t>(nodes[static_cast<size_t>(v)].parent)];
        if (p < 0) continue;
        int id = t.add_child(p, nodes[static_cast<size_t>(v)].label);
        t.nodes[static_cast<size_t>(id)].leaf_label = nodes[static_cast<size_t>(v)].leaf_label;
        map[static_cast<size_t>(v)] = id;
    }
    return t;
}

TreeReport verify_checkpoint_tree(const CheckpointTree& t, const Action& act, int x, const VisibleHyperplanes& vis) {
    TreeReport r;
    if (t.root_label != kStartLabel && !vis.contains(t.root_label)) {
        r.ok = false;
        r.reason = "root label is not visible";
        return r;
    }
    for (int v : t.leaves()) {
        int h = t.nodes[static_cast<size_t>(v)].leaf_label;
        Word w = t.word_of(v);
        if (!vis.contains(h)) {
            r.ok = false;
            r.reason = "leaf " + format_word(w) + " has no visible label";
            return r;
        }
        std::string why;
        if (!verify_progressing_pair(act, x, w, t.root_label, h, &why)) {
            r.ok = false;
            r.reason = "leaf " + format_word(w) + ": " + why;
            return r;
        }
    }
    return r;
}

bool check_star(const CheckpointTree& t) {
    // walk down from every vertex while tracking the rooted lift of the path
    for (int u = 0; u < static_cast<int>(t.nodes.size()); ++u) {
        std::vector<std::pair<int, int>> stack{{u, 0}};
        while (!stack.empty()) {
            auto [v, lift] = stack.back();
            stack.pop_back();
            for (const auto& [s, c] : t.nodes[static_cast<size_t>(v)].children) {
                auto it = t.nodes[static_cast<size_t>(lift)].children.find(s);
                if (it == t.nodes[static_cast<size_t>(lift)].children.end()) return false;
                stack.emplace_back(c, it->second);
            }
        }
    }
    return true;
}

namespace {

std::set<Letter> child_labels(const CheckpointTree& t, int v) {
    std::set<Letter> out;
    for (const auto& [s, c] : t.nodes[static_cast<size_t>(v)].children) out.insert(s);
    return out;
}

// s lies in c(u~) for every suffix u of v~
bool in_all_suffix_children(const CheckpointTree& t, int v, Letter s) {
    Word w = t.word_of(v);
    for (size_t i = 0; i <= w.size(); ++i) {
        int u = t.follow(Word(w.begin() + static_cast<long>(i), w.end()));
        if (u < 0 || !t.nodes[static_cast<size_t>(u)].children.count(s)) return false;
    }
    return true;
}

}  // namespace

bool check_inductive_star(const CheckpointTree& t) {
    for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v) {
        if (t.is_leaf(v)) continue;
        for (const auto& [s, c] : t.nodes[static_cast<size_t>(v)].children)
            if (t.is_leaf(c) && !in_all_suffix_children(t, v, s)) return false;
    }
    return true;
}

bool check_inductive_star_leaves(const CheckpointTree& t) {
    for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v) {
        if (t.is_leaf(v)) continue;
        bool t0_leaf = true;
        for (const auto& [s, c] : t.nodes[static_cast<size_t>(v)].children)
            if (!t.is_leaf(c)) t0_leaf = false;
        if (!t0_leaf) continue;
        for (Letter s : child_labels(t, v))
            if (!in_all_suffix_children(t, v, s)) return false;
    }
    return true;
}

namespace {

std::string root_name(int label) { return label == kStartLabel ? "s" : "H" + std::to_string(label); }

}  // namespace

Automaton realize(const std::vector<CheckpointTree>& trees, int k) {
    std::set<int> roots;
    for (const auto& t : trees)
        if (!roots.insert(t.root_label).second)
            fail(ErrorKind::DuplicateRootLabel, "two trees with root " + root_name(t.root_label));
    if (!roots.count(kStartLabel)) fail(ErrorKind::MissingTree, "no tree at the start label");
    std::set<int> labels;
    for (const auto& t : trees) {
        if (t.root_label != kStartLabel) labels.insert(t.root_label);
        for (int v : t.leaves()) {
            int h = t.nodes[static_cast<size_t>(v)].leaf_label;
            if (h < 0) fail(ErrorKind::PreconditionViolated, "unlabeled leaf in tree at " + root_name(t.root_label));
            if (!roots.count(h)) fail(ErrorKind::MissingTree, "no tree at leaf label " + root_name(h));
            labels.insert(h);
        }
    }
    Automaton a;
    a.alphabet = Alphabet::plain(k);
    a.start = a.add_vertex("s");
    std::map<int, int> vertex_of{{kStartLabel, a.start}};
    for (int h : labels) {
        vertex_of[h] = a.add_vertex(root_name(h));
        a.checkpoints[vertex_of[h]] = h;
    }
    std::vector<const CheckpointTree*> order;
    for (const auto& t : trees) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](auto* p, auto* q) { return p->root_label < q->root_label; });
    for (const CheckpointTree* t : order) {
        std::vector<int> id(t->nodes.size(), -1);
        for (int v : t->preorder()) {
            const auto& node = t->nodes[static_cast<size_t>(v)];
            if (v == 0) {
                id[0] = vertex_of.at(t->root_label);
            } else {
                if (t->is_leaf(v))
                    id[v] = vertex_of.at(node.leaf_label);
                else
                    id[v] = a.add_vertex(root_name(t->root_label) + "/" + format_word(t->word_of(v)));
                a.add_edge(id[node.parent], id[v], node.label);
            }
        }
    }
    return a;
}

Automaton rewire_reduced(const Automaton& a) {
    const int L = 2 * a.alphabet.k;
    for (const auto& e : a.edges)
        if (!is_reduced(a.alphabet.symbols[static_cast<size_t>(e.label)]))
            fail(ErrorKind::LabelNotReduced, "label " + format_word(a.alphabet.symbols[static_cast<size_t>(e.label)]) + " is not reduced");
    bool start_entered = false;
    for (const auto& e : a.edges)
        if (e.to == a.start) start_entered = true;

    Automaton r;
    r.alphabet = a.alphabet;
    r.start = r.add_vertex(a.vertices[a.start]);
    // clone[v][s] for v != start (and for the start when it has incoming edges)
    std::vector<std::vector<int>> clone(static_cast<size_t>(a.vertex_count()), std::vector<int>(static_cast<size_t>(L), -1));
    for (int v = 0; v < a.vertex_count(); ++v) {
        if (v == a.start && !start_entered) continue;
        for (Letter s = 0; s < L; ++s) {
            clone[v][s] = r.add_vertex(a.vertices[v] + "|" + letter_name(s));
            if (auto it = a.checkpoints.find(v); it != a.checkpoints.end() && v != a.start) r.checkpoints[clone[v][s]] = it->second;
        }
    }
    for (const auto& e : a.edges) {
        const Word& b = a.alphabet.symbols[static_cast<size_t>(e.label)];
        if (b.empty()) fail(ErrorKind::LabelNotReduced, "empty label");
        int target = clone[e.to][b.back()];
        if (e.from == a.start) r.add_edge(r.start, target, e.label);
        if (clone[e.from][0] < 0) continue;
        for (Letter s = 0; s < L; ++s)
            if (b.front() != inverse(s)) r.add_edge(clone[e.from][s], target, e.label);
    }
    return r;
}

Automaton fixset_automaton(const Action& act, int x, const std::vector<Letter>& letters) {
    std::vector<Letter> fix = fix_set(act, x, letters);
    Letter moving = -1;
    for (Letter l : letters)
        if (!is_inverse(l) && !std::binary_search(fix.begin(), fix.end(), l)) {
            moving = l;
            break;
        }
    if (moving < 0)
        for (Letter l : letters)
            if (!std::binary_search(fix.begin(), fix.end(), l)) {
                moving = l ^ 1;
                break;
            }
    if (moving < 0) fail(ErrorKind::NoMovingGenerator, "every letter fixes " + act.graph().name(x));
    Automaton a;
    a.alphabet = Alphabet::plain(act.generator_count());
    a.start = a.add_vertex("s");
    int v = a.add_vertex("v");
    a.add_edge(a.start, v, moving);
    a.add_edge(a.start, v, inverse(moving));
    for (Letter l : fix) a.add_edge(v, v, l);
    return a;
}

Automaton fixset_automaton(const Action& act, int x) {
    std::vector<Letter> letters = act.letters();
    std::sort(letters.begin(), letters.end());
    return fixset_automaton(act, x, letters);
}

ShapeReport shape_check(const Automaton& a, int n, const Rational& c1, const Rational& c2) {
    ShapeReport r;
    const long long S = a.alphabet.size();
    r.bound = pow(BigInt(S * n + 1), static_cast<unsigned>(n));
    r.vertex_bound = BigInt(a.vertex_count()) <= r.bound;
    const auto outs = a.out_edges();

    auto form1 = [&]() -> std::string {
        if (a.vertex_count() != 2) return "not two vertices";
        int v = 1 - a.start;
        const auto& so = outs[a.start];
        if (so.size() != 2 || so[0].to != v || so[1].to != v) return "start does not have exactly two edges to v";
        const Word& p = a.alphabet.symbols[so[0].label];
        const Word& q = a.alphabet.symbols[so[1].label];
        if (p.size() != 1 || q.size() != 1 || p[0] != inverse(q[0])) return "start edges are not s and its inverse";
        std::set<int> loops;
        for (const auto& e : outs[v]) {
            if (e.to != v) return "v has a non-loop edge";
            const Word& l = a.alphabet.symbols[e.label];
            if (l.size() == 1 && generator_of(l[0]) == generator_of(p[0])) return "loop labeled by s";
            loops.insert(e.label);
        }
        if (!at_least_fraction(static_cast<long long>(loops.size()), c1, S)) return "too few loops at v";
        return "";
    };
    auto form2 = [&]() -> std::string {
        std::set<int> start_labels;
        for (const auto& e : outs[a.start]) {
            if (e.to == a.start) return "loop at the start";
            start_labels.insert(e.label);
        }
        if (!at_least_fraction(static_cast<long long>(start_labels.size()), 1 - c1, S)) return "start has too few out-edges";
        for (int v = 0; v < a.vertex_count(); ++v) {
            if (v == a.start) continue;
            std::set<int> labels;
            for (const auto& e : outs[v])
                if (e.to != a.start) labels.insert(e.label);
            if (!at_least_fraction(static_cast<long long>(labels.size()), c2, S))
                return "vertex " + a.vertices[v] + " has too few out-edges";
        }
        return "";
    };
    std::string why1 = form1();
    if (why1.empty()) {
        r.form = 1;
        return r;
    }
    std::string why2 = form2();
    if (why2.empty()) {
        r.form = 2;
        return r;
    }
    r.reason = "form 1: " + why1 + "; form 2: " + why2;
    return r;
}

Automaton no_backtrack_automaton(int k) {
    Automaton a;
    a.alphabet = Alphabet::plain(k);
    a.start = a.add_vertex("s");
    for (Letter l = 0; l < 2 * k; ++l) a.add_vertex(letter_name(l));
    for (Letter l = 0; l < 2 * k; ++l) {
        a.add_edge(a.start, 1 + l, l);
        for (Letter t = 0; t < 2 * k; ++t)
            if (t != inverse(l)) a.add_edge(1 + l, 1 + t, t);
    }
    return a;
}

}  // namespace cubefix
