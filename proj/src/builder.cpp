#include "cubefix/builder.hpp"
#include "cubefix/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cubefix {

DTable d_table(const Rational& epsilon0, int n) {
    if (epsilon0 <= 0 || epsilon0 >= Rational(1, 3)) fail(ErrorKind::OutOfRange, "epsilon0 must lie in (0, 1/3)");
    if (n < 1) fail(ErrorKind::OutOfRange, "n must be >= 1");
    DTable t;
    t.epsilon0 = epsilon0;
    t.n = n;
    t.D.resize(static_cast<size_t>(n) + 1);
    const Rational base = 1 - 3 * epsilon0;
    for (int i = 1; i <= n; ++i) {
        t.D[i].resize(static_cast<size_t>(i));
        Rational deficit = 0;  // sum over k < j of (1 - D_i(k))
        for (int j = 0; j < i; ++j) {
            Rational v = j == i - 1 ? base : (1 - epsilon0) * t.D[i - 1][j];
            t.D[i][j] = v - deficit;
            deficit += 1 - t.D[i][j];
        }
    }
    return t;
}

std::vector<MonotonicityViolation> monotonicity_violations(const DTable& t) {
    std::vector<MonotonicityViolation> out;
    for (int i = 1; i <= t.n; ++i)
        for (int j = 0; j < i; ++j)
            for (int i2 = 1; i2 <= t.n; ++i2)
                for (int j2 = 0; j2 < i2; ++j2)
                    if (i2 + j2 < i + j && t.at(i, j) > t.at(i2, j2)) out.push_back({i, j, i2, j2});
    return out;
}

bool rows_and_columns_monotone(const DTable& t) {
    for (int i = 1; i <= t.n; ++i)
        for (int j = 0; j < i; ++j) {
            if (j > 0 && t.at(i, j) > t.at(i, j - 1)) return false;
            if (j < i - 1 && t.at(i, j) > t.at(i - 1, j)) return false;
        }
    return true;
}

namespace {

bool last_entry_positive(const Rational& eps, int n) { return d_table(eps, n).at(n, n - 1) > 0; }

}  // namespace

Rational eps_n(int n) {
    if (n < 1) fail(ErrorKind::OutOfRange, "n must be >= 1");
    Rational best = 0;
    for (int m = 1; m <= n; ++m) {
        Rational found = 0;
        for (int p = 3; p <= 20; ++p) {
            Rational e(1, BigInt(1) << p);
            if (last_entry_positive(e, m)) {
                found = e;
                break;
            }
        }
        if (found == 0) fail(ErrorKind::OutOfRange, "no grid value with D_n(n-1) > 0 for n = " + std::to_string(m));
        best = m == 1 ? found : std::min(best, found);
    }
    return best;
}

Rational alpha(const Rational& epsilon0, const Rational& epsilon1, int n) {
    if (epsilon0 <= 0 || epsilon0 > eps_n(n)) fail(ErrorKind::OutOfRange, "epsilon0 must lie in (0, eps_n(n)]");
    if (epsilon1 < epsilon0 || epsilon1 >= 1) fail(ErrorKind::OutOfRange, "epsilon1 must lie in [epsilon0, 1)");
    return epsilon0 * (1 - epsilon1) * d_table(epsilon0, n).at(n, n - 1);
}

Rational BuildConstants::beta(int i) const { return epsilon1 / pow(2 * lambda - 1, static_cast<unsigned>(n - i)); }

BuildConstants build_constants(int n, const Rational& epsilon1) {
    if (n < 1) fail(ErrorKind::OutOfRange, "n must be >= 1");
    if (epsilon1 <= 0 || epsilon1 >= 1) fail(ErrorKind::OutOfRange, "epsilon1 must lie in (0, 1)");
    BuildConstants c;
    c.n = n;
    c.epsilon1 = epsilon1;
    // largest p / 2^20 with (1 - 4 e)^n >= epsilon1, i.e. epsilon1 / (2 lambda - 1)^n <= 1
    const BigInt denom = BigInt(1) << 20;
    BigInt lo = 0, hi = denom / 4;
    auto ok = [&](const BigInt& p) { return pow(1 - 4 * Rational(p, denom), static_cast<unsigned>(n)) >= epsilon1; };
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        if (ok(mid))
            lo = mid;
        else
            hi = mid - 1;
    }
    if (lo == 0) fail(ErrorKind::OutOfRange, "epsilon1 too close to 1 for the 2^-20 grid");
    c.epsilon0 = std::min({Rational(1, 5), eps_n(n), Rational(lo, denom)});
    c.lambda = 1 - 2 * c.epsilon0;
    c.gamma.assign(static_cast<size_t>(n) + 1, Rational(0));
    c.gamma[1] = 1 - c.beta(1);
    for (int i = 2; i <= n; ++i) {
        Rational a = c.epsilon0 * (1 - c.beta(i)) * d_table(c.epsilon0, i).at(i, i - 1);
        c.gamma[i] = std::min({c.epsilon0, a, Rational((2 * c.lambda - 1) * c.gamma[i - 1])});
    }
    return c;
}

int closest_separator(const MedianGraph& g, int z, int H) {
    int d = g.distance_to_carrier(H, z);
    if (d <= 0) fail(ErrorKind::PreconditionViolated, "vertex lies in the carrier");
    int best = -1;
    for (int i = 0; i < g.degree(z); ++i) {
        int y = g.nbr_begin(z)[i];
        int h = g.class_of_edge(g.nbr_edge(z)[i]);
        if ((best < 0 || h < best) && g.distance_to_carrier(H, y) < d) best = h;
    }
    return best;
}

namespace {

int count_of(const std::vector<Letter>& v) { return static_cast<int>(v.size()); }

bool contains(const std::vector<Letter>& v, Letter l) { return std::find(v.begin(), v.end(), l) != v.end(); }

int pull_back(const Action& act, const Word& w, int h) {
    int r = try_translate_hyperplane(act, inverse(w), h);
    if (r < 0) fail(ErrorKind::OutOfWindow, "translate by " + format_word(inverse(w)) + " leaves the window");
    return r;
}

int point(const Action& act, const Word& w, int x) {
    int y = act.try_apply(w, x);
    if (y < 0) fail(ErrorKind::OutOfWindow, "word " + format_word(w) + " leaves the window");
    return y;
}

Rational branching(const CheckpointTree& t, int letters) { return Rational(t.min_branching(), letters); }

}  // namespace

CheckpointTree start_tree(const std::vector<Letter>& letters, const VisibleHyperplanes& vis, TreeTrace* trace) {
    CheckpointTree t(kStartLabel);
    for (Letter s : letters) {
        const auto& hs = vis.per_letter[static_cast<size_t>(inverse(s))];
        if (hs.empty()) fail(ErrorKind::PreconditionViolated, "letter " + letter_name(s) + " fixes the basepoint");
        int c = t.add_child(0, s);
        t.nodes[static_cast<size_t>(c)].leaf_label = hs.front();
        if (trace) trace->witnesses.push_back({{s}, hs.front(), "start"});
    }
    if (trace) {
        trace->root = kStartLabel;
        trace->method = "start";
    }
    return t;
}

CheckpointTree extend_easy(const CheckpointTree& t0, const Action& act, int x, const std::vector<Letter>& letters,
                           const VisibleHyperplanes& vis, const Rational& lambda, TreeTrace* trace) {
    const int H = t0.root_label;
    if (H == kStartLabel) fail(ErrorKind::PreconditionViolated, "easy extension needs a hyperplane root");
    const MedianGraph& g = act.graph();
    const int S = static_cast<int>(letters.size());
    CheckpointTree t = t0;
    PartitionResult root = partition(act, x, {}, H, vis, letters);
    const bool use_b = at_least_fraction(count_of(root.B), lambda, S);

    std::vector<int> todo;
    for (int v : t0.preorder())
        if (t0.is_leaf(v) && t0.nodes[static_cast<size_t>(v)].leaf_label < 0) todo.push_back(v);
    for (int v : todo) {
        Word w = t.word_of(v);
        PartitionResult p = partition(act, x, w, H, vis, letters);
        bool applies = at_least_fraction(count_of(p.A), lambda, S) || at_least_fraction(count_of(p.P_vis), lambda, S) ||
                       (use_b && at_least_fraction(count_of(p.P_disj), lambda, S));
        if (!applies) fail(ErrorKind::NoCaseApplies, "leaf " + format_word(w) + " of the tree at H" + std::to_string(H));
        for (Letter s : p.A) {
            Word ws = w;
            ws.push_back(s);
            int h2 = closest_separator(g, point(act, ws, x), H);
            int c = t.add_child(v, s);
            t.nodes[static_cast<size_t>(c)].leaf_label = pull_back(act, ws, h2);
            if (trace) trace->witnesses.push_back({ws, t.nodes[static_cast<size_t>(c)].leaf_label, "A"});
        }
        for (Letter s : p.P_vis) {
            Word ws = w;
            ws.push_back(s);
            int c = t.add_child(v, s);
            t.nodes[static_cast<size_t>(c)].leaf_label = pull_back(act, ws, H);
            if (trace) trace->witnesses.push_back({ws, t.nodes[static_cast<size_t>(c)].leaf_label, "P_vis"});
        }
        if (!use_b) continue;
        for (Letter s : p.P_disj) {
            Word ws = w;
            ws.push_back(s);
            int c = t.add_child(v, s);
            for (Letter u : root.B) {
                Word wst = ws;
                wst.push_back(u);
                int h2 = closest_separator(g, point(act, wst, x), H);
                int gc = t.add_child(c, u);
                t.nodes[static_cast<size_t>(gc)].leaf_label = pull_back(act, wst, h2);
                if (trace) trace->witnesses.push_back({wst, t.nodes[static_cast<size_t>(gc)].leaf_label, "P_disj.B"});
            }
        }
    }
    if (trace) {
        trace->root = H;
        if (trace->method.empty()) trace->method = "easy";
        trace->growth = branching(t, S);
        trace->declared = lambda;
    }
    return t;
}

namespace {

// Largest rooted subtree with property (star): keep a vertex iff every suffix of its word is
// the word of a kept vertex.
std::vector<bool> maximal_star_subtree(const CheckpointTree& t, std::vector<bool> keep) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v : t.preorder()) {
            if (v == 0 || !keep[static_cast<size_t>(v)]) continue;
            if (!keep[static_cast<size_t>(t.nodes[static_cast<size_t>(v)].parent)]) {
                keep[static_cast<size_t>(v)] = false;
                changed = true;
                continue;
            }
            Word w = t.word_of(v);
            for (size_t i = 1; i < w.size(); ++i) {
                int u = t.follow(Word(w.begin() + static_cast<long>(i), w.end()));
                if (u < 0 || !keep[static_cast<size_t>(u)]) {
                    keep[static_cast<size_t>(v)] = false;
                    changed = true;
                    break;
                }
            }
        }
    }
    return keep;
}

bool pairwise_crossing_prefixes(const CheckpointTree& t, const Action& act, int H) {
    const MedianGraph& g = act.graph();
    for (int v : t.preorder()) {
        std::vector<int> hs;
        for (const Word& u : prefixes(t.word_of(v))) {
            int h = try_translate_hyperplane(act, u, H);
            if (h < 0) return false;
            hs.push_back(h);
        }
        for (size_t i = 0; i < hs.size(); ++i)
            for (size_t j = i + 1; j < hs.size(); ++j)
                if (g.crossing(hs[i], hs[j]) != Relation::Cross) return false;
    }
    return true;
}

}  // namespace

CheckpointTree build_tree_keylemma(int H, const Action& act, int x, const std::vector<Letter>& letters,
                                   const VisibleHyperplanes& vis, const Rational& epsilon0, const Rational& epsilon1, int n,
                                   TreeTrace* trace) {
    const int S = static_cast<int>(letters.size());
    if (epsilon0 <= 0 || epsilon0 > eps_n(n)) fail(ErrorKind::PreconditionViolated, "epsilon0 exceeds eps_n(n)");
    PartitionResult root = partition(act, x, {}, H, vis, letters);
    if (!at_least_fraction(count_of(root.B), epsilon0, S) || Rational(count_of(root.B)) > epsilon1 * S)
        fail(ErrorKind::PreconditionViolated, "|B(H)| outside [epsilon0, epsilon1] |S|");
    if (max_crossing_clique(act.graph(), vis.all) > n)
        fail(ErrorKind::PreconditionViolated, "more than n visible hyperplanes pairwise cross");

    TreeTrace local;
    TreeTrace& tr = trace ? *trace : local;
    tr.root = H;
    std::vector<Letter> F;
    for (Letter s : letters)
        if (!contains(root.B, s)) F.push_back(s);
    const Rational easy_lambda = epsilon0 * (1 - epsilon1);
    const Rational eF = epsilon0 * static_cast<int>(F.size());
    tr.declared = alpha(epsilon0, epsilon1, n);

    if (Rational(count_of(root.A)) >= eF || Rational(count_of(root.P_vis)) >= eF || Rational(count_of(root.P_disj)) >= eF) {
        tr.method = "keylemma-easy";
        CheckpointTree t = extend_easy(CheckpointTree(H), act, x, letters, vis, easy_lambda, &tr);
        tr.declared = easy_lambda;
        return t;
    }
    tr.method = "keylemma";
    CheckpointTree T(H);
    for (Letter s : root.P_cross) T.add_child(0, s);

    for (int stage = 1;; ++stage) {
        if (stage > n + 1) {
            tr.flags.push_back("stage " + std::to_string(stage) + " exceeds the depth bound");
            fail(ErrorKind::Stalled, "key lemma iteration did not terminate within n stages");
        }
        StageTrace st;
        st.index = stage;
        st.depth = T.depth();
        st.star = check_star(T);
        if (!st.star) tr.star_ok = false;
        if (!pairwise_crossing_prefixes(T, act, H)) tr.crossing_ok = false;

        std::vector<int> cls(T.nodes.size(), 0);  // 1 = I, 2 = II
        std::vector<int> order = T.preorder();
        for (int v : order) {
            if (!T.is_leaf(v)) continue;
            ++st.leaves;
            if (T.nodes[static_cast<size_t>(v)].depth != stage)
                tr.flags.push_back("stage " + std::to_string(stage) + ": leaf " + format_word(T.word_of(v)) + " at depth " +
                                   std::to_string(T.nodes[static_cast<size_t>(v)].depth));
            PartitionResult p = partition(act, x, T.word_of(v), H, vis, letters);
            bool one = Rational(count_of(p.A)) > eF || Rational(count_of(p.P_vis)) > eF || Rational(count_of(p.P_disj)) > eF;
            cls[static_cast<size_t>(v)] = one ? 1 : 2;
            ++(one ? st.class_one : st.class_two);
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int u = *it;
            if (T.is_leaf(u)) continue;
            int ones = 0, all = 0;
            for (const auto& [s, c] : T.nodes[static_cast<size_t>(u)].children) {
                ++all;
                if (cls[static_cast<size_t>(c)] == 1) ++ones;
            }
            cls[static_cast<size_t>(u)] = Rational(ones) >= epsilon0 * all ? 1 : 2;
        }
        st.root_class_one = cls[0] == 1;
        const int want = cls[0];
        std::vector<bool> keep(T.nodes.size(), false);
        for (int v : order) {
            int p = T.nodes[static_cast<size_t>(v)].parent;
            keep[static_cast<size_t>(v)] = cls[static_cast<size_t>(v)] == want && (v == 0 || keep[static_cast<size_t>(p)]);
        }

        if (want == 1) {
            for (bool k : keep) st.deleted += k ? 0 : 1;
            tr.stages.push_back(st);
            CheckpointTree pruned = T.restricted(keep);
            CheckpointTree out = extend_easy(pruned, act, x, letters, vis, easy_lambda, &tr);
            tr.method = "keylemma";
            tr.declared = alpha(epsilon0, epsilon1, n);
            tr.growth = branching(out, S);
            return out;
        }

        keep = maximal_star_subtree(T, keep);
        for (bool k : keep) st.deleted += k ? 0 : 1;
        tr.stages.push_back(st);
        CheckpointTree core = T.restricted(keep);
        CheckpointTree next = core;
        bool grew = false;
        for (int v : core.preorder()) {
            if (!core.is_leaf(v) || v == 0) continue;
            Word w = core.word_of(v);
            PartitionResult p = partition(act, x, w, H, vis, letters);
            std::set<Letter> allowed;
            for (Letter s : p.P_cross)
                if (contains(F, s)) allowed.insert(s);
            for (size_t i = 1; i <= w.size(); ++i) {
                int u = core.follow(Word(w.begin() + static_cast<long>(i), w.end()));
                std::set<Letter> kept;
                if (u >= 0)
                    for (Letter s : allowed)
                        if (core.nodes[static_cast<size_t>(u)].children.count(s)) kept.insert(s);
                allowed = std::move(kept);
            }
            if (allowed.empty()) tr.flags.push_back("leaf " + format_word(w) + " received no children");
            for (Letter s : allowed) {
                next.add_child(v, s);
                grew = true;
            }
        }
        if (!grew) fail(ErrorKind::Stalled, "class II stage added no vertices");
        T = std::move(next);
    }
}

std::vector<Letter> subset_descent(int H, const Action& act, int x, const std::vector<Letter>& letters,
                                   const VisibleHyperplanes& vis, const Rational& lambda, DescentCertificate* cert) {
    const MedianGraph& g = act.graph();
    const int S = static_cast<int>(letters.size());
    if (!fix_set(act, x, letters).empty()) fail(ErrorKind::PreconditionViolated, "Fix(x) is not empty");
    PartitionResult p = partition(act, x, {}, H, vis, letters);
    std::vector<Letter> P = p.P();
    if (!at_least_fraction(count_of(P), lambda, S)) fail(ErrorKind::PreconditionViolated, "|P(H)| < lambda |S|");
    std::vector<Letter> subset;
    for (Letter s : P)
        if (contains(P, inverse(s))) subset.push_back(s);
    if (cert) {
        cert->H = H;
        cert->lambda = lambda;
        cert->P = P;
        cert->subset = subset;
        cert->size_ok = Rational(count_of(subset)) >= (2 * lambda - 1) * S;
        VisibleHyperplanes vp = visible_hyperplanes(act, x, P);
        cert->all_cross_H = std::all_of(vp.all.begin(), vp.all.end(), [&](int h) { return g.crossing(h, H) == Relation::Cross; });
        cert->crossing_before = max_crossing_clique(g, vis.all);
        VisibleHyperplanes vs = visible_hyperplanes(act, x, subset);
        cert->crossing_after = max_crossing_clique(g, vs.all);
    }
    return subset;
}

namespace {

struct Builder {
    const Action& act;
    int x;
    const BuildConstants& c;
    const BuildOptions& opts;
    BuildResult& out;

    Automaton level(int i, const std::vector<Letter>& letters) {
        const int S = static_cast<int>(letters.size());
        VisibleHyperplanes vis = visible_hyperplanes(act, x, letters);
        const Rational beta = c.beta(i);
        std::map<int, PartitionResult> parts;
        for (int h : vis.all) parts.emplace(h, partition(act, x, {}, h, vis, letters));

        if (i > 1) {
            for (const auto& [h, p] : parts) {
                bool descend = opts.descent_lambda ? at_least_fraction(count_of(p.P()), *opts.descent_lambda, S)
                                                   : Rational(count_of(p.A)) < c.epsilon0 * S && Rational(count_of(p.B)) < c.epsilon0 * S;
                if (!descend) continue;
                Rational lam = opts.descent_lambda ? *opts.descent_lambda : c.lambda;
                DescentCertificate cert;
                cert.level = i;
                std::vector<Letter> sub = subset_descent(h, act, x, letters, vis, lam, &cert);
                if (sub.empty()) fail(ErrorKind::Stalled, "descent produced an empty generating set");
                VisibleHyperplanes vs = visible_hyperplanes(act, x, sub);
                cert.backwards_ok = true;
                // no bound to check when 2 lambda - 1 <= 0
                if (2 * lam - 1 > 0) {
                    const Rational bound = beta / (2 * lam - 1) * static_cast<int>(sub.size());
                    for (int h2 : vs.all)
                        if (Rational(count_of(partition(act, x, {}, h2, vs, sub).B)) > bound) cert.backwards_ok = false;
                }
                out.trace.descents.push_back(cert);
                return level(i - 1, sub);
            }
        }

        out.trace.final_level = i;
        out.trace.letters = letters;
        std::vector<CheckpointTree> trees;
        TreeTrace st;
        trees.push_back(start_tree(letters, vis, &st));
        st.growth = Rational(S, S);
        st.declared = 1;
        out.trace.trees.push_back(st);
        for (const auto& [h, p] : parts) {
            TreeTrace tr;
            CheckpointTree t(h);
            if (i == 1) {
                t = extend_easy(CheckpointTree(h), act, x, letters, vis, c.gamma[1], &tr);
            } else if (at_least_fraction(count_of(p.A), c.epsilon0, S)) {
                t = extend_easy(CheckpointTree(h), act, x, letters, vis, c.epsilon0, &tr);
            } else if (at_least_fraction(count_of(p.B), c.epsilon0, S)) {
                t = build_tree_keylemma(h, act, x, letters, vis, c.epsilon0, beta, i, &tr);
            } else {
                fail(ErrorKind::Stalled, "no construction applies at H" + std::to_string(h));
            }
            TreeReport rep = verify_checkpoint_tree(t, act, x, vis);
            tr.verified = rep.ok;
            if (!rep.ok) out.trace.flags.push_back("tree at H" + std::to_string(h) + ": " + rep.reason);
            trees.push_back(std::move(t));
            out.trace.trees.push_back(std::move(tr));
        }
        TreeReport rep = verify_checkpoint_tree(trees.front(), act, x, vis);
        out.trace.trees.front().verified = rep.ok;
        if (!rep.ok) out.trace.flags.push_back("start tree: " + rep.reason);
        out.trees = trees;
        return realize(trees, act.generator_count());
    }
};

}  // namespace

BuildResult build_automaton(const Action& act, int x, int n, const Rational& epsilon1, const std::vector<Letter>& letters,
                            const BuildOptions& opts) {
    if (!fix_set(act, x, letters).empty()) fail(ErrorKind::PreconditionViolated, "Fix(x) is not empty");
    BuildResult out;
    out.trace.constants = build_constants(n, epsilon1);
    const int S = static_cast<int>(letters.size());
    VisibleHyperplanes vis = visible_hyperplanes(act, x, letters);
    for (int h : vis.all)
        if (Rational(count_of(partition(act, x, {}, h, vis, letters).B)) > epsilon1 * S)
            fail(ErrorKind::PreconditionViolated, "|B(H" + std::to_string(h) + ")| exceeds epsilon1 |S|");
    if (max_crossing_clique(act.graph(), vis.all) > n)
        fail(ErrorKind::PreconditionViolated, "more than n visible hyperplanes pairwise cross");
    Builder b{act, x, out.trace.constants, opts, out};
    out.automaton = b.level(n, letters);
    return out;
}

BuildResult build_automaton(const Action& act, int x, int n, const Rational& epsilon1, const BuildOptions& opts) {
    return build_automaton(act, x, n, epsilon1, act.letters(), opts);
}

BackwardsReport backwards_bound(const Action& act, int x) {
    BackwardsReport r;
    r.letters = act.letter_count();
    VisibleHyperplanes vis = visible_hyperplanes(act, x);
    const MedianGraph& g = act.graph();
    for (int h : vis.all) {
        int b = 0;
        for (Letter s = 0; s < act.letter_count(); ++s)
            if (g.separates(h, x, act.step(s, x))) ++b;
        if (b > r.worst_B) {
            r.worst_B = b;
            r.worst_H = h;
        }
        if (2 * b > r.letters) r.ok = false;
    }
    return r;
}

BackwardsReport verify_backwards_bound(const Action& act, int x) {
    if (detect_inversions(act)) fail(ErrorKind::PreconditionViolated, "the action has hyperplane inversions");
    if (!act.is_window() && displacement(act, x) != minimize_displacement(act).sum)
        fail(ErrorKind::PreconditionViolated, "basepoint does not minimize displacement");
    return backwards_bound(act, x);
}

}  // namespace cubefix
