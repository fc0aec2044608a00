#include "cubefix/builder.hpp"
#include "cubefix/error.hpp"
#include "../support/fixtures.hpp"

#include <doctest.h>

using namespace cubefix;
using namespace fixtures;

namespace {

// straight from the two recursion formulas, kept independent of d_table
Rational D_oracle(const Rational& e, int i, int j) {
    if (i == 1 && j == 0) return 1 - 3 * e;
    Rational sum = 0;
    for (int k = 0; k < j; ++k) sum += 1 - D_oracle(e, i, k);
    if (j < i - 1) return (1 - e) * D_oracle(e, i - 1, j) - sum;
    return 1 - 3 * e - sum;
}

int wall(const MedianGraph& g, const std::string& u, const std::string& v) {
    return g.class_of_edge(g.edge_id(g.index_of(u), g.index_of(v)));
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Format;
}

}  // namespace

TEST_CASE("D table values") {
    DTable t = d_table(Rational(1, 100), 3);
    CHECK(t.at(1, 0) == Rational(97, 100));
    CHECK(t.at(2, 0) == Rational(9603, 10000));
    CHECK(t.at(2, 1) == Rational(9303, 10000));
    for (Rational e : {Rational(1, 10), Rational(1, 100), Rational(1, 1000), Rational(1, 7)}) {
        DTable d = d_table(e, 5);
        for (int i = 1; i <= 5; ++i)
            for (int j = 0; j < i; ++j) CHECK(d.at(i, j) == D_oracle(e, i, j));
    }
    CHECK_THROWS_AS(d_table(Rational(1, 3), 2), Error);
    CHECK_THROWS_AS(d_table(Rational(1, 10), 0), Error);
}

TEST_CASE("D table monotonicity reports") {
    DTable d = d_table(Rational(1, 100), 6);
    auto v = monotonicity_violations(d);
    // oracle: scan every pair with a smaller index sum
    size_t expected = 0;
    for (int i = 1; i <= 6; ++i)
        for (int j = 0; j < i; ++j)
            for (int i2 = 1; i2 <= 6; ++i2)
                for (int j2 = 0; j2 < i2; ++j2)
                    if (i2 + j2 < i + j && d.at(i, j) > d.at(i2, j2)) ++expected;
    CHECK(v.size() == expected);
    CHECK(d.at(2, 0) < d.at(1, 0));
    CHECK(d.at(3, 1) < d.at(3, 0));
    CHECK(rows_and_columns_monotone(d));
}

TEST_CASE("alpha and eps_n") {
    for (Rational e0 : {Rational(1, 16), Rational(1, 100)})
        for (Rational e1 : {Rational(1, 4), Rational(3, 4)}) CHECK(alpha(e0, e1, 1) == e0 * (1 - e1) * (1 - 3 * e0));
    CHECK(alpha(Rational(1, 100), Rational(3, 4), 3) == Rational(1, 100) * Rational(1, 4) * D_oracle(Rational(1, 100), 3, 2));
    Rational prev = 1;
    for (int n = 1; n <= 5; ++n) {
        Rational e = eps_n(n);
        CHECK(e <= Rational(1, 5));
        CHECK(e <= prev);
        CHECK(D_oracle(e, n, n - 1) > 0);
        // a power of one half
        Rational p = 1;
        while (p > e) p /= 2;
        CHECK(p == e);
        prev = e;
    }
    CHECK_THROWS_AS(alpha(Rational(1, 2), Rational(3, 4), 1), Error);
}

TEST_CASE("build constants") {
    BuildConstants c = build_constants(1, Rational(1, 4));
    CHECK(c.gamma[1] == Rational(3, 4));
    CHECK(c.lambda == 1 - 2 * c.epsilon0);
    CHECK(c.epsilon0 <= Rational(1, 5));
    BuildConstants c3 = build_constants(3, Rational(3, 4));
    CHECK(c3.gamma.size() == 4);
    for (int i = 2; i <= 3; ++i) {
        Rational expect = std::min({Rational(c3.epsilon0), Rational(alpha(c3.epsilon0, c3.beta(i), i)),
                                      Rational((2 * c3.lambda - 1) * c3.gamma[i - 1])});
        CHECK(c3.gamma[i] == expect);
        CHECK(c3.gamma[i] > 0);
    }
    CHECK(c3.theta() == c3.gamma[3]);
    CHECK(c3.beta(3) == c3.epsilon1);
    CHECK_THROWS_AS(build_constants(1, Rational(1)), Error);
}

TEST_CASE("closest separator") {
    MedianGraph p = MedianGraph::validate(path_graph(5));
    CHECK(closest_separator(p, p.index_of("3"), wall(p, "0", "1")) == wall(p, "2", "3"));
    CHECK(closest_separator(p, p.index_of("4"), wall(p, "0", "1")) == wall(p, "3", "4"));
    CHECK_THROWS_AS(closest_separator(p, p.index_of("1"), wall(p, "0", "1")), Error);
}

TEST_CASE("start tree and easy extension on the free group") {
    Action act = tree_ball_action(2, 6);
    const MedianGraph& g = act.graph();
    const int e = g.index_of("e");
    VisibleHyperplanes vis = visible_hyperplanes(act, e);
    CheckpointTree s = start_tree(act.letters(), vis);
    CHECK(s.leaves().size() == 4);
    CHECK(verify_checkpoint_tree(s, act, e, vis).ok);

    const int H = wall(g, "e", "a");
    TreeTrace tr;
    CheckpointTree t = extend_easy(CheckpointTree(H), act, e, act.letters(), vis, Rational(1, 2), &tr);
    CHECK(t.leaves().size() == 3);
    CHECK(t.follow(parse_word("a")) == -1);
    CHECK(verify_checkpoint_tree(t, act, e, vis).ok);
    CHECK(tr.growth == Rational(3, 4));
    CHECK(check_star(t));
    CHECK(kind_of([&] { extend_easy(CheckpointTree(), act, e, act.letters(), vis, Rational(1, 2)); }) ==
          ErrorKind::PreconditionViolated);
}

TEST_CASE("easy extension on the grid and when no case applies") {
    Action z = grid_box_action({4, 4});
    const MedianGraph& g = z.graph();
    const int o = z.basepoint();
    VisibleHyperplanes vis = visible_hyperplanes(z, o);
    const int H = wall(g, "0,0", "1,0");
    CheckpointTree t = extend_easy(CheckpointTree(H), z, o, z.letters(), vis, Rational(1, 2));
    CHECK(t.follow(parse_word("b")) >= 0);
    CHECK(t.follow(parse_word("b'")) >= 0);
    CHECK(verify_checkpoint_tree(t, z, o, vis).ok);
    CHECK(kind_of([&] { extend_easy(CheckpointTree(H), z, o, z.letters(), vis, Rational(3, 4)); }) == ErrorKind::NoCaseApplies);
}

TEST_CASE("key lemma tree on a one-dimensional action") {
    Action act = tree_ball_action(2, 8);
    const MedianGraph& g = act.graph();
    const int e = g.index_of("e");
    VisibleHyperplanes vis = visible_hyperplanes(act, e);
    BuildConstants c = build_constants(1, Rational(3, 4));
    for (int H : vis.all) {
        TreeTrace tr;
        CheckpointTree t = build_tree_keylemma(H, act, e, act.letters(), vis, c.epsilon0, c.epsilon1, 1, &tr);
        CHECK(verify_checkpoint_tree(t, act, e, vis).ok);
        CHECK(check_star(t));
        CHECK(Rational(t.min_branching(), 4) >= alpha(c.epsilon0, c.epsilon1, 1));
    }
}

TEST_CASE("subset descent on the grid") {
    Action z = grid_box_action({4, 4});
    const MedianGraph& g = z.graph();
    const int o = z.basepoint();
    VisibleHyperplanes vis = visible_hyperplanes(z, o);
    DescentCertificate cert;
    auto sub = subset_descent(wall(g, "0,0", "1,0"), z, o, z.letters(), vis, Rational(1, 2), &cert);
    CHECK(sub == parse_word("bb'"));
    CHECK(cert.size_ok);
    CHECK(cert.all_cross_H);
    CHECK(cert.crossing_before == 2);
    CHECK(cert.crossing_after == 1);
    CHECK(kind_of([&] { subset_descent(wall(g, "0,0", "1,0"), z, o, z.letters(), vis, Rational(3, 4)); }) ==
          ErrorKind::PreconditionViolated);
}

TEST_CASE("end-to-end build on the free group") {
    Action act = tree_ball_action(2, 10);
    const int e = act.graph().index_of("e");
    BuildResult b = build_automaton(act, e, 1, Rational(1, 4));
    CHECK(b.trace.constants.gamma[1] == Rational(3, 4));
    GrowthCertificate gc = check_lambda_large(b.automaton, Rational(3, 4));
    CHECK(gc.holds);
    CHECK(verify_progressing(b.automaton, act, e, 5).ok);
    CHECK(shape_check(b.automaton, 1, Rational(1, 3), b.trace.constants.theta()).ok());
    // the language is exactly the reduced words
    for (int L = 1; L <= 6; ++L)
        for (const auto& w : accepted_words(b.automaton, L)) CHECK(is_reduced(b.automaton.spell(w)));
}

TEST_CASE("descent during a build of the grid") {
    Action z = grid_box_action({4, 4});
    BuildOptions opts;
    opts.descent_lambda = Rational(1, 2);
    BuildResult b = build_automaton(z, z.basepoint(), 2, Rational(3, 4), opts);
    REQUIRE(b.trace.descents.size() == 1);
    const DescentCertificate& d = b.trace.descents[0];
    CHECK(d.level == 2);
    CHECK(d.subset.size() == 2);
    CHECK(d.backwards_ok);
    CHECK(d.crossing_after < d.crossing_before);
    CHECK(b.trace.final_level == 1);
    CHECK(verify_progressing(b.automaton, z, z.basepoint(), 5).ok);
}

TEST_CASE("build preconditions") {
    auto g = std::make_shared<const MedianGraph>(MedianGraph::validate(path_graph(3)));
    Action refl = Action::total(g, {{2, 1, 0}, {0, 1, 2}});
    CHECK(kind_of([&] { build_automaton(refl, 0, 1, Rational(3, 4)); }) == ErrorKind::PreconditionViolated);
}

TEST_CASE("backwards bound") {
    Action t = tree_ball_action(2, 5);
    BackwardsReport r = backwards_bound(t, t.graph().index_of("e"));
    CHECK(r.ok);
    CHECK(r.worst_B == 1);
    CHECK(r.letters == 4);
    Action z = grid_box_action({3, 3});
    CHECK(backwards_bound(z, z.basepoint()).ok);

    auto edge = std::make_shared<const MedianGraph>(MedianGraph::validate(path_graph(2)));
    Action swap = Action::total(edge, {{1, 0}});
    CHECK(kind_of([&] { verify_backwards_bound(swap, 0); }) == ErrorKind::PreconditionViolated);
    auto p3 = std::make_shared<const MedianGraph>(MedianGraph::validate(path_graph(3)));
    Action refl = Action::total(p3, {{2, 1, 0}});
    CHECK(kind_of([&] { verify_backwards_bound(refl, 0); }) == ErrorKind::PreconditionViolated);
    CHECK(verify_backwards_bound(refl, 1).ok);
}
