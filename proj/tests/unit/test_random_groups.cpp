#include "cubefix/builder.hpp"
#include "cubefix/error.hpp"
#include "cubefix/random_groups.hpp"
#include "../support/fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace cubefix;
using namespace fixtures;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Format;
}

Automaton loop_on(const std::vector<Letter>& labels, int k) {
    Automaton a;
    a.alphabet = Alphabet::plain(k);
    a.add_vertex("s");
    for (Letter l : labels) a.add_edge(0, 0, l);
    return a;
}

double chi_square(const std::vector<int>& observed) {
    double total = 0;
    for (int o : observed) total += o;
    const double e = total / static_cast<double>(observed.size());
    double x = 0;
    for (int o : observed) x += (o - e) * (o - e) / e;
    return x;
}

// naive ceil((2k)^(dL)) for small exponents: the least c with c^den >= (2k)^(num)
long long ceil_power(int k, const Rational& d, int L) {
    Rational e = d * L;
    long long num = boost::multiprecision::numerator(e).convert_to<long long>();
    long long den = boost::multiprecision::denominator(e).convert_to<long long>();
    BigInt target = 1;
    for (long long i = 0; i < num; ++i) target *= 2 * k;
    for (long long c = 1;; ++c) {
        BigInt p = 1;
        for (long long i = 0; i < den; ++i) p *= c;
        if (p >= target) return c;
    }
}

}  // namespace

TEST_CASE("sample counts") {
    CHECK(sample_count(2, Rational(1, 2), 6) == 64);
    CHECK(sample_count(1, Rational(1, 2), 4) == 4);
    CHECK(sample_count(2, Rational(1, 3), 4) == 7);
    for (int k = 1; k <= 3; ++k)
        for (Rational d : {Rational(1, 10), Rational(1, 3), Rational(2, 5), Rational(3, 4)})
            for (int L = 1; L <= 12; ++L) CHECK(sample_count(k, d, L) == ceil_power(k, d, L));
}

TEST_CASE("plain and reduced sampling") {
    RelatorSet r = sample_plain(2, Rational(1, 2), 6, 42);
    CHECK(r.relators.size() == 64);
    for (const Word& w : r.relators) CHECK(w.size() == 6);
    CHECK(sample_plain(2, Rational(1, 2), 6, 42).relators == r.relators);
    CHECK(sample_plain(2, Rational(1, 2), 6, 43).relators != r.relators);

    RelatorSet red = sample_reduced(3, Rational(1, 2), 8, 5);
    for (const Word& w : red.relators) CHECK(is_reduced(w));

    RelatorSet distinct = sample_plain(2, Rational(1, 2), 4, 1, false);
    CHECK(std::set<Word>(distinct.relators.begin(), distinct.relators.end()).size() == distinct.relators.size());
    CHECK(kind_of([] { sample_reduced(1, Rational(9, 10), 10, 1, false); }) == ErrorKind::OutOfRange);
    CHECK(kind_of([] { sample_plain(2, Rational(1), 4, 1); }) == ErrorKind::OutOfRange);
    CHECK(kind_of([] { sample_plain(2, Rational(0), 4, 1); }) == ErrorKind::OutOfRange);
}

TEST_CASE("random words are uniform") {
    Rng rng(99);
    std::vector<int> first(4), second(3);
    for (int t = 0; t < 20000; ++t) {
        Word w = random_word(rng, 2, 2, Model::Plain);
        ++first[w[0]];
        Word r = random_word(rng, 2, 2, Model::Reduced);
        REQUIRE(is_reduced(r));
        // position of the second letter among the three allowed ones
        int pos = 0;
        for (Letter l = 0; l < r[1]; ++l) pos += l != inverse(r[0]);
        ++second[pos];
    }
    // 0.999 quantiles for 3 and 2 degrees of freedom
    CHECK(chi_square(first) < 16.27);
    CHECK(chi_square(second) < 13.82);
}

TEST_CASE("density estimates") {
    std::vector<int> lengths;
    std::vector<BigInt> nb, full, empty;
    Automaton nba = no_backtrack_automaton(2);
    Automaton all = loop_on({0, 1, 2, 3}, 2);
    for (int L = 10; L <= 30; L += 2) {
        lengths.push_back(L);
        nb.push_back(count_accepted(nba, L));
        full.push_back(count_accepted(all, L));
        empty.push_back(0);
    }
    DensityEstimate d = density_estimate(lengths, nb, 2);
    CHECK(d.d == doctest::Approx(std::log(3.0) / std::log(4.0)).epsilon(0.005));
    CHECK(density_estimate(lengths, full, 2).d == doctest::Approx(1.0));
    CHECK(density_estimate(lengths, full, 2).c == doctest::Approx(1.0));
    CHECK(kind_of([&] { density_estimate(lengths, empty, 2); }) == ErrorKind::InsufficientData);

    ResidueFilter even{2, 0};
    CHECK(even.contains(10));
    CHECK_FALSE(even.contains(11));
    CHECK(kind_of([&] { density_estimate(lengths, nb, 2, ResidueFilter{2, 1}); }) == ErrorKind::InsufficientData);

    GrowthCertificate cert = check_lambda_large(nba, Rational(3, 4));
    DensityEstimate b = density_estimate(lengths, nb, 2, {}, &cert);
    REQUIRE(b.bound.has_value());
    CHECK(*b.bound == doctest::Approx(std::log(3.0) / std::log(4.0)));
}

TEST_CASE("certified growth bounds the density") {
    std::mt19937_64 rng(23);
    int tested = 0;
    for (int t = 0; t < 60; ++t) {
        Automaton a = random_automaton(rng, Alphabet::plain(2), 2 + t % 4, 2, 4, true);
        GrowthCertificate g = check_lambda_large(a, Rational(1, 2));
        if (!g.holds) continue;
        std::vector<int> lengths;
        std::vector<BigInt> counts;
        for (int L = std::max(g.K, 20); L <= 40; L += 2) {
            lengths.push_back(L);
            counts.push_back(count_accepted(a, L));
        }
        DensityEstimate d = density_estimate(lengths, counts, 2, {}, &g);
        CHECK(d.d >= *d.bound - 0.02);
        ++tested;
    }
    CHECK(tested > 10);
}

TEST_CASE("wilson intervals") {
    Wilson w = wilson_interval(8, 10);
    CHECK(w.lo == doctest::Approx(0.4902).epsilon(0.001));
    CHECK(w.hi == doctest::Approx(0.9433).epsilon(0.001));
    CHECK(wilson_interval(0, 10).lo == 0);
    Wilson h = wilson_interval(5, 10);
    CHECK(h.lo + h.hi == doctest::Approx(1.0));
}

TEST_CASE("intersection experiment") {
    Automaton nb = no_backtrack_automaton(2);
    CHECK(accepts_word(nb, parse_word("ab")));
    CHECK_FALSE(accepts_word(nb, parse_word("aa'")));

    auto full = intersection_experiment(loop_on({0, 1, 2, 3}, 2), 2, Rational(1, 2), {2, 4}, 50, 1);
    for (const auto& pt : full) CHECK(pt.hits == pt.trials);

    // one word of each length: each of the 4 relators is accepted with probability 1/16
    Automaton single = loop_on({0}, 2);
    auto pts = intersection_experiment(single, 2, Rational(1, 2), {2}, 400, 8);
    REQUIRE(pts.size() == 1);
    const double p = 1 - std::pow(15.0 / 16.0, 4);
    CHECK(pts[0].ci.lo <= p);
    CHECK(pts[0].ci.hi >= p);
    CHECK(pts[0].p == doctest::Approx(pts[0].hits / 400.0));
    auto again = intersection_experiment(single, 2, Rational(1, 2), {2}, 400, 8);
    CHECK(again[0].hits == pts[0].hits);
    Automaton blocks;
    blocks.alphabet = Alphabet::blocks(2, 2, false);
    blocks.add_vertex("s");
    blocks.add_edge(0, 0, 0);
    CHECK_THROWS_AS(intersection_experiment(blocks, 2, Rational(1, 2), {2}, 5, 1), Error);
}

TEST_CASE("hat relators") {
    for (int k = 1; k <= 3; ++k)
        for (int m = 1; m <= 3; ++m) {
            RelatorSet r = sample_plain(k, Rational(1, 2), 4, 3);
            HatSystem h = hat_relators(r, m);
            long long expected = 1;
            for (int i = 0; i < m; ++i) expected *= 2 * k;
            CHECK(h.alphabet.size() == expected);
            for (int i = 0; i < h.alphabet.size(); ++i) CHECK(h.inverse_of[h.inverse_of[i]] == i);
        }
    RelatorSet r = sample_plain(2, Rational(1, 2), 7, 12);
    HatSystem h = hat_relators(r, 2);
    CHECK(h.residue == 1);
    // oracle: ordered pairs i != j whose junction cancels
    size_t pairs = 0;
    for (size_t i = 0; i < r.relators.size(); ++i)
        for (size_t j = 0; j < r.relators.size(); ++j)
            if (i != j && r.relators[i].back() == inverse(r.relators[j].front())) ++pairs;
    CHECK(h.relators.size() == pairs);
    for (size_t t = 0; t < h.relators.size(); ++t) {
        CHECK(h.relators[t].size() == 2 * (7 / 2));
        const Word& r1 = r.relators[h.pairs[t].first];
        const Word& r2 = r.relators[h.pairs[t].second];
        Word joined(r1.begin(), r1.end() - 1);
        joined.insert(joined.end(), r2.begin() + 1, r2.end());
        Word spelled;
        for (int s : h.relators[t]) spelled = concat(spelled, h.alphabet.symbols[s]);
        CHECK(spelled == joined);
    }
    HatSystem hr = hat_relators(sample_reduced(2, Rational(1, 2), 8, 4), 2, true);
    for (const auto& rel : hr.relators)
        for (size_t i = 1; i < rel.size(); ++i) CHECK(hr.inverse_of[rel[i - 1]] != rel[i]);
    CHECK(kind_of([&] { hat_relators(r, 0); }) == ErrorKind::OutOfRange);
}

TEST_CASE("small cancellation examples") {
    std::vector<Word> comm{parse_word("aba'b'")};
    CHECK(small_cancellation_check(comm, 3).holds);
    CHECK_FALSE(small_cancellation_check(comm, 4).holds);
    auto rep = small_cancellation_check(comm, 4);
    REQUIRE(rep.worst.has_value());
    CHECK(rep.worst->word.size() == 1);

    CHECK_FALSE(small_cancellation_check({parse_word("aaaaa")}, 1).holds);
    CHECK(small_cancellation_check({parse_word("abab'")}, 1).holds);
    CHECK(small_cancellation_check({parse_word("ab"), parse_word("ba")}, 6).relators == 1);
    CHECK(kind_of([] { small_cancellation_check({parse_word("aa'b")}, 6); }) == ErrorKind::NotReduced);
    CHECK(kind_of([] { small_cancellation_check({parse_word("abca'")}, 6); }) == ErrorKind::NotReduced);
    CHECK(small_cancellation_check({parse_word("abca'")}, 2, true).holds);
}

TEST_CASE("fast small cancellation check agrees with the naive one") {
    Rng rng(31);
    for (int t = 0; t < 300; ++t) {
        std::vector<Word> rels;
        const int count = 1 + rng.uniform(5);
        for (int i = 0; i < count; ++i) rels.push_back(random_word(rng, 2, 3 + rng.uniform(10), Model::Plain));
        for (int p : {2, 4, 6}) {
            auto fast = small_cancellation_check(rels, p, true);
            auto slow = small_cancellation_naive(rels, p, true);
            CHECK(fast.holds == slow.holds);
            CHECK(fast.relators == slow.relators);
            CHECK(fast.worst.has_value() == slow.worst.has_value());
            if (fast.worst && slow.worst)
                CHECK(Rational(static_cast<int>(fast.worst->word.size()), fast.worst->length) ==
                      Rational(static_cast<int>(slow.worst->word.size()), slow.worst->length));
        }
    }
}

TEST_CASE("k of n") {
    for (int n = 1; n <= 3; ++n) {
        Rational lambda = std::min(Rational(1, 3), Rational(Rational(2, 3) * build_constants(n, Rational(3, 4)).theta()));
        int k = 1;
        while (Rational(2 * k) <= 1 / lambda) ++k;
        CHECK(k_of_n(n) == k);
    }
    CHECK(k_of_n(1) == 4);
    CHECK(k_of_n(2) >= k_of_n(1));
}

TEST_CASE("rips assembly") {
    Presentation base{{"a"}, {parse_word("aaa")}, "manual"};
    RelatorSet pool;
    pool.k = 2;
    pool.L = 80;
    Rng rng(4);
    for (int i = 0; i < 20; ++i) pool.relators.push_back(random_word(rng, 2, 80, Model::Reduced));

    RipsResult r = rips_assemble(base, 1, 6, pool, {7, true});
    CHECK(r.presentation.generators == std::vector<std::string>{"a", "b", "c"});
    CHECK(r.kept == 17);
    CHECK(r.presentation.relators.size() == 17 + 1 + 2);
    REQUIRE(r.check.has_value());
    CHECK(r.presentation.origin == "rips");
    // a^3 followed by a shifted pool relator
    bool found = false;
    for (const Word& w : r.presentation.relators)
        if (w.size() == 83 && Word(w.begin(), w.begin() + 3) == parse_word("aaa")) found = true;
    CHECK(found);
    for (const Word& w : r.presentation.relators)
        for (Letter l : w) CHECK(generator_of(l) < 3);
    CHECK(rips_assemble(base, 1, 6, pool, {7, false}).presentation.relators == r.presentation.relators);

    RelatorSet short_pool = pool;
    short_pool.L = 72;
    for (auto& w : short_pool.relators) w.resize(72);
    CHECK(kind_of([&] { rips_assemble(base, 1, 6, short_pool); }) == ErrorKind::LengthTooShort);
    RelatorSet tiny = pool;
    tiny.relators.resize(2);
    CHECK(kind_of([&] { rips_assemble(base, 1, 6, tiny); }) == ErrorKind::PoolTooSmall);
    RelatorSet bad = pool;
    bad.relators[0][1] = inverse(bad.relators[0][0]);
    CHECK(kind_of([&] { rips_assemble(base, 1, 6, bad); }) == ErrorKind::NotReduced);
    Presentation wide{{}, {parse_word("aaa")}, "manual"};
    for (int i = 0; i < 25; ++i) wide.generators.push_back(letter_name(letter(i, false)));
    RelatorSet big = pool;
    while (big.relators.size() < 60) big.relators.push_back(random_word(rng, 2, 80, Model::Reduced));
    CHECK(kind_of([&] { rips_assemble(wide, 1, 6, big); }) == ErrorKind::OutOfRange);
}
