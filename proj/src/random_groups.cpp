#include "cubefix/random_groups.hpp"

#include "cubefix/builder.hpp"
#include "cubefix/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace cubefix {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL))) {}

int Rng::uniform(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

const char* model_name(Model m) { return m == Model::Plain ? "plain" : "reduced"; }

namespace {

BigInt ipow(const BigInt& b, unsigned e) {
    BigInt r = 1;
    for (unsigned i = 0; i < e; ++i) r *= b;
    return r;
}

// smallest r with r^q >= x
BigInt ceil_root(const BigInt& x, unsigned q) {
    if (x <= 1) return x;
    BigInt lo = 1, hi = 1;
    while (ipow(hi, q) < x) hi *= 2;
    while (lo < hi) {
        BigInt mid = (lo + hi) / 2;
        if (ipow(mid, q) >= x) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

double big_log(const BigInt& c) {
    if (c <= 0) return -INFINITY;
    unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(c)) + 1;
    if (bits <= 60) return std::log(static_cast<double>(c.convert_to<long long>()));
    unsigned shift = bits - 60;
    BigInt top = c >> shift;
    return std::log(static_cast<double>(top.convert_to<long long>())) + shift * std::log(2.0);
}

void check_sampling_args(int k, const Rational& d, int L) {
    if (k < 1) fail(ErrorKind::OutOfRange, "k must be at least 1");
    if (L < 1) fail(ErrorKind::OutOfRange, "L must be at least 1");
    if (d <= 0 || d >= 1) fail(ErrorKind::OutOfRange, "density must lie in (0,1)");
}

constexpr long long kMaxMaterialized = 50'000'000;

RelatorSet sample(int k, const Rational& d, int L, std::uint64_t seed, bool with_replacement, Model model) {
    check_sampling_args(k, d, L);
    BigInt n = sample_count(k, d, L);
    if (n > kMaxMaterialized) fail(ErrorKind::OutOfRange, "too many relators to materialize: " + n.str());
    RelatorSet r;
    r.k = k;
    r.d = d;
    r.L = L;
    r.model = model;
    r.seed = seed;
    r.with_replacement = with_replacement;
    const long long count = n.convert_to<long long>();
    Rng rng(seed);
    if (with_replacement) {
        r.relators.reserve(static_cast<size_t>(count));
        for (long long i = 0; i < count; ++i) r.relators.push_back(random_word(rng, k, L, model));
        return r;
    }
    BigInt total = model == Model::Plain ? ipow(BigInt(2 * k), static_cast<unsigned>(L))
                                         : BigInt(2 * k) * ipow(BigInt(2 * k - 1), static_cast<unsigned>(L - 1));
    if (total < n) fail(ErrorKind::OutOfRange, "fewer than " + n.str() + " distinct words of length " + std::to_string(L));
    std::set<Word> seen;
    while (static_cast<long long>(r.relators.size()) < count) {
        Word w = random_word(rng, k, L, model);
        if (seen.insert(w).second) r.relators.push_back(std::move(w));
    }
    return r;
}

}  // namespace

BigInt sample_count(int k, const Rational& d, int L) {
    check_sampling_args(k, d, L);
    BigInt p = boost::multiprecision::numerator(d);
    BigInt q = boost::multiprecision::denominator(d);
    BigInt e = p * L;
    return ceil_root(ipow(BigInt(2 * k), e.convert_to<unsigned>()), q.convert_to<unsigned>());
}

Word random_word(Rng& rng, int k, int L, Model model) {
    Word w(static_cast<size_t>(L));
    for (int i = 0; i < L; ++i) {
        if (model == Model::Plain || i == 0) {
            w[i] = rng.uniform(2 * k);
        } else {
            int c = rng.uniform(2 * k - 1);
            if (c >= inverse(w[i - 1])) ++c;
            w[i] = c;
        }
    }
    return w;
}

RelatorSet sample_plain(int k, const Rational& d, int L, std::uint64_t seed, bool with_replacement) {
    return sample(k, d, L, seed, with_replacement, Model::Plain);
}

RelatorSet sample_reduced(int k, const Rational& d, int L, std::uint64_t seed, bool with_replacement) {
    return sample(k, d, L, seed, with_replacement, Model::Reduced);
}

DensityEstimate density_estimate(const std::vector<int>& lengths, const std::vector<BigInt>& counts, int k,
                                 const ResidueFilter& A, const GrowthCertificate* cert) {
    if (lengths.size() != counts.size()) fail(ErrorKind::PreconditionViolated, "lengths and counts differ in size");
    const double base = std::log(2.0 * k);
    std::vector<double> xs, ys;
    for (size_t i = 0; i < lengths.size(); ++i) {
        if (!A.contains(lengths[i]) || counts[i] <= 0) continue;
        xs.push_back(lengths[i]);
        ys.push_back(big_log(counts[i]) / base);
    }
    if (xs.size() < 3) fail(ErrorKind::InsufficientData, "need at least 3 lengths with non-zero counts");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0) fail(ErrorKind::InsufficientData, "need at least 3 distinct lengths");
    DensityEstimate out;
    out.d = sxy / sxx;
    out.lengths = static_cast<int>(xs.size());
    out.c = INFINITY;
    for (size_t i = 0; i < xs.size(); ++i) out.c = std::min(out.c, std::exp((ys[i] - out.d * xs[i]) * base));
    if (cert) out.bound = std::log(to_double(cert->lambda) * 2 * k) / base;
    return out;
}

Wilson wilson_interval(int successes, int trials, double z) {
    if (trials <= 0) return {0, 1};
    const double n = trials, p = successes / n, z2 = z * z;
    const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
    const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

// Subset simulation of an automaton over the plain alphabet.
class Runner {
public:
    Runner(const Automaton& a, int k) : n_(a.vertex_count()), letters_(2 * k) {
        for (const Word& s : a.alphabet.symbols)
            if (s.size() != 1) fail(ErrorKind::PreconditionViolated, "automaton alphabet is not the plain alphabet");
        if (a.alphabet.k != k) fail(ErrorKind::PreconditionViolated, "automaton alphabet has a different rank");
        next_.assign(static_cast<size_t>(n_ * letters_), {});
        for (const AutEdge& e : a.edges) {
            Letter l = a.alphabet.symbols[static_cast<size_t>(e.label)][0];
            next_[static_cast<size_t>(e.from * letters_ + l)].push_back(e.to);
        }
        start_ = a.start;
        det_.assign(static_cast<size_t>(n_ * letters_), -1);
        deterministic_ = true;
        for (size_t i = 0; i < next_.size(); ++i) {
            std::sort(next_[i].begin(), next_[i].end());
            next_[i].erase(std::unique(next_[i].begin(), next_[i].end()), next_[i].end());
            if (next_[i].size() > 1) deterministic_ = false;
            if (next_[i].size() == 1) det_[i] = next_[i][0];
        }
    }

    void reset() {
        if (deterministic_)
            state_ = start_;
        else
            cur_.assign(1, start_);
    }

    // false once no path remains
    bool step(Letter l) {
        if (deterministic_) {
            state_ = det_[static_cast<size_t>(state_ * letters_ + l)];
            return state_ >= 0;
        }
        nxt_.clear();
        mark_.resize(static_cast<size_t>(n_));
        for (int v : cur_)
            for (int t : next_[static_cast<size_t>(v * letters_ + l)])
                if (!mark_[static_cast<size_t>(t)]) {
                    mark_[static_cast<size_t>(t)] = 1;
                    nxt_.push_back(t);
                }
        for (int t : nxt_) mark_[static_cast<size_t>(t)] = 0;
        cur_.swap(nxt_);
        return !cur_.empty();
    }

private:
    int n_, letters_, start_ = 0;
    bool deterministic_ = false;
    int state_ = 0;
    std::vector<int> det_;
    std::vector<std::vector<int>> next_;
    std::vector<int> cur_, nxt_;
    std::vector<char> mark_;
};

// Uniform letters; a power-of-two alphabet is served from buffered random bits.
class LetterSource {
public:
    LetterSource(Rng& rng, int n) : rng_(rng), n_(n) {
        if (n > 0 && (n & (n - 1)) == 0)
            while ((1 << bits_) < n) ++bits_;
        else
            bits_ = -1;
    }

    int next() {
        if (bits_ < 0) return rng_.uniform(n_);
        if (left_ < bits_) {
            buf_ = rng_.engine()();
            left_ = 64;
        }
        int l = static_cast<int>(buf_ & ((std::uint64_t{1} << bits_) - 1));
        buf_ >>= bits_;
        left_ -= bits_;
        return l;
    }

private:
    Rng& rng_;
    int n_;
    int bits_ = 0;
    std::uint64_t buf_ = 0;
    int left_ = 0;
};

}  // namespace

bool accepts_word(const Automaton& a, const Word& w) {
    Runner run(a, a.alphabet.k);
    run.reset();
    for (Letter l : w)
        if (!run.step(l)) return false;
    return true;
}

std::vector<IntersectionPoint> intersection_experiment(const Automaton& a, int k, const Rational& d,
                                                       const std::vector<int>& lengths, int trials,
                                                       std::uint64_t seed, Model model) {
    Runner proto(a, k);
    std::vector<IntersectionPoint> out;
    for (int L : lengths) {
        BigInt n = sample_count(k, d, L);
        if (n > BigInt(1) << 62) fail(ErrorKind::OutOfRange, "relator count too large: " + n.str());
        const long long count = n.convert_to<long long>();
        std::vector<char> hit(static_cast<size_t>(std::max(trials, 0)), 0);
        std::atomic<int> next{0};
        auto worker = [&] {
            Runner run = proto;
            for (int t = next++; t < trials; t = next++) {
                Rng rng(seed, (static_cast<std::uint64_t>(L) << 32) | static_cast<std::uint32_t>(t));
                LetterSource first(rng, 2 * k);
                for (long long i = 0; i < count && !hit[static_cast<size_t>(t)]; ++i) {
                    run.reset();
                    bool alive = true;
                    Letter prev = -1;
                    for (int j = 0; j < L && alive; ++j) {
                        Letter l;
                        if (model == Model::Plain || j == 0) {
                            l = first.next();
                        } else {
                            l = rng.uniform(2 * k - 1);
                            if (l >= inverse(prev)) ++l;
                        }
                        prev = l;
                        alive = run.step(l);
                    }
                    if (alive) hit[static_cast<size_t>(t)] = 1;
                }
            }
        };
        unsigned threads = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        IntersectionPoint pt;
        pt.L = L;
        pt.trials = trials;
        pt.hits = static_cast<int>(std::count(hit.begin(), hit.end(), 1));
        pt.p = trials > 0 ? static_cast<double>(pt.hits) / trials : 0;
        pt.ci = wilson_interval(pt.hits, trials);
        out.push_back(pt);
    }
    return out;
}

HatSystem hat_relators(const RelatorSet& r, int m, bool reduced) {
    if (m < 1) fail(ErrorKind::OutOfRange, "m must be at least 1");
    HatSystem h;
    h.k = r.k;
    h.m = m;
    h.residue = r.L % m;
    h.alphabet = Alphabet::blocks(r.k, m, reduced);
    std::map<Word, int> index;
    for (int i = 0; i < h.alphabet.size(); ++i) index[h.alphabet.symbols[static_cast<size_t>(i)]] = i;
    h.inverse_of.resize(static_cast<size_t>(h.alphabet.size()));
    for (int i = 0; i < h.alphabet.size(); ++i) {
        const Word& u = h.alphabet.symbols[static_cast<size_t>(i)];
        Word inv = inverse(u);
        h.inverse_of[static_cast<size_t>(i)] = index.at(inv);
        if (u <= inv) h.positive.push_back(i);
    }
    const int rr = h.residue;
    std::map<Word, std::vector<int>> by_prefix;
    for (size_t j = 0; j < r.relators.size(); ++j) {
        const Word& w = r.relators[j];
        if (static_cast<int>(w.size()) < rr) continue;
        by_prefix[Word(w.begin(), w.begin() + rr)].push_back(static_cast<int>(j));
    }
    for (size_t i = 0; i < r.relators.size(); ++i) {
        const Word& r1 = r.relators[i];
        if (static_cast<int>(r1.size()) < rr) continue;
        Word w = inverse(Word(r1.end() - rr, r1.end()));
        auto it = by_prefix.find(w);
        if (it == by_prefix.end()) continue;
        for (int j : it->second) {
            if (j == static_cast<int>(i)) continue;
            const Word& r2 = r.relators[static_cast<size_t>(j)];
            Word joined(r1.begin(), r1.end() - rr);
            joined.insert(joined.end(), r2.begin() + rr, r2.end());
            if (joined.size() % static_cast<size_t>(m) != 0) continue;
            SymbolWord blocks;
            bool ok = true;
            for (size_t p = 0; p < joined.size() && ok; p += static_cast<size_t>(m)) {
                auto f = index.find(Word(joined.begin() + static_cast<long>(p), joined.begin() + static_cast<long>(p) + m));
                if (f == index.end()) {
                    ok = false;
                    break;
                }
                if (reduced && !blocks.empty() && h.inverse_of[static_cast<size_t>(blocks.back())] == f->second) ok = false;
                blocks.push_back(f->second);
            }
            if (!ok) continue;
            h.relators.push_back(std::move(blocks));
            h.pairs.emplace_back(static_cast<int>(i), j);
        }
    }
    return h;
}

namespace {

struct Symmetrized {
    std::vector<Word> relators;  // deduplicated, reduced
    struct Element {
        int relator;
        bool inverted;
        int shift;
    };
    std::vector<Element> elements;
    std::vector<Word> inverses;

    Letter at(const Element& e, int i) const {
        const Word& w = e.inverted ? inverses[static_cast<size_t>(e.relator)] : relators[static_cast<size_t>(e.relator)];
        return w[(static_cast<size_t>(e.shift) + static_cast<size_t>(i)) % w.size()];
    }
    int length(const Element& e) const { return static_cast<int>(relators[static_cast<size_t>(e.relator)].size()); }
    int lcp(const Element& a, const Element& b) const {
        int n = std::min(length(a), length(b));
        int i = 0;
        while (i < n && at(a, i) == at(b, i)) ++i;
        return i;
    }
    Word prefix(const Element& e, int len) const {
        Word w;
        for (int i = 0; i < len; ++i) w.push_back(at(e, i));
        return w;
    }
};

Word canonical_cyclic(const Word& w) {
    Word best = w;
    for (const Word& base : {w, inverse(w)}) {
        for (size_t s = 0; s < base.size(); ++s) {
            Word rot(base.begin() + static_cast<long>(s), base.end());
            rot.insert(rot.end(), base.begin(), base.begin() + static_cast<long>(s));
            best = std::min(best, rot);
        }
    }
    return best;
}

Symmetrized symmetrize(const std::vector<Word>& relators, bool cyclically_reduce) {
    Symmetrized s;
    std::set<Word> seen;
    for (const Word& w0 : relators) {
        Word w = w0;
        if (cyclically_reduce) {
            w = cyclic_reduce(free_reduce(w));
        } else if (!is_reduced(w) || !is_cyclically_reduced(w)) {
            fail(ErrorKind::NotReduced, format_word(w0));
        }
        if (w.empty()) continue;
        if (!seen.insert(canonical_cyclic(w)).second) continue;
        s.relators.push_back(w);
        s.inverses.push_back(inverse(w));
    }
    for (size_t r = 0; r < s.relators.size(); ++r)
        for (bool inv : {false, true})
            for (int sh = 0; sh < static_cast<int>(s.relators[r].size()); ++sh)
                s.elements.push_back({static_cast<int>(r), inv, sh});
    return s;
}

SmallCancellationReport summarize(const Symmetrized& s, const std::vector<int>& best, int p) {
    SmallCancellationReport rep;
    rep.p = p;
    rep.relators = static_cast<int>(s.relators.size());
    long long wn = -1, wd = 1;  // worst ratio as a fraction
    for (size_t i = 0; i < s.elements.size(); ++i) {
        const auto& e = s.elements[i];
        const int len = s.length(e);
        if (static_cast<long long>(best[i]) * p >= len) rep.holds = false;
        if (static_cast<long long>(best[i]) * wd > wn * len) {
            wn = best[i];
            wd = len;
            rep.worst = Piece{s.prefix(e, best[i]), e.relator, len};
        }
    }
    return rep;
}

}  // namespace

SmallCancellationReport small_cancellation_check(const std::vector<Word>& relators, int p, bool cyclically_reduce) {
    if (p < 1) fail(ErrorKind::OutOfRange, "p must be positive");
    Symmetrized s = symmetrize(relators, cyclically_reduce);
    const size_t n = s.elements.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ea = s.elements[static_cast<size_t>(a)];
        const auto& eb = s.elements[static_cast<size_t>(b)];
        int la = s.length(ea), lb = s.length(eb);
        int c = s.lcp(ea, eb);
        if (c < la && c < lb) return s.at(ea, c) < s.at(eb, c);
        if (la != lb) return la < lb;
        return a < b;
    });
    std::vector<int> best(n, 0);
    for (size_t i = 0; i + 1 < n; ++i) {
        int a = order[i], b = order[i + 1];
        int c = s.lcp(s.elements[static_cast<size_t>(a)], s.elements[static_cast<size_t>(b)]);
        best[static_cast<size_t>(a)] = std::max(best[static_cast<size_t>(a)], c);
        best[static_cast<size_t>(b)] = std::max(best[static_cast<size_t>(b)], c);
    }
    return summarize(s, best, p);
}

SmallCancellationReport small_cancellation_naive(const std::vector<Word>& relators, int p, bool cyclically_reduce) {
    if (p < 1) fail(ErrorKind::OutOfRange, "p must be positive");
    Symmetrized s = symmetrize(relators, cyclically_reduce);
    const size_t n = s.elements.size();
    std::vector<int> best(n, 0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j) best[i] = std::max(best[i], s.lcp(s.elements[i], s.elements[j]));
    return summarize(s, best, p);
}

int k_of_n(int n) {
    BuildConstants bc = build_constants(n, Rational(3, 4));
    Rational lambda = std::min(Rational(1, 3), Rational(Rational(2, 3) * bc.theta()));
    // 2k > 1/lambda
    BigInt k = boost::multiprecision::denominator(lambda) / (2 * boost::multiprecision::numerator(lambda)) + 1;
    return k.convert_to<int>();
}

RipsResult rips_assemble(const Presentation& base, int n, int p, const RelatorSet& pool, const RipsOptions& opts) {
    if (n < 1 || p < 1) fail(ErrorKind::OutOfRange, "n and p must be positive");
    for (const Word& w : pool.relators)
        if (!is_reduced(w)) fail(ErrorKind::NotReduced, format_word(w));
    const int m = static_cast<int>(base.generators.size());
    const int l = static_cast<int>(base.relators.size());
    const int kb = pool.k;
    int C = 3;
    for (const Word& r : base.relators) C = std::max(C, static_cast<int>(r.size()));
    int L = pool.L;
    for (const Word& w : pool.relators) L = std::min(L, static_cast<int>(w.size()));
    if (static_cast<long long>(L) <= 4LL * p * C)
        fail(ErrorKind::LengthTooShort, "pool length " + std::to_string(L) + " <= 4pC = " + std::to_string(4 * p * C));
    const size_t draws = static_cast<size_t>(l + m * kb);
    if (pool.relators.size() < draws)
        fail(ErrorKind::PoolTooSmall, "need " + std::to_string(draws) + " pool relators, have " +
                                          std::to_string(pool.relators.size()));
    if (m + kb > 26) fail(ErrorKind::OutOfRange, "more than 26 generators");

    std::vector<size_t> idx(pool.relators.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    Rng rng(opts.seed);
    std::shuffle(idx.begin(), idx.end(), rng.engine());

    auto shifted = [&](const Word& w) {
        Word out = w;
        for (Letter& x : out) x += 2 * m;
        return out;
    };
    RipsResult res;
    Presentation& out = res.presentation;
    out.origin = "rips";
    out.generators = base.generators;
    for (int j = 0; j < kb; ++j) out.generators.push_back(letter_name(letter(m + j, false)));
    for (size_t i = draws; i < idx.size(); ++i) out.relators.push_back(shifted(pool.relators[idx[i]]));
    res.kept = static_cast<int>(idx.size() - draws);
    for (int i = 0; i < l; ++i)
        out.relators.push_back(concat(base.relators[static_cast<size_t>(i)], shifted(pool.relators[idx[static_cast<size_t>(i)]])));
    size_t next = static_cast<size_t>(l);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < kb; ++j) {
            Word w{letter(i, false), letter(m + j, false), letter(i, true)};
            out.relators.push_back(concat(w, inverse(shifted(pool.relators[idx[next++]]))));
        }
    if (opts.verify) res.check = small_cancellation_check(out.relators, p, true);
    return res;
}

}  // namespace cubefix
