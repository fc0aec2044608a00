#pragma once

#include "cubefix/automaton.hpp"
#include "cubefix/rational.hpp"
#include "cubefix/word.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace cubefix {

// Seeded generator; stream(i) gives an independent generator for trial i.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
    Rng stream(std::uint64_t index) const { return Rng(seed_, index); }
    std::uint64_t seed() const { return seed_; }
    int uniform(int n);  // uniform in [0, n)
    double unit();       // uniform in [0, 1)
    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

enum class Model { Plain, Reduced };
const char* model_name(Model m);

struct RelatorSet {
    int k = 0;
    Rational d;
    int L = 0;
    Model model = Model::Plain;
    std::uint64_t seed = 0;
    bool with_replacement = true;
    std::vector<Word> relators;
};

// ceil((2k)^(dL)), exactly
BigInt sample_count(int k, const Rational& d, int L);

Word random_word(Rng& rng, int k, int L, Model model);

// Without replacement the draws are distinct words (OutOfRange if there are not enough).
RelatorSet sample_plain(int k, const Rational& d, int L, std::uint64_t seed, bool with_replacement = true);
RelatorSet sample_reduced(int k, const Rational& d, int L, std::uint64_t seed, bool with_replacement = true);

struct Presentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;
    std::string origin;  // "sampled", "rips" or "manual"
};

struct DensityEstimate {
    double d = 0;  // least-squares slope of log_{2k}(count) against L
    double c = 0;  // min count / (2k)^(d L)
    int lengths = 0;
    std::optional<double> bound;  // log_{2k}(lambda 2k) when a certificate is supplied
};

// Residue filter A: lengths L with L mod modulus == residue.
struct ResidueFilter {
    int modulus = 1;
    int residue = 0;
    bool contains(int L) const { return ((L % modulus) + modulus) % modulus == residue; }
};

// counts[i] is the number of words of length lengths[i]; zero counts are skipped.
DensityEstimate density_estimate(const std::vector<int>& lengths, const std::vector<BigInt>& counts, int k,
                                 const ResidueFilter& A = {}, const GrowthCertificate* cert = nullptr);

struct Wilson {
    double lo = 0, hi = 0;
};
Wilson wilson_interval(int successes, int trials, double z = 1.959964);

struct IntersectionPoint {
    int L = 0;
    int trials = 0;
    int hits = 0;
    double p = 0;
    Wilson ci;
};

// Whether the length-|w| word w over the plain alphabet is accepted.
bool accepts_word(const Automaton& a, const Word& w);

// Each trial samples relators one at a time from the plain model and stops at the first accepted one.
std::vector<IntersectionPoint> intersection_experiment(const Automaton& a, int k, const Rational& d,
                                                       const std::vector<int>& lengths, int trials,
                                                       std::uint64_t seed, Model model = Model::Plain);

struct HatSystem {
    int k = 0;
    int m = 1;
    int residue = 0;
    Alphabet alphabet;             // S_m^±, all words of length m (or reduced ones)
    std::vector<int> positive;     // the chosen orientation S_m
    std::vector<int> inverse_of;   // symbol index of the inverse block
    std::vector<SymbolWord> relators;  // R̂_{m,L}
    std::vector<std::pair<int, int>> pairs;  // source relator indices (R1 w^-1, w R2)
};

// reduced: blocks are reduced words of length m, and relators must be reduced over the blocks.
HatSystem hat_relators(const RelatorSet& r, int m, bool reduced = false);

struct Piece {
    Word word;
    int relator = -1;  // relator it is measured against (index into the deduplicated input)
    int length = 0;    // |relator|
};

struct SmallCancellationReport {
    bool holds = true;
    int p = 6;
    std::optional<Piece> worst;  // piece with the largest |piece| / |R|
    int relators = 0;            // after deduplication
};

// C'(1/p): every piece u of a relator R in the symmetrized set has |u| p < |R|.
// Relators must be freely and cyclically reduced unless cyclically_reduce is set.
SmallCancellationReport small_cancellation_check(const std::vector<Word>& relators, int p,
                                                 bool cyclically_reduce = false);
SmallCancellationReport small_cancellation_naive(const std::vector<Word>& relators, int p,
                                                 bool cyclically_reduce = false);

// smallest k with 2k > 1/lambda, lambda = min{1/3, (2/3) theta(n, 3/4)}
int k_of_n(int n);

struct RipsOptions {
    std::uint64_t seed = 0;
    bool verify = false;
};

struct RipsResult {
    Presentation presentation;
    int kept = 0;  // |leftover pool|
    std::optional<SmallCancellationReport> check;
};

// base generators come first, then one generator per pool generator.
RipsResult rips_assemble(const Presentation& base, int n, int p, const RelatorSet& pool, const RipsOptions& opts = {});

}  // namespace cubefix
