#pragma once

#include "cubefix/automaton.hpp"
#include "cubefix/partition.hpp"
#include "cubefix/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cubefix {

struct DTable {
    Rational epsilon0;
    int n = 0;
    std::vector<std::vector<Rational>> D;  // D[i][j] for 1 <= i <= n, 0 <= j < i (row 0 unused)

    const Rational& at(int i, int j) const { return D[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
};

DTable d_table(const Rational& epsilon0, int n);

struct MonotonicityViolation {
    int i, j, i2, j2;  // D_i(j) > D_i2(j2) although i2 + j2 < i + j
};
std::vector<MonotonicityViolation> monotonicity_violations(const DTable& t);
// D_i(j) non-increasing along each row (in j) and each column (in i)
bool rows_and_columns_monotone(const DTable& t);

// Largest power of 1/2 not above 1/5 (down to 2^-20) with D_n(n-1) > 0, non-increasing in n.
Rational eps_n(int n);
Rational alpha(const Rational& epsilon0, const Rational& epsilon1, int n);

struct BuildConstants {
    int n = 0;
    Rational epsilon1, epsilon0, lambda;
    std::vector<Rational> gamma;  // gamma[i] for 1 <= i <= n
    Rational theta() const { return gamma.back(); }
    // epsilon1 / (2 lambda - 1)^(n - i)
    Rational beta(int i) const;
};
BuildConstants build_constants(int n, const Rational& epsilon1);

struct StageTrace {
    int index = 0;
    int leaves = 0;
    int class_one = 0;
    int class_two = 0;
    bool root_class_one = false;
    int deleted = 0;
    bool star = true;
    int depth = 0;
};

struct WitnessRecord {
    Word word;
    int leaf_label = -1;
    std::string rule;  // "A", "P_vis", "P_disj.B", "start"
};

struct TreeTrace {
    int root = kStartLabel;
    std::string method;  // "start", "easy", "keylemma-easy", "keylemma"
    std::vector<StageTrace> stages;
    std::vector<WitnessRecord> witnesses;
    std::vector<std::string> flags;
    bool star_ok = true;
    bool crossing_ok = true;
    bool verified = false;
    Rational growth;    // min branching / |letters|
    Rational declared;  // bound the construction promises
};

struct DescentCertificate {
    int level = 0;
    int H = -1;
    Rational lambda;
    std::vector<Letter> P;
    std::vector<Letter> subset;
    bool size_ok = false;        // |subset| >= (2 lambda - 1)|letters|
    bool all_cross_H = false;    // every hyperplane of H_P crosses H
    int crossing_before = 0;     // largest pairwise-crossing family in the visible set
    int crossing_after = 0;      // same for the hyperplanes visible through the subset
    bool backwards_ok = false;   // |B| <= beta / (2 lambda - 1) |subset|; filled in by build_automaton
};

struct BuildTrace {
    BuildConstants constants;
    std::vector<Letter> letters;
    std::vector<TreeTrace> trees;
    std::vector<DescentCertificate> descents;
    int final_level = 0;
    std::vector<std::string> flags;
};

struct BuildOptions {
    // When set, descend as soon as some H has |P(H)| >= descent_lambda |letters|.
    std::optional<Rational> descent_lambda;
};

struct BuildResult {
    Automaton automaton;
    std::vector<CheckpointTree> trees;
    BuildTrace trace;
};

// Closest hyperplane to z separating z from the carrier of H (smallest class among ties).
int closest_separator(const MedianGraph& g, int z, int H);

// Tree whose root has one child per letter, the leaf for s labeled by a hyperplane of H_{s^-1}.
CheckpointTree start_tree(const std::vector<Letter>& letters, const VisibleHyperplanes& vis, TreeTrace* trace = nullptr);

// Extends every unlabeled leaf by the A, P_vis and (when |B(H)| >= lambda|letters|) P_disj.B families.
CheckpointTree extend_easy(const CheckpointTree& t, const Action& act, int x, const std::vector<Letter>& letters,
                           const VisibleHyperplanes& vis, const Rational& lambda, TreeTrace* trace = nullptr);

CheckpointTree build_tree_keylemma(int H, const Action& act, int x, const std::vector<Letter>& letters,
                                   const VisibleHyperplanes& vis, const Rational& epsilon0, const Rational& epsilon1, int n,
                                   TreeTrace* trace = nullptr);

std::vector<Letter> subset_descent(int H, const Action& act, int x, const std::vector<Letter>& letters,
                                   const VisibleHyperplanes& vis, const Rational& lambda, DescentCertificate* cert = nullptr);

BuildResult build_automaton(const Action& act, int x, int n, const Rational& epsilon1, const std::vector<Letter>& letters,
                            const BuildOptions& opts = {});
BuildResult build_automaton(const Action& act, int x, int n, const Rational& epsilon1, const BuildOptions& opts = {});

struct BackwardsReport {
    bool ok = true;
    int worst_H = -1;
    int worst_B = 0;
    int letters = 0;
};
// |B(H)| <= |S^±|/2 for every visible H; no precondition checks
BackwardsReport backwards_bound(const Action& act, int x);
// Checks the preconditions first (no inversions, x minimizes displacement for total actions).
BackwardsReport verify_backwards_bound(const Action& act, int x);

}  // namespace cubefix
