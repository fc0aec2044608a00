#pragma once

#include "cubefix/action.hpp"
#include "cubefix/rational.hpp"
#include "cubefix/word.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cubefix {

// Symbols of an automaton alphabet. Each symbol is a word over S^± (length 1 for the plain
// alphabet, length m for the block alphabets S_m^±).
struct Alphabet {
    int k = 0;  // generators of the underlying free group
    std::vector<Word> symbols;

    int size() const { return static_cast<int>(symbols.size()); }
    static Alphabet plain(int k);
    // all words of length m over S^±, or only the reduced ones
    static Alphabet blocks(int k, int m, bool reduced_only);
    int index_of(const Word& w) const;  // -1 if absent
};

struct AutEdge {
    int from = 0;
    int to = 0;
    int label = 0;  // symbol index
};

/// Finite labeled directed graph with a start vertex and hyperplane-labeled checkpoints.
/// Accepted words are labels of directed paths starting at the start vertex.
struct Automaton {
    Alphabet alphabet;
    std::vector<std::string> vertices;
    int start = 0;
    std::vector<AutEdge> edges;
    std::map<int, int> checkpoints;  // vertex -> hyperplane class

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int add_vertex(const std::string& name);
    void add_edge(int from, int to, int label) { edges.push_back({from, to, label}); }
    int index_of(const std::string& name) const;  // throws UnknownVertex

    std::vector<std::vector<AutEdge>> out_edges() const;
    int distinct_out_labels(int v) const;
    bool deterministic() const;
    // the word over S^± spelled by a sequence of symbols
    Word spell(const std::vector<int>& symbols) const;
    bool accepts(const std::vector<int>& symbols) const;
};

// Words are sequences of symbol indices.
using SymbolWord = std::vector<int>;

std::vector<SymbolWord> accepted_words(const Automaton& a, int L);
BigInt count_accepted(const Automaton& a, int L);
std::vector<SymbolWord> prefix_language(const Automaton& a, int v, int L);
BigInt count_prefix_language(const Automaton& a, int v, int L);
// Calls f on every accepted word of length <= L (each word once).
void for_each_accepted(const Automaton& a, int L, const std::function<void(const SymbolWord&)>& f);

struct GrowthCertificate {
    bool holds = false;
    Rational lambda;
    int K = 0;
    std::vector<bool> large;  // per vertex
    int witness = -1;         // non-large vertex reachable through a cycle
};
GrowthCertificate check_lambda_large(const Automaton& a, const Rational& lambda);

// A first violation of the progressing conditions.
struct Violation {
    int clause = 0;  // 1 or 2
    std::vector<int> path;  // vertices
    SymbolWord word;
    std::string reason;
};

struct ProgressReport {
    bool ok = true;
    int max_len = 0;
    long long paths_checked = 0;
    // cycles avoiding the checkpoints; when absent the check up to |V| is exhaustive
    bool checkpoint_free_cycle = false;
    std::optional<Violation> violation;
};

// Checks both path shapes over all paths of length <= max_len (default |V| + 1 when max_len < 0).
// Automata over block alphabets are checked on the spelled words.
ProgressReport verify_progressing(const Automaton& a, const Action& act, int x, int max_len = -1);

struct LemmaReport {
    bool ok = true;
    long long words_checked = 0;
    std::optional<SymbolWord> counterexample;
    std::string reason;
};
LemmaReport verify_checkpoints_lemma(const Automaton& a, const Action& act, int x, int max_len);

constexpr int kStartLabel = -1;  // root label standing for the start vertex

// root_label is a hyperplane class or kStartLabel; w must be non-empty.
bool verify_progressing_pair(const Action& act, int x, const Word& w, int root_label, int witness,
                             std::string* reason = nullptr);

/// Rooted tree with deterministic edge labels over S^±.
/// Node 0 is the root; leaf labels are hyperplane classes.
struct CheckpointTree {
    struct Node {
        int parent = -1;
        Letter label = -1;  // label of the edge from the parent
        int depth = 0;
        std::map<Letter, int> children;
        int leaf_label = -1;
    };

    int root_label = kStartLabel;
    std::vector<Node> nodes{Node{}};

    explicit CheckpointTree(int root = kStartLabel) : root_label(root) {}

    int add_child(int v, Letter s);  // returns the existing child when present
    bool is_leaf(int v) const { return nodes[static_cast<size_t>(v)].children.empty(); }
    Word word_of(int v) const;
    int follow(const Word& w, int from = 0) const;  // -1 if no such path
    std::vector<int> leaves() const;
    std::vector<int> preorder() const;
    int depth() const;
    // minimum number of children over non-leaf nodes (0 for a single vertex)
    int min_branching() const;
    // copy of the subtree spanned by the kept nodes (must be closed under parents)
    CheckpointTree restricted(const std::vector<bool>& keep) const;
};

struct TreeReport {
    bool ok = true;
    std::string reason;
};
// Every leaf labeled by a visible hyperplane, every root-to-leaf word a progressing pair.
TreeReport verify_checkpoint_tree(const CheckpointTree& t, const Action& act, int x, const VisibleHyperplanes& vis);

bool check_star(const CheckpointTree& t);
// For every vertex v of the non-leaf subtree and every label s of a leaf child of v,
// s lies in the child-label set of u for every proper suffix u of v's word.
bool check_inductive_star(const CheckpointTree& t);
// The leaf-of-T0 form: for every leaf v of T0, c(v) is contained in c(u) for u in suf(v).
bool check_inductive_star_leaves(const CheckpointTree& t);

// Union of the trees with equally labeled vertices identified. Vertex "s" is the start,
// "H<h>" the checkpoint for class h; internal vertices are named after their root and word.
Automaton realize(const std::vector<CheckpointTree>& trees, int k);

// Automaton over S_m^± whose language is the reduced part of the original.
Automaton rewire_reduced(const Automaton& a);

// Two-vertex automaton s -> v (labels s, s^-1 for the first moving generator), loops for Fix(x).
Automaton fixset_automaton(const Action& act, int x);
Automaton fixset_automaton(const Action& act, int x, const std::vector<Letter>& letters);

struct ShapeReport {
    int form = 0;  // 1, 2 or 0 for neither
    bool vertex_bound = false;
    BigInt bound;
    std::string reason;
    bool ok() const { return form != 0 && vertex_bound; }
};
ShapeReport shape_check(const Automaton& a, int n, const Rational& c1, const Rational& c2);

// Standard no-backtrack automaton over the plain alphabet: start plus one vertex per letter.
Automaton no_backtrack_automaton(int k);

}  // namespace cubefix
