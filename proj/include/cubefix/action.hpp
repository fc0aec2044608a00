#pragma once

#include "cubefix/median_graph.hpp"
#include "cubefix/word.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cubefix {

/// Action of the free group F_S on a median graph.
///
/// Either total (each generator a graph automorphism of a finite graph) or a window:
/// partial maps on a finite convex piece of an implicit infinite complex, with a
/// basepoint and a radius R such that every word of length <= R is defined at the basepoint.
/// Words act on the left: apply(w, v) = w(1)(w(2)(...w(n) v)).
class Action {
public:
    // maps[g][v] is the image of v under generator g; checked to be automorphisms.
    static Action total(std::shared_ptr<const MedianGraph> g, const std::vector<std::vector<int>>& generator_maps);
    // maps[l][v] for every letter l of S^±, -1 where undefined.
    static Action window(std::shared_ptr<const MedianGraph> g, std::vector<std::vector<int>> letter_maps, int radius, int basepoint);

    const MedianGraph& graph() const { return *graph_; }
    std::shared_ptr<const MedianGraph> graph_ptr() const { return graph_; }
    int generator_count() const { return static_cast<int>(maps_.size()) / 2; }
    int letter_count() const { return static_cast<int>(maps_.size()); }
    std::vector<Letter> letters() const;

    bool is_window() const { return window_; }
    int validity_radius() const { return radius_; }
    int basepoint() const { return basepoint_; }

    // image of v under one letter, -1 if undefined
    int step(Letter l, int v) const { return maps_[static_cast<size_t>(l)][static_cast<size_t>(v)]; }
    // -1 if the word leaves the window
    int try_apply(const Word& w, int v) const;
    int apply(const Word& w, int v) const;  // throws OutOfWindow

    const std::vector<int>& letter_map(Letter l) const { return maps_[static_cast<size_t>(l)]; }

private:
    std::shared_ptr<const MedianGraph> graph_;
    std::vector<std::vector<int>> maps_;
    bool window_ = false;
    int radius_ = -1;
    int basepoint_ = 0;
};

// Ball of radius R around the identity in the Cayley tree of the free group of given rank,
// with F acting by left multiplication. Vertex names are reduced words ("e" for the identity).
Action tree_ball_action(int rank, int radius);
// Box prod [-r_i, r_i] in the standard Cayley graph of Z^k, generator i translating by e_i.
// Vertex names are comma-separated coordinates; the basepoint is the origin.
Action grid_box_action(const std::vector<int>& radii);

struct Displacement {
    int vertex = 0;
    long long sum = 0;
};
Displacement minimize_displacement(const Action& a);
long long displacement(const Action& a, int x);

std::vector<Letter> fix_set(const Action& a, int x, const std::vector<Letter>& letters);
inline std::vector<Letter> fix_set(const Action& a, int x) { return fix_set(a, x, a.letters()); }

struct VisibleHyperplanes {
    int x = 0;
    std::vector<std::vector<int>> per_letter;  // indexed by letter; empty for letters outside the set
    std::vector<int> all;                      // sorted union
    bool contains(int h) const;
};

VisibleHyperplanes visible_hyperplanes(const Action& a, int x, const std::vector<Letter>& letters);
inline VisibleHyperplanes visible_hyperplanes(const Action& a, int x) { return visible_hyperplanes(a, x, a.letters()); }

int translate_hyperplane(const Action& a, const Word& w, int h);
// -1 instead of throwing when the image leaves the window
int try_translate_hyperplane(const Action& a, const Word& w, int h);

struct Inversion {
    Letter letter;
    int hyperplane;
};
std::optional<Inversion> detect_inversions(const Action& a);

struct SubdividedAction {
    Subdivision subdivision;
    Action action;
};
// Canonical extension of a total action to the first cubical subdivision.
SubdividedAction subdivide_action(const Action& a);

}  // namespace cubefix
