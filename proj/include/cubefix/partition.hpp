#pragma once

#include "cubefix/action.hpp"

#include <vector>

namespace cubefix {

enum class PartClass { None = -1, A = 0, B, PVis, PCross, PDisj };
const char* part_class_name(PartClass c);

struct PartitionResult {
    int x = 0;
    Word w;
    int H = -1;
    std::vector<Letter> A, B, P_vis, P_cross, P_disj;
    // letters with wsH = H that are not visibly parallel; filed under P_disj
    std::vector<Letter> equal_not_visible;
    std::vector<PartClass> of_letter;  // indexed by letter

    std::vector<Letter> P() const;
    PartClass classify(Letter s) const { return of_letter[static_cast<size_t>(s)]; }
};

// Requires x and wx in the carrier of H on the same side. `vis` is the visible set used
// for the P_vis test and `letters` the letters being classified.
PartitionResult partition(const Action& a, int x, const Word& w, int H, const VisibleHyperplanes& vis,
                          const std::vector<Letter>& letters);
PartitionResult partition(const Action& a, int x, const Word& w, int H);

enum class RemarkCheck { Holds, Fails, NotApplicable };
const char* remark_check_name(RemarkCheck r);

// Checks s in P_vis  <=>  B_{ws}(H) non-empty.
RemarkCheck check_remark(const Action& a, int x, const Word& w, int H, Letter s, const VisibleHyperplanes& vis,
                         const std::vector<Letter>& letters);
RemarkCheck check_remark(const Action& a, int x, const Word& w, int H, Letter s);

}  // namespace cubefix
