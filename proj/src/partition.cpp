#include "cubefix/partition.hpp"
#include "cubefix/error.hpp"

namespace cubefix {

const char* part_class_name(PartClass c) {
    switch (c) {
        case PartClass::A: return "A";
        case PartClass::B: return "B";
        case PartClass::PVis: return "P_vis";
        case PartClass::PCross: return "P_cross";
        case PartClass::PDisj: return "P_disj";
        case PartClass::None: break;
    }
    return "-";
}

const char* remark_check_name(RemarkCheck r) {
    switch (r) {
        case RemarkCheck::Holds: return "holds";
        case RemarkCheck::Fails: return "fails";
        case RemarkCheck::NotApplicable: return "NotApplicable";
    }
    return "?";
}

std::vector<Letter> PartitionResult::P() const {
    std::vector<Letter> out;
    for (size_t s = 0; s < of_letter.size(); ++s)
        if (of_letter[s] == PartClass::PVis || of_letter[s] == PartClass::PCross || of_letter[s] == PartClass::PDisj)
            out.push_back(static_cast<Letter>(s));
    return out;
}

PartitionResult partition(const Action& a, int x, const Word& w, int H, const VisibleHyperplanes& vis,
                          const std::vector<Letter>& letters) {
    const MedianGraph& g = a.graph();
    int wx = a.apply(w, x);
    if (!g.in_carrier(H, x) || !g.in_carrier(H, wx) || g.separates(H, x, wx))
        fail(ErrorKind::PreconditionViolated, "x and wx must lie in the carrier of H on the same side");
    PartitionResult r;
    r.x = x;
    r.w = w;
    r.H = H;
    r.of_letter.assign(static_cast<size_t>(a.letter_count()), PartClass::None);
    for (Letter s : letters) {
        Word ws = w;
        ws.push_back(s);
        int wsx = a.apply(ws, x);
        PartClass c;
        if (g.separates(H, wx, wsx)) {
            c = PartClass::B;
        } else if (!g.in_carrier(H, wsx)) {
            c = PartClass::A;
        } else if (vis.contains(translate_hyperplane(a, inverse(ws), H))) {
            c = PartClass::PVis;
        } else {
            int img = translate_hyperplane(a, ws, H);
            Relation rel = g.crossing(img, H);
            if (rel == Relation::Cross) {
                c = PartClass::PCross;
            } else {
                c = PartClass::PDisj;
                if (rel == Relation::Equal) r.equal_not_visible.push_back(s);
            }
        }
        r.of_letter[s] = c;
        switch (c) {
            case PartClass::A: r.A.push_back(s); break;
            case PartClass::B: r.B.push_back(s); break;
            case PartClass::PVis: r.P_vis.push_back(s); break;
            case PartClass::PCross: r.P_cross.push_back(s); break;
            default: r.P_disj.push_back(s); break;
        }
    }
    return r;
}

PartitionResult partition(const Action& a, int x, const Word& w, int H) {
    return partition(a, x, w, H, visible_hyperplanes(a, x), a.letters());
}

RemarkCheck check_remark(const Action& a, int x, const Word& w, int H, Letter s, const VisibleHyperplanes& vis,
                         const std::vector<Letter>& letters) {
    PartitionResult p = partition(a, x, w, H, vis, letters);
    PartClass c = p.classify(s);
    if (c != PartClass::PVis && c != PartClass::PCross && c != PartClass::PDisj) return RemarkCheck::NotApplicable;
    Word ws = w;
    ws.push_back(s);
    PartitionResult q = partition(a, x, ws, H, vis, letters);
    bool lhs = c == PartClass::PVis;
    bool rhs = !q.B.empty();
    return lhs == rhs ? RemarkCheck::Holds : RemarkCheck::Fails;
}

RemarkCheck check_remark(const Action& a, int x, const Word& w, int H, Letter s) {
    return check_remark(a, x, w, H, s, visible_hyperplanes(a, x), a.letters());
}

}  // namespace cubefix
