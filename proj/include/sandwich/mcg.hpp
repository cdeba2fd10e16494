#pragma once
#include <set>
#include <variant>
#include <vector>

#include "sandwich/braid.hpp"

namespace sandwich {

// g^{-1} of the convex curve about holes j..j+k
struct HoleCurve {
    int n = 1;
    BraidWord g;
    int j = 1;
    int k = 0;
    std::vector<int> offset;  // extra ledger per hole, outer last; empty means none

    FreeWord canonical() const;
    std::set<int> holes() const;  // generators with exponent sum 1
};

// g^{-1} of the straight arc from hole j to hole j+1
struct HoleArc {
    int n = 2;
    BraidWord g;
    int j = 1;
    std::vector<int> offset;

    // an arc between two holes is determined by the curve bounding its neighbourhood
    FreeWord canonical() const;
    std::set<int> endpoints() const;
};

HoleCurve act_on_curve(const BraidWord& b, const HoleCurve& c);
HoleArc act_on_curve(const BraidWord& b, const HoleArc& a);

struct MappingClass {
    std::vector<FreeWord> image;
    std::vector<int> perm;    // 1-based, slot 0 unused
    std::vector<int> ledger;  // holes 1..n in slots 0..n-1, outer in slot n
    BraidWord word;           // a representative; equality never looks at it

    int n() const { return word.n; }
};

MappingClass mc_identity(int n);
MappingClass mc_from_braid(const BraidWord& b);
MappingClass mc_compose(const MappingClass& f, const MappingClass& g);  // g acts first
MappingClass mc_inverse(const MappingClass& f);
bool mc_equal(const MappingClass& f, const MappingClass& g);

MappingClass twist_of(const HoleCurve& c);
MappingClass interchange_of(const HoleArc& a);
MappingClass half_boundary_twist(int hole, int n);
// braid word carrying the twist or interchange; empty for boundary-parallel curves
BraidWord twist_word(const HoleCurve& c);
BraidWord interchange_word(const HoleArc& a);

using FactorItem = std::variant<HoleCurve, HoleArc>;

struct Factorization {
    int n = 1;
    std::vector<FactorItem> items;
};

MappingClass item_class(const FactorItem& it);
BraidWord item_word(const FactorItem& it);
FactorItem act_on_item(const BraidWord& b, const FactorItem& it);
FreeWord item_canonical(const FactorItem& it);
const std::vector<int>& item_offset(const FactorItem& it);
bool same_item(const FactorItem& a, const FactorItem& b);
bool same_factorization(const Factorization& a, const Factorization& b);

enum class Direction { Forward, Backward };
// i is 1-based: moves items i and i+1
Factorization hurwitz_move(const Factorization& f, int i, Direction d);

}  // namespace sandwich
