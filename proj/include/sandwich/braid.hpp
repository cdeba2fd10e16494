#pragma once
#include <string>
#include <vector>

namespace sandwich {

// Letters are signed generator indices: +g is x_g, -g is x_g^{-1}.
struct FreeWord {
    std::vector<int> letters;

    FreeWord() = default;
    explicit FreeWord(std::vector<int> l);  // reduces
    static FreeWord gen(int g) { return FreeWord({g}); }

    FreeWord operator*(const FreeWord& o) const;
    FreeWord inverse() const;
    bool operator==(const FreeWord& o) const = default;
    bool empty() const { return letters.empty(); }
    std::string str() const;
};

FreeWord cyclic_reduce(const FreeWord& w);
// cyclically reduced, least rotation under the order x1 < x1^-1 < x2 < ...
FreeWord cyclic_canonical(const FreeWord& w);
// exponent sum per generator, index 1..n (slot 0 unused)
std::vector<int> exponent_sums(const FreeWord& w, int n);

struct Letter {
    int i;
    int sign;
    bool operator==(const Letter&) const = default;
};

// Written left to right; the rightmost letter acts first.
struct BraidWord {
    int n = 1;
    std::vector<Letter> letters;

    BraidWord() = default;
    explicit BraidWord(int strands, std::vector<Letter> l = {});

    BraidWord operator*(const BraidWord& o) const;  // o acts first
    BraidWord inverse() const;
    BraidWord freely_reduced() const;
    bool empty() const { return letters.empty(); }
    std::string str() const;  // "s1 s2'" or "1"
    bool operator==(const BraidWord&) const = default;
};

BraidWord parse_braid(const std::string& text, int n);

FreeWord artin_act(const BraidWord& b, const FreeWord& w);
std::vector<FreeWord> generator_images(const BraidWord& b);
// Garside left normal form: Delta^inf times simple factors, each a permutation
// (strand at position j on top ends at position perm[j], 0-based)
struct GarsideForm {
    int inf = 0;
    std::vector<std::vector<int>> factors;
    bool operator==(const GarsideForm&) const = default;
};
GarsideForm left_normal_form(const BraidWord& b);
bool braid_equal(const BraidWord& a, const BraidWord& b);
BraidWord half_twist(int j, int k, int n);
// hole h is sent to perm[h]; index 0 unused
std::vector<int> permutation_of(const std::vector<FreeWord>& images);
int exponent_total(const BraidWord& b);

}  // namespace sandwich
