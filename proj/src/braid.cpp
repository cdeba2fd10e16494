#include "sandwich/braid.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "sandwich/errors.hpp"

namespace sandwich {

namespace {

void push_reduced(std::vector<int>& out, int a) {
    if (!out.empty() && out.back() == -a)
        out.pop_back();
    else
        out.push_back(a);
}

// x1 < x1^-1 < x2 < x2^-1 ...
bool letter_less(int a, int b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a > b;
}

}  // namespace

FreeWord::FreeWord(std::vector<int> l) {
    for (int a : l) push_reduced(letters, a);
}

FreeWord FreeWord::operator*(const FreeWord& o) const {
    FreeWord r = *this;
    for (int a : o.letters) push_reduced(r.letters, a);
    return r;
}

FreeWord FreeWord::inverse() const {
    FreeWord r;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) r.letters.push_back(-*it);
    return r;
}

std::string FreeWord::str() const {
    if (letters.empty()) return "1";
    std::string s;
    for (size_t k = 0; k < letters.size(); ++k) {
        if (k) s += ' ';
        s += "x" + std::to_string(std::abs(letters[k]));
        if (letters[k] < 0) s += "^-1";
    }
    return s;
}

FreeWord cyclic_reduce(const FreeWord& w) {
    size_t lo = 0, hi = w.letters.size();
    while (hi - lo >= 2 && w.letters[lo] == -w.letters[hi - 1]) {
        ++lo;
        --hi;
    }
    FreeWord r;
    r.letters.assign(w.letters.begin() + lo, w.letters.begin() + hi);
    return r;
}

FreeWord cyclic_canonical(const FreeWord& w) {
    FreeWord c = cyclic_reduce(w);
    const auto& v = c.letters;
    size_t m = v.size();
    if (m == 0) return c;
    size_t best = 0;
    for (size_t s = 1; s < m; ++s) {
        for (size_t t = 0; t < m; ++t) {
            int a = v[(s + t) % m], b = v[(best + t) % m];
            if (a == b) continue;
            if (letter_less(a, b)) best = s;
            break;
        }
    }
    FreeWord r;
    for (size_t t = 0; t < m; ++t) r.letters.push_back(v[(best + t) % m]);
    return r;
}

std::vector<int> exponent_sums(const FreeWord& w, int n) {
    std::vector<int> s(n + 1, 0);
    for (int a : w.letters) {
        int g = std::abs(a);
        if (g > n) throw Error("RangeError", "generator x" + std::to_string(g) + " out of range");
        s[g] += a > 0 ? 1 : -1;
    }
    return s;
}

BraidWord::BraidWord(int strands, std::vector<Letter> l) : n(strands), letters(std::move(l)) {
    if (n < 1) throw Error("RangeError", "braid needs at least one strand");
    for (auto& x : letters)
        if (x.i < 1 || x.i >= n || (x.sign != 1 && x.sign != -1))
            throw Error("RangeError", "braid letter s" + std::to_string(x.i) + " out of range for " +
                                          std::to_string(n) + " strands");
}

BraidWord BraidWord::operator*(const BraidWord& o) const {
    if (n != o.n) throw Error("StrandMismatch", "braid strand counts differ");
    BraidWord r = *this;
    r.letters.insert(r.letters.end(), o.letters.begin(), o.letters.end());
    return r;
}

BraidWord BraidWord::inverse() const {
    BraidWord r(n);
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) r.letters.push_back({it->i, -it->sign});
    return r;
}

BraidWord BraidWord::freely_reduced() const {
    BraidWord r(n);
    for (auto& x : letters) {
        if (!r.letters.empty() && r.letters.back().i == x.i && r.letters.back().sign == -x.sign)
            r.letters.pop_back();
        else
            r.letters.push_back(x);
    }
    return r;
}

std::string BraidWord::str() const {
    if (letters.empty()) return "1";
    std::string s;
    for (size_t k = 0; k < letters.size(); ++k) {
        if (k) s += ' ';
        s += "s" + std::to_string(letters[k].i);
        if (letters[k].sign < 0) s += "'";
    }
    return s;
}

BraidWord parse_braid(const std::string& text, int n) {
    std::istringstream in(text);
    std::string tok;
    BraidWord b(n);
    while (in >> tok) {
        if (tok == "1") continue;
        int sign = 1;
        if (tok.back() == '\'') {
            sign = -1;
            tok.pop_back();
        }
        if (tok.size() < 2 || tok[0] != 's' ||
            !std::all_of(tok.begin() + 1, tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw Error("ParseError", "bad braid token '" + tok + "'");
        int i = std::stoi(tok.substr(1));
        if (i < 1 || i >= n)
            throw Error("RangeError", "braid letter s" + std::to_string(i) + " out of range for " +
                                          std::to_string(n) + " strands");
        b.letters.push_back({i, sign});
    }
    return b;
}

FreeWord artin_act(const BraidWord& b, const FreeWord& w) {
    for (int a : w.letters)
        if (std::abs(a) > b.n) throw Error("StrandMismatch", "word uses a generator beyond the braid's strands");
    std::vector<int> cur = w.letters;
    for (auto it = b.letters.rbegin(); it != b.letters.rend(); ++it) {
        const int i = it->i;
        std::vector<int> next;
        next.reserve(cur.size() + 4);
        for (int a : cur) {
            int g = std::abs(a);
            int img[3];
            int len = 1;
            if (it->sign > 0) {
                if (g == i) { img[0] = i; img[1] = i + 1; img[2] = -i; len = 3; }
                else if (g == i + 1) img[0] = i;
                else img[0] = g;
            } else {
                if (g == i) img[0] = i + 1;
                else if (g == i + 1) { img[0] = -(i + 1); img[1] = i; img[2] = i + 1; len = 3; }
                else img[0] = g;
            }
            if (a > 0)
                for (int k = 0; k < len; ++k) push_reduced(next, img[k]);
            else
                for (int k = len - 1; k >= 0; --k) push_reduced(next, -img[k]);
        }
        cur.swap(next);
    }
    FreeWord r;
    r.letters = std::move(cur);
    return r;
}

std::vector<FreeWord> generator_images(const BraidWord& b) {
    std::vector<FreeWord> out;
    for (int g = 1; g <= b.n; ++g) out.push_back(artin_act(b, FreeWord::gen(g)));
    return out;
}

namespace {

using Perm = std::vector<int>;

Perm flipped(const Perm& p) {
    const int n = static_cast<int>(p.size());
    Perm r(n);
    for (int j = 0; j < n; ++j) r[j] = n - 1 - p[n - 1 - j];
    return r;
}

bool is_delta(const Perm& p) {
    const int n = static_cast<int>(p.size());
    for (int j = 0; j < n; ++j)
        if (p[j] != n - 1 - j) return false;
    return true;
}

bool is_identity(const Perm& p) {
    for (int j = 0; j < static_cast<int>(p.size()); ++j)
        if (p[j] != j) return false;
    return true;
}

// make (a,b) left-weighted; true if anything moved
bool left_weight(Perm& a, Perm& b) {
    const int n = static_cast<int>(a.size());
    bool moved = false;
    Perm inv(n);
    for (;;) {
        for (int j = 0; j < n; ++j) inv[a[j]] = j;
        int found = -1;
        for (int i = 0; i + 1 < n && found < 0; ++i)
            if (b[i] > b[i + 1] && inv[i] < inv[i + 1]) found = i;
        if (found < 0) return moved;
        moved = true;
        for (int j = 0; j < n; ++j) {
            if (a[j] == found) a[j] = found + 1;
            else if (a[j] == found + 1) a[j] = found;
        }
        std::swap(b[found], b[found + 1]);
    }
}

}  // namespace

GarsideForm left_normal_form(const BraidWord& b) {
    const int n = b.n;
    GarsideForm g;
    if (n < 2) return g;
    Perm delta(n);
    for (int j = 0; j < n; ++j) delta[j] = n - 1 - j;
    std::vector<Perm> raw;
    std::vector<int> after;  // Delta^-1 count pulled out before this factor
    for (const auto& l : b.letters) {
        const int i = l.i - 1;
        Perm p;
        if (l.sign > 0) {
            p.resize(n);
            for (int j = 0; j < n; ++j) p[j] = j;
            std::swap(p[i], p[i + 1]);
        } else {
            --g.inf;
            p = delta;
            for (int j = 0; j < n; ++j) {
                if (p[j] == i) p[j] = i + 1;
                else if (p[j] == i + 1) p[j] = i;
            }
        }
        raw.push_back(std::move(p));
        after.push_back(-g.inf);
    }
    const int total = -g.inf;
    std::vector<Perm> nf;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        Perm p = ((total - after[k]) % 2) ? flipped(raw[k]) : raw[k];
        if (is_identity(p)) continue;
        nf.push_back(std::move(p));
        for (std::size_t j = nf.size() - 1; j > 0; --j)
            if (!left_weight(nf[j - 1], nf[j])) break;
        while (!nf.empty() && is_identity(nf.back())) nf.pop_back();
    }
    std::size_t lead = 0;
    while (lead < nf.size() && is_delta(nf[lead])) ++lead;
    g.inf += static_cast<int>(lead);
    g.factors.assign(nf.begin() + static_cast<std::ptrdiff_t>(lead), nf.end());
    return g;
}

bool braid_equal(const BraidWord& a, const BraidWord& b) {
    if (a.n != b.n) return false;
    return left_normal_form(a) == left_normal_form(b);
}

BraidWord half_twist(int j, int k, int n) {
    if (j < 1 || j > k || k > n) throw Error("RangeError", "half twist range out of bounds");
    BraidWord b(n);
    for (int top = j + 1; top <= k; ++top)
        for (int t = top - 1; t >= j; --t) b.letters.push_back({t, 1});
    return b;
}

std::vector<int> permutation_of(const std::vector<FreeWord>& images) {
    int n = static_cast<int>(images.size());
    std::vector<int> perm(n + 1, 0);
    for (int h = 1; h <= n; ++h) {
        auto s = exponent_sums(images[h - 1], n);
        int target = 0;
        for (int g = 1; g <= n; ++g)
            if (s[g] == 1) target = g;
        perm[h] = target;
    }
    return perm;
}

int exponent_total(const BraidWord& b) {
    int t = 0;
    for (auto& x : b.letters) t += x.sign;
    return t;
}

}  // namespace sandwich
