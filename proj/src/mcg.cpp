#include "sandwich/mcg.hpp"

#include "sandwich/errors.hpp"

namespace sandwich {

namespace {

FreeWord convex_word(int j, int k) {
    std::vector<int> l;
    for (int t = j; t <= j + k; ++t) l.push_back(t);
    return FreeWord(l);
}

void check_curve(const HoleCurve& c) {
    if (c.g.n != c.n) throw Error("StrandMismatch", "curve conjugator has wrong strand count");
    if (c.j < 1 || c.k < 0 || c.j + c.k > c.n) throw Error("RangeError", "curve base out of range");
}

void check_arc(const HoleArc& a) {
    if (a.g.n != a.n) throw Error("StrandMismatch", "arc conjugator has wrong strand count");
    if (a.j < 1 || a.j + 1 > a.n) throw Error("RangeError", "arc base out of range");
}

std::set<int> sum_one(const FreeWord& w, int n) {
    auto s = exponent_sums(w, n);
    std::set<int> out;
    for (int g = 1; g <= n; ++g)
        if (s[g] == 1) out.insert(g);
    return out;
}

std::vector<int> transported(const std::vector<int>& offset, const BraidWord& b) {
    if (offset.empty()) return offset;
    auto perm = permutation_of(generator_images(b));
    std::vector<int> r(offset.size(), 0);
    for (int h = 1; h <= b.n; ++h) r[perm[h] - 1] = offset[h - 1];
    r.back() = offset.back();
    return r;
}

FactorItem reduced(FactorItem it) {
    std::visit([](auto& x) { x.g = x.g.freely_reduced(); }, it);
    return it;
}

// Greedy straightening: push the curve word down with single letters until it is convex.
// Returns a shorter conjugator for the same curve, or the freely reduced input.
FactorItem shortened(const FactorItem& item) {
    FactorItem it = reduced(item);
    int n = std::visit([](auto& x) { return x.n; }, it);
    int k = std::holds_alternative<HoleArc>(it) ? 1 : std::get<HoleCurve>(it).k;
    size_t oldLen = std::visit([](auto& x) { return x.g.letters.size(); }, it);
    FreeWord cur = std::visit([](auto& x) { return x.canonical(); }, it);
    BraidWord h(n);
    while (h.letters.size() < oldLen) {
        for (int j = 1; j + k <= n; ++j)
            if (cur == cyclic_canonical(convex_word(j, k))) {
                if (auto* a = std::get_if<HoleArc>(&it)) return HoleArc{n, h, j, a->offset};
                return HoleCurve{n, h, j, k, std::get<HoleCurve>(it).offset};
            }
        FreeWord best = cur;
        Letter pick{0, 0};
        for (int i = 1; i < n; ++i)
            for (int sign : {1, -1}) {
                FreeWord w = cyclic_canonical(artin_act(BraidWord(n, {{i, sign}}), cur));
                if (w.letters.size() < best.letters.size()) {
                    best = w;
                    pick = {i, sign};
                }
            }
        if (pick.i == 0) break;
        cur = best;
        h = BraidWord(n, {pick}) * h;
    }
    return it;
}

MappingClass with_ledger(MappingClass m, int hole, int amount) {
    m.ledger[hole - 1] += amount;
    return m;
}

}  // namespace

FreeWord HoleCurve::canonical() const {
    check_curve(*this);
    return cyclic_canonical(artin_act(g.inverse(), convex_word(j, k)));
}

std::set<int> HoleCurve::holes() const { return sum_one(canonical(), n); }

FreeWord HoleArc::canonical() const {
    check_arc(*this);
    return cyclic_canonical(artin_act(g.inverse(), convex_word(j, 1)));
}

std::set<int> HoleArc::endpoints() const { return sum_one(canonical(), n); }

HoleCurve act_on_curve(const BraidWord& b, const HoleCurve& c) {
    if (b.n != c.n) throw Error("StrandMismatch", "braid and curve strand counts differ");
    HoleCurve r = c;
    r.g = c.g * b.inverse();
    r.offset = transported(c.offset, b);
    return r;
}

HoleArc act_on_curve(const BraidWord& b, const HoleArc& a) {
    if (b.n != a.n) throw Error("StrandMismatch", "braid and arc strand counts differ");
    HoleArc r = a;
    r.g = a.g * b.inverse();
    r.offset = transported(a.offset, b);
    return r;
}

MappingClass mc_identity(int n) { return mc_from_braid(BraidWord(n)); }

MappingClass mc_from_braid(const BraidWord& b) {
    MappingClass m;
    m.word = b;
    m.image = generator_images(b);
    m.perm = permutation_of(m.image);
    m.ledger.assign(b.n + 1, 0);
    return m;
}

MappingClass mc_compose(const MappingClass& f, const MappingClass& g) {
    if (f.n() != g.n()) throw Error("StrandMismatch", "mapping classes on different surfaces");
    int n = f.n();
    MappingClass r;
    r.word = f.word * g.word;
    // f(g(x_h)): substitute f's images into g's image
    for (int h = 0; h < n; ++h) {
        std::vector<int> w;
        for (int a : g.image[h].letters) {
            const auto& piece = f.image[std::abs(a) - 1].letters;
            auto push = [&w](int x) {
                if (!w.empty() && w.back() == -x)
                    w.pop_back();
                else
                    w.push_back(x);
            };
            if (a > 0)
                for (int x : piece) push(x);
            else
                for (auto it = piece.rbegin(); it != piece.rend(); ++it) push(-*it);
        }
        r.image.push_back(FreeWord(std::move(w)));
    }
    r.perm.assign(n + 1, 0);
    for (int h = 1; h <= n; ++h) r.perm[h] = f.perm[g.perm[h]];
    r.ledger = f.ledger;
    for (int h = 1; h <= n; ++h) r.ledger[f.perm[h] - 1] += g.ledger[h - 1];
    r.ledger[n] += g.ledger[n];
    return r;
}

MappingClass mc_inverse(const MappingClass& f) {
    int n = f.n();
    MappingClass r = mc_from_braid(f.word.inverse());
    for (int h = 1; h <= n; ++h) r.ledger[r.perm[h] - 1] = -f.ledger[h - 1];
    r.ledger[n] = -f.ledger[n];
    return r;
}

bool mc_equal(const MappingClass& f, const MappingClass& g) {
    return f.image == g.image && f.ledger == g.ledger;
}

BraidWord twist_word(const HoleCurve& c) {
    check_curve(c);
    if (c.k == 0) return BraidWord(c.n);
    BraidWord d = half_twist(c.j, c.j + c.k, c.n);
    return c.g.inverse() * d * d * c.g;
}

BraidWord interchange_word(const HoleArc& a) {
    check_arc(a);
    return a.g.inverse() * half_twist(a.j, a.j + 1, a.n) * a.g;
}

MappingClass twist_of(const HoleCurve& c) {
    MappingClass m = mc_from_braid(twist_word(c));
    if (c.k == 0) m = with_ledger(m, *c.holes().begin(), 2);
    return m;
}

MappingClass interchange_of(const HoleArc& a) { return mc_from_braid(interchange_word(a)); }

MappingClass half_boundary_twist(int hole, int n) {
    if (hole < 1 || hole > n) throw Error("RangeError", "hole out of range");
    return with_ledger(mc_identity(n), hole, 1);
}

MappingClass item_class(const FactorItem& it) {
    MappingClass m = std::holds_alternative<HoleCurve>(it) ? twist_of(std::get<HoleCurve>(it))
                                                          : interchange_of(std::get<HoleArc>(it));
    const auto& off = item_offset(it);
    for (size_t h = 0; h < off.size(); ++h) m.ledger[h] += off[h];
    return m;
}

BraidWord item_word(const FactorItem& it) {
    if (auto c = std::get_if<HoleCurve>(&it)) return twist_word(*c);
    return interchange_word(std::get<HoleArc>(it));
}

FactorItem act_on_item(const BraidWord& b, const FactorItem& it) {
    if (auto c = std::get_if<HoleCurve>(&it)) return act_on_curve(b, *c);
    return act_on_curve(b, std::get<HoleArc>(it));
}

FreeWord item_canonical(const FactorItem& it) {
    if (auto c = std::get_if<HoleCurve>(&it)) return c->canonical();
    return std::get<HoleArc>(it).canonical();
}

bool same_item(const FactorItem& a, const FactorItem& b) {
    if (a.index() != b.index()) return false;
    auto oa = item_offset(a), ob = item_offset(b);
    int n = std::visit([](auto& x) { return x.n; }, a);
    oa.resize(n + 1, 0);
    ob.resize(n + 1, 0);
    if (oa != ob) return false;
    if (auto c = std::get_if<HoleCurve>(&a)) {
        // boundary-parallel curves all reduce to a single letter
        if (c->k != std::get<HoleCurve>(b).k) return false;
    }
    return item_canonical(a) == item_canonical(b);
}

bool same_factorization(const Factorization& a, const Factorization& b) {
    if (a.n != b.n || a.items.size() != b.items.size()) return false;
    for (size_t i = 0; i < a.items.size(); ++i)
        if (!same_item(a.items[i], b.items[i])) return false;
    return true;
}

namespace {

// permutation and ledger only: enough to follow ledgers through conjugation
struct PermLedger {
    std::vector<int> perm;
    std::vector<int> ledger;
};

PermLedger pl_of(const FactorItem& it) {
    int n = std::visit([](auto& x) { return x.n; }, it);
    PermLedger p;
    p.perm.resize(n + 1);
    for (int h = 0; h <= n; ++h) p.perm[h] = h;
    p.ledger.assign(n + 1, 0);
    if (auto a = std::get_if<HoleArc>(&it)) {
        auto e = a->endpoints();
        int x = *e.begin(), y = *e.rbegin();
        p.perm[x] = y;
        p.perm[y] = x;
    } else if (std::get<HoleCurve>(it).k == 0) {
        p.ledger[*std::get<HoleCurve>(it).holes().begin() - 1] = 2;
    }
    const auto& off = item_offset(it);
    for (size_t h = 0; h < off.size(); ++h) p.ledger[h] += off[h];
    return p;
}

PermLedger pl_compose(const PermLedger& f, const PermLedger& g) {
    int n = static_cast<int>(f.perm.size()) - 1;
    PermLedger r{std::vector<int>(n + 1, 0), f.ledger};
    for (int h = 1; h <= n; ++h) {
        r.perm[h] = f.perm[g.perm[h]];
        r.ledger[f.perm[h] - 1] += g.ledger[h - 1];
    }
    r.ledger[n] += g.ledger[n];
    return r;
}

PermLedger pl_inverse(const PermLedger& f) {
    int n = static_cast<int>(f.perm.size()) - 1;
    PermLedger r{std::vector<int>(n + 1, 0), std::vector<int>(n + 1, 0)};
    for (int h = 1; h <= n; ++h) r.perm[f.perm[h]] = h;
    for (int h = 1; h <= n; ++h) r.ledger[r.perm[h] - 1] = -f.ledger[h - 1];
    r.ledger[n] = -f.ledger[n];
    return r;
}

// the moved item must carry the ledger of m x m^-1, not just the ledger of its shape
FactorItem with_conjugated_ledger(FactorItem moved, const PermLedger& m, const FactorItem& x) {
    auto want = pl_compose(pl_compose(m, pl_of(x)), pl_inverse(m)).ledger;
    std::visit([](auto& y) { y.offset.clear(); }, moved);
    auto base = pl_of(moved).ledger;
    std::vector<int> off(want.size());
    bool any = false;
    for (size_t h = 0; h < want.size(); ++h) any |= (off[h] = want[h] - base[h]) != 0;
    if (any) std::visit([&](auto& y) { y.offset = off; }, moved);
    return moved;
}

}  // namespace

const std::vector<int>& item_offset(const FactorItem& it) {
    return std::visit([](auto& x) -> const std::vector<int>& { return x.offset; }, it);
}

Factorization hurwitz_move(const Factorization& f, int i, Direction d) {
    if (i < 1 || i >= static_cast<int>(f.items.size()))
        throw Error("RangeError", "hurwitz move index out of range");
    Factorization r = f;
    const FactorItem& a = f.items[i - 1];
    const FactorItem& b = f.items[i];
    if (d == Direction::Forward) {
        r.items[i - 1] = with_conjugated_ledger(shortened(act_on_item(item_word(a), b)), pl_of(a), b);
        r.items[i] = a;
    } else {
        r.items[i - 1] = b;
        r.items[i] = with_conjugated_ledger(shortened(act_on_item(item_word(b).inverse(), a)), pl_inverse(pl_of(b)), a);
    }
    return r;
}

}  // namespace sandwich
