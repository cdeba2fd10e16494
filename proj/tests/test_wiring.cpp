#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "common.hpp"
#include "random_diagram.hpp"
#include "sandwich/errors.hpp"
#include "sandwich/plumbing.hpp"
#include "sandwich/wiring.hpp"

using namespace sandwich;

namespace {

WiringDiagram fig() { return parse_wire(data("fig.wire")); }
DecoratedGerm twocusp() { return germ_from_cluster(parse_germ(data("twocusp.germ"))); }

// independent tracker: labels move with the braid permutation only
std::vector<std::map<std::string, int>> oracle_columns(const WiringDiagram& w) {
    std::vector<std::string> lab = w.initialComponents;
    std::vector<std::map<std::string, int>> cols;
    auto move = [&](const BraidWord& b) {
        for (auto it = b.letters.rbegin(); it != b.letters.rend(); ++it) std::swap(lab[it->i - 1], lab[it->i]);
    };
    for (size_t k = 0; k < w.sings.size(); ++k) {
        move(w.braids[k]);
        const auto& s = w.sings[k];
        if (s.kind == SingKind::Tangency) continue;
        std::map<std::string, int> col;
        for (int p = s.lo; p <= s.hi; ++p) ++col[lab[p - 1]];
        cols.push_back(col);
    }
    return cols;
}

int letter_sum(const BraidWord& b) {
    int s = 0;
    for (auto& l : b.letters) s += l.sign;
    return s;
}

std::vector<int> row_sums_for(const IncidenceMatrix& m, const std::vector<std::string>& names) {
    std::vector<int> out;
    auto sums = m.row_sums();
    for (auto& n : names) out.push_back(sums[std::find(m.rows.begin(), m.rows.end(), n) - m.rows.begin()]);
    return out;
}

bool has_issue(const Report& r, const std::string& needle) {
    return std::any_of(r.issues.begin(), r.issues.end(), [&](auto& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("parse the figure") {
    auto w = fig();
    CHECK(w.n == 4);
    CHECK(w.tangency_count() == 2);
    CHECK(std::count_if(w.sings.begin(), w.sings.end(), [](auto& s) { return s.kind == SingKind::Intersection; }) == 7);
    CHECK(w.initialComponents == std::vector<std::string>{"B", "A", "A", "B"});
    CHECK(parse_wire(serialize_wire(w)) == w);

    auto t = parse_wire("strands 1; seq: 1");
    CHECK(t.n == 1);
    CHECK(t.sings.empty());
    CHECK(t.braids.size() == 1);
    CHECK(parse_wire(serialize_wire(t)) == t);

    // inferred components agree with the declared partition
    auto bare = parse_wire("strands 4\nseq: ( 1, T(2), s1' s3', T(2), 1, I(1..2) )");
    CHECK(bare.initialComponents == std::vector<std::string>{"C1", "C2", "C2", "C1"});
}

TEST_CASE("parse errors") {
    try {
        parse_wire("strands 2\nseq: 1, T(3), 1");
        FAIL("expected a range error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("out of range") != std::string::npos);
        CHECK(e.location() == "2:9");
    }
    try {
        parse_wire("strands 2\nseq: 1, Q(1), 1");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == "ParseError");
        CHECK(e.location().rfind("2:", 0) == 0);
    }
    CHECK_THROWS_AS(parse_wire("seq: 1"), Error);
    CHECK_THROWS_AS(parse_wire("strands 2\ncomponents A=1\nseq: 1"), Error);
}

TEST_CASE("strand tracking") {
    auto tr = strand_components(fig());
    // before each tangency the two tangent strands share a label
    CHECK(tr.labels[0][1] == "A");
    CHECK(tr.labels[0][2] == "A");
    CHECK(tr.labels[1][1] == "B");
    CHECK(tr.labels[1][2] == "B");
    CHECK(tr.strand[1][1] + tr.strand[1][2] == 5);  // initial strands 1 and 4

    auto ok = parse_wire("strands 2\ncomponents A=1,2\nseq: 1, T(1), 1");
    CHECK(validate(ok).ok());
    CHECK_THROWS_WITH_AS(strand_components(parse_wire("strands 2\ncomponents A=1 B=2\nseq: 1, T(1), 1")),
                         doctest::Contains("tangency"), Error);
}

TEST_CASE("validate structure") {
    auto twoTangencies = parse_wire("strands 2\ncomponents A=1,2\nseq: 1, T(1), 1, T(1), 1");
    CHECK(has_issue(validate(twoTangencies), "tangencies"));
    auto none = parse_wire("strands 2\ncomponents A=1,2\nseq: 1, I(1..2), 1");
    CHECK(has_issue(validate(none), "tangencies"));
    auto cycle = parse_wire("strands 3\ncomponents A=1,2,3\nseq: 1, T(1), 1, T(2), s1, T(2), 1");
    CHECK_FALSE(validate(cycle).ok());
    CHECK(validate(fig()).ok());
}

TEST_CASE("validate against the two-cusp germ") {
    auto germ = twocusp();
    auto w = fig();
    auto bad = validate(w, germ);
    CHECK_FALSE(bad.ok());
    CHECK(has_issue(bad, "weight mismatch"));
    CHECK(validate(pad_free_points(w, "B", 1), germ).ok());
    CHECK_FALSE(validate(pad_free_points(w, "A", 1), germ).ok());
    CHECK_FALSE(validate(pad_free_points(w, "B", 2), germ).ok());
    auto three = parse_wire("strands 3\nseq: 1, I(1..3), 1");
    CHECK(has_issue(validate(three, germ), "strand count"));
}

TEST_CASE("incidence") {
    auto two = parse_wire("strands 2\ncomponents A=1 B=2\nseq: 1, I(1..2), 1");
    auto m = incidence(two);
    CHECK(m.columns == std::vector<std::vector<int>>{{1, 1}});

    auto f = pad_free_points(fig(), "B", 1);
    auto inc = incidence(f);
    CHECK(inc.columns.size() == 8);
    CHECK(row_sums_for(inc, {"A", "B"}) == std::vector<int>{8, 8});
    int cross = 0, selfA = 0, selfB = 0;
    int a = std::find(inc.rows.begin(), inc.rows.end(), "A") - inc.rows.begin();
    int b = 1 - a;
    for (size_t j = 0; j < inc.columns.size(); ++j) {
        cross += inc.entry(a, j) * inc.entry(b, j);
        selfA += inc.entry(a, j) * (inc.entry(a, j) - 1) / 2;
        selfB += inc.entry(b, j) * (inc.entry(b, j) - 1) / 2;
    }
    CHECK(cross == 7);
    CHECK(selfA == 1);
    CHECK(selfB == 1);

    std::mt19937 rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        auto w = random_diagram(rng);
        auto got = incidence(w);
        auto want = oracle_columns(w);
        REQUIRE(got.columns.size() == want.size());
        for (size_t j = 0; j < want.size(); ++j)
            for (size_t i = 0; i < got.rows.size(); ++i) {
                auto it = want[j].find(got.rows[i]);
                CHECK(got.entry(i, j) == (it == want[j].end() ? 0 : it->second));
            }
        // inserting a cancelling pair anywhere changes nothing
        if (w.n >= 2) {
            auto v = w;
            size_t k = rng() % v.braids.size();
            int i = 1 + rng() % (v.n - 1);
            v.braids[k].letters.insert(v.braids[k].letters.begin(), {{i, 1}, {i, -1}});
            CHECK(incidence(v) == got);
            CHECK(braid_equal(boundary_braid(v), boundary_braid(w)));
        }
    }
}

TEST_CASE("pushoff calibration") {
    CHECK(braid_equal(boundary_braid(parse_wire("strands 3\nseq: s1 s2'")), BraidWord(3)));
    auto t = parse_wire("strands 2\ncomponents A=1,2\nseq: 1, T(1), 1");
    CHECK(braid_equal(boundary_braid(t), parse_braid("s1", 2)));
    auto d = parse_wire("strands 2\nseq: 1, I(1..2), 1");
    CHECK(braid_equal(boundary_braid(d), parse_braid("s1 s1", 2)));
    auto triple = parse_wire("strands 3\nseq: 1, I(1..3), 1");
    CHECK(braid_equal(boundary_braid(triple), half_twist(1, 3, 3) * half_twist(1, 3, 3)));
    auto free = parse_wire("strands 1\nseq: 1, F(1), 1");
    CHECK(boundary_braid(free).empty());
}

TEST_CASE("exponent-sum law") {
    std::mt19937 rng(103);
    for (int trial = 0; trial < 200; ++trial) {
        auto w = random_diagram(rng);
        int expect = 0;
        for (auto& s : w.sings) {
            if (s.kind == SingKind::Tangency) expect += 1;
            if (s.kind == SingKind::Intersection) expect += (s.hi - s.lo + 1) * (s.hi - s.lo);
        }
        CHECK(letter_sum(boundary_braid(w)) == expect);
    }
}

TEST_CASE("vanishing data") {
    auto w = parse_wire("strands 3\nseq: 1, I(1..2), 1, I(2..3), 1");
    auto f = vanishing_data(w);
    REQUIRE(f.items.size() == 2);
    CHECK(item_canonical(f.items[0]) == FreeWord({1, 2}));
    // x2^-1 x1 x2 x3, rotated to start at x1
    CHECK(item_canonical(f.items[1]) == FreeWord({1, 2, 3, -2}));

    auto v = vanishing_data(fig());
    CHECK(v.items.size() == 9);
    CHECK(std::count_if(v.items.begin(), v.items.end(), [](auto& it) { return std::holds_alternative<HoleArc>(it); }) == 2);
    CHECK(vanishing_data(pad_free_points(fig(), "B", 1)).items.size() == 10);

    // the first item never sees a conjugator beyond its own braid
    std::mt19937 rng(107);
    for (int trial = 0; trial < 50; ++trial) {
        auto r = random_diagram(rng);
        if (r.sings.empty()) continue;
        auto first = vanishing_data(r).items.front();
        auto b0 = r.braids.front();
        const auto& s = r.sings.front();
        FreeWord convex;
        for (int p = s.lo; p <= s.hi; ++p) convex = convex * FreeWord::gen(p);
        CHECK(item_canonical(first) == cyclic_canonical(artin_act(b0.inverse(), convex)));
    }
}

TEST_CASE("wiring from vanishing") {
    Factorization single{3, {HoleCurve{3, BraidWord(3), 2, 0, {}}}};
    auto w = wiring_from_vanishing(single, {"A", "B", "C"});
    REQUIRE(w.sings.size() == 1);
    CHECK(w.sings[0] == Singularity{SingKind::FreePoint, 2, 2});

    auto figw = fig();
    auto v = vanishing_data(figw);
    auto back = wiring_from_vanishing(v, figw.initialComponents);
    CHECK(same_factorization(vanishing_data(back), v));
    CHECK(braid_equal(boundary_braid(back), boundary_braid(figw)));
    CHECK(incidence(back) == incidence(figw));

    std::mt19937 rng(109);
    for (int trial = 0; trial < 200; ++trial) {
        auto r = random_diagram(rng);
        auto f = vanishing_data(r);
        auto d = wiring_from_vanishing(f, r.initialComponents);
        CHECK(same_factorization(vanishing_data(d), f));
        CHECK(braid_equal(boundary_braid(d), boundary_braid(r)));
        CHECK(incidence(d) == incidence(r));
        CHECK(validate(d).ok() == validate(r).ok());
    }
}

TEST_CASE("scott") {
    auto smooth = scott(parse_germ(data("smooth.germ")));
    CHECK(smooth.n == 1);
    CHECK(smooth.sings == std::vector<Singularity>{{SingKind::FreePoint, 1, 1}});

    auto pencil = scott(parse_germ(data("pencil.germ")));
    CHECK(pencil.n == 3);
    REQUIRE(pencil.sings.size() == 4);
    CHECK(pencil.sings[0] == Singularity{SingKind::Intersection, 1, 3});
    for (int k = 1; k < 4; ++k) CHECK(pencil.sings[k].kind == SingKind::FreePoint);
    CHECK(pencil.tangency_count() == 0);
    CHECK(validate(pencil, germ_from_cluster(parse_germ(data("pencil.germ")))).ok());

    auto germ = twocusp();
    auto s = scott(germ);
    CHECK(s.n == 4);
    CHECK(s.tangency_count() == 2);
    for (auto& b : s.braids) CHECK(b.empty());
    auto inc = incidence(s);
    CHECK(row_sums_for(inc, {"A", "B"}) == std::vector<int>{8, 8});
    CHECK(validate(s, germ).ok());
    CHECK(parse_wire(serialize_wire(s)) == s);
}

TEST_CASE("scott validates on generated clusters") {
    std::mt19937 rng(113);
    int done = 0;
    for (int trial = 0; trial < 60; ++trial) {
        // random free trees of multiplicity one, built directly as a cluster
        Cluster c;
        int nb = 1 + rng() % 3, np = 1 + rng() % 4;
        for (int b = 0; b < nb; ++b) c.branches.push_back("b" + std::to_string(b));
        std::vector<int> parent(np, -1);
        for (int p = 1; p < np; ++p) parent[p] = rng() % p;
        for (int p = 0; p < np; ++p) {
            c.points.push_back({"p" + std::to_string(p), parent[p] < 0 ? "" : "p" + std::to_string(parent[p]), {}});
            c.mults["p" + std::to_string(p)].assign(nb, 0);
        }
        for (int b = 0; b < nb; ++b)
            for (int u = rng() % np; u >= 0; u = parent[u]) c.mults["p" + std::to_string(u)][b] = 1;
        auto germ = germ_from_cluster(c);
        try {
            auto s = scott(germ);
            CHECK(validate(s, germ).ok());
            ++done;
        } catch (const Error& e) {
            CHECK(e.code() == "ScottLayoutUnavailable");
        }
    }
    CHECK(done > 30);
}

TEST_CASE("combine") {
    auto one = parse_wire("strands 1\ncomponents A=1\nseq: 1, F(1), 1");
    auto other = parse_wire("strands 1\ncomponents B=1\nseq: 1, F(1), 1");
    auto c = combine(one, other);
    CHECK(c.n == 2);
    CHECK(c.sings.front() == Singularity{SingKind::Intersection, 1, 2});
    CHECK(incidence(c).columns.size() == 3);

    auto two = parse_wire("strands 2\ncomponents A=1,2\nseq: 1, T(1), 1");
    auto c2 = combine(two, other);
    auto inc = incidence(c2);
    CHECK(std::count_if(c2.sings.begin(), c2.sings.end(), [](auto& s) { return s.kind == SingKind::Intersection; }) == 2);
    CHECK(row_sums_for(inc, {"A", "B"}) == std::vector<int>{2, 1 + 2});

    auto s = scott(twocusp());
    auto pencil = scott(parse_germ(data("pencil.germ")));
    auto big = combine(pencil, s);
    CHECK(validate(big).ok());
    auto before = incidence(s), beforeP = incidence(pencil), after = incidence(big);
    CHECK(row_sums_for(after, {"A", "B"}) == std::vector<int>{8 + 2 * 3, 8 + 2 * 3});
    CHECK(row_sums_for(after, {"L1", "L2", "L3"}) == std::vector<int>{2 + 4, 2 + 4, 2 + 4});
    // the crossing points come first, then the lower diagram, then the upper one
    size_t cross = 3 * 4, nb = before.columns.size();
    auto block = [&](size_t from, size_t count, const IncidenceMatrix& ref) {
        for (size_t j = 0; j < count; ++j)
            for (size_t i = 0; i < ref.rows.size(); ++i) {
                size_t r = std::find(after.rows.begin(), after.rows.end(), ref.rows[i]) - after.rows.begin();
                CHECK(after.entry(r, from + j) == ref.entry(i, j));
            }
    };
    REQUIRE(after.columns.size() == cross + nb + beforeP.columns.size());
    block(cross, nb, before);
    block(cross + nb, beforeP.columns.size(), beforeP);
    for (size_t j = 0; j < cross; ++j) {
        int sum = 0;
        for (size_t i = 0; i < after.rows.size(); ++i) sum += after.entry(i, j);
        CHECK(sum == 2);
    }
    // dropping one side turns the crossings into free points on the other
    auto lower = incidence(subarrangement(big, {"A", "B"}));
    CHECK(lower.columns.size() == cross + nb);
    CHECK(row_sums_for(lower, {"A", "B"}) == row_sums_for(after, {"A", "B"}));
    CHECK_THROWS_AS(combine(s, s), Error);
}

TEST_CASE("subarrangement") {
    auto w = fig();
    CHECK(subarrangement(w, {"A", "B"}) == w);
    auto lines = parse_wire("strands 2\ncomponents A=1 B=2\nseq: 1, I(1..2), 1");
    auto one = subarrangement(lines, {"A"});
    CHECK(one.n == 1);
    CHECK(one.sings == std::vector<Singularity>{{SingKind::FreePoint, 1, 1}});
    auto a = subarrangement(w, {"A"});
    CHECK(a.n == 2);
    CHECK(a.tangency_count() == 1);
    CHECK(validate(a).ok());
    CHECK_THROWS_AS(subarrangement(w, {"Z"}), Error);
    CHECK_THROWS_AS(subarrangement(w, {}), Error);

    std::mt19937 rng(127);
    for (int trial = 0; trial < 100; ++trial) {
        auto r = random_diagram(rng);
        auto comps = r.components();
        std::set<std::string> keep;
        for (auto& c : comps)
            if (rng() % 2) keep.insert(c);
        if (keep.empty()) keep.insert(*comps.begin());
        auto sub = subarrangement(r, keep);
        auto full = incidence(r);
        std::vector<std::map<std::string, int>> want;
        for (auto& col : full.columns) {
            std::map<std::string, int> m;
            for (size_t i = 0; i < full.rows.size(); ++i)
                if (keep.count(full.rows[i]) && col[i]) m[full.rows[i]] = col[i];
            if (!m.empty()) want.push_back(m);
        }
        auto got = incidence(sub);
        REQUIRE(got.columns.size() == want.size());
        for (size_t j = 0; j < want.size(); ++j)
            for (size_t i = 0; i < got.rows.size(); ++i) {
                auto it = want[j].find(got.rows[i]);
                CHECK(got.entry(i, j) == (it == want[j].end() ? 0 : it->second));
            }
        CHECK(validate(sub).ok() == true);
    }
}

TEST_CASE("inside out") {
    EnclosureData d;
    d.holes = {"1", "2", "3", "4"};
    d.outer = "o";
    d.cycles = {{"1", "2"}, {"3", "4"}};
    auto r = inside_out(d, "1");
    CHECK(r.outer == "1");
    CHECK(r.holes == std::vector<std::string>{"o", "2", "3", "4"});
    CHECK(r.cycles[0] == std::set<std::string>{"o", "3", "4"});
    CHECK(r.cycles[1] == std::set<std::string>{"3", "4"});
    auto back = inside_out(r, "o");
    CHECK(back.cycles == d.cycles);
    CHECK(back.holes == d.holes);
    CHECK(back.outer == d.outer);

    d.arcs = {{"1", "2"}};
    CHECK_THROWS_WITH_AS(inside_out(d, "1"), doctest::Contains("arc"), Error);
    d.arcs.clear();
    d.multiplicity["1"] = 2;
    CHECK_THROWS_AS(inside_out(d, "1"), Error);

    auto e = enclosure_data(pad_free_points(fig(), "B", 1));
    CHECK(e.cycles.size() == 8);
    CHECK(e.arcs.size() == 2);
    CHECK(e.multiplicity.at("1") == 2);
}
