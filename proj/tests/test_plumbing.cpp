#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "common.hpp"
#include "sandwich/errors.hpp"
#include "sandwich/plumbing.hpp"

using namespace sandwich;

namespace {

PlumbingGraph graph(std::vector<std::pair<std::string, int>> vs, std::vector<std::pair<std::string, std::string>> es) {
    PlumbingGraph g;
    for (auto& [v, e] : vs) g.add_vertex(v, e);
    for (auto& [a, b] : es) g.add_edge(a, b);
    return g;
}

PlumbingGraph e3() { return graph({{"E", -3}}, {}); }
Augmentation two_on(const std::string& v) { return {{{"c1", v}, {"c2", v}}}; }

// Max Noether: C_i . C_k = sum over cluster points of mult_i * mult_k
int noether(const Cluster& c, size_t i, size_t k) {
    int s = 0;
    for (auto& [id, m] : c.mults) s += m[i] * m[k];
    return s;
}

// multiplicities of a branch along its chain, deepest first
std::vector<int> chain_seq(const Cluster& c, size_t b) {
    std::vector<int> s;
    for (auto it = c.points.rbegin(); it != c.points.rend(); ++it)
        if (c.mults.at(it->id)[b] > 0) s.push_back(c.mults.at(it->id)[b]);
    return s;
}

void check_roundtrip(const Cluster& c) {
    DecoratedGerm g = germ_from_cluster(c);
    REQUIRE(g.branches.size() == c.branches.size());
    for (size_t b = 0; b < c.branches.size(); ++b) {
        auto seq = chain_seq(c, b);
        CHECK(g.branches[b].name == c.branches[b]);
        CHECK(g.branches[b].multiplicitySeq == seq);
        CHECK(g.branches[b].weight == std::accumulate(seq.begin(), seq.end(), 0));
        CHECK(g.branches[b].originMultiplicity == c.mults.at(c.points.front().id)[b]);
        for (size_t k = 0; k < c.branches.size(); ++k)
            if (k != b) CHECK(g.pairwise[b][k] == noether(c, b, k));
    }
}

// free points only, all multiplicities 1: random tree, each branch walks a root path and ends at an own leaf
Cluster random_cluster(std::mt19937& rng) {
    Cluster c;
    int nb = 1 + rng() % 3;
    int np = 1 + rng() % 5;
    for (int b = 0; b < nb; ++b) c.branches.push_back("b" + std::to_string(b));
    std::vector<int> parent(np, -1);
    for (int p = 1; p < np; ++p) parent[p] = rng() % p;
    for (int p = 0; p < np; ++p)
        c.points.push_back({"p" + std::to_string(p), parent[p] < 0 ? "" : "p" + std::to_string(parent[p]), {}});
    for (auto& p : c.points) c.mults[p.id].assign(nb, 0);
    for (int b = 0; b < nb; ++b) {
        int end = rng() % np;
        for (int u = end; u >= 0; u = parent[u]) c.mults["p" + std::to_string(u)][b] = 1;
        if (rng() % 2) continue;
        std::string leaf = "f" + std::to_string(b);
        c.points.push_back({leaf, "p" + std::to_string(end), {}});
        c.mults[leaf].assign(nb, 0);
        c.mults[leaf][b] = 1;
    }
    return c;
}

// y^p = x^q with p < q coprime, blocks of equal multiplicity from the Euclidean algorithm
Cluster cusp_cluster(int p, int q) {
    std::vector<std::pair<int, int>> blocks;  // (count, multiplicity)
    for (int a = q, b = p; b > 0;) {
        blocks.push_back({a / b, b});
        int r = a % b;
        a = b;
        b = r;
    }
    Cluster c;
    c.branches = {"C"};
    std::string prev, lastOfPrevBlock, lastOfBlockBefore;
    int k = 0;
    for (size_t j = 0; j < blocks.size(); ++j) {
        for (int t = 0; t < blocks[j].first; ++t) {
            std::string id = "q" + std::to_string(k++);
            ClusterPoint pt{id, prev, {}};
            if (j > 0 && t > 0) pt.prox.push_back(lastOfPrevBlock);
            if (j > 1 && t == 0) pt.prox.push_back(lastOfBlockBefore);
            c.points.push_back(pt);
            c.mults[id] = {blocks[j].second};
            prev = id;
        }
        lastOfBlockBefore = lastOfPrevBlock;
        lastOfPrevBlock = prev;
    }
    return c;
}

}  // namespace

TEST_CASE("validate_graph") {
    CHECK(validate_graph(graph({{"E", -3}}, {})).ok());
    auto r = validate_graph(graph({{"a", -1}, {"b", -2}}, {{"a", "b"}}));
    REQUIRE(r.issues.size() == 1);
    CHECK(r.issues[0].find("euler -1 present") != std::string::npos);
    auto d = validate_graph(graph({{"a", -2}, {"b", -2}}, {}));
    CHECK(std::find(d.issues.begin(), d.issues.end(), "not a tree") != d.issues.end());
}

TEST_CASE("blow_down on {E:-3} with two arrows") {
    auto t = blow_down(e3(), two_on("E"));
    REQUIRE(t.steps.size() == 3);
    CHECK(t.steps[0].curve == "@c1");
    CHECK(t.steps[1].curve == "@c2");
    CHECK(t.steps[2].curve == "E");
    CHECK(t.w[0] == std::vector<int>{1, 0, 1});
    CHECK(t.w[1] == std::vector<int>{0, 1, 1});
    CHECK(t.finalPairwise[0][1] == 1);
    CHECK(t.lastVertex == "E");
    // the first contraction raises E to -2: snapshot records only the arrow's neighbours
    CHECK(t.steps[0].snapshot.at("E") == 1);
    CHECK(t.steps[0].snapshot.at("c1") == 1);
}

TEST_CASE("blow_down on {E:-2} with one arrow") {
    auto g = germ_from_augmentation(graph({{"E", -2}}, {}), {{{"c", "E"}}});
    REQUIRE(g.branches.size() == 1);
    CHECK(g.branches[0].weight == 2);
    CHECK(g.branches[0].originMultiplicity == 1);
    CHECK(g.branches[0].delta == 0);
}

TEST_CASE("blow_down NotSandwiched") {
    try {
        blow_down(e3(), {{{"c", "E"}}});
        FAIL("expected NotSandwiched");
    } catch (const Error& e) {
        CHECK(e.code() == "NotSandwiched");
    }
}

TEST_CASE("germ of two transverse lines") {
    auto g = germ_from_augmentation(e3(), two_on("E"));
    CHECK(g.rootVertex == "E");
    for (auto& b : g.branches) {
        CHECK(b.weight == 2);
        CHECK(b.originMultiplicity == 1);
        CHECK(b.delta == 0);
        CHECK(cap_framing(b) == -2);
        CHECK(b.sitsOn == "E");
    }
    CHECK(g.pairwise[0][1] == 1);
    CHECK(g.pairwise[1][0] == 1);
}

TEST_CASE("two-cusp cluster") {
    Cluster c = parse_germ(data("twocusp.germ"));
    check_roundtrip(c);
    auto g = germ_from_cluster(c);
    CHECK(g.branches[0].weight == 8);
    CHECK(g.branches[1].weight == 8);
    CHECK(g.pairwise[0][1] == 7);
    CHECK(g.branches[0].delta == 1);
    CHECK(g.branches[1].delta == 1);
    CHECK(g.branches[0].originMultiplicity == 2);
    CHECK(g.branches[1].originMultiplicity == 2);
    CHECK(cap_framing(g.branches[0]) == -10);
}

TEST_CASE("delta and cap framing") {
    CHECK(delta_of({1, 1}) == 0);
    CHECK(delta_of({2, 1, 1, 1, 1, 1, 1}) == 1);
    CHECK(delta_of({3, 2, 1}) == 4);
    Branch b;
    b.weight = 1;
    CHECK(cap_framing(b) == -1);
    b.weight = 8;
    b.delta = 1;
    CHECK(cap_framing(b) == -10);
    b.weight = 2;
    b.delta = 0;
    CHECK(cap_framing(b) == -2);
}

TEST_CASE("extend_chains") {
    auto [g, aug] = graph_from_cluster(parse_germ(data("twocusp.germ")));
    auto [g2, aug2] = extend_chains(g, aug, {3, 4});
    auto germ = germ_from_augmentation(g2, aug2);
    CHECK(germ.branches[0].weight == 11);
    CHECK(germ.branches[1].weight == 12);

    auto [g0, a0] = extend_chains(g, aug, {0, 0});
    CHECK(g0 == g);
    CHECK(a0 == aug);

    auto [g3, a3] = extend_chains(e3(), two_on("E"), {3, 0});
    auto e = germ_from_augmentation(g3, a3);
    CHECK(e.branches[0].weight == 5);
    CHECK(e.branches[1].weight == 2);
    CHECK_THROWS_AS(extend_chains(e3(), two_on("E"), {1}), Error);
}

TEST_CASE("extend_chains keeps everything but the weights") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        Cluster c = random_cluster(rng);
        auto [g, aug] = graph_from_cluster(c);
        std::vector<int> len;
        for (size_t k = 0; k < aug.arrows.size(); ++k) len.push_back(rng() % 4);
        auto before = germ_from_augmentation(g, aug);
        auto [g2, a2] = extend_chains(g, aug, len);
        auto after = germ_from_augmentation(g2, a2);
        for (size_t b = 0; b < len.size(); ++b) {
            CHECK(after.branches[b].weight == before.branches[b].weight + len[b]);
            CHECK(after.branches[b].delta == before.branches[b].delta);
            CHECK(after.branches[b].originMultiplicity == before.branches[b].originMultiplicity);
        }
        CHECK(after.pairwise == before.pairwise);
    }
}

TEST_CASE("graph_from_cluster roundtrips") {
    check_roundtrip(parse_germ(data("pencil.germ")));
    auto pencil = germ_from_cluster(parse_germ(data("pencil.germ")));
    for (auto& b : pencil.branches) CHECK(b.weight == 2);

    Cluster one = parse_germ(data("smooth.germ"));
    auto [g, aug] = graph_from_cluster(one);
    CHECK(g.euler.size() == 1);
    CHECK(aug.arrows.size() == 1);
    auto s = germ_from_augmentation(g, aug);
    CHECK(s.branches[0].weight == 1);

    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) check_roundtrip(random_cluster(rng));
}

TEST_CASE("cusp clusters") {
    for (int p = 2; p <= 7; ++p)
        for (int q = p + 1; q <= 13; ++q) {
            if (std::gcd(p, q) != 1) continue;
            Cluster c = cusp_cluster(p, q);
            CAPTURE(p);
            CAPTURE(q);
            check_roundtrip(c);
            auto g = germ_from_cluster(c);
            CHECK(g.branches[0].delta == (p - 1) * (q - 1) / 2);
            CHECK(g.branches[0].originMultiplicity == p);
        }
}

TEST_CASE("cluster errors") {
    Cluster c = parse_germ(data("twocusp.germ"));
    c.weights["A"] = 9;
    CHECK_THROWS_WITH_AS(graph_from_cluster(c), doctest::Contains("weight"), Error);
    Cluster p = parse_germ(data("twocusp.germ"));
    p.mults["q1"][0] = 0;  // A skips q1 but reaches q2
    CHECK_THROWS_AS(graph_from_cluster(p), Error);
    Cluster q = cusp_cluster(2, 3);
    q.mults["q1"][0] = 2;  // exceeds the root sum
    CHECK_THROWS_AS(graph_from_cluster(q), Error);
    Cluster r = cusp_cluster(3, 4);
    r.points[1].prox.clear();
    r.points[2].prox.clear();
    CHECK_THROWS_WITH_AS(graph_from_cluster(r), doctest::Contains("proximity"), Error);
}

TEST_CASE("Noether consistency and determinism under random tie-breaking") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        Cluster c = random_cluster(rng);
        auto [g, aug] = graph_from_cluster(c);
        auto t = blow_down(g, aug);
        for (size_t a = 0; a < t.curvettas.size(); ++a)
            for (size_t b = 0; b < t.curvettas.size(); ++b) {
                if (a == b) continue;
                int s = 0;
                for (size_t j = 0; j < t.steps.size(); ++j) s += t.w[a][j] * t.w[b][j];
                CHECK(s == t.finalPairwise[a][b]);
            }
        auto ref = germ_from_trace(t, aug);
        std::mt19937 pick(trial);
        auto g2 = germ_from_augmentation(g, aug, [&](const std::vector<std::string>& v) { return pick() % v.size(); });
        CHECK(g2.branches == ref.branches);
        CHECK(g2.pairwise == ref.pairwise);
        CHECK(g2.rootVertex == ref.rootVertex);
    }
}

TEST_CASE("cap framing bounds") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = germ_from_cluster(random_cluster(rng));
        for (auto& b : g.branches) {
            CHECK(cap_framing(b) <= -1);
            bool small = std::all_of(b.multiplicitySeq.begin(), b.multiplicitySeq.end(), [](int m) { return m <= 1; });
            CHECK((cap_framing(b) == -b.weight) == small);
        }
    }
}

namespace {

// every euler-preserving bijection that preserves adjacency
size_t brute_automorphisms(const PlumbingGraph& g) {
    std::vector<std::string> vs;
    for (auto& [v, e] : g.euler) vs.push_back(v);
    std::set<std::pair<std::string, std::string>> E(g.edges.begin(), g.edges.end());
    std::vector<size_t> p(vs.size());
    std::iota(p.begin(), p.end(), 0);
    size_t count = 0;
    do {
        bool ok = true;
        for (size_t i = 0; i < vs.size() && ok; ++i) ok = g.euler.at(vs[i]) == g.euler.at(vs[p[i]]);
        std::map<std::string, std::string> m;
        for (size_t i = 0; i < vs.size(); ++i) m[vs[i]] = vs[p[i]];
        for (auto& [a, b] : g.edges) {
            if (!ok) break;
            auto x = std::min(m[a], m[b]), y = std::max(m[a], m[b]);
            ok = E.count({x, y}) > 0;
        }
        count += ok;
    } while (std::next_permutation(p.begin(), p.end()));
    return count;
}

PlumbingGraph random_tree(std::mt19937& rng, int n) {
    PlumbingGraph g;
    for (int v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v), -2 - static_cast<int>(rng() % 2));
    for (int v = 1; v < n; ++v) g.add_edge("v" + std::to_string(v), "v" + std::to_string(rng() % v));
    return g;
}

}  // namespace

TEST_CASE("automorphisms") {
    CHECK(automorphisms(graph({{"a", -2}, {"b", -3}}, {{"a", "b"}})).size() == 1);
    CHECK(automorphisms(graph({{"a", -2}, {"b", -2}}, {{"a", "b"}})).size() == 2);
    auto star = graph({{"c", -4}, {"x1", -2}, {"x2", -2}, {"y1", -2}, {"y2", -2}, {"z1", -2}, {"z2", -2}},
                      {{"c", "x1"}, {"x1", "x2"}, {"c", "y1"}, {"y1", "y2"}, {"c", "z1"}, {"z1", "z2"}});
    CHECK(automorphisms(star).size() == 6);
    CHECK(brute_automorphisms(star) == 6);
    CHECK(automorphism_count(star) == 6);

    std::mt19937 rng(13);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = random_tree(rng, 2 + trial % 7);
        auto auts = automorphisms(g);
        CHECK(auts.size() == brute_automorphisms(g));
        CHECK(auts.size() == automorphism_count(g));
        VertexMap id;
        for (auto& [v, e] : g.euler) id[v] = v;
        CHECK(std::find(auts.begin(), auts.end(), id) != auts.end());
        std::set<VertexMap> all(auts.begin(), auts.end());
        for (auto& f : auts)
            for (auto& h : auts) {
                VertexMap fh;
                for (auto& [v, w] : h) fh[v] = f.at(w);
                CHECK(all.count(fh));
            }
    }
}

TEST_CASE("spinal binding") {
    auto lines = germ_from_augmentation(e3(), two_on("E"));
    CHECK(spinal_binding(lines) == std::vector<std::pair<std::string, int>>{{"E", 1}, {"E", 1}, {"E", 1}});
    auto cusps = germ_from_cluster(parse_germ(data("twocusp.germ")));
    CHECK(spinal_binding(cusps) == std::vector<std::pair<std::string, int>>{{"O", 1}, {"a2", 2}, {"b2", 2}});
    auto smooth = germ_from_cluster(parse_germ(data("smooth.germ")));
    CHECK(spinal_binding(smooth) == std::vector<std::pair<std::string, int>>{{"O", 1}, {"O", 1}});
}

TEST_CASE("build_unexpected") {
    auto [tg, ta] = graph_from_cluster(parse_germ(data("twocusp.germ")));
    auto u4 = build_unexpected(tg, ta, 4, 30);
    CHECK(u4.graph.euler.at("v*") == -15);
    CHECK(u4.lines.size() == 13);

    auto u1 = build_unexpected(e3(), two_on("E"), 1, 10);
    CHECK(u1.graph.euler.at("v*") == -9);
    CHECK(u1.lines.size() == 7);
    CHECK_NOTHROW(blow_down(u1.graph, u1.aug));
    for (auto* u : {&u1, &u4}) {
        auto r = validate_graph(u->graph);
        CHECK(r.ok());
    }
    // the input graph survives as an induced subgraph
    for (auto& [v, e] : tg.euler) CHECK(u4.graph.euler.at(v) == e);
    for (auto& e : tg.edges) CHECK(std::find(u4.graph.edges.begin(), u4.graph.edges.end(), e) != u4.graph.edges.end());

    auto germ = germ_from_augmentation(u1.graph, u1.aug);
    CHECK(germ.rootVertex == "v*");
    int line = germ.index_of("line1"), c1 = germ.index_of("c1"), c2 = germ.index_of("c2");
    CHECK(germ.pairwise[line][germ.index_of("line2")] == 1);
    CHECK(germ.pairwise[line][c1] == 1);
    CHECK(germ.pairwise[c1][c2] == 2);
    CHECK_THROWS_AS(build_unexpected(e3(), {{{"c", "E"}}}, 1, 1), Error);
}

TEST_CASE(".plumb parse and serialize") {
    auto f = parse_plumb("vertex E -3  # centre\ncurvetta c1 on E\ncurvetta c2 on E\nchains c1=3,c2=0\n");
    CHECK(f.graph.euler.at("E") == -3);
    CHECK(f.aug.arrows.size() == 2);
    CHECK(f.chains == std::vector<std::pair<std::string, int>>{{"c1", 3}, {"c2", 0}});
    auto back = parse_plumb(serialize_plumb(f.graph, f.aug));
    CHECK(back.graph == f.graph);
    CHECK(back.aug == f.aug);
    try {
        parse_plumb("vertex E -3\nedge E F\n");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.location() == "2:8");
    }
    CHECK_THROWS_AS(parse_plumb("vertex E x\n"), ParseError);
    CHECK_THROWS_AS(parse_plumb("bogus\n"), ParseError);
}
