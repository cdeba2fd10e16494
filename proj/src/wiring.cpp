#include "sandwich/wiring.hpp"

#include <algorithm>
#include <numeric>
#include <regex>

#include "sandwich/errors.hpp"

namespace sandwich {

std::string Singularity::str() const {
    switch (kind) {
        case SingKind::Tangency: return "T(" + std::to_string(lo) + ")";
        case SingKind::Intersection: return "I(" + std::to_string(lo) + ".." + std::to_string(hi) + ")";
        case SingKind::FreePoint: return "F(" + std::to_string(lo) + ")";
    }
    return {};
}

std::set<std::string> WiringDiagram::components() const {
    return {initialComponents.begin(), initialComponents.end()};
}

int WiringDiagram::tangency_count() const {
    int t = 0;
    for (auto& s : sings) t += s.kind == SingKind::Tangency;
    return t;
}

WireBuilder::WireBuilder(int n, std::vector<std::string> components) {
    w_.n = n;
    w_.initialComponents = std::move(components);
    w_.braids.push_back(BraidWord(n));
}

WireBuilder& WireBuilder::braid(const BraidWord& b) {
    w_.braids.back() = b * w_.braids.back();
    return *this;
}

WireBuilder& WireBuilder::sing(Singularity s) {
    w_.sings.push_back(s);
    w_.braids.push_back(BraidWord(w_.n));
    return *this;
}

WiringDiagram WireBuilder::done() const { return w_; }

namespace {

struct Located {
    std::string text;
    size_t offset;
};

void location(const std::string& text, size_t offset, int& line, int& col) {
    line = 1;
    col = 1;
    for (size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
}

[[noreturn]] void fail_at(const std::string& text, size_t offset, const std::string& msg) {
    int line, col;
    location(text, offset, line, col);
    throw ParseError(msg, line, col);
}

Located trim(const std::string& s, size_t offset) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return {s.substr(a, b - a), offset + a};
}

std::vector<Located> split_located(const std::string& s, size_t offset, const std::string& seps) {
    std::vector<Located> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || seps.find(s[i]) != std::string::npos) {
            out.push_back(trim(s.substr(start, i - start), offset + start));
            start = i + 1;
        }
    }
    return out;
}

int parse_int(const std::string& text, const Located& tok) {
    if (tok.text.empty() || !std::all_of(tok.text.begin(), tok.text.end(), ::isdigit))
        fail_at(text, tok.offset, "expected a positive integer, got '" + tok.text + "'");
    return std::stoi(tok.text);
}

struct Tracker {
    std::vector<std::string> label;
    std::vector<int> strand;

    void apply(const BraidWord& b) {
        for (auto it = b.letters.rbegin(); it != b.letters.rend(); ++it) {
            std::swap(label[it->i - 1], label[it->i]);
            std::swap(strand[it->i - 1], strand[it->i]);
        }
    }
};

Tracker start(const WiringDiagram& w) {
    Tracker t{w.initialComponents, std::vector<int>(w.n)};
    std::iota(t.strand.begin(), t.strand.end(), 1);
    return t;
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n + 1) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[b] = a;
        return true;
    }
};

void check_positions(const WiringDiagram& w) {
    if (static_cast<int>(w.initialComponents.size()) != w.n)
        throw Error("RangeError", "component labels do not cover all strands");
    if (w.braids.size() != w.sings.size() + 1) throw Error("InvalidDiagram", "braids and singularities misaligned");
    for (auto& b : w.braids)
        if (b.n != w.n) throw Error("StrandMismatch", "braid with wrong strand count");
    for (auto& s : w.sings) {
        bool ok = s.lo >= 1 && s.hi <= w.n;
        if (s.kind == SingKind::Tangency) ok = ok && s.hi == s.lo + 1;
        if (s.kind == SingKind::Intersection) ok = ok && s.hi > s.lo;
        if (s.kind == SingKind::FreePoint) ok = ok && s.hi == s.lo;
        if (!ok) throw Error("RangeError", "singularity " + s.str() + " out of range");
    }
}

}  // namespace

WiringDiagram parse_wire(const std::string& raw) {
    std::string text = raw;
    for (size_t i = 0; i < text.size(); ++i)
        if (text[i] == '#')
            while (i < text.size() && text[i] != '\n') text[i++] = ' ';
    size_t seqAt = text.find("seq:");
    if (seqAt == std::string::npos) fail_at(text, text.size(), "missing 'seq:'");

    int n = 0;
    std::vector<std::string> comps;
    bool haveComps = false;
    for (auto& stmt : split_located(text.substr(0, seqAt), 0, "\n;")) {
        if (stmt.text.empty()) continue;
        auto toks = split_located(stmt.text, stmt.offset, " \t");
        toks.erase(std::remove_if(toks.begin(), toks.end(), [](const Located& l) { return l.text.empty(); }),
                   toks.end());
        if (toks[0].text == "strands") {
            if (toks.size() != 2) fail_at(text, stmt.offset, "usage: strands <n>");
            n = parse_int(text, toks[1]);
            if (n < 1) fail_at(text, toks[1].offset, "need at least one strand");
        } else if (toks[0].text == "components") {
            if (n < 1) fail_at(text, stmt.offset, "'components' must follow 'strands'");
            comps.assign(n, "");
            haveComps = true;
            for (size_t k = 1; k < toks.size(); ++k) {
                auto eq = toks[k].text.find('=');
                if (eq == std::string::npos || eq == 0) fail_at(text, toks[k].offset, "expected <label>=<pos,...>");
                std::string label = toks[k].text.substr(0, eq);
                for (auto& p : split_located(toks[k].text.substr(eq + 1), toks[k].offset + eq + 1, ",")) {
                    int pos = parse_int(text, p);
                    if (pos < 1 || pos > n) fail_at(text, p.offset, "position out of range");
                    if (!comps[pos - 1].empty()) fail_at(text, p.offset, "position assigned twice");
                    comps[pos - 1] = label;
                }
            }
            for (int p = 0; p < n; ++p)
                if (comps[p].empty()) fail_at(text, stmt.offset, "position " + std::to_string(p + 1) + " has no component");
        } else {
            fail_at(text, toks[0].offset, "unknown header '" + toks[0].text + "'");
        }
    }
    if (n < 1) fail_at(text, 0, "missing 'strands'");

    std::string body = text.substr(seqAt + 4);
    size_t bodyOff = seqAt + 4;
    {
        auto t = trim(body, bodyOff);
        if (!t.text.empty() && t.text.front() == '(') {
            if (t.text.back() != ')') fail_at(text, t.offset, "unbalanced parenthesis");
            body = t.text.substr(1, t.text.size() - 2);
            bodyOff = t.offset + 1;
        }
    }
    static const std::regex reT(R"(T\((\d+)\))"), reI(R"(I\((\d+)\.\.(\d+)\))"), reF(R"(F\((\d+)\))");
    WireBuilder b(n, comps.empty() ? std::vector<std::string>(n, "?") : comps);
    for (auto& item : split_located(body, bodyOff, ",")) {
        if (item.text.empty()) fail_at(text, item.offset, "empty item in seq");
        std::smatch m;
        auto num = [&](int k) { return std::stoi(m[k].str()); };
        if (std::regex_match(item.text, m, reT)) {
            int i = num(1);
            if (i < 1 || i >= n) fail_at(text, item.offset, "tangency position out of range");
            b.sing({SingKind::Tangency, i, i + 1});
        } else if (std::regex_match(item.text, m, reI)) {
            int i = num(1), j = num(2);
            if (i < 1 || j <= i || j > n) fail_at(text, item.offset, "intersection range out of bounds");
            b.sing({SingKind::Intersection, i, j});
        } else if (std::regex_match(item.text, m, reF)) {
            int i = num(1);
            if (i < 1 || i > n) fail_at(text, item.offset, "free point position out of range");
            b.sing({SingKind::FreePoint, i, i});
        } else {
            try {
                b.braid(parse_braid(item.text, n));
            } catch (const Error& e) {
                fail_at(text, item.offset, e.what());
            }
        }
    }
    WiringDiagram w = b.done();
    if (!haveComps) w.initialComponents = infer_components(w);
    return w;
}

std::string serialize_wire(const WiringDiagram& w) {
    std::string s = "strands " + std::to_string(w.n) + "\ncomponents";
    std::vector<std::string> order;
    for (auto& c : w.initialComponents)
        if (std::find(order.begin(), order.end(), c) == order.end()) order.push_back(c);
    for (auto& c : order) {
        s += " " + c + "=";
        bool first = true;
        for (int p = 1; p <= w.n; ++p)
            if (w.initialComponents[p - 1] == c) {
                s += (first ? "" : ",") + std::to_string(p);
                first = false;
            }
    }
    s += "\nseq: ";
    for (size_t k = 0; k < w.sings.size(); ++k) s += w.braids[k].str() + ", " + w.sings[k].str() + ", ";
    s += w.braids.back().str() + "\n";
    return s;
}

StrandTracking strand_components(const WiringDiagram& w) {
    check_positions(w);
    StrandTracking out;
    Tracker t = start(w);
    for (size_t k = 0; k < w.sings.size(); ++k) {
        t.apply(w.braids[k]);
        out.labels.push_back(t.label);
        out.strand.push_back(t.strand);
        const auto& s = w.sings[k];
        if (s.kind == SingKind::Tangency && t.label[s.lo - 1] != t.label[s.hi - 1])
            throw Error("TangencyComponentMismatch", "tangency " + s.str() + " (item " + std::to_string(k + 1) +
                                                         ") joins components " + t.label[s.lo - 1] + " and " +
                                                         t.label[s.hi - 1]);
    }
    t.apply(w.braids.back());
    out.labels.push_back(t.label);
    out.strand.push_back(t.strand);
    return out;
}

std::vector<std::string> infer_components(const WiringDiagram& w) {
    UnionFind uf(w.n);
    WiringDiagram plain = w;
    plain.initialComponents.assign(w.n, "?");
    check_positions(plain);
    Tracker t = start(plain);
    for (size_t k = 0; k < w.sings.size(); ++k) {
        t.apply(w.braids[k]);
        if (w.sings[k].kind == SingKind::Tangency) uf.unite(t.strand[w.sings[k].lo - 1], t.strand[w.sings[k].hi - 1]);
    }
    std::map<int, std::string> name;
    std::vector<std::string> out;
    for (int p = 1; p <= w.n; ++p) {
        int r = uf.find(p);
        if (!name.count(r)) name[r] = "C" + std::to_string(name.size() + 1);
        out.push_back(name[r]);
    }
    return out;
}

std::vector<int> IncidenceMatrix::row_sums() const {
    std::vector<int> s(rows.size(), 0);
    for (auto& c : columns)
        for (size_t i = 0; i < rows.size(); ++i) s[i] += c[i];
    return s;
}

IncidenceMatrix incidence(const WiringDiagram& w) {
    auto tr = strand_components(w);
    IncidenceMatrix M;
    auto comps = w.components();
    M.rows.assign(comps.begin(), comps.end());
    std::map<std::string, size_t> row;
    for (size_t i = 0; i < M.rows.size(); ++i) row[M.rows[i]] = i;
    for (size_t k = 0; k < w.sings.size(); ++k) {
        const auto& s = w.sings[k];
        if (s.kind == SingKind::Tangency) continue;
        std::vector<int> col(M.rows.size(), 0);
        for (int p = s.lo; p <= s.hi; ++p) ++col[row[tr.labels[k][p - 1]]];
        M.columns.push_back(col);
    }
    return M;
}

namespace {

void tree_checks(const WiringDiagram& w, const StrandTracking& tr, Report& r) {
    std::map<std::string, int> strands, tangencies;
    for (auto& c : w.initialComponents) ++strands[c];
    UnionFind uf(w.n);
    std::set<std::string> cyclic;
    for (size_t k = 0; k < w.sings.size(); ++k) {
        const auto& s = w.sings[k];
        if (s.kind != SingKind::Tangency) continue;
        const auto& c = tr.labels[k][s.lo - 1];
        ++tangencies[c];
        if (!uf.unite(tr.strand[k][s.lo - 1], tr.strand[k][s.hi - 1])) cyclic.insert(c);
    }
    for (auto& [c, d] : strands) {
        if (tangencies[c] != d - 1)
            r.add("component " + c + " has " + std::to_string(tangencies[c]) + " tangencies, expected d-1 = " +
                  std::to_string(d - 1));
        else if (cyclic.count(c))
            r.add("component " + c + " tangency graph is not a tree");
    }
}

void germ_checks(const IncidenceMatrix& M, const std::map<std::string, int>& strands, const DecoratedGerm& germ,
                 const std::vector<int>& rowOfBranch, Report& r) {
    auto sums = M.row_sums();
    const size_t B = germ.branches.size();
    for (size_t b = 0; b < B; ++b) {
        const auto& br = germ.branches[b];
        const auto& label = M.rows[rowOfBranch[b]];
        int d = strands.at(label);
        if (d != br.originMultiplicity)
            r.add("component " + label + " has " + std::to_string(d) + " strands but branch " + br.name +
                  " has d = " + std::to_string(br.originMultiplicity));
        if (sums[rowOfBranch[b]] != br.weight)
            r.add("weight mismatch for " + br.name + ": row sum " + std::to_string(sums[rowOfBranch[b]]) +
                  " vs weight " + std::to_string(br.weight));
        int self = 0;
        for (auto& c : M.columns) self += c[rowOfBranch[b]] * (c[rowOfBranch[b]] - 1) / 2;
        if (self != br.delta)
            r.add("self sum for " + br.name + " is " + std::to_string(self) + " but delta = " + std::to_string(br.delta));
        for (size_t o = b + 1; o < B; ++o) {
            int cross = 0;
            for (auto& c : M.columns) cross += c[rowOfBranch[b]] * c[rowOfBranch[o]];
            if (cross != germ.pairwise[b][o])
                r.add("cross sum for " + br.name + "," + germ.branches[o].name + " is " + std::to_string(cross) +
                      " but intersection = " + std::to_string(germ.pairwise[b][o]));
        }
    }
}

}  // namespace

Report validate(const WiringDiagram& w) {
    Report r;
    StrandTracking tr;
    try {
        tr = strand_components(w);
    } catch (const Error& e) {
        r.add(e.what());
        return r;
    }
    tree_checks(w, tr, r);
    return r;
}

Report validate(const WiringDiagram& w, const DecoratedGerm& germ) {
    Report r = validate(w);
    if (!r.ok()) return r;
    int total = 0;
    for (auto& b : germ.branches) total += b.originMultiplicity;
    if (total != w.n) {
        r.add("strand count " + std::to_string(w.n) + " != sum of d_i " + std::to_string(total));
        return r;
    }
    auto M = incidence(w);
    if (M.rows.size() != germ.branches.size()) {
        r.add("component count " + std::to_string(M.rows.size()) + " != branch count " +
              std::to_string(germ.branches.size()));
        return r;
    }
    std::map<std::string, int> strands;
    for (auto& c : w.initialComponents) ++strands[c];
    std::vector<int> rowOfBranch;
    bool byName = true;
    for (auto& b : germ.branches) {
        auto it = std::find(M.rows.begin(), M.rows.end(), b.name);
        if (it == M.rows.end()) byName = false;
        rowOfBranch.push_back(static_cast<int>(it - M.rows.begin()));
    }
    if (byName) {
        germ_checks(M, strands, germ, rowOfBranch, r);
        return r;
    }
    // labels differ from branch names: accept any bijection that passes
    std::vector<int> perm(M.rows.size());
    std::iota(perm.begin(), perm.end(), 0);
    Report first;
    bool haveFirst = false;
    do {
        Report attempt;
        germ_checks(M, strands, germ, perm, attempt);
        if (attempt.ok()) return r;
        if (!haveFirst) {
            first = attempt;
            haveFirst = true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    r.add("no bijection between components and branches passes");
    for (auto& s : first.issues) r.add(s);
    return r;
}

BraidWord lower_semicircle(const Singularity& s, int n) {
    if (s.kind == SingKind::Intersection) return half_twist(s.lo, s.hi, n);
    return BraidWord(n);
}

Pushoffs pushoffs(const WiringDiagram& w) {
    check_positions(w);
    Pushoffs p{BraidWord(w.n), BraidWord(w.n)};
    for (size_t k = 0; k < w.sings.size(); ++k) {
        p.bottom = w.braids[k] * p.bottom;
        p.top = w.braids[k] * p.top;
        const auto& s = w.sings[k];
        if (s.kind == SingKind::Intersection) {
            BraidWord d = half_twist(s.lo, s.hi, w.n);
            p.bottom = d * p.bottom;
            p.top = d.inverse() * p.top;
        } else if (s.kind == SingKind::Tangency) {
            // the crossing sits in the top pushoff
            p.top = BraidWord(w.n, {{s.lo, -1}}) * p.top;
        }
    }
    p.bottom = w.braids.back() * p.bottom;
    p.top = w.braids.back() * p.top;
    return p;
}

BraidWord boundary_braid(const WiringDiagram& w) {
    auto p = pushoffs(w);
    return p.top.inverse() * p.bottom;
}

Factorization vanishing_data(const WiringDiagram& w) {
    check_positions(w);
    Factorization f;
    f.n = w.n;
    BraidWord P(w.n);
    for (size_t k = 0; k < w.sings.size(); ++k) {
        P = w.braids[k] * P;
        const auto& s = w.sings[k];
        if (s.kind == SingKind::Tangency)
            f.items.push_back(HoleArc{w.n, P, s.lo, {}});
        else
            f.items.push_back(HoleCurve{w.n, P, s.lo, s.hi - s.lo, {}});
        P = lower_semicircle(s, w.n) * P;
    }
    return f;
}

WiringDiagram wiring_from_vanishing(const Factorization& f, const std::vector<std::string>& componentsOfHoles) {
    if (static_cast<int>(componentsOfHoles.size()) != f.n)
        throw Error("RangeError", "need one component label per hole");
    WireBuilder b(f.n, componentsOfHoles);
    BraidWord prevG(f.n), prevPhi(f.n);
    for (auto& it : f.items) {
        Singularity s;
        BraidWord g(f.n);
        if (auto c = std::get_if<HoleCurve>(&it)) {
            if (c->n != f.n) throw Error("StrandMismatch", "item on a different surface");
            g = c->g;
            s = c->k == 0 ? Singularity{SingKind::FreePoint, c->j, c->j}
                          : Singularity{SingKind::Intersection, c->j, c->j + c->k};
        } else {
            const auto& a = std::get<HoleArc>(it);
            if (a.n != f.n) throw Error("StrandMismatch", "item on a different surface");
            if (a.j < 1 || a.j + 1 > a.n)
                throw Error("ArcHolesNotAdjacentable", "arc endpoints cannot be made adjacent");
            g = a.g;
            s = {SingKind::Tangency, a.j, a.j + 1};
        }
        b.braid((g * prevG.inverse() * prevPhi.inverse()).freely_reduced());
        b.sing(s);
        prevG = g;
        prevPhi = lower_semicircle(s, f.n);
    }
    return b.done();
}

namespace {

struct Layout {
    std::vector<int> order;  // branch indices bottom to top
    std::vector<int> startOf;
    std::vector<Singularity> points;
};

bool try_layout(const DecoratedGerm& germ, const std::vector<GermPoint>& pts, Layout& L) {
    const size_t B = germ.branches.size();
    L.startOf.assign(B, 0);
    std::vector<int> rank(B);
    int pos = 1;
    for (size_t r = 0; r < B; ++r) {
        rank[L.order[r]] = static_cast<int>(r);
        L.startOf[L.order[r]] = pos;
        pos += germ.branches[L.order[r]].originMultiplicity;
    }
    L.points.clear();
    for (auto& p : pts) {
        std::vector<int> on;
        int total = 0;
        for (size_t b = 0; b < B; ++b)
            if (p.mult[b] > 0) {
                on.push_back(rank[b]);
                total += p.mult[b];
            }
        std::sort(on.begin(), on.end());
        for (size_t k = 1; k < on.size(); ++k)
            if (on[k] != on[k - 1] + 1) return false;
        int first = L.order[on.front()], last = L.order[on.back()];
        if (total == 1) {
            L.points.push_back({SingKind::FreePoint, L.startOf[first], L.startOf[first]});
            continue;
        }
        if (on.size() == 1) {
            L.points.push_back({SingKind::Intersection, L.startOf[first], L.startOf[first] + p.mult[first] - 1});
            continue;
        }
        for (size_t k = 1; k + 1 < on.size(); ++k) {
            int b = L.order[on[k]];
            if (p.mult[b] != germ.branches[b].originMultiplicity) return false;
        }
        int lo = L.startOf[first] + germ.branches[first].originMultiplicity - p.mult[first];
        int hi = L.startOf[last] + p.mult[last] - 1;
        L.points.push_back({SingKind::Intersection, lo, hi});
    }
    return true;
}

}  // namespace

WiringDiagram scott(const DecoratedGerm& germ) {
    const size_t B = germ.branches.size();
    if (B == 0) throw Error("InvalidGerm", "germ has no branches");
    std::vector<GermPoint> pts(germ.points.rbegin(), germ.points.rend());  // root first
    Layout L;
    L.order.resize(B);
    std::iota(L.order.begin(), L.order.end(), 0);
    bool found = false;
    do {
        if (try_layout(germ, pts, L)) {
            found = true;
            break;
        }
    } while (B <= 8 && std::next_permutation(L.order.begin(), L.order.end()));
    if (!found) throw Error("ScottLayoutUnavailable", "no unbraided strand layout realises this cluster");

    int n = 0;
    std::vector<std::string> comps;
    for (int b : L.order)
        for (int s = 0; s < germ.branches[b].originMultiplicity; ++s) {
            comps.push_back(germ.branches[b].name);
            ++n;
        }
    WireBuilder wb(n, comps);
    for (int b : L.order)
        for (int s = 0; s + 1 < germ.branches[b].originMultiplicity; ++s)
            wb.sing({SingKind::Tangency, L.startOf[b] + s, L.startOf[b] + s + 1});
    for (auto& s : L.points) wb.sing(s);
    return wb.done();
}

WiringDiagram scott(const Cluster& c) { return scott(germ_from_cluster(c)); }

namespace {

BraidWord lift(const BraidWord& b, int n, int shift) {
    BraidWord r(n);
    for (auto& x : b.letters) r.letters.push_back({x.i + shift, x.sign});
    return r;
}

void append(WireBuilder& wb, const WiringDiagram& w, int n, int shift) {
    for (size_t k = 0; k < w.sings.size(); ++k) {
        wb.braid(lift(w.braids[k], n, shift));
        auto s = w.sings[k];
        s.lo += shift;
        s.hi += shift;
        wb.sing(s);
    }
    wb.braid(lift(w.braids.back(), n, shift));
}

}  // namespace

WiringDiagram combine(const WiringDiagram& a, const WiringDiagram& b) {
    for (auto& c : a.components())
        if (b.components().count(c)) throw Error("ComponentClash", "component '" + c + "' appears in both diagrams");
    const int nA = a.n, nB = b.n, n = nA + nB;
    std::vector<std::string> comps = b.initialComponents;
    comps.insert(comps.end(), a.initialComponents.begin(), a.initialComponents.end());
    WireBuilder wb(n, comps);
    // each strand of a walks down through every strand of b
    BraidWord swaps(n);
    for (int s = 0; s < nA; ++s)
        for (int p = nB + s; p >= s + 1; --p) {
            wb.sing({SingKind::Intersection, p, p + 1});
            BraidWord x(n, {{p, 1}});
            wb.braid(x);
            swaps = x * swaps;
        }
    wb.braid(swaps.inverse());
    append(wb, b, n, 0);
    append(wb, a, n, nB);
    return wb.done();
}

WiringDiagram subarrangement(const WiringDiagram& w, const std::set<std::string>& keep) {
    if (keep.empty()) throw Error("EmptySubset", "subarrangement needs at least one component");
    auto comps = w.components();
    for (auto& c : keep)
        if (!comps.count(c)) throw Error("UnknownComponent", "no component named '" + c + "'");
    check_positions(w);
    std::vector<std::string> initial;
    for (auto& c : w.initialComponents)
        if (keep.count(c)) initial.push_back(c);
    const int m = static_cast<int>(initial.size());
    WireBuilder wb(m, initial);
    Tracker t = start(w);
    auto newIndex = [&](int p) {
        int r = 0;
        for (int q = 1; q <= p; ++q) r += keep.count(t.label[q - 1]) ? 1 : 0;
        return r;
    };
    auto restrictBraid = [&](const BraidWord& b) {
        BraidWord r(m);
        // letters act right to left; restricted letters keep that order
        std::vector<Letter> rev;
        for (auto it = b.letters.rbegin(); it != b.letters.rend(); ++it) {
            bool lo = keep.count(t.label[it->i - 1]) > 0, hi = keep.count(t.label[it->i]) > 0;
            if (lo && hi) rev.push_back({newIndex(it->i), it->sign});
            std::swap(t.label[it->i - 1], t.label[it->i]);
            std::swap(t.strand[it->i - 1], t.strand[it->i]);
        }
        r.letters.assign(rev.rbegin(), rev.rend());
        return r;
    };
    for (size_t k = 0; k < w.sings.size(); ++k) {
        wb.braid(restrictBraid(w.braids[k]));
        const auto& s = w.sings[k];
        std::vector<int> kept;
        for (int p = s.lo; p <= s.hi; ++p)
            if (keep.count(t.label[p - 1])) kept.push_back(newIndex(p));
        if (kept.empty()) continue;
        if (s.kind == SingKind::Tangency) {
            if (kept.size() == 2) wb.sing({SingKind::Tangency, kept[0], kept[1]});
        } else if (kept.size() == 1) {
            wb.sing({SingKind::FreePoint, kept[0], kept[0]});
        } else {
            wb.sing({SingKind::Intersection, kept.front(), kept.back()});
        }
    }
    wb.braid(restrictBraid(w.braids.back()));
    return wb.done();
}

WiringDiagram pad_free_points(const WiringDiagram& w, const std::string& component, int count) {
    if (count < 0) throw Error("RangeError", "cannot remove free points by padding");
    auto tr = strand_components(w);
    const auto& last = tr.labels.back();
    auto it = std::find(last.begin(), last.end(), component);
    if (it == last.end()) throw Error("UnknownComponent", "no component named '" + component + "'");
    int p = static_cast<int>(it - last.begin()) + 1;
    WireBuilder wb(w.n, w.initialComponents);
    for (size_t k = 0; k < w.sings.size(); ++k) {
        wb.braid(w.braids[k]);
        wb.sing(w.sings[k]);
    }
    wb.braid(w.braids.back());
    for (int c = 0; c < count; ++c) wb.sing({SingKind::FreePoint, p, p});
    return wb.done();
}

EnclosureData enclosure_data(const WiringDiagram& w) {
    EnclosureData d;
    for (int h = 1; h <= w.n; ++h) d.holes.push_back(std::to_string(h));
    d.outer = "o";
    std::map<std::string, int> strands;
    for (auto& c : w.initialComponents) ++strands[c];
    for (int h = 1; h <= w.n; ++h) d.multiplicity[std::to_string(h)] = strands[w.initialComponents[h - 1]];
    auto named = [](const std::set<int>& s) {
        std::set<std::string> out;
        for (int h : s) out.insert(std::to_string(h));
        return out;
    };
    for (auto& it : vanishing_data(w).items) {
        if (auto c = std::get_if<HoleCurve>(&it))
            d.cycles.push_back(named(c->holes()));
        else
            d.arcs.push_back(named(std::get<HoleArc>(it).endpoints()));
    }
    return d;
}

EnclosureData inside_out(const EnclosureData& d, const std::string& hole) {
    if (std::find(d.holes.begin(), d.holes.end(), hole) == d.holes.end())
        throw Error("UnknownHole", "no hole named '" + hole + "'");
    auto m = d.multiplicity.find(hole);
    if (m != d.multiplicity.end() && m->second != 1)
        throw Error("MultiplicityNotOne", "hole " + hole + " belongs to a component of multiplicity " +
                                              std::to_string(m->second));
    for (auto& a : d.arcs)
        if (a.count(hole)) throw Error("ArcAtOuter", "an arc ends at hole " + hole);
    std::set<std::string> all(d.holes.begin(), d.holes.end());
    all.insert(d.outer);
    EnclosureData r = d;
    for (auto& h : r.holes)
        if (h == hole) h = d.outer;
    r.outer = hole;
    for (auto& S : r.cycles) {
        if (!S.count(hole)) continue;
        std::set<std::string> c;
        std::set_difference(all.begin(), all.end(), S.begin(), S.end(), std::inserter(c, c.end()));
        S = c;
    }
    r.multiplicity.erase(hole);
    r.multiplicity[d.outer] = 1;
    return r;
}

}  // namespace sandwich
