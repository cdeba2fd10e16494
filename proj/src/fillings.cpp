#include "sandwich/fillings.hpp"

#include <algorithm>
#include <numeric>

#include "sandwich/errors.hpp"

namespace sandwich {

SpinalOpenBook spinal_open_book(const DecoratedGerm& germ) {
    SpinalOpenBook ob;
    auto b = spinal_binding(germ);
    ob.outer = b.front();
    ob.bindings.assign(b.begin() + 1, b.end());
    for (auto& x : ob.bindings) ob.pageHoles += x.second;
    for (auto& br : germ.branches) ob.marking.emplace_back(br.name, br.sitsOn);
    return ob;
}

int exotic_count(const DecoratedGerm& germ) {
    int s = 0;
    for (auto& b : germ.branches) s += b.originMultiplicity - 1;
    return s;
}

MappingClass factorization_product(const Factorization& f) {
    MappingClass m = mc_identity(f.n);
    for (auto& it : f.items) m = mc_compose(m, item_class(it));
    return m;
}

Report compatible(const WiringDiagram& w, const DecoratedGerm& germ) {
    Report r = validate(w, germ);
    if (!r.ok()) return r;
    WiringDiagram ref = scott(germ);
    if (ref.n != w.n || !braid_equal(boundary_braid(w), boundary_braid(ref)))
        r.add("boundary braid differs from the Scott reference");
    return r;
}

IncidenceMatrix incidence_canonical(const IncidenceMatrix& M) {
    std::vector<size_t> order(M.rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return M.rows[a] < M.rows[b]; });
    IncidenceMatrix C;
    for (size_t i : order) C.rows.push_back(M.rows[i]);
    for (auto& col : M.columns) {
        std::vector<int> c;
        for (size_t i : order) c.push_back(col[i]);
        C.columns.push_back(c);
    }
    std::sort(C.columns.begin(), C.columns.end(), std::greater<>());
    return C;
}

bool incidence_equiv(const IncidenceMatrix& a, const IncidenceMatrix& b, bool unlabeled) {
    if (a.rows.size() != b.rows.size() || a.columns.size() != b.columns.size()) return false;
    auto ca = incidence_canonical(a), cb = incidence_canonical(b);
    if (!unlabeled) return ca == cb;
    // ignore labels: try every row order of b
    std::vector<size_t> perm(cb.rows.size());
    std::iota(perm.begin(), perm.end(), 0);
    auto strip = [](IncidenceMatrix m) {
        for (auto& r : m.rows) r.clear();
        std::sort(m.columns.begin(), m.columns.end(), std::greater<>());
        return m;
    };
    auto target = strip(ca);
    do {
        IncidenceMatrix p;
        p.rows = cb.rows;
        for (auto& col : cb.columns) {
            std::vector<int> c;
            for (size_t i : perm) c.push_back(col[i]);
            p.columns.push_back(c);
        }
        if (strip(p) == target) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

FillingSummary filling_summary(const WiringDiagram& w, const DecoratedGerm& germ) {
    Report r = compatible(w, germ);
    if (!r.ok()) throw Error("NotCompatible", "diagram is not compatible with the germ: " + r.issues.front());
    FillingSummary s;
    for (auto& it : vanishing_data(w).items) {
        if (std::holds_alternative<HoleCurve>(it))
            ++s.lefschetzCount;
        else
            ++s.exoticCount;
    }
    s.incidence = incidence_canonical(incidence(w));
    s.eulerCharacteristic =
        1 + static_cast<int>(s.incidence.columns.size()) - static_cast<int>(germ.branches.size());
    return s;
}

WiringDiagram strip_free_points(const WiringDiagram& w) {
    WireBuilder b(w.n, w.initialComponents);
    for (size_t k = 0; k < w.sings.size(); ++k) {
        b.braid(w.braids[k]);
        if (w.sings[k].kind != SingKind::FreePoint) b.sing(w.sings[k]);
    }
    b.braid(w.braids.back());
    return b.done();
}

WiringDiagram unexpected_wiring(const UnexpectedGraph& u) {
    DecoratedGerm germ = germ_from_augmentation(u.graph, u.aug);
    WiringDiagram lines = strip_free_points(scott(restrict_germ(germ, u.lines)));
    WiringDiagram inner = strip_free_points(scott(restrict_germ(germ, u.inherited)));
    WiringDiagram w = combine(lines, inner);
    auto M = incidence(w);
    auto sums = M.row_sums();
    for (size_t i = 0; i < M.rows.size(); ++i) {
        const auto& br = germ.branches[germ.index_of(M.rows[i])];
        if (sums[i] > br.weight)
            throw Error("WeightTooSmall", "branch " + br.name + " already meets " + std::to_string(sums[i]) +
                                              " marked points but has weight " + std::to_string(br.weight));
        w = pad_free_points(w, M.rows[i], br.weight - sums[i]);
    }
    return w;
}

}  // namespace sandwich
