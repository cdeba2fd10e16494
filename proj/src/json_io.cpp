#include "sandwich/json_io.hpp"

#include "sandwich/errors.hpp"

namespace sandwich {

Json to_json(const DecoratedGerm& g) {
    Json j;
    j["root"] = g.rootVertex;
    j["branches"] = Json::array();
    for (auto& b : g.branches) {
        Json x;
        x["name"] = b.name;
        x["multiplicities"] = b.multiplicitySeq;
        x["weight"] = b.weight;
        x["d"] = b.originMultiplicity;
        x["delta"] = b.delta;
        x["sits_on"] = b.sitsOn;
        x["cap_framing"] = cap_framing(b);
        j["branches"].push_back(x);
    }
    j["pairwise"] = g.pairwise;
    j["binding"] = Json::array();
    for (auto& [v, m] : spinal_binding(g)) j["binding"].push_back(Json::array({v, m}));
    return j;
}

Json to_json(const BlowDownTrace& t) {
    Json j;
    j["curvettas"] = t.curvettas;
    j["steps"] = Json::array();
    for (size_t s = 0; s < t.steps.size(); ++s) {
        Json x;
        x["curve"] = t.steps[s].curve;
        Json snap = Json::object();
        for (auto& [k, v] : t.steps[s].snapshot) snap[k] = v;
        x["intersections"] = snap;
        j["steps"].push_back(x);
    }
    j["w"] = t.w;
    j["last_vertex"] = t.lastVertex;
    return j;
}

Json to_json(const IncidenceMatrix& M) {
    Json j;
    j["rows"] = M.rows;
    Json m = Json::array();
    for (size_t i = 0; i < M.rows.size(); ++i) {
        std::vector<int> row;
        for (size_t c = 0; c < M.columns.size(); ++c) row.push_back(M.entry(i, c));
        m.push_back(row);
    }
    j["matrix"] = m;
    return j;
}

Json to_json(const EnclosureData& d) {
    Json j;
    j["holes"] = d.holes;
    j["outer"] = d.outer;
    j["cycles"] = Json::array();
    for (auto& s : d.cycles) j["cycles"].push_back(std::vector<std::string>(s.begin(), s.end()));
    j["arcs"] = Json::array();
    for (auto& s : d.arcs) j["arcs"].push_back(std::vector<std::string>(s.begin(), s.end()));
    return j;
}

Json to_json(const Report& r) {
    Json j;
    j["ok"] = r.ok();
    j["issues"] = r.issues;
    return j;
}

Json to_json(const FillingSummary& s) {
    Json j;
    j["lefschetz_count"] = s.lefschetzCount;
    j["exotic_count"] = s.exoticCount;
    j["euler_characteristic"] = s.eulerCharacteristic;
    j["incidence"] = to_json(s.incidence);
    return j;
}

Json to_json(const MappingClass& m) {
    Json j;
    j["images"] = Json::array();
    for (auto& w : m.image) j["images"].push_back(w.str());
    j["perm"] = std::vector<int>(m.perm.begin() + 1, m.perm.end());
    j["ledger"] = m.ledger;
    return j;
}

Json to_json(const Factorization& f, const std::vector<std::string>& componentsOfHoles) {
    Json j;
    j["n"] = f.n;
    j["components"] = componentsOfHoles;
    j["items"] = Json::array();
    for (auto& it : f.items) {
        Json x;
        if (auto c = std::get_if<HoleCurve>(&it)) {
            x["kind"] = "cycle";
            x["conjugator"] = c->g.str();
            x["base"] = {c->j, c->j + c->k};
            x["class"] = c->canonical().str();
        } else {
            const auto& a = std::get<HoleArc>(it);
            x["kind"] = "arc";
            x["conjugator"] = a.g.str();
            x["base"] = {a.j, a.j + 1};
            x["class"] = a.canonical().str();
        }
        if (const auto& off = item_offset(it); !off.empty()) x["offset"] = off;
        j["items"].push_back(x);
    }
    return j;
}

Factorization factorization_from_json(const Json& j, std::vector<std::string>& componentsOfHoles) {
    try {
        Factorization f;
        f.n = j.at("n").get<int>();
        if (f.n < 1) throw Error("RangeError", "factorization needs at least one hole");
        if (j.contains("components"))
            componentsOfHoles = j.at("components").get<std::vector<std::string>>();
        else
            for (int h = 1; h <= f.n; ++h) componentsOfHoles.push_back("C" + std::to_string(h));
        for (auto& x : j.at("items")) {
            auto kind = x.at("kind").get<std::string>();
            auto base = x.at("base").get<std::vector<int>>();
            if (base.size() != 2) throw Error("ParseError", "base must be [first, last]");
            BraidWord g = parse_braid(x.at("conjugator").get<std::string>(), f.n);
            std::vector<int> off;
            if (x.contains("offset")) {
                off = x.at("offset").get<std::vector<int>>();
                if (static_cast<int>(off.size()) != f.n + 1) throw Error("ParseError", "offset needs one entry per hole plus the outer");
            }
            if (kind == "cycle") {
                HoleCurve c{f.n, g, base[0], base[1] - base[0], off};
                c.canonical();  // range check
                f.items.push_back(c);
            } else if (kind == "arc") {
                if (base[1] != base[0] + 1) throw Error("ParseError", "arc base must be two adjacent holes");
                HoleArc a{f.n, g, base[0], off};
                a.canonical();
                f.items.push_back(a);
            } else {
                throw Error("ParseError", "unknown item kind '" + kind + "'");
            }
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", std::string("malformed factorization JSON: ") + e.what());
    }
}

}  // namespace sandwich
