#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sandwich/errors.hpp"
#include "sandwich/fillings.hpp"
#include "sandwich/json_io.hpp"
#include "sandwich/svg.hpp"

using namespace sandwich;

namespace {

constexpr int kFormatVersion = 1;

struct Semantic {
    int code;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IOError", "cannot read '" + path + "'", path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

template <class F>
auto in_file(const std::string& path, F&& f) {
    try {
        return f(slurp(path));
    } catch (const Error& e) {
        std::string loc = e.location().empty() ? path : path + ":" + e.location();
        throw Error(e.code(), e.what(), loc);
    }
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error("IOError", "cannot write '" + out + "'", out);
    f << text;
}

void emit_json(Json j, const std::string& out) {
    Json top;
    top["format_version"] = kFormatVersion;
    for (auto& [k, v] : j.items()) top[k] = v;
    emit(top.dump(2) + "\n", out);
}

std::string text_header() { return "# format " + std::to_string(kFormatVersion) + "\n"; }

WiringDiagram load_wire(const std::string& p) { return in_file(p, [](const std::string& t) { return parse_wire(t); }); }
PlumbFile load_plumb(const std::string& p) { return in_file(p, [](const std::string& t) { return parse_plumb(t); }); }
Cluster load_cluster(const std::string& p) { return in_file(p, [](const std::string& t) { return parse_germ(t); }); }

DecoratedGerm load_germ(const std::string& germPath, const std::string& graphPath) {
    if (!germPath.empty()) return germ_from_cluster(load_cluster(germPath));
    if (!graphPath.empty()) {
        auto f = load_plumb(graphPath);
        return germ_from_augmentation(f.graph, f.aug);
    }
    throw Error("UsageError", "need --germ or --graph");
}

int fail(const std::string& code, const std::string& msg, const std::string& loc) {
    Json j;
    j["code"] = code;
    j["message"] = msg;
    j["location"] = loc.empty() ? Json(nullptr) : Json(loc);
    std::cerr << j.dump() << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* v = std::getenv("SANDWICH_FORMAT_VERSION")) {
        if (std::string(v) != std::to_string(kFormatVersion))
            return fail("UnsupportedFormatVersion", std::string("format version ") + v + " is not supported", "");
    }

    CLI::App app{"sandwiched singularities: plumbing graphs, wiring diagrams, fillings"};
    app.require_subcommand(1);
    std::string out, graph, germ, fact;
    std::vector<std::string> wires;
    bool unlabeled = false, trace = false;
    std::string hole, chains, prefix = "K";
    int N = 0, wmax = 0;
    size_t limit = 10000;

    auto* cGerm = app.add_subcommand("germ", "decorated germ of an augmented graph");
    cGerm->add_option("--graph", graph)->required();
    cGerm->add_flag("--trace", trace, "include the blow-down trace");
    auto* cGraph = app.add_subcommand("graph", "augmented graph of a cluster");
    cGraph->add_option("--germ", germ)->required();
    auto* cScott = app.add_subcommand("scott", "Scott wiring diagram");
    cScott->add_option("--germ", germ);
    cScott->add_option("--graph", graph);
    auto* cValidate = app.add_subcommand("validate", "check a diagram, optionally against a germ");
    cValidate->add_option("--wire", wires)->required()->expected(1);
    cValidate->add_option("--germ", germ);
    cValidate->add_option("--graph", graph);
    auto* cVan = app.add_subcommand("vanishing", "vanishing cycles and arcs");
    cVan->add_option("--wire", wires)->required()->expected(1);
    auto* cFromVan = app.add_subcommand("wire-from-vanishing", "diagram from vanishing data");
    cFromVan->add_option("--fact", fact)->required();
    auto* cInc = app.add_subcommand("incidence", "canonical incidence matrix");
    cInc->add_option("--wire", wires)->required()->expected(1);
    auto* cCmp = app.add_subcommand("compare", "incidence equivalence of two diagrams");
    cCmp->add_option("--wire", wires)->required()->expected(2);
    cCmp->add_flag("--unlabeled", unlabeled);
    auto* cIO = app.add_subcommand("inside-out", "inside-out transform of enclosure data");
    cIO->add_option("--wire", wires)->required()->expected(1);
    cIO->add_option("--hole", hole)->required();
    auto* cExt = app.add_subcommand("extend", "extend arrows by -2 chains");
    cExt->add_option("--graph", graph)->required();
    cExt->add_option("--chains", chains, "c=len,...; defaults to the file's chains directive");
    auto* cUnx = app.add_subcommand("unexpected", "graph surgery for unexpected fillings");
    cUnx->add_option("--graph", graph)->required();
    cUnx->add_option("-N", N)->required();
    cUnx->add_option("--wmax", wmax)->required();
    cUnx->add_option("--prefix", prefix, "writes <prefix>.plumb and <prefix>.wire");
    auto* cAut = app.add_subcommand("auts", "graph automorphisms");
    cAut->add_option("--graph", graph)->required();
    cAut->add_option("--limit", limit);
    auto* cRender = app.add_subcommand("render", "SVG of a diagram");
    cRender->add_option("--wire", wires)->required()->expected(1);
    for (auto* s : {cGerm, cGraph, cScott, cValidate, cVan, cFromVan, cInc, cCmp, cIO, cExt, cAut, cRender})
        s->add_option("-o,--output", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("UsageError", e.what(), "");
    }

    try {
        if (*cGerm) {
            auto f = load_plumb(graph);
            auto t = blow_down(f.graph, f.aug);
            Json j = to_json(germ_from_trace(t, f.aug));
            if (trace) j["trace"] = to_json(t);
            emit_json(j, out);
        } else if (*cGraph) {
            auto [g, aug] = graph_from_cluster(load_cluster(germ));
            emit(text_header() + serialize_plumb(g, aug), out);
        } else if (*cScott) {
            emit(text_header() + serialize_wire(scott(load_germ(germ, graph))), out);
        } else if (*cValidate) {
            auto w = load_wire(wires[0]);
            Report r = germ.empty() && graph.empty() ? validate(w) : validate(w, load_germ(germ, graph));
            emit_json(to_json(r), out);
            return r.ok() ? 0 : 1;
        } else if (*cVan) {
            auto w = load_wire(wires[0]);
            emit_json(to_json(vanishing_data(w), w.initialComponents), out);
        } else if (*cFromVan) {
            std::vector<std::string> comps;
            Factorization f = in_file(fact, [&](const std::string& t) {
                Json j;
                try {
                    j = Json::parse(t);
                } catch (const nlohmann::json::exception& e) {
                    throw Error("ParseError", e.what());
                }
                return factorization_from_json(j, comps);
            });
            emit(text_header() + serialize_wire(wiring_from_vanishing(f, comps)), out);
        } else if (*cInc) {
            emit_json(to_json(incidence_canonical(incidence(load_wire(wires[0])))), out);
        } else if (*cCmp) {
            auto a = incidence(load_wire(wires[0]));
            auto b = incidence(load_wire(wires[1]));
            bool eq = incidence_equiv(a, b, unlabeled);
            Json j;
            j["equivalent"] = eq;
            emit_json(j, out);
            return eq ? 0 : 1;
        } else if (*cIO) {
            auto w = load_wire(wires[0]);
            emit_json(to_json(inside_out(enclosure_data(w), hole)), out);
        } else if (*cExt) {
            auto f = load_plumb(graph);
            std::vector<std::pair<std::string, int>> spec = f.chains;
            if (!chains.empty()) spec = parse_plumb("chains " + chains + "\n" + serialize_plumb(f.graph, f.aug)).chains;
            std::vector<int> lengths(f.aug.arrows.size(), 0);
            for (auto& [c, len] : spec) {
                bool found = false;
                for (size_t k = 0; k < f.aug.arrows.size(); ++k)
                    if (f.aug.arrows[k].curvetta == c) {
                        lengths[k] = len;
                        found = true;
                    }
                if (!found) throw Error("UnknownCurvetta", "no curvetta named '" + c + "'");
            }
            auto [g, aug] = extend_chains(f.graph, f.aug, lengths);
            emit(text_header() + serialize_plumb(g, aug), out);
        } else if (*cUnx) {
            auto f = load_plumb(graph);
            auto u = build_unexpected(f.graph, f.aug, N, wmax);
            auto w = unexpected_wiring(u);
            auto germK = germ_from_augmentation(u.graph, u.aug);
            Report r = validate(w, germK);
            emit(text_header() + serialize_plumb(u.graph, u.aug), prefix + ".plumb");
            emit(text_header() + serialize_wire(w), prefix + ".wire");
            Json j;
            j["vstar"] = u.vstar;
            j["vstar_euler"] = u.graph.euler.at(u.vstar);
            j["legs"] = u.lines.size();
            j["vertices"] = u.graph.euler.size();
            j["plumb"] = prefix + ".plumb";
            j["wire"] = prefix + ".wire";
            j["validation"] = to_json(r);
            emit_json(j, "");
            return r.ok() ? 0 : 1;
        } else if (*cAut) {
            auto f = load_plumb(graph);
            Json j;
            j["order"] = automorphism_count(f.graph);
            j["automorphisms"] = Json::array();
            for (auto& m : automorphisms(f.graph, limit)) {
                Json x = Json::object();
                for (auto& [a, b] : m) x[a] = b;
                j["automorphisms"].push_back(x);
            }
            emit_json(j, out);
        } else if (*cRender) {
            emit(render_svg(load_wire(wires[0])), out);
        }
    } catch (const Error& e) {
        return fail(e.code(), e.what(), e.location());
    } catch (const std::exception& e) {
        return fail("InternalError", e.what(), "");
    }
    return 0;
}
