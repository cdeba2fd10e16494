#pragma once
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sandwich {

struct Report {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
    void add(std::string s) { issues.push_back(std::move(s)); }
};

struct PlumbingGraph {
    std::map<std::string, int> euler;
    std::vector<std::pair<std::string, std::string>> edges;  // each pair stored sorted

    void add_vertex(const std::string& name, int e);
    void add_edge(const std::string& a, const std::string& b);
    bool has(const std::string& v) const { return euler.count(v) > 0; }
    std::map<std::string, std::vector<std::string>> adjacency() const;
    bool is_tree() const;
    bool operator==(const PlumbingGraph&) const = default;
};

// direct: the curvetta meets the vertex itself, with no added (-1) curve
struct Arrow {
    std::string curvetta;
    std::string vertex;
    bool direct = false;
    bool operator==(const Arrow&) const = default;
};

struct Augmentation {
    std::vector<Arrow> arrows;
    bool operator==(const Augmentation&) const = default;
};

// name of the (-1) curve carrying curvetta c
std::string arrow_curve(const std::string& curvetta);

struct BlowDownStep {
    std::string curve;
    std::map<std::string, int> snapshot;  // I(x, curve) for every remaining object with x != curve
};

struct BlowDownTrace {
    std::vector<BlowDownStep> steps;
    std::vector<std::string> curvettas;
    std::vector<std::vector<int>> w;  // w[i][j]: curvetta i, step j
    std::vector<std::vector<int>> finalPairwise;
    std::string lastVertex;
};

struct Branch {
    std::string name;
    std::vector<int> multiplicitySeq;
    int weight = 0;
    int originMultiplicity = 0;
    int delta = 0;
    std::string sitsOn;
    bool operator==(const Branch&) const = default;
};

struct GermPoint {
    std::string name;
    std::vector<int> mult;  // per branch
    bool operator==(const GermPoint&) const = default;
};

struct DecoratedGerm {
    std::vector<Branch> branches;
    std::string rootVertex;
    std::vector<std::vector<int>> pairwise;
    std::vector<GermPoint> points;  // blow-down order, points carrying no branch omitted

    int index_of(const std::string& branch) const;
};

struct ClusterPoint {
    std::string id;
    std::string parent;  // empty for root
    std::vector<std::string> prox;
};

struct Cluster {
    std::vector<std::string> branches;
    std::vector<ClusterPoint> points;
    std::map<std::string, std::vector<int>> mults;  // point -> per branch
    std::map<std::string, int> weights;
};

Report validate_graph(const PlumbingGraph& g);

// chooser picks among the available (-1) curves, sorted by name; default takes the first
using Chooser = std::function<size_t(const std::vector<std::string>&)>;
BlowDownTrace blow_down(const PlumbingGraph& g, const Augmentation& aug, const Chooser& choose = {});

DecoratedGerm germ_from_trace(const BlowDownTrace& t, const Augmentation& aug);
DecoratedGerm germ_from_augmentation(const PlumbingGraph& g, const Augmentation& aug,
                                     const Chooser& choose = {});
DecoratedGerm restrict_germ(const DecoratedGerm& germ, const std::vector<std::string>& keep);

int delta_of(const std::vector<int>& seq);
int cap_framing(const Branch& b);

std::pair<PlumbingGraph, Augmentation> extend_chains(const PlumbingGraph& g, const Augmentation& aug,
                                                     const std::vector<int>& lengths);

void validate_cluster(const Cluster& c);
std::pair<PlumbingGraph, Augmentation> graph_from_cluster(const Cluster& c);
DecoratedGerm germ_from_cluster(const Cluster& c);

using VertexMap = std::map<std::string, std::string>;
std::vector<VertexMap> automorphisms(const PlumbingGraph& g, size_t limit = 100000);
std::uint64_t automorphism_count(const PlumbingGraph& g);

std::vector<std::pair<std::string, int>> spinal_binding(const DecoratedGerm& germ);

struct UnexpectedGraph {
    PlumbingGraph graph;
    Augmentation aug;
    std::string vstar;
    std::vector<std::string> lines;      // curvettas of the star legs
    std::vector<std::string> inherited;  // curvettas coming from the input graph
};
UnexpectedGraph build_unexpected(const PlumbingGraph& g, const Augmentation& aug, int N, int wmax);

struct PlumbFile {
    PlumbingGraph graph;
    Augmentation aug;
    std::vector<std::pair<std::string, int>> chains;
};
PlumbFile parse_plumb(const std::string& text);
std::string serialize_plumb(const PlumbingGraph& g, const Augmentation& aug);
Cluster parse_germ(const std::string& text);

}  // namespace sandwich
