#pragma once
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sandwich/braid.hpp"
#include "sandwich/mcg.hpp"
#include "sandwich/plumbing.hpp"

namespace sandwich {

enum class SingKind { Tangency, Intersection, FreePoint };

// positions lo..hi; a tangency has hi = lo + 1, a free point hi = lo
struct Singularity {
    SingKind kind;
    int lo;
    int hi;
    bool operator==(const Singularity&) const = default;
    std::string str() const;
};

// braids.size() == sings.size() + 1; braids[k] sits before sings[k]
struct WiringDiagram {
    int n = 1;
    std::vector<std::string> initialComponents;
    std::vector<BraidWord> braids;
    std::vector<Singularity> sings;

    bool operator==(const WiringDiagram&) const = default;
    std::set<std::string> components() const;
    int tangency_count() const;
};

WiringDiagram parse_wire(const std::string& text);
std::string serialize_wire(const WiringDiagram& w);

// appends items while keeping the braid/singularity alternation
class WireBuilder {
public:
    WireBuilder(int n, std::vector<std::string> components);
    WireBuilder& braid(const BraidWord& b);  // acts after what is already there
    WireBuilder& sing(Singularity s);
    WiringDiagram done() const;

private:
    WiringDiagram w_;
};

struct StrandTracking {
    // labels[k][p-1]: component at position p just before sings[k]; last entry is after the final braid
    std::vector<std::vector<std::string>> labels;
    // strand[k][p-1]: initial position of the strand at p at the same moments
    std::vector<std::vector<int>> strand;
};

// throws TangencyComponentMismatch
StrandTracking strand_components(const WiringDiagram& w);
// union of tangent strands; labels C1, C2, ... by lowest initial position
std::vector<std::string> infer_components(const WiringDiagram& w);

struct IncidenceMatrix {
    std::vector<std::string> rows;
    std::vector<std::vector<int>> columns;  // columns[j][i]: component i at point j

    int entry(size_t i, size_t j) const { return columns[j][i]; }
    std::vector<int> row_sums() const;
    bool operator==(const IncidenceMatrix&) const = default;
};

IncidenceMatrix incidence(const WiringDiagram& w);

Report validate(const WiringDiagram& w);
Report validate(const WiringDiagram& w, const DecoratedGerm& germ);

struct Pushoffs {
    BraidWord top;
    BraidWord bottom;
};
Pushoffs pushoffs(const WiringDiagram& w);
BraidWord boundary_braid(const WiringDiagram& w);
// monodromy of the lower semicircle around one singularity
BraidWord lower_semicircle(const Singularity& s, int n);

Factorization vanishing_data(const WiringDiagram& w);
WiringDiagram wiring_from_vanishing(const Factorization& f, const std::vector<std::string>& componentsOfHoles);

WiringDiagram scott(const DecoratedGerm& germ);
WiringDiagram scott(const Cluster& c);

WiringDiagram combine(const WiringDiagram& a, const WiringDiagram& b);
WiringDiagram subarrangement(const WiringDiagram& w, const std::set<std::string>& keep);
// appends free points on the given component until its row sum reaches target
WiringDiagram pad_free_points(const WiringDiagram& w, const std::string& component, int count);

struct EnclosureData {
    std::vector<std::string> holes;
    std::string outer;
    std::vector<std::set<std::string>> cycles;
    std::vector<std::set<std::string>> arcs;
    std::map<std::string, int> multiplicity;  // absent means 1
};

EnclosureData enclosure_data(const WiringDiagram& w);
EnclosureData inside_out(const EnclosureData& d, const std::string& hole);

}  // namespace sandwich
