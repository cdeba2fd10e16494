#pragma once
#include <string>
#include <utility>
#include <vector>

#include "sandwich/mcg.hpp"
#include "sandwich/plumbing.hpp"
#include "sandwich/wiring.hpp"

namespace sandwich {

struct SpinalOpenBook {
    int pageHoles = 0;
    std::vector<std::pair<std::string, int>> bindings;  // non-outer
    std::pair<std::string, int> outer;
    std::vector<std::pair<std::string, std::string>> marking;  // branch -> vertex
};

SpinalOpenBook spinal_open_book(const DecoratedGerm& germ);

int exotic_count(const DecoratedGerm& germ);

// T(V_1) o ... o T(V_N); V_N acts first
MappingClass factorization_product(const Factorization& f);

Report compatible(const WiringDiagram& w, const DecoratedGerm& germ);

IncidenceMatrix incidence_canonical(const IncidenceMatrix& M);
bool incidence_equiv(const IncidenceMatrix& a, const IncidenceMatrix& b, bool unlabeled = false);

struct FillingSummary {
    int lefschetzCount = 0;
    int exoticCount = 0;
    int eulerCharacteristic = 0;
    IncidenceMatrix incidence;
};

FillingSummary filling_summary(const WiringDiagram& w, const DecoratedGerm& germ);

WiringDiagram strip_free_points(const WiringDiagram& w);
// Scott diagrams of the star lines and of the inherited branches, combined, then padded
// with free points up to the weights of the whole germ
WiringDiagram unexpected_wiring(const UnexpectedGraph& u);

}  // namespace sandwich
