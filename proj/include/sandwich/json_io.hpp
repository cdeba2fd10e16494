#pragma once
#include <json.hpp>

#include "sandwich/fillings.hpp"
#include "sandwich/mcg.hpp"
#include "sandwich/plumbing.hpp"
#include "sandwich/wiring.hpp"

namespace sandwich {

using Json = nlohmann::ordered_json;

Json to_json(const DecoratedGerm& g);
Json to_json(const BlowDownTrace& t);
Json to_json(const IncidenceMatrix& M);  // row-major
Json to_json(const EnclosureData& d);
Json to_json(const Report& r);
Json to_json(const FillingSummary& s);
Json to_json(const MappingClass& m);
Json to_json(const Factorization& f, const std::vector<std::string>& componentsOfHoles);

// returns the factorization and fills componentsOfHoles
Factorization factorization_from_json(const Json& j, std::vector<std::string>& componentsOfHoles);

}  // namespace sandwich
