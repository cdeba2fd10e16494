#pragma once
#include <string>

#include "sandwich/wiring.hpp"

namespace sandwich {

std::string render_svg(const WiringDiagram& w);

}  // namespace sandwich
