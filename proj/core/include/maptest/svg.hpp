#pragma once

#include <string>

#include "maptest/simulation.hpp"

namespace maptest {

// SVG 1.1 line plot: log sigma axis running right to left (large sigma first),
// one polyline per non-empty column. Probabilities share a linear [0,1] panel;
// gamma statistics, when present, get a second panel with a log axis.
// Output depends only on the arguments.
std::string render_svg(const SweepResult& result, const std::string& title);

}  // namespace maptest
