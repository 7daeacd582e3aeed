#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "malleable/prob_core.hpp"

namespace malleable::cli {

/// Runs one command; returns the process exit code
/// (0 ok, 2 bad input, 3 resource cap, 4 infeasible embedding).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// K-L plane plot of a rate-loss frontier on a fixed 800x600 canvas.
std::string frontier_svg(const std::vector<RateLossPoint>& points, double h_x, double h_y);

}  // namespace malleable::cli
