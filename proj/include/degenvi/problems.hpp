#pragma once

#include "degenvi/grid_function.hpp"
#include "degenvi/model.hpp"

namespace degenvi {

/// u*(x, y) = sin(pi x) y (1 - y) on the unit strip with f = A u* in
/// closed form. u* vanishes on Γ1 of (0,1) x (0,1).
struct ManufacturedProblem {
    Field exact;
    Field source;
};

ManufacturedProblem manufactured_problem(const HestonParams& params);

/// Smooth compactly supported bump (1 - r^2)^3 with
/// r^2 = ((x - cx)/ax)^2 + ((y - cy)/ay)^2, zero for r >= 1.
Field bump_field(double cx, double cy, double ax, double ay, double height = 1.0);

/// Tent payoff (width - |e^x - strike|)^+ in the log-price x. Positive only
/// for e^x in (strike - width, strike + width), so it vanishes on Γ1 of
/// strips reaching beyond that range.
Field tent_field(double strike, double width);

}  // namespace degenvi
