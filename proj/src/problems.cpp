#include "degenvi/problems.hpp"

#include <algorithm>
#include <cmath>

namespace degenvi {

ManufacturedProblem manufactured_problem(const HestonParams& p) {
    ManufacturedProblem m;
    m.exact = [](Point z) { return std::sin(M_PI * z.x) * z.y * (1.0 - z.y); };
    m.source = [p](Point z) {
        const double s = std::sin(M_PI * z.x), c = std::cos(M_PI * z.x);
        const double y = z.y;
        const double P = y * (1.0 - y), dP = 1.0 - 2.0 * y;
        const double u = s * P;
        const double ux = M_PI * c * P, uxx = -M_PI * M_PI * s * P;
        const double uy = s * dP, uyy = -2.0 * s;
        const double uxy = M_PI * c * dP;
        return -0.5 * y * (uxx + 2.0 * p.rho * p.sigma * uxy + p.sigma * p.sigma * uyy) -
               (p.r - p.q - 0.5 * y) * ux - p.kappa * (p.theta - y) * uy + p.r * u;
    };
    return m;
}

Field bump_field(double cx, double cy, double ax, double ay, double height) {
    return [=](Point z) {
        const double dx = (z.x - cx) / ax, dy = (z.y - cy) / ay;
        const double r2 = dx * dx + dy * dy;
        if (r2 >= 1.0) return 0.0;
        const double t = 1.0 - r2;
        return height * t * t * t;
    };
}

Field tent_field(double strike, double width) {
    return [=](Point z) { return std::max(0.0, width - std::abs(std::exp(z.x) - strike)); };
}

}  // namespace degenvi
