#include "degenvi/spaces.hpp"

#include <cmath>

namespace degenvi {

namespace {

// max over y of the half-width of a ball centred on y = 0 is attained at
// polar angle pi/6 of the boundary rho = R^2 (1 + sin phi).
double boundary_ball_half_extent(double R) { return 0.75 * std::sqrt(3.0) * R * R; }

}  // namespace

Point extension_preimage(const KochBall& ball, Point z) {
    if (ball.center.y != 0.0) throw Error(Errc::PreconditionViolated, "extension needs a centre on y = 0");
    if (ball.contains(z) || koch_distance(z, ball.center) <= ball.radius) return z;
    const double R2 = ball.radius * ball.radius;
    const Point anchor{ball.center.x + R2 / 100.0, R2 / 100.0};
    if (z.y <= anchor.y) {
        // Horizontal circle inversion through the boundary point at height y.
        const double hw = ball.half_width(z.y);
        const double xb = z.x >= anchor.x ? ball.center.x + hw : ball.center.x - hw;
        const double r = xb - anchor.x;
        return {anchor.x + r * r / (z.x - anchor.x), z.y};
    }
    // Boundary crossing on the segment from the anchor to z by bisection.
    double lo = 0.0, hi = 1.0;
    const double dx = z.x - anchor.x, dy = z.y - anchor.y;
    for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (koch_distance({anchor.x + mid * dx, anchor.y + mid * dy}, ball.center) < ball.radius) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // |z' - z0'|^2 / |z - z0'|^2 = t^2 with z' at parameter t along the segment
    const double t = 0.5 * (lo + hi);
    const double s = t * t;
    return {anchor.x + s * dx, anchor.y + s * dy};
}

GridFunction extend(const GridFunction& u, const KochBall& ball) {
    const Mesh& mesh = u.mesh();
    if (ball.center.y != 0.0) throw Error(Errc::PreconditionViolated, "extension needs a centre on y = 0");
    if (mesh.domain.kind() != DomainKind::Rectangle) {
        throw Error(Errc::BallNotContained, "extension target must be a rectangle");
    }
    const double ext = boundary_ball_half_extent(ball.radius);
    const HalfPlaneDomain& d = mesh.domain;
    if (ball.center.x - ext < d.rect_x0() || ball.center.x + ext > d.rect_x1() || ball.y_max() > d.rect_height()) {
        throw Error(Errc::BallNotContained, "rectangle does not contain the ball");
    }
    std::vector<double> out(mesh.node_count());
    for (int n = 0; n < mesh.node_count(); ++n) {
        const Point z = mesh.point(n);
        if (koch_distance(z, ball.center) <= ball.radius) {
            out[n] = u[n];
        } else {
            out[n] = u.value(extension_preimage(ball, z));
        }
    }
    return GridFunction(u.mesh_ptr(), std::move(out));
}

}  // namespace degenvi
