#pragma once

#include "degenvi/model.hpp"

#include <functional>
#include <vector>

namespace degenvi {

/// Koch distance |z - z0| / sqrt(y + y0 + |z - z0|).
double koch_distance(Point z, Point z0);

/// Radii R1 <= R2 with E_{R1}(z0) inside the Koch ball of radius R and
/// the Koch ball inside E_{R2}(z0) (Euclidean balls):
/// R1 = R (R + sqrt y0) / 2000, R2 = 2R (R + sqrt y0).
struct InclusionRadii {
    double inner = 0.0;
    double outer = 0.0;
};

InclusionRadii euclidean_inclusion_radii(double R, double y0);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
};

/// Sorted, pairwise disjoint intervals of a horizontal cross-section.
using Slices = std::vector<Interval>;

Slices intersect(const Slices& a, const Slices& b);

class HalfPlaneDomain;

enum class BallFrame { HalfPlane, Domain };

/// Koch ball {z : d(z, center) < radius}. Membership is tested on the
/// closed half-plane so that nodes on y = 0 belong to balls centred on Γ0.
struct KochBall {
    Point center;
    double radius = 0.0;
    BallFrame frame = BallFrame::HalfPlane;

    bool contains(Point z) const;
    /// Half-width of the cross-section at height y (0 when empty).
    double half_width(double y) const;
    double y_min() const;
    double y_max() const;
    Slices slices(double y) const;
};

/// A planar set described by horizontal cross-sections. Between
/// consecutive y_breaks the slice endpoints vary smoothly in y.
struct Region {
    double y_lo = 0.0;
    double y_hi = 0.0;
    std::vector<double> y_breaks;
    std::function<Slices(double)> slices;
};

Region ball_region(const KochBall& ball);
Region domain_region(const HalfPlaneDomain& domain);
/// Restriction of `domain` to the axis-aligned box.
Region box_region(const HalfPlaneDomain& domain, double x0, double x1, double y0, double y1);
/// Ball relative to the domain: domain ∩ ball.
Region ball_in_domain(const KochBall& ball, const HalfPlaneDomain& domain);
Region intersect(const Region& a, const Region& b);

struct RegionQuadrature {
    int y_subdivisions = 48;     ///< pieces per span between y-breaks
    int points = 6;              ///< Gauss points per piece and per x-piece
    std::vector<double> x_breaks;  ///< integrand kinks in x (sorted)
    std::vector<double> y_breaks;  ///< integrand kinks in y (sorted)
};

using Integrand = std::function<double(double x, double y)>;

/// int_region g(x, y) y^a dx dy. Spans starting at y = 0 use Gauss-Jacobi
/// rules for the factor y^a. Requires a > -1.
double integrate(const Region& region, const Integrand& g, double a, const RegionQuadrature& opts = {});

/// Visits every quadrature point (x, y, weight including y^a).
void for_each_point(const Region& region, double a, const RegionQuadrature& opts,
                    const std::function<void(double, double, double)>& visit);

/// Volume of the ball in its frame with respect to y^a dx dy. The
/// `resolution` is the number of y-pieces between breaks.
double ball_volume(const KochBall& ball, double a, int resolution = 48,
                   const HalfPlaneDomain* domain = nullptr);

struct VolumeRatios {
    double interior = 0.0;  ///< |B_R|_{beta-1} / |BB_R|_{beta-1}
    double exterior = 0.0;  ///< |BB_R \ B_R|_{beta-1} / |BB_R|_{beta-1}
};

/// Requires z0 on the closure of Γ0 and R > 0.
VolumeRatios domain_volume_ratio(const HalfPlaneDomain& domain, double beta, Point z0, double R,
                                 int resolution = 48);

/// Smooth bump used by the cutoff functions: 1 on (-inf, 0], 0 on
/// [1, inf), quintic smoothstep in between (C^2).
double cutoff_profile(double t);
double cutoff_profile_derivative(double t);
/// max |phi'| = 30/16.
inline constexpr double kCutoffProfileSlope = 1.875;

/// Gradient of d^2(z0, z) with respect to z.
Point koch_distance_squared_gradient(Point z0, Point z);

struct CutoffValue {
    double value = 0.0;
    Point gradient;
};

/// eta(z) = phi((d^2(z0, z) - R_inner^2) / (R_outer^2 - R_inner^2)).
CutoffValue cutoff_eval(Point z0, double r_inner, double r_outer, Point z);

}  // namespace degenvi
