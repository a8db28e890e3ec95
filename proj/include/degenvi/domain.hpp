#pragma once

#include "degenvi/geometry.hpp"

#include <string>
#include <vector>

namespace degenvi {

enum class DomainKind { Rectangle, Polygon, HalfDisk, Thorn };

std::string to_string(DomainKind kind);

struct BoundingBox {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
};

using Polygon = std::vector<Point>;

/// Bounded subdomain of the open upper half-plane. Γ0 is the relative
/// interior of the part of the boundary on y = 0 and Γ1 the part inside
/// y > 0. Curved kinds keep an exact description for membership and
/// cross-sections plus a polygonal approximation for cone tests.
class HalfPlaneDomain {
public:
    static HalfPlaneDomain rectangle(double x0, double x1, double height);
    /// Vertices in either orientation; at least one edge must lie on y = 0.
    static HalfPlaneDomain polygon(std::vector<Point> vertices);
    static HalfPlaneDomain half_disk(double center_x, double radius);
    /// Union over N = 1..n_max of C_N \ C'_N where C_N is the part of the
    /// Koch ball of radius 1/N about the origin under the line y = a_N x,
    /// a_N = N^(-2/beta).
    static HalfPlaneDomain thorn(int n_max, double beta, int arc_samples = 64);

    DomainKind kind() const { return kind_; }
    bool contains(Point z) const;
    /// Open cross-section at height y > 0.
    Slices x_slices(double y) const;
    Slices gamma0() const;
    std::vector<double> y_breaks() const;
    BoundingBox bbox() const { return bbox_; }
    /// Polygonal boundary representation, exact for polygons.
    const std::vector<Polygon>& polygons() const { return polygons_; }
    /// z in y > 0 within `tol` of the boundary.
    bool on_gamma1(Point z, double tol) const;
    /// Points of the closure of Γ0 that also lie on the closure of Γ1.
    std::vector<Point> corners() const;

    // Parameters of the analytic kinds.
    double rect_x0() const { return a_; }
    double rect_x1() const { return b_; }
    double rect_height() const { return c_; }
    double disk_center() const { return a_; }
    double disk_radius() const { return b_; }
    int thorn_n_max() const { return n_max_; }
    double thorn_beta() const { return c_; }

private:
    DomainKind kind_ = DomainKind::Rectangle;
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;
    int n_max_ = 0;
    std::vector<Polygon> polygons_;
    BoundingBox bbox_;
    std::vector<double> breaks_;
};

/// Alias matching the thorn constructor; see HalfPlaneDomain::thorn.
HalfPlaneDomain thorn_domain(int n_max, double beta);

/// Slope a_N of the N-th thorn wedge.
double thorn_slope(int N, double beta);

}  // namespace degenvi
