#pragma once

#include "degenvi/domain.hpp"

namespace degenvi {

enum class ConeOrientation { Right, Left, Custom };

/// Finite right circular cone in the plane, i.e. a circular sector with
/// opening angle atan(slope) and radius `height`. Right is the wedge
/// {0 < y < slope (x - x0)}, Left its mirror image, Custom is centred on
/// `axis_angle`.
struct Cone {
    double slope = 1.0;
    double height = 0.1;
    ConeOrientation orientation = ConeOrientation::Right;
    double axis_angle = 0.0;

    double opening() const;
    /// Sector directions [first, first + opening()].
    double first_direction() const;
};

struct ConeConditions {
    bool interior = false;  ///< a congruent copy fits in the closure of the domain
    bool exterior = false;  ///< a congruent copy meets the domain closure only at z0
};

/// Decides both conditions over all rotations of the cone, exactly for
/// polygons and rectangles (angular interval arithmetic on the edges
/// within reach) and for half-disks (circle-sector intersection). Thorn
/// domains are rejected with UnsupportedDomainKind.
ConeConditions cone_condition_check(const HalfPlaneDomain& domain, Point z0, const Cone& cone);

}  // namespace degenvi
