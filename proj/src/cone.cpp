#include "degenvi/cone.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace degenvi {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

// Subset of the circle of directions as sorted disjoint arcs in [0, 2pi].
class ArcSet {
public:
    static ArcSet full() { return ArcSet({{0.0, kTwoPi}}); }
    static ArcSet empty() { return ArcSet({}); }
    /// Arc from `start` counter-clockwise over `length`.
    static ArcSet arc(double start, double length) {
        if (length <= 0.0) return empty();
        if (length >= kTwoPi) return full();
        const double s = wrap(start);
        const double e = s + length;
        if (e <= kTwoPi) return ArcSet({{s, e}});
        return ArcSet({{0.0, e - kTwoPi}, {s, kTwoPi}});
    }

    ArcSet intersect(const ArcSet& o) const { return ArcSet(degenvi::intersect(arcs_, o.arcs_)); }

    ArcSet minus(const ArcSet& o) const {
        Slices out;
        for (const Interval& piece : arcs_) {
            double lo = piece.lo;
            for (const Interval& cut : o.arcs_) {
                if (cut.hi <= lo || cut.lo >= piece.hi) continue;
                if (cut.lo > lo) out.push_back({lo, cut.lo});
                lo = std::max(lo, cut.hi);
            }
            if (lo < piece.hi) out.push_back({lo, piece.hi});
        }
        return ArcSet(out);
    }

    ArcSet unite(const ArcSet& o) const {
        Slices all = arcs_;
        all.insert(all.end(), o.arcs_.begin(), o.arcs_.end());
        std::sort(all.begin(), all.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        Slices out;
        for (const Interval& iv : all) {
            if (!out.empty() && iv.lo <= out.back().hi) {
                out.back().hi = std::max(out.back().hi, iv.hi);
            } else {
                out.push_back(iv);
            }
        }
        return ArcSet(out);
    }

    /// Longest connected arc, joining across the 0 / 2pi seam.
    double longest() const {
        if (arcs_.empty()) return 0.0;
        double best = 0.0;
        for (const Interval& iv : arcs_) best = std::max(best, iv.length());
        if (arcs_.size() > 1 && arcs_.front().lo <= 0.0 && arcs_.back().hi >= kTwoPi) {
            best = std::max(best, arcs_.front().length() + arcs_.back().length());
        }
        return best;
    }

private:
    explicit ArcSet(Slices arcs) : arcs_(std::move(arcs)) {}
    Slices arcs_;
};

// Directions of the reach-limited part of segment pq seen from z0, or
// nothing when the segment stays beyond `reach`.
std::optional<ArcSet> segment_shadow(Point z0, Point p, Point q, double reach) {
    const double dx = q.x - p.x, dy = q.y - p.y;
    const double fx = p.x - z0.x, fy = p.y - z0.y;
    const double A = dx * dx + dy * dy;
    const double B = 2.0 * (fx * dx + fy * dy);
    const double C = fx * fx + fy * fy - reach * reach;
    const double disc = B * B - 4.0 * A * C;
    if (A == 0.0 || disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double t0 = std::max(0.0, (-B - sq) / (2.0 * A));
    const double t1 = std::min(1.0, (-B + sq) / (2.0 * A));
    if (t0 > t1) return std::nullopt;
    const double a = std::atan2(fy + t0 * dy, fx + t0 * dx);
    const double b = std::atan2(fy + t1 * dy, fx + t1 * dx);
    double delta = b - a;
    while (delta > M_PI) delta -= kTwoPi;
    while (delta < -M_PI) delta += kTwoPi;
    if (delta >= 0.0) return ArcSet::arc(a, delta);
    return ArcSet::arc(b, -delta);
}

double point_segment_distance(Point z, Point p, Point q) {
    const double dx = q.x - p.x, dy = q.y - p.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((z.x - p.x) * dx + (z.y - p.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(z.x - (p.x + t * dx), z.y - (p.y + t * dy));
}

// Directions d with z0 + h d in the closed half-plane y >= 0.
ArcSet closed_half_plane_arc(Point z0, double h) {
    const double s = z0.y / h;
    if (s >= 1.0) return ArcSet::full();
    const double a = std::asin(s);
    return ArcSet::arc(-a, M_PI + 2.0 * a);
}

ConeConditions check_polygon(const Polygon& poly, Point z0, double opening, double h) {
    constexpr double tol = 1e-12;
    const std::size_t n = poly.size();
    std::optional<ArcSet> inward;
    ArcSet blocked = ArcSet::empty();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % n];
        if (point_segment_distance(z0, p, q) <= tol) {
            // Interior lies to the left of each CCW edge.
            const bool at_p = std::hypot(z0.x - p.x, z0.y - p.y) <= tol;
            const bool at_q = std::hypot(z0.x - q.x, z0.y - q.y) <= tol;
            if (at_p) {
                const Point& prev = poly[(i + n - 1) % n];
                const double out_dir = std::atan2(q.y - p.y, q.x - p.x);
                const double back_dir = std::atan2(prev.y - p.y, prev.x - p.x);
                inward = ArcSet::arc(out_dir, wrap(back_dir - out_dir));
            } else if (!at_q) {
                const double dir = std::atan2(q.y - p.y, q.x - p.x);
                inward = ArcSet::arc(dir, M_PI);
            }
            continue;
        }
        if (auto s = segment_shadow(z0, p, q, h)) blocked = blocked.unite(*s);
    }
    if (!inward) throw Error(Errc::PreconditionViolated, "cone vertex must lie on the domain boundary");
    const ArcSet in_h = closed_half_plane_arc(z0, h);
    const ArcSet interior = inward->minus(blocked).intersect(in_h);
    const ArcSet exterior = ArcSet::full().minus(*inward).minus(blocked).intersect(in_h);
    return {interior.longest() > opening, exterior.longest() > opening};
}

ConeConditions check_half_disk(double cx, double radius, Point z0, double opening, double h) {
    constexpr double tol = 1e-12;
    const double off = z0.x - cx;
    if (z0.y == 0.0 && std::abs(off) < radius) {
        // Flat side: every direction into y > 0 enters the domain, so no
        // exterior cone exists. The interior sector must keep its arc in the
        // closed disk: 2 h (z0 - c).e <= R^2 - |z0 - c|^2 - h^2.
        const double rhs = (radius * radius - off * off - h * h) / (2.0 * h);
        ArcSet in_disk = ArcSet::empty();
        if (off == 0.0) {
            if (rhs >= 0.0) in_disk = ArcSet::full();
        } else {
            const double ratio = rhs / std::abs(off);
            const double axis = off > 0.0 ? M_PI : 0.0;
            if (ratio >= 1.0) {
                in_disk = ArcSet::full();
            } else if (ratio > -1.0) {
                const double span = std::acos(-ratio);
                in_disk = ArcSet::arc(axis - span, 2.0 * span);
            }
        }
        const ArcSet interior = ArcSet::arc(0.0, M_PI).intersect(in_disk);
        return {interior.longest() > opening, false};
    }
    if (std::abs(std::hypot(off, z0.y) - radius) > tol * std::max(1.0, radius)) {
        throw Error(Errc::PreconditionViolated, "cone vertex must lie on the half-disk boundary");
    }
    const double nx = (z0.x - cx) / radius, ny = z0.y / radius;
    const double normal = std::atan2(ny, nx);
    const ArcSet in_h = closed_half_plane_arc(z0, h);
    // Convexity: the sector lies in the closed disk iff its arc does, i.e.
    // n.e <= -h / (2 R) on every direction of the sector.
    ArcSet into = ArcSet::empty();
    const double c = h / (2.0 * radius);
    if (c < 1.0) {
        const double span = std::acos(c);
        into = ArcSet::arc(normal + M_PI - span, 2.0 * span);
    }
    const ArcSet interior = into.intersect(in_h);
    const ArcSet exterior = ArcSet::arc(normal - 0.5 * M_PI, M_PI).intersect(in_h);
    return {interior.longest() > opening, exterior.longest() > opening};
}

}  // namespace

double Cone::opening() const { return std::atan(slope); }

double Cone::first_direction() const {
    switch (orientation) {
    case ConeOrientation::Right: return 0.0;
    case ConeOrientation::Left: return M_PI - opening();
    case ConeOrientation::Custom: return axis_angle - 0.5 * opening();
    }
    return 0.0;
}

ConeConditions cone_condition_check(const HalfPlaneDomain& domain, Point z0, const Cone& cone) {
    if (!(cone.slope > 0.0) || !(cone.height > 0.0)) {
        throw Error(Errc::PreconditionViolated, "cone needs positive slope and height");
    }
    switch (domain.kind()) {
    case DomainKind::Rectangle:
    case DomainKind::Polygon:
        return check_polygon(domain.polygons().front(), z0, cone.opening(), cone.height);
    case DomainKind::HalfDisk:
        return check_half_disk(domain.disk_center(), domain.disk_radius(), z0, cone.opening(), cone.height);
    case DomainKind::Thorn:
        break;
    }
    throw Error(Errc::UnsupportedDomainKind, "cone test is defined for polygonal domains and half-disks");
}

}  // namespace degenvi
