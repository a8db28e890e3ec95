#include "degenvi/domain.hpp"

#include <algorithm>
#include <cmath>

namespace degenvi {

std::string to_string(DomainKind kind) {
    switch (kind) {
    case DomainKind::Rectangle: return "rectangle";
    case DomainKind::Polygon: return "polygon";
    case DomainKind::HalfDisk: return "half_disk";
    case DomainKind::Thorn: return "thorn";
    }
    return "unknown";
}

namespace {

double signed_area(const Polygon& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % poly.size()];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

double segment_distance(Point z, Point p, Point q) {
    const double dx = q.x - p.x, dy = q.y - p.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((z.x - p.x) * dx + (z.y - p.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(z.x - (p.x + t * dx), z.y - (p.y + t * dy));
}

Slices polygon_slices(const Polygon& poly, double y) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& p = poly[i];
        const Point& q = poly[(i + 1) % poly.size()];
        if ((p.y > y) != (q.y > y)) {
            xs.push_back(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
        }
    }
    std::sort(xs.begin(), xs.end());
    Slices out;
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
        if (xs[i + 1] > xs[i]) out.push_back({xs[i], xs[i + 1]});
    }
    return out;
}

bool point_in_polygon(const Polygon& poly, Point z) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point& p = poly[i];
        const Point& q = poly[j];
        if ((p.y > z.y) != (q.y > z.y) &&
            z.x < (q.x - p.x) * (z.y - p.y) / (q.y - p.y) + p.x) {
            inside = !inside;
        }
    }
    return inside;
}

Slices merge(Slices v) {
    std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    Slices out;
    for (const Interval& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, iv.hi);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

// Point on the boundary of the Koch ball of radius R about the origin in
// polar angle phi: rho = R^2 (1 + sin phi).
Point koch_arc_point(double R, double phi) {
    const double rho = R * R * (1.0 + std::sin(phi));
    return {rho * std::cos(phi), rho * std::sin(phi)};
}

}  // namespace

double thorn_slope(int N, double beta) { return std::pow(static_cast<double>(N), -2.0 / beta); }

HalfPlaneDomain HalfPlaneDomain::rectangle(double x0, double x1, double height) {
    if (!(x1 > x0) || !(height > 0.0)) {
        throw Error(Errc::DegenerateDomain, "rectangle needs x0 < x1 and height > 0");
    }
    HalfPlaneDomain d;
    d.kind_ = DomainKind::Rectangle;
    d.a_ = x0;
    d.b_ = x1;
    d.c_ = height;
    d.polygons_ = {{{x0, 0.0}, {x1, 0.0}, {x1, height}, {x0, height}}};
    d.bbox_ = {x0, x1, 0.0, height};
    return d;
}

HalfPlaneDomain HalfPlaneDomain::polygon(std::vector<Point> vertices) {
    if (vertices.size() < 3) throw Error(Errc::DegenerateDomain, "polygon needs three vertices");
    for (const Point& p : vertices) {
        if (p.y < 0.0) throw Error(Errc::DegenerateDomain, "polygon leaves the closed half-plane");
    }
    if (signed_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
    HalfPlaneDomain d;
    d.kind_ = DomainKind::Polygon;
    d.polygons_ = {vertices};
    if (d.gamma0().empty()) throw Error(Errc::DegenerateDomain, "polygon has no edge on y = 0");
    BoundingBox box{vertices[0].x, vertices[0].x, 0.0, vertices[0].y};
    for (const Point& p : vertices) {
        box.x0 = std::min(box.x0, p.x);
        box.x1 = std::max(box.x1, p.x);
        box.y1 = std::max(box.y1, p.y);
        d.breaks_.push_back(p.y);
    }
    d.bbox_ = box;
    std::sort(d.breaks_.begin(), d.breaks_.end());
    d.breaks_.erase(std::unique(d.breaks_.begin(), d.breaks_.end()), d.breaks_.end());
    return d;
}

HalfPlaneDomain HalfPlaneDomain::half_disk(double center_x, double radius) {
    if (!(radius > 0.0)) throw Error(Errc::DegenerateDomain, "half-disk radius must be positive");
    HalfPlaneDomain d;
    d.kind_ = DomainKind::HalfDisk;
    d.a_ = center_x;
    d.b_ = radius;
    Polygon poly;
    constexpr int samples = 256;
    for (int i = 0; i <= samples; ++i) {
        const double phi = M_PI * i / samples;
        poly.push_back({center_x + radius * std::cos(phi), radius * std::sin(phi)});
    }
    poly.back().y = 0.0;
    d.polygons_ = {poly};
    d.bbox_ = {center_x - radius, center_x + radius, 0.0, radius};
    return d;
}

HalfPlaneDomain HalfPlaneDomain::thorn(int n_max, double beta, int arc_samples) {
    if (n_max < 1 || !(beta > 0.0)) {
        throw Error(Errc::PreconditionViolated, "thorn needs N_max >= 1 and beta > 0");
    }
    HalfPlaneDomain d;
    d.kind_ = DomainKind::Thorn;
    d.n_max_ = n_max;
    d.c_ = beta;
    double x1 = 0.0, y1 = 0.0;
    for (int k = 1; k <= n_max; ++k) {
        const double phi = std::atan(thorn_slope(k, beta));
        const double r_out = 1.0 / k, r_in = 1.0 / (k + 1);
        Polygon poly;
        for (int i = 0; i <= arc_samples; ++i) poly.push_back(koch_arc_point(r_in, phi * i / arc_samples));
        for (int i = arc_samples; i >= 0; --i) poly.push_back(koch_arc_point(r_out, phi * i / arc_samples));
        poly.front().y = 0.0;
        poly.back().y = 0.0;
        std::reverse(poly.begin(), poly.end());
        d.polygons_.push_back(std::move(poly));
        for (double R : {r_out, r_in}) {
            d.breaks_.push_back(koch_arc_point(R, phi).y);
        }
        d.breaks_.push_back(2.0 * r_in * r_in);
        // (1 + sin t) cos t peaks at t = pi/6
        const double t = std::min(phi, M_PI / 6.0);
        x1 = std::max(x1, koch_arc_point(r_out, t).x);
        y1 = std::max(y1, koch_arc_point(r_out, phi).y);
    }
    std::sort(d.breaks_.begin(), d.breaks_.end());
    d.breaks_.erase(std::unique(d.breaks_.begin(), d.breaks_.end()), d.breaks_.end());
    const double r_min = 1.0 / (n_max + 1);
    d.bbox_ = {r_min * r_min, x1, 0.0, y1};
    return d;
}

HalfPlaneDomain thorn_domain(int n_max, double beta) { return HalfPlaneDomain::thorn(n_max, beta); }

bool HalfPlaneDomain::contains(Point z) const {
    if (!(z.y > 0.0)) return false;
    switch (kind_) {
    case DomainKind::Rectangle:
        return z.x > a_ && z.x < b_ && z.y < c_;
    case DomainKind::Polygon:
        return point_in_polygon(polygons_.front(), z);
    case DomainKind::HalfDisk:
        return std::hypot(z.x - a_, z.y) < b_;
    case DomainKind::Thorn: {
        if (!(z.x > 0.0)) return false;
        const double d = koch_distance(z, {0.0, 0.0});
        if (!(d > 0.0)) return false;
        const int guess = static_cast<int>(std::floor(1.0 / d));
        for (int k = std::max(1, guess - 1); k <= std::min(n_max_, guess + 1); ++k) {
            if (d >= 1.0 / (k + 1) && d < 1.0 / k) return z.y < thorn_slope(k, c_) * z.x;
        }
        return false;
    }
    }
    return false;
}

Slices HalfPlaneDomain::x_slices(double y) const {
    if (!(y > 0.0)) return {};
    switch (kind_) {
    case DomainKind::Rectangle:
        if (y >= c_) return {};
        return {{a_, b_}};
    case DomainKind::Polygon:
        return polygon_slices(polygons_.front(), y);
    case DomainKind::HalfDisk: {
        if (y >= b_) return {};
        const double w = std::sqrt(b_ * b_ - y * y);
        return {{a_ - w, a_ + w}};
    }
    case DomainKind::Thorn: {
        Slices out;
        for (int k = n_max_; k >= 1; --k) {
            const KochBall outer{{0.0, 0.0}, 1.0 / k};
            const KochBall inner{{0.0, 0.0}, 1.0 / (k + 1)};
            const double hi = outer.half_width(y);
            if (!(hi > 0.0)) continue;
            const double lo = std::max(y / thorn_slope(k, c_), inner.half_width(y));
            if (lo < hi) out.push_back({lo, hi});
        }
        return merge(std::move(out));
    }
    }
    return {};
}

Slices HalfPlaneDomain::gamma0() const {
    switch (kind_) {
    case DomainKind::Rectangle: return {{a_, b_}};
    case DomainKind::HalfDisk: return {{a_ - b_, a_ + b_}};
    case DomainKind::Thorn: {
        const double r = 1.0 / (n_max_ + 1);
        return {{r * r, 1.0}};
    }
    case DomainKind::Polygon: {
        Slices out;
        const Polygon& poly = polygons_.front();
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point& p = poly[i];
            const Point& q = poly[(i + 1) % poly.size()];
            if (p.y == 0.0 && q.y == 0.0 && p.x != q.x) {
                out.push_back({std::min(p.x, q.x), std::max(p.x, q.x)});
            }
        }
        return merge(std::move(out));
    }
    }
    return {};
}

std::vector<double> HalfPlaneDomain::y_breaks() const { return breaks_; }

bool HalfPlaneDomain::on_gamma1(Point z, double tol) const {
    if (!(z.y >= 0.0)) return false;
    switch (kind_) {
    case DomainKind::Rectangle: {
        const bool in_x = z.x >= a_ - tol && z.x <= b_ + tol;
        const bool sides = (std::abs(z.x - a_) <= tol || std::abs(z.x - b_) <= tol) && z.y <= c_ + tol;
        const bool top = std::abs(z.y - c_) <= tol && in_x;
        return sides || top;
    }
    case DomainKind::HalfDisk:
        return std::abs(std::hypot(z.x - a_, z.y) - b_) <= tol;
    case DomainKind::Polygon:
    case DomainKind::Thorn:
        for (const Polygon& poly : polygons_) {
            for (std::size_t i = 0; i < poly.size(); ++i) {
                const Point& p = poly[i];
                const Point& q = poly[(i + 1) % poly.size()];
                if (p.y == 0.0 && q.y == 0.0) continue;
                if (segment_distance(z, p, q) <= tol) return true;
            }
        }
        return false;
    }
    return false;
}

std::vector<Point> HalfPlaneDomain::corners() const {
    std::vector<Point> out;
    for (const Interval& iv : gamma0()) {
        out.push_back({iv.lo, 0.0});
        out.push_back({iv.hi, 0.0});
    }
    return out;
}

}  // namespace degenvi
