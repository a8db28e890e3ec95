#include "degenvi/geometry.hpp"

#include "degenvi/domain.hpp"
#include "degenvi/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace degenvi {

double koch_distance(Point z, Point z0) {
    const double e = std::hypot(z.x - z0.x, z.y - z0.y);
    if (e == 0.0) return 0.0;
    return e / std::sqrt(z.y + z0.y + e);
}

InclusionRadii euclidean_inclusion_radii(double R, double y0) {
    if (R < 0.0 || y0 < 0.0) {
        throw Error(Errc::PreconditionViolated, "inclusion radii need R >= 0 and y0 >= 0");
    }
    const double s = std::sqrt(y0);
    // d(z, z0) < R with y <= y0 + rho forces rho^2 < R^2 (2 y0 + 2 rho), so
    // rho < R^2 + sqrt(R^4 + 2 R^2 y0) <= 2R (R + sqrt y0). The factor 2R is
    // attained at y0 = 0 by the top point (x0, 2R^2).
    return {R * (R + s) / 2000.0, 2.0 * R * (R + s)};
}

Slices intersect(const Slices& a, const Slices& b) {
    Slices out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max(a[i].lo, b[j].lo);
        const double hi = std::min(a[i].hi, b[j].hi);
        if (lo < hi) out.push_back({lo, hi});
        if (a[i].hi < b[j].hi) ++i; else ++j;
    }
    return out;
}

namespace {

// a \ b for sorted disjoint interval lists.
Slices subtract(const Slices& a, const Slices& b) {
    Slices out;
    for (const Interval& piece : a) {
        double lo = piece.lo;
        for (const Interval& cut : b) {
            if (cut.hi <= lo || cut.lo >= piece.hi) continue;
            if (cut.lo > lo) out.push_back({lo, cut.lo});
            lo = std::max(lo, cut.hi);
        }
        if (lo < piece.hi) out.push_back({lo, piece.hi});
    }
    return out;
}

std::vector<double> merged_breaks(double lo, double hi, const std::vector<double>& a,
                                  const std::vector<double>& b) {
    std::vector<double> out;
    for (double v : a) if (v > lo && v < hi) out.push_back(v);
    for (double v : b) if (v > lo && v < hi) out.push_back(v);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

bool KochBall::contains(Point z) const {
    return z.y >= 0.0 && koch_distance(z, center) < radius;
}

double KochBall::y_min() const {
    return std::max(0.0, center.y - radius * std::sqrt(2.0 * center.y));
}

double KochBall::y_max() const {
    const double r2 = radius * radius;
    return center.y + r2 + std::sqrt(r2 * r2 + 2.0 * r2 * center.y);
}

double KochBall::half_width(double y) const {
    if (y < y_min() || y > y_max()) return 0.0;
    const double r2 = radius * radius;
    // d(z, z0) < R  <=>  |z - z0| < rho_star for fixed y
    const double rho_star = 0.5 * (r2 + std::sqrt(r2 * r2 + 4.0 * r2 * (y + center.y)));
    const double dy = y - center.y;
    return std::sqrt(std::max(0.0, rho_star * rho_star - dy * dy));
}

Slices KochBall::slices(double y) const {
    const double w = half_width(y);
    if (w <= 0.0) return {};
    return {{center.x - w, center.x + w}};
}

Region ball_region(const KochBall& ball) {
    Region region;
    region.y_lo = ball.y_min();
    region.y_hi = ball.y_max();
    region.slices = [ball](double y) { return ball.slices(y); };
    return region;
}

Region domain_region(const HalfPlaneDomain& domain) {
    Region region;
    region.y_lo = 0.0;
    region.y_hi = domain.bbox().y1;
    region.y_breaks = domain.y_breaks();
    region.slices = [domain](double y) { return domain.x_slices(y); };
    return region;
}

Region box_region(const HalfPlaneDomain& domain, double x0, double x1, double y0, double y1) {
    Region region;
    region.y_lo = y0;
    region.y_hi = y1;
    for (double b : domain.y_breaks()) {
        if (b > y0 && b < y1) region.y_breaks.push_back(b);
    }
    region.slices = [domain, x0, x1](double y) {
        return intersect(domain.x_slices(y), Slices{{x0, x1}});
    };
    return region;
}

Region intersect(const Region& a, const Region& b) {
    Region region;
    region.y_lo = std::max(a.y_lo, b.y_lo);
    region.y_hi = std::min(a.y_hi, b.y_hi);
    region.y_breaks = merged_breaks(region.y_lo, region.y_hi, a.y_breaks, b.y_breaks);
    auto fa = a.slices;
    auto fb = b.slices;
    region.slices = [fa, fb](double y) { return intersect(fa(y), fb(y)); };
    return region;
}

Region ball_in_domain(const KochBall& ball, const HalfPlaneDomain& domain) {
    return intersect(ball_region(ball), domain_region(domain));
}

void for_each_point(const Region& region, double a, const RegionQuadrature& opts,
                    const std::function<void(double, double, double)>& visit) {
    if (!(a > -1.0)) throw Error(Errc::NonIntegrable, "exponent a must exceed -1");
    if (!(region.y_hi > region.y_lo)) return;
    std::vector<double> spans{region.y_lo};
    for (double b : merged_breaks(region.y_lo, region.y_hi, region.y_breaks, opts.y_breaks)) {
        spans.push_back(b);
    }
    spans.push_back(region.y_hi);
    const int m = std::max(1, opts.y_subdivisions);
    for (std::size_t s = 0; s + 1 < spans.size(); ++s) {
        const double s0 = spans[s], s1 = spans[s + 1];
        for (int piece = 0; piece < m; ++piece) {
            const double p0 = piece == 0 ? s0 : s0 + (s1 - s0) * piece / m;
            const double p1 = piece + 1 == m ? s1 : s0 + (s1 - s0) * (piece + 1) / m;
            if (!(p1 > p0)) continue;
            const Rule1D yr = weighted_y_rule(p0, p1, a, opts.points);
            for (std::size_t k = 0; k < yr.size(); ++k) {
                const double y = yr.nodes[k];
                for (const Interval& iv : region.slices(y)) {
                    auto first = std::upper_bound(opts.x_breaks.begin(), opts.x_breaks.end(), iv.lo);
                    double lo = iv.lo;
                    for (auto it = first; ; ++it) {
                        const double hi = (it == opts.x_breaks.end() || *it >= iv.hi) ? iv.hi : *it;
                        if (hi > lo) {
                            const Rule1D xr = mapped_legendre(lo, hi, opts.points);
                            for (std::size_t i = 0; i < xr.size(); ++i) {
                                visit(xr.nodes[i], y, xr.weights[i] * yr.weights[k]);
                            }
                        }
                        if (hi >= iv.hi) break;
                        lo = hi;
                    }
                }
            }
        }
    }
}

double integrate(const Region& region, const Integrand& g, double a, const RegionQuadrature& opts) {
    double sum = 0.0;
    for_each_point(region, a, opts, [&](double x, double y, double w) { sum += w * g(x, y); });
    return sum;
}

double ball_volume(const KochBall& ball, double a, int resolution, const HalfPlaneDomain* domain) {
    if (!(a > -1.0)) throw Error(Errc::NonIntegrable, "y^a is not integrable near y = 0 for a <= -1");
    if (resolution < 1) throw Error(Errc::PreconditionViolated, "resolution must be positive");
    if (!(ball.radius > 0.0)) return 0.0;
    RegionQuadrature opts;
    opts.y_subdivisions = resolution;
    if (ball.frame == BallFrame::Domain) {
        if (domain == nullptr) {
            throw Error(Errc::PreconditionViolated, "domain-frame ball needs a domain");
        }
        return integrate(ball_in_domain(ball, *domain), [](double, double) { return 1.0; }, a, opts);
    }
    return integrate(ball_region(ball), [](double, double) { return 1.0; }, a, opts);
}

VolumeRatios domain_volume_ratio(const HalfPlaneDomain& domain, double beta, Point z0, double R,
                                 int resolution) {
    if (!(R > 0.0)) throw Error(Errc::PreconditionViolated, "R must be positive");
    // The thorn's Γ0 accumulates at the origin, which is therefore admitted.
    bool on_closure = domain.kind() == DomainKind::Thorn && z0.x == 0.0 && z0.y == 0.0;
    if (z0.y == 0.0) {
        for (const Interval& iv : domain.gamma0()) {
            if (z0.x >= iv.lo - 1e-12 && z0.x <= iv.hi + 1e-12) on_closure = true;
        }
    }
    if (!on_closure) {
        throw Error(Errc::PreconditionViolated, "center must lie on the closure of Γ0");
    }
    const KochBall ball{z0, R, BallFrame::HalfPlane};
    RegionQuadrature opts;
    opts.y_subdivisions = resolution;
    const auto one = [](double, double) { return 1.0; };
    const double a = beta - 1.0;
    const double whole = integrate(ball_region(ball), one, a, opts);
    const double inside = integrate(ball_in_domain(ball, domain), one, a, opts);
    Region outside = ball_region(ball);
    outside.y_breaks = merged_breaks(outside.y_lo, outside.y_hi, {}, domain.y_breaks());
    outside.slices = [ball, domain](double y) { return subtract(ball.slices(y), domain.x_slices(y)); };
    const double outer = integrate(outside, one, a, opts);
    return {inside / whole, outer / whole};
}

double cutoff_profile(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double cutoff_profile_derivative(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double s = t * (1.0 - t);
    return -30.0 * s * s;
}

Point koch_distance_squared_gradient(Point z0, Point z) {
    const double dx = z.x - z0.x, dy = z.y - z0.y;
    const double e = std::hypot(dx, dy);
    const double s = z.y + z0.y + e;
    if (e == 0.0 || s == 0.0) return {0.0, 0.0};
    const double s2 = s * s;
    return {(2.0 * dx * s - e * dx) / s2, (2.0 * dy * s - e * e - e * dy) / s2};
}

CutoffValue cutoff_eval(Point z0, double r_inner, double r_outer, Point z) {
    if (!(r_inner > 0.0 && r_inner < r_outer)) {
        throw Error(Errc::PreconditionViolated, "cutoff needs 0 < R_inner < R_outer");
    }
    if (z.y < 0.0 || z0.y < 0.0) {
        throw Error(Errc::PreconditionViolated, "cutoff points must lie in the closed half-plane");
    }
    const double d = koch_distance(z, z0);
    const double span = r_outer * r_outer - r_inner * r_inner;
    const double t = (d * d - r_inner * r_inner) / span;
    CutoffValue out;
    out.value = cutoff_profile(t);
    if (t > 0.0 && t < 1.0) {
        const double slope = cutoff_profile_derivative(t) / span;
        const Point g = koch_distance_squared_gradient(z0, z);
        out.gradient = {slope * g.x, slope * g.y};
    }
    return out;
}

}  // namespace degenvi
