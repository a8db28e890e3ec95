#include "degenvi/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace degenvi {

namespace {

struct Hessians {
    GridFunction uxx, uxy, uyy;
};

Hessians nodal_hessians(const GridFunction& u) {
    const Mesh& m = u.mesh();
    std::vector<double> xx(m.node_count()), xy(m.node_count()), yy(m.node_count());
    for (int n = 0; n < m.node_count(); ++n) {
        const NodalDerivatives d = nodal_derivatives(u, n);
        xx[n] = d.uxx;
        xy[n] = d.uxy;
        yy[n] = d.uyy;
    }
    return {GridFunction(u.mesh_ptr(), xx), GridFunction(u.mesh_ptr(), xy), GridFunction(u.mesh_ptr(), yy)};
}

double integrate_cells(const GridFunction& u, double a, const Region* restrict,
                       const std::function<double(const Cell&, double, double)>& g) {
    double sum = 0.0;
    mesh_points(u.mesh(), a, CellQuadrature{}, restrict,
                [&](const Cell& c, double x, double y, double w) { sum += w * g(c, x, y); });
    return sum;
}

}  // namespace

double weighted_norm(const GridFunction& u, const WeightedNormKind& kind, const HestonParams& params,
                     const DerivedConstants& consts, const Region* restrict) {
    const double b1 = consts.beta - 1.0;
    auto ex = [&](double x, double y) { return weight_exponential(params, consts, {x, y}); };
    switch (kind.tag) {
    case NormTag::Lq_w: {
        if (!(kind.q > 0.0)) throw Error(Errc::UnsupportedKind, "L^q norm needs q > 0");
        const double s = integrate_cells(u, b1, restrict, [&](const Cell& c, double x, double y) {
            return std::pow(std::abs(u.value_in_cell(c.i, c.j, {x, y})), kind.q) * ex(x, y);
        });
        return std::pow(s, 1.0 / kind.q);
    }
    case NormTag::L2_ybeta1:
        return std::sqrt(integrate_cells(u, b1, restrict, [&](const Cell& c, double x, double y) {
            const double v = u.value_in_cell(c.i, c.j, {x, y});
            return v * v;
        }));
    case NormTag::L2_ybeta_grad:
        return std::sqrt(integrate_cells(u, consts.beta, restrict, [&](const Cell& c, double x, double y) {
            const Point g = u.gradient_in_cell(c.i, c.j, {x, y});
            return g.x * g.x + g.y * g.y;
        }));
    case NormTag::H1_w:
        return std::sqrt(integrate_cells(u, b1, restrict, [&](const Cell& c, double x, double y) {
            const double v = u.value_in_cell(c.i, c.j, {x, y});
            const Point g = u.gradient_in_cell(c.i, c.j, {x, y});
            return (y * (g.x * g.x + g.y * g.y) + (1.0 + y) * v * v) * ex(x, y);
        }));
    case NormTag::H2_w: {
        const Hessians h = nodal_hessians(u);
        return std::sqrt(integrate_cells(u, b1, restrict, [&](const Cell& c, double x, double y) {
            const Point z{x, y};
            const double v = u.value_in_cell(c.i, c.j, z);
            const Point g = u.gradient_in_cell(c.i, c.j, z);
            const double hxx = h.uxx.value_in_cell(c.i, c.j, z);
            const double hxy = h.uxy.value_in_cell(c.i, c.j, z);
            const double hyy = h.uyy.value_in_cell(c.i, c.j, z);
            const double second = hxx * hxx + 2.0 * hxy * hxy + hyy * hyy;
            const double first = g.x * g.x + g.y * g.y;
            return (y * y * second + (1.0 + y) * (1.0 + y) * first + (1.0 + y) * v * v) * ex(x, y);
        }));
    }
    }
    throw Error(Errc::UnsupportedKind, "unknown norm kind");
}

double weighted_l2_error(const GridFunction& u, const Field& exact, const HestonParams& params,
                         const DerivedConstants& consts) {
    return std::sqrt(integrate_cells(u, consts.beta - 1.0, nullptr, [&](const Cell& c, double x, double y) {
        const double d = u.value_in_cell(c.i, c.j, {x, y}) - exact({x, y});
        return d * d * weight_exponential(params, consts, {x, y});
    }));
}

double sobolev_ratio(const GridFunction& u, const DerivedConstants& consts) {
    const double p = consts.p;
    const double b1 = consts.beta - 1.0;
    const double lp = integrate_cells(u, b1, nullptr, [&](const Cell& c, double x, double y) {
        return std::pow(std::abs(u.value_in_cell(c.i, c.j, {x, y})), p);
    });
    const double l2 = std::sqrt(integrate_cells(u, b1, nullptr, [&](const Cell& c, double x, double y) {
        const double v = u.value_in_cell(c.i, c.j, {x, y});
        return v * v;
    }));
    if (!(l2 > 0.0)) throw Error(Errc::ZeroFunction, "Sobolev ratio of the zero function");
    const double grad2 = integrate_cells(u, consts.beta, nullptr, [&](const Cell& c, double x, double y) {
        const Point g = u.gradient_in_cell(c.i, c.j, {x, y});
        return g.x * g.x + g.y * g.y;
    });
    if (!(grad2 > 0.0)) return std::numeric_limits<double>::infinity();
    return lp / (std::pow(l2, p - 2.0) * grad2);
}

PoincareEstimate poincare_constant_estimate(const KochBall& ball, const GridFunction& u,
                                            const DerivedConstants& consts) {
    if (ball.center.y != 0.0) throw Error(Errc::PreconditionViolated, "Poincaré ball must be centred on y = 0");
    const Region region = ball_region(ball);
    const double b1 = consts.beta - 1.0;
    const auto one = [](const Cell&, double, double) { return 1.0; };
    const double vol0 = integrate_cells(u, b1, &region, one);
    if (!(vol0 > 0.0)) throw Error(Errc::EmptyBall, "ball misses the mesh domain");
    const double first = integrate_cells(u, b1, &region, [&](const Cell& c, double x, double y) {
        return u.value_in_cell(c.i, c.j, {x, y});
    });
    PoincareEstimate est;
    est.mean = first / vol0;
    const double num = integrate_cells(u, b1, &region, [&](const Cell& c, double x, double y) {
        const double d = u.value_in_cell(c.i, c.j, {x, y}) - est.mean;
        return d * d;
    });
    const double vol1 = integrate_cells(u, consts.beta, &region, one);
    const double den = integrate_cells(u, consts.beta, &region, [&](const Cell& c, double x, double y) {
        const Point g = u.gradient_in_cell(c.i, c.j, {x, y});
        return g.x * g.x + g.y * g.y;
    });
    if (!(den > 0.0)) {
        est.constant = true;
        return est;
    }
    est.value = std::sqrt(num / den);
    est.normalized = std::sqrt((num / vol0) / (den / vol1));
    return est;
}

PoincareEstimate poincare_constant_estimate(const KochBall& ball, const std::vector<GridFunction>& probes,
                                            const DerivedConstants& consts) {
    PoincareEstimate best;
    best.constant = true;
    for (const GridFunction& u : probes) {
        const PoincareEstimate e = poincare_constant_estimate(ball, u, consts);
        if (e.constant) continue;
        if (best.constant || e.value > best.value) {
            best.value = e.value;
            best.mean = e.mean;
            best.constant = false;
        }
        best.normalized = std::max(best.normalized, e.normalized);
    }
    return best;
}

std::vector<double> phi_p_profile(const GridFunction& u, const std::vector<double>& p_list,
                                  const HestonParams& params, const DerivedConstants& consts) {
    std::vector<double> vals, weights;
    mesh_points(u.mesh(), consts.beta - 1.0, CellQuadrature{}, nullptr,
                [&](const Cell& c, double x, double y, double w) {
                    vals.push_back(std::abs(u.value_in_cell(c.i, c.j, {x, y})));
                    weights.push_back(w * weight_exponential(params, consts, {x, y}));
                });
    double volume = 0.0;
    for (double w : weights) volume += w;
    if (!(volume > 0.0)) throw Error(Errc::PreconditionViolated, "domain has zero weighted volume");
    const double top = vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
    // the interpolant attains its minimum modulus at a node or a zero crossing
    double bottom = vals.empty() ? 0.0 : *std::min_element(vals.begin(), vals.end());
    const Mesh& m = u.mesh();
    for (int k = 0; k < m.node_count(); ++k)
        if (m.in_closure(k)) bottom = std::min(bottom, std::abs(u[k]));
    std::vector<double> out;
    for (double p : p_list) {
        if (p == 0.0) throw Error(Errc::PreconditionViolated, "p must be nonzero");
        const double scale = p > 0.0 ? top : bottom;
        if (p < 0.0 && !(bottom > 0.0)) {
            throw Error(Errc::NonPositiveFunction, "negative p needs min |u| > 0");
        }
        if (!(scale > 0.0)) {
            out.push_back(0.0);
            continue;
        }
        double s = 0.0;
        for (std::size_t k = 0; k < vals.size(); ++k) s += weights[k] * std::pow(vals[k] / scale, p);
        out.push_back(scale * std::pow(s / volume, 1.0 / p));
    }
    return out;
}

}  // namespace degenvi
