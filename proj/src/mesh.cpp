#include "degenvi/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace degenvi {

const char* to_string(NodeTag tag) {
    switch (tag) {
    case NodeTag::Interior: return "interior";
    case NodeTag::Gamma0: return "gamma0";
    case NodeTag::Gamma1: return "gamma1";
    case NodeTag::Corner: return "corner";
    case NodeTag::Exterior: return "exterior";
    }
    return "unknown";
}

bool Mesh::on_closed_gamma0(int n) const {
    return tags[n] == NodeTag::Gamma0 || tags[n] == NodeTag::Corner;
}

bool Mesh::on_closed_gamma1(int n) const {
    return tags[n] == NodeTag::Gamma1 || tags[n] == NodeTag::Corner;
}

std::pair<int, int> Mesh::locate(Point z) const {
    auto find = [](const std::vector<double>& v, double t) {
        const auto it = std::upper_bound(v.begin(), v.end(), t);
        const int k = static_cast<int>(it - v.begin()) - 1;
        return std::clamp(k, 0, static_cast<int>(v.size()) - 2);
    };
    return {find(xs, z.x), find(ys, z.y)};
}

namespace {

constexpr double kAreaFloor = 1e-8;

NodeTag classify(const HalfPlaneDomain& domain, Point z, double tol) {
    if (z.y == 0.0) {
        for (const Interval& iv : domain.gamma0()) {
            if (std::abs(z.x - iv.lo) <= tol || std::abs(z.x - iv.hi) <= tol) return NodeTag::Corner;
            if (z.x > iv.lo && z.x < iv.hi) return NodeTag::Gamma0;
        }
        return NodeTag::Exterior;
    }
    if (domain.contains(z)) return NodeTag::Interior;
    if (domain.on_gamma1(z, tol)) return NodeTag::Gamma1;
    return NodeTag::Exterior;
}

double cell_area_fraction(const HalfPlaneDomain& domain, double x0, double x1, double y0, double y1) {
    if (domain.kind() == DomainKind::Rectangle) {
        const double w = std::max(0.0, std::min(x1, domain.rect_x1()) - std::max(x0, domain.rect_x0()));
        const double h = std::max(0.0, std::min(y1, domain.rect_height()) - y0);
        return w * h / ((x1 - x0) * (y1 - y0));
    }
    RegionQuadrature opts;
    opts.y_subdivisions = 2;
    opts.points = 4;
    const double area = integrate(box_region(domain, x0, x1, y0, y1), [](double, double) { return 1.0; },
                                  0.0, opts);
    return area / ((x1 - x0) * (y1 - y0));
}

}  // namespace

std::shared_ptr<const Mesh> build_mesh(const HalfPlaneDomain& domain, int nx, int ny, double grading) {
    if (nx < 2 || ny < 2) throw Error(Errc::PreconditionViolated, "mesh needs nx, ny >= 2");
    if (!(grading >= 1.0)) throw Error(Errc::PreconditionViolated, "grading must be >= 1");
    auto mesh = std::make_shared<Mesh>();
    mesh->domain = domain;
    mesh->nx = nx;
    mesh->ny = ny;
    mesh->grading = grading;
    const BoundingBox box = domain.bbox();
    for (int i = 0; i <= nx; ++i) mesh->xs.push_back(box.x0 + (box.x1 - box.x0) * i / nx);
    for (int j = 0; j <= ny; ++j) {
        mesh->ys.push_back(box.y1 * std::pow(static_cast<double>(j) / ny, grading));
    }
    mesh->xs.back() = box.x1;
    mesh->ys.back() = box.y1;

    const double tol = 1e-10 * std::max(box.x1 - box.x0, box.y1);
    mesh->tags.resize(mesh->node_count());
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            mesh->tags[mesh->node(i, j)] = classify(domain, {mesh->xs[i], mesh->ys[j]}, tol);
        }
    }

    std::vector<char> supported(mesh->node_count(), 0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double frac = cell_area_fraction(domain, mesh->xs[i], mesh->xs[i + 1], mesh->ys[j], mesh->ys[j + 1]);
            if (!(frac > kAreaFloor)) continue;
            mesh->cells.push_back({i, j, frac < 1.0 - 1e-9, std::min(1.0, frac)});
            for (int n : {mesh->node(i, j), mesh->node(i + 1, j), mesh->node(i, j + 1), mesh->node(i + 1, j + 1)}) {
                supported[n] = 1;
            }
        }
    }

    mesh->free_index.assign(mesh->node_count(), -1);
    bool any_gamma0 = false;
    for (int n = 0; n < mesh->node_count(); ++n) {
        const NodeTag t = mesh->tags[n];
        if ((t == NodeTag::Interior || t == NodeTag::Gamma0) && !supported[n]) {
            mesh->tags[n] = NodeTag::Exterior;
            continue;
        }
        if (t == NodeTag::Interior || t == NodeTag::Gamma0) {
            mesh->free_index[n] = static_cast<int>(mesh->free_nodes.size());
            mesh->free_nodes.push_back(n);
        }
        if (t == NodeTag::Gamma0) any_gamma0 = true;
    }
    if (!any_gamma0) throw Error(Errc::DegenerateDomain, "no mesh node on Γ0; refine in x");
    return mesh;
}

}  // namespace degenvi
