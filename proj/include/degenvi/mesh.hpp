#pragma once

#include "degenvi/domain.hpp"

#include <memory>
#include <vector>

namespace degenvi {

/// Corner nodes lie on the closure of both Γ0 and Γ1. Exterior nodes are
/// outside the closed domain and carry the Dirichlet value 0.
enum class NodeTag { Interior, Gamma0, Gamma1, Corner, Exterior };

const char* to_string(NodeTag tag);

struct Cell {
    int i = 0;  ///< column index, spans [xs[i], xs[i+1]]
    int j = 0;  ///< row index, spans [ys[j], ys[j+1]]
    bool cut = false;
    double area_fraction = 1.0;
};

/// Tensor-product mesh over the domain's bounding box, graded toward
/// y = 0. Only cells meeting the domain are kept. Unknowns live on
/// Interior and Gamma0 nodes.
struct Mesh {
    HalfPlaneDomain domain;
    int nx = 0;
    int ny = 0;
    double grading = 1.0;
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<NodeTag> tags;
    std::vector<Cell> cells;
    std::vector<int> free_index;  ///< node -> unknown index or -1
    std::vector<int> free_nodes;  ///< unknown index -> node

    int node(int i, int j) const { return j * (nx + 1) + i; }
    int node_count() const { return (nx + 1) * (ny + 1); }
    int free_count() const { return static_cast<int>(free_nodes.size()); }
    int column(int node) const { return node % (nx + 1); }
    int row(int node) const { return node / (nx + 1); }
    Point point(int node) const { return {xs[column(node)], ys[row(node)]}; }
    bool is_free(int node) const { return free_index[node] >= 0; }
    /// Node lies on the closure of Γ0 (Gamma0 or Corner).
    bool on_closed_gamma0(int node) const;
    /// Node lies on the closure of Γ1 (Gamma1 or Corner).
    bool on_closed_gamma1(int node) const;
    /// Node lies in the closed domain.
    bool in_closure(int node) const { return tags[node] != NodeTag::Exterior; }
    /// Cell (i, j) containing z, clamped to the grid.
    std::pair<int, int> locate(Point z) const;
};

/// y_j = height (j / ny)^grading with height the bounding-box height.
std::shared_ptr<const Mesh> build_mesh(const HalfPlaneDomain& domain, int nx, int ny,
                                       double grading = 1.0);

}  // namespace degenvi
