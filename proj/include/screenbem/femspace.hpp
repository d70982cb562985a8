// Lowest-order nodal spaces on screen meshes and their interface traces.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "screenbem/geometry.hpp"

namespace screenbem {

/// Discretization mode.
///  - conforming: bilinear elements on one grid, zero trace on the screen edge
///  - dd: two independent grids coupled weakly across the interface gamma
///  - weak_boundary: one grid, the screen-edge condition imposed weakly
///    (gamma = boundary of the screen)
enum class Mode { conforming, dd, weak_boundary };

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

/// Bilinear nodal space. Degrees of freedom are the unconstrained mesh nodes
/// in mesh order; constrained nodes (on the screen edge, where the continuous
/// problem demands a vanishing trace) map to -1. The mesh must outlive the
/// space.
struct DofSpace {
    const Mesh* mesh = nullptr;
    Mode mode = Mode::conforming;
    std::vector<int> dof_of_node;  // -1 for constrained nodes
    std::vector<int> node_of_dof;
    int n_dofs = 0;

    /// Nodes along one side of the interface column, bottom to top, with
    /// their y coordinates. Only filled in dd mode.
    struct TraceChain {
        std::vector<double> breaks;
        std::vector<int> nodes;
    };
    TraceChain gamma1, gamma2;

    int dof(int node) const { return dof_of_node[static_cast<std::size_t>(node)]; }
};

DofSpace make_space(const Mesh& mesh, Mode mode);

/// Value of the bilinear shape function attached to a panel corner
/// (counterclockwise local numbering) at a point of the panel.
double shape_value(const Rect& panel, int local, Point2 p);
/// Its surface curl, curl phi = (d phi / dy, -d phi / dx), constant along the
/// respective opposite edge and of size 1/side.
Vec2 shape_curl(const Rect& panel, int local, Point2 p);

/// Trace of a dof's basis function along a mesh edge, by arclength s in
/// [0, |e|] from edge start: 1-s/L at its own node, linear to 0.
double trace_on_edge(const DofSpace& space, int dof, Edge e, double s);

/// Nodal interpolant: coefficients f(node) in dof order.
Eigen::VectorXd interpolate(const DofSpace& space, const std::function<double(Point2)>& f);

/// One quadrature point of the interface line integral, with the hat-function
/// traces of both sides attached as (dof, value) pairs. Constrained nodes are
/// omitted; tangent is the side-1 positive tangent at the point.
struct GammaPoint {
    Point2 pos;
    double w = 0.0;
    Vec2 tangent;
    std::vector<std::pair<int, double>> side1, side2;
};

struct GammaQuadrature {
    std::vector<GammaPoint> points;
};

/// Line quadrature along gamma. In dd mode gamma is the interface column and
/// the segments merge the breakpoints of both trace meshes, so every hat is a
/// polynomial on every segment; in weak-boundary mode gamma is the screen
/// boundary, one segment per boundary edge, traversed counterclockwise.
/// Conforming spaces have no gamma and get an empty rule. Points are interior
/// to their segments (Gauss), hence never sit on a mesh node.
GammaQuadrature make_gamma_quadrature(const DofSpace& space, int line_order = 4);

/// Jump [u] = u_side1 - u_side2 at a gamma point (trace value in weak-boundary
/// mode, where side2 is empty).
double jump_at(const GammaPoint& gp, const Eigen::VectorXd& coeffs);

}  // namespace screenbem
