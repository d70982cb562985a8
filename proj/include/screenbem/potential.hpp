// Single layer potential of surface-curl densities on the screen.
#pragma once

#include <Eigen/Dense>

#include "screenbem/femspace.hpp"
#include "screenbem/geometry.hpp"

namespace screenbem {

/// Weakly singular kernel k(x,y) = 1 / (4 pi |x - y|) of the single layer
/// potential, restricted to the screen plane.
double kernel_value(Point2 x, Point2 y);

/// Local Galerkin block of a panel pair:
///   block(a,b) = int_K int_L curl phi_a(x) . curl phi_b(y) k(x,y) dS_y dS_x
/// over the 4x4 corner shape functions. Handles every admissible pair
/// geometry (partial-edge contacts included) through pair_points().
Eigen::Matrix4d v_local_block(const Rect& K, const Rect& L, int q_sing, int q_reg);

/// One Galerkin entry <V curl phi_j, curl phi_i> assembled from the panel
/// pairs supporting the two dofs. Meant for spot checks; full assembly uses
/// the translation-invariant block tables in the assembly module.
double v_galerkin_entry(const DofSpace& space, int i, int j, int q_sing = 6, int q_reg = 5);

/// Vector potentials (V curl phi_j)(x) of all basis functions at a point of
/// the screen plane, one row per dof. Panels within twice their diameter of x
/// get the near-singular rule, the rest the plain tensor rule.
Eigen::Matrix<double, Eigen::Dynamic, 2> potential_basis_at(const DofSpace& space, Point2 x,
                                                            int q_sing = 6, int q_reg = 5);

/// (V curl_T u_h)(x) for a coefficient vector. x must not coincide with a
/// mesh node (the kernel is not integrable against the curl field there).
Vec2 potential_at(const DofSpace& space, const Eigen::VectorXd& coeffs, Point2 x, int q_sing = 6,
                  int q_reg = 5);

/// Weighted trace T_i u_h(x) = t_i . (V curl_T u_h)(x) on gamma. In dd mode
/// t_1 = (0,1) and t_2 = -t_1, so T_1 + T_2 = 0 holds identically; in
/// weak-boundary mode side must be 1 and the tangent is the counterclockwise
/// boundary tangent at x.
double trace_T(const DofSpace& space, int side, const Eigen::VectorXd& coeffs, Point2 x,
               int q_sing = 6, int q_reg = 5);

/// Counterclockwise tangent of the screen boundary at a boundary point
/// (corners rejected).
Vec2 boundary_tangent(const Screen& screen, Point2 x);

}  // namespace screenbem
