// Gauss rules and regularized quadrature for rectangle-pair kernel integrals.
#pragma once

#include <vector>

#include "screenbem/geometry.hpp"

namespace screenbem {

struct QuadPoint1 {
    double x = 0.0;
    double w = 0.0;
};

struct QuadPoint2 {
    Point2 p;
    double w = 0.0;
};

/// Gauss-Legendre rule with n points on [0,1]; exact for degree <= 2n-1.
std::vector<QuadPoint1> gauss_1d(int n);
/// Gauss rule with n points on a segment [a,b].
std::vector<QuadPoint1> gauss_on_interval(double a, double b, int n);
/// Tensor Gauss rule with n x n points on [0,1]^2.
std::vector<QuadPoint2> tensor_2d(int n);
/// Tensor Gauss rule mapped onto a rectangle.
std::vector<QuadPoint2> tensor_on_rect(const Rect& r, int n);

/// Relative position of two mesh panels. Ordered by increasing singularity.
enum class PanelPairClass { separated, vertex_adjacent, edge_adjacent, coincident };

/// Geometric classification by coordinates (never by node indices, so it works
/// across non-matching interface grids). Pairs with overlapping interiors or a
/// partial-edge contact are not classifiable and are rejected; pair_points()
/// handles the partial-edge case by splitting first.
PanelPairClass classify_pair(const Rect& a, const Rect& b);

struct PairQuadPoint {
    Point2 x;
    Point2 y;
    double w = 0.0;
};

/// Product rule for I = int_K int_L f(x,y) dS_y dS_x where f is smooth times
/// 1/|x-y|. `order` is the Gauss order per transformed dimension. The
/// coincident, edge-adjacent and vertex-adjacent rules remove the kernel
/// singularity exactly through coordinate transforms whose Jacobians vanish
/// at x = y; the separated rule is a plain tensor rule. The class must match
/// the geometry of (K, L).
std::vector<PairQuadPoint> singular_pair_rule(const Rect& K, const Rect& L, PanelPairClass cls,
                                              int order);

/// Quadrature points for an arbitrary admissible panel pair: classifies the
/// pair, splits partial-edge contacts (non-matching interface grids) into
/// classifiable sub-pairs, subdivides close separated pairs once or twice, and
/// delegates to singular_pair_rule. q_sing is used for the singular classes,
/// q_reg for separated ones.
std::vector<PairQuadPoint> pair_points(const Rect& K, const Rect& L, int q_sing, int q_reg);

/// Rule on `panel` for integrands smooth times 1/|y - x| with x close to (or
/// on the boundary of) the panel: the panel is split at the projection of x
/// and each part gets a Duffy-type rule concentrated towards x. Falls back to
/// the plain tensor rule once dist(x, panel) > 2 diam(panel).
std::vector<QuadPoint2> near_singular_point_rule(const Rect& panel, Point2 x, int order);

}  // namespace screenbem
