#include "screenbem/potential.hpp"

#include <cmath>
#include <stdexcept>

#include "screenbem/quadrature.hpp"

namespace screenbem {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double kernel_value(Point2 x, Point2 y) {
    return 1.0 / (4.0 * kPi * norm(x - y));
}

Eigen::Matrix4d v_local_block(const Rect& K, const Rect& L, int q_sing, int q_reg) {
    Eigen::Matrix4d block = Eigen::Matrix4d::Zero();
    for (const PairQuadPoint& pt : pair_points(K, L, q_sing, q_reg)) {
        const double kw = pt.w * kernel_value(pt.x, pt.y);
        Vec2 cx[4], cy[4];
        for (int a = 0; a < 4; ++a) cx[a] = shape_curl(K, a, pt.x);
        for (int b = 0; b < 4; ++b) cy[b] = shape_curl(L, b, pt.y);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) block(a, b) += kw * dot(cx[a], cy[b]);
    }
    return block;
}

double v_galerkin_entry(const DofSpace& space, int i, int j, int q_sing, int q_reg) {
    if (i < 0 || i >= space.n_dofs || j < 0 || j >= space.n_dofs)
        throw std::invalid_argument("v_galerkin_entry: dof out of range");
    const Mesh& mesh = *space.mesh;
    const int ni = space.node_of_dof[static_cast<std::size_t>(i)];
    const int nj = space.node_of_dof[static_cast<std::size_t>(j)];
    double value = 0.0;
    for (const auto& [pk, a] : mesh.node_supports(ni))
        for (const auto& [pl, b] : mesh.node_supports(nj))
            value += v_local_block(mesh.panel_rect(pk), mesh.panel_rect(pl), q_sing, q_reg)(a, b);
    return value;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> potential_basis_at(const DofSpace& space, Point2 x,
                                                            int q_sing, int q_reg) {
    const Mesh& mesh = *space.mesh;
    Eigen::Matrix<double, Eigen::Dynamic, 2> pot =
        Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(space.n_dofs, 2);

    const auto ref_rule = tensor_2d(q_reg);  // shared by all far panels
    std::vector<QuadPoint2> rule;
    for (int p = 0; p < static_cast<int>(mesh.panels.size()); ++p) {
        const Rect box = mesh.panel_rect(p);
        const bool near = distance(box, x) <= 2.0 * box.diag();
        if (near) {
            rule = near_singular_point_rule(box, x, q_sing);
        } else {
            rule.resize(ref_rule.size());
            const double w = box.width(), h = box.height();
            for (std::size_t k = 0; k < ref_rule.size(); ++k)
                rule[k] = {{box.x0 + w * ref_rule[k].p.x, box.y0 + h * ref_rule[k].p.y},
                           w * h * ref_rule[k].w};
        }
        const Panel& panel = mesh.panels[static_cast<std::size_t>(p)];
        for (const QuadPoint2& q : rule) {
            const double kw = q.w * kernel_value(x, q.p);
            for (int b = 0; b < 4; ++b) {
                const int dof = space.dof(panel.nodes[b]);
                if (dof < 0) continue;
                const Vec2 c = shape_curl(box, b, q.p);
                pot(dof, 0) += kw * c.x;
                pot(dof, 1) += kw * c.y;
            }
        }
    }
    return pot;
}

Vec2 potential_at(const DofSpace& space, const Eigen::VectorXd& coeffs, Point2 x, int q_sing,
                  int q_reg) {
    if (coeffs.size() != space.n_dofs)
        throw std::invalid_argument("potential_at: coefficient size mismatch");
    const Mesh& mesh = *space.mesh;
    const double tol = 1e-12 * std::max(mesh.screen.width(), mesh.screen.height());
    for (const Point2& n : mesh.nodes)
        if (norm(n - x) <= tol)
            throw std::invalid_argument("potential_at: point coincides with a mesh node");
    const auto pot = potential_basis_at(space, x, q_sing, q_reg);
    const Eigen::RowVector2d v = coeffs.transpose() * pot;
    return {v[0], v[1]};
}

Vec2 boundary_tangent(const Screen& screen, Point2 x) {
    const double tol = 1e-9 * std::max(screen.width(), screen.height());
    const bool on_bottom = std::abs(x.y - screen.y_range.lo) <= tol;
    const bool on_top = std::abs(x.y - screen.y_range.hi) <= tol;
    const bool on_left = std::abs(x.x - screen.x_range.lo) <= tol;
    const bool on_right = std::abs(x.x - screen.x_range.hi) <= tol;
    const int hits = int(on_bottom) + int(on_top) + int(on_left) + int(on_right);
    if (hits != 1)
        throw std::invalid_argument(
            "boundary_tangent: point must lie on exactly one boundary edge");
    if (on_bottom) return {1.0, 0.0};
    if (on_right) return {0.0, 1.0};
    if (on_top) return {-1.0, 0.0};
    return {0.0, -1.0};
}

double trace_T(const DofSpace& space, int side, const Eigen::VectorXd& coeffs, Point2 x,
               int q_sing, int q_reg) {
    Vec2 t;
    if (space.mode == Mode::dd) {
        if (side != 1 && side != 2) throw std::invalid_argument("trace_T: side must be 1 or 2");
        t = side == 1 ? Vec2{0.0, 1.0} : Vec2{0.0, -1.0};
    } else if (space.mode == Mode::weak_boundary) {
        if (side != 1)
            throw std::invalid_argument("trace_T: weak-boundary mode has a single side");
        t = boundary_tangent(space.mesh->screen, x);
    } else {
        throw std::invalid_argument("trace_T: conforming spaces have no weighted trace");
    }
    const Vec2 pot = potential_at(space, coeffs, x, q_sing, q_reg);
    return dot(t, pot);
}

}  // namespace screenbem
