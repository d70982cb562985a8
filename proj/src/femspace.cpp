#include "screenbem/femspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "screenbem/quadrature.hpp"

namespace screenbem {

namespace {

DofSpace::TraceChain chain_from_edges(const Mesh& mesh, const std::vector<Edge>& edges) {
    DofSpace::TraceChain chain;
    if (edges.empty()) return chain;
    chain.nodes.push_back(edges.front().a);
    for (const Edge& e : edges) chain.nodes.push_back(e.b);
    chain.breaks.reserve(chain.nodes.size());
    for (int n : chain.nodes) chain.breaks.push_back(mesh.nodes[static_cast<std::size_t>(n)].y);
    return chain;
}

// Hat values of one trace chain at height y, appended as (dof, value).
void chain_entries(const DofSpace& space, const DofSpace::TraceChain& chain, double y,
                   std::vector<std::pair<int, double>>& out) {
    const auto& br = chain.breaks;
    auto it = std::upper_bound(br.begin(), br.end(), y);
    std::size_t k = static_cast<std::size_t>(it - br.begin());
    if (k == 0) k = 1;
    if (k >= br.size()) k = br.size() - 1;
    const double len = br[k] - br[k - 1];
    const double t = (y - br[k - 1]) / len;
    const int d0 = space.dof(chain.nodes[k - 1]);
    const int d1 = space.dof(chain.nodes[k]);
    if (d0 >= 0) out.push_back({d0, 1.0 - t});
    if (d1 >= 0) out.push_back({d1, t});
}

}  // namespace

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::conforming: return "conforming";
        case Mode::dd: return "dd";
        case Mode::weak_boundary: return "weak-boundary";
    }
    throw std::logic_error("mode_name: unreachable");
}

Mode mode_from_name(const std::string& name) {
    if (name == "conforming") return Mode::conforming;
    if (name == "dd") return Mode::dd;
    if (name == "weak-boundary") return Mode::weak_boundary;
    throw std::invalid_argument("unknown mode: " + name);
}

DofSpace make_space(const Mesh& mesh, Mode mode) {
    if (mode == Mode::dd && !mesh.two_domain())
        throw std::invalid_argument("make_space: dd mode needs a decomposed mesh");
    if (mode != Mode::dd && mesh.two_domain())
        throw std::invalid_argument("make_space: decomposed mesh needs dd mode");

    DofSpace space;
    space.mesh = &mesh;
    space.mode = mode;
    space.dof_of_node.assign(mesh.nodes.size(), -1);

    for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
        const bool constrained =
            mode != Mode::weak_boundary && mesh.node_on_screen_boundary(static_cast<int>(n));
        if (constrained) continue;
        space.dof_of_node[n] = space.n_dofs++;
        space.node_of_dof.push_back(static_cast<int>(n));
    }

    if (mode == Mode::dd) {
        space.gamma1 = chain_from_edges(mesh, mesh.interface_side1);
        space.gamma2 = chain_from_edges(mesh, mesh.interface_side2);
    }
    return space;
}

double shape_value(const Rect& panel, int local, Point2 p) {
    const double tol = 1e-9 * panel.diag();
    if (!panel.contains(p, tol))
        throw std::invalid_argument("shape_value: point lies outside the panel");
    const double xi = (p.x - panel.x0) / panel.width();
    const double eta = (p.y - panel.y0) / panel.height();
    switch (local) {
        case 0: return (1.0 - xi) * (1.0 - eta);
        case 1: return xi * (1.0 - eta);
        case 2: return xi * eta;
        case 3: return (1.0 - xi) * eta;
        default: throw std::invalid_argument("shape_value: local index must be in 0..3");
    }
}

Vec2 shape_curl(const Rect& panel, int local, Point2 p) {
    const double tol = 1e-9 * panel.diag();
    if (!panel.contains(p, tol))
        throw std::invalid_argument("shape_curl: point lies outside the panel");
    const double w = panel.width(), h = panel.height();
    const double xi = (p.x - panel.x0) / w;
    const double eta = (p.y - panel.y0) / h;
    switch (local) {
        case 0: return {-(1.0 - xi) / h, (1.0 - eta) / w};
        case 1: return {-xi / h, -(1.0 - eta) / w};
        case 2: return {xi / h, -eta / w};
        case 3: return {(1.0 - xi) / h, eta / w};
        default: throw std::invalid_argument("shape_curl: local index must be in 0..3");
    }
}

double trace_on_edge(const DofSpace& space, int dof, Edge e, double s) {
    if (dof < 0 || dof >= space.n_dofs) throw std::invalid_argument("trace_on_edge: bad dof");
    const Point2 pa = space.mesh->nodes.at(static_cast<std::size_t>(e.a));
    const Point2 pb = space.mesh->nodes.at(static_cast<std::size_t>(e.b));
    const double len = norm(pb - pa);
    if (s < 0.0 || s > len * (1.0 + 1e-12))
        throw std::invalid_argument("trace_on_edge: arclength outside the edge");
    const int node = space.node_of_dof[static_cast<std::size_t>(dof)];
    if (node == e.a) return 1.0 - s / len;
    if (node == e.b) return s / len;
    return 0.0;
}

Eigen::VectorXd interpolate(const DofSpace& space, const std::function<double(Point2)>& f) {
    Eigen::VectorXd coeffs(space.n_dofs);
    for (int d = 0; d < space.n_dofs; ++d)
        coeffs[d] = f(space.mesh->nodes[static_cast<std::size_t>(space.node_of_dof[d])]);
    return coeffs;
}

GammaQuadrature make_gamma_quadrature(const DofSpace& space, int line_order) {
    if (line_order < 1)
        throw std::invalid_argument("make_gamma_quadrature: order must be >= 1");
    GammaQuadrature gq;
    const Mesh& mesh = *space.mesh;

    if (space.mode == Mode::conforming) return gq;

    if (space.mode == Mode::dd) {
        const double gx = mesh.grids[1].x0;
        std::vector<double> breaks = space.gamma1.breaks;
        breaks.insert(breaks.end(), space.gamma2.breaks.begin(), space.gamma2.breaks.end());
        std::sort(breaks.begin(), breaks.end());
        const double tol = 1e-12 * mesh.screen.height();
        breaks.erase(std::unique(breaks.begin(), breaks.end(),
                                 [tol](double a, double b) { return std::abs(a - b) <= tol; }),
                     breaks.end());
        for (std::size_t k = 0; k + 1 < breaks.size(); ++k)
            for (const auto& q : gauss_on_interval(breaks[k], breaks[k + 1], line_order)) {
                GammaPoint gp;
                gp.pos = {gx, q.x};
                gp.w = q.w;
                gp.tangent = {0.0, 1.0};
                chain_entries(space, space.gamma1, q.x, gp.side1);
                chain_entries(space, space.gamma2, q.x, gp.side2);
                gq.points.push_back(std::move(gp));
            }
        return gq;
    }

    // weak_boundary: one segment per boundary edge, counterclockwise
    for (const Edge& e : mesh.boundary_edges) {
        const Point2 pa = mesh.nodes[static_cast<std::size_t>(e.a)];
        const Point2 pb = mesh.nodes[static_cast<std::size_t>(e.b)];
        const double len = norm(pb - pa);
        const Vec2 dir = (1.0 / len) * (pb - pa);
        for (const auto& q : gauss_on_interval(0.0, len, line_order)) {
            GammaPoint gp;
            gp.pos = pa + q.x * dir;
            gp.w = q.w;
            gp.tangent = dir;
            const int da = space.dof(e.a);
            const int db = space.dof(e.b);
            if (da >= 0) gp.side1.push_back({da, 1.0 - q.x / len});
            if (db >= 0) gp.side1.push_back({db, q.x / len});
            gq.points.push_back(std::move(gp));
        }
    }
    return gq;
}

double jump_at(const GammaPoint& gp, const Eigen::VectorXd& coeffs) {
    double v = 0.0;
    for (const auto& [dof, val] : gp.side1) v += coeffs[dof] * val;
    for (const auto& [dof, val] : gp.side2) v -= coeffs[dof] * val;
    return v;
}

}  // namespace screenbem
