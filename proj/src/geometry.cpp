#include "screenbem/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace screenbem {

namespace {

constexpr double kRelTol = 1e-9;

void append_grid(Mesh& mesh, const Rect& box, int nx, int ny, int subdomain) {
    GridInfo g;
    g.nx = nx;
    g.ny = ny;
    g.px = box.width() / nx;
    g.py = box.height() / ny;
    g.x0 = box.x0;
    g.y0 = box.y0;
    g.node0 = static_cast<int>(mesh.nodes.size());
    g.panel0 = static_cast<int>(mesh.panels.size());
    g.subdomain = subdomain;

    for (int iy = 0; iy <= ny; ++iy)
        for (int ix = 0; ix <= nx; ++ix)
            mesh.nodes.push_back({box.x0 + ix * g.px, box.y0 + iy * g.py});

    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            Panel p;
            p.nodes = {g.node_index(ix, iy), g.node_index(ix + 1, iy),
                       g.node_index(ix + 1, iy + 1), g.node_index(ix, iy + 1)};
            p.subdomain = subdomain;
            mesh.panels.push_back(p);
        }

    mesh.grids.push_back(g);
}

// Counterclockwise boundary edges of one grid, skipping the side that lies on
// the interface (0 = none, 1 = right column is gamma, 2 = left column is gamma).
void append_boundary_edges(Mesh& mesh, const GridInfo& g, int gamma_side) {
    for (int ix = 0; ix < g.nx; ++ix)
        mesh.boundary_edges.push_back({g.node_index(ix, 0), g.node_index(ix + 1, 0)});
    if (gamma_side != 1)
        for (int iy = 0; iy < g.ny; ++iy)
            mesh.boundary_edges.push_back({g.node_index(g.nx, iy), g.node_index(g.nx, iy + 1)});
    for (int ix = g.nx - 1; ix >= 0; --ix)
        mesh.boundary_edges.push_back({g.node_index(ix + 1, g.ny), g.node_index(ix, g.ny)});
    if (gamma_side != 2)
        for (int iy = g.ny - 1; iy >= 0; --iy)
            mesh.boundary_edges.push_back({g.node_index(0, iy + 1), g.node_index(0, iy)});
}

void finalize(Mesh& mesh) {
    double hmax = 0.0, hmin = std::numeric_limits<double>::max();
    for (const auto& g : mesh.grids) {
        hmax = std::max(hmax, std::max(g.px, g.py));
        hmin = std::min(hmin, std::min(g.px, g.py));
    }
    mesh.h = hmax;
    mesh.h_min = hmin;

    mesh.supports_.assign(mesh.nodes.size(), {});
    for (int p = 0; p < static_cast<int>(mesh.panels.size()); ++p)
        for (int c = 0; c < 4; ++c)
            mesh.supports_[static_cast<std::size_t>(mesh.panels[p].nodes[c])].push_back({p, c});
}

}  // namespace

Point2 Rect::corner(int local) const {
    switch (local) {
        case 0: return {x0, y0};
        case 1: return {x1, y0};
        case 2: return {x1, y1};
        case 3: return {x0, y1};
        default: throw std::invalid_argument("Rect::corner: local index must be in 0..3");
    }
}

double distance(const Rect& r, Point2 p) {
    const double dx = std::max({r.x0 - p.x, 0.0, p.x - r.x1});
    const double dy = std::max({r.y0 - p.y, 0.0, p.y - r.y1});
    return std::hypot(dx, dy);
}

double distance(const Rect& a, const Rect& b) {
    const double dx = std::max({a.x0 - b.x1, 0.0, b.x0 - a.x1});
    const double dy = std::max({a.y0 - b.y1, 0.0, b.y0 - a.y1});
    return std::hypot(dx, dy);
}

Rect Mesh::panel_rect(int p) const {
    const Panel& panel = panels.at(static_cast<std::size_t>(p));
    const Point2 a = nodes[static_cast<std::size_t>(panel.nodes[0])];
    const Point2 c = nodes[static_cast<std::size_t>(panel.nodes[2])];
    return {a.x, a.y, c.x, c.y};
}

bool Mesh::node_on_screen_boundary(int node) const {
    const Point2 p = nodes.at(static_cast<std::size_t>(node));
    const double tol = kRelTol * std::max(screen.width(), screen.height());
    return std::abs(p.x - screen.x_range.lo) <= tol || std::abs(p.x - screen.x_range.hi) <= tol ||
           std::abs(p.y - screen.y_range.lo) <= tol || std::abs(p.y - screen.y_range.hi) <= tol;
}

Mesh build_uniform_mesh(const Screen& screen, int n) {
    if (n < 1) throw std::invalid_argument("build_uniform_mesh: n must be >= 1");
    if (screen.width() <= 0.0 || screen.height() <= 0.0)
        throw std::invalid_argument("build_uniform_mesh: degenerate screen");

    const double h = screen.width() / n;
    const double rows = screen.height() / h;
    const int m = static_cast<int>(std::lround(rows));
    if (m < 1 || std::abs(rows - m) > kRelTol * std::max(1.0, rows))
        throw std::invalid_argument("build_uniform_mesh: screen aspect incompatible with square panels");

    Mesh mesh;
    mesh.screen = screen;
    append_grid(mesh, {screen.x_range.lo, screen.y_range.lo, screen.x_range.hi, screen.y_range.hi},
                n, m, 1);
    append_boundary_edges(mesh, mesh.grids[0], 0);
    finalize(mesh);
    return mesh;
}

std::pair<Mesh, Decomposition> decompose(const Screen& screen, double split_x, int n1, int n2) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("decompose: subdomain levels must be >= 1");
    const double margin = kRelTol * screen.width();
    if (!(split_x > screen.x_range.lo + margin && split_x < screen.x_range.hi - margin))
        throw std::invalid_argument("decompose: split_x must lie strictly inside the screen");

    Mesh mesh;
    mesh.screen = screen;

    const double H = screen.height();
    const double w1 = split_x - screen.x_range.lo;
    const double w2 = screen.x_range.hi - split_x;
    const int rows[2] = {n1, n2};
    const double widths[2] = {w1, w2};
    const double lefts[2] = {screen.x_range.lo, split_x};

    for (int s = 0; s < 2; ++s) {
        const double py = H / rows[s];
        const int cols = std::max(1, static_cast<int>(std::lround(widths[s] / py)));
        append_grid(mesh, {lefts[s], screen.y_range.lo, lefts[s] + widths[s], screen.y_range.hi},
                    cols, rows[s], s + 1);
    }

    append_boundary_edges(mesh, mesh.grids[0], 1);
    append_boundary_edges(mesh, mesh.grids[1], 2);

    const GridInfo& g1 = mesh.grids[0];
    for (int iy = 0; iy < g1.ny; ++iy)
        mesh.interface_side1.push_back({g1.node_index(g1.nx, iy), g1.node_index(g1.nx, iy + 1)});
    const GridInfo& g2 = mesh.grids[1];
    for (int iy = 0; iy < g2.ny; ++iy)
        mesh.interface_side2.push_back({g2.node_index(0, iy), g2.node_index(0, iy + 1)});

    finalize(mesh);

    Decomposition dec;
    dec.split_x = split_x;
    dec.gamma_y = screen.y_range;
    dec.tangent1 = {0.0, 1.0};
    return {std::move(mesh), dec};
}

int refine(int n) {
    if (n < 1) throw std::invalid_argument("refine: n must be >= 1");
    if (n > (1 << 20)) throw std::overflow_error("refine: level parameter overflow");
    return 2 * n;
}

std::vector<int> refinement_levels(int n0, int count) {
    if (n0 < 1) throw std::invalid_argument("refinement_levels: n0 must be >= 1");
    if (count < 1) throw std::invalid_argument("refinement_levels: count must be >= 1");
    std::vector<int> levels;
    levels.reserve(static_cast<std::size_t>(count));
    int n = n0;
    for (int l = 0; l < count; ++l) {
        levels.push_back(n);
        if (l + 1 < count) n = refine(n);
    }
    return levels;
}

void dump_mesh(const Mesh& mesh, std::ostream& os) {
    char buf[128];
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "node %zu %.17g %.17g\n", i, mesh.nodes[i].x, mesh.nodes[i].y);
        os << buf;
    }
    for (std::size_t i = 0; i < mesh.panels.size(); ++i) {
        const Panel& p = mesh.panels[i];
        std::snprintf(buf, sizeof(buf), "panel %zu %d %d %d %d %d\n", i, p.nodes[0], p.nodes[1],
                      p.nodes[2], p.nodes[3], p.subdomain);
        os << buf;
    }
}

}  // namespace screenbem
