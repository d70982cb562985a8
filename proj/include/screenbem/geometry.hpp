// Rectangular screen meshes and two-subdomain decompositions.
#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace screenbem {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

using Point2 = Vec2;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

/// Flat open screen in the plane z = 0. The surface normal is (0,0,1) and the
/// screen is identified with the rectangle x_range x y_range in R^2.
struct Screen {
    Interval x_range{0.0, 1.0};
    Interval y_range{0.0, 1.0};

    double width() const { return x_range.length(); }
    double height() const { return y_range.length(); }

    static Screen unit_square() { return {}; }
};

/// Axis-aligned rectangle. Corners are numbered counterclockwise starting at
/// the lower-left one: 0=(x0,y0), 1=(x1,y0), 2=(x1,y1), 3=(x0,y1).
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    double diag() const { return std::hypot(width(), height()); }
    double longer_side() const { return std::max(width(), height()); }
    double shorter_side() const { return std::min(width(), height()); }

    Point2 corner(int local) const;
    Point2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    bool contains(Point2 p, double tol = 0.0) const {
        return p.x >= x0 - tol && p.x <= x1 + tol && p.y >= y0 - tol && p.y <= y1 + tol;
    }
};

/// Distance between a point and a rectangle (0 if inside or on the boundary).
double distance(const Rect& r, Point2 p);
/// Distance between two rectangles (0 if they touch or overlap).
double distance(const Rect& a, const Rect& b);

struct Panel {
    std::array<int, 4> nodes{};  // counterclockwise, starting lower-left
    int subdomain = 1;           // 1 or 2
};

struct Edge {
    int a = -1;
    int b = -1;
};

/// Uniform sub-grid of rectangular panels. Panels are indexed row-major,
/// (ix, iy) -> panel0 + iy*nx + ix, nodes likewise with (nx+1) columns.
struct GridInfo {
    int nx = 0, ny = 0;        // panel counts per direction
    double px = 0.0, py = 0.0; // panel side lengths
    double x0 = 0.0, y0 = 0.0; // lower-left corner of the grid
    int node0 = 0;             // first node index
    int panel0 = 0;            // first panel index
    int subdomain = 1;

    int node_index(int ix, int iy) const { return node0 + iy * (nx + 1) + ix; }
    int panel_index(int ix, int iy) const { return panel0 + iy * nx + ix; }
    Rect panel_rect(int ix, int iy) const {
        return {x0 + ix * px, y0 + iy * py, x0 + (ix + 1) * px, y0 + (iy + 1) * py};
    }
};

/// Panel mesh of the screen. Node and panel numbering is row-major per grid
/// (x fastest, bottom row first, side-1 grid before side-2) so that assembled
/// matrices are reproducible bit-for-bit across runs.
///
/// Mesh sizes follow the convention h = max panel side length and
/// h_min = min panel side length; for square panels both equal the
/// side length.
struct Mesh {
    Screen screen;
    std::vector<Point2> nodes;
    std::vector<Panel> panels;

    // Oriented counterclockwise per subdomain boundary; interface edges are
    // oriented in +y and sorted bottom to top. Interface nodes are duplicated
    // between the two sides (non-matching grids carry two independent traces).
    std::vector<Edge> boundary_edges;
    std::vector<Edge> interface_side1;
    std::vector<Edge> interface_side2;

    std::vector<GridInfo> grids;  // one per subdomain
    double h = 0.0;
    double h_min = 0.0;

    bool two_domain() const { return grids.size() == 2; }
    Rect panel_rect(int p) const;

    /// (panel, local corner) pairs supporting each node.
    const std::vector<std::pair<int, int>>& node_supports(int node) const {
        return supports_[static_cast<std::size_t>(node)];
    }

    /// True if the node lies on the outer boundary of the screen.
    bool node_on_screen_boundary(int node) const;

    std::vector<std::vector<std::pair<int, int>>> supports_;  // filled by builders
};

/// Vertical two-subdomain split of the screen. The interface gamma is the
/// segment x = split_x, oriented bottom to top; side 1 (left) carries the
/// tangent t1 = (0,1) and side 2 the opposite one.
struct Decomposition {
    std::optional<double> split_x;
    Interval gamma_y{0.0, 0.0};
    Vec2 tangent1{0.0, 1.0};
};

/// Uniform n x m grid of square panels of side h = width/n; m must make the
/// panels square (screen aspect incompatible with squares is rejected).
Mesh build_uniform_mesh(const Screen& screen, int n);

/// Split the screen at split_x and mesh both sides independently: side i gets
/// n_i panel rows of height H/n_i and as many columns as fit the side width
/// best. Columns are chosen by rounding, so panels are squares whenever the
/// aspect allows and near-square rectangles otherwise.
std::pair<Mesh, Decomposition> decompose(const Screen& screen, double split_x, int n1, int n2);

/// One refinement step of a level parameter: n -> 2n.
int refine(int n);
/// Geometric level sequence [n0, 2 n0, 4 n0, ...] of the given length.
std::vector<int> refinement_levels(int n0, int count);

/// Plain-text dump, one line per entity:
///   node i x y
///   panel i a b c d s
void dump_mesh(const Mesh& mesh, std::ostream& os);

}  // namespace screenbem
