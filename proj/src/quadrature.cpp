#include "screenbem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace screenbem {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Relative tolerance for contact decisions. Mesh coordinates are affine images
// of integer grid indices, so distinct coordinates differ by a panel fraction
// while equal ones agree to a few ulps.
double pair_tol(const Rect& a, const Rect& b) {
    return 1e-9 * std::max(a.diag(), b.diag());
}

struct PairRelation {
    enum Kind { separated, vertex, edge, partial_edge, coincident };
    Kind kind = separated;
    double dist = 0.0;   // separated only
    int axis = -1;       // 0: contact along a line x = const, 1: along y = const
    Point2 corner{};     // vertex only
};

PairRelation analyze_pair(const Rect& K, const Rect& L) {
    const double tol = pair_tol(K, L);
    const double ox = std::min(K.x1, L.x1) - std::max(K.x0, L.x0);
    const double oy = std::min(K.y1, L.y1) - std::max(K.y0, L.y0);

    if (ox > tol && oy > tol) {
        const bool same = std::abs(K.x0 - L.x0) <= tol && std::abs(K.x1 - L.x1) <= tol &&
                          std::abs(K.y0 - L.y0) <= tol && std::abs(K.y1 - L.y1) <= tol;
        if (!same)
            throw std::invalid_argument("panel pair with overlapping interiors is not admissible");
        return {PairRelation::coincident, 0.0, -1, {}};
    }

    const double d = std::hypot(std::max(0.0, -ox), std::max(0.0, -oy));
    if (d > tol) return {PairRelation::separated, d, -1, {}};

    if (oy > tol) {  // contact along a vertical line
        const bool full = std::abs(K.y0 - L.y0) <= tol && std::abs(K.y1 - L.y1) <= tol;
        return {full ? PairRelation::edge : PairRelation::partial_edge, 0.0, 0, {}};
    }
    if (ox > tol) {  // contact along a horizontal line
        const bool full = std::abs(K.x0 - L.x0) <= tol && std::abs(K.x1 - L.x1) <= tol;
        return {full ? PairRelation::edge : PairRelation::partial_edge, 0.0, 1, {}};
    }

    PairRelation rel;
    rel.kind = PairRelation::vertex;
    rel.corner.x = std::abs(K.x1 - L.x0) <= tol ? 0.5 * (K.x1 + L.x0) : 0.5 * (K.x0 + L.x1);
    rel.corner.y = std::abs(K.y1 - L.y0) <= tol ? 0.5 * (K.y1 + L.y0) : 0.5 * (K.y0 + L.y1);
    return rel;
}

std::vector<PairQuadPoint> tensor_pair(const Rect& K, const Rect& L, int q) {
    const auto rk = tensor_on_rect(K, q);
    const auto rl = tensor_on_rect(L, q);
    std::vector<PairQuadPoint> pts;
    pts.reserve(rk.size() * rl.size());
    for (const auto& a : rk)
        for (const auto& b : rl) pts.push_back({a.p, b.p, a.w * b.w});
    return pts;
}

// Coincident panels, K = L of size w x h. In relative coordinates z = y - x
// the integral becomes int_z int_{K cap (K - z)} f(x, x + z) dx dz with
// z in [-w,w] x [-h,h]. Each sign quadrant z = (s1 w z1, s2 h z2) is mapped by
// the two Duffy charts (z1,z2) = (t,tu) and (tu,t); their Jacobian t cancels
// the 1/|z| kernel singularity. The inner x-integral runs over a rectangle of
// side lengths (w - |zx|)(h - |zy|) and uses a plain tensor rule.
std::vector<PairQuadPoint> coincident_rule(const Rect& K, int q) {
    const auto g = gauss_1d(q);
    const double w = K.width(), h = K.height();
    std::vector<PairQuadPoint> pts;
    pts.reserve(8 * static_cast<std::size_t>(q) * q * q * q);
    for (int s1 : {-1, 1})
        for (int s2 : {-1, 1})
            for (int reg = 0; reg < 2; ++reg)
                for (const auto& t : g)
                    for (const auto& u : g) {
                        const double z1 = reg == 0 ? t.x : t.x * u.x;
                        const double z2 = reg == 0 ? t.x * u.x : t.x;
                        const double zx = s1 * w * z1;
                        const double zy = s2 * h * z2;
                        const double wz = w * h * t.x * t.w * u.w;
                        const double lx = w - std::abs(zx);
                        const double ly = h - std::abs(zy);
                        const double xlo = K.x0 + std::max(0.0, -zx);
                        const double ylo = K.y0 + std::max(0.0, -zy);
                        for (const auto& a : g)
                            for (const auto& b : g) {
                                const Point2 x{xlo + lx * a.x, ylo + ly * b.x};
                                pts.push_back({x, {x.x + zx, x.y + zy}, wz * lx * ly * a.w * b.w});
                            }
                    }
    return pts;
}

// Edge-adjacent panels sharing the full segment {x=e} x [ylo, ylo+H], with K
// on side sK of the contact line and L on side sL = -sK. Parametrize
// x = (e + sK wK a, ylo + H b), y = (e + sL wL p, ylo + H (b + tau)); then
// |x - y|^2 = (wK a + wL p)^2 + (H tau)^2 vanishes linearly at
// (a, p, tau) = 0 only. After splitting the sign of tau this is a corner
// singularity of the cube, removed by the three Duffy charts that pin the
// largest of (a, p, |tau|) to t; their Jacobian is t^2. The remaining b-line
// integral over [max(0,-tau), min(1,1-tau)] is regular and gets a Gauss rule.
std::vector<PairQuadPoint> edge_rule_vertical(double e, double wK, int sK, double wL, int sL,
                                              double ylo, double H, int q) {
    const auto g = gauss_1d(q);
    std::vector<PairQuadPoint> pts;
    pts.reserve(6 * static_cast<std::size_t>(q) * q * q * q);
    for (int s : {-1, 1})
        for (int reg = 0; reg < 3; ++reg)
            for (const auto& t : g)
                for (const auto& v1 : g)
                    for (const auto& v2 : g) {
                        double c[3];
                        const double vv[2] = {v1.x, v2.x};
                        int k = 0;
                        for (int i = 0; i < 3; ++i) c[i] = i == reg ? t.x : t.x * vv[k++];
                        const double a = c[0], p = c[1], tau = s * c[2];
                        const double blo = std::max(0.0, -tau);
                        const double bhi = std::min(1.0, 1.0 - tau);
                        const double len = bhi - blo;
                        if (len <= 0.0) continue;
                        const double base =
                            t.w * v1.w * v2.w * t.x * t.x * wK * wL * H * H * len;
                        for (const auto& b1 : g) {
                            const double b = blo + len * b1.x;
                            const Point2 x{e + sK * wK * a, ylo + H * b};
                            const Point2 y{e + sL * wL * p, ylo + H * (b + tau)};
                            pts.push_back({x, y, base * b1.w});
                        }
                    }
    return pts;
}

Rect swap_axes(const Rect& r) { return {r.y0, r.x0, r.y1, r.x1}; }

std::vector<PairQuadPoint> edge_rule(const Rect& K, const Rect& L, int axis, int q) {
    if (axis == 1) {
        auto pts = edge_rule(swap_axes(K), swap_axes(L), 0, q);
        for (auto& pt : pts) {
            std::swap(pt.x.x, pt.x.y);
            std::swap(pt.y.x, pt.y.y);
        }
        return pts;
    }
    const double tol = pair_tol(K, L);
    const bool k_left = std::abs(K.x1 - L.x0) <= tol;
    const double e = k_left ? 0.5 * (K.x1 + L.x0) : 0.5 * (K.x0 + L.x1);
    return edge_rule_vertical(e, K.width(), k_left ? -1 : 1, L.width(), k_left ? 1 : -1, K.y0,
                              K.height(), q);
}

// Vertex-adjacent panels with common corner v occupy opposite quadrants in
// both axes, so with x = v + (sKx wK a, sKy hK b), y = v + (sLx wL p, sLy hL q)
// the distance |x - y|^2 = (wK a + wL p)^2 + (hK b + hL q)^2 vanishes only at
// the origin of [0,1]^4. The four Duffy charts pinning the largest coordinate
// to t have Jacobian t^3, which cancels the kernel with one power to spare.
std::vector<PairQuadPoint> vertex_rule(const Rect& K, const Rect& L, Point2 v, int q) {
    const auto g = gauss_1d(q);
    const int sKx = K.center().x > v.x ? 1 : -1;
    const int sKy = K.center().y > v.y ? 1 : -1;
    const int sLx = L.center().x > v.x ? 1 : -1;
    const int sLy = L.center().y > v.y ? 1 : -1;
    const double wK = K.width(), hK = K.height(), wL = L.width(), hL = L.height();
    std::vector<PairQuadPoint> pts;
    pts.reserve(4 * static_cast<std::size_t>(q) * q * q * q);
    for (int reg = 0; reg < 4; ++reg)
        for (const auto& t : g)
            for (const auto& v1 : g)
                for (const auto& v2 : g)
                    for (const auto& v3 : g) {
                        double c[4];
                        const double vv[3] = {v1.x, v2.x, v3.x};
                        int k = 0;
                        for (int i = 0; i < 4; ++i) c[i] = i == reg ? t.x : t.x * vv[k++];
                        const double wgt = t.w * v1.w * v2.w * v3.w * t.x * t.x * t.x * wK * hK *
                                           wL * hL;
                        const Point2 x{v.x + sKx * wK * c[0], v.y + sKy * hK * c[1]};
                        const Point2 y{v.x + sLx * wL * c[2], v.y + sLy * hL * c[3]};
                        pts.push_back({x, y, wgt});
                    }
    return pts;
}

void split_breaks(double lo, double hi, double c1, double c2, double tol,
                  std::vector<double>& out) {
    out.clear();
    out.push_back(lo);
    for (double c : {std::min(c1, c2), std::max(c1, c2)})
        if (c > out.back() + tol && c < hi - tol) out.push_back(c);
    out.push_back(hi);
}

void pair_points_impl(const Rect& K, const Rect& L, int q_sing, int q_reg, int depth,
                      std::vector<PairQuadPoint>& out) {
    if (depth > 6) throw std::logic_error("pair_points: splitting recursion did not terminate");
    const PairRelation rel = analyze_pair(K, L);
    switch (rel.kind) {
        case PairRelation::coincident: {
            auto pts = coincident_rule(K, q_sing);
            out.insert(out.end(), pts.begin(), pts.end());
            return;
        }
        case PairRelation::edge: {
            auto pts = edge_rule(K, L, rel.axis, q_sing);
            out.insert(out.end(), pts.begin(), pts.end());
            return;
        }
        case PairRelation::vertex: {
            auto pts = vertex_rule(K, L, rel.corner, q_sing);
            out.insert(out.end(), pts.begin(), pts.end());
            return;
        }
        case PairRelation::separated: {
            // One 2x2 subdivision level when the gap is small against the
            // panel size keeps the plain tensor rule in its comfort zone.
            if (rel.dist < 0.35 * std::max(K.diag(), L.diag()) && depth < 4) {
                const double kxm = 0.5 * (K.x0 + K.x1), kym = 0.5 * (K.y0 + K.y1);
                const double lxm = 0.5 * (L.x0 + L.x1), lym = 0.5 * (L.y0 + L.y1);
                const Rect ks[4] = {{K.x0, K.y0, kxm, kym},
                                    {kxm, K.y0, K.x1, kym},
                                    {K.x0, kym, kxm, K.y1},
                                    {kxm, kym, K.x1, K.y1}};
                const Rect ls[4] = {{L.x0, L.y0, lxm, lym},
                                    {lxm, L.y0, L.x1, lym},
                                    {L.x0, lym, lxm, L.y1},
                                    {lxm, lym, L.x1, L.y1}};
                for (const auto& k : ks)
                    for (const auto& l : ls) pair_points_impl(k, l, q_sing, q_reg, depth + 1, out);
            } else {
                auto pts = tensor_pair(K, L, q_reg);
                out.insert(out.end(), pts.begin(), pts.end());
            }
            return;
        }
        case PairRelation::partial_edge: {
            // Non-matching interface grids: cut both panels at the other's
            // breakpoints along the contact axis. Every resulting sub-pair is
            // edge-adjacent, vertex-adjacent or separated.
            const double tol = pair_tol(K, L);
            std::vector<double> bk, bl;
            if (rel.axis == 0) {
                split_breaks(K.y0, K.y1, L.y0, L.y1, tol, bk);
                split_breaks(L.y0, L.y1, K.y0, K.y1, tol, bl);
                for (std::size_t i = 0; i + 1 < bk.size(); ++i)
                    for (std::size_t j = 0; j + 1 < bl.size(); ++j)
                        pair_points_impl({K.x0, bk[i], K.x1, bk[i + 1]},
                                         {L.x0, bl[j], L.x1, bl[j + 1]}, q_sing, q_reg, depth + 1,
                                         out);
            } else {
                split_breaks(K.x0, K.x1, L.x0, L.x1, tol, bk);
                split_breaks(L.x0, L.x1, K.x0, K.x1, tol, bl);
                for (std::size_t i = 0; i + 1 < bk.size(); ++i)
                    for (std::size_t j = 0; j + 1 < bl.size(); ++j)
                        pair_points_impl({bk[i], K.y0, bk[i + 1], K.y1},
                                         {bl[j], L.y0, bl[j + 1], L.y1}, q_sing, q_reg, depth + 1,
                                         out);
            }
            return;
        }
    }
    throw std::logic_error("pair_points: unreachable");
}

}  // namespace

std::vector<QuadPoint1> gauss_1d(int n) {
    if (n < 1) throw std::invalid_argument("gauss_1d: order must be >= 1");
    std::vector<QuadPoint1> rule(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration on P_n from the Chebyshev initial guess.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 64; ++it) {
            double pprev = 0.0, pcur = 1.0;
            for (int k = 1; k <= n; ++k) {
                const double pnext = ((2 * k - 1) * x * pcur - (k - 1) * pprev) / k;
                pprev = pcur;
                pcur = pnext;
            }
            dp = n * (x * pcur - pprev) / (x * x - 1.0);
            const double dx = -pcur / dp;
            x += dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[static_cast<std::size_t>(i)] = {0.5 * (1.0 - x), 0.5 * w};
        rule[static_cast<std::size_t>(n - 1 - i)] = {0.5 * (1.0 + x), 0.5 * w};
    }
    return rule;
}

std::vector<QuadPoint1> gauss_on_interval(double a, double b, int n) {
    auto rule = gauss_1d(n);
    const double len = b - a;
    for (auto& q : rule) {
        q.x = a + len * q.x;
        q.w *= len;
    }
    return rule;
}

std::vector<QuadPoint2> tensor_2d(int n) {
    const auto g = gauss_1d(n);
    std::vector<QuadPoint2> rule;
    rule.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& gy : g)
        for (const auto& gx : g) rule.push_back({{gx.x, gy.x}, gx.w * gy.w});
    return rule;
}

std::vector<QuadPoint2> tensor_on_rect(const Rect& r, int n) {
    auto rule = tensor_2d(n);
    const double w = r.width(), h = r.height();
    for (auto& q : rule) {
        q.p = {r.x0 + w * q.p.x, r.y0 + h * q.p.y};
        q.w *= w * h;
    }
    return rule;
}

PanelPairClass classify_pair(const Rect& a, const Rect& b) {
    const PairRelation rel = analyze_pair(a, b);
    switch (rel.kind) {
        case PairRelation::separated: return PanelPairClass::separated;
        case PairRelation::vertex: return PanelPairClass::vertex_adjacent;
        case PairRelation::edge: return PanelPairClass::edge_adjacent;
        case PairRelation::coincident: return PanelPairClass::coincident;
        case PairRelation::partial_edge:
            throw std::invalid_argument(
                "classify_pair: partial-edge contact is not a classifiable pair");
    }
    throw std::logic_error("classify_pair: unreachable");
}

std::vector<PairQuadPoint> singular_pair_rule(const Rect& K, const Rect& L, PanelPairClass cls,
                                              int order) {
    if (order < 1) throw std::invalid_argument("singular_pair_rule: order must be >= 1");
    if (classify_pair(K, L) != cls)
        throw std::invalid_argument("singular_pair_rule: class does not match the pair geometry");
    switch (cls) {
        case PanelPairClass::separated: return tensor_pair(K, L, order);
        case PanelPairClass::vertex_adjacent:
            return vertex_rule(K, L, analyze_pair(K, L).corner, order);
        case PanelPairClass::edge_adjacent: return edge_rule(K, L, analyze_pair(K, L).axis, order);
        case PanelPairClass::coincident: return coincident_rule(K, order);
    }
    throw std::logic_error("singular_pair_rule: unreachable");
}

std::vector<PairQuadPoint> pair_points(const Rect& K, const Rect& L, int q_sing, int q_reg) {
    if (q_sing < 1 || q_reg < 1)
        throw std::invalid_argument("pair_points: orders must be >= 1");
    std::vector<PairQuadPoint> out;
    pair_points_impl(K, L, q_sing, q_reg, 0, out);
    return out;
}

std::vector<QuadPoint2> near_singular_point_rule(const Rect& panel, Point2 x, int order) {
    if (order < 1) throw std::invalid_argument("near_singular_point_rule: order must be >= 1");
    if (panel.width() <= 0.0 || panel.height() <= 0.0)
        throw std::invalid_argument("near_singular_point_rule: degenerate panel");

    const double d = distance(panel, x);
    if (d > 2.0 * panel.diag()) return tensor_on_rect(panel, order);

    // Split the panel at the projection of x; each part then has the
    // singularity direction at one corner and gets the 2D corner Duffy rule
    // (a,b) = (t,tu) / (tu,t) whose Jacobian t matches the 1/|y-x| kernel.
    const Point2 xc{std::clamp(x.x, panel.x0, panel.x1), std::clamp(x.y, panel.y0, panel.y1)};
    const double tol = 1e-12 * panel.diag();
    std::vector<double> xs{panel.x0}, ys{panel.y0};
    if (xc.x > panel.x0 + tol && xc.x < panel.x1 - tol) xs.push_back(xc.x);
    xs.push_back(panel.x1);
    if (xc.y > panel.y0 + tol && xc.y < panel.y1 - tol) ys.push_back(xc.y);
    ys.push_back(panel.y1);

    const auto g = gauss_1d(order);
    std::vector<QuadPoint2> pts;
    pts.reserve(2 * (xs.size() - 1) * (ys.size() - 1) * g.size() * g.size());
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            const Rect cell{xs[i], ys[j], xs[i + 1], ys[j + 1]};
            const Point2 anchor{std::clamp(xc.x, cell.x0, cell.x1),
                                std::clamp(xc.y, cell.y0, cell.y1)};
            const double sx = anchor.x <= cell.center().x ? 1.0 : -1.0;
            const double sy = anchor.y <= cell.center().y ? 1.0 : -1.0;
            const double w = cell.width(), h = cell.height();
            for (int reg = 0; reg < 2; ++reg)
                for (const auto& t : g)
                    for (const auto& u : g) {
                        const double a = reg == 0 ? t.x : t.x * u.x;
                        const double b = reg == 0 ? t.x * u.x : t.x;
                        pts.push_back({{anchor.x + sx * w * a, anchor.y + sy * h * b},
                                       w * h * t.x * t.w * u.w});
                    }
        }
    return pts;
}

}  // namespace screenbem
