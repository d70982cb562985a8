#include "screenbem/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "screenbem/parallel.hpp"
#include "screenbem/potential.hpp"
#include "screenbem/quadrature.hpp"

namespace screenbem {

double NuRule::value(double h_min) const {
    switch (kind) {
        case Kind::constant: return c;
        case Kind::logpow: return c * std::pow(std::abs(std::log(h_min)), p);
    }
    throw std::logic_error("NuRule::value: unreachable");
}

NuRule NuRule::parse(const std::string& text) {
    NuRule rule;
    if (text.rfind("const:", 0) == 0) {
        rule.kind = Kind::constant;
        std::size_t used = 0;
        rule.c = std::stod(text.substr(6), &used);
        if (used != text.size() - 6) throw std::invalid_argument("nu rule: trailing characters");
    } else if (text.rfind("logpow:", 0) == 0) {
        rule.kind = Kind::logpow;
        const std::string rest = text.substr(7);
        const std::size_t colon = rest.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("nu rule: expected logpow:<p>:<c>");
        std::size_t used = 0;
        rule.p = std::stoi(rest.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("nu rule: bad exponent");
        rule.c = std::stod(rest.substr(colon + 1), &used);
        if (used != rest.size() - colon - 1)
            throw std::invalid_argument("nu rule: trailing characters");
    } else {
        throw std::invalid_argument("nu rule: expected const:<c> or logpow:<p>:<c>");
    }
    if (!std::isfinite(rule.c) || rule.c <= 0.0)
        throw std::invalid_argument("nu rule: coefficient must be positive");
    if (rule.p < 0) throw std::invalid_argument("nu rule: exponent must be >= 0");
    return rule;
}

std::string NuRule::to_string() const {
    char buf[64];
    if (kind == Kind::constant)
        std::snprintf(buf, sizeof(buf), "const:%g", c);
    else
        std::snprintf(buf, sizeof(buf), "logpow:%d:%g", p, c);
    return buf;
}

namespace {

// Same-grid energy contributions through one 4x4 block per panel offset:
// on a uniform grid v_local_block is translation invariant, which cuts the
// panel-pair work from (nx ny)^2 to (2nx-1)(2ny-1) integrations.
void accumulate_grid(Eigen::MatrixXd& A, const DofSpace& space, const GridInfo& g, int q_sing,
                     int q_reg, int threads) {
    const Mesh& mesh = *space.mesh;
    const int nx = g.nx, ny = g.ny;
    const int W = 2 * nx - 1;
    const auto slot = [&](int dix, int diy) {
        return static_cast<std::size_t>((dix + nx - 1) + W * (diy + ny - 1));
    };

    std::vector<Eigen::Matrix4d> table(static_cast<std::size_t>(W) * (2 * ny - 1));
    std::vector<std::pair<int, int>> canonical;
    for (int diy = 0; diy <= ny - 1; ++diy)
        for (int dix = -(nx - 1); dix <= nx - 1; ++dix)
            if (diy > 0 || dix >= 0) canonical.push_back({dix, diy});

    parallel_for(
        canonical.size(),
        [&](std::size_t k) {
            const auto [dix, diy] = canonical[k];
            const int ixK = std::max(0, -dix), iyK = std::max(0, -diy);
            const Rect K = g.panel_rect(ixK, iyK);
            const Rect L = g.panel_rect(ixK + dix, iyK + diy);
            Eigen::Matrix4d blk = v_local_block(K, L, q_sing, q_reg);
            // the coincident block is symmetric in exact arithmetic
            if (dix == 0 && diy == 0) blk = 0.5 * (blk + blk.transpose()).eval();
            table[slot(dix, diy)] = blk;
        },
        threads);

    for (const auto& [dix, diy] : canonical)
        if (dix != 0 || diy != 0) table[slot(-dix, -diy)] = table[slot(dix, diy)].transpose();

    for (int iyK = 0; iyK < ny; ++iyK)
        for (int ixK = 0; ixK < nx; ++ixK) {
            const Panel& pk = mesh.panels[static_cast<std::size_t>(g.panel_index(ixK, iyK))];
            int idof[4];
            for (int a = 0; a < 4; ++a) idof[a] = space.dof(pk.nodes[a]);
            for (int iyL = 0; iyL < ny; ++iyL)
                for (int ixL = 0; ixL < nx; ++ixL) {
                    const Eigen::Matrix4d& blk = table[slot(ixL - ixK, iyL - iyK)];
                    const Panel& pl =
                        mesh.panels[static_cast<std::size_t>(g.panel_index(ixL, iyL))];
                    for (int b = 0; b < 4; ++b) {
                        const int j = space.dof(pl.nodes[b]);
                        if (j < 0) continue;
                        for (int a = 0; a < 4; ++a)
                            if (idof[a] >= 0) A(idof[a], j) += blk(a, b);
                    }
                }
        }
}

void accumulate_cross(Eigen::MatrixXd& A, const DofSpace& space, int q_sing, int q_reg,
                      int threads) {
    const Mesh& mesh = *space.mesh;
    const GridInfo& g1 = mesh.grids[0];
    const GridInfo& g2 = mesh.grids[1];
    const std::size_t np1 = static_cast<std::size_t>(g1.nx) * g1.ny;
    const std::size_t np2 = static_cast<std::size_t>(g2.nx) * g2.ny;
    const std::size_t total = np1 * np2;
    const std::size_t batch = 1 << 16;  // bounds the block buffer at 8 MB

    std::vector<Eigen::Matrix4d> blocks(std::min(batch, total));
    for (std::size_t base = 0; base < total; base += batch) {
        const std::size_t count = std::min(batch, total - base);
        parallel_for(
            count,
            [&](std::size_t k) {
                const std::size_t idx = base + k;
                const int pk = g1.panel0 + static_cast<int>(idx / np2);
                const int pl = g2.panel0 + static_cast<int>(idx % np2);
                blocks[k] =
                    v_local_block(mesh.panel_rect(pk), mesh.panel_rect(pl), q_sing, q_reg);
            },
            threads);

        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t idx = base + k;
            const Panel& pk = mesh.panels[static_cast<std::size_t>(g1.panel0) + idx / np2];
            const Panel& pl = mesh.panels[static_cast<std::size_t>(g2.panel0) + idx % np2];
            const Eigen::Matrix4d& blk = blocks[k];
            for (int a = 0; a < 4; ++a) {
                const int i = space.dof(pk.nodes[a]);
                if (i < 0) continue;
                for (int b = 0; b < 4; ++b) {
                    const int j = space.dof(pl.nodes[b]);
                    if (j < 0) continue;
                    A(i, j) += blk(a, b);
                    A(j, i) += blk(a, b);  // transpose block of the pair (L, K)
                }
            }
        }
    }
}

}  // namespace

Eigen::MatrixXd assemble_v_block(const DofSpace& space, int q_sing, int q_reg, int threads) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(space.n_dofs, space.n_dofs);
    for (const GridInfo& g : space.mesh->grids)
        accumulate_grid(A, space, g, q_sing, q_reg, threads);
    if (space.mesh->two_domain()) accumulate_cross(A, space, q_sing, q_reg, threads);
    // the same-grid scatter walks (K,L) and (L,K) in different orders, which
    // reassociates the per-entry sums; averaging restores exact symmetry
    A = (0.5 * (A + A.transpose())).eval();
    return A;
}

Eigen::MatrixXd assemble_trace_matrix(const DofSpace& space, const GammaQuadrature& gq,
                                      int q_sing, int q_reg, int threads) {
    if (space.mode == Mode::conforming)
        throw std::invalid_argument("assemble_trace_matrix: conforming spaces have no gamma");
    const double factor = space.mode == Mode::dd ? 2.0 : 1.0;  // T1 - T2 = 2 T1 identically

    const auto& pts = gq.points;
    std::vector<Eigen::VectorXd> tcol(pts.size());
    parallel_for(
        pts.size(),
        [&](std::size_t k) {
            const GammaPoint& gp = pts[k];
            const auto pot = potential_basis_at(space, gp.pos, q_sing, q_reg);
            tcol[k] = pot.col(0) * gp.tangent.x + pot.col(1) * gp.tangent.y;
        },
        threads);

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(space.n_dofs, space.n_dofs);
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const GammaPoint& gp = pts[k];
        for (const auto& [i, v] : gp.side1) M.row(i) += (factor * gp.w * v) * tcol[k].transpose();
        for (const auto& [i, v] : gp.side2) M.row(i) -= (factor * gp.w * v) * tcol[k].transpose();
    }
    return M;
}

Eigen::MatrixXd assemble_penalty_mass(const DofSpace& space, const GammaQuadrature& gq) {
    if (space.mode == Mode::conforming)
        throw std::invalid_argument("assemble_penalty_mass: conforming spaces have no gamma");
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(space.n_dofs, space.n_dofs);
    std::vector<std::pair<int, double>> local;
    for (const GammaPoint& gp : gq.points) {
        local.clear();
        for (const auto& [d, v] : gp.side1) local.push_back({d, v});
        for (const auto& [d, v] : gp.side2) local.push_back({d, -v});
        for (const auto& [i, vi] : local)
            for (const auto& [j, vj] : local) P(i, j) += gp.w * vi * vj;
    }
    return P;
}

Eigen::VectorXd assemble_rhs(const DofSpace& space, const std::function<double(Point2)>& f,
                             int q_reg) {
    const Mesh& mesh = *space.mesh;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(space.n_dofs);
    const auto ref_rule = tensor_2d(q_reg);
    for (std::size_t p = 0; p < mesh.panels.size(); ++p) {
        const Rect box = mesh.panel_rect(static_cast<int>(p));
        const Panel& panel = mesh.panels[p];
        const double w = box.width(), h = box.height();
        for (const auto& q : ref_rule) {
            const Point2 pt{box.x0 + w * q.p.x, box.y0 + h * q.p.y};
            const double fw = w * h * q.w * f(pt);
            for (int a = 0; a < 4; ++a) {
                const int dof = space.dof(panel.nodes[a]);
                if (dof >= 0) b[dof] += fw * shape_value(box, a, pt);
            }
        }
    }
    return b;
}

Eigen::MatrixXd combine_system(Mode mode, const Eigen::MatrixXd& V, const Eigen::MatrixXd& M,
                               const Eigen::MatrixXd& P, int sigma, double nu) {
    if (sigma != 1 && sigma != -1) throw std::invalid_argument("combine_system: sigma must be +-1");
    if (mode == Mode::conforming) return V;
    if (!(nu > 0.0)) throw std::invalid_argument("combine_system: nu must be positive");
    const double half = mode == Mode::dd ? 0.5 : 1.0;
    // Grouping M with M^T first keeps A bitwise (skew-)symmetric apart from V
    // and P, which are exactly symmetric by construction.
    if (sigma == 1) return V + nu * P + half * (M + M.transpose());
    return V + nu * P + half * (M - M.transpose());
}

LinearSystem assemble_system(const DofSpace& space, const NitscheConfig& config,
                             const std::function<double(Point2)>& f) {
    if (config.mode != space.mode)
        throw std::invalid_argument("assemble_system: config mode does not match the space");
    LinearSystem sys;
    const Eigen::MatrixXd V =
        assemble_v_block(space, config.quad_singular, config.quad_regular);
    if (space.mode == Mode::conforming) {
        sys.A = V;
    } else {
        const GammaQuadrature gq = make_gamma_quadrature(space);
        const Eigen::MatrixXd M =
            assemble_trace_matrix(space, gq, config.quad_singular, config.quad_regular);
        const Eigen::MatrixXd P = assemble_penalty_mass(space, gq);
        sys.nu_used = config.nu.value(space.mesh->h_min);
        sys.A = combine_system(space.mode, V, M, P, config.sigma, sys.nu_used);
    }
    sys.b = assemble_rhs(space, f, config.quad_regular);
    return sys;
}

void dump_matrix(const Eigen::MatrixXd& A, std::ostream& os) {
    char buf[64];
    os << A.rows() << ' ' << A.cols() << '\n';
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), j + 1 < A.cols() ? "%.17g " : "%.17g\n", A(i, j));
            os << buf;
        }
    }
}

}  // namespace screenbem
