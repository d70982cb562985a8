// Galerkin assembly of the energy, trace-coupling and penalty matrices.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>

#include "screenbem/femspace.hpp"

namespace screenbem {

/// Penalty rule nu(h_min): either a constant ("const:<c>") or
/// c |log h_min|^p ("logpow:<p>:<c>"). The evaluated value must be positive
/// on the mesh it is used with.
struct NuRule {
    enum class Kind { constant, logpow };
    Kind kind = Kind::constant;
    double c = 1.0;
    int p = 0;

    double value(double h_min) const;
    static NuRule parse(const std::string& text);
    std::string to_string() const;
};

struct NitscheConfig {
    int sigma = -1;  // -1: skew coupling (unconditionally elliptic), +1: symmetric
    NuRule nu{};
    Mode mode = Mode::dd;
    int quad_regular = 5;
    int quad_singular = 6;
};

struct LinearSystem {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    double nu_used = 0.0;
};

/// Energy matrix V(i,j) = <V curl phi_j, curl phi_i>. On uniform grids the
/// local 4x4 pair blocks depend on the panel offset only, so the same-grid
/// part is built from one block table per offset and scattered; cross-grid
/// pairs (dd) are integrated directly. Exactly symmetric by construction.
Eigen::MatrixXd assemble_v_block(const DofSpace& space, int q_sing = 6, int q_reg = 5,
                                 int threads = 0);

/// Trace coupling M(i,j) = <T_1 phi_j - T_2 phi_j, [phi_i]>_gamma in dd mode
/// and <T phi_j, phi_i>_gamma in weak-boundary mode. Rows of dofs without
/// gamma support are zero; columns are dense.
Eigen::MatrixXd assemble_trace_matrix(const DofSpace& space, const GammaQuadrature& gq,
                                      int q_sing = 6, int q_reg = 5, int threads = 0);

/// Penalty mass P(i,j) = <[phi_j], [phi_i]>_gamma (trace mass in weak-boundary
/// mode). Symmetric positive semidefinite.
Eigen::MatrixXd assemble_penalty_mass(const DofSpace& space, const GammaQuadrature& gq);

/// Load vector b(i) = <f, phi_i> by the regular tensor rule per panel.
Eigen::VectorXd assemble_rhs(const DofSpace& space, const std::function<double(Point2)>& f,
                             int q_reg = 5);

/// Combination of the assembled parts into the stiffness matrix:
///   conforming:     A = V
///   dd:             A = V + M/2 + sigma M^T/2 + nu P
///   weak-boundary:  A = V + M + sigma M^T + nu P
/// For sigma = +1 the result is symmetrized exactly (A = (A + A^T)/2 in exact
/// arithmetic already; the explicit form keeps it so in floating point).
Eigen::MatrixXd combine_system(Mode mode, const Eigen::MatrixXd& V, const Eigen::MatrixXd& M,
                               const Eigen::MatrixXd& P, int sigma, double nu);

/// Full assembly from scratch for one mesh/space.
LinearSystem assemble_system(const DofSpace& space, const NitscheConfig& config,
                             const std::function<double(Point2)>& f);

/// Plain-text dump: "rows cols" on the first line, then one row per line,
/// entries %.17g separated by single spaces.
void dump_matrix(const Eigen::MatrixXd& A, std::ostream& os);

}  // namespace screenbem
