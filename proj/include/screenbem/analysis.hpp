// Linear solves, energy extrapolation and convergence diagnostics.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "screenbem/assembly.hpp"
#include "screenbem/femspace.hpp"

namespace screenbem {

struct SolveError : std::runtime_error {
    explicit SolveError(const std::string& what, double rcond_estimate)
        : std::runtime_error(what), rcond(rcond_estimate) {}
    double rcond = 0.0;
};

/// Dense direct solve. Symmetric matrices first try a Cholesky-type LDLT
/// factorization and fall back to LU with partial pivoting; the solution is
/// accepted only if the normwise backward error |A x - b| / (|A| |x| + |b|)
/// stays below 1e-10. Singular or numerically rank-deficient systems raise
/// SolveError with a condition estimate.
Eigen::VectorXd solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);
Eigen::VectorXd solve(const LinearSystem& sys);

/// Aitken extrapolation of the exact energy |u|^2 = <W u, u> from three
/// Galerkin energies on nested meshes. The energies must be strictly
/// increasing with a contraction ratio q = (E3-E2)/(E2-E1) in (0,1).
struct Extrapolation {
    double energy_sq = 0.0;  // extrapolated |u|^2
    double q = 0.0;          // observed contraction ratio
};
Extrapolation extrapolate_energy(double e1, double e2, double e3);

/// Energy-based error e1 = |  |u|^2 - <f, u_h>  |^(1/2) / |u|.
double error_e1(double energy, double energy_ex_sq);
/// Trace-based error e2 = |u_h|_{L2(gamma)}^(1/2) / |u|.
double error_e2(double jump_norm, double energy_ex_sq);

/// L2(gamma) norm of the interface jump (of the boundary trace in
/// weak-boundary mode) of a coefficient vector.
double jump_l2(const GammaQuadrature& gq, const Eigen::VectorXd& coeffs);

/// One row of a convergence study.
struct ConvergenceRecord {
    int level = 0;
    double h = 0.0;
    double h_min = 0.0;
    int n_dofs = 0;
    double energy = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double jump_l2 = 0.0;
    double nu = 0.0;
    int sigma = 0;
    Mode mode = Mode::conforming;
    double seconds = 0.0;
};

enum class ErrorKind { e1, e2 };

/// Least-squares slope of log(error) against log(h) over the finest
/// `finest_levels` records. All fitted errors must be positive.
double fit_rate(const std::vector<ConvergenceRecord>& records, ErrorKind kind,
                int finest_levels = 3);

}  // namespace screenbem
