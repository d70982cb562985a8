#include "screenbem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace screenbem {

namespace {

// normwise backward error |Ax-b| / (|A| |x| + |b|); a backward stable solve
// keeps this near machine precision regardless of conditioning
double backward_error(const Eigen::MatrixXd& A, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& b) {
    const double norm_a = A.cwiseAbs().rowwise().sum().maxCoeff();
    const double scale = norm_a * x.norm() + b.norm();
    if (scale == 0.0) return x.norm() == 0.0 ? 0.0 : 1.0;
    return (A * x - b).norm() / scale;
}

}  // namespace

Eigen::VectorXd solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    if (A.rows() != A.cols() || A.rows() != b.size())
        throw std::invalid_argument("solve: dimension mismatch");
    if (A.rows() == 0) return Eigen::VectorXd{};

    const double scale = A.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) throw SolveError("solve: zero matrix", 0.0);

    const bool symmetric = (A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
    if (symmetric) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
        if (ldlt.info() == Eigen::Success) {
            Eigen::VectorXd x = ldlt.solve(b);
            if (backward_error(A, x, b) <= 1e-10) return x;
        }
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::VectorXd d = lu.matrixLU().diagonal().cwiseAbs();
    const double dmax = d.maxCoeff();
    const double dmin = d.minCoeff();
    if (!(dmax > 0.0) || dmin <= 1e-14 * dmax)
        throw SolveError("solve: matrix is singular to working precision",
                         dmax > 0.0 ? dmin / dmax : 0.0);
    Eigen::VectorXd x = lu.solve(b);
    const double res = backward_error(A, x, b);
    if (res > 1e-10) {
        char msg[96];
        std::snprintf(msg, sizeof(msg), "solve: backward error %.3e above tolerance", res);
        throw SolveError(msg, dmin / dmax);
    }
    return x;
}

Eigen::VectorXd solve(const LinearSystem& sys) { return solve(sys.A, sys.b); }

Extrapolation extrapolate_energy(double e1, double e2, double e3) {
    const double d1 = e2 - e1;
    const double d2 = e3 - e2;
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw std::invalid_argument("extrapolate_energy: energies must increase strictly");
    const double q = d2 / d1;
    if (!(q > 0.0) || !(q < 1.0))
        throw std::invalid_argument("extrapolate_energy: contraction ratio " + std::to_string(q) +
                                    " outside (0,1)");
    return {e3 + d2 * q / (1.0 - q), q};
}

double error_e1(double energy, double energy_ex_sq) {
    if (!(energy_ex_sq > 0.0)) throw std::invalid_argument("error_e1: reference must be positive");
    return std::sqrt(std::abs(energy_ex_sq - energy) / energy_ex_sq);
}

double error_e2(double jump_norm, double energy_ex_sq) {
    if (!(energy_ex_sq > 0.0)) throw std::invalid_argument("error_e2: reference must be positive");
    if (jump_norm < 0.0) throw std::invalid_argument("error_e2: negative norm");
    return std::sqrt(jump_norm) / std::sqrt(energy_ex_sq);
}

double jump_l2(const GammaQuadrature& gq, const Eigen::VectorXd& coeffs) {
    double acc = 0.0;
    for (const GammaPoint& gp : gq.points) {
        const double j = jump_at(gp, coeffs);
        acc += gp.w * j * j;
    }
    return std::sqrt(acc);
}

double fit_rate(const std::vector<ConvergenceRecord>& records, ErrorKind kind,
                int finest_levels) {
    if (finest_levels < 2) throw std::invalid_argument("fit_rate: need at least two levels");
    if (static_cast<int>(records.size()) < finest_levels)
        throw std::invalid_argument("fit_rate: not enough records");

    std::vector<ConvergenceRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(),
              [](const ConvergenceRecord& a, const ConvergenceRecord& b) { return a.h > b.h; });

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const std::size_t first = sorted.size() - static_cast<std::size_t>(finest_levels);
    for (std::size_t k = first; k < sorted.size(); ++k) {
        const double err = kind == ErrorKind::e1 ? sorted[k].e1 : sorted[k].e2;
        if (!(err > 0.0)) throw std::invalid_argument("fit_rate: errors must be positive");
        const double x = std::log(sorted[k].h);
        const double y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(finest_levels);
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace screenbem
