#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "screenbem/analysis.hpp"

using namespace screenbem;

TEST_CASE("direct solve on well-posed systems") {
    Eigen::MatrixXd A(2, 2);
    A << 4.0, 1.0, 1.0, 3.0;
    Eigen::VectorXd b(2);
    b << 1.0, 2.0;
    const Eigen::VectorXd x = solve(A, b);
    CHECK((A * x - b).norm() <= 1e-14);
    CHECK(x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-14));

    const LinearSystem sys{A, b, 1.0};
    CHECK((solve(sys) - x).norm() == 0.0);

    // nonsymmetric systems go straight to the LU path
    Eigen::MatrixXd N(2, 2);
    N << 0.0, 1.0, 2.0, 0.0;
    const Eigen::VectorXd y = solve(N, b);
    CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-15));

    // symmetric indefinite is still fine
    Eigen::MatrixXd S(2, 2);
    S << 0.0, 1.0, 1.0, 0.0;
    const Eigen::VectorXd z = solve(S, b);
    CHECK((S * z - b).norm() <= 1e-14);

    CHECK(solve(Eigen::MatrixXd(0, 0), Eigen::VectorXd(0)).size() == 0);
}

TEST_CASE("singular and malformed systems raise") {
    Eigen::VectorXd b(2);
    b << 1.0, 2.0;

    Eigen::MatrixXd R(2, 2);
    R << 1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(solve(R, b), SolveError);
    try {
        solve(R, b);
        FAIL("expected SolveError");
    } catch (const SolveError& e) {
        CHECK(e.rcond <= 1e-14);
    }

    Eigen::MatrixXd rank1(2, 2);  // nonsymmetric, so no LDLT attempt
    rank1 << 1.0, 2.0, 1.0, 2.0;
    CHECK_THROWS_AS(solve(rank1, b), SolveError);

    CHECK_THROWS_AS(solve(Eigen::MatrixXd::Zero(2, 2), b), SolveError);
    CHECK_THROWS_AS(solve(Eigen::MatrixXd::Identity(3, 3), b), std::invalid_argument);
    CHECK_THROWS_AS(solve(Eigen::MatrixXd::Zero(2, 3), b), std::invalid_argument);
}

TEST_CASE("energy extrapolation recovers geometric limits") {
    // E_k = S - c q^k is exact for the 3-term rule
    const auto ex = extrapolate_energy(2.0 - 0.5, 2.0 - 0.25, 2.0 - 0.125);
    CHECK(ex.energy_sq == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ex.q == doctest::Approx(0.5).epsilon(1e-14));

    const auto ex2 = extrapolate_energy(5.0 - 0.6, 5.0 - 0.18, 5.0 - 0.054);
    CHECK(ex2.energy_sq == doctest::Approx(5.0).epsilon(1e-13));
    CHECK(ex2.q == doctest::Approx(0.3).epsilon(1e-13));

    CHECK_THROWS_AS(extrapolate_energy(1.0, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(extrapolate_energy(1.0, 2.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(extrapolate_energy(2.0, 1.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(extrapolate_energy(1.0, 2.0, 3.0), std::invalid_argument);   // q = 1
    CHECK_THROWS_AS(extrapolate_energy(1.0, 2.0, 3.5), std::invalid_argument);   // q > 1
}

TEST_CASE("error measures") {
    CHECK(error_e1(1.5, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(error_e1(2.5, 2.0) == doctest::Approx(0.5).epsilon(1e-15));  // absolute value
    CHECK(error_e1(2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(error_e1(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(error_e1(1.0, -1.0), std::invalid_argument);

    CHECK(error_e2(0.04, 4.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(error_e2(0.0, 4.0) == 0.0);
    CHECK_THROWS_AS(error_e2(-0.1, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(error_e2(0.1, 0.0), std::invalid_argument);
}

TEST_CASE("interface jump norm on matching and non-matching grids") {
    const auto [m44, d44] = decompose(Screen::unit_square(), 0.5, 4, 4);
    (void)d44;
    const DofSpace dd44 = make_space(m44, Mode::dd);
    const GammaQuadrature gq44 = make_gamma_quadrature(dd44);

    // a globally continuous interpolant has no jump
    const Eigen::VectorXd cont = interpolate(dd44, [](Point2 p) { return p.y * (1.0 - p.y); });
    CHECK(jump_l2(gq44, cont) <= 1e-14);

    // a single one-sided hat jumps by itself: |hat|_{L2}^2 = 2h/3
    Eigen::VectorXd hat = Eigen::VectorXd::Zero(dd44.n_dofs);
    hat[dd44.dof(dd44.gamma1.nodes[2])] = 1.0;
    CHECK(jump_l2(gq44, hat) == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(1e-13));

    // non-matching traces: all-ones coefficients leave the piecewise linear
    // jump -y, 2y-1, 1-2y, y-1 on the merged breakpoints, of squared norm 1/27
    const auto [m23, d23] = decompose(Screen::unit_square(), 0.5, 2, 3);
    (void)d23;
    const DofSpace dd23 = make_space(m23, Mode::dd);
    const GammaQuadrature gq23 = make_gamma_quadrature(dd23);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(dd23.n_dofs);
    CHECK(jump_l2(gq23, ones) == doctest::Approx(std::sqrt(1.0 / 27.0)).epsilon(1e-13));
}

TEST_CASE("boundary trace norm in weak-boundary mode") {
    const Mesh mesh = build_uniform_mesh(Screen::unit_square(), 3);
    const DofSpace wb = make_space(mesh, Mode::weak_boundary);
    const GammaQuadrature gq = make_gamma_quadrature(wb);

    // trace of x along the unit-square boundary: two sides of x^2 plus the
    // right side of ones
    const Eigen::VectorXd cx = interpolate(wb, [](Point2 p) { return p.x; });
    CHECK(jump_l2(gq, cx) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-13));

    const Eigen::VectorXd czero = interpolate(wb, [](Point2 p) { return p.x * p.y * 0.0; });
    CHECK(jump_l2(gq, czero) == 0.0);
}

namespace {

ConvergenceRecord rec(double h, double e1, double e2) {
    ConvergenceRecord r;
    r.h = h;
    r.e1 = e1;
    r.e2 = e2;
    return r;
}

}  // namespace

TEST_CASE("rate fit on synthetic power data") {
    std::vector<ConvergenceRecord> rs;
    for (const double h : {0.0625, 0.5, 0.125, 0.25, 0.03125})  // deliberately unsorted
        rs.push_back(rec(h, 3.0 * std::pow(h, 0.7), 0.5 * std::pow(h, 1.2)));

    CHECK(fit_rate(rs, ErrorKind::e1) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(fit_rate(rs, ErrorKind::e2) == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(fit_rate(rs, ErrorKind::e1, 5) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(fit_rate(rs, ErrorKind::e1, 2) == doctest::Approx(0.7).epsilon(1e-12));

    // the window covers the finest levels only
    std::vector<ConvergenceRecord> mixed = {rec(0.5, 7.0, 0.0), rec(0.25, 9.0, 0.0),
                                            rec(0.125, 0.125, 0.0), rec(0.0625, 0.0625, 0.0),
                                            rec(0.03125, 0.03125, 0.0)};
    CHECK(fit_rate(mixed, ErrorKind::e1) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<ConvergenceRecord> flat;
    for (const double h : {0.5, 0.25, 0.125})
        flat.push_back(rec(h, 0.42, 0.42));
    CHECK(fit_rate(flat, ErrorKind::e1) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(fit_rate(rs, ErrorKind::e1, 1), std::invalid_argument);
    CHECK_THROWS_AS(fit_rate(rs, ErrorKind::e1, 6), std::invalid_argument);
    CHECK_THROWS_AS(fit_rate(mixed, ErrorKind::e2), std::invalid_argument);  // zero errors
}

TEST_CASE("assembled conforming system solves positive definite") {
    const Mesh mesh = build_uniform_mesh(Screen::unit_square(), 4);
    const DofSpace conf = make_space(mesh, Mode::conforming);
    NitscheConfig cfg;
    cfg.mode = Mode::conforming;
    const LinearSystem sys = assemble_system(conf, cfg, [](Point2) { return 1.0; });
    const Eigen::VectorXd u = solve(sys);
    CHECK((sys.A * u - sys.b).norm() <= 1e-12 * sys.b.norm());
    CHECK(sys.b.dot(u) > 0.0);  // Galerkin energy of the W-elliptic form
}
