// Convergence studies over nested refinement levels, with CSV output.
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "screenbem/analysis.hpp"

namespace screenbem {

struct RunConfig {
    Mode mode = Mode::conforming;
    int sigma = -1;
    NuRule nu{};
    int n0 = 4;
    int levels = 3;
    std::optional<double> split_x;  // dd only
    int quad_regular = 5;
    int quad_singular = 6;
    std::string out_path;            // write a CSV there when non-empty
    bool emit_reference_curve = false;
    bool record_timings = true;
    std::optional<double> reference_energy_sq;  // reuse a known |u|^2 instead
                                                // of extrapolating it
    Screen screen = Screen::unit_square();

    void validate() const;
};

struct StudyResult {
    RunConfig config;
    std::vector<ConvergenceRecord> records;
    double energy_ex_sq = 0.0;
    double extrapolation_q = 0.0;              // 0 when the reference was given
    std::vector<double> reference_curve;       // scaled |log h| h^(1/2), optional

    std::string label() const;
};

/// Runs studies and caches the assembled per-level operators, so several
/// parameter sweeps over the same meshes share the quadrature work. The
/// energy reference |u|^2 is extrapolated from the conforming Galerkin
/// energies of the same refinement sequence (needs >= 3 levels) unless the
/// config supplies one.
class StudyEngine {
  public:
    StudyResult run(const RunConfig& config);

  private:
    struct UniformLevel {
        Mesh mesh;
        DofSpace wb, conf;
        GammaQuadrature gq;
        Eigen::MatrixXd V_wb, M, P;
        Eigen::VectorXd b_wb;
        Eigen::MatrixXd V_conf;
        Eigen::VectorXd b_conf;
        bool base_built = false;
        bool nitsche_built = false;
        std::optional<double> conf_energy;
    };
    struct DdLevel {
        Mesh mesh;
        DofSpace space;
        GammaQuadrature gq;
        Eigen::MatrixXd V, M, P;
        Eigen::VectorXd b;
        bool built = false;
    };

    std::optional<Screen> screen_;
    std::map<std::tuple<int, int, int>, UniformLevel> uniform_;          // n, q_sing, q_reg
    std::map<std::tuple<int, int, double, int, int>, DdLevel> dd_;       // n1, n2, split, orders

    void check_screen(const Screen& s);
    UniformLevel& uniform_level(const RunConfig& cfg, int n, bool need_nitsche);
    DdLevel& dd_level(const RunConfig& cfg, int n);
    double conforming_energy(const RunConfig& cfg, int n);
};

/// One-shot study (fresh engine).
StudyResult run_convergence_study(const RunConfig& config);

/// CSV with "# key=value" header lines and the fixed column set
///   level,h,h_min,ndofs,energy,e1,e2,jump_l2,nu,sigma,mode,seconds
/// (floats %.12e). With emit_reference_curve a trailing ref_curve column is
/// appended. Identical configs yield byte-identical files up to the seconds
/// column; record_timings=false zeroes it for fully reproducible bytes.
void write_csv(const StudyResult& result, std::ostream& os);
std::vector<ConvergenceRecord> parse_csv(std::istream& is);

/// Gnuplot-style series (ndofs, error) per study and error kind: a labeled
/// "# series=..." header, one point per level, blank line between series.
/// Reference-curve data of a study is appended as its own series under e1.
void emit_figure_data(const std::vector<StudyResult>& results,
                      const std::vector<ErrorKind>& kinds, std::ostream& os);

}  // namespace screenbem
