// Command-line driver for screen-problem convergence studies.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "screenbem/assembly.hpp"
#include "screenbem/study.hpp"

namespace {

using namespace screenbem;

void print_summary(const StudyResult& result) {
    std::printf("%s  n0=%d levels=%d\n", result.label().c_str(), result.config.n0,
                result.config.levels);
    std::printf("|u|^2 reference = %.12e", result.energy_ex_sq);
    if (result.extrapolation_q > 0.0)
        std::printf("  (extrapolated, q = %.3f)\n", result.extrapolation_q);
    else
        std::printf("  (supplied)\n");
    std::printf("%5s %12s %8s %16s %12s %12s %12s %10s\n", "level", "h", "ndofs", "energy", "e1",
                "e2", "jump_l2", "nu");
    for (const ConvergenceRecord& r : result.records)
        std::printf("%5d %12.6g %8d %16.10e %12.6g %12.6g %12.6g %10.5g\n", r.level, r.h,
                    r.n_dofs, r.energy, r.e1, r.e2, r.jump_l2, r.nu);
    if (result.records.size() >= 2) {
        const int window = std::min<int>(3, static_cast<int>(result.records.size()));
        try {
            std::printf("e1 rate over the %d finest levels: %.4f\n", window,
                        fit_rate(result.records, ErrorKind::e1, window));
        } catch (const std::exception&) {
            // zero errors on some level; nothing to fit
        }
        if (result.config.mode != Mode::conforming) {
            try {
                std::printf("e2 rate over the %d finest levels: %.4f\n", window,
                            fit_rate(result.records, ErrorKind::e2, window));
            } catch (const std::exception&) {
            }
        }
    }
}

void write_figure(const std::string& path, const std::vector<StudyResult>& results,
                  const std::vector<ErrorKind>& kinds) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    emit_figure_data(results, kinds, os);
    std::printf("wrote %s\n", path.c_str());
}

int run_figures(RunConfig base, const std::string& dir) {
    std::filesystem::create_directories(dir);
    StudyEngine engine;
    const auto path = [&dir](const std::string& name) { return dir + "/" + name; };

    RunConfig conf = base;
    conf.mode = Mode::conforming;
    conf.split_x.reset();
    conf.emit_reference_curve = true;
    conf.out_path = path("conforming.csv");
    const StudyResult conforming = engine.run(conf);

    const auto wb_run = [&](int sigma, const std::string& nu) {
        RunConfig cfg = base;
        cfg.mode = Mode::weak_boundary;
        cfg.split_x.reset();
        cfg.sigma = sigma;
        cfg.nu = NuRule::parse(nu);
        cfg.reference_energy_sq = conforming.energy_ex_sq;
        std::string name = "wb_sigma" + std::string(sigma > 0 ? "p1" : "m1") + "_nu_" + nu;
        for (char& c : name)
            if (c == ':') c = '_';
        cfg.out_path = path(name + ".csv");
        return engine.run(cfg);
    };

    const std::vector<StudyResult> asym = {wb_run(-1, "const:1"), wb_run(-1, "const:2"),
                                           wb_run(-1, "const:10")};
    const std::vector<StudyResult> sym = {wb_run(1, "const:1"), wb_run(1, "const:10"),
                                          wb_run(1, "logpow:2:1")};

    std::vector<StudyResult> asym1 = {conforming};
    asym1.insert(asym1.end(), asym.begin(), asym.end());
    write_figure(path("asym1.dat"), asym1, {ErrorKind::e1});
    write_figure(path("asym2.dat"), asym, {ErrorKind::e1, ErrorKind::e2});

    std::vector<StudyResult> sym1 = {conforming};
    sym1.insert(sym1.end(), sym.begin(), sym.end());
    write_figure(path("sym1.dat"), sym1, {ErrorKind::e1});
    write_figure(path("sym2.dat"), sym, {ErrorKind::e1, ErrorKind::e2});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Galerkin screen-problem solver: conforming, interface-coupled (dd) and "
                 "weak-boundary Nitsche discretizations"};

    std::string mode_str = "conforming";
    std::string nu_str = "const:1";
    RunConfig cfg;
    std::string dump_mesh_path, dump_matrix_path, figures_dir;
    double split_x = 0.5;
    bool no_timing = false;

    app.add_option("--mode", mode_str, "conforming | dd | weak-boundary")
        ->check(CLI::IsMember({"conforming", "dd", "weak-boundary"}));
    app.add_option("--sigma", cfg.sigma, "Nitsche coupling sign, -1 or 1")
        ->check(CLI::IsMember({-1, 1}));
    app.add_option("--nu", nu_str, "penalty rule: const:<c> or logpow:<p>:<c>");
    app.add_option("--n0", cfg.n0, "coarsest panels per row")->check(CLI::PositiveNumber);
    auto* levels_opt =
        app.add_option("--levels", cfg.levels, "refinement levels")->check(CLI::PositiveNumber);
    auto* split_opt = app.add_option("--split-x", split_x, "interface position (dd mode)");
    app.add_option("--quad-regular", cfg.quad_regular, "Gauss order, separated pairs")
        ->check(CLI::PositiveNumber);
    app.add_option("--quad-singular", cfg.quad_singular, "Gauss order, singular pairs")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", cfg.out_path, "write the study as CSV");
    app.add_flag("--emit-reference-curve", cfg.emit_reference_curve,
                 "append the scaled |log h| h^(1/2) curve");
    app.add_flag("--no-timing", no_timing, "zero the seconds column (byte-reproducible output)");
    app.add_option("--dump-mesh", dump_mesh_path, "dump the n0-level mesh and exit");
    app.add_option("--dump-matrix", dump_matrix_path, "dump the n0-level system matrix and exit");
    app.add_option("--figures", figures_dir, "write the standard figure data sets to a directory");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.mode = mode_from_name(mode_str);
        cfg.nu = NuRule::parse(nu_str);
        cfg.record_timings = !no_timing;
        if (cfg.mode == Mode::dd)
            cfg.split_x = split_x;
        else if (split_opt->count() > 0)
            throw std::invalid_argument("--split-x only applies to dd mode");

        if (!figures_dir.empty()) {
            if (levels_opt->count() == 0) cfg.levels = 4;
            return run_figures(cfg, figures_dir);
        }

        if (!dump_mesh_path.empty() || !dump_matrix_path.empty()) {
            Mesh mesh = cfg.mode == Mode::dd
                            ? decompose(cfg.screen, *cfg.split_x, cfg.n0, cfg.n0).first
                            : build_uniform_mesh(cfg.screen, cfg.n0);
            if (!dump_mesh_path.empty()) {
                std::ofstream os(dump_mesh_path, std::ios::binary);
                if (!os) throw std::runtime_error("cannot open " + dump_mesh_path);
                dump_mesh(mesh, os);
                std::printf("wrote %s\n", dump_mesh_path.c_str());
            }
            if (!dump_matrix_path.empty()) {
                const DofSpace space = make_space(mesh, cfg.mode);
                NitscheConfig ncfg;
                ncfg.mode = cfg.mode;
                ncfg.sigma = cfg.sigma;
                ncfg.nu = cfg.nu;
                ncfg.quad_regular = cfg.quad_regular;
                ncfg.quad_singular = cfg.quad_singular;
                const LinearSystem sys =
                    assemble_system(space, ncfg, [](Point2) { return 1.0; });
                std::ofstream os(dump_matrix_path, std::ios::binary);
                if (!os) throw std::runtime_error("cannot open " + dump_matrix_path);
                dump_matrix(sys.A, os);
                std::printf("wrote %s\n", dump_matrix_path.c_str());
            }
            return 0;
        }

        const StudyResult result = run_convergence_study(cfg);
        print_summary(result);
        if (!cfg.out_path.empty()) std::printf("wrote %s\n", cfg.out_path.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
