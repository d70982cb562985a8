#include "screenbem/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace screenbem {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double unit_load(Point2) { return 1.0; }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

}  // namespace

void RunConfig::validate() const {
    if (sigma != 1 && sigma != -1) throw std::invalid_argument("config: sigma must be -1 or +1");
    if (n0 < 1) throw std::invalid_argument("config: n0 must be >= 1");
    if (levels < 1) throw std::invalid_argument("config: levels must be >= 1");
    if (quad_regular < 1 || quad_singular < 1)
        throw std::invalid_argument("config: quadrature orders must be >= 1");
    if (mode == Mode::dd && !split_x)
        throw std::invalid_argument("config: dd mode needs split_x");
    if (mode != Mode::dd && split_x)
        throw std::invalid_argument("config: split_x only applies to dd mode");
    if (reference_energy_sq && !(*reference_energy_sq > 0.0))
        throw std::invalid_argument("config: reference energy must be positive");
    if (!reference_energy_sq && levels < 3)
        throw std::invalid_argument(
            "config: extrapolating the reference energy needs at least 3 levels");
}

std::string StudyResult::label() const {
    if (config.mode == Mode::conforming) return "conforming";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s sigma=%+d nu=%s", mode_name(config.mode).c_str(),
                  config.sigma, config.nu.to_string().c_str());
    return buf;
}

void StudyEngine::check_screen(const Screen& s) {
    if (!screen_) {
        screen_ = s;
        return;
    }
    const Screen& c = *screen_;
    if (c.x_range.lo != s.x_range.lo || c.x_range.hi != s.x_range.hi ||
        c.y_range.lo != s.y_range.lo || c.y_range.hi != s.y_range.hi)
        throw std::invalid_argument("StudyEngine: one engine serves one screen");
}

StudyEngine::UniformLevel& StudyEngine::uniform_level(const RunConfig& cfg, int n,
                                                      bool need_nitsche) {
    check_screen(cfg.screen);
    auto& ld = uniform_[{n, cfg.quad_singular, cfg.quad_regular}];
    if (!ld.base_built) {
        ld.mesh = build_uniform_mesh(cfg.screen, n);
        ld.wb = make_space(ld.mesh, Mode::weak_boundary);
        ld.conf = make_space(ld.mesh, Mode::conforming);
        ld.V_wb = assemble_v_block(ld.wb, cfg.quad_singular, cfg.quad_regular);
        ld.b_wb = assemble_rhs(ld.wb, unit_load, cfg.quad_regular);

        // the conforming space is the gamma-constrained subspace: restrict
        ld.V_conf.resize(ld.conf.n_dofs, ld.conf.n_dofs);
        ld.b_conf.resize(ld.conf.n_dofs);
        for (int i = 0; i < ld.conf.n_dofs; ++i) {
            const int wi = ld.wb.dof(ld.conf.node_of_dof[static_cast<std::size_t>(i)]);
            ld.b_conf[i] = ld.b_wb[wi];
            for (int j = 0; j < ld.conf.n_dofs; ++j) {
                const int wj = ld.wb.dof(ld.conf.node_of_dof[static_cast<std::size_t>(j)]);
                ld.V_conf(i, j) = ld.V_wb(wi, wj);
            }
        }
        ld.base_built = true;
    }
    if (need_nitsche && !ld.nitsche_built) {
        ld.gq = make_gamma_quadrature(ld.wb);
        ld.M = assemble_trace_matrix(ld.wb, ld.gq, cfg.quad_singular, cfg.quad_regular);
        ld.P = assemble_penalty_mass(ld.wb, ld.gq);
        ld.nitsche_built = true;
    }
    return ld;
}

StudyEngine::DdLevel& StudyEngine::dd_level(const RunConfig& cfg, int n) {
    check_screen(cfg.screen);
    auto& ld = dd_[{n, n, *cfg.split_x, cfg.quad_singular, cfg.quad_regular}];
    if (!ld.built) {
        auto [mesh, dec] = decompose(cfg.screen, *cfg.split_x, n, n);
        (void)dec;
        ld.mesh = std::move(mesh);
        ld.space = make_space(ld.mesh, Mode::dd);
        ld.gq = make_gamma_quadrature(ld.space);
        ld.V = assemble_v_block(ld.space, cfg.quad_singular, cfg.quad_regular);
        ld.M = assemble_trace_matrix(ld.space, ld.gq, cfg.quad_singular, cfg.quad_regular);
        ld.P = assemble_penalty_mass(ld.space, ld.gq);
        ld.b = assemble_rhs(ld.space, unit_load, cfg.quad_regular);
        ld.built = true;
    }
    return ld;
}

double StudyEngine::conforming_energy(const RunConfig& cfg, int n) {
    UniformLevel& ld = uniform_level(cfg, n, false);
    if (!ld.conf_energy) {
        const Eigen::VectorXd u = solve(ld.V_conf, ld.b_conf);
        ld.conf_energy = ld.b_conf.dot(u);
    }
    return *ld.conf_energy;
}

StudyResult StudyEngine::run(const RunConfig& config) {
    config.validate();
    const std::vector<int> ns = refinement_levels(config.n0, config.levels);

    StudyResult result;
    result.config = config;

    std::vector<double> conf_energies;
    const bool need_reference = !config.reference_energy_sq;

    for (std::size_t l = 0; l < ns.size(); ++l) {
        const int n = ns[l];
        const double t0 = now_seconds();
        ConvergenceRecord rec;
        rec.level = static_cast<int>(l);
        rec.mode = config.mode;

        if (need_reference || config.mode == Mode::conforming)
            conf_energies.push_back(conforming_energy(config, n));

        if (config.mode == Mode::conforming) {
            UniformLevel& ld = uniform_level(config, n, false);
            rec.h = ld.mesh.h;
            rec.h_min = ld.mesh.h_min;
            rec.n_dofs = ld.conf.n_dofs;
            rec.energy = conf_energies.back();
            rec.nu = 0.0;
            rec.sigma = 0;
        } else if (config.mode == Mode::weak_boundary) {
            UniformLevel& ld = uniform_level(config, n, true);
            rec.h = ld.mesh.h;
            rec.h_min = ld.mesh.h_min;
            rec.n_dofs = ld.wb.n_dofs;
            rec.nu = config.nu.value(ld.mesh.h_min);
            rec.sigma = config.sigma;
            const Eigen::MatrixXd A =
                combine_system(Mode::weak_boundary, ld.V_wb, ld.M, ld.P, config.sigma, rec.nu);
            const Eigen::VectorXd u = solve(A, ld.b_wb);
            rec.energy = ld.b_wb.dot(u);
            rec.jump_l2 = jump_l2(ld.gq, u);
        } else {
            DdLevel& ld = dd_level(config, n);
            rec.h = ld.mesh.h;
            rec.h_min = ld.mesh.h_min;
            rec.n_dofs = ld.space.n_dofs;
            rec.nu = config.nu.value(ld.mesh.h_min);
            rec.sigma = config.sigma;
            const Eigen::MatrixXd A =
                combine_system(Mode::dd, ld.V, ld.M, ld.P, config.sigma, rec.nu);
            const Eigen::VectorXd u = solve(A, ld.b);
            rec.energy = ld.b.dot(u);
            rec.jump_l2 = jump_l2(ld.gq, u);
        }

        rec.seconds = config.record_timings ? now_seconds() - t0 : 0.0;
        result.records.push_back(rec);
    }

    if (config.reference_energy_sq) {
        result.energy_ex_sq = *config.reference_energy_sq;
        result.extrapolation_q = 0.0;
    } else {
        const std::size_t m = conf_energies.size();
        const Extrapolation ex =
            extrapolate_energy(conf_energies[m - 3], conf_energies[m - 2], conf_energies[m - 1]);
        result.energy_ex_sq = ex.energy_sq;
        result.extrapolation_q = ex.q;
    }

    for (ConvergenceRecord& rec : result.records) {
        rec.e1 = error_e1(rec.energy, result.energy_ex_sq);
        rec.e2 = config.mode == Mode::conforming
                     ? 0.0
                     : error_e2(rec.jump_l2, result.energy_ex_sq);
    }

    if (config.emit_reference_curve) {
        // |log h| h^(1/2), scaled to match e1 on the coarsest level
        const double h0 = result.records.front().h;
        const double base = std::abs(std::log(h0)) * std::sqrt(h0);
        const double scale =
            base > 0.0 && result.records.front().e1 > 0.0 ? result.records.front().e1 / base : 1.0;
        for (const ConvergenceRecord& rec : result.records)
            result.reference_curve.push_back(scale * std::abs(std::log(rec.h)) *
                                             std::sqrt(rec.h));
    }

    if (!config.out_path.empty()) {
        std::ofstream os(config.out_path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + config.out_path);
        write_csv(result, os);
    }
    return result;
}

StudyResult run_convergence_study(const RunConfig& config) {
    StudyEngine engine;
    return engine.run(config);
}

void write_csv(const StudyResult& result, std::ostream& os) {
    const RunConfig& cfg = result.config;
    os << "# mode=" << mode_name(cfg.mode) << "\n";
    os << "# sigma=" << cfg.sigma << "\n";
    os << "# nu=" << cfg.nu.to_string() << "\n";
    os << "# n0=" << cfg.n0 << "\n";
    os << "# levels=" << cfg.levels << "\n";
    if (cfg.split_x)
        os << "# split_x=" << fmt(*cfg.split_x) << "\n";
    else
        os << "# split_x=none\n";
    os << "# quad_regular=" << cfg.quad_regular << "\n";
    os << "# quad_singular=" << cfg.quad_singular << "\n";
    os << "# energy_ex_sq=" << fmt(result.energy_ex_sq) << "\n";
    os << "# extrapolation_q=" << fmt(result.extrapolation_q) << "\n";
    os << "level,h,h_min,ndofs,energy,e1,e2,jump_l2,nu,sigma,mode,seconds";
    if (!result.reference_curve.empty()) os << ",ref_curve";
    os << "\n";
    for (std::size_t k = 0; k < result.records.size(); ++k) {
        const ConvergenceRecord& r = result.records[k];
        os << r.level << ',' << fmt(r.h) << ',' << fmt(r.h_min) << ',' << r.n_dofs << ','
           << fmt(r.energy) << ',' << fmt(r.e1) << ',' << fmt(r.e2) << ',' << fmt(r.jump_l2)
           << ',' << fmt(r.nu) << ',' << r.sigma << ',' << mode_name(r.mode) << ','
           << fmt(r.seconds);
        if (!result.reference_curve.empty()) os << ',' << fmt(result.reference_curve[k]);
        os << "\n";
    }
}

std::vector<ConvergenceRecord> parse_csv(std::istream& is) {
    std::vector<ConvergenceRecord> records;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("level,h,h_min,ndofs,energy,e1,e2,jump_l2,nu,sigma,mode,seconds", 0) !=
                0)
                throw std::invalid_argument("parse_csv: unexpected column header");
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() < 12) throw std::invalid_argument("parse_csv: short row");
        ConvergenceRecord r;
        r.level = std::stoi(fields[0]);
        r.h = std::stod(fields[1]);
        r.h_min = std::stod(fields[2]);
        r.n_dofs = std::stoi(fields[3]);
        r.energy = std::stod(fields[4]);
        r.e1 = std::stod(fields[5]);
        r.e2 = std::stod(fields[6]);
        r.jump_l2 = std::stod(fields[7]);
        r.nu = std::stod(fields[8]);
        r.sigma = std::stoi(fields[9]);
        r.mode = mode_from_name(fields[10]);
        r.seconds = std::stod(fields[11]);
        records.push_back(r);
    }
    if (!header_seen) throw std::invalid_argument("parse_csv: no column header found");
    return records;
}

void emit_figure_data(const std::vector<StudyResult>& results,
                      const std::vector<ErrorKind>& kinds, std::ostream& os) {
    if (results.empty()) throw std::invalid_argument("emit_figure_data: no studies given");
    if (kinds.empty()) throw std::invalid_argument("emit_figure_data: no error kinds given");
    for (const StudyResult& r : results)
        if (r.records.empty()) throw std::invalid_argument("emit_figure_data: empty study");

    bool first = true;
    for (const ErrorKind kind : kinds) {
        for (const StudyResult& r : results) {
            if (kind == ErrorKind::e2 && r.config.mode == Mode::conforming)
                continue;  // no gamma, nothing to plot
            if (!first) os << "\n";
            first = false;
            os << "# series=" << r.label() << " error=" << (kind == ErrorKind::e1 ? "e1" : "e2")
               << "\n";
            for (const ConvergenceRecord& rec : r.records)
                os << rec.n_dofs << ' ' << fmt(kind == ErrorKind::e1 ? rec.e1 : rec.e2) << "\n";
            if (kind == ErrorKind::e1 && !r.reference_curve.empty()) {
                os << "\n# series=reference |log h| h^(1/2) error=e1\n";
                for (std::size_t k = 0; k < r.records.size(); ++k)
                    os << r.records[k].n_dofs << ' ' << fmt(r.reference_curve[k]) << "\n";
            }
        }
    }
}

}  // namespace screenbem
