// Command-line driver: assemble blocks, run single solves, spectral checks
// and benchmark sweeps for the fictitious-domain AL preconditioners.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fdal/experiment.hpp"
#include "fdal/kernels.hpp"
#include "fdal/matrix_market.hpp"
#include "fdal/spectral.hpp"
#include "fdal/svg.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliConfig {
  fdal::ProblemConfig problem;
  fdal::PreconditionerSpec prec;
  fdal::ExperimentConfig experiment;
  std::uint64_t seed = 0;
  bool failures_fatal = false;
};

fdal::ProblemConfig parse_problem(const json &j) {
  fdal::ProblemConfig cfg;
  if (j.contains("geometry")) cfg.geometry = fdal::geometry_from_string(j["geometry"]);
  if (j.contains("bg_cells")) cfg.bg_cells = j["bg_cells"];
  if (j.contains("immersed_param")) cfg.immersed_param = j["immersed_param"];
  if (j.contains("beta")) cfg.beta = j["beta"];
  if (j.contains("beta2")) cfg.beta2 = j["beta2"];
  if (j.contains("forcing")) cfg.forcing = fdal::forcing_from_string(j["forcing"]);
  if (j.contains("bc")) cfg.bc = fdal::bc_from_string(j["bc"]);
  if (j.contains("coupling_quad_order")) cfg.coupling_quad_order = j["coupling_quad_order"];
  return cfg;
}

void parse_tolerances(const json &j, fdal::PreconditionerSpec &spec) {
  if (j.contains("rtol")) spec.rtol = j["rtol"];
  if (j.contains("atol")) spec.atol = j["atol"];
  if (j.contains("restart")) spec.restart = j["restart"];
  if (j.contains("maxit")) spec.maxit = j["maxit"];
  if (j.contains("inner_rtol")) spec.inner_rtol = j["inner_rtol"];
  if (j.contains("inner_maxit")) spec.inner_maxit = j["inner_maxit"];
}

CliConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw fdal::IoError("cannot open config " + path);
  json j = json::parse(in);
  CliConfig cfg;
  cfg.problem = parse_problem(j);
  if (j.contains("variant"))
    cfg.prec.variant = fdal::variant_from_string(j["variant"]);
  if (j.contains("gamma")) cfg.prec.gamma = j["gamma"];
  if (j.contains("gamma1")) cfg.prec.gamma1 = j["gamma1"];
  if (j.contains("gamma2")) cfg.prec.gamma2 = j["gamma2"];
  if (j.contains("exact_inner")) cfg.prec.exact_inner = j["exact_inner"];
  if (j.contains("tolerances")) parse_tolerances(j["tolerances"], cfg.prec);
  if (j.contains("seed")) cfg.seed = j["seed"];
  if (j.contains("failures_fatal")) cfg.failures_fatal = j["failures_fatal"];

  fdal::ExperimentConfig &e = cfg.experiment;
  e.geometry = cfg.problem.geometry;
  e.beta = cfg.problem.beta;
  e.forcing = cfg.problem.forcing;
  e.bc = cfg.problem.bc;
  e.coupling_quad_order = cfg.problem.coupling_quad_order;
  e.variant = cfg.prec.variant;
  e.gamma = cfg.prec.gamma;
  e.gamma1 = cfg.prec.gamma1;
  e.gamma2 = cfg.prec.gamma2;
  e.rtol = cfg.prec.rtol;
  e.atol = cfg.prec.atol;
  e.restart = cfg.prec.restart;
  e.maxit = cfg.prec.maxit;
  e.inner_rtol = cfg.prec.inner_rtol;
  e.inner_maxit = cfg.prec.inner_maxit;
  e.exact_inner = cfg.prec.exact_inner;
  e.failures_fatal = cfg.failures_fatal;
  e.seed = cfg.seed;
  if (j.contains("refinement_levels"))
    for (const auto &pair : j["refinement_levels"])
      e.refinement_levels.emplace_back((int)pair[0], (int)pair[1]);
  if (j.contains("beta2_list")) e.beta2_list = j["beta2_list"].get<std::vector<double>>();
  if (j.contains("gamma2_fallback")) e.gamma2_fallback = j["gamma2_fallback"];
  if (j.contains("fallback_for_smallest_beta2"))
    e.fallback_for_smallest_beta2 = j["fallback_for_smallest_beta2"];
  return cfg;
}

void write_report_json(const fdal::SolveResult &res, const std::string &path) {
  json j;
  j["iterations"] = res.report.iterations;
  j["converged"] = res.report.converged;
  j["true_relative_residual"] = res.report.true_relative_residual;
  j["original_residual_rel"] = res.original_residual_rel;
  j["constraint_residual_inf"] = res.constraint_residual_inf;
  j["inner_iterations_total"] = res.report.inner_iterations_total;
  j["inner_iterations_avg"] = res.report.inner_iterations_avg;
  j["wall_time"] = res.report.wall_time;
  j["residual_history"] = res.report.residual_history;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

void spectrum_csv(const fdal::SpectrumReport &rep, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw fdal::IoError("cannot open " + path);
  out.precision(17);
  out << "# n=" << rep.n << " m=" << rep.m << " ell=" << rep.ell << " gamma1=" << rep.gamma1
      << " gamma2=" << rep.gamma2 << " beta=" << rep.beta << " beta2=" << rep.beta2
      << " count_at_one=" << rep.count_at_one << " eta=" << rep.eta
      << " max_imag=" << rep.max_imag << "\n";
  out << "re,im\n";
  for (const auto &l : rep.eigenvalues) out << l.real() << "," << l.imag() << "\n";
}

void spectrum_svg(const fdal::SpectrumReport &rep, const std::string &path,
                  const std::string &title) {
  fdal::SvgSeries s;
  for (const auto &l : rep.eigenvalues) s.points.emplace_back(l.real(), l.imag());
  fdal::SvgOptions opts;
  opts.title = title;
  opts.x_label = "Re";
  opts.y_label = "Im";
  fdal::emit_svg_scatter({s}, path, opts);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Fictitious-domain augmented-Lagrangian preconditioner workbench"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int threads = 0;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "OpenMP thread count (0 = library default)");
  app.add_option("--seed", seed, "seed for randomized property checks");

  auto *cmd_assemble = app.add_subcommand("assemble", "assemble and dump the system blocks");
  auto *cmd_solve = app.add_subcommand("solve", "run one preconditioned solve");
  auto *cmd_spectrum = app.add_subcommand("spectrum", "spectral-lab drivers");
  auto *cmd_bench = app.add_subcommand("bench", "sweep (levels x beta2) into CSV tables");
  auto *cmd_verify =
      app.add_subcommand("verify", "run the identity / multiplicity / eta checks");

  std::string spectrum_mode = "preconditioned";
  cmd_spectrum->add_option("--mode", spectrum_mode,
                           "preconditioned | raw | mal_block | eta_formula | infsup | smw | la2");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) fdal::kernels::set_threads(threads);

  try {
    fs::create_directories(out_dir);
    CliConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (seed != 0) cfg.seed = seed;

    if (cmd_assemble->parsed()) {
      const fdal::SaddleSystem sys = fdal::build_saddle_system(cfg.problem);
      fdal::mm_write(sys.A, out_dir + "/A.mtx", true);
      fdal::mm_write(sys.A2, out_dir + "/A2.mtx", true);
      fdal::mm_write(sys.C, out_dir + "/C.mtx", false);
      fdal::mm_write(sys.C2, out_dir + "/C2.mtx", true);
      fdal::mm_write(sys.M, out_dir + "/M.mtx", true);
      fdal::mm_write(sys.f, out_dir + "/f.mtx");
      fdal::mm_write(sys.g, out_dir + "/g.mtx");
      fdal::export_mesh_text(*sys.bg_space.mesh, out_dir + "/background_mesh.txt");
      fdal::export_mesh_text(*sys.im_space.mesh, out_dir + "/immersed_mesh.txt");
      std::cout << "assembled n=" << sys.n << " m=" << sys.m << " ell=" << sys.ell
                << " -> " << out_dir << "\n";
    } else if (cmd_solve->parsed()) {
      const fdal::SolveResult res = fdal::solve_interface_problem(cfg.problem, cfg.prec);
      fdal::mm_write(res.u, out_dir + "/u.mtx");
      fdal::mm_write(res.u2, out_dir + "/u2.mtx");
      fdal::mm_write(res.lambda, out_dir + "/lambda.mtx");
      write_report_json(res, out_dir + "/report.json");
      std::cout << "variant=" << to_string(cfg.prec.variant)
                << " iterations=" << res.report.iterations
                << " converged=" << (res.report.converged ? "yes" : "no")
                << " true_rel_res=" << res.report.true_relative_residual
                << " original_rel_res=" << res.original_residual_rel << "\n";
      if (!res.report.converged) return 2;
    } else if (cmd_spectrum->parsed()) {
      const fdal::SaddleSystem sys = fdal::build_saddle_system(cfg.problem);
      if (spectrum_mode == "preconditioned" || spectrum_mode == "raw" ||
          spectrum_mode == "mal_block") {
        fdal::SpectrumReport rep;
        if (spectrum_mode == "raw")
          rep = fdal::preconditioned_spectrum(sys, fdal::Variant::none, cfg.prec.gamma,
                                              cfg.prec.gamma, fdal::WMode::exact_msquared);
        else if (spectrum_mode == "mal_block")
          rep = fdal::mal_block_spectrum(sys, cfg.prec.gamma1, cfg.prec.gamma2);
        else if (cfg.prec.variant == fdal::Variant::mal_diag)
          rep = fdal::preconditioned_spectrum(sys, fdal::Variant::mal_diag, cfg.prec.gamma1,
                                              cfg.prec.gamma2, fdal::WMode::exact_msquared);
        else
          rep = fdal::preconditioned_spectrum(sys, fdal::Variant::ideal_al, cfg.prec.gamma,
                                              cfg.prec.gamma, fdal::WMode::exact_msquared);
        spectrum_csv(rep, out_dir + "/spectrum.csv");
        spectrum_svg(rep, out_dir + "/spectrum.svg", spectrum_mode);
        std::cout << "eigenvalues=" << rep.eigenvalues.size()
                  << " count_at_one=" << rep.count_at_one << " eta=" << rep.eta
                  << " max_imag=" << rep.max_imag << "\n";
      } else if (spectrum_mode == "eta_formula") {
        const double dev = fdal::eta_formula_check(sys, cfg.prec.gamma);
        std::cout << "eta formula max deviation = " << dev << "\n";
      } else if (spectrum_mode == "infsup") {
        const fdal::InfSupReport rep = fdal::infsup_sigma1(sys, sys.immersed_h());
        std::cout << "sigma1=" << rep.sigma1 << " zero_count=" << rep.zero_count
                  << " (n+m-ell=" << sys.n + sys.m - sys.ell << ")\n";
      } else if (spectrum_mode == "smw") {
        for (double g1 : {1.0, 10.0, 100.0})
          std::cout << "gamma1=" << g1
                    << " smw residual=" << fdal::verify_smw_identity(sys, g1) << "\n";
      } else if (spectrum_mode == "la2") {
        const auto eigs = fdal::limit_spectrum_la2(sys);
        std::ofstream out(out_dir + "/la2_spectrum.csv");
        out.precision(17);
        out << "re,im\n";
        for (double v : eigs) out << v << ",0\n";
        std::cout << "wrote " << eigs.size() << " eigenvalues of -L A2\n";
      } else {
        throw fdal::ConfigError("unknown spectrum mode: " + spectrum_mode);
      }
    } else if (cmd_bench->parsed()) {
      if (cfg.experiment.refinement_levels.empty())
        throw fdal::ConfigError("bench requires refinement_levels in the config");
      const fdal::ExperimentResult res = fdal::run_experiment(cfg.experiment);
      fdal::emit_csv(res.table, out_dir + "/iterations.csv");
      fdal::emit_csv(res.timings, out_dir + "/timings.csv");
      // wall-clock scatter for the largest jump column, log-log
      fdal::SvgSeries s;
      s.connect = true;
      for (const auto &row : res.timings.rows)
        s.points.emplace_back(std::stod(row.front()), std::stod(row.back()));
      fdal::SvgOptions opts;
      opts.log_x = true;
      opts.log_y = true;
      opts.title = res.table.caption;
      opts.x_label = "DoF";
      opts.y_label = "seconds";
      fdal::emit_svg_scatter({s}, out_dir + "/wallclock.svg", opts);
      std::cout << "wrote " << out_dir << "/iterations.csv ("
                << res.table.rows.size() << " rows)\n";
      if (res.any_failure && cfg.failures_fatal) return 2;
    } else if (cmd_verify->parsed()) {
      // quick certification pass on the small reference configuration
      fdal::ProblemConfig pc = cfg.problem;
      if (config_path.empty()) {
        pc.geometry = fdal::GeometryKind::unit_square_41;
        pc.bg_cells = 16;
        pc.immersed_param = 4;
        pc.beta2 = 100.0;
      }
      const fdal::SaddleSystem sys = fdal::build_saddle_system(pc);
      int failures = 0;
      auto line = [&](const std::string &name, bool ok, const std::string &detail) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
        if (!ok) ++failures;
      };
      {
        double worst = 0.0;
        for (double g1 : {1.0, 10.0, 100.0})
          worst = std::max(worst, fdal::verify_smw_identity(sys, g1));
        line("smw_identity", worst <= 1e-10, "max residual " + std::to_string(worst));
      }
      {
        const auto rep = fdal::preconditioned_spectrum(sys, fdal::Variant::mal_diag, 10.0,
                                                       1e-2, fdal::WMode::exact_msquared);
        line("mal_multiplicity", rep.count_at_one >= sys.n + sys.m,
             "count_at_one=" + std::to_string(rep.count_at_one) + " needs >= " +
                 std::to_string(sys.n + sys.m));
      }
      {
        double prev = -1.0;
        bool mono = true;
        std::string etas;
        for (double g : {1.0, 10.0, 100.0}) {
          const auto rep = fdal::preconditioned_spectrum(sys, fdal::Variant::ideal_al, g, g,
                                                         fdal::WMode::exact_msquared);
          if (rep.eta < prev - 1e-12 || rep.eta <= 0.0) mono = false;
          prev = rep.eta;
          etas += std::to_string(rep.eta) + " ";
        }
        line("eta_positive_nondecreasing", mono, "eta(gamma=1,10,100) = " + etas);
      }
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
