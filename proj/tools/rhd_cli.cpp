#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "rhd/harness.hpp"

namespace {

struct Flags {
  std::string config, problem, eos, cells, out;
  std::optional<double> gamma, tfinal, safety;
  std::optional<int> degree;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "key = value config file");
  app->add_option("--problem", f.problem, "problem id");
  app->add_option("--eos", f.eos, "id, tm, ip or rc");
  app->add_option("--gamma", f.gamma, "ideal gas adiabatic index");
  app->add_option("--degree", f.degree, "polynomial degree 1..4");
  app->add_option("--cells", f.cells, "NX[,NY] (converge: list of NX)");
  app->add_option("--tfinal", f.tfinal, "final time");
  app->add_option("--safety", f.safety, "CFL safety factor");
  app->add_option("--out", f.out, "output CSV path");
}

rhd::RunConfig build_config(const Flags& f, bool with_cells) {
  rhd::RunConfig cfg;
  if (!f.config.empty())
    for (const auto& [k, v] : rhd::read_config_file(f.config)) rhd::apply_config_value(cfg, k, v);
  if (!f.problem.empty()) cfg.problem = f.problem;
  if (!f.eos.empty()) cfg.eos = rhd::parse_eos_kind(f.eos);
  if (f.gamma) cfg.gamma = f.gamma;
  if (f.degree) cfg.degree = f.degree;
  if (f.tfinal) cfg.t_final = f.tfinal;
  if (f.safety) cfg.safety = f.safety;
  if (!f.out.empty()) cfg.out = f.out;
  if (with_cells && !f.cells.empty()) cfg.cells = rhd::parse_cells(f.cells);
  return cfg;
}

std::vector<std::array<int, 2>> cell_list(const std::string& text, int dim) {
  std::vector<std::array<int, 2>> list;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const int n = rhd::parse_cells(item)[0];
    list.push_back({n, dim == 2 ? n : 1});
  }
  return list;
}

int cmd_run(const Flags& f) {
  const rhd::RunConfig cfg = build_config(f, true);
  const rhd::RunResult res = rhd::run(cfg);
  const rhd::BasisData b = rhd::build_basis(res.degree, cfg.correction);
  std::printf("problem=%s eos=%s degree=%d t=%.6g steps=%ld wall=%.3fs blended_max_alpha=%.3g "
              "zhang_shu=%ld flux_corrections=%ld\n",
              cfg.problem.c_str(), rhd::to_string(res.eos.kind).c_str(), res.degree, res.t, res.steps,
              res.wall_seconds, res.stats.max_alpha, res.stats.zhang_shu_activations,
              res.stats.flux_corrections);
  if (!cfg.out.empty()) rhd::write_solution_csv(res.field, b, res.eos, cfg.out);
  return 0;
}

int cmd_converge(const Flags& f) {
  const rhd::RunConfig cfg = build_config(f, false);
  if (f.cells.empty()) throw rhd::ConfigError("converge needs --cells");
  const rhd::ProblemSpec probe = rhd::make_problem(cfg.problem, rhd::EosModel{}, cfg.problem_options);
  const auto rows = rhd::convergence_study(cfg, cell_list(f.cells, probe.dim));
  std::printf("%-10s %-13s %-8s %-13s %-8s %-13s %-8s\n", "cells", "L1", "order", "L2", "order", "Linf",
              "order");
  for (const auto& r : rows) {
    auto o = [&](double rhd::ErrorReport::*m) { return r.order ? (*r.order).*m : 0.0; };
    std::printf("%-10d %-13.6e %-8.4f %-13.6e %-8.4f %-13.6e %-8.4f\n", r.cells[0], r.error.l1,
                o(&rhd::ErrorReport::l1), r.error.l2, o(&rhd::ErrorReport::l2), r.error.linf,
                o(&rhd::ErrorReport::linf));
  }
  if (!cfg.out.empty()) rhd::write_table_csv(rows, cfg.out);
  return 0;
}

int cmd_reference(const Flags& f) {
  rhd::RunConfig cfg = build_config(f, true);
  const rhd::ProblemSpec probe = rhd::make_problem(cfg.problem, rhd::EosModel{}, cfg.problem_options);
  const rhd::EosModel eos = rhd::make_eos(cfg, probe);
  const rhd::ProblemSpec prob = rhd::make_problem(cfg.problem, eos, cfg.problem_options);
  const int n = cfg.cells[0] > 0 ? cfg.cells[0] : 20000;
  const auto ref = rhd::reference_solution(prob, eos, n, cfg.t_final);
  if (!cfg.out.empty()) rhd::write_reference_csv(ref, cfg.out);
  std::printf("reference problem=%s eos=%s cells=%d\n", cfg.problem.c_str(), rhd::to_string(eos.kind).c_str(), n);
  return 0;
}

int cmd_calibrate(int degree, int cells, int steps, double tol) {
  std::vector<rhd::CflProbe> log;
  const double c = rhd::largest_stable_cfl(degree, cells, steps, 0.0, 1.0, tol, &log);
  for (const auto& r : log)
    std::printf("cfl=%.5f %s growth=%.6g\n", r.cfl, r.stable ? "stable" : "unstable", r.growth);
  std::printf("degree=%d largest_stable=%.5f recommended=%.5f\n", degree, c, 0.98 * c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relativistic hydrodynamics LWFR solver"};
  app.require_subcommand(1);
  Flags run_f, conv_f, ref_f;
  auto* run = app.add_subcommand("run", "advance a problem to its final time");
  auto* conv = app.add_subcommand("converge", "convergence study on a smooth problem");
  auto* ref = app.add_subcommand("reference", "first-order fine-mesh reference solution");
  add_common(run, run_f);
  add_common(conv, conv_f);
  add_common(ref, ref_f);
  int cal_degree = 3, cal_cells = 32, cal_steps = 2000;
  double cal_tol = 1e-3;
  auto* cal = app.add_subcommand("calibrate-cfl", "bisect the largest stable CFL on the smooth test");
  cal->add_option("--degree", cal_degree, "polynomial degree 1..4");
  cal->add_option("--cells", cal_cells, "number of cells");
  cal->add_option("--steps", cal_steps, "steps per probe");
  cal->add_option("--tol", cal_tol, "bisection width");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    if (run->parsed()) return cmd_run(run_f);
    if (conv->parsed()) return cmd_converge(conv_f);
    if (cal->parsed()) return cmd_calibrate(cal_degree, cal_cells, cal_steps, cal_tol);
    return cmd_reference(ref_f);
  } catch (const rhd::AdmissibilityError& e) {
    std::cerr << "admissibility failure: " << e.what() << '\n';
    return 2;
  } catch (const rhd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const rhd::UnsupportedDegree& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const rhd::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
