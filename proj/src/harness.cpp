#include "rhd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace rhd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' expects a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw ConfigError("config key '" + key + "' expects an integer");
  return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("config key '" + key + "' expects a boolean");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

}  // namespace

std::array<int, 2> parse_cells(const std::string& text) {
  std::array<int, 2> c{0, 0};
  const auto comma = text.find_first_of(",x");
  c[0] = to_int("cells", trim(text.substr(0, comma)));
  if (comma != std::string::npos) c[1] = to_int("cells", trim(text.substr(comma + 1)));
  if (c[0] < 1 || (comma != std::string::npos && c[1] < 1))
    throw ConfigError("cell counts must be positive");
  return c;
}

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "problem") {
    cfg.problem = v;
  } else if (key == "eos") {
    cfg.eos = parse_eos_kind(v);
  } else if (key == "gamma") {
    cfg.gamma = to_double(key, v);
  } else if (key == "degree") {
    cfg.degree = to_int(key, v);
  } else if (key == "cells") {
    cfg.cells = parse_cells(v);
  } else if (key == "tfinal" || key == "t_final") {
    cfg.t_final = to_double(key, v);
  } else if (key == "safety" || key == "safety_factor") {
    cfg.safety = to_double(key, v);
  } else if (key == "out") {
    cfg.out = v;
  } else if (key == "alpha_max") {
    cfg.alpha_max = to_double(key, v);
  } else if (key == "cfl_table") {
    std::stringstream ss(v);
    std::string item;
    int n = 0;
    while (std::getline(ss, item, ',')) {
      if (n >= 4) throw ConfigError("cfl_table takes four values");
      cfg.cfl.value[n++] = to_double(key, trim(item));
    }
    if (n != 4) throw ConfigError("cfl_table takes four values");
  } else if (key == "correction") {
    if (v == "radau")
      cfg.correction = CorrectionKind::Radau;
    else if (v == "g2")
      cfg.correction = CorrectionKind::G2;
    else
      throw ConfigError("correction must be radau or g2");
  } else if (key == "indicator.a") {
    cfg.indicator.a = to_double(key, v);
  } else if (key == "indicator.c") {
    cfg.indicator.c = to_double(key, v);
  } else if (key == "indicator.sharpness") {
    cfg.indicator.sharpness = to_double(key, v);
  } else if (key == "indicator.alpha_min") {
    cfg.indicator.alpha_min = to_double(key, v);
  } else if (key == "indicator.smooth") {
    cfg.indicator.smooth = to_bool(key, v);
  } else if (key == "blending") {
    cfg.blending = to_bool(key, v);
  } else if (key == "jet.pressure") {
    cfg.problem_options.jet_pressure = to_double(key, v);
  } else if (key == "max_steps") {
    cfg.max_steps = to_int(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

EosModel make_eos(const RunConfig& cfg, const ProblemSpec& problem) {
  switch (cfg.eos) {
    case EosKind::ID:
      return EosModel::ideal(cfg.gamma.value_or(problem.default_gamma));
    case EosKind::TM:
      return EosModel::taub_mathews();
    case EosKind::IP:
      return EosModel::ip();
    case EosKind::RC:
      return EosModel::rc();
  }
  throw ConfigError("unknown equation of state");
}

SchemeParams make_scheme(const RunConfig& cfg, const ProblemSpec& problem) {
  SchemeParams s;
  s.degree = cfg.degree.value_or(problem.default_degree);
  s.correction = cfg.correction;
  s.safety = cfg.safety.value_or(problem.safety);
  s.cfl = cfg.cfl;
  s.indicator = cfg.indicator;
  s.indicator.alpha_max = cfg.alpha_max.value_or(problem.alpha_max);
  s.blending = cfg.blending;
  if (!(s.safety > 0.0 && s.safety <= 1.0)) throw ConfigError("safety factor must lie in (0, 1]");
  if (s.degree < 1 || s.degree > 4) throw ConfigError("degree must lie in 1..4");
  return s;
}

RunResult run(const RunConfig& cfg, const StepObserver& observer) {
  const ProblemSpec probe = make_problem(cfg.problem, EosModel{}, cfg.problem_options);
  const EosModel eos = make_eos(cfg, probe);
  const ProblemSpec prob = make_problem(cfg.problem, eos, cfg.problem_options);
  const SchemeParams scheme = make_scheme(cfg, prob);
  std::array<int, 2> cells = cfg.cells;
  if (cells[0] == 0) cells = prob.default_cells;
  if (prob.dim == 1) cells[1] = 1;
  if (prob.dim == 2 && cells[1] == 0) cells[1] = cells[0];

  const BasisData basis = build_basis(scheme.degree, scheme.correction);
  const Mesh mesh = make_mesh(prob, cells);
  Solver solver(init_field(prob, mesh, basis, eos), eos, scheme, prob.bcs);

  const double t_final = cfg.t_final.value_or(prob.t_final);
  if (!(t_final >= 0.0)) throw ConfigError("final time must be non-negative");
  RunResult res;
  res.eos = eos;
  res.degree = scheme.degree;
  const auto start = std::chrono::steady_clock::now();
  double t = 0.0;
  while (t < t_final) {
    if (cfg.max_steps > 0 && res.steps >= cfg.max_steps) break;
    double dt = solver.stable_dt();
    bool last = false;
    if (t + dt >= t_final * (1.0 - 1e-14)) {
      dt = t_final - t;
      last = true;
    }
    const StepStats s = solver.step(dt, t);
    t = last ? t_final : t + dt;
    ++res.steps;
    res.stats.accumulate(s);
    if (observer) observer(solver, t, s);
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.t = t;
  res.field = solver.field();
  return res;
}

const Prim& ReferenceSolution::sample(double x) const {
  long i = static_cast<long>(std::floor((x - low) / dx));
  i = std::clamp<long>(i, 0, static_cast<long>(cells.size()) - 1);
  return cells[i];
}

ReferenceSolution reference_solution(const ProblemSpec& problem, const EosModel& eos, int n,
                                     std::optional<double> t_final) {
  if (problem.dim != 1) throw ConfigError("reference solutions are 1-D only");
  if (n < 2) throw ConfigError("reference solution needs at least two cells");
  const double dx = (problem.high[0] - problem.low[0]) / n;
  const bool periodic = problem.bcs[0].kind == BcKind::Periodic;
  std::vector<State> u(n), flux(n + 1);
  std::vector<State> f(n);
  std::vector<double> lam(n);
  for (int i = 0; i < n; ++i)
    u[i] = prim_to_cons(eos, problem.initial(problem.low[0] + (i + 0.5) * dx, 0.0));

  auto ghost = [&](int side, const State& inner, const State& f_in, double l_in, State& ug, State& fg,
                   double& lg) {
    const BoundarySpec& bc = problem.bcs[side];
    if (bc.kind == BcKind::Reflective) {
      ug = inner;
      ug[kMom1] = -inner[kMom1];
      fg = -f_in;
      fg[kMom1] = f_in[kMom1];
      lg = l_in;
    } else if (bc.kind == BcKind::Dirichlet) {
      const auto pd = point_data(eos, bc.state);
      ug = bc.state;
      fg = physical_flux(bc.state, pd.prim, Axis::X);
      lg = pd.lambda[0];
    } else {
      ug = inner;
      fg = f_in;
      lg = l_in;
    }
  };

  const double T = t_final.value_or(problem.t_final);
  double t = 0.0;
  while (t < T) {
    double lmax = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto pd = point_data(eos, u[i]);
      f[i] = physical_flux(u[i], pd.prim, Axis::X);
      lam[i] = pd.lambda[0];
      lmax = std::max(lmax, lam[i]);
    }
    double dt = 0.9 * dx / lmax;
    bool last = false;
    if (t + dt >= T * (1.0 - 1e-14)) {
      dt = T - t;
      last = true;
    }
    for (int k = 1; k < n; ++k)
      flux[k] = rusanov_from_parts(u[k - 1], f[k - 1], lam[k - 1], u[k], f[k], lam[k]);
    if (periodic) {
      flux[0] = rusanov_from_parts(u[n - 1], f[n - 1], lam[n - 1], u[0], f[0], lam[0]);
      flux[n] = flux[0];
    } else {
      State ug, fg;
      double lg;
      ghost(0, u[0], f[0], lam[0], ug, fg, lg);
      flux[0] = rusanov_from_parts(ug, fg, lg, u[0], f[0], lam[0]);
      ghost(1, u[n - 1], f[n - 1], lam[n - 1], ug, fg, lg);
      flux[n] = rusanov_from_parts(u[n - 1], f[n - 1], lam[n - 1], ug, fg, lg);
    }
    const double mu = dt / dx;
    for (int i = 0; i < n; ++i) {
      u[i] -= mu * (flux[i + 1] - flux[i]);
      if (!is_admissible(u[i]))
        throw AdmissibilityError("reference solver produced an inadmissible state at cell " +
                                 std::to_string(i));
    }
    t = last ? T : t + dt;
  }

  ReferenceSolution ref;
  ref.low = problem.low[0];
  ref.dx = dx;
  ref.cells.resize(n);
  for (int i = 0; i < n; ++i) ref.cells[i] = cons_to_prim(eos, u[i]).prim;
  return ref;
}

ErrorReport error_norms(const SolutionField& field, const BasisData& b, const EosModel& eos,
                        const std::function<double(double, double)>& exact_density) {
  const Mesh& m = field.mesh;
  ErrorReport r;
  double sq = 0.0;
  const double vol = m.dim == 2 ? m.dx[0] * m.dx[1] : m.dx[0];
  for (int ey = 0; ey < m.cells[1]; ++ey)
    for (int ex = 0; ex < m.cells[0]; ++ex)
      for (int j = 0; j < field.n_y_nodes(); ++j)
        for (int i = 0; i < field.n1(); ++i) {
          const State& u = field.u[field.index(m.element(ex, ey), i, j)];
          const double rho = cons_to_prim(eos, u).prim.rho;
          const auto x = field.node_position(b, ex, ey, i, j);
          const double err = std::abs(rho - exact_density(x[0], x[1]));
          const double w = m.dim == 2 ? b.weights[i] * b.weights[j] : b.weights[i];
          r.l1 += vol * w * err;
          sq += vol * w * err * err;
          r.linf = std::max(r.linf, err);
        }
  r.l2 = std::sqrt(sq);
  return r;
}

double l1_distance(const SolutionField& field, const BasisData& b, const EosModel& eos,
                   const ReferenceSolution& ref) {
  const Mesh& m = field.mesh;
  if (m.dim != 1) throw ConfigError("reference comparison is 1-D only");
  double d = 0.0;
  for (int e = 0; e < m.cells[0]; ++e)
    for (int i = 0; i < field.n1(); ++i) {
      const double rho = cons_to_prim(eos, field.u[field.index(e, i, 0)]).prim.rho;
      const double x = field.node_position(b, e, 0, i, 0)[0];
      d += m.dx[0] * b.weights[i] * std::abs(rho - ref.sample(x).rho);
    }
  return d;
}

double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg,
                                              const std::vector<std::array<int, 2>>& cell_list) {
  if (cell_list.empty()) throw ConfigError("convergence study needs at least one resolution");
  for (size_t k = 1; k < cell_list.size(); ++k)
    if (cell_list[k][0] != 2 * cell_list[k - 1][0] ||
        (cell_list[k][1] > 1 && cell_list[k][1] != 2 * cell_list[k - 1][1]))
      throw ConfigError("convergence study resolutions must double");
  const ProblemSpec probe = make_problem(cfg.problem, EosModel{}, cfg.problem_options);
  if (!probe.exact_density) throw ConfigError("problem '" + cfg.problem + "' has no exact solution");

  std::vector<ConvergenceRow> rows;
  for (const auto& cells : cell_list) {
    RunConfig c = cfg;
    c.cells = cells;
    const RunResult res = run(c);
    const ProblemSpec prob = make_problem(cfg.problem, res.eos, cfg.problem_options);
    const BasisData b = build_basis(res.degree, cfg.correction);
    ConvergenceRow row;
    row.cells = {cells[0], prob.dim == 2 ? cells[1] : 1};
    row.error = error_norms(res.field, b, res.eos,
                            [&](double x, double y) { return prob.exact_density(x, y, res.t); });
    row.wall_seconds = res.wall_seconds;
    if (!rows.empty()) {
      const ErrorReport& p = rows.back().error;
      row.order = ErrorReport{observed_order(p.l1, row.error.l1), observed_order(p.l2, row.error.l2),
                              observed_order(p.linf, row.error.linf)};
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

double density_fluctuation(const SolutionField& f, const BasisData& b, const EosModel& eos) {
  std::vector<double> rho(f.u.size());
  double mean = 0.0, wsum = 0.0;
  for (int e = 0; e < f.mesh.n_elements(); ++e)
    for (int i = 0; i < f.n1(); ++i) {
      const int k = f.index(e, i, 0);
      rho[k] = cons_to_prim(eos, f.u[k]).prim.rho;
      mean += b.weights[i] * rho[k];
      wsum += b.weights[i];
    }
  mean /= wsum;
  double s = 0.0;
  for (int e = 0; e < f.mesh.n_elements(); ++e)
    for (int i = 0; i < f.n1(); ++i) s += b.weights[i] * std::pow(rho[f.index(e, i, 0)] - mean, 2);
  return std::sqrt(s / wsum);
}

}  // namespace

CflProbe probe_cfl(int degree, double cfl, int cells, int steps) {
  const EosModel eos = EosModel::ideal(5.0 / 3.0);
  const ProblemSpec p = make_problem("smooth1d", eos);
  SchemeParams sp;
  sp.degree = degree;
  sp.blending = false;
  sp.flux_correction = false;
  sp.flux_arg_scaling = false;
  sp.zhang_shu = false;
  sp.safety = 1.0;
  sp.cfl.value.fill(cfl);
  const BasisData b = build_basis(degree);
  CflProbe r;
  r.cfl = cfl;
  r.growth = std::numeric_limits<double>::infinity();
  try {
    Solver s(init_field(p, make_mesh(p, {cells, 1}), b, eos), eos, sp, p.bcs);
    const double e0 = density_fluctuation(s.field(), b, eos);
    double t = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double dt = s.stable_dt();
      s.step(dt, t);
      t += dt;
    }
    r.growth = density_fluctuation(s.field(), b, eos) / e0;
  } catch (const std::exception&) {
    return r;
  }
  r.stable = std::isfinite(r.growth) && r.growth <= 1.01;
  return r;
}

double largest_stable_cfl(int degree, int cells, int steps, double lo, double hi, double tol,
                          std::vector<CflProbe>* log) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const CflProbe r = probe_cfl(degree, mid, cells, steps);
    if (log) log->push_back(r);
    (r.stable ? lo : hi) = mid;
  }
  return lo;
}

void write_solution_csv(const SolutionField& field, const BasisData& b, const EosModel& eos,
                        const std::string& path) {
  auto os = open_out(path);
  const Mesh& m = field.mesh;
  const bool two_d = m.dim == 2;
  os << (two_d ? "x,y,rho,v1,v2,p\n" : "x,rho,v1,p\n");
  if (field.u.empty()) return;
  for (int ey = 0; ey < m.cells[1]; ++ey)
    for (int ex = 0; ex < m.cells[0]; ++ex)
      for (int j = 0; j < field.n_y_nodes(); ++j)
        for (int i = 0; i < field.n1(); ++i) {
          const State& u = field.u[field.index(m.element(ex, ey), i, j)];
          const Prim w = cons_to_prim(eos, u).prim;
          const auto x = field.node_position(b, ex, ey, i, j);
          os << fmt17(x[0]) << ',';
          if (two_d) os << fmt17(x[1]) << ',';
          os << fmt17(w.rho) << ',' << fmt17(w.v[0]) << ',';
          if (two_d) os << fmt17(w.v[1]) << ',';
          os << fmt17(w.p) << '\n';
        }
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

void write_table_csv(const std::vector<ConvergenceRow>& rows, const std::string& path) {
  auto os = open_out(path);
  os << "Cells,L1 error,L1 order,L2 error,L2 order,Linf error,Linf order\n";
  for (const auto& r : rows) {
    os << r.cells[0];
    if (r.cells[1] > 1) os << 'x' << r.cells[1];
    auto ord = [&](double ErrorReport::*field) { return r.order ? fmt17((*r.order).*field) : std::string("-"); };
    os << ',' << fmt17(r.error.l1) << ',' << ord(&ErrorReport::l1) << ',' << fmt17(r.error.l2) << ','
       << ord(&ErrorReport::l2) << ',' << fmt17(r.error.linf) << ',' << ord(&ErrorReport::linf) << '\n';
  }
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

void write_reference_csv(const ReferenceSolution& ref, const std::string& path) {
  auto os = open_out(path);
  os << "x,rho,v1,p\n";
  for (size_t i = 0; i < ref.cells.size(); ++i) {
    const Prim& w = ref.cells[i];
    os << fmt17(ref.low + (i + 0.5) * ref.dx) << ',' << fmt17(w.rho) << ',' << fmt17(w.v[0]) << ','
       << fmt17(w.p) << '\n';
  }
  if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace rhd
