#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rhd/problems.hpp"
#include "rhd/solver.hpp"

namespace rhd {

struct RunConfig {
  std::string problem = "smooth1d";
  EosKind eos = EosKind::ID;
  std::optional<double> gamma;
  std::optional<int> degree;
  std::array<int, 2> cells{0, 0};  // 0 selects the problem default
  std::optional<double> t_final;
  std::optional<double> safety;
  std::optional<double> alpha_max;
  std::string out;
  CflTable cfl;
  CorrectionKind correction = CorrectionKind::Radau;
  IndicatorParams indicator;
  bool blending = true;
  ProblemOptions problem_options;
  long max_steps = 0;  // 0 means unlimited
};

/// Applies one `key = value` setting. Throws ConfigError on unknown keys or bad values.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads a plain `key = value` file (blank lines and `#` comments ignored).
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Parses "NX" or "NX,NY"; a single count leaves NY = 0 (square on 2-D meshes).
std::array<int, 2> parse_cells(const std::string& text);

EosModel make_eos(const RunConfig& cfg, const ProblemSpec& problem);
SchemeParams make_scheme(const RunConfig& cfg, const ProblemSpec& problem);

struct RunResult {
  SolutionField field;
  EosModel eos;
  int degree = 0;
  double t = 0.0;
  long steps = 0;
  double wall_seconds = 0.0;
  StepStats stats;
};

using StepObserver = std::function<void(const Solver&, double t, const StepStats&)>;

/// Advances the configured problem to its final time.
RunResult run(const RunConfig& cfg, const StepObserver& observer = {});

/// First-order Rusanov finite-volume solution on a uniform 1-D mesh.
struct ReferenceSolution {
  double low = 0.0, dx = 1.0;
  std::vector<Prim> cells;

  /// Nearest-cell lookup.
  const Prim& sample(double x) const;
};

ReferenceSolution reference_solution(const ProblemSpec& problem, const EosModel& eos, int cells,
                                     std::optional<double> t_final = std::nullopt);

struct ErrorReport {
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
};

/// Quadrature norms of the density error against a pointwise exact density.
ErrorReport error_norms(const SolutionField& field, const BasisData& b, const EosModel& eos,
                        const std::function<double(double, double)>& exact_density);

/// L1 distance between the nodal density and a reference solution (1-D).
double l1_distance(const SolutionField& field, const BasisData& b, const EosModel& eos,
                   const ReferenceSolution& ref);

struct ConvergenceRow {
  std::array<int, 2> cells{0, 0};
  ErrorReport error;
  std::optional<ErrorReport> order;  // against the previous row
  double wall_seconds = 0.0;
};

double observed_order(double coarse, double fine);

/// Runs `cfg` on each resolution of `cell_list` (each a doubling of the previous one).
std::vector<ConvergenceRow> convergence_study(const RunConfig& cfg,
                                              const std::vector<std::array<int, 2>>& cell_list);

struct CflProbe {
  double cfl = 0.0;
  bool stable = false;
  double growth = 0.0;  // final / initial L2 norm of the density fluctuation; inf on failure
};

/// Unlimited scheme (blending, flux correction and scaling off) on the periodic smooth test with
/// dt = cfl * dx / lambda_max for `steps` steps. Stable when nothing throws and growth <= 1.01.
CflProbe probe_cfl(int degree, double cfl, int cells, int steps);

/// Bisection for the largest stable CFL(N) in [lo, hi] to absolute width `tol`.
double largest_stable_cfl(int degree, int cells, int steps, double lo, double hi, double tol,
                          std::vector<CflProbe>* log = nullptr);

void write_solution_csv(const SolutionField& field, const BasisData& b, const EosModel& eos,
                        const std::string& path);
void write_table_csv(const std::vector<ConvergenceRow>& rows, const std::string& path);
void write_reference_csv(const ReferenceSolution& ref, const std::string& path);

}  // namespace rhd
