#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/eos.hpp"
#include "rhd/mesh.hpp"
#include "rhd/solver.hpp"

namespace rhd {

struct ProblemOptions {
  std::optional<double> jet_pressure;
};

struct ProblemSpec {
  std::string id;
  int dim = 1;
  std::array<double, 2> low{0.0, 0.0};
  std::array<int, 2> default_cells{100, 1};
  std::array<double, 2> high{1.0, 1.0};
  int default_degree = 4;
  double t_final = 0.4;
  double safety = 0.95;
  double alpha_max = 0.5;
  double default_gamma = 5.0 / 3.0;  // ideal gas only
  std::function<Prim(double x, double y)> initial;
  BoundarySet bcs;
  std::function<double(double x, double y, double t)> exact_density;  // smooth problems only
};

std::vector<std::string> problem_ids();

/// Builds a problem; boundary states are converted with `eos`.
ProblemSpec make_problem(const std::string& id, const EosModel& eos, const ProblemOptions& opt = {});

/// Inflow beam pressure from the classical Mach number, c_s = v_b / M.
double jet_pressure(const EosModel& eos, double rho_b, double v_b, double mach);

Mesh make_mesh(const ProblemSpec& p, std::array<int, 2> cells);

/// Nodal conserved states from pointwise primitives.
SolutionField init_field(const ProblemSpec& p, const Mesh& mesh, const BasisData& b,
                         const EosModel& eos);

}  // namespace rhd
