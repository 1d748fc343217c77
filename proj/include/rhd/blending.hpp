#pragma once

#include <array>
#include <span>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/eos.hpp"
#include "rhd/mesh.hpp"
#include "rhd/state.hpp"

namespace rhd {

struct IndicatorParams {
  double a = 0.5;
  double c = 1.8;
  double sharpness = 9.21024;
  double alpha_max = 0.5;
  double alpha_min = 1e-3;
  bool smooth = true;
};

/// T(N) = a * 10^(-c (N+1)^(1/4)).
double indicator_threshold(int degree, const IndicatorParams& p);

/// Highest-mode energy fraction of the orthonormal Legendre expansion of nodal values K.
double modal_energy(std::span<const double> K, const BasisData& b, int dim);

/// Blending coefficient in [0, alpha_max] from nodal indicator values K = rho p Gamma.
double smoothness_alpha(std::span<const double> K, const BasisData& b, int dim,
                        const IndicatorParams& p);

/// alpha_e <- max(alpha_e, alpha_neighbour / 2), one pass over the pre-smoothing values.
void smooth_alpha(std::vector<double>& alpha, const Mesh& mesh, bool periodic_x, bool periodic_y);

inline State blend_face_flux_initial(const State& f_high, const State& f_low, double alpha_face) {
  return f_high + alpha_face * (f_low - f_high);
}

inline State blend_solutions(const State& high, const State& low, double alpha) {
  return high + alpha * (low - high);
}

/// One extremal sub-cell next to a face: its updated state as a function of the face flux F
/// is u - sign * mu * (F - f_interior), mu = dt / (w dx).
struct ExtremalCell {
  State u = State::Zero();
  State f_interior = State::Zero();
  double mu = 0.0;
  double sign = 1.0;  // +1 when the face is on the right of the cell

  State update(const State& F) const { return u - (sign * mu) * (F - f_interior); }
};

/// Makes the face flux keep c(u) >= c(u_low)/10 at both extremal sub-cells, for c = D then q.
/// `cells` holds the one or two sub-cells touching the face.
State admissibility_flux_correction(const State& F_hat, const State& f_low,
                                    std::span<const ExtremalCell> cells, int* activations = nullptr);

/// Scales nodal states toward their mean so every node has D >= eps_D and q >= eps_q.
/// Throws AdmissibilityError when the mean itself is inadmissible.
bool zhang_shu_scale(std::span<State> nodes, const State& mean);

struct CflTable {
  std::array<double, 4> value{0.259, 0.1689, 0.1026, 0.0690};
  double operator()(int degree) const { return value.at(degree - 1); }
};

/// dt = l_s CFL(N) min_e (sum_axes lambda_axis / dx_axis)^-1 from per-element spectral radii.
double compute_dt(std::span<const std::array<double, 2>> element_lambda, const Mesh& mesh,
                  int degree, double safety, const CflTable& cfl);

/// Same, computing the element means and their spectral radii from the field.
double compute_dt(const SolutionField& field, const EosModel& eos, const BasisData& b, double safety,
                  const CflTable& cfl);

}  // namespace rhd
