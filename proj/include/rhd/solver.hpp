#pragma once

#include <array>
#include <memory>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/blending.hpp"
#include "rhd/eos.hpp"
#include "rhd/lwfr.hpp"
#include "rhd/mesh.hpp"
#include "rhd/physics.hpp"

namespace rhd {

enum class BcKind { Periodic, Outflow, Reflective, Dirichlet, InflowJet, DmrTop, DmrBottom };

/// Boundary treatment of one domain side. `state` is the prescribed state for Dirichlet-like
/// kinds (post-shock state for the double Mach kinds); `state_alt` is the pre-shock state.
struct BoundarySpec {
  BcKind kind = BcKind::Outflow;
  State state = State::Zero();
  State state_alt = State::Zero();
  double param = 0.0;  // jet half width, or shock speed for DmrTop
};

/// x where the double Mach reflection shock S(x, t) = sqrt(3)(x - 1/6) - 2 v_s t meets y = 1.
double dmr_shock_position(double t, double shock_speed);

/// Sides ordered x-low, x-high, y-low, y-high.
using BoundarySet = std::array<BoundarySpec, 4>;

struct SchemeParams {
  int degree = 3;
  CorrectionKind correction = CorrectionKind::Radau;
  double safety = 0.95;
  CflTable cfl;
  IndicatorParams indicator;
  bool blending = true;
  bool flux_arg_scaling = true;
  bool flux_correction = true;
  bool zhang_shu = true;
  RecoveryOptions recovery;
};

struct StepStats {
  long scaling_activations = 0;
  long flux_corrections = 0;
  long zhang_shu_activations = 0;
  int blended_elements = 0;
  double max_alpha = 0.0;
  double mean_mismatch = 0.0;  // max relative |mean(high) - mean(low)| over elements

  void accumulate(const StepStats& s);
};

/// Caps the worker count from RHD_THREADS when set. Returns the worker count in use.
int configure_threads();

class Solver {
 public:
  Solver(const SolutionField& initial, const EosModel& eos, const SchemeParams& params,
         const BoundarySet& bcs);
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  const SolutionField& field() const { return field_; }
  SolutionField& field() { return field_; }
  const BasisData& basis() const { return basis_; }
  const EosModel& eos() const { return eos_; }
  const SchemeParams& params() const { return params_; }

  /// Time step from the current element means, before clipping to a final time.
  double stable_dt() const;

  /// Advances the field by dt from time t.
  StepStats step(double dt, double t);

  /// Blending coefficients used in the last step.
  const std::vector<double>& alpha() const { return alpha_; }

  /// Per-element blending coefficients of the current field (indicator plus smoothing).
  std::vector<double> compute_alpha() const;

 private:
  struct Workspace;

  void phase_nodal();
  void phase_local(double dt, StepStats& stats);
  void phase_faces(double dt, double t_mid, StepStats& stats);
  void phase_update(double dt, StepStats& stats);

  SolutionField field_;
  EosModel eos_;
  SchemeParams params_;
  BoundarySet bcs_;
  BasisData basis_;
  bool periodic_[2];

  int nx_, ny_, n1_, nyl_, nn_, ne_;
  // Nodal data.
  std::vector<PointData<double>> pd_;
  std::vector<State> fx_, fy_;
  std::vector<State> subx_, suby_;  // interior sub-face Rusanov fluxes
  std::vector<State> Fx_, Fy_;      // time averaged nodal fluxes
  // Element data.
  std::vector<State> mean_;
  std::vector<std::array<double, 2>> lam_mean_;
  std::vector<double> alpha_;
  std::vector<State> xU_, xF_, yU_, yF_;  // face traces [(e * 2 + side) * n + m]
  // Face fluxes.
  std::vector<State> face_x_, face_y_;
  std::vector<std::unique_ptr<LwfrKernel>> kernels_;
};

}  // namespace rhd
