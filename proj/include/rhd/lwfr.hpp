#pragma once

#include <array>
#include <span>

#include "rhd/basis.hpp"
#include "rhd/eos.hpp"
#include "rhd/physics.hpp"
#include "rhd/state.hpp"

namespace rhd {

inline constexpr int kMaxDegree = 4;
inline constexpr int kMaxNodes1D = kMaxDegree + 1;
inline constexpr int kMaxNodes = kMaxNodes1D * kMaxNodes1D;

/// Perturbation offsets a used by the approximate Lax-Wendroff stencils, plus the centre.
inline constexpr std::array<int, 4> kAlwOffsets{1, -1, 2, -2};

/// f^(r) = sum_a coef[a] * (f(u^[r](a)) - f(u)), indices matching kAlwOffsets.
struct AlwStage {
  std::array<double, 4> coef{};
};

AlwStage alw_stage(int degree, int r);

/// Number of offsets (from the front of kAlwOffsets) a degree needs.
inline int alw_offset_count(int degree) { return degree <= 2 ? 2 : 4; }

/// eps = min(c_mean / 10, 1e-13) for c in {D, q}.
std::pair<double, double> scaling_eps(const State& mean);

/// Scales states linearly toward `center` until D > eps_D, then q > eps_q. With
/// `strict` the trigger is D <= 0 (resp. q <= 0) and untouched inputs stay bitwise
/// identical; otherwise the trigger is D < eps_D (resp. q < eps_q). Returns true when
/// any scaling happened.
bool scale_toward(std::span<State> states, const State& center, double eps_D, double eps_q,
                  bool strict);

/// Flux-argument scaling against a reference mean.
inline bool scale_flux_arguments(std::span<State> candidates, const State& reference_mean,
                                 double eps_D, double eps_q) {
  return scale_toward(candidates, reference_mean, eps_D, eps_q, true);
}

/// Element-local inputs to the time-averaged flux computation.
struct KernelInput {
  const State* u = nullptr;  // nodal states, i + n1 * j
  const State* f = nullptr;  // x fluxes at nodes
  const State* g = nullptr;  // y fluxes at nodes (2-D)
  const PointData<double>* pd = nullptr;  // nodal primitives, optional warm start for recovery
  State mean = State::Zero();
  double cx = 0.0;  // dt / dx
  double cy = 0.0;  // dt / dy
};

/// Traces at the element faces. Side 0 is xi = 0, side 1 is xi = 1.
struct KernelOutput {
  State* F = nullptr;  // time averaged x flux at nodes
  State* G = nullptr;  // time averaged y flux at nodes (2-D)
  std::array<State*, 2> xU{};
  std::array<State*, 2> xF{};
  std::array<State*, 2> yU{};
  std::array<State*, 2> yF{};
  long scaling_activations = 0;
};

/// Approximate Lax-Wendroff time-averaged fluxes for one element plus EA face traces.
/// Holds scratch space; use one instance per worker.
class LwfrKernel {
 public:
  LwfrKernel(const EosModel& eos, const BasisData& basis, int dim, bool scaling,
             const RecoveryOptions& recovery = {});

  void run(const KernelInput& in, KernelOutput& out);

 private:
  Primitive<double> recover(const State& u, int node, int stage, double guess = 0.0) const;
  void face_traces(const KernelInput& in, int axis, int side, State* U, State* F, long& activations);

  EosModel eos_;
  const BasisData* basis_;
  int dim_;
  bool scaling_;
  RecoveryOptions recovery_;
  int n1_, ny_, nn_;

  std::array<std::array<State, kMaxNodes>, kMaxDegree + 1> ud_{};
  std::array<State, kMaxNodes> fprev_{}, gprev_{}, fcur_{}, gcur_{};
  std::array<std::array<State, kMaxNodes>, 4> args_{};
  // Reference means used at stage r (1..N) for each offset.
  std::array<std::array<State, 4>, kMaxDegree + 1> stage_ref_{};
};

}  // namespace rhd
