#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "rhd/eos.hpp"
#include "rhd/state.hpp"

namespace rhd {

/// (D, q) constraint values; the state is admissible iff both are positive.
template <typename Scalar>
std::pair<Scalar, Scalar> admissibility(const Conserved<Scalar>& u) {
  return {u[kDens], admissibility_q(u)};
}

template <typename Scalar>
Flux<Scalar> physical_flux(const Conserved<Scalar>& u, const Primitive<Scalar>& w, Axis dir) {
  const int a = static_cast<int>(dir);
  const Scalar vn = w.v[a];
  Flux<Scalar> f;
  f[kDens] = u[kDens] * vn;
  f[kMom1] = u[kMom1] * vn;
  f[kMom2] = u[kMom2] * vn;
  f[kMom1 + a] += w.p;
  f[kEnergy] = u[kMom1 + a];
  return f;
}

template <typename Scalar>
Flux<Scalar> physical_flux(const EosModel&, const Conserved<Scalar>& u, const Primitive<Scalar>& w,
                           Axis dir) {
  return physical_flux(u, w, dir);
}

/// Spectral radius of the flux Jacobian along `dir` given c_s^2.
template <typename Scalar>
Scalar spectral_radius(Scalar cs2, Scalar vn) {
  using std::abs;
  using std::sqrt;
  const Scalar cs = sqrt(cs2);
  const Scalar av = abs(vn);
  return (av + cs) / (Scalar(1) + cs * av);
}

template <typename Scalar>
Scalar max_wave_speed(const EosModel& eos, const Primitive<Scalar>& w, Axis dir) {
  return spectral_radius(sound_speed_sq(eos, w.p, w.rho), w.v[static_cast<int>(dir)]);
}

/// Primitive state bundled with its spectral radii, the unit of work for flux evaluations.
template <typename Scalar>
struct PointData {
  Primitive<Scalar> prim;
  Scalar lambda[2];
};

template <typename Scalar>
PointData<Scalar> point_data(const EosModel& eos, const Conserved<Scalar>& u,
                             const RecoveryOptions& opt = {}) {
  PointData<Scalar> out;
  out.prim = cons_to_prim(eos, u, opt).prim;
  const Scalar cs2 = sound_speed_sq(eos, out.prim.p, out.prim.rho);
  out.lambda[0] = spectral_radius(cs2, out.prim.v[0]);
  out.lambda[1] = spectral_radius(cs2, out.prim.v[1]);
  return out;
}

/// Rusanov flux from states with precomputed physical fluxes and spectral radii.
template <typename Scalar>
Flux<Scalar> rusanov_from_parts(const Conserved<Scalar>& uL, const Flux<Scalar>& fL, Scalar lamL,
                                const Conserved<Scalar>& uR, const Flux<Scalar>& fR, Scalar lamR) {
  const Scalar lam = std::max(lamL, lamR);
  return Scalar(0.5) * (fL + fR) - Scalar(0.5) * lam * (uR - uL);
}

template <typename Scalar>
Flux<Scalar> rusanov_flux(const EosModel& eos, const Conserved<Scalar>& uL,
                          const Conserved<Scalar>& uR, Axis dir) {
  const int a = static_cast<int>(dir);
  const auto pl = point_data(eos, uL);
  const auto pr = point_data(eos, uR);
  return rusanov_from_parts(uL, physical_flux(uL, pl.prim, dir), pl.lambda[a], uR,
                            physical_flux(uR, pr.prim, dir), pr.lambda[a]);
}

}  // namespace rhd
