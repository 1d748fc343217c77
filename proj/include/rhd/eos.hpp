#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rhd/state.hpp"

namespace rhd {

enum class EosKind { ID, TM, IP, RC };

struct EosModel {
  EosKind kind = EosKind::ID;
  double gamma = 5.0 / 3.0;  // used by ID only

  static EosModel ideal(double g) {
    if (!(g > 1.0 && g <= 2.0)) throw DomainError("ideal gas gamma must lie in (1, 2]");
    return {EosKind::ID, g};
  }
  static EosModel taub_mathews() { return {EosKind::TM, 5.0 / 3.0}; }
  static EosModel ip() { return {EosKind::IP, 5.0 / 3.0}; }
  static EosModel rc() { return {EosKind::RC, 5.0 / 3.0}; }
};

std::string to_string(EosKind kind);
EosKind parse_eos_kind(const std::string& name);

enum class RecoveryMethod { PhiNewton, PressureResidual, PiNewton, XiQuartic };

struct RecoveryOptions {
  double tol = 1e-12;
  int max_iter = 100;
  double guess = 0.0;  // pressure warm start, 0 for none
};

template <typename Scalar>
struct RecoveryReport {
  Primitive<Scalar> prim;
  int iterations = 0;
  Scalar residual{};
  RecoveryMethod method = RecoveryMethod::PhiNewton;
  int damped_steps = 0;
};

namespace detail {

template <typename Scalar>
inline void require_finite_positive_rho(Scalar p, Scalar rho) {
  using std::isfinite;
  if (!isfinite(p) || !isfinite(rho) || !(rho > Scalar(0)) || p < Scalar(0))
    throw DomainError("thermodynamic state needs finite p >= 0 and rho > 0");
}

// h - 1 as a function of theta = p / rho, written without cancellation near theta = 0.
template <typename Scalar>
inline Scalar enthalpy_excess(const EosModel& eos, Scalar th) {
  using std::sqrt;
  switch (eos.kind) {
    case EosKind::ID:
      return Scalar(eos.gamma / (eos.gamma - 1.0)) * th;
    case EosKind::TM: {
      const Scalar a = Scalar(2.25) * th * th;
      return Scalar(2.5) * th + a / (sqrt(a + Scalar(1)) + Scalar(1));
    }
    case EosKind::IP: {
      const Scalar a = Scalar(4) * th * th;
      return Scalar(2) * th + a / (sqrt(a + Scalar(1)) + Scalar(1));
    }
    case EosKind::RC:
      return th * (Scalar(12) * th + Scalar(5)) / (Scalar(3) * th + Scalar(2));
  }
  return Scalar(0);
}

// dh/dtheta.
template <typename Scalar>
inline Scalar enthalpy_slope(const EosModel& eos, Scalar th) {
  using std::sqrt;
  switch (eos.kind) {
    case EosKind::ID:
      return Scalar(eos.gamma / (eos.gamma - 1.0));
    case EosKind::TM:
      return Scalar(2.5) + Scalar(2.25) * th / sqrt(Scalar(2.25) * th * th + Scalar(1));
    case EosKind::IP:
      return Scalar(2) + Scalar(4) * th / sqrt(Scalar(4) * th * th + Scalar(1));
    case EosKind::RC: {
      const Scalar d = Scalar(3) * th + Scalar(2);
      return Scalar(2) * (Scalar(18) * th * th + Scalar(24) * th + Scalar(5)) / (d * d);
    }
  }
  return Scalar(0);
}

}  // namespace detail

template <typename Scalar>
Scalar enthalpy(const EosModel& eos, Scalar p, Scalar rho) {
  detail::require_finite_positive_rho(p, rho);
  return Scalar(1) + detail::enthalpy_excess(eos, p / rho);
}

/// Partial derivatives of h with respect to p and rho.
template <typename Scalar>
void enthalpy_partials(const EosModel& eos, Scalar p, Scalar rho, Scalar& dh_dp, Scalar& dh_drho) {
  detail::require_finite_positive_rho(p, rho);
  const Scalar th = p / rho;
  const Scalar s = detail::enthalpy_slope(eos, th);
  dh_dp = s / rho;
  dh_drho = -s * th / rho;
}

template <typename Scalar>
Scalar sound_speed_sq(const EosModel& eos, Scalar p, Scalar rho) {
  using std::isfinite;
  using std::sqrt;
  if (!isfinite(p) || !isfinite(rho) || !(p > Scalar(0)) || !(rho > Scalar(0)))
    throw DomainError("sound speed needs p > 0 and rho > 0");
  switch (eos.kind) {
    case EosKind::ID: {
      const Scalar h = Scalar(1) + detail::enthalpy_excess(eos, p / rho);
      return Scalar(eos.gamma) * p / (h * rho);
    }
    case EosKind::TM: {
      const Scalar r = sqrt(Scalar(9) * p * p + Scalar(4) * rho * rho);
      return (Scalar(5) * p * r + Scalar(9) * p * p) /
             (Scalar(12) * p * r + Scalar(36) * p * p + Scalar(6) * rho * rho);
    }
    case EosKind::IP: {
      const Scalar r = sqrt(Scalar(4) * p * p + rho * rho);
      return Scalar(2) * p * r / (Scalar(4) * p * r + Scalar(4) * p * p + rho * rho);
    }
    case EosKind::RC: {
      const Scalar a = Scalar(6) * p * p + Scalar(4) * p * rho + rho * rho;
      const Scalar b = Scalar(9) * p * p + Scalar(12) * p * rho + Scalar(2) * rho * rho;
      return p * (Scalar(3) * p + Scalar(2) * rho) *
             (Scalar(18) * p * p + Scalar(24) * p * rho + Scalar(5) * rho * rho) / (Scalar(3) * a * b);
    }
  }
  return Scalar(0);
}

template <typename Scalar>
bool check_taub(const EosModel& eos, Scalar p, Scalar rho) {
  using std::sqrt;
  const Scalar h = enthalpy(eos, p, rho);
  const Scalar th = p / rho;
  return h >= sqrt(Scalar(1) + th * th) + th - Scalar(1e-14) * h;
}

template <typename Scalar>
Conserved<Scalar> prim_to_cons(const EosModel& eos, const Primitive<Scalar>& w) {
  using std::isfinite;
  using std::sqrt;
  const Scalar v2 = w.v.squaredNorm();
  if (!(w.rho > Scalar(0)) || !(w.p >= Scalar(0)) || !(v2 < Scalar(1)) || !isfinite(w.rho) ||
      !isfinite(w.p))
    throw DomainError("primitive state needs rho > 0, p >= 0, |v| < 1");
  const Scalar lorentz = Scalar(1) / sqrt(Scalar(1) - v2);
  const Scalar h = enthalpy(eos, w.p, w.rho);
  const Scalar rhoh_g2 = w.rho * h * lorentz * lorentz;
  Conserved<Scalar> u;
  u << w.rho * lorentz, rhoh_g2 * w.v[0], rhoh_g2 * w.v[1], rhoh_g2 - w.p;
  return u;
}

// ---------------------------------------------------------------------------
// RC closure pieces used by the Pi-Newton recovery.

/// T(h) = ((3h-8) + sqrt((3h+8)^2 - 96)) / 24, i.e. p/rho as a function of h.
/// Evaluated in whichever of two equivalent forms avoids cancellation.
template <typename Scalar>
Scalar rc_T_from_excess(Scalar hm1) {
  using std::sqrt;
  const Scalar h = Scalar(1) + hm1;
  const Scalar b = Scalar(3) * h + Scalar(8);
  const Scalar s = sqrt(b * b - Scalar(96));
  if (Scalar(3) * h > Scalar(8)) return (s + Scalar(3) * h - Scalar(8)) / Scalar(24);
  return Scalar(4) * hm1 / (s - Scalar(3) * h + Scalar(8));
}

template <typename Scalar>
Scalar rc_T(Scalar h) {
  return rc_T_from_excess(h - Scalar(1));
}

template <typename Scalar>
Scalar rc_T_prime(Scalar h) {
  using std::sqrt;
  const Scalar b = Scalar(3) * h + Scalar(8);
  return (Scalar(1) + b / sqrt(b * b - Scalar(96))) / Scalar(8);
}

/// R(h) = 2 - T(h)/h - T'(h).
template <typename Scalar>
Scalar rc_R(Scalar h) {
  return Scalar(2) - rc_T(h) / h - rc_T_prime(h);
}

/// S(Pi) = Pi^2 - Pi E - D^2 h T(h), h = sqrt(Pi^2 - |m|^2) / D.
template <typename Scalar>
Scalar rc_S(Scalar pi, const Conserved<Scalar>& u) {
  using std::sqrt;
  const Scalar m = momentum_norm(u);
  const Scalar h = sqrt(pi * pi - m * m) / u[kDens];
  return pi * pi - pi * u[kEnergy] - u[kDens] * u[kDens] * h * rc_T(h);
}

template <typename Scalar>
Scalar rc_S_prime(Scalar pi, const Conserved<Scalar>& u) {
  using std::sqrt;
  const Scalar m = momentum_norm(u);
  const Scalar h = sqrt(pi * pi - m * m) / u[kDens];
  return rc_R(h) * pi - u[kEnergy];
}

// ---------------------------------------------------------------------------
// Ideal-gas residuals.

/// Phi(p) = p/(g-1) - E + |m|^2/(E+p) + D sqrt(1 - |m|^2/(E+p)^2).
template <typename Scalar>
Scalar id_phi_residual(Scalar p, const Conserved<Scalar>& u, Scalar gamma) {
  using std::sqrt;
  const Scalar m2 = u[kMom1] * u[kMom1] + u[kMom2] * u[kMom2];
  const Scalar pi = u[kEnergy] + p;
  const Scalar arg = Scalar(1) - m2 / (pi * pi);
  if (!(arg >= Scalar(0))) throw DomainError("Phi residual: E + p must exceed |m|");
  return p / (gamma - Scalar(1)) - u[kEnergy] + m2 / pi + u[kDens] * sqrt(arg);
}

/// Quartic in |v| whose root in (0,1) is the ideal-gas velocity magnitude.
template <typename Scalar>
Scalar xi_quartic_residual(Scalar v, const Conserved<Scalar>& u, Scalar gamma) {
  const Scalar m2 = u[kMom1] * u[kMom1] + u[kMom2] * u[kMom2];
  const Scalar m = std::sqrt(m2);
  const Scalar D = u[kDens], E = u[kEnergy];
  const Scalar gm1 = gamma - Scalar(1);
  const Scalar den = gm1 * gm1 * (m2 + D * D);
  const Scalar a3 = Scalar(-2) * gamma * gm1 * m * E / den;
  const Scalar a2 = (gamma * gamma * E * E + Scalar(2) * gm1 * m2 - gm1 * gm1 * D * D) / den;
  const Scalar a1 = Scalar(-2) * gamma * m * E / den;
  const Scalar a0 = m2 / den;
  return (((v + a3) * v + a2) * v + a1) * v + a0;
}

// ---------------------------------------------------------------------------
// Conservative to primitive recovery.

namespace detail {

// Quantities shared by all pressure-based recoveries, evaluated without cancellation.
template <typename Scalar>
struct RecoveryFrame {
  Scalar D, m, E, q, e_minus_m, dm_norm;

  explicit RecoveryFrame(const Conserved<Scalar>& u) {
    using std::sqrt;
    D = u[kDens];
    m = momentum_norm(u);
    E = u[kEnergy];
    dm_norm = sqrt(D * D + u[kMom1] * u[kMom1] + u[kMom2] * u[kMom2]);
    q = E - dm_norm;
    e_minus_m = E - m;
  }
  // Same test as is_admissible, reusing the frame's square roots.
  void require_admissible() const {
    using std::isfinite;
    if (!(isfinite(D) && isfinite(E) && D > Scalar(0) && q > Scalar(0)))
      throw AdmissibilityError("conservative state outside the admissible set");
  }
  Scalar pi(Scalar p) const { return E + p; }
  // sqrt(Pi^2 - |m|^2)
  Scalar w(Scalar p) const {
    using std::sqrt;
    return sqrt((e_minus_m + p) * (E + p + m));
  }
  // h_kin - 1 where h_kin = sqrt(Pi^2 - |m|^2) / D.
  Scalar hkin_excess(Scalar p, Scalar w_val) const {
    return (q + p) * (E + p + dm_norm) / (D * (w_val + D));
  }
  Scalar rho(Scalar p, Scalar w_val) const { return D * w_val / (E + p); }

  Primitive<Scalar> primitive(const Conserved<Scalar>& u, Scalar p) const {
    const Scalar inv_pi = Scalar(1) / (E + p);
    Primitive<Scalar> out;
    out.p = p;
    out.v[0] = u[kMom1] * inv_pi;
    out.v[1] = u[kMom2] * inv_pi;
    out.rho = D * w(p) * inv_pi;
    return out;
  }
};

template <typename Scalar>
inline void require_admissible(const Conserved<Scalar>& u) {
  if (!is_admissible(u)) throw AdmissibilityError("conservative state outside the admissible set");
}

// Bracketed Newton with bisection fallback on [lo, hi] where g(lo) < 0 < g(hi).
template <typename Scalar, typename Eval>
Scalar bracketed_newton(Eval&& eval, Scalar x0, Scalar lo, Scalar hi, const RecoveryOptions& opt,
                        int& iterations, Scalar& residual) {
  using std::abs;
  using std::isfinite;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar x = (x0 > lo && x0 < hi) ? x0 : Scalar(0.5) * (lo + hi);
  for (int it = 1; it <= opt.max_iter; ++it) {
    Scalar g, dg;
    eval(x, g, dg);
    iterations = it;
    if (g == Scalar(0)) {
      residual = Scalar(0);
      return x;
    }
    if (g < Scalar(0))
      lo = x;
    else
      hi = x;
    Scalar xn = x - g / dg;
    if (!isfinite(xn) || !(xn > lo && xn < hi)) xn = Scalar(0.5) * (lo + hi);
    const Scalar step = abs(xn - x);
    x = xn;
    if (step <= Scalar(opt.tol) * xn || hi - lo <= Scalar(4) * eps * hi) {
      residual = step / xn;
      return x;
    }
    residual = step / xn;
  }
  throw ConvergenceError("pressure recovery did not converge", opt.max_iter, double(residual));
}

}  // namespace detail

/// Ideal gas: Newton on Phi(p), safeguarded by a bisection bracket.
template <typename Scalar>
RecoveryReport<Scalar> cons_to_prim_id(const Conserved<Scalar>& u, Scalar gamma,
                                       const RecoveryOptions& opt = {}) {
  const detail::RecoveryFrame<Scalar> fr(u);
  fr.require_admissible();
  const Scalar gm1 = gamma - Scalar(1);
  const Scalar k = gamma / gm1;
  const Scalar inv_gm1 = Scalar(1) / gm1;
  auto eval = [&](Scalar p, Scalar& g, Scalar& dg) {
    const Scalar pi = fr.pi(p);
    const Scalar w = fr.w(p);
    // Phi(p) = rho (h_eos - h_kin) with w^2 - D^2 = (q + p)(Pi + sqrt(D^2 + m^2)); one reciprocal.
    const Scalar a = (fr.q + p) * (pi + fr.dm_norm);
    const Scalar r = Scalar(1) / (pi * pi * w * (w + fr.D));
    g = k * p - a * pi * w * w * r;
    dg = inv_gm1 - fr.m * fr.m * a * r;
  };
  RecoveryReport<Scalar> rep;
  rep.method = RecoveryMethod::PhiNewton;
  const Scalar p0 = std::max(gm1 * fr.q, Scalar(1e-12));
  const Scalar p = detail::bracketed_newton(eval, opt.guess > 0.0 ? Scalar(opt.guess) : p0, Scalar(0),
                                            Scalar(2) * fr.E, opt, rep.iterations, rep.residual);
  rep.prim = fr.primitive(u, p);
  return rep;
}

/// Generic pressure-residual Newton (used for TM and IP).
template <typename Scalar>
RecoveryReport<Scalar> cons_to_prim_pressure(const EosModel& eos, const Conserved<Scalar>& u,
                                             const RecoveryOptions& opt = {}) {
  const detail::RecoveryFrame<Scalar> fr(u);
  fr.require_admissible();
  auto eval = [&](Scalar p, Scalar& g, Scalar& dg) {
    const Scalar pi = fr.pi(p);
    const Scalar w = fr.w(p);
    const Scalar rho = fr.rho(p, w);
    const Scalar th = p / rho;
    // Energy balance rho h Gamma^2 - p - E = 0 divided by rho Gamma^2.
    g = detail::enthalpy_excess(eos, th) - fr.hkin_excess(p, w);
    const Scalar drho = fr.D * fr.m * fr.m / (pi * pi * w);
    const Scalar dth = (Scalar(1) - th * drho) / rho;
    dg = detail::enthalpy_slope(eos, th) * dth - pi / (fr.D * w);
  };
  RecoveryReport<Scalar> rep;
  rep.method = RecoveryMethod::PressureResidual;
  const Scalar p0 = opt.guess > 0.0 ? Scalar(opt.guess) : std::max(Scalar(0.5) * fr.q, Scalar(1e-12) * fr.E);
  const Scalar p = detail::bracketed_newton(eval, p0, Scalar(0), Scalar(2) * fr.E, opt,
                                            rep.iterations, rep.residual);
  rep.prim = fr.primitive(u, p);
  return rep;
}

/// RC: Newton on S(Pi) starting from Pi_0 = E, damped so that no iterate crosses the root.
/// S is mostly convex, so a full step from the left tends to overshoot. When it does, the step
/// is cut back to the secant point of [Pi_r, Pi_r + full step], then halved until S < 0 again.
/// Iterates are tracked through p = Pi - E. `iterations` counts residual evaluations.
/// If `iterates` is given, every accepted iterate p_r = Pi_r - E (including p_0) is appended.
template <typename Scalar>
RecoveryReport<Scalar> cons_to_prim_rc(const Conserved<Scalar>& u, const RecoveryOptions& opt = {},
                                       std::vector<Scalar>* iterates = nullptr) {
  using std::isfinite;
  using std::sqrt;
  const detail::RecoveryFrame<Scalar> fr(u);
  fr.require_admissible();
  RecoveryReport<Scalar> rep;
  rep.method = RecoveryMethod::PiNewton;

  struct Eval {
    Scalar s, ds, hm1;
    bool ok() const { return isfinite(s) && isfinite(ds) && hm1 > Scalar(0); }
  };
  auto eval = [&](Scalar p) {
    ++rep.iterations;
    const Scalar pi = fr.pi(p);
    const Scalar w = fr.w(p);
    Eval e;
    e.hm1 = fr.hkin_excess(p, w);
    const Scalar h = Scalar(1) + e.hm1;
    const Scalar b = Scalar(3) * h + Scalar(8);
    const Scalar t = rc_T_from_excess(e.hm1);
    const Scalar tp = (Scalar(1) + b / sqrt(b * b - Scalar(96))) / Scalar(8);
    e.s = pi * p - fr.D * w * t;
    e.ds = (Scalar(2) - t / h - tp) * pi - fr.E;
    return e;
  };
  auto done = [&](Scalar p, Scalar last_step) {
    using std::abs;
    rep.residual = abs(last_step) / p;
    if (iterates && p > iterates->back()) iterates->push_back(p);
    rep.prim = fr.primitive(u, p);
    return rep;
  };

  Scalar p = Scalar(0);
  Eval a{};
  bool warm = false;
  if (opt.guess > 0.0) {
    // A warm start left of the root keeps the iterates increasing.
    a = eval(Scalar(opt.guess));
    warm = a.s < Scalar(0) && a.ok();
    if (warm) p = Scalar(opt.guess);
  }
  if (!warm) a = eval(p);
  if (iterates) iterates->push_back(p);
  const Scalar tol = Scalar(opt.tol);
  while (rep.iterations < opt.max_iter) {
    const Scalar full = -a.s / a.ds;
    // A non-positive Newton step means S(Pi_r) >= 0 up to roundoff: Pi_r is the root.
    if (!(full > Scalar(0))) return done(p, full);
    rep.residual = full / p;
    if (full <= tol * p) return done(p + full, full);
    Scalar pn = p + full;
    Eval e = eval(pn);
    if (!(e.s < Scalar(0) && e.ok())) {
      ++rep.damped_steps;
      if (e.s == Scalar(0) && e.ok()) return done(pn, Scalar(0));
      Scalar cut = full;
      if (isfinite(e.s) && e.s > Scalar(0)) {
        // Root lies in (p, pn]; the secant point is below it wherever S is convex.
        cut = full * (-a.s) / (e.s - a.s);
        if (pn - (p + cut) <= tol * pn) return done(p + cut, pn - (p + cut));
      } else {
        cut = Scalar(0.5) * full;
      }
      pn = p + cut;
      e = eval(pn);
      while (!(e.s < Scalar(0) && e.ok()) && rep.iterations < opt.max_iter) {
        cut *= Scalar(0.5);
        if (!(p + cut > p)) return done(p, cut);
        pn = p + cut;
        e = eval(pn);
      }
      if (!(e.s < Scalar(0) && e.ok())) break;
    }
    p = pn;
    a = e;
    if (iterates) iterates->push_back(p);
  }
  throw ConvergenceError("RC recovery did not converge", opt.max_iter, double(rep.residual));
}

/// Ideal gas via the velocity quartic. Oracle route; not used by the solver.
/// Squaring introduces spurious roots in [0, 1), so every real root is polished and the one whose
/// primitive state maps back closest to u is kept.
RecoveryReport<double> cons_to_prim_id_quartic(const Conserved<double>& u, double gamma,
                                               const RecoveryOptions& opt = {});

template <typename Scalar>
RecoveryReport<Scalar> cons_to_prim(const EosModel& eos, const Conserved<Scalar>& u,
                                    const RecoveryOptions& opt = {}) {
  switch (eos.kind) {
    case EosKind::ID:
      return cons_to_prim_id(u, Scalar(eos.gamma), opt);
    case EosKind::RC:
      return cons_to_prim_rc(u, opt);
    case EosKind::TM:
    case EosKind::IP:
      return cons_to_prim_pressure(eos, u, opt);
  }
  throw DomainError("unknown equation of state");
}

}  // namespace rhd
