#include "rhd/eos.hpp"

#include <Eigen/Eigenvalues>
#include <cctype>
#include <limits>

namespace rhd {

std::string to_string(EosKind kind) {
  switch (kind) {
    case EosKind::ID: return "ID";
    case EosKind::TM: return "TM";
    case EosKind::IP: return "IP";
    case EosKind::RC: return "RC";
  }
  return "?";
}

EosKind parse_eos_kind(const std::string& name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (s == "ID") return EosKind::ID;
  if (s == "TM") return EosKind::TM;
  if (s == "IP") return EosKind::IP;
  if (s == "RC") return EosKind::RC;
  throw ConfigError("unknown equation of state '" + name + "' (expected ID, TM, IP or RC)");
}

RecoveryReport<double> cons_to_prim_id_quartic(const Conserved<double>& u, double gamma,
                                               const RecoveryOptions& opt) {
  const detail::RecoveryFrame<double> fr(u);
  fr.require_admissible();
  RecoveryReport<double> rep;
  rep.method = RecoveryMethod::XiQuartic;
  const EosModel eos = EosModel::ideal(gamma);

  auto close = [&](double v) {
    // E - |m| v = rho h - p.
    Primitive<double> w;
    w.rho = fr.D * std::sqrt((1.0 - v) * (1.0 + v));
    w.p = (gamma - 1.0) * (fr.E - fr.m * v - w.rho);
    w.v[0] = fr.m > 0.0 ? v * u[kMom1] / fr.m : 0.0;
    w.v[1] = fr.m > 0.0 ? v * u[kMom2] / fr.m : 0.0;
    return w;
  };
  if (!(fr.m > 0.0)) {
    rep.prim = close(0.0);
    rep.prim.p = (gamma - 1.0) * fr.q;
    return rep;
  }

  const double m2 = fr.m * fr.m, gm1 = gamma - 1.0;
  const double den = gm1 * gm1 * (m2 + fr.D * fr.D);
  const double a3 = -2.0 * gamma * gm1 * fr.m * fr.E / den;
  const double a2 = (gamma * gamma * fr.E * fr.E + 2.0 * gm1 * m2 - gm1 * gm1 * fr.D * fr.D) / den;
  const double a1 = -2.0 * gamma * fr.m * fr.E / den;
  const double a0 = m2 / den;
  Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
  comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
  comp(0, 3) = -a0;
  comp(1, 3) = -a1;
  comp(2, 3) = -a2;
  comp(3, 3) = -a3;
  const Eigen::Vector4cd roots = Eigen::EigenSolver<Eigen::Matrix4d>(comp, false).eigenvalues();

  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < 4; ++r) {
    double v = roots[r].real();
    if (std::abs(roots[r].imag()) > 1e-6 || v < -1e-6 || v > 1.0 + 1e-6) continue;
    for (int it = 0; it < opt.max_iter; ++it) {
      ++rep.iterations;
      const double f = (((v + a3) * v + a2) * v + a1) * v + a0;
      const double df = ((4.0 * v + 3.0 * a3) * v + 2.0 * a2) * v + a1;
      if (df == 0.0) break;
      const double step = f / df;
      v = std::clamp(v - step, 0.0, std::nextafter(1.0, 0.0));
      if (std::abs(step) <= opt.tol * v) break;
    }
    const Primitive<double> w = close(v);
    if (!(w.p > 0.0) || !(w.rho > 0.0)) continue;
    const Conserved<double> back = prim_to_cons(eos, w);
    const double mismatch = (back - u).cwiseAbs().maxCoeff();
    if (mismatch < best) {
      best = mismatch;
      rep.prim = w;
      rep.residual = mismatch / u.cwiseAbs().maxCoeff();
    }
  }
  if (!std::isfinite(best)) throw ConvergenceError("velocity quartic has no admissible root", opt.max_iter, 0.0);
  return rep;
}

}  // namespace rhd
