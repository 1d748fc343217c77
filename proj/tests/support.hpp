#pragma once

#include <cmath>
#include <random>

#include "rhd/eos.hpp"
#include "rhd/state.hpp"

namespace rhd::testing {

inline const EosModel kAllEos[] = {EosModel::ideal(5.0 / 3.0), EosModel::taub_mathews(), EosModel::ip(),
                                   EosModel::rc()};

inline const char* eos_name(const EosModel& e) {
  switch (e.kind) {
    case EosKind::ID: return "ID";
    case EosKind::TM: return "TM";
    case EosKind::IP: return "IP";
    case EosKind::RC: return "RC";
  }
  return "?";
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Speed in [0, vmax]: half the draws uniform, half with 1 - |v| log-uniform down to 1 - vmax.
  double speed(double vmax) {
    if (uniform(0.0, 1.0) < 0.5) return uniform(0.0, vmax);
    return 1.0 - log_uniform(1.0 - vmax, 1.0);
  }

  /// Random direction for a 1-D (dim = 1) or 2-D velocity of magnitude s.
  Vec2<double> velocity(double s, int dim) {
    Vec2<double> v;
    if (dim == 1) {
      v << (uniform(0.0, 1.0) < 0.5 ? -s : s), 0.0;
    } else {
      const double a = uniform(0.0, 2.0 * 3.141592653589793);
      v << s * std::cos(a), s * std::sin(a);
    }
    return v;
  }

  Prim prim(double lo, double hi, double vmax, int dim = 2) {
    Prim w;
    w.rho = log_uniform(lo, hi);
    w.p = log_uniform(lo, hi);
    w.v = velocity(speed(vmax), dim);
    return w;
  }

  /// Moderately scaled admissible state, useful for scheme-level properties.
  Prim mild_prim(int dim = 2) {
    Prim w;
    w.rho = log_uniform(1e-3, 1e2);
    w.p = log_uniform(1e-3, 1e2);
    w.v = velocity(uniform(0.0, 0.999), dim);
    return w;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline State cons1(double D, double m1, double E) {
  State u;
  u << D, m1, 0.0, E;
  return u;
}

inline Prim prim1(double rho, double v, double p) {
  Prim w;
  w.rho = rho;
  w.v << v, 0.0;
  w.p = p;
  return w;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Componentwise relative error of a state against a reference, scaled by the largest magnitude.
inline double state_rel_err(const State& a, const State& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace rhd::testing
