#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rhd {

// Conserved layout (D, m1, m2, E). Physical fluxes share it.
inline constexpr int kNumVars = 4;
enum Var : int { kDens = 0, kMom1 = 1, kMom2 = 2, kEnergy = 3 };

template <typename Scalar>
using Conserved = Eigen::Matrix<Scalar, kNumVars, 1>;
template <typename Scalar>
using Flux = Eigen::Matrix<Scalar, kNumVars, 1>;
template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

using State = Conserved<double>;

template <typename Scalar>
struct Primitive {
  Scalar rho{};
  Vec2<Scalar> v = Vec2<Scalar>::Zero();
  Scalar p{};
};

using Prim = Primitive<double>;

enum class Axis : int { X = 0, Y = 1 };

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class UnsupportedDegree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// q = E - sqrt(D^2 + |m|^2). Positive (with D > 0) iff the state is admissible.
template <typename Scalar>
inline Scalar admissibility_q(const Conserved<Scalar>& u) {
  using std::sqrt;
  return u[kEnergy] - sqrt(u[kDens] * u[kDens] + u[kMom1] * u[kMom1] + u[kMom2] * u[kMom2]);
}

template <typename Scalar>
inline bool is_admissible(const Conserved<Scalar>& u) {
  using std::isfinite;
  return isfinite(u[kDens]) && isfinite(u[kEnergy]) && u[kDens] > Scalar(0) &&
         admissibility_q(u) > Scalar(0);
}

template <typename Scalar>
inline Scalar momentum_norm(const Conserved<Scalar>& u) {
  using std::sqrt;
  return sqrt(u[kMom1] * u[kMom1] + u[kMom2] * u[kMom2]);
}

}  // namespace rhd
