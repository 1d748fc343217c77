#pragma once

#include <Eigen/Core>

#include <array>
#include <utility>

#include "rhd/state.hpp"

namespace rhd {

enum class CorrectionKind { Radau, G2 };

/// Legendre polynomial P_n(x) on [-1, 1] and its derivative.
std::pair<double, double> legendre(int n, double x);

/// Gauss-Legendre nodal data on the reference element [0, 1].
struct BasisData {
  int degree = 0;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::MatrixXd diff;  // diff(i, j) = l_j'(xi_i)
  Eigen::VectorXd extrap_left;
  Eigen::VectorXd extrap_right;
  Eigen::VectorXd corr_deriv_left;
  Eigen::VectorXd corr_deriv_right;
  Eigen::MatrixXd modal;  // modal(k, j) = w_j L_k(xi_j), L_k orthonormal on [0, 1]
  CorrectionKind correction = CorrectionKind::Radau;

  int n_nodes() const { return degree + 1; }
};

BasisData build_basis(int degree, CorrectionKind correction = CorrectionKind::Radau);

/// Correction function h_R(xi) and its derivative on [0, 1]; h_L(xi) = h_R(1 - xi).
std::pair<double, double> correction_right(int degree, CorrectionKind kind, double xi);

/// Lagrange basis value l_j(xi) for arbitrary xi.
double lagrange(const BasisData& b, int j, double xi);

/// Derivative of nodal data; written against differences so constants map to exact zeros.
template <typename Derived>
Eigen::VectorXd nodal_derivative(const BasisData& b, const Eigen::MatrixBase<Derived>& values) {
  const int n = b.n_nodes();
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) s += b.diff(i, j) * (values[j] - values[i]);
    out[i] = s;
  }
  return out;
}

template <typename Derived>
std::pair<double, double> extrapolate_faces(const BasisData& b, const Eigen::MatrixBase<Derived>& values) {
  const int n = b.n_nodes();
  double l = values[0], r = values[0];
  for (int j = 1; j < n; ++j) {
    l += b.extrap_left[j] * (values[j] - values[0]);
    r += b.extrap_right[j] * (values[j] - values[0]);
  }
  return {l, r};
}

}  // namespace rhd
