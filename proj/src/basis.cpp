#include "rhd/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rhd {

std::pair<double, double> legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  // P_n' from (x^2 - 1) P_n' = n (x P_n - P_{n-1}); endpoints use n(n+1)/2 * (+-1)^(n+1).
  double dp;
  if (std::abs(x * x - 1.0) < 1e-300) {
    dp = 0.5 * n * (n + 1) * (x > 0 ? 1.0 : ((n + 1) % 2 == 0 ? 1.0 : -1.0));
  } else {
    dp = n * (x * p1 - p0) / (x * x - 1.0);
  }
  return {p1, dp};
}

namespace {

void gauss_legendre(int n_pts, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  nodes.resize(n_pts);
  weights.resize(n_pts);
  if (n_pts == 2) {
    const double s = std::sqrt(3.0) / 6.0;
    nodes << 0.5 - s, 0.5 + s;
    weights << 0.5, 0.5;
    return;
  }
  if (n_pts == 3) {
    const double s = std::sqrt(15.0) / 10.0;
    nodes << 0.5 - s, 0.5, 0.5 + s;
    weights << 5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0;
    return;
  }
  for (int k = 0; k < n_pts; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n_pts + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n_pts, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, dp] = legendre(n_pts, x);
    (void)p;
    // cos ordering is descending in x; store ascending.
    const int idx = n_pts - 1 - k;
    nodes[idx] = 0.5 * (1.0 + x);
    weights[idx] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace

std::pair<double, double> correction_right(int degree, CorrectionKind kind, double xi) {
  const double x = 2.0 * xi - 1.0;
  const int n = degree;
  // Right Radau polynomial of degree k: (P_k + P_{k-1}) / 2.
  auto radau = [x](int k) {
    const auto [a, da] = legendre(k, x);
    const auto [b, db] = legendre(k - 1, x);
    return std::pair<double, double>{0.5 * (a + b), 0.5 * (da + db)};
  };
  std::pair<double, double> g;
  if (kind == CorrectionKind::Radau) {
    g = radau(n + 1);
  } else {
    const auto r1 = radau(n + 1);
    const auto r0 = radau(n);
    const double c = 1.0 / (2.0 * n + 1.0);
    g = {c * ((n + 1.0) * r0.first + n * r1.first), c * ((n + 1.0) * r0.second + n * r1.second)};
  }
  return {g.first, 2.0 * g.second};
}

double lagrange(const BasisData& b, int j, double xi) {
  double v = 1.0;
  for (int k = 0; k < b.n_nodes(); ++k)
    if (k != j) v *= (xi - b.nodes[k]) / (b.nodes[j] - b.nodes[k]);
  return v;
}

BasisData build_basis(int degree, CorrectionKind correction) {
  if (degree < 1 || degree > 4)
    throw UnsupportedDegree("polynomial degree must be in 1..4, got " + std::to_string(degree));
  BasisData b;
  b.degree = degree;
  b.correction = correction;
  const int n = degree + 1;
  gauss_legendre(n, b.nodes, b.weights);

  Eigen::VectorXd bary(n);
  for (int j = 0; j < n; ++j) {
    double prod = 1.0;
    for (int k = 0; k < n; ++k)
      if (k != j) prod *= b.nodes[j] - b.nodes[k];
    bary[j] = 1.0 / prod;
  }
  b.diff.resize(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      b.diff(i, j) = bary[j] / bary[i] / (b.nodes[i] - b.nodes[j]);
      diag -= b.diff(i, j);
    }
    b.diff(i, i) = diag;
  }

  b.extrap_left.resize(n);
  b.extrap_right.resize(n);
  for (int j = 0; j < n; ++j) {
    b.extrap_left[j] = lagrange(b, j, 0.0);
    b.extrap_right[j] = lagrange(b, j, 1.0);
  }

  b.corr_deriv_left.resize(n);
  b.corr_deriv_right.resize(n);
  for (int i = 0; i < n; ++i) {
    b.corr_deriv_right[i] = correction_right(degree, correction, b.nodes[i]).second;
    b.corr_deriv_left[i] = -correction_right(degree, correction, 1.0 - b.nodes[i]).second;
  }

  const double tol = 1e-13;
  const auto r0 = correction_right(degree, correction, 0.0).first;
  const auto r1 = correction_right(degree, correction, 1.0).first;
  if (std::abs(r0) > tol || std::abs(r1 - 1.0) > tol)
    throw DomainError("correction function boundary values are off");

  b.modal.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      b.modal(k, j) = b.weights[j] * std::sqrt(2.0 * k + 1.0) * legendre(k, 2.0 * b.nodes[j] - 1.0).first;
  return b;
}

}  // namespace rhd
