#include "rhd/blending.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rhd/lwfr.hpp"
#include "rhd/physics.hpp"

namespace rhd {

double indicator_threshold(int degree, const IndicatorParams& p) {
  return p.a * std::pow(10.0, -p.c * std::pow(degree + 1.0, 0.25));
}

double modal_energy(std::span<const double> K, const BasisData& b, int dim) {
  const int n = b.n_nodes();
  const int N = b.degree;
  double total = 0.0, clip1 = 0.0, clip2 = 0.0;
  if (dim == 1) {
    for (int k = 0; k < n; ++k) {
      double c = 0.0;
      for (int j = 0; j < n; ++j) c += b.modal(k, j) * K[j];
      const double e = c * c;
      total += e;
      if (k <= N - 1) clip1 += e;
      if (k <= N - 2) clip2 += e;
    }
  } else {
    std::array<double, kMaxNodes> tmp{};
    // Transform along x for every row, then along y.
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double c = 0.0;
        for (int i = 0; i < n; ++i) c += b.modal(k, i) * K[i + n * j];
        tmp[k + n * j] = c;
      }
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k) {
        double c = 0.0;
        for (int j = 0; j < n; ++j) c += b.modal(l, j) * tmp[k + n * j];
        const double e = c * c;
        const int deg = std::max(k, l);
        total += e;
        if (deg <= N - 1) clip1 += e;
        if (deg <= N - 2) clip2 += e;
      }
  }
  if (!(total > 0.0)) return 0.0;
  double energy = (total - clip1) / total;
  if (N >= 2 && clip1 > 0.0) energy = std::max(energy, (clip1 - clip2) / clip1);
  return energy;
}

double smoothness_alpha(std::span<const double> K, const BasisData& b, int dim,
                        const IndicatorParams& p) {
  const double energy = modal_energy(K, b, dim);
  const double T = indicator_threshold(b.degree, p);
  double alpha = 1.0 / (1.0 + std::exp(-p.sharpness / T * (energy - T)));
  if (alpha < p.alpha_min) alpha = 0.0;
  if (alpha > 1.0 - p.alpha_min) alpha = 1.0;
  return std::min(alpha, p.alpha_max);
}

void smooth_alpha(std::vector<double>& alpha, const Mesh& mesh, bool periodic_x, bool periodic_y) {
  const std::vector<double> a0 = alpha;
  const int nx = mesh.cells[0], ny = mesh.cells[1];
  for (int ey = 0; ey < ny; ++ey)
    for (int ex = 0; ex < nx; ++ex) {
      double a = a0[mesh.element(ex, ey)];
      auto visit = [&](int x, int y) {
        if (x < 0 || x >= nx) {
          if (!periodic_x) return;
          x = (x + nx) % nx;
        }
        if (y < 0 || y >= ny) {
          if (!periodic_y) return;
          y = (y + ny) % ny;
        }
        a = std::max(a, 0.5 * a0[mesh.element(x, y)]);
      };
      visit(ex - 1, ey);
      visit(ex + 1, ey);
      if (mesh.dim == 2) {
        visit(ex, ey - 1);
        visit(ex, ey + 1);
      }
      alpha[mesh.element(ex, ey)] = a;
    }
}

namespace {

template <typename Constraint>
State correct_constraint(const State& F, const State& f_low, std::span<const ExtremalCell> cells,
                         Constraint&& c, int* activations) {
  double theta = 1.0;
  for (const auto& cell : cells) {
    const double c_hat = c(cell.update(f_low));
    const double c_old = c(cell.update(F));
    if (c_old < 0.1 * c_hat) {
      const double t = c_hat > 0.0 ? 0.9 * c_hat / (c_hat - c_old) : 0.0;
      theta = std::min(theta, std::isfinite(t) ? t : 0.0);
    }
  }
  if (theta >= 1.0) return F;
  if (activations) ++*activations;
  return f_low + theta * (F - f_low);
}

}  // namespace

State admissibility_flux_correction(const State& F_hat, const State& f_low,
                                    std::span<const ExtremalCell> cells, int* activations) {
  const State F = correct_constraint(F_hat, f_low, cells, [](const State& u) { return u[kDens]; },
                                     activations);
  return correct_constraint(F, f_low, cells, [](const State& u) { return admissibility_q(u); },
                            activations);
}

bool zhang_shu_scale(std::span<State> nodes, const State& mean) {
  if (!is_admissible(mean))
    throw AdmissibilityError("element mean left the admissible set before scaling");
  const auto [eD, eq] = scaling_eps(mean);
  return scale_toward(nodes, mean, eD, eq, false);
}

double compute_dt(std::span<const std::array<double, 2>> element_lambda, const Mesh& mesh,
                  int degree, double safety, const CflTable& cfl) {
  double rate = 0.0;
  for (const auto& lam : element_lambda) {
    double r = lam[0] / mesh.dx[0];
    if (mesh.dim == 2) r += lam[1] / mesh.dx[1];
    rate = std::max(rate, r);
  }
  if (!(rate > 0.0)) throw DomainError("non-positive wave speed in time step computation");
  return safety * cfl(degree) / rate;
}

double compute_dt(const SolutionField& field, const EosModel& eos, const BasisData& b, double safety,
                  const CflTable& cfl) {
  std::vector<std::array<double, 2>> lam(field.mesh.n_elements());
  for (int e = 0; e < field.mesh.n_elements(); ++e) {
    const auto pd = point_data(eos, field.element_mean(b, e));
    lam[e] = {pd.lambda[0], pd.lambda[1]};
  }
  return compute_dt(lam, field.mesh, field.degree, safety, cfl);
}

}  // namespace rhd
