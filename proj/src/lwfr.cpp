#include "rhd/lwfr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rhd/mesh.hpp"

namespace rhd {

AlwStage alw_stage(int degree, int r) {
  if (degree < 1 || degree > kMaxDegree) throw UnsupportedDegree("ALW stencils exist for degrees 1..4");
  if (r < 1 || r > degree) throw DomainError("ALW stage out of range");
  AlwStage s;
  // Offsets ordered {+1, -1, +2, -2}.
  const std::array<double, 4> first_2pt{0.5, -0.5, 0.0, 0.0};
  const std::array<double, 4> first_4pt{8.0 / 12.0, -8.0 / 12.0, -1.0 / 12.0, 1.0 / 12.0};
  const std::array<double, 4> second_3pt{1.0, 1.0, 0.0, 0.0};
  const std::array<double, 4> second_5pt{16.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0, -1.0 / 12.0};
  const std::array<double, 4> third{-1.0, 1.0, 0.5, -0.5};
  const std::array<double, 4> fourth{-4.0, -4.0, 1.0, 1.0};
  switch (degree) {
    case 1:
    case 2:
      s.coef = r == 1 ? first_2pt : second_3pt;
      break;
    case 3:
      s.coef = r == 1 ? first_4pt : (r == 2 ? second_3pt : third);
      break;
    case 4:
      s.coef = r == 1 ? first_4pt : (r == 2 ? second_5pt : (r == 3 ? third : fourth));
      break;
  }
  return s;
}

std::pair<double, double> scaling_eps(const State& mean) {
  return {std::min(mean[kDens] / 10.0, 1e-13), std::min(admissibility_q(mean) / 10.0, 1e-13)};
}

namespace {

// One constraint pass: returns true if scaling was applied.
template <typename Constraint>
bool scale_constraint(std::span<State> s, const State& center, double eps, bool strict,
                      Constraint&& c) {
  double cmin = c(s[0]);
  for (size_t i = 1; i < s.size(); ++i) cmin = std::min(cmin, c(s[i]));
  const bool trigger = strict ? !(cmin > 0.0) : !(cmin >= eps);
  if (!trigger) return false;
  const double cbar = c(center);
  double theta = std::abs(eps - cbar) / std::abs(cmin - cbar);
  if (!std::isfinite(theta)) theta = 0.0;
  theta = std::min(1.0, theta);

  std::array<State, kMaxNodes> orig;
  std::copy(s.begin(), s.end(), orig.begin());
  // Accepted states must clear the trigger; roundoff misses are fixed by small then halving cuts.
  const double floor = strict ? 0.0 : eps;
  for (int attempt = 0; attempt < 64; ++attempt) {
    bool ok = true;
    for (size_t i = 0; i < s.size(); ++i) {
      s[i] = center + theta * (orig[i] - center);
      const double ci = c(s[i]);
      if (!(ci > 0.0 && ci >= floor)) ok = false;
    }
    if (ok) return true;
    if (attempt < 4)
      theta *= 1.0 - std::ldexp(1e-6, 4 * attempt);
    else
      theta = attempt < 62 ? 0.5 * theta : 0.0;
  }
  for (size_t i = 0; i < s.size(); ++i) s[i] = center;
  return true;
}

}  // namespace

bool scale_toward(std::span<State> states, const State& center, double eps_D, double eps_q,
                  bool strict) {
  if (states.empty()) return false;
  const bool a = scale_constraint(states, center, eps_D, strict, [](const State& u) { return u[kDens]; });
  const bool b = scale_constraint(states, center, eps_q, strict,
                                  [](const State& u) { return admissibility_q(u); });
  return a || b;
}

LwfrKernel::LwfrKernel(const EosModel& eos, const BasisData& basis, int dim, bool scaling,
                       const RecoveryOptions& recovery)
    : eos_(eos), basis_(&basis), dim_(dim), scaling_(scaling), recovery_(recovery) {
  n1_ = basis.n_nodes();
  ny_ = dim == 2 ? n1_ : 1;
  nn_ = n1_ * ny_;
}

Primitive<double> LwfrKernel::recover(const State& u, int node, int stage, double guess) const {
  RecoveryOptions opt = recovery_;
  opt.guess = guess;
  try {
    return cons_to_prim(eos_, u, opt).prim;
  } catch (const AdmissibilityError&) {
    throw AdmissibilityError("inadmissible flux argument at node " + std::to_string(node) +
                             ", stage " + std::to_string(stage));
  }
}

namespace {

constexpr std::array<double, 6> kFactorial{1.0, 1.0, 2.0, 6.0, 24.0, 120.0};

inline double offset_power(int a, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v *= a;
  return v;
}

// u^[r](a) = sum_{k<=r} a^k / k! u^(k).
inline State perturbed(const std::array<std::array<State, kMaxNodes>, kMaxDegree + 1>& ud, int node,
                       int a, int r) {
  State s = ud[0][node];
  for (int k = 1; k <= r; ++k) s += (offset_power(a, k) / kFactorial[k]) * ud[k][node];
  return s;
}

}  // namespace

void LwfrKernel::run(const KernelInput& in, KernelOutput& out) {
  const BasisData& b = *basis_;
  const int N = b.degree;
  const int n_off = alw_offset_count(N);
  const bool two_d = dim_ == 2;

  for (int k = 0; k < nn_; ++k) {
    ud_[0][k] = in.u[k];
    fprev_[k] = in.f[k];
    out.F[k] = in.f[k];
    if (two_d) {
      gprev_[k] = in.g[k];
      out.G[k] = in.g[k];
    }
  }
  std::array<State, 4> ref;
  ref.fill(in.mean);

  for (int r = 1; r <= N; ++r) {
    // u^(r) from the derivative of f^(r-1), in difference form.
    for (int j = 0; j < ny_; ++j)
      for (int i = 0; i < n1_; ++i) {
        const int k = i + n1_ * j;
        State dxf = State::Zero();
        for (int m = 0; m < n1_; ++m)
          if (m != i) dxf += b.diff(i, m) * (fprev_[m + n1_ * j] - fprev_[k]);
        State du = -in.cx * dxf;
        if (two_d) {
          State dyg = State::Zero();
          for (int m = 0; m < n1_; ++m)
            if (m != j) dyg += b.diff(j, m) * (gprev_[i + n1_ * m] - gprev_[k]);
          du -= in.cy * dyg;
        }
        ud_[r][k] = du;
      }

    const AlwStage st = alw_stage(N, r);
    for (int k = 0; k < nn_; ++k) {
      fcur_[k].setZero();
      if (two_d) gcur_[k].setZero();
    }
    for (int o = 0; o < n_off; ++o) {
      const int a = kAlwOffsets[o];
      auto& args = args_[o];
      for (int k = 0; k < nn_; ++k) args[k] = perturbed(ud_, k, a, r);
      stage_ref_[r][o] = ref[o];
      if (scaling_) {
        const auto [eD, eq] = scaling_eps(ref[o]);
        if (scale_flux_arguments(std::span<State>(args.data(), nn_), ref[o], eD, eq))
          ++out.scaling_activations;
      }
      ref[o] = weighted_mean(b, dim_, args.data());
      const double c = st.coef[o];
      if (c == 0.0) continue;
      for (int k = 0; k < nn_; ++k) {
        const Primitive<double> w = recover(args[k], k, r, in.pd ? in.pd[k].prim.p : 0.0);
        fcur_[k] += c * (physical_flux(args[k], w, Axis::X) - in.f[k]);
        if (two_d) gcur_[k] += c * (physical_flux(args[k], w, Axis::Y) - in.g[k]);
      }
    }
    const double inv = 1.0 / kFactorial[r + 1];
    for (int k = 0; k < nn_; ++k) {
      out.F[k] += inv * fcur_[k];
      fprev_[k] = fcur_[k];
      if (two_d) {
        out.G[k] += inv * gcur_[k];
        gprev_[k] = gcur_[k];
      }
    }
  }

  for (int side = 0; side < 2; ++side) {
    face_traces(in, 0, side, out.xU[side], out.xF[side], out.scaling_activations);
    if (two_d) face_traces(in, 1, side, out.yU[side], out.yF[side], out.scaling_activations);
  }
}

void LwfrKernel::face_traces(const KernelInput& in, int axis, int side, State* U, State* F,
                             long& activations) {
  const BasisData& b = *basis_;
  const int N = b.degree;
  const int n_off = alw_offset_count(N);
  const int n_face = axis == 0 ? ny_ : n1_;
  const Eigen::VectorXd& ell = side == 0 ? b.extrap_left : b.extrap_right;
  const Axis dir = axis == 0 ? Axis::X : Axis::Y;

  // Extrapolated u^(k) at the face nodes.
  std::array<std::array<State, kMaxNodes1D>, kMaxDegree + 1> uf;
  for (int k = 0; k <= N; ++k)
    for (int m = 0; m < n_face; ++m) {
      auto at = [&](int l) -> const State& {
        return axis == 0 ? ud_[k][l + n1_ * m] : ud_[k][m + n1_ * l];
      };
      State v = at(0);
      for (int l = 1; l < n1_; ++l) v += ell[l] * (at(l) - at(0));
      uf[k][m] = v;
    }

  if (scaling_) {
    const auto [eD, eq] = scaling_eps(in.mean);
    if (scale_flux_arguments(std::span<State>(uf[0].data(), n_face), in.mean, eD, eq)) ++activations;
  }

  std::array<State, kMaxNodes1D> f0;
  std::array<double, kMaxNodes1D> p0;
  for (int m = 0; m < n_face; ++m) {
    const Primitive<double> w0 = recover(uf[0][m], m, 0);
    p0[m] = w0.p;
    f0[m] = physical_flux(uf[0][m], w0, dir);
    F[m] = f0[m];
    State u_avg = uf[0][m];
    for (int k = 1; k <= N; ++k) u_avg += (1.0 / kFactorial[k + 1]) * uf[k][m];
    U[m] = u_avg;
  }

  std::array<State, kMaxNodes1D> args, fr;
  for (int r = 1; r <= N; ++r) {
    const AlwStage st = alw_stage(N, r);
    const double inv = 1.0 / kFactorial[r + 1];
    for (int m = 0; m < n_face; ++m) fr[m].setZero();
    for (int o = 0; o < n_off; ++o) {
      const double c = st.coef[o];
      if (c == 0.0) continue;
      const int a = kAlwOffsets[o];
      for (int m = 0; m < n_face; ++m) {
        State s = uf[0][m];
        for (int k = 1; k <= r; ++k) s += (offset_power(a, k) / kFactorial[k]) * uf[k][m];
        args[m] = s;
      }
      if (scaling_) {
        const State& ref = stage_ref_[r][o];
        const auto [eD, eq] = scaling_eps(ref);
        if (scale_flux_arguments(std::span<State>(args.data(), n_face), ref, eD, eq)) ++activations;
      }
      for (int m = 0; m < n_face; ++m)
        fr[m] += c * (physical_flux(args[m], recover(args[m], m, r, p0[m]), dir) - f0[m]);
    }
    for (int m = 0; m < n_face; ++m) F[m] += inv * fr[m];
  }
}

}  // namespace rhd
