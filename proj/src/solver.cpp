#include "rhd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rhd {

void StepStats::accumulate(const StepStats& s) {
  scaling_activations += s.scaling_activations;
  flux_corrections += s.flux_corrections;
  zhang_shu_activations += s.zhang_shu_activations;
  blended_elements = std::max(blended_elements, s.blended_elements);
  max_alpha = std::max(max_alpha, s.max_alpha);
  mean_mismatch = std::max(mean_mismatch, s.mean_mismatch);
}

double dmr_shock_position(double t, double shock_speed) {
  return 1.0 / 6.0 + (1.0 + 2.0 * shock_speed * t) / std::sqrt(3.0);
}

int configure_threads() {
#ifdef _OPENMP
  static std::once_flag once;
  std::call_once(once, [] {
    if (const char* env = std::getenv("RHD_THREADS")) {
      const int cap = std::atoi(env);
      if (cap > 0) omp_set_num_threads(std::min(cap, omp_get_max_threads()));
    }
  });
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

int thread_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

// Runs body(i) for i in [0, n); the first exception thrown by any worker is rethrown.
template <typename Body>
void parallel_for(int n, Body&& body) {
  std::exception_ptr error;
  std::mutex mtx;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mtx);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

// Negates every component except the momentum normal to the face.
State mirror_flux(const State& f, int axis) {
  State g = -f;
  g[kMom1 + axis] = f[kMom1 + axis];
  return g;
}

State mirror_state(const State& u, int axis) {
  State g = u;
  g[kMom1 + axis] = -u[kMom1 + axis];
  return g;
}

// Everything one side of a face contributes to the face flux.
struct SideData {
  State U, F;          // time averaged trace and normal flux trace
  State u_ext, f_ext;  // extremal solution point and its normal physical flux
  double lam_mean = 0.0, lam_ext = 0.0, alpha = 0.0;
};

}  // namespace

Solver::Solver(const SolutionField& initial, const EosModel& eos, const SchemeParams& params,
               const BoundarySet& bcs)
    : field_(initial), eos_(eos), params_(params), bcs_(bcs),
      basis_(build_basis(params.degree, params.correction)) {
  if (initial.degree != params.degree) throw ConfigError("field degree differs from scheme degree");
  configure_threads();
  periodic_[0] = bcs[0].kind == BcKind::Periodic;
  periodic_[1] = bcs[2].kind == BcKind::Periodic;
  if (periodic_[0] != (bcs[1].kind == BcKind::Periodic) ||
      periodic_[1] != (bcs[3].kind == BcKind::Periodic))
    throw ConfigError("periodic boundaries must be paired");

  const Mesh& m = field_.mesh;
  nx_ = m.cells[0];
  ny_ = m.cells[1];
  n1_ = field_.n1();
  nyl_ = field_.n_y_nodes();
  nn_ = field_.nodes_per_element();
  ne_ = m.n_elements();
  const size_t nodes = static_cast<size_t>(ne_) * nn_;
  pd_.resize(nodes);
  fx_.resize(nodes);
  Fx_.resize(nodes);
  subx_.resize(static_cast<size_t>(ne_) * (n1_ - 1) * nyl_);
  mean_.resize(ne_);
  lam_mean_.resize(ne_);
  alpha_.assign(ne_, 0.0);
  xU_.resize(static_cast<size_t>(ne_) * 2 * nyl_);
  xF_.resize(xU_.size());
  face_x_.resize(static_cast<size_t>(nx_ + 1) * ny_ * nyl_);
  if (m.dim == 2) {
    fy_.resize(nodes);
    Fy_.resize(nodes);
    suby_.resize(static_cast<size_t>(ne_) * (n1_ - 1) * n1_);
    yU_.resize(static_cast<size_t>(ne_) * 2 * n1_);
    yF_.resize(yU_.size());
    face_y_.resize(static_cast<size_t>(nx_) * (ny_ + 1) * n1_);
  }
  int workers = 1;
#ifdef _OPENMP
  workers = omp_get_max_threads();
#endif
  for (int w = 0; w < workers; ++w)
    kernels_.push_back(std::make_unique<LwfrKernel>(eos_, basis_, m.dim, params_.flux_arg_scaling,
                                                    params_.recovery));
}

Solver::~Solver() = default;

double Solver::stable_dt() const {
  std::vector<std::array<double, 2>> lam(ne_);
  for (int e = 0; e < ne_; ++e) {
    const auto pd = point_data(eos_, field_.element_mean(basis_, e), params_.recovery);
    lam[e] = {pd.lambda[0], pd.lambda[1]};
  }
  return compute_dt(lam, field_.mesh, params_.degree, params_.safety, params_.cfl);
}

std::vector<double> Solver::compute_alpha() const {
  std::vector<double> alpha(ne_, 0.0);
  if (!params_.blending) return alpha;
  parallel_for(ne_, [&](int e) {
    std::array<double, kMaxNodes> K;
    for (int k = 0; k < nn_; ++k) {
      const auto w = cons_to_prim(eos_, field_.u[e * nn_ + k], params_.recovery).prim;
      K[k] = w.rho * w.p / std::sqrt(1.0 - w.v.squaredNorm());
    }
    alpha[e] = smoothness_alpha(std::span<const double>(K.data(), nn_), basis_, field_.mesh.dim,
                                params_.indicator);
  });
  if (params_.indicator.smooth) smooth_alpha(alpha, field_.mesh, periodic_[0], periodic_[1]);
  return alpha;
}

void Solver::phase_nodal() {
  const bool two_d = field_.mesh.dim == 2;
  parallel_for(ne_, [&](int e) {
    const State* u = &field_.u[e * nn_];
    std::array<double, kMaxNodes> K;
    for (int k = 0; k < nn_; ++k) {
      const size_t idx = static_cast<size_t>(e) * nn_ + k;
      if (!is_admissible(u[k]))
        throw AdmissibilityError("inadmissible nodal state in element " + std::to_string(e));
      pd_[idx] = point_data(eos_, u[k], params_.recovery);
      const auto& w = pd_[idx].prim;
      fx_[idx] = physical_flux(u[k], w, Axis::X);
      if (two_d) fy_[idx] = physical_flux(u[k], w, Axis::Y);
      K[k] = w.rho * w.p / std::sqrt(1.0 - w.v.squaredNorm());
    }
    mean_[e] = weighted_mean(basis_, field_.mesh.dim, u);
    if (!is_admissible(mean_[e]))
      throw AdmissibilityError("inadmissible element mean in element " + std::to_string(e));
    const auto pm = point_data(eos_, mean_[e], params_.recovery);
    lam_mean_[e] = {pm.lambda[0], pm.lambda[1]};
    alpha_[e] = params_.blending ? smoothness_alpha(std::span<const double>(K.data(), nn_), basis_,
                                                    field_.mesh.dim, params_.indicator)
                                 : 0.0;

    const size_t base = static_cast<size_t>(e) * nn_;
    for (int j = 0; j < nyl_; ++j)
      for (int i = 0; i + 1 < n1_; ++i) {
        const size_t a = base + i + n1_ * j, b = a + 1;
        subx_[(static_cast<size_t>(e) * nyl_ + j) * (n1_ - 1) + i] = rusanov_from_parts(
            u[i + n1_ * j], fx_[a], pd_[a].lambda[0], u[i + 1 + n1_ * j], fx_[b], pd_[b].lambda[0]);
      }
    if (two_d)
      for (int i = 0; i < n1_; ++i)
        for (int j = 0; j + 1 < n1_; ++j) {
          const size_t a = base + i + n1_ * j, b = a + n1_;
          suby_[(static_cast<size_t>(e) * n1_ + i) * (n1_ - 1) + j] = rusanov_from_parts(
              u[i + n1_ * j], fy_[a], pd_[a].lambda[1], u[i + n1_ * (j + 1)], fy_[b], pd_[b].lambda[1]);
        }
  });
  if (params_.blending && params_.indicator.smooth)
    smooth_alpha(alpha_, field_.mesh, periodic_[0], periodic_[1]);
}

void Solver::phase_local(double dt, StepStats& stats) {
  const bool two_d = field_.mesh.dim == 2;
  std::vector<long> act(ne_, 0);
  parallel_for(ne_, [&](int e) {
    const size_t base = static_cast<size_t>(e) * nn_;
    KernelInput in;
    in.u = &field_.u[base];
    in.f = &fx_[base];
    in.pd = &pd_[base];
    in.g = two_d ? &fy_[base] : nullptr;
    in.mean = mean_[e];
    in.cx = dt / field_.mesh.dx[0];
    in.cy = two_d ? dt / field_.mesh.dx[1] : 0.0;
    KernelOutput out;
    out.F = &Fx_[base];
    out.G = two_d ? &Fy_[base] : nullptr;
    for (int s = 0; s < 2; ++s) {
      out.xU[s] = &xU_[(static_cast<size_t>(e) * 2 + s) * nyl_];
      out.xF[s] = &xF_[(static_cast<size_t>(e) * 2 + s) * nyl_];
      if (two_d) {
        out.yU[s] = &yU_[(static_cast<size_t>(e) * 2 + s) * n1_];
        out.yF[s] = &yF_[(static_cast<size_t>(e) * 2 + s) * n1_];
      }
    }
    kernels_[thread_id()]->run(in, out);
    act[e] = out.scaling_activations;
  });
  for (long a : act) stats.scaling_activations += a;
}

void Solver::phase_faces(double dt, double t_mid, StepStats& stats) {
  const Mesh& mesh = field_.mesh;
  const bool two_d = mesh.dim == 2;
  const BasisData& b = basis_;
  const int N = b.degree;

  // Directional share of the low-order update for the 2-D flux correction.
  auto share = [&](int e, int axis) {
    if (!two_d) return 1.0;
    const double rx = lam_mean_[e][0] / mesh.dx[0], ry = lam_mean_[e][1] / mesh.dx[1];
    return (axis == 0 ? rx : ry) / (rx + ry);
  };

  // Interior side data for element e on face side `side` (0: low, 1: high) of `axis`, node m.
  auto interior = [&](int e, int axis, int side, int m) {
    SideData s;
    const int n_face = axis == 0 ? nyl_ : n1_;
    const size_t t = (static_cast<size_t>(e) * 2 + side) * n_face + m;
    s.U = axis == 0 ? xU_[t] : yU_[t];
    s.F = axis == 0 ? xF_[t] : yF_[t];
    const int l = side == 0 ? 0 : N;
    const size_t node = static_cast<size_t>(e) * nn_ + (axis == 0 ? l + n1_ * m : m + n1_ * l);
    s.u_ext = field_.u[node];
    s.f_ext = axis == 0 ? fx_[node] : fy_[node];
    s.lam_ext = pd_[node].lambda[axis];
    s.lam_mean = lam_mean_[e][axis];
    s.alpha = alpha_[e];
    return s;
  };

  auto dirichlet = [&](const State& ub, int axis, double alpha) {
    SideData g;
    const auto pd = point_data(eos_, ub, params_.recovery);
    g.U = ub;
    g.u_ext = ub;
    g.F = physical_flux(ub, pd.prim, axis == 0 ? Axis::X : Axis::Y);
    g.f_ext = g.F;
    g.lam_mean = g.lam_ext = pd.lambda[axis];
    g.alpha = alpha;
    return g;
  };

  auto ghost = [&](const SideData& in, int bc_side, int axis, double x, double y) -> SideData {
    const BoundarySpec& bc = bcs_[bc_side];
    auto reflect = [&] {
      SideData g = in;
      g.U = mirror_state(in.U, axis);
      g.F = mirror_flux(in.F, axis);
      g.u_ext = mirror_state(in.u_ext, axis);
      g.f_ext = mirror_flux(in.f_ext, axis);
      return g;
    };
    switch (bc.kind) {
      case BcKind::Outflow:
        return in;
      case BcKind::Reflective:
        return reflect();
      case BcKind::Dirichlet:
        return dirichlet(bc.state, axis, in.alpha);
      case BcKind::InflowJet:
        return std::abs(x) < bc.param ? dirichlet(bc.state, axis, in.alpha) : in;
      case BcKind::DmrTop: {
        return dirichlet(x < dmr_shock_position(t_mid, bc.param) ? bc.state : bc.state_alt, axis, in.alpha);
      }
      case BcKind::DmrBottom:
        return x <= 1.0 / 6.0 ? dirichlet(bc.state, axis, in.alpha) : reflect();
      case BcKind::Periodic:
        break;
    }
    (void)y;
    throw ConfigError("periodic side reached ghost evaluation");
  };

  std::vector<int> corrections;

  // Flux at one face node from its two sides; cells[] are the extremal sub-cells present.
  auto face_flux = [&](const SideData& L, const SideData& R, ExtremalCell* cells, int n_cells,
                       int& n_corr) {
    const double lam = std::max(L.lam_mean, R.lam_mean);
    const State f_high = 0.5 * (L.F + R.F) - 0.5 * lam * (R.U - L.U);
    if (!params_.blending) return f_high;
    const State f_low =
        rusanov_from_parts(L.u_ext, L.f_ext, L.lam_ext, R.u_ext, R.f_ext, R.lam_ext);
    const double a_face = 0.5 * (L.alpha + R.alpha);
    const State f_hat = blend_face_flux_initial(f_high, f_low, a_face);
    if (!params_.flux_correction) return f_hat;
    return admissibility_flux_correction(f_hat, f_low, std::span<const ExtremalCell>(cells, n_cells),
                                         &n_corr);
  };

  // x faces.
  const int n_xfaces = (nx_ + 1) * ny_;
  corrections.assign(n_xfaces, 0);
  parallel_for(n_xfaces, [&](int f) {
    const int fx = f % (nx_ + 1), ey = f / (nx_ + 1);
    if (periodic_[0] && fx == nx_) return;  // filled from face 0 below
    int eL = fx - 1, eR = fx;
    if (periodic_[0] && fx == 0) eL = nx_ - 1;
    const bool hasL = eL >= 0, hasR = eR < nx_;
    const int eLi = hasL ? mesh.element(eL, ey) : -1;
    const int eRi = hasR ? mesh.element(eR, ey) : -1;
    const double xf = mesh.low[0] + fx * mesh.dx[0];
    for (int j = 0; j < nyl_; ++j) {
      const double yf = two_d ? mesh.low[1] + (ey + b.nodes[j]) * mesh.dx[1] : 0.0;
      SideData L, R;
      if (hasL) L = interior(eLi, 0, 1, j);
      if (hasR) R = interior(eRi, 0, 0, j);
      if (!hasL) L = ghost(R, 0, 0, xf, yf);
      if (!hasR) R = ghost(L, 1, 0, xf, yf);
      ExtremalCell cells[2];
      int nc = 0;
      if (hasL) {
        const size_t sub = (static_cast<size_t>(eLi) * nyl_ + j) * (n1_ - 1) + (N - 1);
        cells[nc++] = {L.u_ext, subx_[sub], dt / share(eLi, 0) / (b.weights[N] * mesh.dx[0]), 1.0};
      }
      if (hasR) {
        const size_t sub = (static_cast<size_t>(eRi) * nyl_ + j) * (n1_ - 1);
        cells[nc++] = {R.u_ext, subx_[sub], dt / share(eRi, 0) / (b.weights[0] * mesh.dx[0]), -1.0};
      }
      face_x_[static_cast<size_t>(f) * nyl_ + j] = face_flux(L, R, cells, nc, corrections[f]);
    }
  });
  if (periodic_[0])
    for (int ey = 0; ey < ny_; ++ey)
      for (int j = 0; j < nyl_; ++j)
        face_x_[(static_cast<size_t>(ey) * (nx_ + 1) + nx_) * nyl_ + j] =
            face_x_[(static_cast<size_t>(ey) * (nx_ + 1)) * nyl_ + j];
  for (int c : corrections) stats.flux_corrections += c;

  if (!two_d) return;
  const int n_yfaces = nx_ * (ny_ + 1);
  corrections.assign(n_yfaces, 0);
  parallel_for(n_yfaces, [&](int f) {
    const int ex = f % nx_, fy = f / nx_;
    if (periodic_[1] && fy == ny_) return;
    int eB = fy - 1, eT = fy;
    if (periodic_[1] && fy == 0) eB = ny_ - 1;
    const bool hasB = eB >= 0, hasT = eT < ny_;
    const int eBi = hasB ? mesh.element(ex, eB) : -1;
    const int eTi = hasT ? mesh.element(ex, eT) : -1;
    const double yf = mesh.low[1] + fy * mesh.dx[1];
    for (int i = 0; i < n1_; ++i) {
      const double xf = mesh.low[0] + (ex + b.nodes[i]) * mesh.dx[0];
      SideData L, R;
      if (hasB) L = interior(eBi, 1, 1, i);
      if (hasT) R = interior(eTi, 1, 0, i);
      if (!hasB) L = ghost(R, 2, 1, xf, yf);
      if (!hasT) R = ghost(L, 3, 1, xf, yf);
      ExtremalCell cells[2];
      int nc = 0;
      if (hasB) {
        const size_t sub = (static_cast<size_t>(eBi) * n1_ + i) * (n1_ - 1) + (N - 1);
        cells[nc++] = {L.u_ext, suby_[sub], dt / share(eBi, 1) / (b.weights[N] * mesh.dx[1]), 1.0};
      }
      if (hasT) {
        const size_t sub = (static_cast<size_t>(eTi) * n1_ + i) * (n1_ - 1);
        cells[nc++] = {R.u_ext, suby_[sub], dt / share(eTi, 1) / (b.weights[0] * mesh.dx[1]), -1.0};
      }
      face_y_[static_cast<size_t>(f) * n1_ + i] = face_flux(L, R, cells, nc, corrections[f]);
    }
  });
  if (periodic_[1])
    for (int ex = 0; ex < nx_; ++ex)
      for (int i = 0; i < n1_; ++i)
        face_y_[(static_cast<size_t>(ny_) * nx_ + ex) * n1_ + i] = face_y_[static_cast<size_t>(ex) * n1_ + i];
  for (int c : corrections) stats.flux_corrections += c;
}

void Solver::phase_update(double dt, StepStats& stats) {
  const Mesh& mesh = field_.mesh;
  const bool two_d = mesh.dim == 2;
  const BasisData& b = basis_;
  const int N = b.degree;
  const double cx = dt / mesh.dx[0];
  const double cy = two_d ? dt / mesh.dx[1] : 0.0;
  std::vector<double> mismatch(ne_, 0.0);
  std::vector<char> zs(ne_, 0);

  parallel_for(ne_, [&](int e) {
    const int ex = e % nx_, ey = e / nx_;
    const size_t base = static_cast<size_t>(e) * nn_;
    const State* u = &field_.u[base];
    std::array<State, kMaxNodes> uh, ul;
    for (int k = 0; k < nn_; ++k) {
      uh[k] = u[k];
      ul[k] = u[k];
    }

    // x direction.
    for (int j = 0; j < nyl_; ++j) {
      const State* F = &Fx_[base + n1_ * j];
      const State& fl = face_x_[(static_cast<size_t>(ey) * (nx_ + 1) + ex) * nyl_ + j];
      const State& fr = face_x_[(static_cast<size_t>(ey) * (nx_ + 1) + ex + 1) * nyl_ + j];
      State d0 = F[0], d1 = F[0];
      for (int l = 1; l < n1_; ++l) {
        d0 += b.extrap_left[l] * (F[l] - F[0]);
        d1 += b.extrap_right[l] * (F[l] - F[0]);
      }
      const State jl = fl - d0, jr = fr - d1;
      const State* sub = &subx_[(static_cast<size_t>(e) * nyl_ + j) * (n1_ - 1)];
      for (int i = 0; i < n1_; ++i) {
        State dF = State::Zero();
        for (int m = 0; m < n1_; ++m)
          if (m != i) dF += b.diff(i, m) * (F[m] - F[i]);
        dF += b.corr_deriv_left[i] * jl + b.corr_deriv_right[i] * jr;
        uh[i + n1_ * j] -= cx * dF;
        const State& left = i == 0 ? fl : sub[i - 1];
        const State& right = i == N ? fr : sub[i];
        ul[i + n1_ * j] -= (cx / b.weights[i]) * (right - left);
      }
    }
    // y direction.
    if (two_d)
      for (int i = 0; i < n1_; ++i) {
        std::array<State, kMaxNodes1D> G;
        for (int j = 0; j < n1_; ++j) G[j] = Fy_[base + i + n1_ * j];
        const State& fb = face_y_[(static_cast<size_t>(ey) * nx_ + ex) * n1_ + i];
        const State& ft = face_y_[(static_cast<size_t>(ey + 1) * nx_ + ex) * n1_ + i];
        State d0 = G[0], d1 = G[0];
        for (int l = 1; l < n1_; ++l) {
          d0 += b.extrap_left[l] * (G[l] - G[0]);
          d1 += b.extrap_right[l] * (G[l] - G[0]);
        }
        const State jb = fb - d0, jt = ft - d1;
        const State* sub = &suby_[(static_cast<size_t>(e) * n1_ + i) * (n1_ - 1)];
        for (int j = 0; j < n1_; ++j) {
          State dG = State::Zero();
          for (int m = 0; m < n1_; ++m)
            if (m != j) dG += b.diff(j, m) * (G[m] - G[j]);
          dG += b.corr_deriv_left[j] * jb + b.corr_deriv_right[j] * jt;
          uh[i + n1_ * j] -= cy * dG;
          const State& bottom = j == 0 ? fb : sub[j - 1];
          const State& top = j == N ? ft : sub[j];
          ul[i + n1_ * j] -= (cy / b.weights[j]) * (top - bottom);
        }
      }

    const State mh = weighted_mean(b, mesh.dim, uh.data());
    const State ml = weighted_mean(b, mesh.dim, ul.data());
    mismatch[e] = (mh - ml).cwiseAbs().maxCoeff() / std::max(1.0, mh.cwiseAbs().maxCoeff());

    const double a = alpha_[e];
    State* out = &field_.u[base];
    for (int k = 0; k < nn_; ++k) out[k] = a > 0.0 ? blend_solutions(uh[k], ul[k], a) : uh[k];
    if (params_.zhang_shu) {
      const State m = weighted_mean(b, mesh.dim, out);
      if (!is_admissible(m))
        throw AdmissibilityError("element " + std::to_string(e) + " mean left the admissible set");
      if (zhang_shu_scale(std::span<State>(out, nn_), m)) zs[e] = 1;
    }
    for (int k = 0; k < nn_; ++k)
      if (!is_admissible(out[k]))
        throw AdmissibilityError("inadmissible state produced at element " + std::to_string(e) +
                                 ", node " + std::to_string(k));
  });

  for (int e = 0; e < ne_; ++e) {
    stats.mean_mismatch = std::max(stats.mean_mismatch, mismatch[e]);
    stats.zhang_shu_activations += zs[e];
    stats.max_alpha = std::max(stats.max_alpha, alpha_[e]);
    if (alpha_[e] > 0.0) ++stats.blended_elements;
  }
}

StepStats Solver::step(double dt, double t) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive and finite");
  StepStats stats;
  phase_nodal();
  phase_local(dt, stats);
  phase_faces(dt, t + 0.5 * dt, stats);
  phase_update(dt, stats);
  return stats;
}

}  // namespace rhd
