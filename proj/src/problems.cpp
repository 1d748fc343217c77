#include "rhd/problems.hpp"

#include <cmath>
#include <numbers>

namespace rhd {

namespace {

constexpr double kPi = std::numbers::pi;

Prim prim(double rho, double v1, double v2, double p) {
  Prim w;
  w.rho = rho;
  w.v << v1, v2;
  w.p = p;
  return w;
}

BoundarySpec side(BcKind k) {
  BoundarySpec s;
  s.kind = k;
  return s;
}

BoundarySet all(BcKind k) { return {side(k), side(k), side(k), side(k)}; }

BoundarySpec dirichlet(const EosModel& eos, const Prim& w) {
  BoundarySpec s;
  s.kind = BcKind::Dirichlet;
  s.state = prim_to_cons(eos, w);
  return s;
}

ProblemSpec riemann1d(std::string id, Prim left, Prim right, double t_final) {
  ProblemSpec p;
  p.id = std::move(id);
  p.dim = 1;
  p.default_cells = {500, 1};
  p.t_final = t_final;
  p.initial = [left, right](double x, double) { return x < 0.5 ? left : right; };
  p.bcs = all(BcKind::Outflow);
  return p;
}

// Quadrant states ordered (x>.5,y>.5), (x<.5,y>.5), (x<.5,y<.5), (x>.5,y<.5).
ProblemSpec riemann2d(std::string id, std::array<Prim, 4> q) {
  ProblemSpec p;
  p.id = std::move(id);
  p.dim = 2;
  p.default_cells = {400, 400};
  p.t_final = 0.4;
  p.initial = [q](double x, double y) {
    if (y > 0.5) return x > 0.5 ? q[0] : q[1];
    return x < 0.5 ? q[2] : q[3];
  };
  p.bcs = all(BcKind::Outflow);
  return p;
}

}  // namespace

std::vector<std::string> problem_ids() {
  return {"smooth1d", "rp1",     "rp2",     "rp3",     "density_pert", "blast",
          "smooth2d", "rp2d_1",  "rp2d_2",  "rp2d_3",  "rp2d_4",       "rp2d_5",
          "jet",      "bubble_shock_1", "bubble_shock_2", "dmr",       "kh"};
}

double jet_pressure(const EosModel& eos, double rho_b, double v_b, double mach) {
  const double cs = v_b / mach;
  if (eos.kind == EosKind::ID) return rho_b * cs * cs / eos.gamma;
  const double target = cs * cs;
  double lo = 1e-12 * rho_b, hi = rho_b;
  while (sound_speed_sq(eos, hi, rho_b) < target) {
    hi *= 2.0;
    if (hi > 1e12 * rho_b) throw ConfigError("jet Mach number needs a sound speed the EOS cannot reach");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sound_speed_sq(eos, mid, rho_b) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ProblemSpec make_problem(const std::string& id, const EosModel& eos, const ProblemOptions& opt) {
  if (id == "smooth1d") {
    ProblemSpec p;
    p.id = id;
    p.dim = 1;
    p.default_cells = {64, 1};
    p.default_degree = 3;
    p.t_final = 0.2;
    p.initial = [](double x, double) { return prim(1.0 + 0.999 * std::sin(2 * kPi * x), 0.99, 0.0, 0.01); };
    p.exact_density = [](double x, double, double t) { return 1.0 + 0.999 * std::sin(2 * kPi * (x - 0.99 * t)); };
    p.bcs = all(BcKind::Periodic);
    return p;
  }
  if (id == "rp1") return riemann1d(id, prim(10, 0, 0, 13.3), prim(1, 0, 0, 1e-6), 0.45);
  if (id == "rp2") return riemann1d(id, prim(1, 0, 0, 1e3), prim(1, 0, 0, 1e-2), 0.4);
  if (id == "rp3") return riemann1d(id, prim(1, -0.6, 0, 10), prim(10, 0.5, 0, 20), 0.4);
  if (id == "density_pert") {
    ProblemSpec p = riemann1d(id, prim(5, 0, 0, 50), prim(2, 0, 0, 5), 0.4);
    p.initial = [](double x, double) {
      return x < 0.5 ? prim(5, 0, 0, 50) : prim(2.0 + 0.3 * std::sin(50 * x), 0, 0, 5);
    };
    return p;
  }
  if (id == "blast") {
    ProblemSpec p = riemann1d(id, prim(1, 0, 0, 1e3), prim(1, 0, 0, 1e-2), 0.43);
    p.default_cells = {5000, 1};
    p.safety = 0.8;
    p.default_gamma = 1.4;
    p.initial = [](double x, double) {
      if (x < 0.1) return prim(1, 0, 0, 1e3);
      if (x < 0.9) return prim(1, 0, 0, 1e-2);
      return prim(1, 0, 0, 1e2);
    };
    return p;
  }
  if (id == "smooth2d") {
    ProblemSpec p;
    p.id = id;
    p.dim = 2;
    p.default_cells = {64, 64};
    p.default_degree = 3;
    p.t_final = 0.2;
    const double v = 0.99 / std::sqrt(2.0);
    p.initial = [v](double x, double y) { return prim(1.0 + 0.999 * std::sin(2 * kPi * (x + y)), v, v, 0.01); };
    p.exact_density = [v](double x, double y, double t) {
      return 1.0 + 0.999 * std::sin(2 * kPi * (x + y - 2.0 * v * t));
    };
    p.bcs = all(BcKind::Periodic);
    return p;
  }
  if (id == "rp2d_1")
    return riemann2d(id, {prim(0.1, 0, 0, 0.01), prim(0.1, 0.99, 0, 1), prim(0.5, 0, 0, 1),
                          prim(0.1, 0, 0.99, 1)});
  if (id == "rp2d_2")
    return riemann2d(id, {prim(0.1, 0, 0, 20), prim(0.00414329639576, 0.9946418833556542, 0, 0.05),
                          prim(0.01, 0, 0, 0.05), prim(0.00414329639576, 0, 0.9946418833556542, 0.05)});
  if (id == "rp2d_3")
    return riemann2d(id, {prim(0.5, 0.5, -0.5, 5), prim(1, 0.5, 0.5, 5), prim(3, -0.5, 0.5, 5),
                          prim(1.5, -0.5, -0.5, 5)});
  if (id == "rp2d_4")
    return riemann2d(id, {prim(1, 0, 0, 1), prim(0.5771, -0.3529, 0, 0.4), prim(1, -0.3529, -0.3529, 1),
                          prim(0.5771, 0, -0.3529, 0.4)});
  if (id == "rp2d_5")
    return riemann2d(id, {prim(0.035145216124503, 0, 0, 0.162931056509027), prim(0.1, 0.7, 0, 1),
                          prim(0.5, 0, 0, 1), prim(0.1, 0, 0.7, 1)});
  if (id == "jet") {
    ProblemSpec p;
    p.id = id;
    p.dim = 2;
    p.low = {-12.0, 0.0};
    p.high = {12.0, 30.0};
    p.default_cells = {480, 500};
    p.t_final = 30.0;
    const double rho_b = 0.01, v_b = 0.9999;
    const double pres = opt.jet_pressure.value_or(jet_pressure(eos, rho_b, v_b, 1.74));
    if (!(pres > 0.0)) throw ConfigError("jet pressure must be positive");
    p.initial = [pres](double, double) { return prim(1.0, 0, 0, pres); };
    p.bcs = all(BcKind::Outflow);
    p.bcs[2].kind = BcKind::InflowJet;
    p.bcs[2].state = prim_to_cons(eos, prim(rho_b, 0, v_b, pres));
    p.bcs[2].param = 0.5;
    return p;
  }
  if (id == "bubble_shock" || id == "bubble_shock_1" || id == "bubble_shock_2") {
    ProblemSpec p;
    p.id = id;
    p.dim = 2;
    p.low = {0.0, 0.0};
    p.high = {325.0, 90.0};
    p.default_cells = {650, 180};
    p.t_final = 450.0;
    const double rho_bubble = id == "bubble_shock_2" ? 3.1538 : 0.1358;
    const Prim pre = prim(1, 0, 0, 0.05);
    const Prim post = prim(1.941272902134272, -0.200661045980881, 0, 0.15);
    p.initial = [=](double x, double y) {
      if (x > 265.0) return post;
      const double dx = x - 215.0, dy = y - 45.0;
      if (dx * dx + dy * dy < 25.0 * 25.0) return prim(rho_bubble, 0, 0, 0.05);
      return pre;
    };
    p.bcs = {dirichlet(eos, pre), dirichlet(eos, post), side(BcKind::Reflective), side(BcKind::Reflective)};
    return p;
  }
  if (id == "dmr") {
    ProblemSpec p;
    p.id = id;
    p.dim = 2;
    p.low = {0.0, 0.0};
    p.high = {4.0, 1.0};
    p.default_cells = {960, 240};
    p.t_final = 4.0;
    p.default_gamma = 1.4;
    const double s60 = std::sqrt(3.0) / 2.0;
    const Prim post = prim(8.564, 0.4247 * s60, -0.4247 * 0.5, 0.3808);
    const Prim pre = prim(1.4, 0, 0, 0.0025);
    p.initial = [=](double x, double y) { return std::sqrt(3.0) * (x - 1.0 / 6.0) < y ? post : pre; };
    BoundarySpec top;
    top.kind = BcKind::DmrTop;
    top.state = prim_to_cons(eos, post);
    top.state_alt = prim_to_cons(eos, pre);
    top.param = 0.4984;
    BoundarySpec bottom;
    bottom.kind = BcKind::DmrBottom;
    bottom.state = prim_to_cons(eos, post);
    p.bcs = {dirichlet(eos, post), dirichlet(eos, pre), bottom, top};
    return p;
  }
  if (id == "kh") {
    ProblemSpec p;
    p.id = id;
    p.dim = 2;
    p.low = {-1.0, -0.5};
    p.high = {1.0, 0.5};
    p.default_cells = {640, 320};
    p.t_final = 3.0;
    p.alpha_max = 0.25;
    p.initial = [](double x, double y) {
      const double a = 0.01, vs = 0.5, eta = 0.1, sigma = 0.1;
      if (x < 0.0) {
        const double t = std::tanh((x + 0.5) / a);
        return prim(0.505 - 0.495 * t,
                    -eta * vs * std::sin(2 * kPi * y) * std::exp(-(x + 0.5) * (x + 0.5) / sigma),
                    -vs * t, 1.0);
      }
      const double t = std::tanh((x - 0.5) / a);
      return prim(0.505 + 0.495 * t,
                  eta * vs * std::sin(2 * kPi * y) * std::exp(-(x - 0.5) * (x - 0.5) / sigma), vs * t,
                  1.0);
    };
    p.bcs = all(BcKind::Periodic);
    return p;
  }
  throw ConfigError("unknown problem id '" + id + "'");
}

Mesh make_mesh(const ProblemSpec& p, std::array<int, 2> cells) {
  if (p.dim == 1) return Mesh::line(p.low[0], p.high[0], cells[0]);
  return Mesh::rect(p.low[0], p.high[0], cells[0], p.low[1], p.high[1], cells[1]);
}

SolutionField init_field(const ProblemSpec& p, const Mesh& mesh, const BasisData& b,
                         const EosModel& eos) {
  if (mesh.dim != p.dim) throw ConfigError("mesh dimension does not match problem " + p.id);
  SolutionField f(mesh, b.degree);
  for (int ey = 0; ey < mesh.cells[1]; ++ey)
    for (int ex = 0; ex < mesh.cells[0]; ++ex)
      for (int j = 0; j < f.n_y_nodes(); ++j)
        for (int i = 0; i < f.n1(); ++i) {
          const auto x = f.node_position(b, ex, ey, i, j);
          f.u[f.index(mesh.element(ex, ey), i, j)] = prim_to_cons(eos, p.initial(x[0], x[1]));
        }
  return f;
}

}  // namespace rhd
