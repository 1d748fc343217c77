#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "rhd/eos.hpp"
#include "support.hpp"

using namespace rhd;
using rhd::testing::Gen;
using rhd::testing::kAllEos;
using rhd::testing::rel_err;

namespace {

State cons(double D, double m1, double E) {
  State u;
  u << D, m1, 0.0, E;
  return u;
}

Prim prim1(double rho, double v, double p) {
  Prim w;
  w.rho = rho;
  w.v << v, 0.0;
  w.p = p;
  return w;
}

const EosModel kId = EosModel::ideal(5.0 / 3.0);

}  // namespace

TEST_SUITE("eos") {
  TEST_CASE("enthalpy closed forms") {
    CHECK(enthalpy(kId, 1.0, 1.0) == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(enthalpy(EosModel::taub_mathews(), 0.0, 1.0) == 1.0);
    CHECK(enthalpy(EosModel::rc(), 1.0, 1.0) == doctest::Approx(4.4).epsilon(1e-15));
    CHECK(enthalpy(EosModel::taub_mathews(), 10.0, 0.1) == doctest::Approx(400.00333329629711932).epsilon(1e-14));
    CHECK(enthalpy(EosModel::ip(), 1.0, 1.0) == doctest::Approx(4.2360679774997896964).epsilon(1e-15));
    for (const auto& e : kAllEos) CHECK(enthalpy(e, 0.0, 3.0) == 1.0);
  }

  TEST_CASE("enthalpy rejects bad thermodynamic input") {
    CHECK_THROWS_AS(enthalpy(kId, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(enthalpy(kId, 1.0, -1.0), DomainError);
    CHECK_THROWS_AS(enthalpy(kId, std::nan(""), 1.0), DomainError);
    CHECK_THROWS_AS(enthalpy(kId, std::numeric_limits<double>::infinity(), 1.0), DomainError);
  }

  TEST_CASE("ideal gas gamma range") {
    CHECK_NOTHROW(EosModel::ideal(2.0));
    CHECK_THROWS_AS(EosModel::ideal(1.0), DomainError);
    CHECK_THROWS_AS(EosModel::ideal(2.5), DomainError);
  }

  TEST_CASE("sound speed values") {
    CHECK(sound_speed_sq(kId, 1.0, 1.0) == doctest::Approx(10.0 / 21.0).epsilon(1e-15));
    CHECK(sound_speed_sq(EosModel::rc(), 1.0, 1.0) == doctest::Approx(235.0 / 759.0).epsilon(1e-15));
    CHECK(sound_speed_sq(EosModel::taub_mathews(), 1.0, 1.0) ==
          doctest::Approx(0.31697935095067677872).epsilon(1e-14));
    CHECK(sound_speed_sq(EosModel::taub_mathews(), 10.0, 0.1) ==
          doctest::Approx(0.33333148150720114599).epsilon(1e-14));
    CHECK(sound_speed_sq(EosModel::ip(), 1.0, 1.0) == doctest::Approx(0.32071491318185641883).epsilon(1e-14));
    CHECK(sound_speed_sq(EosModel::taub_mathews(), 1e-12, 1.0) < 1e-11);
    CHECK_THROWS_AS(sound_speed_sq(kId, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(sound_speed_sq(kId, 1.0, 0.0), DomainError);
  }

  TEST_CASE("enthalpy partials match finite differences") {
    Gen g(11);
    for (const auto& e : kAllEos)
      for (int n = 0; n < 200; ++n) {
        const double p = g.log_uniform(1e-3, 1e3), rho = g.log_uniform(1e-3, 1e3);
        double hp, hr;
        enthalpy_partials(e, p, rho, hp, hr);
        // h depends on theta = p / rho only; difference h - 1 to keep the quotient clean.
        const double th = p / rho, dth = 1e-5 * th;
        const double fd = (rhd::detail::enthalpy_excess(e, th + dth) - rhd::detail::enthalpy_excess(e, th - dth)) /
                          (2 * dth);
        CHECK(rel_err(hp * rho, fd) < 1e-8);
        CHECK(rel_err(hr, -hp * th) < 1e-14);
      }
  }

  TEST_CASE("Taub inequality") {
    for (const auto& e : kAllEos) CHECK(check_taub(e, 0.0, 1.0));
    CHECK(check_taub(kId, 1.0, 1.0));
    CHECK(check_taub(EosModel::taub_mathews(), 10.0, 0.1));
    CHECK_THROWS_AS(check_taub(kId, -1.0, 1.0), DomainError);
  }

  TEST_CASE("Taub and sound-speed bounds on a random grid") {
    Gen g(12);
    for (const auto& e : kAllEos) {
      int bad = 0;
      for (int n = 0; n < 10000; ++n) {
        const double p = g.log_uniform(1e-6, 1e3), rho = g.log_uniform(1e-6, 1e3);
        const double c2 = sound_speed_sq(e, p, rho);
        if (!check_taub(e, p, rho) || !(c2 > 0.0 && c2 < 1.0)) ++bad;
      }
      INFO(rhd::testing::eos_name(e));
      CHECK(bad == 0);
    }
  }

  TEST_CASE("primitive to conserved examples") {
    const State a = prim_to_cons(kId, prim1(1, 0, 1));
    CHECK(a[0] == 1.0);
    CHECK(a[1] == 0.0);
    CHECK(a[3] == doctest::Approx(2.5).epsilon(1e-15));
    const State b = prim_to_cons(kId, prim1(1, 0.6, 1));
    CHECK(b[0] == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(b[1] == doctest::Approx(3.28125).epsilon(1e-15));
    CHECK(b[3] == doctest::Approx(4.46875).epsilon(1e-15));
    const State c = prim_to_cons(EosModel::rc(), prim1(1, 0, 1));
    CHECK(c[3] == doctest::Approx(3.4).epsilon(1e-15));
    const State d = prim_to_cons(EosModel::taub_mathews(), prim1(2, -0.9, 0.3));
    CHECK(d[0] == doctest::Approx(4.5883146774112353181).epsilon(1e-14));
    CHECK(d[1] == doctest::Approx(-13.263157894736842105).epsilon(1e-14));
    CHECK(d[3] == doctest::Approx(14.436842105263157895).epsilon(1e-14));
    CHECK_THROWS_AS(prim_to_cons(kId, prim1(1, 1.0, 1)), DomainError);
    CHECK_THROWS_AS(prim_to_cons(kId, prim1(0, 0.1, 1)), DomainError);
  }

  TEST_CASE("conserved to primitive examples") {
    const auto a = cons_to_prim(kId, cons(1, 0, 2.5));
    CHECK(a.prim.rho == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(a.prim.p == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(a.prim.v[0] == 0.0);
    CHECK(a.method == RecoveryMethod::PhiNewton);

    const auto b = cons_to_prim(EosModel::rc(), cons(1, 0, 3.4));
    CHECK(b.prim.p == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(b.prim.rho == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(b.method == RecoveryMethod::PiNewton);

    struct Row {
      EosModel eos;
      double rho, v, p;
    };
    const Row rows[] = {{EosModel::taub_mathews(), 1.3672736369003859901, 0.41126514931215817241, 0.86304274345882263139},
                        {EosModel::ip(), 1.3698612497498653081, 0.40742015246820634925, 0.90893734117895171953},
                        {EosModel::rc(), 1.3645898476336425226, 0.41520787175967241161, 0.81686436127498419763}};
    for (const auto& r : rows) {
      const auto w = cons_to_prim(r.eos, cons(1.5, 2.0, 4.0)).prim;
      INFO(rhd::testing::eos_name(r.eos));
      CHECK(rel_err(w.rho, r.rho) < 1e-13);
      CHECK(rel_err(w.v[0], r.v) < 1e-13);
      CHECK(rel_err(w.p, r.p) < 1e-12);
    }
  }

  TEST_CASE("recovery errors") {
    CHECK_THROWS_AS(cons_to_prim(kId, cons(1, 3, 3)), AdmissibilityError);
    CHECK_THROWS_AS(cons_to_prim(kId, cons(-1, 0, 3)), AdmissibilityError);
    CHECK_THROWS_AS(cons_to_prim(EosModel::rc(), cons(1, 0, 1)), AdmissibilityError);
    RecoveryOptions tight;
    tight.max_iter = 1;
    try {
      cons_to_prim(EosModel::taub_mathews(), cons(0.001, 25.0, 25.001), tight);
      FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
      CHECK(e.iterations() == 1);
      CHECK(e.residual() > 0.0);
    }
  }

  TEST_CASE("golden ultra-relativistic ideal gas states") {
    struct Row {
      double D, m, E, rho, v, p;
    };
    const Row rows[] = {
        {0.001, 25.0, 25.001, 1.9913276960883976e-5, 0.999801711041084, 0.003958207130631426},
        {0.26215012530349685, 42.10522585617847, 42.10705317285818, 0.003097928215833704, 0.999930172301406,
         0.001112999656126819},
        {0.1, 50.0, 50.01, 0.004084552892614892, 0.9991654731658531, 0.03176119254315},
    };
    for (const auto& r : rows) {
      const State u = cons(r.D, r.m, r.E);
      const auto w = cons_to_prim(kId, u).prim;
      CHECK(rel_err(w.rho, r.rho) < 1e-9);
      CHECK(rel_err(w.v[0], r.v) < 1e-9);
      CHECK(rel_err(w.p, r.p) < 1e-9);
      CHECK(std::abs(id_phi_residual(w.p, u, 5.0 / 3.0)) <= 1e-10);
    }
  }

  TEST_CASE("golden states against the high-precision root") {
    // 50-digit roots of the energy balance for the same three states.
    struct Row {
      double D, m, E, rho, v, p;
    };
    const Row rows[] = {
        {0.001, 25.0, 25.001, 1.9913276960857815129e-5, 0.99980171104108447077, 0.0039582071306182486777},
        {0.26215012530349685, 42.10522585617847, 42.10705317285818, 0.0030979282158327904148,
         0.99993017230140604076, 0.0011129996561286794944},
        {0.1, 50.0, 50.01, 0.0040845528926156033878, 0.9991654731658528195, 0.031761192543162281104},
    };
    for (const auto& r : rows) {
      const auto w = cons_to_prim(kId, cons(r.D, r.m, r.E)).prim;
      CHECK(rel_err(w.rho, r.rho) < 1e-12);
      CHECK(rel_err(w.v[0], r.v) < 1e-14);
      CHECK(rel_err(w.p, r.p) < 1e-12);
    }
  }

  TEST_CASE("Phi residual") {
    CHECK(std::abs(id_phi_residual(0.003958207130631426, cons(0.001, 25.0, 25.001), 5.0 / 3.0)) <= 1e-12);
    CHECK(id_phi_residual(1.0, cons(1, 0, 2.5), 5.0 / 3.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(id_phi_residual(2.0, cons(1, 0, 2.5), 5.0 / 3.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK_THROWS_AS(id_phi_residual(0.0, cons(1, 3, 2), 5.0 / 3.0), DomainError);
  }

  TEST_CASE("Phi increases in p") {
    Gen g(13);
    for (int n = 0; n < 2000; ++n) {
      const State u = prim_to_cons(kId, g.prim(1e-4, 1e2, 0.999, 1));
      const double p0 = cons_to_prim(kId, u).prim.p;
      double prev = id_phi_residual(p0 * 1e-3, u, 5.0 / 3.0);
      for (double s : {1e-2, 1e-1, 1.0, 10.0, 100.0}) {
        const double cur = id_phi_residual(p0 * s, u, 5.0 / 3.0);
        CHECK(cur > prev);
        prev = cur;
      }
    }
  }

  TEST_CASE("velocity quartic") {
    CHECK(std::abs(xi_quartic_residual(0.999801711041084, cons(0.001, 25.0, 25.001), 5.0 / 3.0)) <= 1e-14);
    CHECK(std::abs(xi_quartic_residual(0.9991654731658531, cons(0.1, 50.0, 50.01), 5.0 / 3.0)) <= 1e-14);
    CHECK(xi_quartic_residual(0.0, cons(1, 0, 2.5), 5.0 / 3.0) == 0.0);
  }

  TEST_CASE("Phi and quartic routes agree") {
    Gen g(14);
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n) {
      // The quartic itself loses digits for hot or cold ultra-relativistic states; stay where it is well conditioned.
      const State u = prim_to_cons(kId, g.prim(0.1, 10.0, 0.99, 1));
      const auto a = cons_to_prim(kId, u).prim;
      const auto b = cons_to_prim_id_quartic(u, 5.0 / 3.0).prim;
      worst = std::max({worst, rel_err(b.rho, a.rho), rel_err(b.p, a.p), std::abs(b.v[0] - a.v[0])});
    }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("round trip for every closure") {
    Gen g(15);
    for (const auto& e : kAllEos) {
      double worst = 0.0;
      for (int n = 0; n < 10000; ++n) {
        // Rounding u alone moves p by about eps E / p; keep that well below the tolerance.
        const Prim w = g.prim(1e-2, 1e2, 0.999);
        const Prim r = cons_to_prim(e, prim_to_cons(e, w)).prim;
        worst = std::max({worst, rel_err(r.rho, w.rho), rel_err(r.p, w.p)});
        for (int k = 0; k < 2; ++k)
          worst = std::max(worst, std::abs(w.v[k]) < 1e-3 ? std::abs(r.v[k] - w.v[k]) : rel_err(r.v[k], w.v[k]));
      }
      INFO(rhd::testing::eos_name(e));
      CHECK(worst <= 1e-9);
    }
  }

  TEST_CASE("recovered state reproduces the conserved input") {
    Gen g(16);
    for (const auto& e : kAllEos)
      for (int n = 0; n < 2000; ++n) {
        const State u = prim_to_cons(e, g.prim(1e-4, 1e3, 0.9999));
        const auto rep = cons_to_prim(e, u);
        INFO(rhd::testing::eos_name(e));
        const State back = prim_to_cons(e, rep.prim);
        for (int k = 0; k < 4; ++k) CHECK(std::abs(back[k] - u[k]) <= 1e-10 * u.cwiseAbs().maxCoeff());
        CHECK(rep.residual <= 1e-12);
      }
  }

  TEST_CASE("RC closure: R(h) decreasing between 3/2 and 8/5") {
    CHECK(rc_R(1.0) == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(rc_R(100.0) == doctest::Approx(1.5000016550166468266).epsilon(1e-12));
    double prev = rc_R(1.0);
    for (int k = 1; k <= 10000; ++k) {
      const double h = 1.0 + 99.0 * k / 10000.0;
      const double r = rc_R(h);
      CHECK(r < prev);
      CHECK(r > 1.5);
      prev = r;
    }
  }

  TEST_CASE("RC closure: T inverts the enthalpy") {
    Gen g(17);
    for (int n = 0; n < 1000; ++n) {
      const double th = g.log_uniform(1e-6, 1e4);
      const double h = enthalpy(EosModel::rc(), th, 1.0);
      CHECK(rel_err(rc_T(h), th) < 1e-9);
      const double dh = 1e-6 * h;
      CHECK(rel_err(rc_T_prime(h), (rc_T(h + dh) - rc_T(h - dh)) / (2 * dh)) < 1e-6);
    }
  }

  TEST_CASE("RC: S(E) < 0 and S' > 0 above E") {
    Gen g(18);
    for (int n = 0; n < 10000; ++n) {
      const State u = prim_to_cons(EosModel::rc(), g.prim(1e-6, 1e3, 1.0 - 1e-6));
      CHECK(rc_S(u[kEnergy], u) < 0.0);
      const double pi = u[kEnergy] * g.uniform(1.0, 10.0);
      CHECK(rc_S_prime(pi, u) > 0.0);
    }
  }

  TEST_CASE("RC Newton iterates increase and stay below the root") {
    Gen g(19);
    long evals = 0;
    int n = 0;
    for (int k = 0; k < 5000; ++k) {
      const State u = prim_to_cons(EosModel::rc(), g.prim(1e-8, 1e6, 1.0 - 1e-8));
      if (!is_admissible(u)) continue;
      ++n;
      std::vector<double> it;
      const auto rep = cons_to_prim_rc(u, {}, &it);
      evals += rep.iterations;
      REQUIRE(it.size() >= 2);
      CHECK(it.front() == 0.0);
      for (size_t j = 1; j < it.size(); ++j) {
        CHECK(it[j] > it[j - 1]);
        CHECK(it[j] <= rep.prim.p);
      }
    }
    CHECK(double(evals) / n <= 8.0);
  }

  TEST_CASE("RC closure: T is accurate for hot states") {
    // theta = 1e6: T(h(theta)) must return theta, not lose digits to s - 3h + 8.
    for (double th : {1e2, 1e4, 1e6, 1e8}) {
      const double h = enthalpy(EosModel::rc(), th, 1.0);
      CHECK(rel_err(rc_T(h), th) < 1e-13);
    }
  }

  TEST_CASE("warm start leaves the recovered state unchanged") {
    Gen g(20);
    for (const auto& e : kAllEos)
      for (int n = 0; n < 500; ++n) {
        const Prim w = g.prim(1e-3, 1e3, 0.999);
        const State u = prim_to_cons(e, w);
        RecoveryOptions opt;
        opt.guess = w.p * g.uniform(0.5, 2.0);
        const Prim a = cons_to_prim(e, u).prim;
        const Prim b = cons_to_prim(e, u, opt).prim;
        CHECK(rel_err(b.p, a.p) < 1e-11);
        CHECK(rel_err(b.rho, a.rho) < 1e-11);
      }
  }

  TEST_CASE("closure names") {
    CHECK(parse_eos_kind("rc") == EosKind::RC);
    CHECK(parse_eos_kind("TM") == EosKind::TM);
    CHECK(parse_eos_kind("Ip") == EosKind::IP);
    CHECK(to_string(EosKind::ID) == "ID");
    CHECK_THROWS_AS(parse_eos_kind("synge"), ConfigError);
  }
}
