#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ilg/oracle.hpp"
#include "support.hpp"

using namespace ilg;
using namespace ilg::testing;

TEST_CASE("linear law converges in one Newton step") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  const Discretization disc(poisson_problem(), space);
  const OracleSolution oracle = oracle_solve(disc);
  CHECK(oracle.newton_steps == 1);
  CHECK(oracle.residual_norm <= 1e-13);
}

TEST_CASE("oracle is deterministic") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  const Discretization disc(smooth_problem(), space);
  const OracleSolution a = oracle_solve(disc);
  const OracleSolution b = oracle_solve(disc);
  CHECK(a.values == b.values);
  CHECK(a.newton_steps == b.newton_steps);
}

TEST_CASE("oracle energy is the minimum over recorded iterates") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  const Discretization disc(smooth_problem(), space);
  const OracleSolution oracle = oracle_solve(disc);
  const double h_star = disc.energy(DiscreteFunction{&space, oracle.values});
  const FixedMeshTrace trace =
      run_fixed({SchemeKind::Kacanov, 1.0}, disc, zero_function(space), 25);
  for (const auto& iterate : trace.iterates)
    CHECK(disc.energy(DiscreteFunction{&space, iterate}) >= h_star - 1e-12);
}

TEST_CASE("scheme limits agree with the oracle within 1e-8") {
  const Triangulation mesh = uniform_refined(1);
  const P1Space space(mesh);
  const Discretization disc(smooth_problem(), space);
  const OracleSolution oracle = oracle_solve(disc);
  const DiscreteFunction u_star{&space, oracle.values};
  for (SchemeKind kind : {SchemeKind::Zarantonello, SchemeKind::Kacanov, SchemeKind::Newton}) {
    const double delta = (kind == SchemeKind::Zarantonello) ? 0.85 : 1.0;
    const FixedMeshTrace trace =
        run_fixed({kind, delta}, disc, zero_function(space), 400, 1e-11);
    const DiscreteFunction limit{&space, trace.iterates.back()};
    CHECK(h1_distance(space, limit, u_star) <= 1e-8);
  }
}

TEST_CASE("lemma 2.1 ratio bound on traces (both problems, all schemes)") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  for (const auto& prob : {smooth_problem(), singular_problem()}) {
    const Discretization disc(prob, space);
    const OracleSolution oracle = oracle_solve(disc);
    for (SchemeKind kind :
         {SchemeKind::Zarantonello, SchemeKind::Kacanov, SchemeKind::Newton}) {
      const double delta = (kind == SchemeKind::Zarantonello)
                               ? (prob.name == "smooth" ? 0.85 : 0.5)
                               : 1.0;
      const SchemeSpec scheme{kind, delta};
      const FixedMeshTrace trace = run_fixed(scheme, disc, zero_function(space), 30, 1e-12);
      const SchemeConstants ab = scheme_constants(scheme, prob.law);
      const CheckResult r = check_lemma21(disc, trace, oracle, prob.law.nu(), ab.beta);
      CHECK(r.pass);
      // spot-check the stated bound values
      if (kind == SchemeKind::Zarantonello && prob.name == "smooth")
        CHECK(r.bound == doctest::Approx(1.0 + (1.0 / 0.85) / (3.0 / 8.0)));
      if (kind == SchemeKind::Kacanov && prob.name == "smooth")
        CHECK(r.bound == doctest::Approx(5.0));
    }
  }
}

TEST_CASE("energy sandwich at the solution and under perturbations") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  const Discretization disc(smooth_problem(), space);
  const OracleSolution oracle = oracle_solve(disc);

  // u = u*_N: both sides vanish
  const CheckResult at_star =
      check_energy_sandwich(disc, oracle, DiscreteFunction{&space, oracle.values});
  CHECK(at_star.pass);

  const auto sampled = check_energy_sandwich_sampled(disc, oracle, 100, 2024);
  const double nu = disc.problem().law.nu();
  const double lf = disc.problem().law.lipschitz();
  for (const auto& r : sampled) {
    CHECK(r.pass);
    CHECK(r.measured >= nu / 2.0 * (1 - 1e-8));
    CHECK(r.measured <= lf / 2.0 * (1 + 1e-8));
  }
}

TEST_CASE("oracle refuses meshes beyond the dense budget") {
  // a mesh with > 5000 interior dofs: 5 uniform sweeps give 6144 elements
  const Triangulation mesh = uniform_refined(5);
  const P1Space space(mesh);
  if (space.n_interior() > 5000) {
    const Discretization disc(smooth_problem(), space);
    CHECK_THROWS_AS(oracle_solve(disc), std::invalid_argument);
  } else {
    // guard the guard: the sweep count above must overshoot eventually
    CHECK(space.n_interior() > 2000);
  }
}
