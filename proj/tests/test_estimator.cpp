#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ilg/estimator.hpp"
#include "ilg/driver.hpp"
#include "ilg/oracle.hpp"
#include "support.hpp"

using namespace ilg;
using namespace ilg::testing;

TEST_CASE("constant-gradient flux with zero load has zero indicators") {
  // two triangles forming the unit square, u with globally constant gradient
  const std::vector<Vec2> verts{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  const std::vector<Tri> tris{{{0, 1, 3}, 0}, {{2, 3, 1}, 0}};
  const Triangulation mesh(verts, tris);
  const P1Space space(mesh);
  ManufacturedProblem prob = zero_problem();
  // u* = x so that grad u* is constant; g = -div(mu grad u*) = 0
  prob.exact_u = [](Vec2 p) { return p.x; };
  prob.exact_grad = [](Vec2) -> Vec2 { return {1.0, 0.0}; };
  const Discretization disc(prob, space);
  // every vertex of this mesh is on the boundary, so pick coefficients
  // directly: u = interpolant of x (not zero on the boundary, but the
  // indicator only sees the flux and g)
  DiscreteFunction u = zero_function(space);
  for (int v = 0; v < space.n_vertices(); ++v) u.values[v] = mesh.vertex(v).x;
  const IndicatorField ind = estimate(disc, u);
  for (double e2 : ind.eta2) CHECK(e2 == 0.0);
  CHECK(ind.global() == 0.0);
}

TEST_CASE("indicator field is nonnegative and sums to the global value") {
  const Triangulation mesh = uniform_refined(1);
  const P1Space space(mesh);
  const Discretization disc(smooth_problem(), space);
  std::mt19937 rng(3);
  const DiscreteFunction u = random_interior(space, rng, 0.5);
  const IndicatorField ind = estimate(disc, u);
  double sum = 0.0;
  for (double e2 : ind.eta2) {
    CHECK(e2 >= 0.0);
    sum += e2;
  }
  CHECK(ind.total2 == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("Doerfler marking: hand-checked greedy prefix") {
  IndicatorField ind;
  ind.eta2 = {9.0, 4.0, 1.0, 1.0};
  ind.total2 = 15.0;
  const MarkedSet m = mark(ind, 0.5);  // need >= 7.5, the 9-element suffices
  REQUIRE(m.elements.size() == 1);
  CHECK(m.elements[0] == 0);
}

TEST_CASE("theta = 0 marks everything") {
  IndicatorField ind;
  ind.eta2 = {1.0, 0.0, 2.0};
  ind.total2 = 3.0;
  const MarkedSet m = mark(ind, 0.0);
  CHECK(m.elements == std::vector<int>{0, 1, 2});
}

TEST_CASE("theta = 1 marks exactly the support") {
  IndicatorField ind;
  ind.eta2 = {1.0, 0.0, 2.0, 0.0};
  ind.total2 = 3.0;
  const MarkedSet m = mark(ind, 1.0);
  CHECK(m.elements == std::vector<int>{0, 2});
}

TEST_CASE("ties break toward the lower element index") {
  IndicatorField ind;
  ind.eta2 = {2.0, 5.0, 5.0, 2.0};
  ind.total2 = 14.0;
  const MarkedSet m = mark(ind, 0.5);  // need >= 7: two fives, lower index first
  CHECK(m.elements == std::vector<int>{1, 2});
}

TEST_CASE("Doerfler property and minimality on real indicators") {
  const Triangulation mesh = uniform_refined(1);
  const P1Space space(mesh);
  const Discretization disc(smooth_problem(), space);
  std::mt19937 rng(9);
  const DiscreteFunction u = random_interior(space, rng, 0.5);
  const IndicatorField ind = estimate(disc, u);
  const double theta = 0.5;
  const MarkedSet m = mark(ind, theta);
  double marked_sum = 0.0;
  double min_marked = 1e300;
  for (int t : m.elements) {
    marked_sum += ind.eta2[t];
    min_marked = std::min(min_marked, ind.eta2[t]);
  }
  CHECK(marked_sum >= theta * ind.total2 * (1.0 - 1e-12));
  // removing the smallest marked indicator breaks the property (minimality)
  CHECK(marked_sum - min_marked < theta * ind.total2);
}

TEST_CASE("invalid theta is rejected") {
  IndicatorField ind;
  ind.eta2 = {1.0};
  ind.total2 = 1.0;
  CHECK_THROWS_AS(mark(ind, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(mark(ind, 1.1), std::invalid_argument);
}

TEST_CASE("estimator Lipschitz stability in the iterate (fitted constant)") {
  std::mt19937 rng(17);
  for (const auto& prob : {smooth_problem(), singular_problem()}) {
    const Triangulation mesh = uniform_refined(1);
    const P1Space space(mesh);
    const Discretization disc(prob, space);
    double worst = 0.0;
    for (int s = 0; s < 60; ++s) {
      const DiscreteFunction u = random_interior(space, rng, 0.5);
      DiscreteFunction w = random_interior(space, rng, 0.2);
      DiscreteFunction upw = u;
      for (std::size_t i = 0; i < upw.values.size(); ++i) upw.values[i] += w.values[i];
      const double eta_u = estimate(disc, u).global();
      const double eta_upw = estimate(disc, upw).global();
      worst = std::max(worst,
                       std::abs(eta_u - eta_upw) / space.h1_seminorm(w.values));
    }
    // frozen bound: measured max is 0.80 (smooth) / 1.51 (singular) on this
    // mesh and seed; 4.0 leaves headroom without losing meaning
    CHECK(worst <= 4.0);
  }
}

TEST_CASE("efficiency index stays in a fixed band across adaptive levels") {
  ILGConfig cfg;
  cfg.scheme = {SchemeKind::Kacanov, 1.0};
  cfg.lambda = 0.1;
  cfg.theta = 0.5;
  cfg.max_elements = 4000;
  const RunRecord record = run(cfg, smooth_problem());
  REQUIRE(record.levels.size() >= 6);
  double lo = 1e300, hi = 0.0;
  for (std::size_t k = 0; k < 6; ++k) {
    const double ratio = record.levels[k].estimator / record.levels[k].h1_error;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo <= 3.0);
}
