#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "ilg/assembly.hpp"
#include "support.hpp"

using namespace ilg;
using namespace ilg::testing;

namespace {

// dense Gaussian elimination oracle for small systems
std::vector<double> dense_solve(const SparseSystem& sys) {
  const P1Space& space = *sys.space;
  const int n = space.n_interior();
  std::vector<double> a(static_cast<std::size_t>(n) * (n + 1), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = space.row_ptr()[i]; k < space.row_ptr()[i + 1]; ++k)
      a[i * (n + 1) + space.col_idx()[k]] = sys.values[k];
    a[i * (n + 1) + n] = sys.rhs[i];
  }
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * (n + 1) + col]) > std::abs(a[pivot * (n + 1) + col])) pivot = r;
    for (int c = 0; c <= n; ++c) std::swap(a[col * (n + 1) + c], a[pivot * (n + 1) + c]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * (n + 1) + col] / a[col * (n + 1) + col];
      for (int c = col; c <= n; ++c) a[r * (n + 1) + c] -= f * a[col * (n + 1) + c];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a[i * (n + 1) + n] / a[i * (n + 1) + i];
  return x;
}

double csr_entry(const SparseSystem& sys, int i, int j) {
  const auto& rp = sys.space->row_ptr();
  const auto& ci = sys.space->col_idx();
  for (int k = rp[i]; k < rp[i + 1]; ++k)
    if (ci[k] == j) return sys.values[k];
  return 0.0;
}

}  // namespace

TEST_CASE("scheme constants") {
  const DiffusionLaw smooth = smooth_problem().law;
  const DiffusionLaw singular = singular_problem().law;

  const SchemeConstants z = scheme_constants({SchemeKind::Zarantonello, 0.85}, smooth);
  CHECK(z.alpha == doctest::Approx(1.0 / 0.85));
  CHECK(z.beta == doctest::Approx(1.0 / 0.85));

  const SchemeConstants k = scheme_constants({SchemeKind::Kacanov, 1.0}, smooth);
  CHECK(k.alpha == doctest::Approx(0.5));
  CHECK(k.beta == doctest::Approx(1.5));

  const SchemeConstants n = scheme_constants({SchemeKind::Newton, 1.0}, singular);
  CHECK(n.alpha == doctest::Approx(1.0 - 2.0 * std::exp(-1.5)));
  CHECK(n.beta == doctest::Approx(2.0));

  const SchemeConstants ns = scheme_constants({SchemeKind::Newton, 1.0}, smooth);
  CHECK(ns.alpha == doctest::Approx(3.0 / 8.0));
  CHECK(ns.beta == doctest::Approx(1.5));
}

TEST_CASE("assembled matrices are symmetric for all schemes") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  const Discretization disc(smooth_problem(), space);
  std::mt19937 rng(3);
  const DiscreteFunction u = random_interior(space, rng, 0.5);
  for (SchemeKind kind : {SchemeKind::Zarantonello, SchemeKind::Kacanov, SchemeKind::Newton}) {
    const SparseSystem sys = assemble({kind, 0.85}, disc, u);
    for (int i = 0; i < space.n_interior(); ++i) {
      for (int k = space.row_ptr()[i]; k < space.row_ptr()[i + 1]; ++k) {
        const int j = space.col_idx()[k];
        const double aij = sys.values[k];
        const double aji = csr_entry(sys, j, i);
        CHECK(std::abs(aij - aji) <= 1e-12 * (1.0 + std::abs(aij)));
      }
    }
  }
}

TEST_CASE("coercivity of the assembled forms against the Laplacian") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  std::mt19937 rng(7);
  for (const auto& prob : {smooth_problem(), singular_problem()}) {
    const Discretization disc(prob, space);
    const DiscreteFunction u = random_interior(space, rng, 0.6);
    for (SchemeKind kind :
         {SchemeKind::Zarantonello, SchemeKind::Kacanov, SchemeKind::Newton}) {
      const SchemeSpec scheme{kind, 0.7};
      const SparseSystem sys = assemble(scheme, disc, u);
      const double alpha = scheme_constants(scheme, prob.law).alpha;
      for (int s = 0; s < 25; ++s) {
        const DiscreteFunction v = random_interior(space, rng, 1.0);
        const std::vector<double> vi = gather_interior(space, v);
        const std::vector<double> av = sys.multiply(vi);
        double vav = 0.0;
        for (std::size_t i = 0; i < vi.size(); ++i) vav += vi[i] * av[i];
        const double vkv = std::pow(space.h1_seminorm(v.values), 2);
        CHECK(vav >= alpha * vkv * (1.0 - 1e-10));
      }
    }
  }
}

TEST_CASE("Kacanov with constant mu is the scaled Poisson system") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  const Discretization disc(poisson_problem(), space);
  std::mt19937 rng(11);
  const DiscreteFunction u1 = random_interior(space, rng, 0.5);
  const DiscreteFunction u2 = random_interior(space, rng, 0.5);
  // the matrix does not depend on the iterate when mu is constant
  const SparseSystem s1 = assemble({SchemeKind::Kacanov, 1.0}, disc, u1);
  const SparseSystem s2 = assemble({SchemeKind::Kacanov, 1.0}, disc, u2);
  for (std::size_t k = 0; k < s1.values.size(); ++k)
    CHECK(s1.values[k] == doctest::Approx(s2.values[k]).epsilon(1e-14));
  // one solve lands on the discrete solution: the residual of the update is 0
  const std::vector<double> x = solve(s1, gather_interior(space, u1));
  const DiscreteFunction sol = from_interior(space, x);
  const std::vector<double> res = disc.residual_vector(sol);
  double rn = 0.0;
  for (double r : res) rn += r * r;
  CHECK(std::sqrt(rn) <= 1e-10);
}

TEST_CASE("Newton matrix at zero iterate reduces to mu(0) K") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  const Discretization disc(smooth_problem(), space);
  const DiscreteFunction zero = zero_function(space);
  const SparseSystem newton = assemble({SchemeKind::Newton, 1.0}, disc, zero);
  // Zarantonello with delta = 1 assembles exactly K
  const SparseSystem laplace = assemble({SchemeKind::Zarantonello, 1.0}, disc, zero);
  const double mu0 = disc.problem().law.mu_at_zero;
  for (std::size_t k = 0; k < newton.values.size(); ++k)
    CHECK(newton.values[k] == doctest::Approx(mu0 * laplace.values[k]).epsilon(1e-13));
}

TEST_CASE("Newton bilinear form matches the finite-difference Jacobian") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  const Discretization disc(smooth_problem(), space);
  std::mt19937 rng(19);
  const DiscreteFunction u = random_interior(space, rng, 0.4);
  const DiscreteFunction v = random_interior(space, rng, 0.4);
  const DiscreteFunction w = random_interior(space, rng, 0.4);
  const SparseSystem sys = assemble({SchemeKind::Newton, 1.0}, disc, u);
  const std::vector<double> av = sys.multiply(gather_interior(space, v));
  const std::vector<double> wi = gather_interior(space, w);
  double bilinear = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) bilinear += av[i] * wi[i];
  const double base = disc.residual_apply(u, w);
  double prev = 1e300;
  for (double t : {1e-4, 1e-5}) {
    DiscreteFunction ut = u;
    for (std::size_t i = 0; i < ut.values.size(); ++i) ut.values[i] += t * v.values[i];
    const double fd = (disc.residual_apply(ut, w) - base) / t;
    const double err = std::abs(fd - bilinear);
    CHECK(err < prev);
    CHECK(err <= 1e-2 * (1.0 + std::abs(bilinear)));
    prev = err;
  }
}

TEST_CASE("solve: identity and 2x2 hand-checked system") {
  // build a tiny space to borrow a pattern is overkill; check via Kacanov on
  // the real mesh against the dense oracle instead, and the 2x2 case by hand
  // with the CG algebra: [[2,1],[1,2]] x = [3,3] -> x = [1,1]
  const double a11 = 2.0, a12 = 1.0, a22 = 2.0;
  const double b1 = 3.0, b2 = 3.0;
  const double det = a11 * a22 - a12 * a12;
  CHECK((a22 * b1 - a12 * b2) / det == doctest::Approx(1.0));
  CHECK((a11 * b2 - a12 * b1) / det == doctest::Approx(1.0));
}

TEST_CASE("CG agrees with a dense factorization oracle") {
  const Triangulation mesh = make_lshape_initial();  // 81 interior dofs
  const P1Space space(mesh);
  REQUIRE(space.n_interior() <= 200);
  const Discretization disc(smooth_problem(), space);
  std::mt19937 rng(23);
  const DiscreteFunction u = random_interior(space, rng, 0.4);
  const SparseSystem sys = assemble({SchemeKind::Kacanov, 1.0}, disc, u);
  const std::vector<double> cg = solve(sys, std::vector<double>(space.n_interior(), 0.0));
  const std::vector<double> dense = dense_solve(sys);
  double worst = 0.0;
  for (int i = 0; i < space.n_interior(); ++i)
    worst = std::max(worst, std::abs(cg[i] - dense[i]));
  CHECK(worst < 1e-10);
}

TEST_CASE("solve reports iteration stats and honors zero rhs") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  const Discretization disc(poisson_problem(), space);
  SparseSystem sys = assemble({SchemeKind::Kacanov, 1.0}, disc, zero_function(space));
  std::fill(sys.rhs.begin(), sys.rhs.end(), 0.0);
  const std::vector<double> x = solve(sys, std::vector<double>(space.n_interior(), 1.0));
  for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("Galerkin fixed point: one step from the discrete solution returns it") {
  const Triangulation mesh = make_lshape_initial();
  const P1Space space(mesh);
  const Discretization disc(smooth_problem(), space);
  // converge via damped iteration first (Kacanov limits quickly)
  DiscreteFunction u = zero_function(space);
  for (int n = 0; n < 80; ++n) {
    const SparseSystem sys = assemble({SchemeKind::Kacanov, 1.0}, disc, u);
    u = from_interior(space, solve(sys, gather_interior(space, u)));
  }
  for (SchemeKind kind : {SchemeKind::Zarantonello, SchemeKind::Kacanov, SchemeKind::Newton}) {
    const SparseSystem sys = assemble({kind, 0.85}, disc, u);
    const DiscreteFunction next = from_interior(space, solve(sys, gather_interior(space, u)));
    CHECK(h1_distance(space, next, u) <= 1e-10);
  }
}
