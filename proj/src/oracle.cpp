#include "ilg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "ilg/estimator.hpp"
#include "ilg/quadrature.hpp"

namespace ilg {

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// In-place dense Cholesky A = L L^T (row-major, lower triangle used).
void cholesky_factor(std::vector<double>& a, int n) {
  for (int k = 0; k < n; ++k) {
    double d = a[k * n + k];
    for (int j = 0; j < k; ++j) d -= a[k * n + j] * a[k * n + j];
    if (d <= 0.0) throw std::runtime_error("oracle: Newton matrix is not positive definite");
    const double lkk = std::sqrt(d);
    a[k * n + k] = lkk;
    for (int i = k + 1; i < n; ++i) {
      double s = a[i * n + k];
      for (int j = 0; j < k; ++j) s -= a[i * n + j] * a[k * n + j];
      a[i * n + k] = s / lkk;
    }
  }
}

std::vector<double> cholesky_solve(const std::vector<double>& l, int n,
                                   std::vector<double> b) {
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int j = 0; j < i; ++j) s -= l[i * n + j] * b[j];
    b[i] = s / l[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= l[j * n + i] * b[j];
    b[i] = s / l[i * n + i];
  }
  return b;
}

}  // namespace

OracleSolution oracle_solve(const Discretization& disc) {
  const P1Space& space = disc.space();
  const int n = space.n_interior();
  if (n > 5000) throw std::invalid_argument("oracle_solve: mesh exceeds 5000 dofs");
  const DiffusionLaw& law = disc.problem().law;

  DiscreteFunction u = zero_function(space);
  for (int newton = 0; newton < 100; ++newton) {
    const std::vector<double> r = disc.residual_vector(u);
    const double rnorm = norm2(r);
    if (rnorm <= 1.0e-13) return {u.values, rnorm, newton};

    // Newton matrix assembled densely, independent of the sparse path
    std::vector<double> jac(static_cast<std::size_t>(n) * n, 0.0);
    for (int t = 0; t < space.n_elements(); ++t) {
      const auto& el = space.elements()[t];
      const Vec2 gu = space.gradient(t, u.values);
      const double q = dot(gu, gu);
      const double mu = law.mu(q);
      const double dmu = law.mu_prime(q);
      for (int i = 0; i < 3; ++i) {
        const int di = space.dof_of_vertex(el.v[i]);
        if (di < 0) continue;
        for (int j = 0; j < 3; ++j) {
          const int dj = space.dof_of_vertex(el.v[j]);
          if (dj < 0) continue;
          jac[static_cast<std::size_t>(di) * n + dj] +=
              el.area * (mu * dot(el.grad[i], el.grad[j]) +
                         2.0 * dmu * dot(gu, el.grad[i]) * dot(gu, el.grad[j]));
        }
      }
    }
    cholesky_factor(jac, n);
    std::vector<double> neg_r(r);
    for (double& x : neg_r) x = -x;
    const std::vector<double> direction = cholesky_solve(jac, n, std::move(neg_r));

    const double h0 = disc.energy(u);
    const double slack = 1.0e-14 * (1.0 + std::abs(h0));
    double t = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings <= 60; ++halvings) {
      DiscreteFunction trial = u;
      for (int d = 0; d < n; ++d)
        trial.values[space.vertex_of_dof(d)] += t * direction[d];
      if (disc.energy(trial) <= h0 + slack) {
        u = std::move(trial);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) throw std::runtime_error("oracle_solve: backtracking failed");
  }
  throw std::runtime_error("oracle_solve: Newton did not converge in 100 steps");
}

CheckResult check_lemma21(const Discretization& disc, const FixedMeshTrace& trace,
                          const OracleSolution& oracle, double nu, double beta) {
  const P1Space& space = disc.space();
  DiscreteFunction u_star{&space, oracle.values};
  double worst = 0.0;
  for (std::size_t k = 0; k < trace.xi.size(); ++k) {
    if (trace.xi[k] < 1.0e-12) continue;
    DiscreteFunction u_n{&space, trace.iterates[k + 1]};
    const double err = h1_distance(space, u_star, u_n);
    worst = std::max(worst, err / trace.xi[k]);
  }
  const double bound = 1.0 + beta / nu;
  return {"lemma21.ratio", bound, worst, worst <= bound};
}

CheckResult check_energy_sandwich(const Discretization& disc, const OracleSolution& oracle,
                                  const DiscreteFunction& u) {
  const P1Space& space = disc.space();
  DiscreteFunction u_star{&space, oracle.values};
  const double dist = h1_distance(space, u_star, u);
  const double gap = disc.energy(u) - disc.energy(u_star);
  const double nu = disc.problem().law.nu();
  const double lf = disc.problem().law.lipschitz();
  if (dist < 1.0e-14)
    return {"energy_sandwich", lf / 2.0, 0.0, std::abs(gap) <= 1.0e-12};
  const double ratio = gap / (dist * dist);
  constexpr double kSlack = 1.0e-8;
  const bool pass =
      ratio >= (nu / 2.0) * (1.0 - kSlack) && ratio <= (lf / 2.0) * (1.0 + kSlack);
  return {"energy_sandwich", lf / 2.0, ratio, pass};
}

std::vector<CheckResult> check_energy_sandwich_sampled(const Discretization& disc,
                                                       const OracleSolution& oracle,
                                                       int n_samples, unsigned seed) {
  const P1Space& space = disc.space();
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<CheckResult> results;
  const double eps_values[] = {1.0e-3, 1.0e-2, 1.0e-1};
  for (int s = 0; s < n_samples; ++s) {
    DiscreteFunction w = zero_function(space);
    for (int d = 0; d < space.n_interior(); ++d)
      w.values[space.vertex_of_dof(d)] = gauss(rng);
    const double wn = space.h1_seminorm(w.values);
    const double eps = eps_values[s % 3] / wn;
    DiscreteFunction u{&space, oracle.values};
    for (int i = 0; i < space.n_vertices(); ++i) u.values[i] += eps * w.values[i];
    CheckResult r = check_energy_sandwich(disc, oracle, u);
    r.name = "energy_sandwich.sample" + std::to_string(s);
    results.push_back(r);
  }
  return results;
}

double tail_constant(double lipschitz, double nu, double beta, double c_h) {
  const double factor = 1.0 + beta / nu;
  return lipschitz * factor * factor / (2.0 * c_h);
}

std::vector<CheckResult> check_tail_bounds(const FixedMeshTrace& trace, double c) {
  std::vector<double> a;
  for (double xi : trace.xi) a.push_back(xi * xi);
  const std::size_t n = a.size();
  std::vector<CheckResult> results;

  // sum_{j > k} a_j <= C a_k for every k >= 1
  double worst_tail = 0.0;
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t j = n; j > 0; --j) suffix[j - 1] = suffix[j] + a[j - 1];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k] <= 0.0) continue;
    worst_tail = std::max(worst_tail, suffix[k + 1] / (c * a[k]));
  }
  results.push_back({"tail.sum_bound", 1.0, worst_tail, worst_tail <= 1.0});

  // a_n <= C (1 + 1/C)^{2-n} a_1 for every n >= 2 (1-based step index)
  double worst_geo = 0.0;
  if (n >= 2 && a[0] > 0.0) {
    const double base = 1.0 + 1.0 / c;
    for (std::size_t k = 1; k < n; ++k) {
      const std::size_t step_index = k + 1;
      const double bound = c * std::pow(base, 2.0 - static_cast<double>(step_index)) * a[0];
      if (bound > 0.0) worst_geo = std::max(worst_geo, a[k] / bound);
    }
  }
  results.push_back({"tail.geometric_decay", 1.0, worst_geo, worst_geo <= 1.0});
  return results;
}

void print_report(const std::vector<CheckResult>& results, std::ostream& os) {
  for (const auto& r : results) {
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  measured=" << r.measured
       << "  bound=" << r.bound << '\n';
  }
  const auto failed = std::count_if(results.begin(), results.end(),
                                    [](const CheckResult& r) { return !r.pass; });
  os << results.size() - failed << " / " << results.size() << " checks passed\n";
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

}  // namespace ilg
