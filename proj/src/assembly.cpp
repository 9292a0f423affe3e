#include "ilg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ilg {

const char* scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Zarantonello:
      return "zarantonello";
    case SchemeKind::Kacanov:
      return "kacanov";
    case SchemeKind::Newton:
      return "newton";
  }
  return "?";
}

SchemeConstants scheme_constants(const SchemeSpec& scheme, const DiffusionLaw& law) {
  switch (scheme.kind) {
    case SchemeKind::Zarantonello:
      return {1.0 / scheme.delta, 1.0 / scheme.delta};
    case SchemeKind::Kacanov:
      return {law.mu_inf, law.mu_at_zero};
    case SchemeKind::Newton:
      // flux-Jacobian eigenvalues are mu(s) and mu(s) + 2 s mu'(s)
      return {std::min(law.mu_inf, law.m_mu), std::max(law.mu_at_zero, law.M_mu)};
  }
  throw std::logic_error("scheme_constants: unknown scheme");
}

std::vector<double> SparseSystem::multiply(std::span<const double> x) const {
  const auto& row_ptr = space->row_ptr();
  const auto& col_idx = space->col_idx();
  const int n = space->n_interior();
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[i] = s;
  }
  return y;
}

SparseSystem assemble(const SchemeSpec& scheme, const Discretization& disc,
                      const DiscreteFunction& u_n) {
  const P1Space& space = disc.space();
  if (u_n.space != &space)
    throw std::invalid_argument("assemble: iterate bound to a different mesh");
  const DiffusionLaw& law = disc.problem().law;

  SparseSystem sys;
  sys.space = &space;
  sys.values.assign(space.nnz(), 0.0);
  sys.rhs.assign(space.n_interior(), 0.0);

  for (int t = 0; t < space.n_elements(); ++t) {
    const auto& el = space.elements()[t];
    const Vec2 gu = space.gradient(t, u_n.values);
    const double q = dot(gu, gu);

    // local matrix and the rhs contribution of this element
    double local[3][3] = {};
    double local_rhs[3] = {0.0, 0.0, 0.0};
    switch (scheme.kind) {
      case SchemeKind::Zarantonello: {
        const double c = el.area / scheme.delta;
        const double mu = law.mu(q);
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) local[i][j] = c * dot(el.grad[i], el.grad[j]);
          // (1/delta) (u_n, phi_i)_X - mu(q) (grad u_n, grad phi_i); the load
          // part of -<F(u_n), phi_i> is added once after the element loop
          local_rhs[i] = (c - el.area * mu) * dot(gu, el.grad[i]);
        }
        break;
      }
      case SchemeKind::Kacanov: {
        const double c = el.area * law.mu(q);
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) local[i][j] = c * dot(el.grad[i], el.grad[j]);
        break;
      }
      case SchemeKind::Newton: {
        const double mu = law.mu(q);
        const double dmu = law.mu_prime(q);
        for (int i = 0; i < 3; ++i) {
          const double gui = dot(gu, el.grad[i]);
          for (int j = 0; j < 3; ++j) {
            local[i][j] =
                el.area * (mu * dot(el.grad[i], el.grad[j]) + 2.0 * dmu * gui * dot(gu, el.grad[j]));
          }
          // (F'(u_n) u_n, phi_i) - delta * (nonlinear part of <F(u_n), phi_i>)
          local_rhs[i] = el.area * ((mu + 2.0 * dmu * q) * gui - scheme.delta * mu * gui);
        }
        break;
      }
    }

    for (int i = 0; i < 3; ++i) {
      const int di = space.dof_of_vertex(el.v[i]);
      if (di < 0) continue;
      sys.rhs[di] += local_rhs[i];
      for (int j = 0; j < 3; ++j) {
        const int pos = space.scatter(t, i, j);
        if (pos >= 0) sys.values[pos] += local[i][j];
      }
    }
  }

  // load contributions: Zarantonello and Newton carry -delta-weighted
  // residual loads, Kacanov solves directly against the load
  const auto load = disc.load();
  const double load_weight = (scheme.kind == SchemeKind::Kacanov)   ? 1.0
                             : (scheme.kind == SchemeKind::Newton) ? scheme.delta
                                                                   : 1.0;
  for (int d = 0; d < space.n_interior(); ++d)
    sys.rhs[d] += load_weight * load[space.vertex_of_dof(d)];

  return sys;
}

std::vector<double> solve(const SparseSystem& sys, std::span<const double> guess,
                          SolveStats* stats) {
  const P1Space& space = *sys.space;
  const int n = space.n_interior();
  const auto& row_ptr = space.row_ptr();
  const auto& col_idx = space.col_idx();
  constexpr double kRelTol = 1.0e-12;

  const auto norm2 = [](std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };

  std::vector<double> x(guess.begin(), guess.end());
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("solve: guess size mismatch");

  const double bnorm = norm2(sys.rhs);
  if (bnorm == 0.0) return std::vector<double>(n, 0.0);

  std::vector<double> diag(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (col_idx[k] == i) diag[i] = sys.values[k];
    }
    if (diag[i] <= 0.0) throw std::runtime_error("solve: nonpositive diagonal entry");
  }

  std::vector<double> r = sys.multiply(x);
  for (int i = 0; i < n; ++i) r[i] = sys.rhs[i] - r[i];
  std::vector<double> z(n), p(n), q;
  for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rho = 0.0;
  for (int i = 0; i < n; ++i) rho += r[i] * z[i];

  const long max_iter = 10L * n;
  double rnorm = norm2(r);
  long it = 0;
  while (rnorm > kRelTol * bnorm) {
    if (it++ >= max_iter)
      throw std::runtime_error("solve: CG did not converge (relative residual " +
                               std::to_string(rnorm / bnorm) + ")");
    q = sys.multiply(p);
    double pq = 0.0;
    for (int i = 0; i < n; ++i) pq += p[i] * q[i];
    if (pq <= 0.0) throw std::runtime_error("solve: matrix is not positive definite");
    const double alpha = rho / pq;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    double rho_next = 0.0;
    for (int i = 0; i < n; ++i) rho_next += r[i] * z[i];
    const double beta = rho_next / rho;
    rho = rho_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rnorm = norm2(r);
  }
  if (stats) {
    stats->iterations = static_cast<int>(it);
    stats->rel_residual = rnorm / bnorm;
  }
  return x;
}

}  // namespace ilg
