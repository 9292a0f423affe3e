#pragma once

#include <cmath>
#include <random>

#include "ilg/model.hpp"

namespace ilg::testing {

inline MarkedSet mark_all(const Triangulation& mesh) {
  MarkedSet m;
  m.elements.resize(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) m.elements[t] = t;
  return m;
}

inline Triangulation uniform_refined(int sweeps) {
  Triangulation mesh = make_lshape_initial();
  for (int s = 0; s < sweeps; ++s) mesh = refine(mesh, mark_all(mesh)).mesh;
  return mesh;
}

/// Linear special case: mu == 1, u* = sin(pi x) sin(pi y).
inline ManufacturedProblem poisson_problem() {
  ManufacturedProblem p = smooth_problem();
  p.name = "poisson";
  p.law.mu = [](double) { return 1.0; };
  p.law.mu_prime = [](double) { return 0.0; };
  p.law.psi = [](double s) { return 0.5 * s; };
  p.law.m_mu = 1.0;
  p.law.M_mu = 1.0;
  p.law.mu_at_zero = 1.0;
  p.law.mu_inf = 1.0;
  p.g_pointwise = [exact = p.exact_u](Vec2 x, double) {
    return 2.0 * M_PI * M_PI * exact(x);
  };
  return p;
}

/// Degenerate special case: mu == 1, u* == 0 (g == 0).
inline ManufacturedProblem zero_problem() {
  ManufacturedProblem p = poisson_problem();
  p.name = "zero";
  p.exact_u = [](Vec2) { return 0.0; };
  p.exact_grad = [](Vec2) -> Vec2 { return {0.0, 0.0}; };
  p.g_pointwise = [](Vec2, double) { return 0.0; };
  return p;
}

inline DiscreteFunction random_interior(const P1Space& space, std::mt19937& rng,
                                        double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  DiscreteFunction u = zero_function(space);
  for (int d = 0; d < space.n_interior(); ++d) u.values[space.vertex_of_dof(d)] = gauss(rng);
  return u;
}

}  // namespace ilg::testing
