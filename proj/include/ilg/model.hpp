#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ilg/space.hpp"

namespace ilg {

/// Scalar diffusion law mu(t) for the operator -div(mu(|grad u|^2) grad u),
/// with its derivative, potential psi(s) = 1/2 int_0^s mu, and the
/// monotonicity bounds m_mu, M_mu of t -> mu(t^2) t.
struct DiffusionLaw {
  std::function<double(double)> mu;
  std::function<double(double)> mu_prime;
  std::function<double(double)> psi;
  double m_mu;
  double M_mu;
  double mu_at_zero;
  double mu_inf;  // infimum of mu over [0,inf)

  /// strong-monotonicity constant of the operator
  double nu() const { return m_mu; }
  /// Lipschitz constant of the operator
  double lipschitz() const { return 3.0 * M_mu; }
};

/// Benchmark problem with known exact solution. The load enters twice:
/// weakly through the exact flux (exact by construction, used for the load
/// pairing), and pointwise through g_pointwise (used only by the element
/// residual term of the error indicator).
struct ManufacturedProblem {
  DiffusionLaw law;
  std::function<double(Vec2)> exact_u;
  std::function<Vec2(Vec2)> exact_grad;
  /// g(x); the second argument is a local length scale (element diameter)
  /// used to pick finite-difference steps where g has no closed form.
  std::function<double(Vec2, double)> g_pointwise;
  std::string name;
};

/// mu(t) = 1/(t+1) + 1/2 with u*(x,y) = sin(pi x) sin(pi y).
ManufacturedProblem smooth_problem();

/// mu(t) = 1 + exp(-t) with the r^(2/3) reentrant-corner solution.
ManufacturedProblem singular_problem();

/// A manufactured problem bound to a P1 space (the space must outlive this
/// object; the problem is copied). Precomputes the load vector and the
/// per-element integrals of the exact flux, exact gradient, and g^2
/// (degree-5 quadrature), after which residuals, energies, and errors are
/// cheap elementwise sums.
class Discretization {
 public:
  Discretization(ManufacturedProblem prob, const P1Space& space);

  const P1Space& space() const { return *space_; }
  const ManufacturedProblem& problem() const { return prob_; }

  /// <F(u), v> = int mu(|grad u|^2) grad u . grad v - <g, v>
  double residual_apply(const DiscreteFunction& u, const DiscreteFunction& v) const;
  /// r_d = <F(u), phi_d> over interior dofs
  std::vector<double> residual_vector(const DiscreteFunction& u) const;
  /// H(u) = int psi(|grad u|^2) - <g, u>
  double energy(const DiscreteFunction& u) const;
  /// ||grad(u* - u)||_{L2}
  double h1_error(const DiscreteFunction& u) const;

  /// load vector b_i = <g, phi_i> over all vertices
  std::span<const double> load() const { return load_; }
  /// int_T g^2 dx (element residual data for the error indicator)
  double element_g2(int t) const { return g2_[t]; }

 private:
  ManufacturedProblem prob_;
  const P1Space* space_;
  std::vector<double> load_;
  std::vector<Vec2> flux_int_;   // int_T mu(|grad u*|^2) grad u*
  std::vector<Vec2> grad_int_;   // int_T grad u*
  std::vector<double> grad2_int_;  // int_T |grad u*|^2
  std::vector<double> g2_;

  void check_function(const DiscreteFunction& u, const char* where) const;
};

}  // namespace ilg
