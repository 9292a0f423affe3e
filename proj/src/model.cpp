#include "ilg/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ilg/quadrature.hpp"

namespace ilg {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

ManufacturedProblem smooth_problem() {
  ManufacturedProblem p;
  p.name = "smooth";
  p.law.mu = [](double t) { return 1.0 / (t + 1.0) + 0.5; };
  p.law.mu_prime = [](double t) { return -1.0 / ((t + 1.0) * (t + 1.0)); };
  p.law.psi = [](double s) { return 0.5 * std::log1p(s) + 0.25 * s; };
  // d/dt [mu(t^2) t] = (1-s)/(1+s)^2 + 1/2 with s = t^2; minimum 3/8 at s = 3
  p.law.m_mu = 3.0 / 8.0;
  p.law.M_mu = 1.5;
  p.law.mu_at_zero = 1.5;
  p.law.mu_inf = 0.5;

  p.exact_u = [](Vec2 x) { return std::sin(kPi * x.x) * std::sin(kPi * x.y); };
  p.exact_grad = [](Vec2 x) -> Vec2 {
    return {kPi * std::cos(kPi * x.x) * std::sin(kPi * x.y),
            kPi * std::sin(kPi * x.x) * std::cos(kPi * x.y)};
  };
  p.g_pointwise = [mu = p.law.mu, mu_prime = p.law.mu_prime](Vec2 x, double) {
    const double sx = std::sin(kPi * x.x), cx = std::cos(kPi * x.x);
    const double sy = std::sin(kPi * x.y), cy = std::cos(kPi * x.y);
    const double u = sx * sy;
    const Vec2 grad{kPi * cx * sy, kPi * sx * cy};
    const double uxx = -kPi * kPi * u;
    const double uyy = -kPi * kPi * u;
    const double uxy = kPi * kPi * cx * cy;
    const Vec2 hess_grad{uxx * grad.x + uxy * grad.y, uxy * grad.x + uyy * grad.y};
    const double q = dot(grad, grad);
    return -2.0 * mu_prime(q) * dot(hess_grad, grad) - mu(q) * (uxx + uyy);
  };
  return p;
}

namespace {

// r^(2/3) sin(2 phi/3) cos(phi) and its polar derivatives; phi in [0, 3pi/2]
struct CornerFactor {
  double value, d_r, d_phi;
};

CornerFactor corner_factor(double r, double phi) {
  const double s = std::sin(2.0 * phi / 3.0);
  const double c = std::cos(2.0 * phi / 3.0);
  const double r23 = std::cbrt(r * r);  // r^(2/3)
  const double cphi = std::cos(phi);
  const double sphi = std::sin(phi);
  CornerFactor f;
  f.value = r23 * s * cphi;
  f.d_r = (2.0 / 3.0) * r23 / r * s * cphi;
  f.d_phi = r23 * ((2.0 / 3.0) * c * cphi - s * sphi);
  return f;
}

void polar_of(Vec2 x, double& r, double& phi) {
  r = std::hypot(x.x, x.y);
  if (r == 0.0)
    throw std::domain_error("singular problem: evaluation at the reentrant corner r = 0");
  phi = std::atan2(x.y, x.x);
  if (phi < 0.0) phi += 2.0 * kPi;
}

}  // namespace

ManufacturedProblem singular_problem() {
  ManufacturedProblem p;
  p.name = "singular";
  p.law.mu = [](double t) { return 1.0 + std::exp(-t); };
  p.law.mu_prime = [](double t) { return -std::exp(-t); };
  p.law.psi = [](double s) { return 0.5 * (s + 1.0 - std::exp(-s)); };
  // d/dt [mu(t^2) t] = 1 + (1-2s) e^{-s} with s = t^2; minimum at s = 3/2
  p.law.m_mu = 1.0 - 2.0 * std::exp(-1.5);
  p.law.M_mu = 2.0;
  p.law.mu_at_zero = 2.0;
  p.law.mu_inf = 1.0;

  p.exact_u = [](Vec2 x) {
    double r, phi;
    polar_of(x, r, phi);
    const double bubble = (1.0 - x.x * x.x) * (1.0 - x.y * x.y);
    return corner_factor(r, phi).value * bubble;
  };
  p.exact_grad = [](Vec2 x) -> Vec2 {
    double r, phi;
    polar_of(x, r, phi);
    const CornerFactor f = corner_factor(r, phi);
    const double cphi = std::cos(phi);
    const double sphi = std::sin(phi);
    const Vec2 grad_f{f.d_r * cphi - f.d_phi * sphi / r, f.d_r * sphi + f.d_phi * cphi / r};
    const double bubble = (1.0 - x.x * x.x) * (1.0 - x.y * x.y);
    const Vec2 grad_bubble{-2.0 * x.x * (1.0 - x.y * x.y), -2.0 * x.y * (1.0 - x.x * x.x)};
    return {grad_f.x * bubble + f.value * grad_bubble.x,
            grad_f.y * bubble + f.value * grad_bubble.y};
  };
  // No closed form for g: central finite differences of the analytic flux.
  p.g_pointwise = [mu = p.law.mu, exact_grad = p.exact_grad](Vec2 x, double h_elem) {
    const auto flux = [&](Vec2 y) -> Vec2 {
      const Vec2 g = exact_grad(y);
      return mu(dot(g, g)) * g;
    };
    const double h = 1.0e-6 * h_elem;
    const double div = (flux({x.x + h, x.y}).x - flux({x.x - h, x.y}).x +
                        flux({x.x, x.y + h}).y - flux({x.x, x.y - h}).y) /
                       (2.0 * h);
    return -div;
  };
  return p;
}

Discretization::Discretization(ManufacturedProblem prob, const P1Space& space)
    : prob_(std::move(prob)), space_(&space) {
  const int nt = space.n_elements();
  const QuadRule& q5 = rule(5);
  load_.assign(space.n_vertices(), 0.0);
  flux_int_.resize(nt);
  grad_int_.resize(nt);
  grad2_int_.resize(nt);
  g2_.resize(nt);

  for (int t = 0; t < nt; ++t) {
    const auto& el = space.elements()[t];
    const Vec2 p0 = space.mesh().vertex(el.v[0]);
    const Vec2 p1 = space.mesh().vertex(el.v[1]);
    const Vec2 p2 = space.mesh().vertex(el.v[2]);
    Vec2 flux_sum{0.0, 0.0};
    Vec2 grad_sum{0.0, 0.0};
    double grad2_sum = 0.0;
    double g2_sum = 0.0;
    for (std::size_t k = 0; k < q5.points.size(); ++k) {
      const auto& l = q5.points[k];
      const Vec2 x = l[0] * p0 + l[1] * p1 + l[2] * p2;
      const double w = q5.weights[k];
      const Vec2 g = prob_.exact_grad(x);
      const double mu = prob_.law.mu(dot(g, g));
      flux_sum = flux_sum + (w * mu) * g;
      grad_sum = grad_sum + w * g;
      grad2_sum += w * dot(g, g);
      const double gval = prob_.g_pointwise(x, el.h);
      g2_sum += w * gval * gval;
    }
    flux_int_[t] = el.area * flux_sum;
    grad_int_[t] = el.area * grad_sum;
    grad2_int_[t] = el.area * grad2_sum;
    g2_[t] = el.area * g2_sum;
    for (int k = 0; k < 3; ++k) load_[el.v[k]] += dot(el.grad[k], flux_int_[t]);
  }
}

void Discretization::check_function(const DiscreteFunction& u, const char* where) const {
  if (u.space != space_ || static_cast<int>(u.values.size()) != space_->n_vertices())
    throw std::invalid_argument(std::string(where) + ": function bound to a different mesh");
}

double Discretization::residual_apply(const DiscreteFunction& u, const DiscreteFunction& v) const {
  check_function(u, "residual_apply");
  check_function(v, "residual_apply");
  double sum = 0.0;
  for (int t = 0; t < space_->n_elements(); ++t) {
    const auto& el = space_->elements()[t];
    const Vec2 gu = space_->gradient(t, u.values);
    const Vec2 gv = space_->gradient(t, v.values);
    sum += el.area * prob_.law.mu(dot(gu, gu)) * dot(gu, gv);
  }
  for (int i = 0; i < space_->n_vertices(); ++i) sum -= load_[i] * v.values[i];
  return sum;
}

std::vector<double> Discretization::residual_vector(const DiscreteFunction& u) const {
  check_function(u, "residual_vector");
  std::vector<double> r(space_->n_interior(), 0.0);
  for (int t = 0; t < space_->n_elements(); ++t) {
    const auto& el = space_->elements()[t];
    const Vec2 gu = space_->gradient(t, u.values);
    const double c = el.area * prob_.law.mu(dot(gu, gu));
    for (int k = 0; k < 3; ++k) {
      const int d = space_->dof_of_vertex(el.v[k]);
      if (d >= 0) r[d] += c * dot(gu, el.grad[k]);
    }
  }
  for (int d = 0; d < space_->n_interior(); ++d) r[d] -= load_[space_->vertex_of_dof(d)];
  return r;
}

double Discretization::energy(const DiscreteFunction& u) const {
  check_function(u, "energy");
  double sum = 0.0;
  for (int t = 0; t < space_->n_elements(); ++t) {
    const auto& el = space_->elements()[t];
    const Vec2 gu = space_->gradient(t, u.values);
    sum += el.area * prob_.law.psi(dot(gu, gu));
  }
  for (int i = 0; i < space_->n_vertices(); ++i) sum -= load_[i] * u.values[i];
  return sum;
}

double Discretization::h1_error(const DiscreteFunction& u) const {
  check_function(u, "h1_error");
  double sum = 0.0;
  for (int t = 0; t < space_->n_elements(); ++t) {
    const auto& el = space_->elements()[t];
    const Vec2 gu = space_->gradient(t, u.values);
    const double contrib = grad2_int_[t] - 2.0 * dot(gu, grad_int_[t]) + el.area * dot(gu, gu);
    sum += std::max(contrib, 0.0);
  }
  return std::sqrt(sum);
}

}  // namespace ilg
