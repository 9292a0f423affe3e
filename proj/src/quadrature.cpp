#include "ilg/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ilg {

namespace {

QuadRule make_rule(int degree) {
  QuadRule q;
  q.degree = degree;
  switch (degree) {
    case 1:
      q.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
      q.weights = {1.0};
      break;
    case 2:
      q.points = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
      q.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
      break;
    case 5: {
      // Radon's 7-point rule; every point is strictly interior.
      const double s15 = std::sqrt(15.0);
      const double g1 = (6.0 - s15) / 21.0;
      const double g2 = (6.0 + s15) / 21.0;
      const double w1 = (155.0 - s15) / 1200.0;
      const double w2 = (155.0 + s15) / 1200.0;
      q.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                  {1.0 - 2.0 * g1, g1, g1},
                  {g1, 1.0 - 2.0 * g1, g1},
                  {g1, g1, 1.0 - 2.0 * g1},
                  {1.0 - 2.0 * g2, g2, g2},
                  {g2, 1.0 - 2.0 * g2, g2},
                  {g2, g2, 1.0 - 2.0 * g2}};
      q.weights = {9.0 / 40.0, w1, w1, w1, w2, w2, w2};
      break;
    }
    default:
      throw std::invalid_argument("quadrature: unsupported degree " + std::to_string(degree));
  }
  return q;
}

}  // namespace

const QuadRule& rule(int degree) {
  static const QuadRule r1 = make_rule(1);
  static const QuadRule r2 = make_rule(2);
  static const QuadRule r5 = make_rule(5);
  switch (degree) {
    case 1:
      return r1;
    case 2:
      return r2;
    case 5:
      return r5;
    default:
      throw std::invalid_argument("quadrature: unsupported degree " + std::to_string(degree));
  }
}

double integrate(const Triangulation& mesh, int element,
                 const std::function<double(Vec2)>& f, const QuadRule& q) {
  const auto& tri = mesh.triangle(element);
  const Vec2 p0 = mesh.vertex(tri.v[0]);
  const Vec2 p1 = mesh.vertex(tri.v[1]);
  const Vec2 p2 = mesh.vertex(tri.v[2]);
  const double area = mesh.signed_area(element);
  double sum = 0.0;
  for (std::size_t k = 0; k < q.points.size(); ++k) {
    const auto& l = q.points[k];
    const Vec2 x = l[0] * p0 + l[1] * p1 + l[2] * p2;
    sum += q.weights[k] * f(x);
  }
  return area * sum;
}

}  // namespace ilg
