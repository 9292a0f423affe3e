#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ilg/mesh.hpp"

namespace ilg {

/// Quadrature rule on the reference triangle in barycentric coordinates.
/// Weights sum to 1 and are scaled by the physical area on use.
struct QuadRule {
  int degree;  // exactness degree
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Supported degrees: 1 (centroid), 2 (edge midpoints), 5 (7-point Radon).
const QuadRule& rule(int degree);

double integrate(const Triangulation& mesh, int element,
                 const std::function<double(Vec2)>& f, const QuadRule& q);

}  // namespace ilg
