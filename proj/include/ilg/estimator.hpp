#pragma once

#include <cmath>
#include <vector>

#include "ilg/model.hpp"

namespace ilg {

/// Squared residual indicators eta(T,u)^2 per element.
struct IndicatorField {
  std::vector<double> eta2;
  double total2 = 0.0;

  double global() const { return std::sqrt(total2); }
};

/// eta(T,u)^2 = h_T^2 ||g||_T^2 + h_T ||[[mu(|grad u|^2) grad u]]||^2 on
/// interior edges of T. The flux of a P1 iterate is elementwise constant, so
/// every edge jump is a single scalar; boundary edges contribute nothing.
IndicatorField estimate(const Discretization& disc, const DiscreteFunction& u);

/// Doerfler marking: the minimal prefix of elements, sorted by decreasing
/// indicator (ties by lower index), whose squared indicators sum to at least
/// theta * total. theta = 0 marks every element (uniform refinement mode).
MarkedSet mark(const IndicatorField& ind, double theta);

}  // namespace ilg
