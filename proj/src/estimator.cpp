#include "ilg/estimator.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ilg {

IndicatorField estimate(const Discretization& disc, const DiscreteFunction& u) {
  const P1Space& space = disc.space();
  if (u.space != &space)
    throw std::invalid_argument("estimate: function bound to a different mesh");
  const int nt = space.n_elements();

  std::vector<Vec2> flux(nt);
  for (int t = 0; t < nt; ++t) {
    const Vec2 g = space.gradient(t, u.values);
    flux[t] = disc.problem().law.mu(dot(g, g)) * g;
  }

  IndicatorField ind;
  ind.eta2.assign(nt, 0.0);
  for (int t = 0; t < nt; ++t) {
    const auto& el = space.elements()[t];
    double jumps = 0.0;
    for (int k = 0; k < 3; ++k) {
      const auto& e = space.edges()[space.element_edges(t)[k]];
      if (e.right < 0) continue;  // boundary edge
      const int other = (e.left == t) ? e.right : e.left;
      const double jump = dot(flux[t] - flux[other], e.normal);
      jumps += e.length * jump * jump;
    }
    ind.eta2[t] = el.h * el.h * disc.element_g2(t) + el.h * jumps;
    ind.total2 += ind.eta2[t];
  }
  return ind;
}

MarkedSet mark(const IndicatorField& ind, double theta) {
  if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("mark: theta must be in [0,1]");
  const int nt = static_cast<int>(ind.eta2.size());
  MarkedSet marked;

  if (theta == 0.0) {
    marked.elements.resize(nt);
    std::iota(marked.elements.begin(), marked.elements.end(), 0);
    return marked;
  }

  std::vector<int> order(nt);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ind.eta2[a] != ind.eta2[b]) return ind.eta2[a] > ind.eta2[b];
    return a < b;
  });

  // accumulate the total in marking order so theta = 1 stops exactly at the
  // support of the indicator field
  double total = 0.0;
  for (int t : order) total += ind.eta2[t];
  const double target = theta * total;
  double acc = 0.0;
  for (int t : order) {
    if (acc >= target) break;
    marked.elements.push_back(t);
    acc += ind.eta2[t];
  }
  std::sort(marked.elements.begin(), marked.elements.end());
  return marked;
}

}  // namespace ilg
