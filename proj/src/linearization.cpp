#include "ilg/linearization.hpp"

#include <cmath>
#include <stdexcept>

namespace ilg {

namespace {

DiscreteFunction solve_update(const SchemeSpec& scheme, const Discretization& disc,
                              const DiscreteFunction& u_n) {
  const SparseSystem sys = assemble(scheme, disc, u_n);
  const std::vector<double> guess = gather_interior(disc.space(), u_n);
  return from_interior(disc.space(), solve(sys, guess));
}

}  // namespace

StepResult step(const SchemeSpec& scheme, const Discretization& disc,
                const DiscreteFunction& u_n) {
  if (scheme.kind != SchemeKind::Newton)
    return {solve_update(scheme, disc, u_n), scheme.delta};

  const double h0 = disc.energy(u_n);
  const double slack = 1.0e-13 * (1.0 + std::abs(h0));
  SchemeSpec damped = scheme;
  for (int halvings = 0; halvings <= 10; ++halvings) {
    DiscreteFunction candidate = solve_update(damped, disc, u_n);
    if (disc.energy(candidate) <= h0 + slack) return {std::move(candidate), damped.delta};
    damped.delta *= 0.5;
  }
  throw std::runtime_error("step: Newton damping collapse (no energy decrease after 10 halvings)");
}

std::optional<double> estimate_CH(std::span<const double> energies,
                                  std::span<const double> step_norms) {
  if (energies.size() != step_norms.size() + 1)
    throw std::invalid_argument("estimate_CH: need one more energy value than step norms");
  std::optional<double> best;
  for (std::size_t k = 0; k < step_norms.size(); ++k) {
    if (step_norms[k] <= 1.0e-13) continue;
    const double ratio = (energies[k] - energies[k + 1]) / (step_norms[k] * step_norms[k]);
    if (!best || ratio < *best) best = ratio;
  }
  return best;
}

FixedMeshTrace run_fixed(const SchemeSpec& scheme, const Discretization& disc,
                         const DiscreteFunction& u0, int max_steps, double stop_xi) {
  FixedMeshTrace trace;
  trace.iterates.push_back(u0.values);
  trace.energy.push_back(disc.energy(u0));
  DiscreteFunction u = u0;
  for (int n = 0; n < max_steps; ++n) {
    StepResult result = step(scheme, disc, u);
    const double xi = h1_distance(disc.space(), result.next, u);
    u = std::move(result.next);
    trace.iterates.push_back(u.values);
    trace.xi.push_back(xi);
    trace.energy.push_back(disc.energy(u));
    if (stop_xi > 0.0 && xi <= stop_xi) break;
  }
  return trace;
}

FixedMeshTrace truncate_at_noise(const FixedMeshTrace& trace, double floor) {
  std::size_t keep = trace.xi.size();
  for (std::size_t k = 0; k < trace.xi.size(); ++k) {
    if (trace.xi[k] <= floor) {
      keep = k;
      break;
    }
  }
  FixedMeshTrace out;
  out.iterates.assign(trace.iterates.begin(), trace.iterates.begin() + keep + 1);
  out.xi.assign(trace.xi.begin(), trace.xi.begin() + keep);
  out.energy.assign(trace.energy.begin(), trace.energy.begin() + keep + 1);
  return out;
}

}  // namespace ilg
