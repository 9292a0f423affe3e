#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ilg/assembly.hpp"

namespace ilg {

struct StepResult {
  DiscreteFunction next;
  double delta_used;
};

/// One iterative linearization step. For Newton the configured damping is
/// attempted first; if the energy does not decrease the damping is halved and
/// the step re-solved, at most 10 times ("damping collapse" error after
/// that). Zarantonello and Kacanov never adapt.
StepResult step(const SchemeSpec& scheme, const Discretization& disc, const DiscreteFunction& u_n);

/// Empirical energy-decrease constant: min over steps of
/// (H(u^{n-1}) - H(u^n)) / ||u^n - u^{n-1}||_X^2. Steps with norm <= 1e-13
/// are skipped; returns nullopt when no step qualifies.
std::optional<double> estimate_CH(std::span<const double> energies,
                                  std::span<const double> step_norms);

/// Iteration history on one fixed mesh.
struct FixedMeshTrace {
  std::vector<std::vector<double>> iterates;  // vertex values of u^0 .. u^n
  std::vector<double> xi;                     // ||u^k - u^{k-1}||_X, k = 1..n
  std::vector<double> energy;                 // H(u^0) .. H(u^n)
};

/// Run max_steps linearization steps on a fixed mesh, stopping early once the
/// increment norm drops to stop_xi (0 = never).
FixedMeshTrace run_fixed(const SchemeSpec& scheme, const Discretization& disc,
                         const DiscreteFunction& u0, int max_steps, double stop_xi = 0.0);

/// Drop the stagnated tail where increments are below the round-off floor.
FixedMeshTrace truncate_at_noise(const FixedMeshTrace& trace, double floor = 1.0e-13);

/// Below this increment the per-step energy decrease ~ C_H xi^2 sinks under
/// the ~1e-16 |H| evaluation noise, so decrease ratios measured there are
/// meaningless. Traces are truncated here before fitting C_H.
constexpr double kEnergyNoiseFloor = 1.0e-6;

}  // namespace ilg
