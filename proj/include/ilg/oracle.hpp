#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ilg/linearization.hpp"

namespace ilg {

/// Reference discrete solution u*_N computed independently of the iterative
/// schemes: undamped Newton with energy backtracking, dense Cholesky solve
/// per step, iterated until the Euclidean norm of the interior residual
/// vector is below 1e-13. Deterministic from the zero initial guess.
struct OracleSolution {
  std::vector<double> values;  // per vertex
  double residual_norm;
  int newton_steps;
};

/// Requires n_interior <= 5000 (dense-feasible). Throws on non-convergence
/// within 100 Newton steps.
OracleSolution oracle_solve(const Discretization& disc);

struct CheckResult {
  std::string name;
  double bound;
  double measured;
  bool pass;
};

/// max_n ||u*_N - u^n||_X / ||u^n - u^{n-1}||_X <= 1 + beta/nu over the
/// trace; steps with increment below 1e-12 are skipped.
CheckResult check_lemma21(const Discretization& disc, const FixedMeshTrace& trace,
                          const OracleSolution& oracle, double nu, double beta);

/// nu/2 ||u*_N - u||^2 <= H(u) - H(u*_N) <= L_F/2 ||u*_N - u||^2.
CheckResult check_energy_sandwich(const Discretization& disc, const OracleSolution& oracle,
                                  const DiscreteFunction& u);

/// Sandwich on n_samples random perturbations u*_N + eps w at
/// eps in {1e-3, 1e-2, 1e-1}; deterministic for a fixed seed.
std::vector<CheckResult> check_energy_sandwich_sampled(const Discretization& disc,
                                                       const OracleSolution& oracle,
                                                       int n_samples, unsigned seed);

/// Tail constant L_F (1 + beta/nu)^2 / (2 C_H).
double tail_constant(double lipschitz, double nu, double beta, double c_h);

/// Tail bound sum_{j>k} Xi_j^2 <= C Xi_k^2 for every k, and the geometric
/// decay Xi_n^2 <= C (1 + 1/C)^{2-n} Xi_1^2 for every n >= 2. The trace
/// should be truncated at the round-off floor first.
std::vector<CheckResult> check_tail_bounds(const FixedMeshTrace& trace, double c);

/// The empirical theory-check battery (quick or full).
std::vector<CheckResult> verify_suite(bool quick);

void print_report(const std::vector<CheckResult>& results, std::ostream& os);
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace ilg
