#pragma once

#include <vector>

#include "ilg/assembly.hpp"
#include "ilg/estimator.hpp"
#include "ilg/linearization.hpp"

namespace ilg {

struct ILGConfig {
  SchemeSpec scheme;
  double lambda = 0.5;   // adaptivity parameter: iterate while Xi > lambda * Upsilon
  double theta = 0.5;    // Doerfler parameter; 0 = uniform refinement
  double eps_tol = 0.0;  // estimator stopping tolerance; 0 = budget-driven
  int max_elements = 200000;
  int max_linear_steps_per_level = 500;
};

struct StepEntry {
  double xi;       // ||u^n - u^{n-1}||_X
  double upsilon;  // eta_N(u^n)
  double energy;   // H(u^n)
};

struct LevelRecord {
  int level;
  int n_elements;
  int n_dofs;
  int iterations;  // #It(N)
  double estimator;
  double h1_error;
  double energy;
  double energy_initial;  // H(u^0_N)
  double xi_final;
  std::vector<StepEntry> steps;
};

struct RunRecord {
  std::vector<LevelRecord> levels;
  bool exact_solution_found = false;
};

/// The adaptive ILG loop: starting from the L-shaped initial mesh and u = 0,
/// iterate the linearization on each mesh while Xi > lambda * Upsilon, then
/// Doerfler-mark, bisect, and transfer the iterate by nested-space inclusion.
/// Stops when the estimator drops below eps_tol, an exact discrete solution
/// is detected (estimator 0), or further refinement would exceed the element
/// budget.
RunRecord run(const ILGConfig& cfg, const ManufacturedProblem& prob);

enum class SlopeField { Estimator, Error };

/// Least-squares slope of log(field) against log(elements) over the levels
/// with min_elements <= |T_N| <= max_elements. Requires >= 3 such levels.
double slope(const RunRecord& record, SlopeField field, double min_elements, double max_elements);

}  // namespace ilg
