#include "ilg/driver.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace ilg {

RunRecord run(const ILGConfig& cfg, const ManufacturedProblem& prob) {
  if (cfg.lambda <= 0.0) throw std::invalid_argument("run: lambda must be positive");
  if (cfg.theta < 0.0 || cfg.theta > 1.0)
    throw std::invalid_argument("run: theta must be in [0,1]");
  if (cfg.max_elements <= 0 || cfg.max_linear_steps_per_level <= 0)
    throw std::invalid_argument("run: budgets must be positive");

  RunRecord record;
  Triangulation mesh = make_lshape_initial();
  std::vector<double> carried;  // iterate transferred across levels

  for (int level = 0;; ++level) {
    const P1Space space(mesh);
    const Discretization disc(prob, space);

    DiscreteFunction u = zero_function(space);
    if (!carried.empty()) u.values = carried;

    LevelRecord rec;
    rec.level = level;
    rec.n_elements = space.n_elements();
    rec.n_dofs = space.n_interior();
    rec.energy_initial = disc.energy(u);

    double xi = 1.0;       // Xi^0
    double upsilon = 0.0;  // Upsilon^0
    IndicatorField ind;
    int n = 0;
    while (xi > cfg.lambda * upsilon) {
      if (n >= cfg.max_linear_steps_per_level)
        throw std::runtime_error("run: linearization loop exceeded " +
                                 std::to_string(cfg.max_linear_steps_per_level) +
                                 " steps on level " + std::to_string(level));
      StepResult result = step(cfg.scheme, disc, u);
      xi = h1_distance(space, result.next, u);
      u = std::move(result.next);
      ind = estimate(disc, u);
      upsilon = ind.global();
      ++n;
      rec.steps.push_back({xi, upsilon, disc.energy(u)});
    }

    rec.iterations = n;
    rec.estimator = upsilon;
    rec.xi_final = xi;
    rec.h1_error = disc.h1_error(u);
    rec.energy = rec.steps.back().energy;
    record.levels.push_back(rec);

    if (upsilon == 0.0) {
      record.exact_solution_found = true;
      break;
    }
    if (cfg.eps_tol > 0.0 && upsilon < cfg.eps_tol) break;

    RefineResult refined = refine(mesh, mark(ind, cfg.theta));
    if (refined.mesh.triangle_count() > cfg.max_elements) break;
    carried = prolong(u.values, refined);
    mesh = std::move(refined.mesh);
  }
  return record;
}

double slope(const RunRecord& record, SlopeField field, double min_elements,
             double max_elements) {
  std::vector<double> lx, ly;
  for (const auto& lvl : record.levels) {
    if (lvl.n_elements < min_elements || lvl.n_elements > max_elements) continue;
    const double value = (field == SlopeField::Estimator) ? lvl.estimator : lvl.h1_error;
    if (value <= 0.0) continue;
    lx.push_back(std::log(static_cast<double>(lvl.n_elements)));
    ly.push_back(std::log(value));
  }
  const std::size_t m = lx.size();
  if (m < 3) throw std::invalid_argument("slope: need at least 3 levels in the window");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace ilg
