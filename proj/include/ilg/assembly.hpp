#pragma once

#include <span>
#include <vector>

#include "ilg/model.hpp"
#include "ilg/space.hpp"

namespace ilg {

enum class SchemeKind { Zarantonello, Kacanov, Newton };

/// Linearization scheme selector. delta is the Zarantonello step size or the
/// initial Newton damping factor; the Kacanov iteration ignores it.
struct SchemeSpec {
  SchemeKind kind = SchemeKind::Kacanov;
  double delta = 1.0;
};

const char* scheme_name(SchemeKind kind);

/// Coercivity and boundedness constants (alpha, beta) of the scheme's
/// bilinear form in the H1 seminorm, valid for the decreasing diffusion laws
/// used here.
struct SchemeConstants {
  double alpha;
  double beta;
};
SchemeConstants scheme_constants(const SchemeSpec& scheme, const DiffusionLaw& law);

/// Symmetric positive definite system over interior dofs, stored against the
/// space's shared CSR pattern.
struct SparseSystem {
  const P1Space* space = nullptr;
  std::vector<double> values;  // aligned with space->col_idx()
  std::vector<double> rhs;

  std::vector<double> multiply(std::span<const double> x) const;
};

/// Assemble the linear system whose solution is the next iterate u^{n+1}.
SparseSystem assemble(const SchemeSpec& scheme, const Discretization& disc,
                      const DiscreteFunction& u_n);

struct SolveStats {
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Preconditioned (Jacobi) conjugate gradients to relative residual 1e-12.
/// Throws on non-convergence within 10 n iterations.
std::vector<double> solve(const SparseSystem& sys, std::span<const double> guess,
                          SolveStats* stats = nullptr);

}  // namespace ilg
