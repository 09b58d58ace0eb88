#pragma once

// Craig interpolation for the Sum rule: a formula over the shared
// vocabulary implied by A and inconsistent with B.

#include <cstddef>

#include "recmc/logic.hpp"
#include "recmc/smt.hpp"

namespace recmc {

struct InterpolationQuery {
  Formula a;
  Formula b;
  VarSet shared;
};

enum class ItpStrategy { Strongest, Farkas };

const char* itp_strategy_name(ItpStrategy s);

struct ItpStats {
  std::size_t queries = 0;
  std::size_t cubes = 0;
  std::size_t farkas_lemmas = 0;
  std::size_t projections = 0;  // cubes handled by exact elimination
};

/// Strongest: the projection of `a` onto the shared variables, built as a
/// disjunction of model-based projections of implicant cubes of `a`.
/// Farkas: per implicant cube of `a`, a conjunction of Farkas combinations
/// separating it from the cubes of `b`; cubes whose conflict is not
/// rational (integer gaps, divisibility) fall back to exact elimination.
///
/// Every result is checked against the contract before it is returned;
/// a violation is an Internal error.
class Interpolator {
 public:
  Interpolator(Solver& solver, ItpStrategy strategy) : s_(solver), strategy_(strategy) {}

  /// Throws NotUnsat when a & b is satisfiable; ResourceLimit propagates.
  Formula itp(const InterpolationQuery& q);

  ItpStrategy strategy() const { return strategy_; }
  const ItpStats& stats() const { return stats_; }

 private:
  Formula cube_itp(const std::vector<Literal>& cube, const InterpolationQuery& q);
  Formula eliminate_locals(const std::vector<Literal>& cube, const VarSet& shared);

  Solver& s_;
  ItpStrategy strategy_;
  ItpStats stats_;
};

/// (i) a => psi, (ii) psi & b unsat, (iii) free(psi) within shared.
bool is_interpolant(const InterpolationQuery& q, const Formula& psi, Solver& s);

}  // namespace recmc
