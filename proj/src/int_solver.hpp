#pragma once

// Satisfiability of conjunctions of linear integer constraints.

#include <cstddef>
#include <vector>

#include "recmc/logic.hpp"

namespace recmc::detail {

/// `term op 0`.
struct LinCon {
  LinTerm term;
  Cmp op = Cmp::Le;
};

enum class IntOutcome { Sat, Unsat, Unknown };

struct IntResult {
  IntOutcome status = IntOutcome::Unknown;
  Model model;  // integer values for every variable of the input
  std::size_t branches = 0;
};

/// Exact equality elimination, gcd tightening, splitting of terms confined
/// to a short range, then branch and bound, and a Cooper search when branch
/// and bound runs out.
IntResult solve_integer(const std::vector<LinCon>& cons, std::size_t branch_budget);

}  // namespace recmc::detail
