#pragma once

// Satisfiability for quantifier-free, call-free formulas in boolean,
// rational and integer modes.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "recmc/logic.hpp"

namespace recmc {

enum class SatStatus { Sat, Unsat, Unknown };

const char* sat_status_name(SatStatus s);

/// Nonnegative multipliers (any sign for equalities) such that the weighted
/// sum of the literal terms is a constant contradicting the comparisons.
struct FarkasCert {
  std::vector<std::pair<Literal, Rational>> terms;
};

/// True iff `c` sums to `k op 0` with k a constant that violates op.
bool replay_farkas(const FarkasCert& c);

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  Model model;                            // Sat only
  std::vector<FarkasCert> certificates;   // rational theory conflicts met on the way to Unsat
  std::string reason;                     // Unknown only

  bool sat() const { return status == SatStatus::Sat; }
  bool unsat() const { return status == SatStatus::Unsat; }
};

struct SolverLimits {
  std::size_t max_conflicts = 200000;
  std::size_t max_branches = 4000;      // branch-and-bound nodes per integer check
  std::size_t max_pivots = 2000000;
  std::size_t max_certificates = 16;
};

struct SolverStats {
  std::size_t checks = 0;
  std::size_t sat = 0;
  std::size_t unsat = 0;
  std::size_t unknown = 0;
  std::size_t conflicts = 0;
  std::size_t theory_conflicts = 0;
  std::size_t integer_checks = 0;
};

class Solver {
 public:
  explicit Solver(Sort mode, SolverLimits limits = {});

  Sort mode() const { return mode_; }
  const SolverLimits& limits() const { return limits_; }
  const SolverStats& stats() const { return stats_; }

  /// Never reports Sat/Unsat wrongly; Unknown when a budget runs out.
  SatResult check_sat(const Formula& f);
  /// a => b. Throws ResourceLimit instead of guessing.
  bool entails(const Formula& a, const Formula& b);
  bool equivalent(const Formula& a, const Formula& b);
  /// Drops disjuncts and conjuncts made redundant by their siblings,
  /// bottom up. The result is equivalent to f.
  Formula simplify(const Formula& f);
  /// Solves f, then f & !blocking(M), ... until Unsat or `limit` models.
  std::vector<Model> enumerate_models(const Formula& f,
                                      const std::function<Formula(const Model&)>& blocking,
                                      std::size_t limit);

 private:
  Sort mode_;
  SolverLimits limits_;
  SolverStats stats_;
};

SatResult check_sat(const Formula& f, Sort mode);
bool entails(const Formula& a, const Formula& b, Sort mode);

/// Rational relaxation of the arithmetic literals of a conjunction; returns
/// a certificate when they are jointly infeasible over the rationals.
std::optional<FarkasCert> farkas_conflict(const std::vector<Literal>& lits);

}  // namespace recmc
