#pragma once

// Incremental bounded simplex over delta-rationals (Dutertre/de Moura).

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "recmc/rational.hpp"

namespace recmc::detail {

/// r + d*delta for an infinitesimal delta > 0.
struct DeltaRat {
  Rational r = 0;
  Rational d = 0;

  DeltaRat() = default;
  DeltaRat(Rational real, Rational delta = 0) : r(std::move(real)), d(std::move(delta)) {}

  DeltaRat operator+(const DeltaRat& o) const { return {r + o.r, d + o.d}; }
  DeltaRat operator-(const DeltaRat& o) const { return {r - o.r, d - o.d}; }
  DeltaRat operator*(const Rational& k) const { return {r * k, d * k}; }
  friend bool operator<(const DeltaRat& a, const DeltaRat& b) {
    return a.r < b.r || (a.r == b.r && a.d < b.d);
  }
  friend bool operator>(const DeltaRat& a, const DeltaRat& b) { return b < a; }
  friend bool operator<=(const DeltaRat& a, const DeltaRat& b) { return !(b < a); }
  friend bool operator>=(const DeltaRat& a, const DeltaRat& b) { return !(a < b); }
  friend bool operator==(const DeltaRat& a, const DeltaRat& b) { return a.r == b.r && a.d == b.d; }
};

/// Where a bound came from: constraint `id` whose term is alpha*v + c.
struct BoundReason {
  int id = -1;
  Rational alpha = 1;
};

class Simplex {
 public:
  using Row = std::map<int, Rational>;

  int new_var();
  /// Variable standing for sum(coeff * var); shared between identical forms.
  int slack_for(const std::vector<std::pair<int, Rational>>& lin);
  int num_vars() const { return static_cast<int>(vars_.size()); }

  bool assert_upper(int v, const DeltaRat& b, const BoundReason& why);
  bool assert_lower(int v, const DeltaRat& b, const BoundReason& why);

  /// Restores feasibility. Returns false on conflict, or when the pivot
  /// budget runs out (then `exhausted()` is set).
  bool check(std::size_t pivot_budget = 1000000);
  bool exhausted() const { return exhausted_; }

  /// Farkas multipliers per reason id (ids < 0 dropped) for the last conflict:
  /// sum(lambda_id * term_id) is a constant contradicting the bounds.
  const std::vector<std::pair<int, Rational>>& conflict() const { return conflict_; }
  /// Reason ids taking part in the last conflict (including negative ones).
  const std::vector<int>& conflict_ids() const { return conflict_ids_; }

  void push();
  void pop(std::size_t n = 1);
  std::size_t depth() const { return frames_.size(); }

  const DeltaRat& value(int v) const { return vars_[v].value; }
  /// Concrete rational values with delta instantiated small enough.
  std::vector<Rational> concrete_values() const;

  std::size_t pivots() const { return pivots_; }

 private:
  struct VarInfo {
    std::optional<DeltaRat> lower, upper;
    BoundReason lower_why, upper_why;
    DeltaRat value;
    bool basic = false;
  };
  struct Undo {
    int var;
    bool upper;
    std::optional<DeltaRat> bound;
    BoundReason why;
  };

  void update(int nonbasic, const DeltaRat& v);
  void pivot(int basic, int nonbasic);
  void pivot_and_update(int basic, int nonbasic, const DeltaRat& v);
  void explain_row(int basic, bool below);
  void explain_bounds(int v);
  void add_conflict(std::map<int, Rational>& acc, const BoundReason& why, const Rational& kappa, bool upper);
  void finish_conflict(std::map<int, Rational>& acc);

  std::vector<VarInfo> vars_;
  std::map<int, Row> rows_;  // basic var -> row over nonbasic vars
  std::map<std::vector<std::pair<int, std::string>>, int> slack_index_;
  std::vector<Undo> trail_;
  std::vector<std::size_t> frames_;
  std::vector<std::pair<int, Rational>> conflict_;
  std::vector<int> conflict_ids_;
  bool exhausted_ = false;
  std::size_t pivots_ = 0;
};

}  // namespace recmc::detail
