#pragma once

// Bounded safety: the Sum / Reach / Query rule system over a queue of
// bounded reachability queries, with model-based projection in Reach and
// Query.

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "recmc/interpolation.hpp"
#include "recmc/program.hpp"
#include "recmc/qe.hpp"
#include "recmc/smt.hpp"

namespace recmc {

struct EngineOptions {
  ProjStrategy proj = ProjStrategy::Mbp;
  ItpStrategy itp = ItpStrategy::Farkas;
  std::size_t step_budget = 200000;  // rule applications over a whole check
  /// Re-checks the pending-query lemma for every queued query after every
  /// step, and the Safe premise on Safe. Slow; meant for tests.
  bool check_invariants = false;
  SolverLimits limits;
};

struct QueryOrigin {
  int query = -1;
  std::size_t path = 0;
  std::size_t call = 0;
};

/// <proc, phi, bound>: does proc have an execution within the bound whose
/// formals satisfy phi?
struct BoundedQuery {
  int id = 0;
  std::string proc;
  Formula phi;
  int bound = 0;
  std::optional<QueryOrigin> origin;
};

enum class Rule { Init, Sum, Reach, Query, Safe, Unsafe };

const char* rule_name(Rule r);

struct TraceEvent {
  std::size_t step = 0;
  int level = 0;  // the bound n of the enclosing run
  Rule rule = Rule::Init;
  int query = -1;
  std::string proc;
  int bound = 0;
  std::string outcome;
  /// Sum/Reach: the new fact. Query: the new query's formula (over the
  /// callee's formals). Init: the root query's formula.
  Formula formula;
  std::string target;   // Query: callee
  int new_query = -1;   // Query: id of the created query
  std::vector<int> answered;
};

struct EngineStats {
  std::size_t sum = 0;
  std::size_t reach = 0;
  std::size_t query = 0;
  std::size_t swept = 0;        // queries answered by a sweep, not counting the picked one
  std::size_t projections = 0;  // project() calls
  std::size_t interpolants = 0;
  std::size_t solver_checks = 0;
  std::size_t runs = 0;         // bounded-safety rounds
  double seconds = 0;           // wall time; in a Verdict it covers the whole check

  std::size_t steps() const { return sum + reach + query; }
};

enum class BndVerdict { Safe, Unsafe };

/// Owns rho, sigma and the solver across the rounds of one check.
class Engine {
 public:
  using Observer = std::function<void(const Engine&, const TraceEvent&)>;

  Engine(const Program& prog, Formula safe, EngineOptions opts = {});

  /// One bounded-safety round at bound n. Throws ResourceLimit when the
  /// step budget or a solver limit runs out.
  BndVerdict run(int n);

  const Program& program() const { return prog_; }
  const Formula& safe() const { return safe_; }
  const EngineOptions& options() const { return opts_; }
  AssertionMap& rho() { return rho_; }
  AssertionMap& sigma() { return sigma_; }
  const AssertionMap& rho() const { return rho_; }
  const AssertionMap& sigma() const { return sigma_; }
  const std::vector<BoundedQuery>& queue() const { return queue_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  EngineStats stats() const;
  Solver& solver() { return solver_; }

  void set_observer(Observer o) { observer_ = std::move(o); }
  void set_record_trace(bool on) { record_ = on; }

  /// The pending-query lemma for one query: over-approximation sat with
  /// phi, under-approximation unsat with it.
  bool pending(const BoundedQuery& q);

 private:
  BoundedQuery pick_next() const;
  void step(const BoundedQuery& q);
  bool try_reach(const BoundedQuery& q, TraceEvent& ev);
  bool try_sum(const BoundedQuery& q, TraceEvent& ev);
  void do_query(const BoundedQuery& q, TraceEvent& ev);
  void remove(int id);
  Formula project_counted(const std::vector<Var>& vars, const Formula& matrix, const Model& m);
  SatResult sat(const Formula& f);
  void emit(TraceEvent ev);

  const Program& prog_;
  Formula safe_;
  EngineOptions opts_;
  Solver solver_;
  Interpolator itp_;
  AssertionMap rho_, sigma_;
  std::vector<BoundedQuery> queue_;
  std::vector<TraceEvent> trace_;
  EngineStats stats_;
  int next_id_ = 0;
  int level_ = 0;
  bool record_ = true;
  Observer observer_;
};

}  // namespace recmc
