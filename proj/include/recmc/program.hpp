#pragma once

// Programs as lists of procedures with logical bodies, bounded assertion
// maps (rho/sigma), environments and their application to bodies.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recmc/logic.hpp"

namespace recmc {

struct Procedure {
  std::string name;
  std::vector<Var> inputs;
  std::vector<Var> outputs;
  std::vector<Var> locals;
  Formula body;
  std::vector<Path> paths;  // filled by Program::finalize

  std::vector<Var> formals() const;
};

class Program {
 public:
  Sort mode = Sort::Int;
  std::string main;

  void add(Procedure p);
  /// Computes paths and checks well-formedness. Throws ValidationError.
  void finalize(std::size_t path_limit = kDefaultPathLimit);

  const std::vector<Procedure>& procedures() const { return procs_; }
  const Procedure& proc(const std::string& name) const;
  bool has(const std::string& name) const { return index_.count(name) != 0; }
  const Procedure& main_proc() const { return proc(main); }

 private:
  std::vector<Procedure> procs_;
  std::map<std::string, std::size_t> index_;
};

// ---- assertion maps ----------------------------------------------------------

/// Where a reachability fact came from: the path and, per call site, the
/// callee facts its instantiation was drawn from.
struct CallSource {
  std::string callee;
  std::vector<std::pair<int, int>> facts;  // (bound, fact id) candidates
};

struct Provenance {
  std::size_t path = 0;
  std::vector<CallSource> calls;
};

struct Fact {
  int id = 0;
  Formula formula;
  std::optional<Provenance> provenance;
};

/// (procedure, bound) -> facts. Facts are never removed; syntactic
/// duplicates are dropped on insertion.
class AssertionMap {
 public:
  /// Returns the id of the new fact, or nullopt if it was already present.
  std::optional<int> add(const std::string& proc, int bound, const Formula& f,
                         std::optional<Provenance> prov = std::nullopt);

  const std::vector<Fact>& at(const std::string& proc, int bound) const;
  const Fact& fact(const std::string& proc, int bound, int id) const;
  bool contains(const std::string& proc, int bound, const Formula& f) const;
  /// Largest bound with an entry for proc, or -1.
  int max_bound(const std::string& proc) const;
  std::size_t size() const { return count_; }

  const std::map<std::pair<std::string, int>, std::vector<Fact>>& entries() const { return entries_; }

 private:
  std::map<std::pair<std::string, int>, std::vector<Fact>> entries_;
  std::size_t count_ = 0;
};

// ---- environments ------------------------------------------------------------

/// Procedure name -> formula over that procedure's formals. Missing entries
/// read as `fallback`.
class Environment {
 public:
  explicit Environment(Formula fallback = Formula::top()) : fallback_(std::move(fallback)) {}

  void set(const std::string& proc, Formula f) { map_[proc] = std::move(f); }
  const Formula& get(const std::string& proc) const;
  const std::map<std::string, Formula>& entries() const { return map_; }

 private:
  std::map<std::string, Formula> map_;
  Formula fallback_;
};

/// Disjunction of rho facts at bounds <= b; bottom for b = -1.
Environment u_env(const AssertionMap& rho, int b, const Program& prog);
/// Conjunction of sigma facts at bounds >= b; bottom for b = -1.
Environment o_env(const AssertionMap& sigma, int b, const Program& prog);

/// A callee's formula with its formals renamed to the call arguments.
Formula instantiate_call(const CallAtom& c, const Formula& callee_formula, const Program& prog);
/// Replaces every call atom by the environment's formula for the callee.
Formula instantiate(const Formula& f, const Environment& env, const Program& prog);
Formula instantiate(const Path& p, const Environment& env, const Program& prog);
/// Body instantiated path by path.
Formula instantiate_body(const Procedure& p, const Environment& env, const Program& prog);

// ---- explicit semantics (boolean mode) ----------------------------------------

/// A set of formal valuations, each in Procedure::formals() order.
using BoolRelation = std::set<std::vector<bool>>;

constexpr std::size_t kMaxEnumeratedVars = 16;

/// [[P]]^b computed by enumeration. Throws TooLarge past kMaxEnumeratedVars
/// variables (formals plus locals) and WrongMode outside boolean mode.
BoolRelation bool_bounded_semantics(const Procedure& p, int b, const Program& prog);

/// Least fixpoint of the body equations: the unbounded semantics of every
/// procedure. Used as a verdict oracle for boolean programs.
std::map<std::string, BoolRelation> bool_summaries(const Program& prog);

/// Valuations of `vars` satisfying a call-free formula.
BoolRelation bool_models(const Formula& f, const std::vector<Var>& vars);

}  // namespace recmc
