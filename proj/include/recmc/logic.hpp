#pragma once

// Terms, literals and NNF formulas over linear arithmetic and booleans,
// plus the call atoms that stand for procedure summaries.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "recmc/error.hpp"
#include "recmc/rational.hpp"

namespace recmc {

enum class Sort { Bool, Rat, Int };

const char* sort_name(Sort s);

struct Var {
  std::string name;
  Sort sort = Sort::Rat;

  Var() = default;
  Var(std::string n, Sort s) : name(std::move(n)), sort(s) {}

  bool is_arith() const { return sort != Sort::Bool; }
  friend bool operator==(const Var& a, const Var& b) { return a.name == b.name; }
  friend bool operator!=(const Var& a, const Var& b) { return a.name != b.name; }
  friend bool operator<(const Var& a, const Var& b) { return a.name < b.name; }
};

using VarSet = std::set<Var>;

using Value = std::variant<bool, Rational>;

/// Assignment of values to variables, keyed by variable name.
class Model {
 public:
  void set(const Var& v, Value value) { values_[v.name] = std::move(value); }
  void set_bool(const Var& v, bool b) { values_[v.name] = b; }
  void set_num(const Var& v, Rational r) { values_[v.name] = std::move(r); }
  void erase(const Var& v) { values_.erase(v.name); }

  bool has(const Var& v) const { return values_.count(v.name) != 0; }
  const Value& value(const Var& v) const;
  bool get_bool(const Var& v) const;
  const Rational& get_num(const Var& v) const;

  const std::map<std::string, Value>& values() const { return values_; }

 private:
  std::map<std::string, Value> values_;
};

std::string value_to_string(const Value& v);

/// Linear term sum(c_i * x_i) + k with exact rational coefficients.
/// Coefficients are kept sorted by variable name and are never zero.
class LinTerm {
 public:
  using Entry = std::pair<Var, Rational>;

  LinTerm() = default;
  static LinTerm constant(const Rational& c);
  static LinTerm variable(const Var& v, const Rational& coeff = 1);

  const std::vector<Entry>& coeffs() const { return coeffs_; }
  const Rational& constant_part() const { return constant_; }
  Rational coeff(const Var& v) const;
  bool is_constant() const { return coeffs_.empty(); }
  bool mentions(const Var& v) const;

  LinTerm operator+(const LinTerm& o) const;
  LinTerm operator-(const LinTerm& o) const;
  LinTerm operator-() const { return *this * Rational(-1); }
  LinTerm operator*(const Rational& k) const;
  LinTerm& add_constant(const Rational& k);

  LinTerm without(const Var& v) const;
  LinTerm substitute(const Var& x, const LinTerm& t) const;
  LinTerm rename(const std::map<std::string, Var>& m) const;
  Rational evaluate(const Model& m) const;

  /// Canonical serialization; also defines the syntactic term order.
  std::string key() const;

  friend bool operator==(const LinTerm& a, const LinTerm& b) {
    return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const LinTerm& a, const LinTerm& b) { return !(a == b); }

 private:
  std::vector<Entry> coeffs_;
  Rational constant_ = 0;
};

/// Total syntactic order on terms used for deterministic tie breaking.
bool term_less(const LinTerm& a, const LinTerm& b);

enum class Cmp { Lt, Le, Eq };

class Formula;

/// A literal. Arithmetic literals are `term cmp 0` and are always of
/// positive polarity; only boolean and divisibility literals carry a
/// negative polarity.
class Literal {
 public:
  enum class Kind { Arith, Bool, Divides };

  Kind kind() const { return kind_; }
  Cmp cmp() const { return cmp_; }
  const LinTerm& term() const { return term_; }
  const Var& var() const { return var_; }
  const Integer& divisor() const { return divisor_; }
  bool positive() const { return positive_; }

  bool mentions(const Var& v) const;
  std::string key() const;
  std::size_t hash() const;

  friend bool operator==(const Literal& a, const Literal& b);

  // Smart constructors: canonicalize and fold ground literals.
  friend Formula mk_cmp(Cmp op, const LinTerm& t);
  friend Formula mk_divides(const Integer& d, const LinTerm& t, bool positive);
  friend Formula mk_bool(const Var& v, bool positive);

 private:
  Kind kind_ = Kind::Bool;
  Cmp cmp_ = Cmp::Eq;
  LinTerm term_;
  Var var_;
  Integer divisor_ = 1;
  bool positive_ = true;
};

/// `t op 0`, canonicalized to primitive integer coefficients.
Formula mk_cmp(Cmp op, const LinTerm& t);
/// `lhs op rhs`.
Formula mk_cmp(Cmp op, const LinTerm& lhs, const LinTerm& rhs);
Formula mk_divides(const Integer& d, const LinTerm& t, bool positive = true);
Formula mk_bool(const Var& v, bool positive = true);

struct CallAtom {
  std::string callee;
  std::vector<Var> args;

  friend bool operator==(const CallAtom& a, const CallAtom& b) {
    return a.callee == b.callee && a.args == b.args;
  }
};

enum class FKind { True, False, Lit, And, Or, Call };

/// Immutable NNF formula with shared structure.
class Formula {
 public:
  Formula();  // true

  static Formula top();
  static Formula bottom();
  static Formula literal(const Literal& l);
  static Formula call(CallAtom c);
  /// Flattens nested conjunctions, folds constants, drops duplicates.
  static Formula conj(const std::vector<Formula>& children);
  static Formula disj(const std::vector<Formula>& children);

  FKind kind() const;
  bool is_true() const { return kind() == FKind::True; }
  bool is_false() const { return kind() == FKind::False; }
  const Literal& lit() const;
  const std::vector<Formula>& children() const;
  const CallAtom& call_atom() const;
  std::size_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static Formula make_nary(FKind kind, const std::vector<Formula>& children);
  std::shared_ptr<const Node> n_;
};

inline Formula operator&&(const Formula& a, const Formula& b) { return Formula::conj({a, b}); }
inline Formula operator||(const Formula& a, const Formula& b) { return Formula::disj({a, b}); }

/// NNF negation. Arithmetic negation: not(t<0) -> -t<=0, not(t<=0) -> -t<0,
/// not(t=0) -> t<0 | -t<0. Throws NegatedCall on call atoms.
Formula negate(const Formula& f);
Formula negate(const Literal& l);

/// Input-level boolean combination that may contain negations.
struct RawFormula {
  enum class Kind { Form, Not, And, Or };
  Kind kind = Kind::Form;
  Formula leaf;
  std::vector<RawFormula> kids;

  static RawFormula of(Formula f) { return RawFormula{Kind::Form, std::move(f), {}}; }
  static RawFormula mk_not(RawFormula f) {
    return RawFormula{Kind::Not, Formula(), {std::move(f)}};
  }
  static RawFormula mk_and(std::vector<RawFormula> k) {
    return RawFormula{Kind::And, Formula(), std::move(k)};
  }
  static RawFormula mk_or(std::vector<RawFormula> k) {
    return RawFormula{Kind::Or, Formula(), std::move(k)};
  }
};

Formula to_nnf(const RawFormula& f);

// ---- queries and rewriting -------------------------------------------------

VarSet free_vars(const Formula& f);
bool has_calls(const Formula& f);
bool mentions(const Formula& f, const Var& v);
std::size_t formula_size(const Formula& f);
void collect_literals(const Formula& f, std::vector<Literal>& out);

/// Rebuilds `f` bottom-up replacing every literal by `fn(literal)`.
Formula map_literals(const Formula& f, const std::function<Formula(const Literal&)>& fn);

Formula substitute(const Formula& f, const Var& x, const LinTerm& t);
Formula substitute_bool(const Formula& f, const Var& p, bool value);
/// Simultaneous renaming of variables (literals and call arguments).
Formula rename(const Formula& f, const std::map<std::string, Var>& m);
Literal rename(const Literal& l, const std::map<std::string, Var>& m);

/// Evaluates a call-free formula. Throws UnassignedVar.
bool eval(const Formula& f, const Model& m);
bool eval(const Literal& l, const Model& m);
/// Evaluates with call atoms resolved by `calls`.
bool eval(const Formula& f, const Model& m,
          const std::function<bool(const CallAtom&, const Model&)>& calls);

/// Literals of a model-guided implicant: conjunction of literals true in
/// `m` that implies `f`. For disjunctions the first true child is taken.
std::vector<Literal> implicant(const Formula& f, const Model& m);

// ---- paths -------------------------------------------------------------------

struct Path {
  std::vector<Literal> literals;
  std::vector<CallAtom> calls;

  Formula to_formula() const;
};

constexpr std::size_t kDefaultPathLimit = 4096;

/// Disjuncts of the distributive DNF expansion. Calls keep body order.
std::vector<Path> dnf_paths(const Formula& body, std::size_t limit = kDefaultPathLimit);

// ---- normal forms w.r.t. one variable ----------------------------------------

/// A literal viewed relative to a variable x.
struct XLiteral {
  enum class Kind { Free, Lower, Upper, Eq, Divides };
  Kind kind = Kind::Free;
  bool strict = true;     // for Lower/Upper
  LinTerm bound;          // l in (l<x), u in (x<u), e in (x=e), w in (d | x+w)
  Integer divisor = 1;    // Divides
  bool positive = true;   // Divides polarity
};

/// Solves `lit` for `x`. In integer mode the coefficient of x must be +-1
/// (NotNormalized otherwise) and non-strict bounds become strict ones.
XLiteral normalize_for(const Var& x, const Literal& lit, Sort mode);

struct LiaNormalized {
  Formula formula;
  Var fresh;           // x' = multiplier * x; equals x when multiplier is 1
  Integer multiplier;  // D'
};

/// Rescales every literal so that x occurs with coefficient +-1 over a fresh
/// variable x' standing for D'*x, and conjoins (D' | x').
LiaNormalized lia_normalize(const Var& x, const Formula& f);

// ---- printing ----------------------------------------------------------------

using VarNamer = std::function<std::string(const Var&)>;

std::string term_to_sexpr(const LinTerm& t, const VarNamer& namer = {});
std::string to_sexpr(const Literal& l, const VarNamer& namer = {});
std::string to_sexpr(const Formula& f, const VarNamer& namer = {});

}  // namespace recmc
