#pragma once

// Random formula generators and brute-force helpers shared by the tests.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "recmc/logic.hpp"

namespace recmc::testing {

inline Var rv(const std::string& n) { return Var(n, Sort::Rat); }
inline Var iv(const std::string& n) { return Var(n, Sort::Int); }
inline Var bv(const std::string& n) { return Var(n, Sort::Bool); }

inline LinTerm T(const Var& v, long c = 1) { return LinTerm::variable(v, Rational(c)); }
inline LinTerm K(long c) { return LinTerm::constant(Rational(c)); }

inline Formula lt(const LinTerm& a, const LinTerm& b) { return mk_cmp(Cmp::Lt, a, b); }
inline Formula le(const LinTerm& a, const LinTerm& b) { return mk_cmp(Cmp::Le, a, b); }
inline Formula eq(const LinTerm& a, const LinTerm& b) { return mk_cmp(Cmp::Eq, a, b); }

class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }

  LinTerm term(const std::vector<Var>& vars, int max_coeff = 3, int max_const = 4) {
    LinTerm t = K(uniform(-max_const, max_const));
    int n = uniform(1, std::min<int>(2, static_cast<int>(vars.size())));
    for (int i = 0; i < n; ++i) {
      int c = uniform(-max_coeff, max_coeff);
      if (c == 0) c = 1;
      t = t + T(pick(vars), c);
    }
    return t;
  }

  /// Random arithmetic literal over `vars`; may fold to a constant.
  Formula arith_literal(const std::vector<Var>& vars, bool divides = false) {
    if (divides && coin(0.2)) {
      return mk_divides(Integer(uniform(2, 3)), term(vars), true);
    }
    LinTerm t = term(vars);
    switch (uniform(0, 3)) {
      case 0: return mk_cmp(Cmp::Lt, t);
      case 1: return mk_cmp(Cmp::Le, t);
      case 2: return mk_cmp(Cmp::Eq, t);
      default: return mk_cmp(Cmp::Lt, -t);
    }
  }

  Formula bool_literal(const std::vector<Var>& vars) { return mk_bool(pick(vars), coin()); }

  Formula formula(const std::function<Formula()>& leaf, int depth) {
    if (depth == 0 || coin(0.3)) return leaf();
    int n = uniform(2, 3);
    std::vector<Formula> kids;
    for (int i = 0; i < n; ++i) kids.push_back(formula(leaf, depth - 1));
    return coin() ? Formula::conj(kids) : Formula::disj(kids);
  }

  RawFormula raw(const std::function<Formula()>& leaf, int depth) {
    if (depth == 0 || coin(0.3)) {
      RawFormula r = RawFormula::of(leaf());
      return coin(0.3) ? RawFormula::mk_not(r) : r;
    }
    int n = uniform(2, 3);
    std::vector<RawFormula> kids;
    for (int i = 0; i < n; ++i) kids.push_back(raw(leaf, depth - 1));
    RawFormula r = coin() ? RawFormula::mk_and(kids) : RawFormula::mk_or(kids);
    return coin(0.3) ? RawFormula::mk_not(r) : r;
  }

  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
};

inline bool eval_raw(const RawFormula& f, const Model& m) {
  switch (f.kind) {
    case RawFormula::Kind::Form: return eval(f.leaf, m);
    case RawFormula::Kind::Not: return !eval_raw(f.kids.front(), m);
    case RawFormula::Kind::And:
      for (const auto& k : f.kids)
        if (!eval_raw(k, m)) return false;
      return true;
    case RawFormula::Kind::Or:
      for (const auto& k : f.kids)
        if (eval_raw(k, m)) return true;
      return false;
  }
  return false;
}

/// Calls `fn` on every integer assignment of `vars` in [lo, hi]; stops early
/// when `fn` returns true. Returns whether it stopped early.
inline bool for_each_int_model(const std::vector<Var>& vars, long lo, long hi,
                               const std::function<bool(const Model&)>& fn, Model base = {}) {
  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == vars.size()) return fn(base);
    for (long v = lo; v <= hi; ++v) {
      base.set_num(vars[i], Rational(v));
      if (rec(i + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

inline bool for_each_bool_model(const std::vector<Var>& vars, const std::function<bool(const Model&)>& fn,
                                Model base = {}) {
  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == vars.size()) return fn(base);
    for (int b = 0; b < 2; ++b) {
      base.set_bool(vars[i], b == 1);
      if (rec(i + 1)) return true;
    }
    return false;
  };
  return rec(0);
}

}  // namespace recmc::testing
