#include "recmc/qe.hpp"

#include <algorithm>

namespace recmc {
namespace {

struct Bounds {
  std::vector<LinTerm> eqs;
  std::vector<LinTerm> lowers;
  Integer divisor_lcm = 1;
};

void add_unique(std::vector<LinTerm>& v, const LinTerm& t) {
  for (const auto& u : v)
    if (u == t) return;
  v.push_back(t);
}

Bounds collect_bounds(const Var& x, const Formula& f, Sort mode) {
  Bounds b;
  std::vector<Literal> lits;
  collect_literals(f, lits);
  for (const auto& l : lits) {
    XLiteral n = normalize_for(x, l, mode);
    switch (n.kind) {
      case XLiteral::Kind::Eq: add_unique(b.eqs, n.bound); break;
      case XLiteral::Kind::Lower: add_unique(b.lowers, n.bound); break;
      case XLiteral::Kind::Divides: b.divisor_lcm = lcm_of(b.divisor_lcm, n.divisor); break;
      default: break;
    }
  }
  auto by_key = [](const LinTerm& a, const LinTerm& c) { return term_less(a, c); };
  std::sort(b.eqs.begin(), b.eqs.end(), by_key);
  std::sort(b.lowers.begin(), b.lowers.end(), by_key);
  return b;
}

void require_model(const Formula& f, const Model& m) {
  if (!eval(f, m)) throw Error(ErrorKind::ModelMismatch, "model does not satisfy the projected matrix");
}

void require_sort(const Var& x, Sort s) {
  if (x.sort != s) throw Error(ErrorKind::WrongMode, std::string("variable ") + x.name + " is not " + sort_name(s));
}

/// The equality term true in m, least in term order.
const LinTerm* true_equality(const Var& x, const Bounds& b, const Model& m) {
  const Rational& vx = m.get_num(x);
  for (const auto& e : b.eqs)
    if (e.evaluate(m) == vx) return &e;
  return nullptr;
}

/// The greatest-valued lower bound strictly below x in m.
const LinTerm* best_lower(const Var& x, const Bounds& b, const Model& m) {
  const Rational& vx = m.get_num(x);
  const LinTerm* best = nullptr;
  Rational best_val;
  for (const auto& l : b.lowers) {
    Rational v = l.evaluate(m);
    if (!(v < vx)) continue;
    if (!best || v > best_val) {
      best = &l;
      best_val = v;
    }
  }
  return best;
}

}  // namespace

// ---- Loos-Weispfenning ------------------------------------------------------------

Formula lw_prepare(const Var& x, const Formula& f) {
  return map_literals(f, [&](const Literal& l) {
    Formula self = Formula::literal(l);
    if (l.kind() != Literal::Kind::Arith || l.cmp() != Cmp::Le || !l.term().mentions(x)) return self;
    XLiteral n = normalize_for(x, l, Sort::Rat);
    Formula strict = n.kind == XLiteral::Kind::Lower ? mk_cmp(Cmp::Lt, n.bound, LinTerm::variable(x))
                                                     : mk_cmp(Cmp::Lt, LinTerm::variable(x), n.bound);
    return strict || mk_cmp(Cmp::Eq, LinTerm::variable(x), n.bound);
  });
}

Formula lw_sub_term(const Var& x, const Formula& f, const LinTerm& e) { return substitute(f, x, e); }

Formula lw_sub_eps(const Var& x, const Formula& f, const LinTerm& l) {
  return map_literals(f, [&](const Literal& lit) {
    XLiteral n = normalize_for(x, lit, Sort::Rat);
    switch (n.kind) {
      case XLiteral::Kind::Eq: return Formula::bottom();
      case XLiteral::Kind::Lower: return mk_cmp(Cmp::Le, n.bound, l);
      case XLiteral::Kind::Upper: return mk_cmp(Cmp::Lt, l, n.bound);
      default: return Formula::literal(lit);
    }
  });
}

Formula lw_sub_minf(const Var& x, const Formula& f) {
  return map_literals(f, [&](const Literal& lit) {
    XLiteral n = normalize_for(x, lit, Sort::Rat);
    switch (n.kind) {
      case XLiteral::Kind::Eq:
      case XLiteral::Kind::Lower: return Formula::bottom();
      case XLiteral::Kind::Upper: return Formula::top();
      default: return Formula::literal(lit);
    }
  });
}

Formula lw_qe(const Var& x, const Formula& f) {
  require_sort(x, Sort::Rat);
  if (!mentions(f, x)) return f;
  Formula g = lw_prepare(x, f);
  Bounds b = collect_bounds(x, g, Sort::Rat);
  std::vector<Formula> parts;
  for (const auto& e : b.eqs) parts.push_back(lw_sub_term(x, g, e));
  for (const auto& l : b.lowers) parts.push_back(lw_sub_eps(x, g, l));
  parts.push_back(lw_sub_minf(x, g));
  return Formula::disj(parts);
}

Formula lra_proj(const Var& x, const Formula& f, const Model& m) {
  require_sort(x, Sort::Rat);
  require_model(f, m);
  if (!mentions(f, x)) return f;
  Formula g = lw_prepare(x, f);
  Bounds b = collect_bounds(x, g, Sort::Rat);
  if (const LinTerm* e = true_equality(x, b, m)) return lw_sub_term(x, g, *e);
  if (const LinTerm* l = best_lower(x, b, m)) return lw_sub_eps(x, g, *l);
  return lw_sub_minf(x, g);
}

// ---- Cooper -----------------------------------------------------------------------

Formula cooper_sub_minf(const Var& x, const Formula& f, const Integer& i) {
  return map_literals(f, [&](const Literal& lit) {
    XLiteral n = normalize_for(x, lit, Sort::Int);
    switch (n.kind) {
      case XLiteral::Kind::Eq:
      case XLiteral::Kind::Lower: return Formula::bottom();
      case XLiteral::Kind::Upper: return Formula::top();
      case XLiteral::Kind::Divides:
        return mk_divides(lit.divisor(), lit.term().substitute(x, LinTerm::constant(Rational(i))), lit.positive());
      default: return Formula::literal(lit);
    }
  });
}

Formula cooper_qe(const Var& x, const Formula& f) {
  require_sort(x, Sort::Int);
  if (!mentions(f, x)) return f;
  Bounds b = collect_bounds(x, f, Sort::Int);
  std::vector<Formula> parts;
  for (const auto& e : b.eqs) parts.push_back(substitute(f, x, e));
  for (const auto& l : b.lowers)
    for (Integer i = 0; i < b.divisor_lcm; ++i) parts.push_back(substitute(f, x, l + LinTerm::constant(Rational(i + 1))));
  for (Integer i = 0; i < b.divisor_lcm; ++i) parts.push_back(cooper_sub_minf(x, f, i));
  return Formula::disj(parts);
}

Formula lia_proj(const Var& x, const Formula& f, const Model& m) {
  require_sort(x, Sort::Int);
  require_model(f, m);
  if (!mentions(f, x)) return f;
  Bounds b = collect_bounds(x, f, Sort::Int);
  if (const LinTerm* e = true_equality(x, b, m)) return substitute(f, x, *e);
  const Integer vx = m.get_num(x).get_num();
  if (const LinTerm* l = best_lower(x, b, m)) {
    Integer i = mod_floor(vx - (l->evaluate(m).get_num() + 1), b.divisor_lcm);
    return substitute(f, x, *l + LinTerm::constant(Rational(i + 1)));
  }
  return cooper_sub_minf(x, f, mod_floor(vx, b.divisor_lcm));
}

Formula int_qe(const Var& x, const Formula& f) {
  require_sort(x, Sort::Int);
  if (!mentions(f, x)) return f;
  LiaNormalized n = lia_normalize(x, f);
  return cooper_qe(n.fresh, n.formula);
}

Formula int_proj(const Var& x, const Formula& f, const Model& m) {
  require_sort(x, Sort::Int);
  require_model(f, m);
  if (!mentions(f, x)) return f;
  LiaNormalized n = lia_normalize(x, f);
  if (n.multiplier == 1) return lia_proj(x, f, m);
  Model ext = m;
  ext.set_num(n.fresh, Rational(n.multiplier) * m.get_num(x));
  return lia_proj(n.fresh, n.formula, ext);
}

// ---- projection -------------------------------------------------------------------

const char* proj_strategy_name(ProjStrategy s) { return s == ProjStrategy::Mbp ? "mbp" : "qe"; }

Formula project(const std::vector<Var>& vars, const Formula& f, const Model& m, ProjStrategy s) {
  Formula g = f;
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    const Var& x = *it;
    if (!mentions(g, x)) continue;
    switch (x.sort) {
      case Sort::Bool:
        if (s == ProjStrategy::Mbp)
          g = substitute_bool(g, x, m.get_bool(x));
        else
          g = substitute_bool(g, x, true) || substitute_bool(g, x, false);
        break;
      case Sort::Rat: g = s == ProjStrategy::Mbp ? lra_proj(x, g, m) : lw_qe(x, g); break;
      case Sort::Int: g = s == ProjStrategy::Mbp ? int_proj(x, g, m) : int_qe(x, g); break;
    }
  }
  return g;
}

Integer ProjectionShape::image_bound(Sort mode) const {
  if (mode == Sort::Int)
    return Integer(static_cast<unsigned long>(eq_terms)) +
           divisor_lcm * Integer(static_cast<unsigned long>(lower_bounds)) + divisor_lcm;
  return Integer(static_cast<unsigned long>(eq_terms + lower_bounds + 1));
}

ProjectionShape projection_shape(const Var& x, const Formula& f) {
  ProjectionShape s;
  Bounds b;
  if (x.sort == Sort::Int) {
    LiaNormalized n = lia_normalize(x, f);
    b = collect_bounds(n.fresh, n.formula, Sort::Int);
  } else {
    b = collect_bounds(x, lw_prepare(x, f), Sort::Rat);
  }
  s.eq_terms = b.eqs.size();
  s.lower_bounds = b.lowers.size();
  s.divisor_lcm = b.divisor_lcm;
  return s;
}

}  // namespace recmc
