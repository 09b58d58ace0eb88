#include <gtest/gtest.h>

#include "recmc/logic.hpp"
#include "recmc/smt.hpp"
#include "support.hpp"

using namespace recmc;
using namespace recmc::testing;

namespace {

const Var p = bv("p"), q = bv("q"), a = bv("a"), b = bv("b"), c = bv("c");
const Var x = rv("x"), y = rv("y"), u = rv("u"), l = rv("l");

TEST(ToNnf, DeMorgan) {
  Formula f = to_nnf(RawFormula::mk_not(RawFormula::mk_and({RawFormula::of(mk_bool(p)), RawFormula::of(mk_bool(q))})));
  EXPECT_EQ(f, mk_bool(p, false) || mk_bool(q, false));
}

TEST(ToNnf, DoubleNegation) {
  Formula f = to_nnf(RawFormula::mk_not(RawFormula::mk_not(RawFormula::of(mk_bool(p)))));
  EXPECT_EQ(f, mk_bool(p));
}

TEST(ToNnf, AtomNegation) {
  RawFormula inner = RawFormula::mk_and({RawFormula::of(lt(T(x), T(u))), RawFormula::of(lt(T(l), T(x)))});
  Formula f = to_nnf(RawFormula::mk_not(inner));
  EXPECT_EQ(f, le(T(u), T(x)) || le(T(x), T(l)));
}

TEST(ToNnf, NegatedEqualitySplits) {
  Formula f = negate(eq(T(x), T(y)));
  EXPECT_EQ(f, lt(T(x), T(y)) || lt(T(y), T(x)));
}

TEST(ToNnf, NegatedCallRejected) {
  Formula call = Formula::call({"D", {x, y}});
  try {
    to_nnf(RawFormula::mk_not(RawFormula::of(call)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegatedCall);
  }
}

TEST(DnfPaths, MainBodyIsOnePath) {
  Var m0 = iv("M.m0"), m = iv("M.m"), l0 = iv("M.l0"), l1 = iv("M.l1");
  Formula body = Formula::conj({Formula::call({"T", {m0, l0}}), Formula::call({"D", {l0, l1}}),
                                Formula::call({"D", {l1, m}})});
  auto paths = dnf_paths(body);
  ASSERT_EQ(paths.size(), 1u);
  ASSERT_EQ(paths[0].calls.size(), 3u);
  EXPECT_EQ(paths[0].calls[0].callee, "T");
  EXPECT_EQ(paths[0].calls[1].callee, "D");
  EXPECT_EQ(paths[0].calls[2].args, (std::vector<Var>{l1, m}));
  EXPECT_TRUE(paths[0].literals.empty());
}

TEST(DnfPaths, RecursiveBodyHasTwoPaths) {
  Var t0 = iv("T.t0"), t = iv("T.t"), l0 = iv("T.l0"), l1 = iv("T.l1");
  Formula base = le(T(t0), K(0)) && eq(T(t0), T(t));
  Formula step = Formula::conj({lt(K(0), T(t0)), eq(T(l0), T(t0) - K(2)), Formula::call({"T", {l0, l1}}),
                                eq(T(t), T(l1) + K(1))});
  auto paths = dnf_paths(base || step);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_TRUE(paths[0].calls.empty());
  EXPECT_EQ(paths[0].literals.size(), 2u);
  EXPECT_EQ(paths[1].calls.size(), 1u);
  EXPECT_EQ(paths[1].literals.size(), 3u);
}

TEST(DnfPaths, Distribution) {
  auto paths = dnf_paths((mk_bool(a) || mk_bool(b)) && mk_bool(c));
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].to_formula(), mk_bool(a) && mk_bool(c));
  EXPECT_EQ(paths[1].to_formula(), mk_bool(b) && mk_bool(c));
}

TEST(DnfPaths, ExplosionIsAnError) {
  std::vector<Formula> factors;
  for (int i = 0; i < 13; ++i) factors.push_back(mk_bool(bv("u" + std::to_string(i))) || mk_bool(bv("v" + std::to_string(i))));
  try {
    dnf_paths(Formula::conj(factors));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PathExplosion);
  }
}

TEST(NormalizeFor, DivideByCoefficient) {
  Literal lit = lt(T(x, 2) + T(y), K(3)).lit();
  XLiteral n = normalize_for(x, lit, Sort::Rat);
  EXPECT_EQ(n.kind, XLiteral::Kind::Upper);
  EXPECT_TRUE(n.strict);
  EXPECT_EQ(n.bound, (K(3) - T(y)) * Rational(1, 2));
}

TEST(NormalizeFor, Rearrangement) {
  Literal lit = lt(K(0), T(x) - T(y)).lit();
  XLiteral n = normalize_for(x, lit, Sort::Rat);
  EXPECT_EQ(n.kind, XLiteral::Kind::Lower);
  EXPECT_EQ(n.bound, T(y));
}

TEST(NormalizeFor, Equality) {
  Literal lit = eq(K(3), T(x, 3)).lit();
  XLiteral n = normalize_for(x, lit, Sort::Rat);
  EXPECT_EQ(n.kind, XLiteral::Kind::Eq);
  EXPECT_EQ(n.bound, K(1));
}

TEST(NormalizeFor, IntegerNeedsUnitCoefficient) {
  Var xi = iv("x"), yi = iv("y");
  Literal lit = lt(T(xi, 2), T(yi)).lit();
  try {
    normalize_for(xi, lit, Sort::Int);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNormalized);
  }
  XLiteral n = normalize_for(xi, le(T(xi), T(yi)).lit(), Sort::Int);
  EXPECT_EQ(n.kind, XLiteral::Kind::Upper);
  EXPECT_TRUE(n.strict);
  EXPECT_EQ(n.bound, T(yi) + K(1));
}

TEST(LiaNormalize, SingleLiteral) {
  Var xi = iv("x"), yi = iv("y");
  LiaNormalized n = lia_normalize(xi, lt(T(xi, 2), T(yi)));
  EXPECT_EQ(n.multiplier, 2);
  Var xp = n.fresh;
  EXPECT_EQ(n.formula, lt(T(xp), T(yi)) && mk_divides(2, T(xp)));
}

TEST(LiaNormalize, TwoLiterals) {
  Var xi = iv("x"), yi = iv("y"), zi = iv("z");
  LiaNormalized n = lia_normalize(xi, lt(T(xi, 2), T(yi)) && lt(T(zi), T(xi, 3)));
  EXPECT_EQ(n.multiplier, 6);
  Var xp = n.fresh;
  EXPECT_EQ(n.formula, Formula::conj({lt(T(xp), T(yi, 3)), lt(T(zi, 2), T(xp)), mk_divides(6, T(xp))}));
}

TEST(LiaNormalize, FreeFormulaUnchanged) {
  Var xi = iv("x"), yi = iv("y");
  Formula f = lt(T(yi), K(3));
  LiaNormalized n = lia_normalize(xi, f);
  EXPECT_EQ(n.multiplier, 1);
  EXPECT_EQ(n.formula, f);
}

TEST(Eval, Examples) {
  Model m;
  m.set_num(x, 1);
  m.set_num(y, 2);
  EXPECT_TRUE(eval(lt(T(x), T(y)), m));
  Model m2;
  m2.set_num(iv("x"), 3);
  EXPECT_FALSE(eval(mk_divides(2, T(iv("x"))), m2));
  EXPECT_FALSE(eval(Formula::bottom(), Model{}));
}

TEST(Eval, UnassignedVariable) {
  try {
    eval(lt(T(x), K(0)), Model{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnassignedVar);
  }
}

TEST(Literals, GroundFolding) {
  EXPECT_TRUE(lt(K(1), K(2)).is_true());
  EXPECT_TRUE(eq(K(1), K(2)).is_false());
  EXPECT_TRUE(mk_divides(3, K(6)).is_true());
  EXPECT_TRUE(mk_divides(1, T(iv("x"))).is_true());
  EXPECT_EQ(lt(T(x, 2), K(4)), lt(T(x), K(2)));
}

TEST(Formula, ConjunctionSimplification) {
  Formula f = Formula::conj({mk_bool(p), Formula::top(), mk_bool(p) && mk_bool(q)});
  EXPECT_EQ(f, mk_bool(p) && mk_bool(q));
  EXPECT_TRUE(Formula::conj({mk_bool(p), Formula::bottom()}).is_false());
  EXPECT_TRUE(Formula::disj({}).is_false());
}

TEST(Printing, Sexpr) {
  EXPECT_EQ(to_sexpr(lt(T(x, 2) + K(1), T(y))), "(< (+ (* 2 x) 1) y)");
  EXPECT_EQ(to_sexpr(mk_bool(p, false) || Formula::call({"D", {x, y}})), "(or (not p) (call D x y))");
}

// ---- properties ----------------------------------------------------------------

TEST(Properties, NnfPreservesModels) {
  Gen g(11);
  std::vector<Var> nums{x, y};
  std::vector<Var> bools{p, q};
  for (int it = 0; it < 300; ++it) {
    RawFormula raw = g.raw(
        [&] { return g.coin() ? g.arith_literal(nums) : g.bool_literal(bools); }, 3);
    Formula nnf = to_nnf(raw);
    for (int k = 0; k < 10; ++k) {
      Model m;
      m.set_num(x, make_rational(g.uniform(-5, 5), g.uniform(1, 3)));
      m.set_num(y, make_rational(g.uniform(-5, 5), g.uniform(1, 3)));
      m.set_bool(p, g.coin());
      m.set_bool(q, g.coin());
      ASSERT_EQ(eval_raw(raw, m), eval(nnf, m));
    }
  }
}

TEST(Properties, PathsCoverBody) {
  Gen g(12);
  std::vector<Var> nums{x, y};
  std::vector<Var> bools{p, q};
  Solver s(Sort::Rat);
  for (int it = 0; it < 150; ++it) {
    int atoms = 0;
    Formula body = g.formula(
        [&]() -> Formula {
          if (atoms++ >= 6) return mk_bool(p);
          return g.coin() ? g.arith_literal(nums) : g.bool_literal(bools);
        },
        3);
    auto paths = dnf_paths(body);
    std::vector<Formula> disj;
    for (const auto& path : paths) {
      Formula pf = path.to_formula();
      ASSERT_TRUE(s.entails(pf, body));
      disj.push_back(pf);
    }
    ASSERT_TRUE(s.equivalent(Formula::disj(disj), body));
  }
}

TEST(Properties, LiaNormalizeEquisatisfiable) {
  Gen g(13);
  const Var xi = iv("x"), yi = iv("y"), zi = iv("z");
  std::vector<Var> vars{xi, yi, zi};
  for (int it = 0; it < 150; ++it) {
    int n = g.uniform(1, 5);
    std::vector<Formula> lits;
    for (int i = 0; i < n; ++i) lits.push_back(g.arith_literal(vars, true));
    Formula f = g.coin() ? Formula::conj(lits) : Formula::disj(lits);
    LiaNormalized norm = lia_normalize(xi, f);
    long d = norm.multiplier.get_si();
    for (long yv = -2; yv <= 2; ++yv)
      for (long zv = -2; zv <= 2; ++zv) {
        Model m;
        m.set_num(yi, yv);
        m.set_num(zi, zv);
        bool lhs = false, rhs = false;
        for (long xv = -3; xv <= 3 && !lhs; ++xv) {
          m.set_num(xi, xv);
          lhs = eval(f, m);
        }
        m.erase(xi);
        for (long xv = -3 * d; xv <= 3 * d && !rhs; ++xv) {
          m.set_num(norm.fresh, xv);
          rhs = eval(norm.formula, m);
        }
        ASSERT_EQ(lhs, rhs) << to_sexpr(f);
      }
  }
}

}  // namespace
