#include <gtest/gtest.h>

#include "mbp_props.hpp"
#include "recmc/qe.hpp"
#include "recmc/smt.hpp"

using namespace recmc;
using namespace recmc::testing;

namespace {

const Var x = rv("x"), y = rv("y"), z = rv("z");
const Var e = rv("e"), l = rv("l"), u = rv("u"), a = rv("a"), b = rv("b");
const Var xi = iv("x"), yi = iv("y"), li = iv("l");

// The worked example: (x=e & phi1) | (l<x & x<u) | (x<u & phi2).
Formula phi1() { return lt(T(a), K(0)); }
Formula phi2() { return lt(T(b), K(0)); }
Formula worked() {
  return Formula::disj({eq(T(x), T(e)) && phi1(), lt(T(l), T(x)) && lt(T(x), T(u)), lt(T(x), T(u)) && phi2()});
}

Model point(long xv, long ev, long lv, long uv, long av, long bv) {
  Model m;
  m.set_num(x, xv);
  m.set_num(e, ev);
  m.set_num(l, lv);
  m.set_num(u, uv);
  m.set_num(a, av);
  m.set_num(b, bv);
  return m;
}

TEST(LwQe, WorkedExample) {
  Solver s(Sort::Rat);
  EXPECT_TRUE(s.equivalent(lw_qe(x, worked()), Formula::disj({phi1(), lt(T(l), T(u)), phi2()})));
}

TEST(LwQe, EqualityAlwaysWitnessed) { EXPECT_TRUE(lw_qe(x, eq(T(x), T(y))).is_true()); }

TEST(LwQe, Density) {
  Solver s(Sort::Rat);
  EXPECT_TRUE(s.equivalent(lw_qe(x, lt(T(y), T(x)) && lt(T(x), T(z))), lt(T(y), T(z))));
}

TEST(LwQe, NonStrictBounds) {
  Solver s(Sort::Rat);
  EXPECT_TRUE(s.equivalent(lw_qe(x, le(T(y), T(x)) && le(T(x), T(z))), le(T(y), T(z))));
  EXPECT_TRUE(s.equivalent(lw_qe(x, le(T(y), T(x)) && lt(T(x), T(z))), lt(T(y), T(z))));
}

TEST(LwQe, IntegerVariableRejected) {
  EXPECT_THROW(lw_qe(xi, lt(T(xi), K(0))), Error);
}

TEST(LraProj, EqualityBranch) {
  Solver s(Sort::Rat);
  Model m = point(1, 1, 0, 2, -1, 5);
  Formula got = lra_proj(x, worked(), m);
  Formula want = Formula::disj({phi1(), lt(T(l), T(e)) && lt(T(e), T(u)), lt(T(e), T(u)) && phi2()});
  EXPECT_TRUE(s.equivalent(got, want));
  EXPECT_TRUE(eval(got, m));
}

TEST(LraProj, LowerBoundBranch) {
  Solver s(Sort::Rat);
  Model m = point(1, 7, 0, 2, 5, 5);
  Formula got = lra_proj(x, worked(), m);
  EXPECT_TRUE(s.equivalent(got, lt(T(l), T(u)) || (lt(T(l), T(u)) && phi2())));
  EXPECT_TRUE(eval(got, m));
}

TEST(LraProj, MinusInfinityBranch) {
  Solver s(Sort::Rat);
  Model m = point(-3, 7, 0, 2, 5, -1);
  Formula got = lra_proj(x, worked(), m);
  EXPECT_TRUE(s.equivalent(got, phi2()));
  EXPECT_TRUE(eval(got, m));
}

TEST(LraProj, ModelMismatch) {
  try {
    lra_proj(x, worked(), point(-3, 7, 0, 2, 5, 5));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::ModelMismatch);
  }
}

TEST(LraProj, TiesBrokenByTermOrder) {
  // y and z both equal x in the model; the smaller key wins, every time.
  Model m;
  m.set_num(x, 2);
  m.set_num(y, 2);
  m.set_num(z, 2);
  Formula f = eq(T(x), T(z)) && eq(T(x), T(y));
  Formula first = lra_proj(x, f, m);
  EXPECT_EQ(first, lra_proj(x, f, m));
  EXPECT_EQ(first, eq(T(y), T(z)));
}

TEST(CooperQe, EvenBetween) {
  Solver s(Sort::Int);
  Formula f = Formula::conj({lt(K(0), T(xi)), lt(T(xi), K(3)), mk_divides(2, T(xi))});
  EXPECT_TRUE(s.equivalent(cooper_qe(xi, f), Formula::top()));
  bool brute = for_each_int_model({xi}, -6, 6, [&](const Model& m) { return eval(f, m); });
  EXPECT_TRUE(brute);
}

TEST(CooperQe, ConsecutiveIntegers) {
  Solver s(Sort::Int);
  EXPECT_TRUE(s.equivalent(cooper_qe(xi, lt(T(yi), T(xi)) && lt(T(xi), T(yi) + K(1))), Formula::bottom()));
}

TEST(CooperQe, Equality) { EXPECT_TRUE(cooper_qe(xi, eq(T(xi), T(yi) + K(2))).is_true()); }

TEST(CooperQe, RequiresUnitCoefficient) {
  try {
    cooper_qe(xi, lt(T(xi, 2), T(yi)));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::NotNormalized);
  }
}

TEST(LiaProj, LowerBoundResidue) {
  Solver s(Sort::Int);
  Formula f = lt(T(li), T(xi)) && mk_divides(2, T(xi));
  Model m;
  m.set_num(xi, 4);
  m.set_num(li, 3);
  Formula got = lia_proj(xi, f, m);
  EXPECT_TRUE(s.equivalent(got, mk_divides(2, T(li) + K(1))));
  EXPECT_TRUE(eval(got, m));
  EXPECT_TRUE(s.entails(got, cooper_qe(xi, f)));
}

TEST(LiaProj, MinusInfinityResidue) {
  Model m;
  m.set_num(xi, 6);
  EXPECT_TRUE(lia_proj(xi, mk_divides(2, T(xi)), m).is_true());
}

TEST(LiaProj, EqualityFirst) {
  Model m;
  m.set_num(xi, 5);
  m.set_num(yi, 3);
  m.set_num(li, 0);
  Formula f = eq(T(xi), T(yi) + K(2)) && lt(T(li), T(xi));
  EXPECT_EQ(lia_proj(xi, f, m), lt(T(li), T(yi) + K(2)));
}

TEST(IntQe, ScaledCoefficients) {
  Solver s(Sort::Int);
  // exists x. 2x = y  <=>  y even
  EXPECT_TRUE(s.equivalent(int_qe(xi, eq(T(xi, 2), T(yi))), mk_divides(2, T(yi))));
  Model m;
  m.set_num(xi, 3);
  m.set_num(yi, 6);
  Formula p = int_proj(xi, eq(T(xi, 2), T(yi)), m);
  EXPECT_TRUE(eval(p, m));
  EXPECT_TRUE(s.equivalent(p, mk_divides(2, T(yi))));
}

TEST(Project, EmptyIsIdentity) {
  Formula f = lt(T(x), T(y));
  EXPECT_EQ(project({}, f, Model{}, ProjStrategy::Mbp), f);
}

TEST(Project, BooleanMbpSubstitutes) {
  Var p = bv("p"), q = bv("q");
  Model m;
  m.set_bool(p, true);
  m.set_bool(q, false);
  EXPECT_TRUE(project({p}, mk_bool(p) || mk_bool(q), m, ProjStrategy::Mbp).is_true());
}

TEST(Project, BooleanQeShannon) {
  Var p = bv("p"), q = bv("q");
  EXPECT_EQ(project({p}, mk_bool(p) && mk_bool(q), Model{}, ProjStrategy::Qe), mk_bool(q));
}

TEST(Project, SeveralVariables) {
  Solver s(Sort::Rat);
  Formula f = Formula::conj({lt(T(y), T(x)), lt(T(x), T(z)), lt(T(z), K(3))});
  Model m;
  m.set_num(x, 1);
  m.set_num(y, 0);
  m.set_num(z, 2);
  Formula p = project({x, z}, f, m, ProjStrategy::Mbp);
  EXPECT_FALSE(mentions(p, x) || mentions(p, z));
  EXPECT_TRUE(eval(p, m));
  EXPECT_TRUE(s.equivalent(project({x, z}, f, m, ProjStrategy::Qe), lt(T(y), K(3))));
}

// ---- properties ----------------------------------------------------------------

void mbp_suite(Sort mode, unsigned seed, int count) {
  Gen g(seed);
  Var xv = mode == Sort::Int ? xi : x;
  std::vector<Var> others = mode == Sort::Int ? std::vector<Var>{yi, iv("z")} : std::vector<Var>{y, z};
  std::vector<Var> all = others;
  all.push_back(xv);
  Solver s(mode);
  int done = 0;
  while (done < count) {
    Formula f = random_matrix(g, xv, others, 6, mode == Sort::Int);
    auto m = random_model(g, f, all, s);
    if (!m) continue;
    ++done;
    MbpCheck c;
    try {
      c = check_mbp(xv, f, *m, s);
    } catch (const Error& err) {
      FAIL() << err.what() << " on " << to_sexpr(f);
    }
    ASSERT_TRUE(c.ok()) << c.failure << " on " << to_sexpr(f);
  }
}

TEST(Properties, MbpRational) { mbp_suite(Sort::Rat, 31, 150); }
TEST(Properties, MbpInteger) { mbp_suite(Sort::Int, 32, 150); }

TEST(Properties, Deterministic) {
  Gen g(33);
  Solver s(Sort::Rat);
  for (int it = 0; it < 100; ++it) {
    Formula f = random_matrix(g, x, {y, z}, 6, false);
    auto m = random_model(g, f, {x, y, z}, s);
    if (!m) continue;
    EXPECT_EQ(lra_proj(x, f, *m), lra_proj(x, f, *m));
  }
}

TEST(Properties, CooperAgreesWithEnumeration) {
  Gen g(34);
  const Var zi = iv("z");
  int checked = 0;
  while (checked < 300) {
    Formula f = random_matrix(g, xi, {yi, zi}, 4, true);
    Formula q = int_qe(xi, f);
    ++checked;
    for (long yv = -3; yv <= 3; ++yv)
      for (long zv = -3; zv <= 3; ++zv) {
        Model m;
        m.set_num(yi, yv);
        m.set_num(zi, zv);
        // Literals have coefficients <= 3 and constants <= 4, so a witness
        // (if any) for |y|,|z| <= 3 lies well inside [-40, 40].
        bool brute = for_each_int_model({xi}, -40, 40, [&](const Model& mm) { return eval(f, mm); }, m);
        ASSERT_EQ(eval(q, m), brute) << to_sexpr(f);
      }
  }
}

}  // namespace
