#include <gtest/gtest.h>

#include "recmc/smt.hpp"
#include "support.hpp"

using namespace recmc;
using namespace recmc::testing;

namespace {

const Var x = rv("x"), y = rv("y"), z = rv("z");
const Var xi = iv("x"), yi = iv("y"), zi = iv("z");
const Var p = bv("p"), q = bv("q"), r = bv("r");

TEST(CheckSat, RationalConflictWithCertificate) {
  SatResult res = check_sat(lt(T(x), K(0)) && lt(K(1), T(x)), Sort::Rat);
  ASSERT_TRUE(res.unsat());
  ASSERT_FALSE(res.certificates.empty());
  const FarkasCert& c = res.certificates.front();
  EXPECT_TRUE(replay_farkas(c));
  ASSERT_EQ(c.terms.size(), 2u);
  EXPECT_EQ(c.terms[0].second, 1);
  EXPECT_EQ(c.terms[1].second, 1);
}

TEST(CheckSat, NoIntegerStrictlyBetween) {
  EXPECT_TRUE(check_sat(lt(K(0), T(xi)) && lt(T(xi), K(1)), Sort::Int).unsat());
  EXPECT_TRUE(check_sat(lt(K(0), T(x)) && lt(T(x), K(1)), Sort::Rat).sat());
}

TEST(CheckSat, BooleanModel) {
  SatResult res = check_sat((mk_bool(p) || mk_bool(q)) && mk_bool(p, false), Sort::Bool);
  ASSERT_TRUE(res.sat());
  EXPECT_FALSE(res.model.get_bool(p));
  EXPECT_TRUE(res.model.get_bool(q));
}

TEST(CheckSat, StrictBoundsUseInfinitesimals) {
  SatResult res = check_sat(lt(T(x), T(y)) && lt(T(y), K(1)) && lt(K(0), T(x)), Sort::Rat);
  ASSERT_TRUE(res.sat());
  EXPECT_LT(res.model.get_num(x), res.model.get_num(y));
  EXPECT_LT(res.model.get_num(y), 1);
}

TEST(CheckSat, DivisibilityAndParity) {
  Formula even = mk_divides(2, T(xi));
  Formula odd = mk_divides(2, T(xi) + K(1));
  EXPECT_TRUE(check_sat(even && odd, Sort::Int).unsat());
  EXPECT_TRUE(check_sat(mk_divides(3, T(xi)) && lt(K(0), T(xi)) && lt(T(xi), K(3)), Sort::Int).unsat());
  SatResult res = check_sat(mk_divides(3, T(xi)) && lt(K(0), T(xi)) && lt(T(xi), K(4)), Sort::Int);
  ASSERT_TRUE(res.sat());
  EXPECT_EQ(res.model.get_num(xi), 3);
  SatResult neg = check_sat(mk_divides(2, T(xi), false) && le(K(4), T(xi)) && le(T(xi), K(5)), Sort::Int);
  ASSERT_TRUE(neg.sat());
  EXPECT_EQ(neg.model.get_num(xi), 5);
}

TEST(CheckSat, EqualitiesWithoutUnitCoefficients) {
  // 3x + 5y = 1 has integer solutions, 4x + 6y = 1 has none.
  EXPECT_TRUE(check_sat(eq(T(xi, 3) + T(yi, 5), K(1)), Sort::Int).sat());
  EXPECT_TRUE(check_sat(eq(T(xi, 4) + T(yi, 6), K(1)), Sort::Int).unsat());
  EXPECT_TRUE(check_sat(eq(T(xi, 2), T(yi, 2) + K(1)), Sort::Int).unsat());
}

TEST(CheckSat, CallAtomsRejected) {
  try {
    check_sat(Formula::call({"P", {x}}), Sort::Rat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionFailed);
  }
}

TEST(CheckSat, DivisibilityIsIntegerOnly) {
  try {
    check_sat(mk_divides(2, T(xi)) && mk_bool(p), Sort::Rat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WrongMode);
  }
}

TEST(CheckSat, BudgetExhaustionIsUnknown) {
  SolverLimits lim;
  lim.max_branches = 1;
  Solver s(Sort::Int, lim);
  // 2x + 2y odd is refuted by gcd reasoning; this one needs real branching.
  Formula f = Formula::conj({lt(K(0), T(xi, 3) - T(yi, 3)), lt(T(xi, 3) - T(yi, 3), K(3)),
                             lt(K(0), T(xi, 7) + T(yi, 5)), lt(T(xi, 7) + T(yi, 5), K(2))});
  SatResult res = s.check_sat(f);
  EXPECT_NE(res.status, SatStatus::Sat);
  if (res.status == SatStatus::Unknown) {
    EXPECT_FALSE(res.reason.empty());
    EXPECT_THROW(s.entails(f, Formula::bottom()), Error);
  }
}

TEST(Entails, Examples) {
  Solver s(Sort::Rat);
  EXPECT_TRUE(s.entails(eq(T(x), K(1)), lt(K(0), T(x))));
  EXPECT_FALSE(s.entails(lt(K(0), T(x)), eq(T(x), K(1))));
  EXPECT_TRUE(s.entails(Formula::bottom(), eq(T(x), K(7))));
}

TEST(EnumerateModels, TruthTable) {
  Solver s(Sort::Bool);
  auto block = [](const Model& m) {
    return mk_bool(p, m.get_bool(p)) && mk_bool(q, m.get_bool(q));
  };
  EXPECT_EQ(s.enumerate_models(mk_bool(p) || mk_bool(q), block, 10).size(), 3u);
  EXPECT_TRUE(s.enumerate_models(Formula::bottom(), block, 10).empty());
}

TEST(EnumerateModels, IntegerWindow) {
  Solver s(Sort::Int);
  auto models = s.enumerate_models(lt(K(0), T(xi)) && lt(T(xi), K(3)),
                                   [](const Model& m) { return eq(T(xi), LinTerm::constant(m.get_num(xi))); }, 10);
  ASSERT_EQ(models.size(), 2u);
  std::set<long> seen;
  for (const auto& m : models) seen.insert(m.get_num(xi).get_num().get_si());
  EXPECT_EQ(seen, (std::set<long>{1, 2}));
}

TEST(FarkasConflict, Conjunction) {
  std::vector<Literal> lits{le(T(x), T(y)).lit(), le(T(y), T(z)).lit(), lt(T(z), T(x)).lit()};
  auto cert = farkas_conflict(lits);
  ASSERT_TRUE(cert.has_value());
  EXPECT_TRUE(replay_farkas(*cert));
  lits.pop_back();
  EXPECT_FALSE(farkas_conflict(lits).has_value());
}

// ---- properties ----------------------------------------------------------------

void fuzz_mode(Sort mode, unsigned seed, int count) {
  Gen g(seed);
  std::vector<Var> nums = mode == Sort::Int ? std::vector<Var>{xi, yi, zi} : std::vector<Var>{x, y, z};
  std::vector<Var> bools{p, q, r};
  Solver s(mode);
  int sat = 0, unsat = 0;
  for (int it = 0; it < count; ++it) {
    Formula f = g.formula(
        [&] {
          if (mode == Sort::Bool) return g.bool_literal(bools);
          return g.coin(0.8) ? g.arith_literal(nums, mode == Sort::Int) : g.bool_literal(bools);
        },
        3);
    SatResult res = s.check_sat(f);
    ASSERT_NE(res.status, SatStatus::Unknown);
    if (res.sat()) {
      ++sat;
      ASSERT_TRUE(eval(f, res.model));
    } else {
      ++unsat;
      for (const auto& c : res.certificates) ASSERT_TRUE(replay_farkas(c));
    }
  }
  EXPECT_GT(sat, 0);
  EXPECT_GT(unsat, 0);
}

TEST(Properties, ModelSoundnessBoolean) { fuzz_mode(Sort::Bool, 21, 1000); }
TEST(Properties, ModelSoundnessRational) { fuzz_mode(Sort::Rat, 22, 1000); }
TEST(Properties, ModelSoundnessInteger) { fuzz_mode(Sort::Int, 23, 1000); }

TEST(Properties, BooleanAgreesWithTruthTable) {
  Gen g(24);
  std::vector<Var> vars;
  for (int i = 0; i < 10; ++i) vars.push_back(bv("b" + std::to_string(i)));
  Solver s(Sort::Bool);
  for (int it = 0; it < 200; ++it) {
    Formula f = g.formula([&] { return g.bool_literal(vars); }, 4);
    bool brute = for_each_bool_model(vars, [&](const Model& m) { return eval(f, m); });
    ASSERT_EQ(s.check_sat(f).sat(), brute);
  }
}

TEST(Properties, IntegerAgreesWithEnumeration) {
  Gen g(25);
  std::vector<Var> vars{xi, yi};
  Solver s(Sort::Int);
  for (int it = 0; it < 300; ++it) {
    std::vector<Formula> lits;
    for (int i = 0; i < 3; ++i) lits.push_back(g.arith_literal(vars, true));
    // Box the search so enumeration is exhaustive.
    for (const auto& v : vars) lits.push_back(le(K(-6), T(v)) && le(T(v), K(6)));
    Formula f = Formula::conj(lits);
    bool brute = for_each_int_model(vars, -6, 6, [&](const Model& m) { return eval(f, m); });
    ASSERT_EQ(s.check_sat(f).sat(), brute) << to_sexpr(f);
  }
}

TEST(Properties, IntegralRationalSolutionsAgree) {
  Gen g(26);
  for (int it = 0; it < 200; ++it) {
    std::vector<Formula> rat, in;
    for (int i = 0; i < 3; ++i) {
      long a = g.uniform(-3, 3), b = g.uniform(-3, 3), c = g.uniform(-4, 4);
      rat.push_back(le(T(x, a) + T(y, b), K(c)));
      in.push_back(le(T(xi, a) + T(yi, b), K(c)));
    }
    SatResult rr = check_sat(Formula::conj(rat), Sort::Rat);
    if (!rr.sat()) continue;
    if (!is_integral(rr.model.get_num(x)) || !is_integral(rr.model.get_num(y))) continue;
    EXPECT_TRUE(check_sat(Formula::conj(in), Sort::Int).sat());
  }
}

TEST(Properties, CertificatesReplay) {
  Gen g(27);
  std::vector<Var> nums{x, y, z};
  int found = 0;
  for (int it = 0; it < 500; ++it) {
    std::vector<Literal> lits;
    for (int i = 0; i < 4; ++i) {
      Formula f = g.arith_literal(nums);
      if (f.kind() == FKind::Lit) lits.push_back(f.lit());
    }
    auto cert = farkas_conflict(lits);
    std::vector<Formula> conj;
    for (const auto& l : lits) conj.push_back(Formula::literal(l));
    bool unsat = check_sat(Formula::conj(conj), Sort::Rat).unsat();
    ASSERT_EQ(cert.has_value(), unsat);
    if (cert) {
      ++found;
      ASSERT_TRUE(replay_farkas(*cert));
    }
  }
  EXPECT_GT(found, 10);
}

}  // namespace
