#include "recmc/interpolation.hpp"

#include <set>

#include "recmc/qe.hpp"

namespace recmc {
namespace {

std::vector<Var> locals_of(const std::vector<Literal>& cube, const VarSet& shared) {
  VarSet seen;
  for (const auto& l : cube)
    for (const auto& v : free_vars(Formula::literal(l)))
      if (!shared.count(v)) seen.insert(v);
  return {seen.begin(), seen.end()};
}

Formula cube_formula(const std::vector<Literal>& cube) {
  std::vector<Formula> parts;
  for (const auto& l : cube) parts.push_back(Formula::literal(l));
  return Formula::conj(parts);
}

bool within(const Formula& f, const VarSet& shared) {
  for (const auto& v : free_vars(f))
    if (!shared.count(v)) return false;
  return true;
}

/// The A-side of a Farkas certificate: sum of the weighted A literals.
std::optional<Formula> farkas_half(const FarkasCert& cert, const std::set<std::string>& a_keys) {
  LinTerm sum;
  bool strict = false, inequality = false;
  for (const auto& [l, m] : cert.terms) {
    if (m == 0 || !a_keys.count(l.key())) continue;
    sum = sum + l.term() * m;
    if (l.cmp() != Cmp::Eq) inequality = true;
    if (l.cmp() == Cmp::Lt) strict = true;
  }
  if (!inequality) return mk_cmp(Cmp::Eq, sum);
  return mk_cmp(strict ? Cmp::Lt : Cmp::Le, sum);
}

bool holds(const Formula& f, const Model& m) {
  for (const auto& v : free_vars(f))
    if (!m.has(v)) return true;
  return eval(f, m);
}

}  // namespace

const char* itp_strategy_name(ItpStrategy s) { return s == ItpStrategy::Strongest ? "strongest" : "farkas"; }

bool is_interpolant(const InterpolationQuery& q, const Formula& psi, Solver& s) {
  if (!within(psi, q.shared)) return false;
  if (!s.entails(q.a, psi)) return false;
  SatResult r = s.check_sat(psi && q.b);
  if (r.status == SatStatus::Unknown) throw Error(ErrorKind::ResourceLimit, r.reason);
  return r.unsat();
}

Formula Interpolator::eliminate_locals(const std::vector<Literal>& cube, const VarSet& shared) {
  ++stats_.projections;
  return project(locals_of(cube, shared), cube_formula(cube), Model{}, ProjStrategy::Qe);
}

Formula Interpolator::cube_itp(const std::vector<Literal>& cube, const InterpolationQuery& q) {
  std::set<std::string> a_keys;
  for (const auto& l : cube) a_keys.insert(l.key());
  std::vector<Formula> lemmas;
  for (;;) {
    Formula current = Formula::conj(lemmas);
    SatResult r = s_.check_sat(current && q.b);
    if (r.status == SatStatus::Unknown) throw Error(ErrorKind::ResourceLimit, r.reason);
    if (r.unsat()) return current;
    std::vector<Literal> other = implicant(q.b, r.model);

    std::optional<Formula> lemma;
    for (const auto& l : cube)
      if (l.kind() == Literal::Kind::Bool)
        for (const auto& o : other)
          if (o.kind() == Literal::Kind::Bool && o.var() == l.var() && o.positive() != l.positive())
            lemma = Formula::literal(l);
    if (!lemma) {
      std::vector<Literal> both = cube;
      both.insert(both.end(), other.begin(), other.end());
      if (std::optional<FarkasCert> cert = farkas_conflict(both)) lemma = farkas_half(*cert, a_keys);
    }
    // The lemma must exclude the b-model, or the loop makes no progress.
    if (!lemma || !within(*lemma, q.shared) || holds(*lemma, r.model)) return eliminate_locals(cube, q.shared);
    ++stats_.farkas_lemmas;
    lemmas.push_back(*lemma);
  }
}

Formula Interpolator::itp(const InterpolationQuery& q) {
  ++stats_.queries;
  SatResult joint = s_.check_sat(q.a && q.b);
  if (joint.status == SatStatus::Unknown) throw Error(ErrorKind::ResourceLimit, joint.reason);
  if (joint.sat()) throw Error(ErrorKind::NotUnsat, "interpolation query is satisfiable");

  std::vector<Formula> parts;
  for (;;) {
    SatResult r = s_.check_sat(q.a && negate(Formula::disj(parts)));
    if (r.status == SatStatus::Unknown) throw Error(ErrorKind::ResourceLimit, r.reason);
    if (r.unsat()) break;
    ++stats_.cubes;
    std::vector<Literal> cube = implicant(q.a, r.model);
    Formula piece;
    if (strategy_ == ItpStrategy::Strongest) {
      for (const auto& v : locals_of(cube, q.shared))
        if (!r.model.has(v)) r.model.set_num(v, 0);
      piece = project(locals_of(cube, q.shared), cube_formula(cube), r.model, ProjStrategy::Mbp);
    } else {
      piece = cube_itp(cube, q);
    }
    RECMC_CHECK(eval(piece, r.model), "interpolant piece misses its cube");
    parts.push_back(piece);
  }
  Formula psi = Formula::disj(parts);
  RECMC_CHECK(is_interpolant(q, psi, s_), "interpolant violates its contract: " + to_sexpr(psi));
  return psi;
}

}  // namespace recmc
