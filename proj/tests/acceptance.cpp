// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "itp_props.hpp"
#include "mbp_props.hpp"
#include "oracle.hpp"
#include "recmc/driver.hpp"
#include "recmc/generators.hpp"
#include "recmc/interpolation.hpp"
#include "recmc/rpl.hpp"

using namespace recmc;
using namespace recmc::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string example(const std::string& name) { return std::string(RECMC_EXAMPLES) + "/" + name; }

Formula in(const SourceUnit& u, const std::string& proc, const std::string& text) {
  return parse_rpl_formula(text, u.program.proc(proc), u.program);
}

Outcome overview_end_to_end() {
  Clock c;
  SourceUnit u = load_rpl(example("overview.rpl"));
  Verdict v = check(u.program, u.safe);
  double t = c.seconds();
  if (v.kind != VerdictKind::Safe || !v.proof) return {false, std::string("verdict ") + verdict_name(v.kind)};
  Solver s(Sort::Int);
  bool m = s.entails(v.proof->env.get("M"), in(u, "M", "(>= m0 (+ (* 2 m) 4))"));
  bool tt = s.entails(v.proof->env.get("T"), in(u, "T", "(>= t0 (* 2 t))"));
  bool d = s.entails(v.proof->env.get("D"), in(u, "D", "(<= d (- d0 1))"));
  bool ok = v.bound == 1 && t < 5 && m && tt && d && validate_proof(u.program, v.proof->env, u.safe);
  return {ok, "SAFE at n=" + std::to_string(v.bound) + " in " + fmt("%.3fs", t) + ", entailments M " +
                  (m ? "ok" : "no") + " T " + (tt ? "ok" : "no") + " D " + (d ? "ok" : "no")};
}

Outcome qe_trace() {
  SourceUnit u = load_rpl(example("overview.rpl"));
  CheckOptions o;
  o.engine.proj = ProjStrategy::Qe;
  Verdict v = check(u.program, u.safe, o);
  Solver s(Sort::Int);
  std::string reach, query;
  for (const auto& e : v.trace) {
    if (reach.empty() && e.rule == Rule::Reach && e.proc == "D" && e.bound == 0 &&
        s.equivalent(e.formula, in(u, "D", "(= d (- d0 1))")))
      reach = "step " + std::to_string(e.step);
    if (query.empty() && e.rule == Rule::Query && e.target == "T" && e.bound == 1 &&
        s.equivalent(e.formula, in(u, "T", "(< t0 (* 2 t))")))
      query = "step " + std::to_string(e.step);
  }
  return {!reach.empty() && !query.empty(), "Reach d=d0-1 at (D,0): " + (reach.empty() ? "missing" : reach) +
                                                "; Query <T, t0<2t, 0>: " + (query.empty() ? "missing" : query)};
}

Outcome mbp_suite() {
  Clock c;
  std::string detail;
  bool ok = true;
  for (Sort mode : {Sort::Rat, Sort::Int}) {
    Gen g(mode == Sort::Rat ? 101 : 102);
    Var x("x", mode);
    std::vector<Var> others{Var("y", mode), Var("z", mode)};
    std::vector<Var> all{others[0], others[1], x};
    Solver s(mode);
    int done = 0, failed = 0;
    std::size_t widest = 0;
    std::string first;
    while (done < 500) {
      Formula f = random_matrix(g, x, others, 6, mode == Sort::Int);
      auto m = random_model(g, f, all, s);
      if (!m) continue;
      ++done;
      try {
        MbpCheck r = check_mbp(x, f, *m, s);
        widest = std::max(widest, r.image_size);
        if (!r.ok()) {
          ++failed;
          if (first.empty()) first = r.failure + " on " + to_sexpr(f);
        }
      } catch (const Error& err) {
        ++failed;
        if (first.empty()) first = std::string(err.what()) + " on " + to_sexpr(f);
      }
    }
    ok = ok && failed == 0;
    detail += std::string(sort_name(mode)) + " " + std::to_string(done - failed) + "/" + std::to_string(done) +
              " (largest image " + std::to_string(widest) + (first.empty() ? "" : "; first failure " + first) + "), ";
  }
  double t = c.seconds();
  return {ok && t < 60, detail + fmt("%.2fs", t)};
}

Outcome lra_worked_example() {
  const Var x("x", Sort::Rat), e("e", Sort::Rat), l("l", Sort::Rat), u("u", Sort::Rat), a("a", Sort::Rat),
      b("b", Sort::Rat);
  Formula phi1 = lt(T(a), K(0)), phi2 = lt(T(b), K(0));
  Formula lam = Formula::disj({eq(T(x), T(e)) && phi1, lt(T(l), T(x)) && lt(T(x), T(u)), lt(T(x), T(u)) && phi2});
  auto at = [&](long xv, long ev, long av, long bv) {
    Model m;
    m.set_num(x, xv);
    m.set_num(e, ev);
    m.set_num(l, 0);
    m.set_num(u, 2);
    m.set_num(a, av);
    m.set_num(b, bv);
    return m;
  };
  Solver s(Sort::Rat);
  struct Branch {
    const char* name;
    Model m;
    Formula want;
  };
  std::vector<Branch> branches{
      {"x=e", at(1, 1, -1, 5), Formula::disj({phi1, lt(T(l), T(e)) && lt(T(e), T(u)), lt(T(e), T(u)) && phi2})},
      {"l+eps", at(1, 7, 5, 5), lt(T(l), T(u)) || (lt(T(l), T(u)) && phi2)},
      {"-inf", at(-3, 7, 5, -1), phi2},
  };
  int hits = 0;
  for (const auto& br : branches) {
    Formula got = lra_proj(x, lam, br.m);
    if (eval(got, br.m) && s.equivalent(got, br.want)) ++hits;
  }
  bool qe = s.equivalent(lw_qe(x, lam), Formula::disj({phi1, lt(T(l), T(u)), phi2}));
  return {hits == 3 && qe, std::to_string(hits) + "/3 branches, qe " + (qe ? "== phi1 | l<u | phi2" : "differs")};
}

Outcome boolean_differential() {
  int agree = 0, sandwich_ok = 0, unsafe = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SourceUnit u = random_program(1000 + seed, Sort::Bool);
    CheckOptions o;
    o.record_trace = false;
    std::string broken;
    o.observer = [&](const Engine& eng, const TraceEvent&) {
      if (broken.empty()) broken = sandwich_violation(eng);
    };
    Verdict v = check(u.program, u.safe, o);
    bool safe = oracle_safe(u);
    if (!safe) ++unsafe;
    if (v.kind != VerdictKind::Unknown && (v.kind == VerdictKind::Safe) == safe) ++agree;
    if (broken.empty()) ++sandwich_ok;
  }
  return {agree == 200 && sandwich_ok == 200, std::to_string(agree) + "/200 agree (" + std::to_string(unsafe) +
                                                  " unsafe), sandwich held in " + std::to_string(sandwich_ok) + "/200"};
}

Outcome bebop_scaling() {
  Clock c;
  std::vector<double> steps(13, 0);
  bool verdicts = true;
  for (int n = 2; n <= 12; ++n) {
    SourceUnit u = gen_bebop(n);
    CheckOptions o;
    o.record_trace = false;
    Verdict v = check(u.program, u.safe, o);
    verdicts = verdicts && v.kind == VerdictKind::Safe;
    steps[static_cast<std::size_t>(n)] = static_cast<double>(v.stats.steps());
  }
  double t = c.seconds();
  double r12 = steps[12] / 144, r4 = steps[4] / 16;
  std::ostringstream d;
  d << "steps(4)=" << steps[4] << " steps(12)=" << steps[12] << ", ratio " << fmt("%.2f", r12) << " <= 4*"
    << fmt("%.2f", r4) << ", " << fmt("%.2fs", t);
  return {verdicts && r12 <= 4 * r4 && t < 120, d.str()};
}

Outcome gpdr_regression() {
  SourceUnit u = gen_gpdr_divergence();
  Engine eng(u.program, u.safe);
  bool safe = true;
  for (int n = 0; n <= 2; ++n) safe = safe && eng.run(n) == BndVerdict::Safe;
  std::size_t steps = eng.stats().steps();
  Verdict v = check(u.program, u.safe);
  return {safe && steps <= 50000 && v.kind == VerdictKind::Safe,
          "bound 2 " + std::string(safe ? "SAFE" : "not safe") + " after " + std::to_string(steps) +
              " rule applications; full check " + verdict_name(v.kind) + " at n=" + std::to_string(v.bound) + " in " +
              std::to_string(v.stats.steps())};
}

Outcome termination() {
  int exhausted = 0, bad = 0, safe = 0, unsafe = 0, unknown = 0;
  for (Sort mode : {Sort::Rat, Sort::Int})
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      SourceUnit u = random_program(2000 + seed, mode);
      CheckOptions o;
      o.max_bound = 2;
      o.record_trace = false;
      Verdict v = check(u.program, u.safe, o);
      if (v.reason.find("step budget") != std::string::npos) ++exhausted;
      if (v.kind == VerdictKind::Safe) {
        ++safe;
        if (!validate_proof(u.program, v.proof->env, u.safe)) ++bad;
      } else if (v.kind == VerdictKind::Unsafe) {
        ++unsafe;
        if (!validate_cex(u.program, *v.cex, u.safe, v.bound)) ++bad;
      } else {
        ++unknown;
      }
    }
  return {exhausted == 0 && bad == 0, std::to_string(safe) + " safe, " + std::to_string(unsafe) + " unsafe, " +
                                          std::to_string(unknown) + " past bound 2; " + std::to_string(exhausted) +
                                          " budget exhaustions, " + std::to_string(bad) + " invalid witnesses"};
}

Outcome interpolation_contract() {
  std::string detail;
  bool ok = true;
  for (Sort mode : {Sort::Rat, Sort::Int, Sort::Bool}) {
    Gen g(mode == Sort::Rat ? 201 : mode == Sort::Int ? 202 : 203);
    Solver s(mode);
    int done = 0, good = 0;
    std::string first;
    while (done < 500) {
      auto q = random_itp_query(g, mode, s);
      if (!q) continue;
      ++done;
      ItpStrategy strat = done % 2 ? ItpStrategy::Farkas : ItpStrategy::Strongest;
      Interpolator itp(s, strat);
      try {
        if (is_interpolant(*q, itp.itp(*q), s))
          ++good;
        else if (first.empty())
          first = "bad interpolant for " + to_sexpr(q->a) + " / " + to_sexpr(q->b);
      } catch (const Error& err) {
        if (first.empty()) first = std::string(err.what()) + " on " + to_sexpr(q->a) + " / " + to_sexpr(q->b);
      }
    }
    ok = ok && good == done;
    detail += std::string(sort_name(mode)) + " " + std::to_string(good) + "/" + std::to_string(done) +
              (first.empty() ? "" : " (first failure " + first + ")") + " ";
  }
  return {ok, detail + "(alternating farkas/strongest)"};
}

Outcome proof_mutation() {
  struct Source {
    SourceUnit unit;
    Environment proof;
  };
  std::vector<Source> sources;
  std::size_t pool = 0;
  auto add = [&](SourceUnit u) {
    Verdict v = check(u.program, u.safe);
    if (!v.proof) return;
    pool += deletion_mutants(v.proof->env, u.program).size();
    sources.push_back({std::move(u), v.proof->env});
  };
  add(load_rpl(example("overview.rpl")));
  add(gen_gpdr_divergence());
  add(gen_bebop(3));
  for (std::uint64_t seed = 0; seed < 1000 && pool < 100; ++seed)
    for (Sort mode : {Sort::Int, Sort::Rat, Sort::Bool}) add(random_program(3000 + seed, mode));

  int total = 0, rejected = 0;
  for (const auto& src : sources)
    for (const auto& m : deletion_mutants(src.proof, src.unit.program)) {
      if (total == 100) break;
      ++total;
      if (!validate_proof(src.unit.program, m, src.unit.safe)) ++rejected;
    }
  return {total == 100 && rejected >= 95, std::to_string(rejected) + "/" + std::to_string(total) +
                                              " single-conjunct deletions rejected, from " +
                                              std::to_string(sources.size()) + " proofs"};
}

}  // namespace

// Arguments name criteria known to be red; they are still run and printed
// but do not count towards the exit status.
int main(int argc, char** argv) {
  std::set<std::size_t> known_red;
  for (int i = 1; i < argc; ++i) known_red.insert(static_cast<std::size_t>(std::stoul(argv[i])));
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"overview SAFE at n=1 with the expected summaries", overview_end_to_end},
      {"qe trace shows the worked Reach and Query steps", qe_trace},
      {"MBP contract on 500 instances per theory", mbp_suite},
      {"LRA worked example, three branches", lra_worked_example},
      {"200 boolean programs match the explicit oracle", boolean_differential},
      {"bebop steps grow polynomially", bebop_scaling},
      {"GPDR divergence program SAFE at bound 2", gpdr_regression},
      {"random LRA/LIA programs terminate with valid witnesses", termination},
      {"interpolation contract on 500 pairs per theory", interpolation_contract},
      {"proof mutants rejected", proof_mutation},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass && !known_red.count(i + 1)) ++failures;
    std::printf("criterion %zu: %s  %s: %s%s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str(),
                !o.pass && known_red.count(i + 1) ? " (known red)" : "");
    std::fflush(stdout);
  }
  return failures;
}
