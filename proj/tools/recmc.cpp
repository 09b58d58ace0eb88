// recmc: command-line front end.
//
//   recmc check FILE [--max-bound N] [--mode auto|bool|rat|int] [--proj mbp|qe]
//                    [--itp strongest|farkas] [--witness PATH] [--trace PATH]
//                    [--stats] [--step-budget N]
//   recmc validate FILE WITNESS
//   recmc gen bebop N [--unsafe] | gen gpdr | gen random --mode M --seed S
//
// Exit codes: 0 SAFE (or a valid witness), 1 UNSAFE (or an invalid
// witness), 2 UNKNOWN, 3 usage, parse or I/O error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "recmc/driver.hpp"
#include "recmc/generators.hpp"
#include "recmc/rpl.hpp"
#include "recmc/witness.hpp"

namespace {

using namespace recmc;

enum class LogLevel { Off, Info, Trace };

LogLevel log_level() {
  const char* env = std::getenv("RECMC_LOG");
  std::string v = env ? env : "";
  if (v == "trace") return LogLevel::Trace;
  if (v == "info") return LogLevel::Info;
  return LogLevel::Off;
}

std::optional<Sort> mode_override(const std::string& m) {
  if (m == "bool") return Sort::Bool;
  if (m == "rat") return Sort::Rat;
  if (m == "int") return Sort::Int;
  return std::nullopt;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  return out;
}

void print_cex(const CexNode& n, const Program& prog, int depth) {
  std::cout << std::string(static_cast<std::size_t>(2 * depth), ' ') << n.proc << " path " << n.path << ":";
  const Procedure& p = prog.proc(n.proc);
  for (const auto& v : p.formals()) std::cout << " " << short_name(v) << "=" << value_to_string(n.model.value(v));
  std::cout << "\n";
  for (const auto& c : n.children) print_cex(c, prog, depth + 1);
}

struct CheckArgs {
  std::string file;
  int max_bound = 64;
  std::string mode = "auto";
  std::string proj = "mbp";
  std::string itp = "farkas";
  std::string witness, trace;
  bool stats = false;
  std::size_t step_budget = EngineOptions{}.step_budget;
};

int run_check(const CheckArgs& a) {
  SourceUnit unit = load_rpl(a.file, mode_override(a.mode));
  CheckOptions opts;
  opts.max_bound = a.max_bound;
  opts.engine.proj = a.proj == "qe" ? ProjStrategy::Qe : ProjStrategy::Mbp;
  opts.engine.itp = a.itp == "strongest" ? ItpStrategy::Strongest : ItpStrategy::Farkas;
  opts.engine.step_budget = a.step_budget;
  opts.record_trace = !a.trace.empty();

  const LogLevel level = log_level();
  if (level != LogLevel::Off)
    opts.observer = [level](const Engine&, const TraceEvent& e) {
      if (level == LogLevel::Trace || e.rule == Rule::Safe || e.rule == Rule::Unsafe) std::cerr << trace_line(e) << "\n";
    };

  Verdict v = check(unit.program, unit.safe, opts);

  std::cout << verdict_name(v.kind);
  if (v.kind == VerdictKind::Unknown) std::cout << " " << v.reason;
  std::cout << "\n";
  if (v.proof)
    for (const auto& p : unit.program.procedures())
      std::cout << "  " << p.name << ": " << print_formula(v.proof->env.get(p.name)) << "\n";
  if (v.cex) print_cex(*v.cex, unit.program, 1);

  if (!a.witness.empty()) {
    std::ofstream out = open_out(a.witness);
    write_witness(out, v, unit.program);
  }
  if (!a.trace.empty()) {
    std::ofstream out = open_out(a.trace);
    for (const auto& e : v.trace) out << trace_line(e) << "\n";
  }
  if (a.stats) write_stats(std::cout, v);

  switch (v.kind) {
    case VerdictKind::Safe: return 0;
    case VerdictKind::Unsafe: return 1;
    case VerdictKind::Unknown: return 2;
  }
  return 3;
}

int run_validate(const std::string& file, const std::string& witness) {
  SourceUnit unit = load_rpl(file);
  std::ifstream in(witness);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + witness);
  Witness w = read_witness(in, unit.program);
  std::string why;
  if (check_witness(w, unit.program, unit.safe, &why)) {
    std::cout << "VALID " << verdict_name(w.kind) << "\n";
    return 0;
  }
  std::cout << "INVALID " << why << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safety checking of recursive programs"};
  app.require_subcommand(1);

  CheckArgs ca;
  CLI::App* check = app.add_subcommand("check", "Check the property of a program");
  check->add_option("file", ca.file, "RPL program")->required();
  check->add_option("--max-bound", ca.max_bound, "Largest stack bound to try")->check(CLI::NonNegativeNumber);
  check->add_option("--mode", ca.mode, "Theory, or auto to use the file's")
      ->check(CLI::IsMember({"auto", "bool", "rat", "int"}));
  check->add_option("--proj", ca.proj, "Projection in Reach and Query")->check(CLI::IsMember({"mbp", "qe"}));
  check->add_option("--itp", ca.itp, "Interpolation in Sum")->check(CLI::IsMember({"strongest", "farkas"}));
  check->add_option("--witness", ca.witness, "Write the proof or counterexample here");
  check->add_option("--trace", ca.trace, "Write one line per rule application here");
  check->add_flag("--stats", ca.stats, "Print rule and solver counts");
  check->add_option("--step-budget", ca.step_budget, "Give up after this many rule applications");

  std::string vfile, vwitness;
  CLI::App* validate = app.add_subcommand("validate", "Check a witness against a program");
  validate->add_option("file", vfile, "RPL program")->required();
  validate->add_option("witness", vwitness, "Witness file")->required();

  CLI::App* gen = app.add_subcommand("gen", "Print a generated program");
  gen->require_subcommand(1);
  int bebop_n = 1;
  bool unsafe = false;
  CLI::App* bebop = gen->add_subcommand("bebop", "Doubling call tree over booleans");
  bebop->add_option("n", bebop_n, "Number of levels")->required()->check(CLI::PositiveNumber);
  bebop->add_flag("--unsafe", unsafe, "Flip the property");
  CLI::App* gpdr = gen->add_subcommand("gpdr", "Counter program with a diverging over-approximation sequence");
  std::string rmode = "int";
  std::uint64_t seed = 0;
  CLI::App* random = gen->add_subcommand("random", "Random program");
  random->add_option("--mode", rmode, "Theory")->check(CLI::IsMember({"bool", "rat", "int"}));
  random->add_option("--seed", seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (*check) return run_check(ca);
    if (*validate) return run_validate(vfile, vwitness);
    if (*bebop) std::cout << bebop_rpl(bebop_n, !unsafe);
    if (*gpdr) std::cout << gpdr_divergence_rpl();
    if (*random) std::cout << random_program_rpl(seed, *mode_override(rmode));
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
