#include "recmc/witness.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "recmc/rpl.hpp"

namespace recmc {
namespace {

constexpr const char* kWitnessHeader = "recmc-witness 1";

void write_node(std::ostream& out, const CexNode& n, int depth, const Program& prog) {
  out << "node " << depth << " " << n.proc << " " << n.path << "\n";
  const Procedure& p = prog.proc(n.proc);
  for (const auto& group : {p.inputs, p.outputs, p.locals})
    for (const auto& v : group)
      if (n.model.has(v)) out << "value " << short_name(v) << " " << value_to_string(n.model.value(v)) << "\n";
  for (const auto& c : n.children) write_node(out, c, depth + 1, prog);
}

std::string one_line(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == '\n' || c == '\r') c = ' ';
  return out;
}

[[noreturn]] void bad(int line, const std::string& msg) { throw SyntaxError(line, 1, msg); }

const Var& lookup(const Procedure& p, const std::string& name, int line) {
  for (const auto& group : {&p.inputs, &p.outputs, &p.locals})
    for (const auto& v : *group)
      if (short_name(v) == name) return v;
  bad(line, p.name + " has no variable " + name);
}

}  // namespace

void write_witness(std::ostream& out, const Verdict& v, const Program& prog) {
  out << kWitnessHeader << "\n";
  out << "verdict " << verdict_name(v.kind) << "\n";
  out << "bound " << v.bound << "\n";
  if (v.proof)
    for (const auto& p : prog.procedures()) out << "proof " << p.name << " " << print_formula(v.proof->env.get(p.name)) << "\n";
  if (v.cex) write_node(out, *v.cex, 0, prog);
  if (v.kind == VerdictKind::Unknown) out << "reason " << one_line(v.reason) << "\n";
  out << "end\n";
}

Witness read_witness(std::istream& in, const Program& prog) {
  Witness w;
  std::string line;
  int no = 0;
  auto next = [&]() {
    while (std::getline(in, line)) {
      ++no;
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next() || line != kWitnessHeader) bad(no, "missing header '" + std::string(kWitnessHeader) + "'");

  std::vector<CexNode*> stack;  // open nodes by depth
  bool ended = false, saw_verdict = false;
  while (!ended && next()) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    std::string rest;
    std::getline(ls >> std::ws, rest);
    if (key == "verdict") {
      saw_verdict = true;
      if (rest == "SAFE")
        w.kind = VerdictKind::Safe;
      else if (rest == "UNSAFE")
        w.kind = VerdictKind::Unsafe;
      else if (rest == "UNKNOWN")
        w.kind = VerdictKind::Unknown;
      else
        bad(no, "unknown verdict " + rest);
    } else if (key == "bound") {
      try {
        w.bound = std::stoi(rest);
      } catch (const std::exception&) {
        bad(no, "bad bound");
      }
    } else if (key == "proof") {
      std::istringstream rs(rest);
      std::string proc;
      rs >> proc;
      if (!prog.has(proc)) bad(no, "unknown procedure " + proc);
      std::string expr;
      std::getline(rs >> std::ws, expr);
      if (!w.proof) w.proof = Environment(Formula::top());
      w.proof->set(proc, parse_rpl_formula(expr, prog.proc(proc), prog));
    } else if (key == "node") {
      std::istringstream rs(rest);
      int depth = -1;
      std::string proc;
      std::size_t path = 0;
      if (!(rs >> depth >> proc >> path) || depth < 0) bad(no, "node needs depth, procedure and path");
      if (!prog.has(proc)) bad(no, "unknown procedure " + proc);
      CexNode node;
      node.proc = proc;
      node.path = path;
      if (depth == 0) {
        if (w.cex) bad(no, "second root node");
        w.cex = node;
        stack.assign(1, &*w.cex);
      } else {
        if (static_cast<std::size_t>(depth) > stack.size()) bad(no, "node skips a level");
        stack.resize(static_cast<std::size_t>(depth));
        stack.back()->children.push_back(node);
        stack.push_back(&stack.back()->children.back());
      }
    } else if (key == "value") {
      if (stack.empty()) bad(no, "value outside a node");
      std::istringstream rs(rest);
      std::string name, text;
      if (!(rs >> name >> text)) bad(no, "value needs a variable and a value");
      const Var& v = lookup(prog.proc(stack.back()->proc), name, no);
      if (v.sort == Sort::Bool) {
        if (text != "true" && text != "false") bad(no, "expected true or false");
        stack.back()->model.set_bool(v, text == "true");
      } else {
        Rational r;
        if (!parse_rational(text, r)) bad(no, "bad number " + text);
        stack.back()->model.set_num(v, r);
      }
    } else if (key == "reason") {
      w.reason = rest;
    } else if (key == "end") {
      ended = true;
    } else {
      bad(no, "unknown entry " + key);
    }
  }
  if (!saw_verdict) bad(no, "no verdict");
  if (!ended) bad(no, "missing end");
  return w;
}

bool check_witness(const Witness& w, const Program& prog, const Formula& safe, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  switch (w.kind) {
    case VerdictKind::Safe:
      if (!w.proof) return fail("SAFE witness without a proof");
      return validate_proof(prog, *w.proof, safe, why);
    case VerdictKind::Unsafe:
      if (!w.cex) return fail("UNSAFE witness without a counterexample");
      return validate_cex(prog, *w.cex, safe, w.bound, why);
    case VerdictKind::Unknown: return fail("UNKNOWN witness: " + w.reason);
  }
  return false;
}

std::string trace_line(const TraceEvent& e) {
  std::ostringstream out;
  out << e.step << " " << e.level << " " << rule_name(e.rule) << " ";
  if (e.query < 0)
    out << "-";
  else
    out << "q" << e.query;
  out << " " << e.proc << " " << e.bound << " " << e.outcome;
  if (e.rule == Rule::Query) out << " -> q" << e.new_query << " " << e.target;
  if (e.rule != Rule::Safe && e.rule != Rule::Unsafe) out << " : " << print_formula(e.formula);
  return out.str();
}

void write_stats(std::ostream& out, const Verdict& v) {
  const EngineStats& s = v.stats;
  out << "recmc-stats 1\n";
  out << "verdict " << verdict_name(v.kind) << "\n";
  out << "bound " << v.bound << "\n";
  out << "steps " << s.steps() << "\n";
  out << "rule Sum " << s.sum << "\n";
  out << "rule Reach " << s.reach << "\n";
  out << "rule Query " << s.query << "\n";
  out << "swept " << s.swept << "\n";
  out << "mbp-calls " << s.projections << "\n";
  out << "interpolants " << s.interpolants << "\n";
  out << "solver-calls " << s.solver_checks << "\n";
  out << "runs " << s.runs << "\n";
  out << "seconds " << std::fixed << std::setprecision(6) << s.seconds << "\n";
}

}  // namespace recmc
