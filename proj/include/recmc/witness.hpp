#pragma once

// Line-oriented text formats for witnesses, traces and statistics.
//
// Witness:
//
//   recmc-witness 1
//   verdict SAFE|UNSAFE|UNKNOWN
//   bound N
//   proof PROC EXPR           one per procedure (SAFE)
//   node DEPTH PROC PATH      pre-order, depth 0 is main (UNSAFE)
//   value VAR VALUE           after its node, short variable names
//   reason TEXT               (UNKNOWN)
//   end
//
// Stats:
//
//   recmc-stats 1
//   verdict V
//   bound N
//   steps N
//   rule Sum|Reach|Query N
//   swept N
//   mbp-calls N
//   interpolants N
//   solver-calls N
//   runs N
//   seconds S

#include <iosfwd>
#include <optional>
#include <string>

#include "recmc/driver.hpp"

namespace recmc {

void write_witness(std::ostream& out, const Verdict& v, const Program& prog);

/// What a witness file claims, re-read against a program.
struct Witness {
  VerdictKind kind = VerdictKind::Unknown;
  int bound = 0;
  std::optional<Environment> proof;
  std::optional<CexNode> cex;
  std::string reason;
};

/// Throws SyntaxError (line, column 1) or ValidationError.
Witness read_witness(std::istream& in, const Program& prog);

/// Checks the claim with validate_proof / validate_cex. An UNKNOWN witness
/// has nothing to check and is rejected.
bool check_witness(const Witness& w, const Program& prog, const Formula& safe, std::string* why = nullptr);

/// One line: step level rule query proc bound outcome, then the formula.
std::string trace_line(const TraceEvent& e);

void write_stats(std::ostream& out, const Verdict& v);

}  // namespace recmc
