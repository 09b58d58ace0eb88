#pragma once

// RPL, the s-expression input format:
//
//   (program
//     (mode int)
//     (procedure D (in d0) (out d) (local) (body (= d (- d0 1))))
//     ...
//     (main M)
//     (assert-safe (>= m0 (+ (* 2 m) 4))))
//
// Variables are namespaced by their procedure ("D.d0") once parsed.

#include <optional>
#include <string>

#include "recmc/program.hpp"

namespace recmc {

struct SourceUnit {
  Program program;
  Formula safe;  // over the formals of main
};

/// Throws SyntaxError with a position, or ValidationError / ArityMismatch.
/// `mode` overrides the (mode ...) declaration.
SourceUnit parse_rpl(const std::string& text, std::optional<Sort> mode = std::nullopt);
SourceUnit load_rpl(const std::string& path, std::optional<Sort> mode = std::nullopt);

std::string print_rpl(const SourceUnit& unit);

/// Parses an expression in the scope of procedure `proc`.
Formula parse_rpl_formula(const std::string& text, const Procedure& proc, const Program& prog);

/// Prints variables without their procedure namespace.
std::string short_name(const Var& v);
std::string print_formula(const Formula& f);

}  // namespace recmc
