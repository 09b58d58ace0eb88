#pragma once

// Benchmark and regression programs, produced as RPL text.

#include <cstdint>
#include <random>
#include <string>

#include "recmc/rpl.hpp"

namespace recmc {

/// main calls P1 twice, each Pi calls P(i+1) twice, PN negates its input.
/// Every Pi below N is the identity, so y = x holds; the unsafe variant
/// asserts y != x instead. Requires n >= 1.
std::string bebop_rpl(int n, bool safe = true);
SourceUnit gen_bebop(int n, bool safe = true);

/// M counts n down through L and increments once through G.
/// Property y0 <= y, integer mode.
std::string gpdr_divergence_rpl();
SourceUnit gen_gpdr_divergence();

struct RandomProgramShape {
  int max_procs = 3;
  int max_formals = 3;  // inputs plus outputs
  int max_locals = 2;
  int max_paths = 4;
  int max_calls = 2;    // per path
  int max_literals = 3; // per path
};

/// A well-formed random program over `mode` with a random property on
/// main's formals. Identical seeds give identical text.
std::string random_program_rpl(std::uint64_t seed, Sort mode, const RandomProgramShape& shape = {});
SourceUnit random_program(std::uint64_t seed, Sort mode, const RandomProgramShape& shape = {});

}  // namespace recmc
