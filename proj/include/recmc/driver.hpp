#pragma once

// The iterative-deepening loop around bounded safety: inductiveness checks
// with push generalization, counterexample assembly, and independent
// validators for both kinds of witness.

#include <optional>
#include <string>
#include <vector>

#include "recmc/engine.hpp"

namespace recmc {

/// An environment that is safe (main implies the property) and inductive
/// (every body, instantiated with it, implies its own formula).
struct SafetyProof {
  Environment env;
  int bound = 0;  // n at convergence
  int level = 0;  // the sigma level the proof was read from
};

struct CexNode {
  std::string proc;
  std::size_t path = 0;
  Model model;  // formals and locals
  std::vector<CexNode> children;  // one per call, in path order
};

enum class VerdictKind { Safe, Unsafe, Unknown };

const char* verdict_name(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<SafetyProof> proof;
  std::optional<CexNode> cex;
  std::string reason;  // Unknown only
  int bound = 0;       // last n tried
  EngineStats stats;
  std::vector<TraceEvent> trace;
};

struct CheckOptions {
  int max_bound = 64;
  EngineOptions engine;
  bool record_trace = true;
  Engine::Observer observer;
};

Verdict check(const Program& prog, const Formula& safe, const CheckOptions& opts = {});

/// Pushes sigma facts upward level by level from 0 to n. Returns the first
/// level k whose facts all propagate, i.e. O^k is inductive; nullopt if none.
std::optional<int> check_inductive(const Program& prog, AssertionMap& sigma, int n, Solver& s);

/// Reassembles a counterexample from rho provenance. Throws ProvenanceGap.
CexNode build_cex(const Program& prog, const AssertionMap& rho, const Formula& safe, int n, Solver& s);

/// Both checks run on a fresh solver.
bool validate_proof(const Program& prog, const Environment& proof, const Formula& safe,
                    std::string* why = nullptr);
/// `n` bounds the tree depth; boolean programs are also checked against
/// the explicit bounded semantics of main.
bool validate_cex(const Program& prog, const CexNode& root, const Formula& safe, int n,
                  std::string* why = nullptr);

}  // namespace recmc
