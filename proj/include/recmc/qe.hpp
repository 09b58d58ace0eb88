#pragma once

// Quantifier elimination and model-based projection for linear rational
// (Loos-Weispfenning) and linear integer (Cooper) arithmetic.

#include <cstddef>
#include <vector>

#include "recmc/logic.hpp"

namespace recmc {

/// Rewrites non-strict bounds on x into (l<x | x=l) / (x<u | x=u).
Formula lw_prepare(const Var& x, const Formula& f);

/// Exists x. f over the rationals.
Formula lw_qe(const Var& x, const Formula& f);
/// Model-guided branch of lw_qe; M |= result and result => exists x. f.
Formula lra_proj(const Var& x, const Formula& f, const Model& m);

/// The three virtual substitutions over a prepared matrix.
Formula lw_sub_term(const Var& x, const Formula& f, const LinTerm& e);
Formula lw_sub_eps(const Var& x, const Formula& f, const LinTerm& l);
Formula lw_sub_minf(const Var& x, const Formula& f);

/// Exists x. f over the integers; x must occur with coefficient +-1.
Formula cooper_qe(const Var& x, const Formula& f);
/// Model-guided branch of cooper_qe.
Formula lia_proj(const Var& x, const Formula& f, const Model& m);
/// cooper substitution of -infinity with x := i in divisibility literals.
Formula cooper_sub_minf(const Var& x, const Formula& f, const Integer& i);

/// lia_normalize followed by cooper_qe / lia_proj on the scaled variable.
Formula int_qe(const Var& x, const Formula& f);
Formula int_proj(const Var& x, const Formula& f, const Model& m);

enum class ProjStrategy { Mbp, Qe };

const char* proj_strategy_name(ProjStrategy s);

/// Eliminates `vars` (last first). Boolean variables are substituted by
/// their model value (mbp) or Shannon-expanded (qe).
Formula project(const std::vector<Var>& vars, const Formula& f, const Model& m, ProjStrategy s);

/// Bounds of the projection image for x in f, counted on the prepared matrix.
struct ProjectionShape {
  std::size_t eq_terms = 0;
  std::size_t lower_bounds = 0;
  Integer divisor_lcm = 1;  // D, integer mode only

  /// |image| <= this.
  Integer image_bound(Sort mode) const;
};

ProjectionShape projection_shape(const Var& x, const Formula& f);

}  // namespace recmc
