#pragma once

#include "dimlab/rational.hpp"

#include <cstddef>
#include <vector>

namespace dimlab {

/// Uniform samples of a function on [0,1]: point i sits at i/(n-1).
struct SampledFunction {
  std::size_t n = 0;
  std::vector<double> values;

  SampledFunction() = default;
  SampledFunction(std::size_t n_, std::vector<double> v);

  double x(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(n - 1); }
  double delta() const { return 1.0 / static_cast<double>(n - 1); }
  Rat delta_rat() const { return Rat(1, static_cast<long>(n - 1)); }

  void validate() const;
};

enum class PieceKind { Constant, Linear };

/// One piece of a piecewise description on [lo, hi].
/// Constant: value a.  Linear: value a*x + b.
/// Ownership flags say which endpoints the piece's formula governs; every
/// point of [0,1] is owned by exactly one piece. Degenerate pieces
/// (lo == hi) own both ends and carry a single point value, which is how
/// isolated values such as a right-endpoint reset are represented.
struct Piece {
  Rat lo, hi;
  bool own_lo = true, own_hi = false;
  PieceKind kind = PieceKind::Constant;
  Rat a, b;

  Rat value_at(const Rat& x) const { return kind == PieceKind::Constant ? a : a * x + b; }
  bool degenerate() const { return lo == hi; }
};

/// Exact piecewise-constant/linear function on [0,1]. Not necessarily
/// continuous; continuity is a checkable predicate, not an invariant.
struct PiecewiseFunction {
  std::vector<Piece> pieces;

  void validate() const;

  Rat evaluate(const Rat& x) const;
  double evaluate(double x) const { return to_double(evaluate(rat_from_double(x))); }

  bool is_continuous() const;
  SampledFunction sample(std::size_t n) const;

  std::vector<Rat> breakpoints() const;

  static PiecewiseFunction constant(const Rat& c);
  static PiecewiseFunction linear(const Rat& slope, const Rat& intercept);
  /// Continuous piecewise-linear interpolant through (xs[i], ys[i]);
  /// constant before the first node and after the last. xs strictly increasing within [0,1].
  static PiecewiseFunction interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys);
};

PiecewiseFunction scale(const PiecewiseFunction& f, const Rat& c);
PiecewiseFunction add_constant(const PiecewiseFunction& f, const Rat& c);
PiecewiseFunction add(const PiecewiseFunction& f, const PiecewiseFunction& g);

/// Exact sup-norm of f-g over [0,1] (one-sided limits at jumps count).
Rat sup_distance(const PiecewiseFunction& f, const PiecewiseFunction& g);
/// Max |f_i - g_i| over a common grid. Throws on grid mismatch.
double sup_distance(const SampledFunction& f, const SampledFunction& g);

/// Exact total variation: in-piece oscillation plus jump magnitudes at
/// piece boundaries (owned values against one-sided limits).
Rat total_variation(const PiecewiseFunction& f);
double total_variation(const SampledFunction& f);

/// Common refinement of two piecewise functions: on each cell both inputs
/// are a single affine formula. Cells are the open intervals between
/// consecutive ladder points; point values are queried via evaluate().
struct RefinedCell {
  Rat lo, hi;       // lo < hi
  Rat fa, fb;       // f = fa*x + fb on (lo, hi)
  Rat ga, gb;       // g = ga*x + gb on (lo, hi)
};
std::vector<RefinedCell> refine_pair(const PiecewiseFunction& f, const PiecewiseFunction& g);

/// Ladder of all breakpoints of f and g merged (sorted, distinct).
std::vector<Rat> merged_breakpoints(const PiecewiseFunction& f, const PiecewiseFunction& g);

}  // namespace dimlab
