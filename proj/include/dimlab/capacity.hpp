#pragma once

#include "dimlab/rational.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace dimlab {

/// A subset of [0,1] given as a union of grid cells at resolution delta:
/// index i stands for the cell [i*delta, (i+1)*delta) intersected with [0,1].
struct GridSubset {
  Rat delta;
  std::vector<std::uint64_t> cells;  // sorted, distinct

  GridSubset() = default;
  GridSubset(Rat d, std::vector<std::uint64_t> c);
  void validate() const;

  /// Maximal runs of consecutive cells as (first, last) index pairs.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> runs() const;
};

/// A finite list of closed intervals with d-cost sum |I|^d.
struct IntervalCover {
  std::vector<std::pair<Rat, Rat>> intervals;  // left <= right
};

/// Sum of |I|^d over the cover, folded left in storage order so that equal
/// covers produce bit-identical doubles. d in (0,1].
double cover_cost(const IntervalCover& cover, double d);

struct OptimalCover {
  double cost = 0;
  IntervalCover cover;
};

/// Minimum of sum |I|^d over all finite interval covers of the cell union,
/// with a witness. Costs are evaluated in doubles from exact lengths.
///
/// Lemma (search space): the minimum is attained by pairwise disjoint
/// intervals whose endpoints are cell endpoints, each spanning a group of
/// consecutive runs. Shrinking any interval to the convex hull of the
/// cells it covers never raises |I|^d, and for d <= 1 merging two
/// overlapping intervals never raises cost either, since
/// |I u J|^d <= (|I|+|J|)^d <= |I|^d + |J|^d. So it suffices to minimise
/// over partitions of the run sequence into consecutive groups, which an
/// O(r^2) dynamic program does exactly.
OptimalCover optimal_cover(const GridSubset& cells, double d);

/// Number of scale-aligned boxes [t*scale, (t+1)*scale) meeting the cell
/// union, with cells treated half-open. Exact rational arithmetic.
std::uint64_t box_count(const GridSubset& cells, const Rat& scale);

struct DimensionEstimate {
  std::vector<double> scales;
  std::vector<std::uint64_t> counts;
  double slope = 0;
  double residual = 0;  // RMS residual of the log-log fit
};

/// Least-squares slope of log N_delta against log(1/delta). Needs >= 3
/// scales, each >= the subset resolution; scales should be nested (e.g.
/// powers of one ratio) so that counts are monotone.
DimensionEstimate estimate_dimension(const GridSubset& cells, const std::vector<Rat>& scales);

}  // namespace dimlab
