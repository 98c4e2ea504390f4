#pragma once

#include "dimlab/capacity.hpp"
#include "dimlab/function.hpp"
#include "dimlab/generator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dimlab {

enum class WitnessClass { Holder, BV, Monotone };

/// A subset of the sample grid on which f agrees with some member of the
/// witnessed class, together with an explicit in-class extension and a
/// box-dimension estimate of the subset's cell hull.
struct SubsetWitness {
  WitnessClass cls = WitnessClass::Monotone;
  Rat alpha, K;  // Holder
  Rat V;         // BV
  std::size_t grid_n = 0;
  std::vector<std::size_t> points;  // sorted grid indices
  PiecewiseFunction extension;
  DimensionEstimate dimension;
  bool exact = true;  // exact search vs heuristic
};

/// Pairwise restriction criterion: f restricted to S extends to a
/// Holder(alpha, K) function iff |f(s)-f(t)| <= K|s-t|^alpha on S itself
/// (the lower envelope min_s f(s) + K|x-s|^alpha realises the extension).
/// Float-mode comparison with a relative slack of 1e-12.
bool holder_compatible(const SampledFunction& f, const std::vector<std::size_t>& subset, const Rat& alpha,
                       const Rat& K);

/// Lower envelope extension min over s in S of f(s) + K|x-s|^alpha,
/// materialised as a piecewise-linear interpolant on a refined grid with
/// the subset points pinned exactly.
PiecewiseFunction extend_holder(const SampledFunction& f, const std::vector<std::size_t>& subset,
                                const Rat& alpha, const Rat& K, std::size_t refine = 10);

/// Maximum-cardinality Holder-compatible subset: exact branch and bound on
/// the pairwise-compatibility graph up to `budget` grid points, greedy
/// plus local search above it (witness still valid, maximality then not
/// guaranteed; the result is flagged).
SubsetWitness max_holder_subset(const SampledFunction& f, const Rat& alpha, const Rat& K,
                                std::size_t budget = 20);

/// Sum over consecutive points of S of |f steps|: the least total
/// variation of any function agreeing with f on S. The piecewise-linear
/// interpolant through S attains it, since between consecutive points any
/// function must move by at least |f(next)-f(prev)| and the interpolant
/// moves by exactly that.
double restricted_variation(const SampledFunction& f, const std::vector<std::size_t>& subset);

/// Maximum-cardinality subset with restricted variation <= V, by dynamic
/// programming over (last index, kept count) minimising accumulated
/// variation. Exact for every n.
SubsetWitness max_bv_subset(const SampledFunction& f, const Rat& V);

/// Longest nondecreasing or nonincreasing subsequence (the larger),
/// patience algorithm, with a monotone step extension.
SubsetWitness max_monotone_subset(const SampledFunction& f);

/// Re-check a serialized witness with no access to search internals:
/// extension in class, exact agreement at the subset points, dimension
/// fields consistent.
std::vector<std::string> check_witness(const SubsetWitness& witness, const SampledFunction& f,
                                       double tolerance = 1e-9);

/// Cell hull of grid points at the sample resolution (point i lands in
/// cell i, the last point in the last cell).
GridSubset point_cells(std::size_t grid_n, const std::vector<std::size_t>& points);

/// Dyadic scales 2^-2 .. resolution for dimension estimates.
std::vector<Rat> dyadic_scales(std::size_t grid_n);

struct ProbeRow {
  std::string cls;
  std::string param;
  unsigned trial = 0;
  std::size_t n = 0;
  std::size_t subset_size = 0;
  double box_dim = 0;
  double residual = 0;
  std::string mode;  // exact | heuristic
};

struct ProbeConfig {
  WitnessClass cls = WitnessClass::Holder;
  std::vector<Rat> params;  // alpha values (Holder) or V values (BV)
  Rat K = Rat(1);           // Holder constant
  unsigned trials = 3;
  std::uint64_t seed = 1;
  std::string family = "midpoint:0.5,8";
  std::size_t n = 257;
  std::size_t budget = 20;
  unsigned jobs = 1;
};

/// Deterministic sweep: per (param, trial) generate a function, search,
/// estimate the witness dimension. Rows are sorted by (param, trial), so
/// output is reproducible regardless of worker scheduling. Failures mark
/// the row with mode "failed" and keep going.
std::vector<ProbeRow> threshold_probe(const ProbeConfig& config);

/// Median box dimension per parameter, in parameter order.
std::vector<std::pair<std::string, double>> probe_medians(const std::vector<ProbeRow>& rows);

}  // namespace dimlab
