#pragma once

#include "dimlab/capacity.hpp"
#include "dimlab/function.hpp"
#include "dimlab/generator.hpp"
#include "dimlab/rational.hpp"

#include <string>
#include <vector>

namespace dimlab {

struct HolderParams {
  Rat alpha;    // in (0,1), rational for exact certificates
  unsigned N = 1;
  unsigned M = 1;
  Rat r0 = Rat(1);
  Rat K = Rat(1);  // adversary class constant

  void validate() const;
  long p() const;           // numerator of alpha
  unsigned long q() const;  // denominator of alpha
};

struct BVParams {
  unsigned N = 1;
  unsigned M = 1;
  Rat r0 = Rat(1);
  Rat V = Rat(1);  // adversary variation budget

  void validate() const;
};

/// Geometry of the m-block, k-step staircase: unit steps of height
/// jump = r0/(5k) on the mk subintervals [t/(mk), (t+1)/(mk)), with ball
/// radius r1 = r0/(20k) so that jump - 2*r1 = r0/(10k) exactly.
struct StaircasePlan {
  unsigned long long m = 0, k = 0;
  Rat r0;
  Rat jump;
  Rat r1;

  unsigned long long subintervals() const { return m * k; }
  Rat breakpoint(unsigned long long t) const { return Rat(t, subintervals()); }
  void validate() const;
};

/// Disjoint open intervals of equal length around every breakpoint t/(mk),
/// t = 0..mk. The two outermost stick out of [0,1]; keeping all lengths
/// equal makes the budget sum a single exactly-comparable power.
struct IntervalSystem {
  unsigned long long mk = 0;
  Rat half_width;  // a power of 1/2

  Rat length() const { return half_width * 2; }
  unsigned long long count() const { return mk + 1; }
  std::pair<Rat, Rat> interval(unsigned long long t) const;
  bool covers(const Rat& x) const;  // x inside the open union
  IntervalCover as_cover() const;
  void validate() const;
};

enum class Relation { LT, LE };
enum class EntryKind { PowerCmp, Sum, Value };

/// One certified inequality. PowerCmp entries carry both sides as exact
/// coeff*base^(en/ed) values and the verdict comes from integer
/// comparison after clearing the fractional exponents. Sum entries compose
/// previously checked entries (their approx lhs values add); Value entries
/// record a derived quantity.
struct LedgerEntry {
  std::string id;
  EntryKind kind = EntryKind::PowerCmp;
  Relation rel = Relation::LT;
  Power lhs = Power::plain(Rat(0));
  Power rhs = Power::plain(Rat(0));
  std::vector<std::string> terms;  // Sum: ids of composed entries
  double lhs_approx = 0;
  double rhs_approx = 0;
  bool verdict = false;
  bool exact = true;
  std::string note;
};

LedgerEntry power_entry(const std::string& id, const Power& lhs, Relation rel, const Power& rhs,
                        const std::string& note = "");

enum class CertMode { Holder, BV };

struct ConstructionCertificate {
  CertMode mode = CertMode::Holder;
  bool exact = true;
  HolderParams holder;  // meaningful when mode == Holder
  BVParams bv;          // meaningful when mode == BV
  GeneratorSpec f0;
  StaircasePlan plan;
  IntervalSystem system;
  PiecewiseFunction fbar;
  PiecewiseFunction f1;
  std::vector<LedgerEntry> ledger;

  /// 1 - alpha + 1/N (Holder) or 1/2 + 1/N (BV).
  Rat capacity_exponent() const;
  bool accepted() const;
  const LedgerEntry* find(const std::string& id) const;
  Rat class_kv() const { return mode == CertMode::Holder ? holder.K : bv.V; }
};

/// Smallest m passing the modulus requirement with an integer k in the
/// window (C/2 * m^(alpha/(1-alpha)), C * m^(alpha/(1-alpha))), C =
/// (r0/(10K*2^alpha))^(1/(1-alpha)), such that the capacity condition
/// m*(1/(mk))^(1-alpha+1/N) < 1/(2M) holds; k maximal in the window.
StaircasePlan solve_parameters(const HolderParams& params, const ModulusOracle& modulus,
                               unsigned long long m_limit = 2000000);

/// Smallest m (k = m) with (10V/r0 + 1) * m^(-2/N) < 1/(2M) and the
/// modulus requirement.
StaircasePlan solve_bv_parameters(const BVParams& params, const ModulusOracle& modulus,
                                  unsigned long long m_limit = 2000000);

StaircasePlan make_plan(unsigned long long m, unsigned long long k, const Rat& r0);

/// The exact staircase: value base[i] + j*jump on [t/(mk), (t+1)/(mk)),
/// t = i*k + j, plus the single reset point value at 1.
PiecewiseFunction build_staircase(const std::vector<Rat>& f0_at_blocks, const Rat& f0_at_1,
                                  const StaircasePlan& plan);

/// Largest dyadic length with (mk+1) * len^d < budget and len < 1/(mk)
/// (disjointness).
IntervalSystem build_interval_system(const StaircasePlan& plan, const Rat& exponent, const Rat& budget);

/// Linear across every system interval, unchanged outside; throws if a
/// discontinuity of fbar survives outside the covered union.
PiecewiseFunction repair_continuity(const PiecewiseFunction& fbar, const IntervalSystem& system);

/// The separation inequality K * (2/(mk))^alpha < r0/(10k): with it, an
/// adversary of the class cannot climb one staircase step (net r0/(10k)
/// after the 2*r1 slack) over a gap of at most 2/(mk), so the agreement
/// set meets at most one of the k subintervals per block outside the
/// system union.
LedgerEntry certify_separation(const HolderParams& params, const StaircasePlan& plan);

/// Budget entries: the system sum, the m-interval term, and their
/// composition below 1/M.
std::vector<LedgerEntry> capacity_ledger_entries(const ConstructionCertificate& cert);

ConstructionCertificate build_holder_certificate(const HolderParams& params, const GeneratorSpec& f0,
                                                 unsigned long long m_limit = 2000000);
ConstructionCertificate build_holder_certificate_with_plan(const HolderParams& params, const GeneratorSpec& f0,
                                                           unsigned long long m, unsigned long long k);
ConstructionCertificate build_bv_certificate(const BVParams& params, const GeneratorSpec& f0,
                                             unsigned long long m_limit = 2000000);
ConstructionCertificate build_bv_certificate_with_plan(const BVParams& params, const GeneratorSpec& f0,
                                                       unsigned long long m);

/// Full recheck from the primary data: plan identities, staircase and
/// repair reconstruction, and every ledger line recomputed and compared.
/// Returns human-readable problems; empty means the certificate stands.
std::vector<std::string> verify_certificate(const ConstructionCertificate& cert);

// ---- adversary battery and audit ----

struct Adversary {
  std::string id;
  PiecewiseFunction g;
};

struct Probe {
  std::string id;
  PiecewiseFunction f;
};

/// Exact class membership for piecewise-constant/linear functions.
///
/// Lemma: a continuous piecewise-linear g satisfies
/// |g(x)-g(y)| <= K|x-y|^alpha for all x,y iff it does so for all pairs of
/// breakpoints. For x in segment A and y in segment B the map
/// (x,y) -> g(x)-g(y) - K(x-y)^alpha is convex on A x B (affine plus
/// convex, since t^alpha is concave), so its maximum sits at segment
/// endpoints.
bool is_holder_function(const PiecewiseFunction& g, const Rat& alpha, const Rat& K);
bool is_bv_function(const PiecewiseFunction& g, const Rat& V);

/// Closed agreement components of {f = g}; single points have lo == hi,
/// open-cell agreements carry their cell bounds.
struct AgreementComponent {
  Rat lo, hi;
  bool open = false;  // true: component is the open interval (lo, hi)
};
std::vector<AgreementComponent> agreement_set(const PiecewiseFunction& f, const PiecewiseFunction& g);

struct AuditRow {
  std::string adversary_id;
  std::string probe_id;
  long long block = -1;  // -1: pair summary
  unsigned long long l_i = 0;
  double cover_cost = 0;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  unsigned long long pairs = 0;
  unsigned long long max_block_meets = 0;
  unsigned long long max_total_meets = 0;
  double max_cover_cost = 0;
  bool bounds_respected = true;
};

/// Exact agreement audit of a battery against probes in B(f1, r1):
/// per-block meet counts outside the system union, the optimal cover cost
/// of the meet cells at the certificate exponent (plus the system cost),
/// and the class-specific bound checks.
AuditReport empirical_agreement_audit(const ConstructionCertificate& cert, const std::vector<Adversary>& battery,
                                      const std::vector<Probe>& probes, unsigned jobs = 1);

std::vector<Probe> standard_probes(const ConstructionCertificate& cert);
std::vector<Probe> random_probes(const ConstructionCertificate& cert, std::size_t count, std::uint64_t seed);
std::vector<Adversary> holder_battery(const ConstructionCertificate& cert, std::size_t target, std::uint64_t seed);
std::vector<Adversary> bv_battery(const ConstructionCertificate& cert, std::size_t target, std::uint64_t seed);

}  // namespace dimlab
