#include "dimlab/construction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dimlab {

namespace mp = boost::multiprecision;

void HolderParams::validate() const {
  if (!(alpha > 0 && alpha < 1))
    throw std::invalid_argument("HolderParams: alpha must be in (0,1); alpha = 1 reduces to the "
                                "intersection of the alpha = 1 - 1/L certificates");
  if (N < 1 || M < 1) throw std::invalid_argument("HolderParams: N, M >= 1");
  if (r0 <= 0) throw std::invalid_argument("HolderParams: r0 > 0");
  if (K <= 0) throw std::invalid_argument("HolderParams: K > 0");
  if (mp::denominator(alpha) > 1000000) throw std::invalid_argument("HolderParams: alpha denominator too large");
}

long HolderParams::p() const { return mp::numerator(alpha).convert_to<long>(); }
unsigned long HolderParams::q() const { return mp::denominator(alpha).convert_to<unsigned long>(); }

void BVParams::validate() const {
  if (N < 1 || M < 1) throw std::invalid_argument("BVParams: N, M >= 1");
  if (r0 <= 0) throw std::invalid_argument("BVParams: r0 > 0");
  if (V <= 0) throw std::invalid_argument("BVParams: V > 0");
}

void StaircasePlan::validate() const {
  if (m < 1 || k < 1) throw std::invalid_argument("StaircasePlan: m, k >= 1");
  if (r0 <= 0) throw std::invalid_argument("StaircasePlan: r0 > 0");
  if (jump != r0 / Rat(5 * Int(k))) throw std::invalid_argument("StaircasePlan: jump != r0/(5k)");
  if (r1 != r0 / Rat(20 * Int(k))) throw std::invalid_argument("StaircasePlan: r1 != r0/(20k)");
  if (jump - 2 * r1 != r0 / Rat(10 * Int(k))) throw std::logic_error("StaircasePlan: step slack broken");
}

StaircasePlan make_plan(unsigned long long m, unsigned long long k, const Rat& r0) {
  StaircasePlan plan;
  plan.m = m;
  plan.k = k;
  plan.r0 = r0;
  plan.jump = r0 / Rat(5 * Int(k));
  plan.r1 = r0 / Rat(20 * Int(k));
  plan.validate();
  return plan;
}

std::pair<Rat, Rat> IntervalSystem::interval(unsigned long long t) const {
  Rat c(t, mk);
  return {c - half_width, c + half_width};
}

bool IntervalSystem::covers(const Rat& x) const {
  // distance to the nearest multiple of 1/mk below half_width
  Rat scaled = x * Rat(mk);
  Int nearest = floor_rat(scaled + Rat(1, 2));
  if (nearest < 0) nearest = 0;
  if (nearest > Int(mk)) nearest = Int(mk);
  Rat dist = x - Rat(nearest, Int(mk));
  if (dist < 0) dist = -dist;
  return dist < half_width;
}

IntervalCover IntervalSystem::as_cover() const {
  IntervalCover cover;
  cover.intervals.reserve(count());
  for (unsigned long long t = 0; t <= mk; ++t) cover.intervals.push_back(interval(t));
  return cover;
}

void IntervalSystem::validate() const {
  if (mk < 1) throw std::invalid_argument("IntervalSystem: empty plan");
  if (half_width <= 0) throw std::invalid_argument("IntervalSystem: half_width > 0");
  if (length() >= Rat(1, mk)) throw std::invalid_argument("IntervalSystem: intervals not disjoint");
}

LedgerEntry power_entry(const std::string& id, const Power& lhs, Relation rel, const Power& rhs,
                        const std::string& note) {
  LedgerEntry e;
  e.id = id;
  e.kind = EntryKind::PowerCmp;
  e.rel = rel;
  e.lhs = lhs;
  e.rhs = rhs;
  e.lhs_approx = lhs.approx();
  e.rhs_approx = rhs.approx();
  int c = compare_powers(lhs, rhs);
  e.verdict = rel == Relation::LT ? c < 0 : c <= 0;
  e.note = note;
  return e;
}

Rat ConstructionCertificate::capacity_exponent() const {
  if (mode == CertMode::Holder) return 1 - holder.alpha + Rat(1, holder.N);
  return Rat(1, 2) + Rat(1, bv.N);
}

bool ConstructionCertificate::accepted() const {
  if (ledger.empty()) return false;
  for (const LedgerEntry& e : ledger)
    if (!e.verdict) return false;
  return true;
}

const LedgerEntry* ConstructionCertificate::find(const std::string& id) const {
  for (const LedgerEntry& e : ledger)
    if (e.id == id) return &e;
  return nullptr;
}

namespace {

// exponent as (num, den) of the lowest-terms fraction
void frac_of(const Rat& d, long& num, unsigned long& den) {
  num = mp::numerator(d).convert_to<long>();
  den = mp::denominator(d).convert_to<unsigned long>();
}

Power half_budget(unsigned M) { return Power::plain(Rat(1, 2 * static_cast<unsigned long long>(M))); }

}  // namespace

StaircasePlan solve_parameters(const HolderParams& params, const ModulusOracle& modulus,
                               unsigned long long m_limit) {
  params.validate();
  long p = params.p();
  unsigned long q = params.q();
  unsigned e = static_cast<unsigned>(q - static_cast<unsigned long>(p));
  Rat mod_cap = params.r0 / 5;
  Rat exponent = 1 - params.alpha + Rat(1, params.N);
  long dn;
  unsigned long dd;
  frac_of(exponent, dn, dd);
  Rat R_coeff = pow_rat(params.r0 / (10 * params.K), static_cast<long>(q));

  bool mod_ok = false;
  for (unsigned long long m = 1; m <= m_limit; ++m) {
    if (!mod_ok) {
      if (modulus.bound(Rat(2, m)) < mod_cap)
        mod_ok = true;
      else
        continue;
    }
    // largest integer k with k^(q-p) < R, R = (r0/(10K))^q * (m/2)^p
    Rat R = R_coeff * pow_rat(Rat(m, 2), p);
    Int kmax = kth_root_floor(R, e);
    if (kmax >= 1 && pow_rat(Rat(kmax), static_cast<long>(e)) == R) --kmax;
    if (kmax < 1) continue;
    // window lower end: need kmax^(q-p) * 2^(q-p) > R
    if (!(pow_rat(Rat(kmax), static_cast<long>(e)) * pow_rat(Rat(2), static_cast<long>(e)) > R)) continue;
    if (Int(m) * kmax > 50000000)
      throw std::invalid_argument("solve_parameters: minimal plan exceeds desk scale (mk too large)");
    unsigned long long k = kmax.convert_to<unsigned long long>();
    // capacity condition, monotone in k, so the maximal k is the best try
    Power lhs{Rat(m), Rat(1, m * k), dn, dd};
    if (!power_lt(lhs, half_budget(params.M))) continue;
    return make_plan(m, k, params.r0);
  }
  throw std::invalid_argument("solve_parameters: no plan within m <= " + std::to_string(m_limit));
}

StaircasePlan solve_bv_parameters(const BVParams& params, const ModulusOracle& modulus,
                                  unsigned long long m_limit) {
  params.validate();
  Rat mod_cap = params.r0 / 5;
  Rat coeff = 10 * params.V / params.r0 + 1;
  bool mod_ok = false;
  for (unsigned long long m = 1; m <= m_limit; ++m) {
    if (!mod_ok) {
      if (modulus.bound(Rat(2, m)) < mod_cap)
        mod_ok = true;
      else
        continue;
    }
    Power lhs{coeff, Rat(1, m * m), 1, params.N};
    if (!power_lt(lhs, half_budget(params.M))) continue;
    return make_plan(m, m, params.r0);
  }
  throw std::invalid_argument("solve_bv_parameters: no plan within m <= " + std::to_string(m_limit));
}

PiecewiseFunction build_staircase(const std::vector<Rat>& f0_at_blocks, const Rat& f0_at_1,
                                  const StaircasePlan& plan) {
  if (f0_at_blocks.size() != plan.m) throw std::invalid_argument("build_staircase: need one base value per block");
  unsigned long long mk = plan.subintervals();
  PiecewiseFunction f;
  f.pieces.reserve(mk + 1);
  for (unsigned long long t = 0; t < mk; ++t) {
    unsigned long long i = t / plan.k, j = t % plan.k;
    Piece piece;
    piece.lo = plan.breakpoint(t);
    piece.hi = plan.breakpoint(t + 1);
    piece.own_lo = true;
    piece.own_hi = false;
    piece.kind = PieceKind::Constant;
    piece.a = f0_at_blocks[i] + Rat(j) * plan.jump;
    f.pieces.push_back(std::move(piece));
  }
  Piece reset;  // the staircase resets to the center value at the right end
  reset.lo = reset.hi = 1;
  reset.own_lo = reset.own_hi = true;
  reset.kind = PieceKind::Constant;
  reset.a = f0_at_1;
  f.pieces.push_back(std::move(reset));
  f.validate();
  return f;
}

IntervalSystem build_interval_system(const StaircasePlan& plan, const Rat& exponent, const Rat& budget) {
  if (!(exponent > 0 && exponent <= 2)) throw std::invalid_argument("build_interval_system: exponent out of range");
  if (budget <= 0) throw std::invalid_argument("build_interval_system: budget > 0");
  long dn;
  unsigned long dd;
  frac_of(exponent, dn, dd);
  unsigned long long mk = plan.subintervals();
  IntervalSystem sys;
  sys.mk = mk;
  Rat len(1, 2);
  for (int s = 1; s <= 4096; ++s, len /= 2) {
    if (!(len < Rat(1, mk))) continue;  // disjointness first
    Power cost{Rat(mk + 1), len, dn, dd};
    if (power_lt(cost, Power::plain(budget))) {
      sys.half_width = len / 2;
      sys.validate();
      return sys;
    }
  }
  throw std::logic_error("build_interval_system: no dyadic width satisfied the budget");
}

PiecewiseFunction repair_continuity(const PiecewiseFunction& fbar, const IntervalSystem& system) {
  unsigned long long mk = system.mk;
  Rat eps = system.half_width;
  PiecewiseFunction out;
  auto append_linear = [&](const Rat& lo, const Rat& hi, const Rat& vlo, const Rat& vhi) {
    if (lo == hi) return;
    Piece p;
    p.lo = lo;
    p.hi = hi;
    p.own_lo = true;
    p.own_hi = false;
    if (vlo == vhi) {
      p.kind = PieceKind::Constant;
      p.a = vlo;
    } else {
      p.kind = PieceKind::Linear;
      p.a = (vhi - vlo) / (hi - lo);
      p.b = vlo - p.a * lo;
    }
    out.pieces.push_back(std::move(p));
  };
  // copy fbar's pieces over [lo, hi], clipped; gaps arrive left to right so
  // a persistent cursor keeps the whole pass linear
  std::size_t cursor = 0;
  auto append_copy = [&](const Rat& lo, const Rat& hi) {
    if (lo == hi) return;
    while (cursor < fbar.pieces.size() &&
           (fbar.pieces[cursor].degenerate() || fbar.pieces[cursor].hi <= lo))
      ++cursor;
    for (std::size_t i = cursor; i < fbar.pieces.size(); ++i) {
      const Piece& p = fbar.pieces[i];
      if (p.degenerate()) continue;
      if (p.lo >= hi) break;
      Rat a = std::max(p.lo, lo), b = std::min(p.hi, hi);
      if (a == b) continue;
      Piece q = p;
      q.lo = a;
      q.hi = b;
      q.own_lo = true;
      q.own_hi = false;
      out.pieces.push_back(std::move(q));
    }
  };
  Rat prev_end(0);
  for (unsigned long long t = 0; t <= mk; ++t) {
    auto [ilo, ihi] = system.interval(t);
    Rat lo = ilo < 0 ? Rat(0) : ilo;
    Rat hi = ihi > 1 ? Rat(1) : ihi;
    append_copy(prev_end, lo);
    append_linear(lo, hi, fbar.evaluate(lo), fbar.evaluate(hi));
    prev_end = hi;
  }
  append_copy(prev_end, Rat(1));
  if (out.pieces.empty() || out.pieces.back().hi != 1)
    throw std::logic_error("repair_continuity: tiling failed");
  out.pieces.back().own_hi = true;
  out.validate();
  if (!out.is_continuous())
    throw std::invalid_argument("repair_continuity: a discontinuity lies outside the covered union");
  return out;
}

LedgerEntry certify_separation(const HolderParams& params, const StaircasePlan& plan) {
  Power lhs{params.K, Rat(2, plan.subintervals()), params.p(), params.q()};
  Power rhs = Power::plain(plan.r0 / Rat(10 * Int(plan.k)));
  return power_entry("gyok1", lhs, Relation::LT, rhs,
                     "class slope over a two-subinterval gap stays below one step minus the ball slack");
}

std::vector<LedgerEntry> capacity_ledger_entries(const ConstructionCertificate& cert) {
  std::vector<LedgerEntry> out;
  Rat d = cert.capacity_exponent();
  long dn;
  unsigned long dd;
  frac_of(d, dn, dd);
  unsigned M = cert.mode == CertMode::Holder ? cert.holder.M : cert.bv.M;
  const StaircasePlan& plan = cert.plan;
  unsigned long long mk = plan.subintervals();

  std::string sum_id = cert.mode == CertMode::Holder ? "ii" : "ii2";
  out.push_back(power_entry(sum_id, Power{Rat(mk + 1), cert.system.length(), dn, dd}, Relation::LT,
                            half_budget(M), "system budget: (mk+1) equal intervals"));

  if (cert.mode == CertMode::Holder) {
    out.push_back(power_entry("pre", Power{Rat(plan.m), Rat(1, mk), dn, dd}, Relation::LT, half_budget(M),
                              "m witness intervals of length 1/(mk)"));
  } else {
    Rat coeff = 10 * cert.bv.V / plan.r0 + 1;
    out.push_back(power_entry("bv", Power{coeff, Rat(1, plan.m * plan.m), 1, cert.bv.N}, Relation::LT,
                              half_budget(M), "(m + 10kV/r0) witness intervals of length 1/(mk), k = m"));
    LedgerEntry count;
    count.id = "count_budget";
    count.kind = EntryKind::Value;
    count.lhs = Power::plain(Rat(plan.m) + Rat(10 * Int(plan.k)) * cert.bv.V / plan.r0);
    count.rhs = count.lhs;
    count.lhs_approx = count.rhs_approx = count.lhs.approx();
    count.verdict = true;
    count.note = "max subinterval meets: each extra meet costs variation at least r0/(10k)";
    out.push_back(count);
  }

  LedgerEntry total;
  total.id = "capacity_total";
  total.kind = EntryKind::Sum;
  total.rel = Relation::LT;
  total.terms = {sum_id, cert.mode == CertMode::Holder ? "pre" : "bv"};
  total.rhs = Power::plain(Rat(1, M));
  total.rhs_approx = total.rhs.approx();
  total.lhs_approx = 0;
  total.verdict = true;
  for (const std::string& tid : total.terms) {
    const LedgerEntry* term = nullptr;
    for (const LedgerEntry& e : out)
      if (e.id == tid) term = &e;
    total.lhs_approx += term->lhs_approx;
    total.verdict = total.verdict && term->verdict;
  }
  total.note = "witness cover cost: both halves below 1/(2M)";
  out.push_back(total);
  return out;
}

namespace {

struct F0View {
  GeneratorSpec spec;
  bool exact = false;
  PiecewiseFunction pw;      // when exact
  SampledFunction samples;   // when not exact
  ModulusOracle modulus;

  Rat at(const Rat& x) const {
    if (exact) return pw.evaluate(x);
    double xd = to_double(x);
    // nearest sample; fine for the flagged non-exact path
    std::size_t i = static_cast<std::size_t>(std::llround(xd * static_cast<double>(samples.n - 1)));
    return rat_from_double(samples.values[std::min(i, samples.n - 1)]);
  }
};

F0View make_f0_view(const GeneratorSpec& spec) {
  F0View v;
  v.spec = spec;
  v.exact = has_exact_form(spec);
  if (v.exact)
    v.pw = to_piecewise(spec);
  else
    v.samples = generate(spec);
  try {
    v.modulus = modulus_oracle(spec);
  } catch (const UnsupportedOracle&) {
    if (v.exact) throw;
    v.modulus = heuristic_modulus(v.samples);
  }
  return v;
}

LedgerEntry plain_entry(const std::string& id, const Rat& lhs, Relation rel, const Rat& rhs, bool exact,
                        const std::string& note) {
  LedgerEntry e = power_entry(id, Power::plain(lhs), rel, Power::plain(rhs), note);
  e.exact = exact;
  return e;
}

ConstructionCertificate assemble(CertMode mode, const HolderParams& hp, const BVParams& bp,
                                 const GeneratorSpec& f0, const StaircasePlan& plan) {
  ConstructionCertificate cert;
  cert.mode = mode;
  cert.holder = hp;
  cert.bv = bp;
  cert.f0 = f0;
  cert.plan = plan;

  F0View view = make_f0_view(f0);
  cert.exact = view.exact && view.modulus.exact;

  std::vector<Rat> bases(plan.m);
  for (unsigned long long i = 0; i < plan.m; ++i) bases[i] = view.at(Rat(i, plan.m));
  Rat f0_at_1 = view.at(Rat(1));
  cert.fbar = build_staircase(bases, f0_at_1, plan);

  unsigned M = mode == CertMode::Holder ? hp.M : bp.M;
  cert.system = build_interval_system(plan, cert.capacity_exponent(), Rat(1, 2 * static_cast<long long>(M)));
  cert.f1 = repair_continuity(cert.fbar, cert.system);

  Rat r0 = plan.r0;
  std::vector<LedgerEntry>& ledger = cert.ledger;
  ledger.push_back(plain_entry("modulus", view.modulus.bound(Rat(2, plan.m)), Relation::LT, r0 / 5,
                               view.modulus.exact, "oscillation of the center over 2/m stays below r0/5"));
  {
    Rat stair = view.exact ? sup_distance(view.pw, cert.fbar) : Rat(0);
    if (!view.exact) {
      // grid estimate only; flagged
      double worst = 0;
      for (std::size_t i = 0; i < view.samples.n; ++i) {
        double x = view.samples.x(i);
        worst = std::max(worst, std::fabs(view.samples.values[i] - cert.fbar.evaluate(x)));
      }
      stair = rat_from_double(worst);
    }
    ledger.push_back(plain_entry("stair_dist", stair, Relation::LE, 2 * r0 / 5, view.exact,
                                 "sup distance center vs staircase"));
  }
  Rat repair = sup_distance(cert.fbar, cert.f1);
  ledger.push_back(plain_entry("repair_dist", repair, Relation::LE, 2 * r0 / 5, true,
                               "sup distance staircase vs repaired function"));
  {
    Rat total = view.exact ? sup_distance(view.pw, cert.f1) : Rat(0);
    if (!view.exact) {
      double worst = 0;
      for (std::size_t i = 0; i < view.samples.n; ++i) {
        double x = view.samples.x(i);
        worst = std::max(worst, std::fabs(view.samples.values[i] - cert.f1.evaluate(x)));
      }
      total = rat_from_double(worst);
    }
    ledger.push_back(plain_entry("f0_f1_dist", total, Relation::LE, 4 * r0 / 5, view.exact,
                                 "sup distance center vs repaired function"));
    ledger.push_back(plain_entry("ball_nesting", total + plan.r1, Relation::LE, r0, view.exact,
                                 "B(f1, r1) nests inside B(f0, r0)"));
  }
  ledger.push_back(plain_entry("r1_budget", plan.r1, Relation::LE, r0 / 5, true, "r1 = r0/(20k) <= r0/5"));

  if (mode == CertMode::Holder) {
    ledger.push_back(certify_separation(hp, plan));
    long p = hp.p();
    unsigned long q = hp.q();
    long e = static_cast<long>(q) - p;
    Rat ratio = r0 / (10 * hp.K);
    ledger.push_back(power_entry("gyok2_lo", Power{ratio / 2, Rat(plan.m), p, q}, Relation::LT,
                                 Power{Rat(1), Rat(plan.k), e, q},
                                 "window lower end, both sides raised to 1-alpha"));
    ledger.push_back(power_entry("gyok2_hi", Power{Rat(1), Rat(plan.k), e, q}, Relation::LT,
                                 Power{ratio, Rat(plan.m, 2), p, q},
                                 "window upper end, both sides raised to 1-alpha"));
  }
  for (LedgerEntry& e : capacity_ledger_entries(cert)) ledger.push_back(std::move(e));
  return cert;
}

}  // namespace

ConstructionCertificate build_holder_certificate(const HolderParams& params, const GeneratorSpec& f0,
                                                 unsigned long long m_limit) {
  params.validate();
  F0View view = make_f0_view(f0);
  StaircasePlan plan = solve_parameters(params, view.modulus, m_limit);
  return assemble(CertMode::Holder, params, BVParams{}, f0, plan);
}

ConstructionCertificate build_holder_certificate_with_plan(const HolderParams& params, const GeneratorSpec& f0,
                                                           unsigned long long m, unsigned long long k) {
  params.validate();
  return assemble(CertMode::Holder, params, BVParams{}, f0, make_plan(m, k, params.r0));
}

ConstructionCertificate build_bv_certificate(const BVParams& params, const GeneratorSpec& f0,
                                             unsigned long long m_limit) {
  params.validate();
  F0View view = make_f0_view(f0);
  StaircasePlan plan = solve_bv_parameters(params, view.modulus, m_limit);
  return assemble(CertMode::BV, HolderParams{}, params, f0, plan);
}

ConstructionCertificate build_bv_certificate_with_plan(const BVParams& params, const GeneratorSpec& f0,
                                                       unsigned long long m) {
  params.validate();
  return assemble(CertMode::BV, HolderParams{}, params, f0, make_plan(m, m, params.r0));
}

namespace {

bool same_power(const Power& a, const Power& b) {
  return a.coeff == b.coeff && a.base == b.base && a.en == b.en && a.ed == b.ed;
}

bool same_piecewise(const PiecewiseFunction& a, const PiecewiseFunction& b) {
  if (a.pieces.size() != b.pieces.size()) return false;
  for (std::size_t i = 0; i < a.pieces.size(); ++i) {
    const Piece &p = a.pieces[i], &q = b.pieces[i];
    if (p.lo != q.lo || p.hi != q.hi || p.own_lo != q.own_lo || p.own_hi != q.own_hi || p.kind != q.kind)
      return false;
    if (p.kind == PieceKind::Constant ? (p.a != q.a) : (p.a != q.a || p.b != q.b)) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> verify_certificate(const ConstructionCertificate& cert) {
  std::vector<std::string> problems;
  auto complain = [&](const std::string& s) { problems.push_back(s); };
  ConstructionCertificate fresh;
  try {
    if (cert.mode == CertMode::Holder)
      fresh = build_holder_certificate_with_plan(cert.holder, cert.f0, cert.plan.m, cert.plan.k);
    else {
      if (cert.plan.k != cert.plan.m) {
        complain("plan: k != m in a bounded-variation certificate");
        return problems;
      }
      fresh = build_bv_certificate_with_plan(cert.bv, cert.f0, cert.plan.m);
    }
  } catch (const std::exception& ex) {
    complain(std::string("rebuild failed: ") + ex.what());
    return problems;
  }
  if (fresh.plan.jump != cert.plan.jump) complain("plan: stored jump differs from r0/(5k)");
  if (fresh.plan.r1 != cert.plan.r1) complain("plan: stored r1 differs from r0/(20k)");
  if (fresh.system.half_width != cert.system.half_width || fresh.system.mk != cert.system.mk)
    complain("system: stored interval system differs from the deterministic rebuild");
  if (!same_piecewise(fresh.fbar, cert.fbar)) complain("fbar: stored staircase differs from rebuild");
  if (!same_piecewise(fresh.f1, cert.f1)) complain("f1: stored repaired function differs from rebuild");
  if (cert.ledger.size() != fresh.ledger.size()) {
    complain("ledger: entry count differs from rebuild");
    return problems;
  }
  for (std::size_t i = 0; i < fresh.ledger.size(); ++i) {
    const LedgerEntry &want = fresh.ledger[i], &got = cert.ledger[i];
    if (want.id != got.id) {
      complain("ledger[" + std::to_string(i) + "]: id mismatch");
      continue;
    }
    if (want.kind != got.kind || want.rel != got.rel || !same_power(want.lhs, got.lhs) ||
        !same_power(want.rhs, got.rhs) || want.terms != got.terms)
      complain("ledger '" + want.id + "': stored operands differ from recomputation");
    if (want.lhs_approx != got.lhs_approx || want.rhs_approx != got.rhs_approx)
      complain("ledger '" + want.id + "': stored approximations differ from recomputation");
    if (want.verdict != got.verdict) complain("ledger '" + want.id + "': stored verdict differs");
    if (!want.verdict) complain("ledger '" + want.id + "': inequality fails");
  }
  return problems;
}

// ---- class checks ----

bool is_holder_function(const PiecewiseFunction& g, const Rat& alpha, const Rat& K) {
  if (!g.is_continuous()) return false;
  long p = mp::numerator(alpha).convert_to<long>();
  unsigned long q = mp::denominator(alpha).convert_to<unsigned long>();
  std::vector<Rat> xs = g.breakpoints();
  std::vector<Rat> vs;
  vs.reserve(xs.size());
  for (const Rat& x : xs) vs.push_back(g.evaluate(x));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      Rat dv = vs[j] - vs[i];
      if (dv < 0) dv = -dv;
      if (dv == 0) continue;
      Power lhs = Power::plain(dv);
      Power rhs{K, xs[j] - xs[i], p, q};
      if (!power_le(lhs, rhs)) return false;
    }
  return true;
}

bool is_bv_function(const PiecewiseFunction& g, const Rat& V) { return total_variation(g) <= V; }

// ---- agreement ----

std::vector<AgreementComponent> agreement_set(const PiecewiseFunction& f, const PiecewiseFunction& g) {
  std::vector<AgreementComponent> out;
  for (const RefinedCell& c : refine_pair(f, g)) {
    Rat da = c.fa - c.ga, db = c.fb - c.gb;
    if (da == 0) {
      if (db == 0) out.push_back({c.lo, c.hi, true});
    } else {
      Rat root = -db / da;
      if (root > c.lo && root < c.hi) out.push_back({root, root, false});
    }
  }
  for (const Rat& x : merged_breakpoints(f, g))
    if (f.evaluate(x) == g.evaluate(x)) out.push_back({x, x, false});
  std::sort(out.begin(), out.end(), [](const AgreementComponent& a, const AgreementComponent& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  return out;
}

namespace {

// Does the open interval (lo, hi) contain a point outside the system's
// open union? The system intervals are separated, so failure means (lo,hi)
// sits inside a single interval.
bool escapes_system(const IntervalSystem& sys, const Rat& lo, const Rat& hi) {
  Rat mid = (lo + hi) / 2;
  Int t = floor_rat(mid * Rat(sys.mk) + Rat(1, 2));
  if (t < 0 || t > Int(sys.mk)) return true;
  auto [a, b] = sys.interval(t.convert_to<unsigned long long>());
  return !(a <= lo && hi <= b);
}

struct PairOutcome {
  std::map<unsigned long long, unsigned long long> block_meets;  // block -> l_i
  std::vector<std::uint64_t> cells;                              // subinterval indices at delta = 1/(mk)
};

PairOutcome analyse_pair(const ConstructionCertificate& cert, const PiecewiseFunction& f,
                         const PiecewiseFunction& g) {
  PairOutcome res;
  unsigned long long mk = cert.plan.subintervals();
  std::set<unsigned long long> marked;
  for (const AgreementComponent& comp : agreement_set(f, g)) {
    if (comp.lo == comp.hi) {
      if (cert.system.covers(comp.lo)) continue;
      Rat scaled = comp.lo * Rat(mk);
      Int t = floor_rat(scaled);
      if (Rat(t) == scaled) continue;  // exactly on a subinterval boundary: inside the (covered) grid point
      if (t >= 0 && t < Int(mk)) marked.insert(t.convert_to<unsigned long long>());
      continue;
    }
    // open component (lo, hi): visit every subinterval it overlaps
    Int first = floor_rat(comp.lo * Rat(mk));
    Int last = ceil_rat(comp.hi * Rat(mk)) - 1;
    if (first < 0) first = 0;
    if (last > Int(mk - 1)) last = Int(mk - 1);
    for (Int t = first; t <= last; ++t) {
      unsigned long long tt = t.convert_to<unsigned long long>();
      if (marked.count(tt)) continue;
      Rat a = cert.plan.breakpoint(tt), b = cert.plan.breakpoint(tt + 1);
      Rat lo = std::max(comp.lo, a), hi = std::min(comp.hi, b);
      if (!(lo < hi)) continue;
      if (escapes_system(cert.system, lo, hi)) marked.insert(tt);
    }
  }
  for (unsigned long long t : marked) {
    res.cells.push_back(t);
    ++res.block_meets[t / cert.plan.k];
  }
  return res;
}

}  // namespace

std::vector<Probe> standard_probes(const ConstructionCertificate& cert) {
  return {{"f1", cert.f1},
          {"f1_plus_r1", add_constant(cert.f1, cert.plan.r1)},
          {"f1_minus_r1", add_constant(cert.f1, -cert.plan.r1)}};
}

std::vector<Probe> random_probes(const ConstructionCertificate& cert, std::size_t count, std::uint64_t seed) {
  std::vector<Probe> out;
  Xoshiro256 rng(seed);
  unsigned long long m = cert.plan.m;
  const long denom = 1 << 20;
  for (std::size_t i = 0; i < count; ++i) {
    // continuous piecewise-linear perturbation bounded by r1 in sup norm
    std::vector<Rat> xs, ys;
    for (unsigned long long t = 0; t <= 2 * m; ++t) {
      xs.push_back(Rat(t, 2 * m));
      long u = static_cast<long>(rng.below(2 * denom + 1)) - denom;
      ys.push_back(cert.plan.r1 * Rat(u, denom));
    }
    out.push_back({"random_" + std::to_string(i), add(cert.f1, PiecewiseFunction::interpolate(xs, ys))});
  }
  return out;
}

AuditReport empirical_agreement_audit(const ConstructionCertificate& cert, const std::vector<Adversary>& battery,
                                      const std::vector<Probe>& probes, unsigned jobs) {
  if (!cert.accepted()) throw std::invalid_argument("audit: certificate not accepted");
  // class precondition on every adversary
  for (const Adversary& adv : battery) {
    bool ok = cert.mode == CertMode::Holder ? is_holder_function(adv.g, cert.holder.alpha, cert.holder.K)
                                            : is_bv_function(adv.g, cert.bv.V);
    if (!ok) throw std::invalid_argument("audit: adversary '" + adv.id + "' fails its class check");
  }
  for (const Probe& probe : probes)
    if (sup_distance(probe.f, cert.f1) > cert.plan.r1)
      throw std::invalid_argument("audit: probe '" + probe.id + "' leaves B(f1, r1)");

  Rat d = cert.capacity_exponent();
  double ii_cost = cover_cost(cert.system.as_cover(), to_double(d));
  Rat count_budget = cert.mode == CertMode::BV
                         ? Rat(cert.plan.m) + Rat(10 * Int(cert.plan.k)) * cert.bv.V / cert.plan.r0
                         : Rat(0);
  double inv_m = 1.0 / static_cast<double>(cert.mode == CertMode::Holder ? cert.holder.M : cert.bv.M);

  AuditReport report;
  std::vector<std::vector<AuditRow>> rows(battery.size() * probes.size());
  std::vector<unsigned long long> maxblock(rows.size(), 0), total(rows.size(), 0);
  std::vector<double> costs(rows.size(), 0);
  std::vector<char> ok(rows.size(), 1);

  auto work = [&](std::size_t idx) {
    std::size_t ai = idx / probes.size(), pi = idx % probes.size();
    const Adversary& adv = battery[ai];
    const Probe& probe = probes[pi];
    PairOutcome oc = analyse_pair(cert, probe.f, adv.g);
    GridSubset cells(Rat(1, cert.plan.subintervals()), oc.cells);
    double pair_cost = optimal_cover(cells, to_double(d)).cost + ii_cost;
    unsigned long long worst = 0, sum = 0;
    for (auto& [block, li] : oc.block_meets) {
      worst = std::max(worst, li);
      sum += li;
    }
    bool good = true;
    if (cert.mode == CertMode::Holder)
      good = worst <= 1;
    else
      good = Rat(sum) <= count_budget;
    good = good && pair_cost < inv_m;
    for (auto& [block, li] : oc.block_meets)
      rows[idx].push_back({adv.id, probe.id, static_cast<long long>(block), li, pair_cost});
    rows[idx].push_back({adv.id, probe.id, -1, sum, pair_cost});
    maxblock[idx] = worst;
    total[idx] = sum;
    costs[idx] = pair_cost;
    ok[idx] = good ? 1 : 0;
  };

  if (jobs <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::size_t per = (rows.size() + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      std::size_t lo = j * per, hi = std::min(rows.size(), lo + per);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < rows.size(); ++i) {
    report.rows.insert(report.rows.end(), rows[i].begin(), rows[i].end());
    report.max_block_meets = std::max(report.max_block_meets, maxblock[i]);
    report.max_total_meets = std::max(report.max_total_meets, total[i]);
    report.max_cover_cost = std::max(report.max_cover_cost, costs[i]);
    report.bounds_respected = report.bounds_respected && ok[i];
  }
  report.pairs = rows.size();
  return report;
}

// ---- batteries ----

namespace {

Rat rationalize(double x, long denom = 1 << 20) {
  return Rat(static_cast<long long>(std::llround(x * static_cast<double>(denom))), denom);
}

}  // namespace

std::vector<Adversary> holder_battery(const ConstructionCertificate& cert, std::size_t target,
                                      std::uint64_t seed) {
  if (cert.mode != CertMode::Holder) throw std::invalid_argument("holder_battery: wrong certificate mode");
  const Rat alpha = cert.holder.alpha;
  const Rat K = cert.holder.K;
  std::vector<Adversary> out;
  auto add_if_valid = [&](const std::string& id, PiecewiseFunction g) {
    if (is_holder_function(g, alpha, K)) out.push_back({id, std::move(g)});
  };

  // constants at every distinct staircase level, then shifted by the ball slack
  std::set<Rat> levels;
  for (const Piece& p : cert.fbar.pieces)
    if (p.kind == PieceKind::Constant) levels.insert(p.a);
  std::size_t idx = 0;
  std::vector<Rat> level_list(levels.begin(), levels.end());
  if (level_list.size() > 40) {  // keep the battery bounded for very fine staircases
    std::vector<Rat> trimmed;
    std::size_t stride = level_list.size() / 40 + 1;
    for (std::size_t i = 0; i < level_list.size(); i += stride) trimmed.push_back(level_list[i]);
    level_list.swap(trimmed);
  }
  const std::vector<Rat> shifts{cert.plan.r1, Rat(-cert.plan.r1), Rat(cert.plan.r1 / 2)};
  for (const Rat& level : level_list) {
    add_if_valid("const_level_" + std::to_string(idx++), PiecewiseFunction::constant(level));
    for (const Rat& shift : shifts)
      add_if_valid("const_level_" + std::to_string(idx++), PiecewiseFunction::constant(level + shift));
  }

  // maximal-slope lines through assorted intercepts
  Rat lo = level_list.front() - cert.plan.r0 / 10, hi = level_list.back() + cert.plan.r0 / 10;
  for (int sgn : {1, -1})
    for (int j = 2; j <= 8; j += 2) {
      Rat s = K * Rat(sgn * j, 8);
      for (const Rat& level : {level_list.front(), level_list.back()}) {
        Rat b = level - s / 2;
        add_if_valid("line_" + std::to_string(idx++), PiecewiseFunction::linear(s, b));
      }
    }

  // localized steep bumps: constant base with a tent of width w and height
  // just under K*w^alpha, the steepest profile the class allows locally
  Xoshiro256 rng(seed);
  unsigned long long mk = cert.plan.subintervals();
  double alpha_d = to_double(alpha), K_d = to_double(K);
  for (int rep = 0; rep < 24 && mk >= 4; ++rep) {
    unsigned long long span_cap = std::min<unsigned long long>(4, (mk - 2) / 2);
    unsigned long long span = 1 + rng.below(std::max<unsigned long long>(1, span_cap));
    unsigned long long slots = mk - 2 * span - 1;
    unsigned long long t0 = 1 + rng.below(std::max<unsigned long long>(1, slots));
    Rat w = Rat(span, mk);
    Rat x0 = Rat(t0, mk) + w;
    Rat base = level_list[rng.below(level_list.size())];
    double hd = K_d * std::pow(to_double(w), alpha_d);
    Rat h = rationalize(hd * 0.999);
    PiecewiseFunction tent;
    for (int tries = 0; tries < 20; ++tries, h = h * Rat(31, 32)) {
      tent = PiecewiseFunction::interpolate({x0 - w, x0, x0 + w}, {base, base + h, base});
      if (is_holder_function(tent, alpha, K)) break;
    }
    add_if_valid("bump_" + std::to_string(idx++), tent);
  }

  // followers: piecewise-linear resampling of f1 at block starts, damped
  // towards its mean until the pairwise class check passes
  {
    unsigned long long stride = std::max<unsigned long long>(1, cert.plan.m / 48);
    std::vector<Rat> xs, raw;
    for (unsigned long long i = 0; i <= cert.plan.m; i += stride) {
      Rat x(i, cert.plan.m);
      xs.push_back(x);
      raw.push_back(cert.f1.evaluate(x));
    }
    Rat mean(0);
    for (const Rat& v : raw) mean += v;
    mean /= Rat(raw.size());
    for (int levelcut = 0; levelcut < 10; ++levelcut) {
      Rat damp(levelcut, 10);
      std::vector<Rat> ys;
      for (const Rat& v : raw) ys.push_back(mean + (v - mean) * (1 - damp));
      PiecewiseFunction follower = PiecewiseFunction::interpolate(xs, ys);
      if (is_holder_function(follower, alpha, K)) {
        out.push_back({"follower_" + std::to_string(idx++), std::move(follower)});
        break;
      }
    }
  }

  // pad with a constant sweep to the requested size
  std::size_t sweep = target > out.size() ? target - out.size() : 8;
  for (std::size_t j = 0; j <= sweep; ++j) {
    Rat c = lo + (hi - lo) * Rat(j, sweep + 1);
    add_if_valid("const_sweep_" + std::to_string(idx++), PiecewiseFunction::constant(c));
  }
  return out;
}

std::vector<Adversary> bv_battery(const ConstructionCertificate& cert, std::size_t target, std::uint64_t seed) {
  if (cert.mode != CertMode::BV) throw std::invalid_argument("bv_battery: wrong certificate mode");
  const Rat V = cert.bv.V;
  std::vector<Adversary> out;
  auto add_if_valid = [&](const std::string& id, PiecewiseFunction g) {
    if (is_bv_function(g, V)) out.push_back({id, std::move(g)});
  };
  std::size_t idx = 0;

  std::set<Rat> levels;
  for (const Piece& p : cert.fbar.pieces)
    if (p.kind == PieceKind::Constant) levels.insert(p.a);
  std::vector<Rat> level_list(levels.begin(), levels.end());
  for (const Rat& level : level_list) {
    add_if_valid("const_level_" + std::to_string(idx++), PiecewiseFunction::constant(level));
    add_if_valid("const_level_" + std::to_string(idx++), PiecewiseFunction::constant(level + cert.plan.r1));
  }

  // monotone ramps spending the whole variation budget
  for (int j = 1; j <= 8; ++j) {
    Rat rise = V * Rat(j, 8);
    const std::vector<Rat> bases{level_list.front(), Rat(level_list.front() - rise / 2)};
    for (const Rat& base : bases) {
      add_if_valid("ramp_up_" + std::to_string(idx++), PiecewiseFunction::linear(rise, base));
      add_if_valid("ramp_down_" + std::to_string(idx++), PiecewiseFunction::linear(Rat(-rise), base + rise));
    }
  }

  // zigzags with total variation exactly V
  Xoshiro256 rng(seed);
  for (int rep = 0; rep < 24; ++rep) {
    std::size_t segs = 2 + rng.below(6);
    std::vector<Rat> xs{Rat(0)}, ys;
    for (std::size_t t = 1; t < segs; ++t) xs.push_back(Rat(t, segs));
    xs.push_back(Rat(1));
    Rat level = level_list[rng.below(level_list.size())];
    Rat share = V / Rat(2 * segs);
    Rat y = level;
    for (std::size_t t = 0; t <= segs; ++t) {
      ys.push_back(y);
      y += (t % 2 == 0 ? share : -share);
    }
    add_if_valid("zigzag_" + std::to_string(idx++), PiecewiseFunction::interpolate(xs, ys));
  }

  // step followers: jump between staircase levels at block starts until the
  // variation budget runs out, constant afterwards
  for (int rep = 0; rep < 16; ++rep) {
    PiecewiseFunction g;
    Rat budget = V;
    Rat value = level_list[rng.below(level_list.size())];
    unsigned long long m = cert.plan.m;
    Rat prev(0);
    for (unsigned long long i = 1; i <= m; ++i) {
      Rat next = i == m ? Rat(1) : Rat(i, m);
      Rat cand = level_list[rng.below(level_list.size())];
      Rat jump_size = cand > value ? cand - value : value - cand;
      Piece p;
      p.lo = prev;
      p.hi = next;
      p.own_lo = true;
      p.own_hi = i == m;
      p.kind = PieceKind::Constant;
      p.a = value;
      g.pieces.push_back(std::move(p));
      prev = next;
      if (jump_size <= budget && i < m) {
        budget -= jump_size;
        value = cand;
      }
    }
    g.validate();
    add_if_valid("steps_" + std::to_string(idx++), std::move(g));
  }

  Rat lo = level_list.front() - V / 2, hi = level_list.back() + V / 2;
  std::size_t sweep = target > out.size() ? target - out.size() : 8;
  for (std::size_t j = 0; j <= sweep; ++j) {
    Rat c = lo + (hi - lo) * Rat(j, sweep + 1);
    add_if_valid("const_sweep_" + std::to_string(idx++), PiecewiseFunction::constant(c));
  }
  return out;
}

}  // namespace dimlab
