#include "dimlab/construction.hpp"

#include "dimlab/generator.hpp"

#include <doctest.h>

using namespace dimlab;

namespace {

namespace mp = boost::multiprecision;

// ---- substitution oracles: direct exact-rational checks of the plan
// inequalities, independent of the ledger machinery ----

bool oracle_gyok1(unsigned long long m, unsigned long long k, const Rat& alpha, const Rat& r0, const Rat& K) {
  long p = mp::numerator(alpha).convert_to<long>();
  long q = mp::denominator(alpha).convert_to<long>();
  // K * (2/(mk))^(p/q) < r0/(10k), both sides to the q-th power
  Rat lhs = pow_rat(K, q) * pow_rat(Rat(2, m * k), p);
  Rat rhs = pow_rat(r0 / Rat(10 * Int(k)), q);
  return lhs < rhs;
}

bool oracle_gyok2(unsigned long long m, unsigned long long k, const Rat& alpha, const Rat& r0, const Rat& K) {
  long p = mp::numerator(alpha).convert_to<long>();
  long q = mp::denominator(alpha).convert_to<long>();
  Rat R = pow_rat(r0 / (10 * K), q) * pow_rat(Rat(m, 2), p);
  Rat ke = pow_rat(Rat(k), q - p);
  return ke < R && ke * pow_rat(Rat(2), q - p) > R;
}

bool oracle_pre(unsigned long long m, unsigned long long k, const Rat& alpha, unsigned N, unsigned M) {
  Rat d = 1 - alpha + Rat(1, N);
  long dn = mp::numerator(d).convert_to<long>();
  long dd = mp::denominator(d).convert_to<long>();
  Rat lhs = pow_rat(Rat(m), dd) * pow_rat(Rat(1, m * k), dn);
  Rat rhs = pow_rat(Rat(1, 2 * static_cast<long long>(M)), dd);
  return lhs < rhs;
}

bool oracle_bv(unsigned long long m, unsigned N, unsigned M, const Rat& r0, const Rat& V) {
  // (10V/r0 + 1) * m^(-2/N) < 1/(2M), both sides to the N-th power
  Rat lhs = pow_rat(10 * V / r0 + 1, N) * pow_rat(Rat(1, m * m), 1);
  Rat rhs = pow_rat(Rat(1, 2 * static_cast<long long>(M)), N);
  return lhs < rhs;
}

GeneratorSpec zero_center() { return parse_generator_spec("constant:0", 1, 17); }

HolderParams reference_params() {
  HolderParams hp;
  hp.alpha = Rat(1, 2);
  hp.N = 2;
  hp.M = 1;
  hp.r0 = 1;
  hp.K = 1;
  return hp;
}

// small accepted certificate for fast audits: window (m, 2m) at r0 = 20
ConstructionCertificate tiny_holder() {
  HolderParams hp;
  hp.alpha = Rat(1, 2);
  hp.N = 2;
  hp.M = 1;
  hp.r0 = 20;
  hp.K = 1;
  return build_holder_certificate(hp, zero_center());
}

ConstructionCertificate tiny_bv() {
  BVParams bp;
  bp.N = 1;
  bp.M = 1;
  bp.r0 = 10;
  bp.V = 1;
  return build_bv_certificate(bp, zero_center());
}

}  // namespace

TEST_CASE("solver finds the minimal reference plan") {
  HolderParams hp = reference_params();
  StaircasePlan plan = solve_parameters(hp, modulus_oracle(zero_center()));
  CHECK(oracle_gyok1(plan.m, plan.k, hp.alpha, hp.r0, hp.K));
  CHECK(oracle_gyok2(plan.m, plan.k, hp.alpha, hp.r0, hp.K));
  CHECK(oracle_pre(plan.m, plan.k, hp.alpha, hp.N, hp.M));
  // minimality: no smaller m admits any k passing all three
  for (unsigned long long m = 1; m < plan.m; ++m) {
    bool any = false;
    for (unsigned long long k = 1; k <= 2 * plan.k + 4 && !any; ++k)
      any = oracle_gyok2(m, k, hp.alpha, hp.r0, hp.K) && oracle_pre(m, k, hp.alpha, hp.N, hp.M);
    CHECK(!any);
  }
  CHECK(plan.m == 601);
  CHECK(plan.k == 3);
}

TEST_CASE("the reference (2000, 7) plan verifies even though it is not minimal") {
  HolderParams hp = reference_params();
  CHECK(oracle_gyok1(2000, 7, hp.alpha, hp.r0, hp.K));
  CHECK(oracle_gyok2(2000, 7, hp.alpha, hp.r0, hp.K));
  CHECK(oracle_pre(2000, 7, hp.alpha, hp.N, hp.M));
  ConstructionCertificate cert = build_holder_certificate_with_plan(hp, zero_center(), 2000, 7);
  CHECK(cert.accepted());
  CHECK(verify_certificate(cert).empty());
  const LedgerEntry* pre = cert.find("pre");
  REQUIRE(pre);
  CHECK(pre->lhs.coeff == 2000);
  CHECK(pre->lhs_approx == doctest::Approx(1.0 / 7.0));
  // separation margin quoted for this plan: 0.01195 < 0.01429
  const LedgerEntry* gyok1 = cert.find("gyok1");
  REQUIRE(gyok1);
  CHECK(gyok1->lhs_approx == doctest::Approx(0.011952).epsilon(1e-3));
  CHECK(gyok1->rhs_approx == doctest::Approx(1.0 / 70.0));
}

TEST_CASE("(m,k) = (2,2) is rejected by the separation inequality") {
  HolderParams hp = reference_params();
  CHECK(!oracle_gyok1(2, 2, hp.alpha, hp.r0, hp.K));
  ConstructionCertificate cert = build_holder_certificate_with_plan(hp, zero_center(), 2, 2);
  CHECK(!cert.accepted());
  const LedgerEntry* gyok1 = cert.find("gyok1");
  REQUIRE(gyok1);
  CHECK(!gyok1->verdict);
  // a rejected certificate is a false verdict, not an exception
  CHECK(!verify_certificate(cert).empty());
}

TEST_CASE("capacity exponent identity") {
  // 1 - d - alpha*d/(1-alpha) == -1/((1-alpha)N) with d = 1-alpha+1/N
  for (auto& [alpha, N] : std::vector<std::pair<Rat, unsigned>>{{Rat(1, 2), 2}, {Rat(1, 3), 3}, {Rat(3, 4), 5}}) {
    Rat d = 1 - alpha + Rat(1, N);
    Rat lhs = 1 - d - alpha * d / (1 - alpha);
    CHECK(lhs == -Rat(1) / ((1 - alpha) * Rat(N)));
  }
  Rat d = 1 - Rat(1, 2) + Rat(1, 2);
  CHECK(1 - d - Rat(1, 2) * d / Rat(1, 2) == Rat(-1));
}

TEST_CASE("alpha outside (0,1) is a parameter error") {
  HolderParams hp = reference_params();
  hp.alpha = Rat(3, 2);
  CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
  hp.alpha = Rat(1);
  CHECK_THROWS_AS(hp.validate(), std::invalid_argument);
}

TEST_CASE("staircase values follow the block formula") {
  StaircasePlan plan = make_plan(2, 2, Rat(1));
  PiecewiseFunction f = build_staircase({Rat(0), Rat(0)}, Rat(0), plan);
  CHECK(f.evaluate(Rat(1, 8)) == 0);
  CHECK(f.evaluate(Rat(3, 8)) == Rat(1, 10));
  CHECK(f.evaluate(Rat(5, 8)) == 0);
  CHECK(f.evaluate(Rat(7, 8)) == Rat(1, 10));
  CHECK(f.evaluate(Rat(1)) == 0);

  // constant center: values c + j*r0/(5k), independent of the block
  Rat c(7, 3);
  PiecewiseFunction g = build_staircase({c, c}, c, plan);
  for (int t = 0; t < 4; ++t)
    CHECK(g.evaluate(Rat(2 * t + 1, 8)) == c + Rat(t % 2) * plan.jump);
}

TEST_CASE("staircase stays within 2r0/5 of the center") {
  ConstructionCertificate cert = tiny_holder();
  PiecewiseFunction center = to_piecewise(cert.f0);
  Rat dist = sup_distance(center, cert.fbar);
  CHECK(dist <= 2 * cert.plan.r0 / 5);
  CHECK(cert.find("stair_dist")->verdict);
  // exact oracle: max over pieces of |level - 0|
  Rat worst(0);
  for (const Piece& p : cert.fbar.pieces)
    if (p.a > worst) worst = p.a;
  CHECK(dist == worst);
}

TEST_CASE("interval system: two breakpoints need two intervals under the budget") {
  StaircasePlan plan = make_plan(1, 1, Rat(1));
  IntervalSystem sys = build_interval_system(plan, Rat(1), Rat(1, 2));
  CHECK(sys.count() == 2);
  CHECK(sys.length() * 2 < Rat(1, 2));
  CHECK(sys.length() < Rat(1, 1));
}

TEST_CASE("interval system for the reference plan") {
  StaircasePlan plan = make_plan(2000, 7, Rat(1));
  IntervalSystem sys = build_interval_system(plan, Rat(1), Rat(1, 2));
  // 14001 intervals; half-width 2^-17 would already satisfy the budget
  CHECK(Rat(14001) * pow_rat(Rat(1, 2), 16) < Rat(1, 2));
  // the chooser takes the largest dyadic length that fits
  CHECK(Rat(14001) * sys.length() < Rat(1, 2));
  CHECK(Rat(14001) * sys.length() * 2 >= Rat(1, 2));
  CHECK(sys.length() < Rat(1, 14000));
}

TEST_CASE("system cover cost equals the ledger lhs exactly") {
  ConstructionCertificate cert = tiny_holder();
  const LedgerEntry* ii = cert.find("ii");
  REQUIRE(ii);
  CHECK(cover_cost(cert.system.as_cover(), to_double(cert.capacity_exponent())) == ii->lhs_approx);
}

TEST_CASE("repair produces a continuous function, linear on each interval") {
  ConstructionCertificate cert = tiny_holder();
  CHECK(cert.f1.is_continuous());
  // independent boundary check: owned value equals both one-sided formulas
  const auto& pieces = cert.f1.pieces;
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i)
    CHECK(pieces[i].value_at(pieces[i].hi) == pieces[i + 1].value_at(pieces[i + 1].lo));
  // inside each system interval the repaired function has vanishing second
  // differences
  for (unsigned long long t = 0; t <= cert.system.mk; t += 2) {
    auto [lo, hi] = cert.system.interval(t);
    if (lo < 0) lo = 0;
    if (hi > 1) hi = 1;
    Rat h = (hi - lo) / 4;
    Rat s0 = cert.f1.evaluate(lo), s1 = cert.f1.evaluate(lo + h), s2 = cert.f1.evaluate(lo + 2 * h);
    CHECK(s2 - 2 * s1 + s0 == 0);
  }
  CHECK(cert.find("repair_dist")->verdict);
  CHECK(sup_distance(cert.fbar, cert.f1) <= 2 * cert.plan.r0 / 5);
}

TEST_CASE("already continuous staircase repairs to itself") {
  // one step per block over a constant center: no jumps anywhere
  StaircasePlan plan = make_plan(2, 1, Rat(1));
  PiecewiseFunction stair = build_staircase({Rat(3), Rat(3)}, Rat(3), plan);
  CHECK(stair.is_continuous());
  IntervalSystem sys = build_interval_system(plan, Rat(1), Rat(1, 2));
  PiecewiseFunction f1 = repair_continuity(stair, sys);
  CHECK(sup_distance(stair, f1) == 0);
}

TEST_CASE("repair rejects uncovered discontinuities") {
  StaircasePlan plan = make_plan(2, 2, Rat(1));
  PiecewiseFunction stair = build_staircase({Rat(0), Rat(0)}, Rat(0), plan);
  IntervalSystem bogus;
  bogus.mk = 2;  // covers only 0, 1/2, 1: the jumps at 1/4 and 3/4 stay exposed
  bogus.half_width = Rat(1, 64);
  CHECK_THROWS_AS(repair_continuity(stair, bogus), std::invalid_argument);
}

TEST_CASE("separation verdicts and monotonicity in alpha") {
  HolderParams hp = reference_params();
  StaircasePlan good = make_plan(2000, 7, hp.r0);
  CHECK(certify_separation(hp, good).verdict);
  StaircasePlan bad = make_plan(2, 2, hp.r0);
  CHECK(!certify_separation(hp, bad).verdict);
  // once true, stays true as alpha grows (gap 2/(mk) <= 1)
  bool seen_true = false;
  for (int num = 1; num < 8; ++num) {
    HolderParams hp2 = hp;
    hp2.alpha = Rat(num, 8);
    bool v = certify_separation(hp2, good).verdict;
    if (seen_true) CHECK(v);
    seen_true = seen_true || v;
  }
  CHECK(seen_true);
}

TEST_CASE("capacity ledger composes the witness cover budget") {
  HolderParams hp = reference_params();
  ConstructionCertificate cert = build_holder_certificate_with_plan(hp, zero_center(), 2000, 7);
  const LedgerEntry *ii = cert.find("ii"), *pre = cert.find("pre"), *total = cert.find("capacity_total");
  REQUIRE(ii);
  REQUIRE(pre);
  REQUIRE(total);
  CHECK(pre->verdict);
  CHECK(pre->lhs_approx == doctest::Approx(1.0 / 7));
  CHECK(total->lhs_approx == ii->lhs_approx + pre->lhs_approx);  // budget identity
  CHECK(total->verdict);
  CHECK(total->lhs_approx < 1.0 / hp.M);
}

TEST_CASE("bounded-variation solver matches the substitution oracle") {
  BVParams bp;
  bp.N = 2;
  bp.M = 1;
  bp.r0 = 1;
  bp.V = 1;
  StaircasePlan plan = solve_bv_parameters(bp, modulus_oracle(zero_center()));
  CHECK(plan.k == plan.m);
  CHECK(oracle_bv(plan.m, bp.N, bp.M, bp.r0, bp.V));
  CHECK(!oracle_bv(plan.m - 1, bp.N, bp.M, bp.r0, bp.V));
  // (10/r0+1) m^(-2/N) < 1/2 with N=2 forces 11/m < 1/2, so m = 23
  CHECK(plan.m == 23);

  // at N=1 the exponent is -2 and the minimal m is 5
  BVParams bp1 = bp;
  bp1.N = 1;
  StaircasePlan plan1 = solve_bv_parameters(bp1, modulus_oracle(zero_center()));
  CHECK(plan1.m == 5);
  CHECK(oracle_bv(5, 1, 1, Rat(1), Rat(1)));
  CHECK(!oracle_bv(4, 1, 1, Rat(1), Rat(1)));
}

TEST_CASE("bv witness cover identity holds exactly") {
  ConstructionCertificate cert = tiny_bv();
  CHECK(cert.accepted());
  // (m + 10kV/r0) * (1/(mk))^d == (10V/r0 + 1) * m^(-2/N) when k = m
  Rat d = cert.capacity_exponent();
  long dn = mp::numerator(d).convert_to<long>();
  unsigned long dd = mp::denominator(d).convert_to<unsigned long>();
  Rat count = Rat(cert.plan.m) + Rat(10 * Int(cert.plan.k)) * cert.bv.V / cert.plan.r0;
  Power lhs{count, Rat(1, cert.plan.subintervals()), dn, dd};
  const LedgerEntry* bv = cert.find("bv");
  REQUIRE(bv);
  CHECK(compare_powers(lhs, bv->lhs) == 0);
  const LedgerEntry* budget = cert.find("count_budget");
  REQUIRE(budget);
  CHECK(budget->lhs.coeff == count);
}

TEST_CASE("ball nesting holds exactly on assorted accepted certificates") {
  std::vector<ConstructionCertificate> certs;
  certs.push_back(tiny_holder());
  certs.push_back(tiny_bv());
  {
    HolderParams hp = reference_params();
    certs.push_back(build_holder_certificate_with_plan(hp, zero_center(), 2000, 7));
  }
  for (const ConstructionCertificate& cert : certs) {
    REQUIRE(cert.accepted());
    PiecewiseFunction center = to_piecewise(cert.f0);
    CHECK(sup_distance(center, cert.f1) + cert.plan.r1 <= cert.plan.r0);
    CHECK(cert.plan.r1 <= cert.plan.r0 / 5);
  }
}

TEST_CASE("verify rejects tampering") {
  ConstructionCertificate cert = tiny_holder();
  REQUIRE(verify_certificate(cert).empty());

  ConstructionCertificate bad = cert;
  bad.ledger[6].lhs.coeff += 1;
  CHECK(!verify_certificate(bad).empty());

  ConstructionCertificate bad2 = cert;
  bad2.plan.jump *= Rat(2);
  CHECK(!verify_certificate(bad2).empty());

  ConstructionCertificate bad3 = cert;
  bad3.fbar.pieces[2].a += Rat(1, 1000000);
  CHECK(!verify_certificate(bad3).empty());
}

TEST_CASE("class checks: piecewise-linear Holder and variation") {
  Rat half(1, 2), one(1);
  CHECK(is_holder_function(PiecewiseFunction::constant(Rat(5)), half, one));
  CHECK(is_holder_function(PiecewiseFunction::linear(Rat(1), Rat(0)), half, one));     // slope K
  CHECK(!is_holder_function(PiecewiseFunction::linear(Rat(2), Rat(0)), half, one));    // slope 2K
  // steep narrow tent within budget: height K*w^(1/2) over width w = 1/16 is 1/4
  PiecewiseFunction tent =
      PiecewiseFunction::interpolate({Rat(7, 16), Rat(1, 2), Rat(9, 16)}, {Rat(0), Rat(15, 64), Rat(0)});
  CHECK(is_holder_function(tent, half, one));
  PiecewiseFunction tall =
      PiecewiseFunction::interpolate({Rat(7, 16), Rat(1, 2), Rat(9, 16)}, {Rat(0), Rat(17, 64), Rat(0)});
  CHECK(!is_holder_function(tall, half, one));
  // discontinuous step: never Holder, but fine for bounded variation
  StaircasePlan plan = make_plan(2, 2, Rat(1));
  PiecewiseFunction stair = build_staircase({Rat(0), Rat(0)}, Rat(0), plan);
  CHECK(!is_holder_function(stair, half, one));
  CHECK(is_bv_function(stair, Rat(2, 5)));
  CHECK(!is_bv_function(stair, Rat(1, 4)));
}

TEST_CASE("agreement components of piecewise pairs") {
  PiecewiseFunction line = PiecewiseFunction::linear(Rat(1), Rat(0));
  PiecewiseFunction con = PiecewiseFunction::constant(Rat(1, 2));
  auto comps = agreement_set(line, con);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].lo == Rat(1, 2));
  CHECK(comps[0].hi == Rat(1, 2));

  auto self = agreement_set(line, line);
  bool whole = false;
  for (const auto& c : self) whole = whole || (c.open && c.lo == 0 && c.hi == 1);
  CHECK(whole);

  PiecewiseFunction vee = PiecewiseFunction::interpolate({Rat(0), Rat(1, 2), Rat(1)}, {Rat(1, 2), Rat(0), Rat(1, 2)});
  auto two = agreement_set(line, vee);
  // meets at x = 1/4 (descending arm) and x = 1/2 is not a meet (g=0 there, f=1/2)
  bool quarter = false;
  for (const auto& c : two) quarter = quarter || (!c.open && c.lo == Rat(1, 4));
  CHECK(quarter);
}

TEST_CASE("audit: constants meet at most one subinterval per block") {
  ConstructionCertificate cert = tiny_holder();
  std::vector<Adversary> battery = holder_battery(cert, 20, 5);
  CHECK(battery.size() >= 20);
  AuditReport report = empirical_agreement_audit(cert, battery, standard_probes(cert));
  CHECK(report.bounds_respected);
  CHECK(report.max_block_meets <= 1);
  CHECK(report.max_cover_cost < 1.0 / cert.holder.M);
  CHECK(report.pairs == battery.size() * 3);
}

TEST_CASE("audit accepts random in-ball probes and multiple workers") {
  ConstructionCertificate cert = tiny_holder();
  std::vector<Probe> probes = standard_probes(cert);
  for (Probe& p : random_probes(cert, 4, 11)) probes.push_back(std::move(p));
  for (const Probe& p : probes) CHECK(sup_distance(p.f, cert.f1) <= cert.plan.r1);
  std::vector<Adversary> battery = holder_battery(cert, 24, 5);
  AuditReport serial = empirical_agreement_audit(cert, battery, probes, 1);
  AuditReport parallel = empirical_agreement_audit(cert, battery, probes, 4);
  CHECK(serial.bounds_respected);
  CHECK(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].adversary_id == parallel.rows[i].adversary_id);
    CHECK(serial.rows[i].l_i == parallel.rows[i].l_i);
    CHECK(serial.rows[i].cover_cost == parallel.rows[i].cover_cost);
  }
}

TEST_CASE("audit rejects out-of-class adversaries and runaway probes") {
  ConstructionCertificate cert = tiny_holder();
  std::vector<Adversary> cheat{{"cheat", PiecewiseFunction::linear(4 * cert.holder.K, Rat(0))}};
  CHECK_THROWS_AS(empirical_agreement_audit(cert, cheat, standard_probes(cert)), std::invalid_argument);
  std::vector<Adversary> battery = holder_battery(cert, 8, 5);
  std::vector<Probe> far{{"far", add_constant(cert.f1, 3 * cert.plan.r1)}};
  CHECK_THROWS_AS(empirical_agreement_audit(cert, battery, far), std::invalid_argument);
}

TEST_CASE("bv audit: total meets stay under the count budget") {
  ConstructionCertificate cert = tiny_bv();
  std::vector<Adversary> battery = bv_battery(cert, 40, 5);
  CHECK(battery.size() >= 40);
  std::vector<Probe> probes = standard_probes(cert);
  AuditReport report = empirical_agreement_audit(cert, battery, probes);
  CHECK(report.bounds_respected);
  Rat budget = Rat(cert.plan.m) + Rat(10 * Int(cert.plan.k)) * cert.bv.V / cert.plan.r0;
  CHECK(Rat(report.max_total_meets) <= budget);
  // a monotone adversary spending the whole budget exists in the battery
  bool has_ramp = false;
  for (const Adversary& adv : battery) has_ramp = has_ramp || adv.id.rfind("ramp", 0) == 0;
  CHECK(has_ramp);
}

TEST_CASE("scaling the battery by K preserves the meet structure") {
  // f -> K f maps the unit-constant class to constant K; probes and
  // adversaries scale together, meets are identical
  HolderParams hp;
  hp.alpha = Rat(1, 2);
  hp.N = 2;
  hp.M = 1;
  hp.r0 = 20;
  hp.K = 1;
  ConstructionCertificate base = build_holder_certificate(hp, zero_center());
  HolderParams scaled = hp;
  scaled.r0 = hp.r0 * 3;
  scaled.K = hp.K * 3;
  ConstructionCertificate big = build_holder_certificate(scaled, zero_center());
  REQUIRE(base.plan.m == big.plan.m);
  REQUIRE(base.plan.k == big.plan.k);

  std::vector<Adversary> battery = holder_battery(base, 16, 5);
  std::vector<Adversary> battery3;
  for (const Adversary& adv : battery) battery3.push_back({adv.id, scale(adv.g, Rat(3))});
  AuditReport a = empirical_agreement_audit(base, battery, standard_probes(base));
  AuditReport b = empirical_agreement_audit(big, battery3, standard_probes(big));
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].adversary_id == b.rows[i].adversary_id);
    CHECK(a.rows[i].block == b.rows[i].block);
    CHECK(a.rows[i].l_i == b.rows[i].l_i);
  }
}

TEST_CASE("takagi center gives an exact certificate") {
  HolderParams hp;
  hp.alpha = Rat(1, 2);
  hp.N = 2;
  hp.M = 1;
  hp.r0 = 30;
  hp.K = 1;
  GeneratorSpec takagi = parse_generator_spec("takagi:3", 1, 17);
  ConstructionCertificate cert = build_holder_certificate(hp, takagi);
  CHECK(cert.exact);
  CHECK(cert.accepted());
  CHECK(verify_certificate(cert).empty());
  // staircase bases really are the takagi values at block starts
  PiecewiseFunction center = to_piecewise(takagi);
  Rat base1 = cert.fbar.evaluate(Rat(1, cert.plan.m));
  CHECK(base1 == center.evaluate(Rat(1, cert.plan.m)));
}

TEST_CASE("weierstrass center falls back to a flagged non-exact certificate") {
  HolderParams hp;
  hp.alpha = Rat(1, 2);
  hp.N = 2;
  hp.M = 1;
  hp.r0 = 40;
  hp.K = 1;
  GeneratorSpec w = parse_generator_spec("weierstrass:1/2,3,4", 1, 257);
  ConstructionCertificate cert = build_holder_certificate(hp, w);
  CHECK(!cert.exact);
  CHECK(cert.accepted());
  CHECK(!cert.find("stair_dist")->exact);
  CHECK(cert.find("gyok1")->exact);  // plan inequalities stay exact
}
