#include "dimlab/rational.hpp"

#include <cmath>
#include <numeric>

namespace dimlab {

namespace mp = boost::multiprecision;

Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: non-finite value");
  return Rat(x);
}

Rat parse_rat(const std::string& s) {
  auto bad = [&] { throw std::invalid_argument("not a rational: '" + s + "'"); };
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) bad();
  auto slash = t.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(t));
    Int num(t.substr(0, slash));
    Int den(t.substr(slash + 1));
    if (den == 0) bad();
    return Rat(num, den);
  } catch (const std::exception&) {
    bad();
  }
  return Rat(0);  // unreachable
}

std::string rat_to_string(const Rat& r) {
  Int num = mp::numerator(r), den = mp::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rat pow_rat(const Rat& r, long e) {
  if (e == 0) return Rat(1);
  if (r == 0 && e < 0) throw std::domain_error("pow_rat: 0 to negative power");
  unsigned long ae = static_cast<unsigned long>(e < 0 ? -e : e);
  Int num = mp::pow(Int(mp::numerator(r)), static_cast<unsigned>(ae));
  Int den = mp::pow(Int(mp::denominator(r)), static_cast<unsigned>(ae));
  return e > 0 ? Rat(num, den) : Rat(den, num);
}

Int floor_rat(const Rat& r) {
  Int num = mp::numerator(r), den = mp::denominator(r);
  Int q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

Int ceil_rat(const Rat& r) { return -floor_rat(-r); }

Int kth_root_floor(const Rat& r, unsigned k) {
  if (r < 0) throw std::domain_error("kth_root_floor: negative radicand");
  if (k == 0) throw std::invalid_argument("kth_root_floor: k = 0");
  if (r == 0) return 0;
  // double guess, then exact fix-up
  double guess = std::pow(to_double(r), 1.0 / k);
  Int n = Int(static_cast<long long>(std::max(0.0, guess)));
  while (pow_rat(Rat(n + 1), k) <= r) ++n;
  while (n > 0 && pow_rat(Rat(n), k) > r) --n;
  return n;
}

double Power::approx() const {
  return to_double(coeff) * std::pow(to_double(base), static_cast<double>(en) / static_cast<double>(ed));
}

int compare_powers(const Power& lhs, const Power& rhs) {
  if (lhs.coeff < 0 || rhs.coeff < 0) throw std::domain_error("compare_powers: negative coefficient");
  if (lhs.base <= 0 || rhs.base <= 0) throw std::domain_error("compare_powers: non-positive base");
  if (lhs.ed == 0 || rhs.ed == 0) throw std::invalid_argument("compare_powers: zero exponent denominator");
  if (lhs.coeff == 0 || rhs.coeff == 0) {
    if (lhs.coeff == rhs.coeff) return 0;
    return lhs.coeff == 0 ? -1 : 1;
  }
  // coeff_l * base_l^(en_l/ed_l) vs coeff_r * base_r^(en_r/ed_r), all positive:
  // raise both sides to D = lcm(ed_l, ed_r); x -> x^D preserves order.
  unsigned long d = std::lcm(lhs.ed, rhs.ed);
  auto side = [&](const Power& p) {
    long e = p.en * static_cast<long>(d / p.ed);
    return pow_rat(p.coeff, static_cast<long>(d)) * pow_rat(p.base, e);
  };
  Rat l = side(lhs), r = side(rhs);
  if (l < r) return -1;
  if (l > r) return 1;
  return 0;
}

}  // namespace dimlab
