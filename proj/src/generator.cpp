#include "dimlab/generator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dimlab {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

bool power_of_two_plus_one(std::size_t n) {
  if (n < 3) return false;
  std::size_t m = n - 1;
  return (m & (m - 1)) == 0;
}

// distance from y to the nearest integer, exact
Rat tent(const Rat& y) {
  Int fl = floor_rat(y);
  Rat frac = y - Rat(fl);
  Rat other = 1 - frac;
  return frac < other ? frac : other;
}

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& w : s) w = splitmix64(x);
}

std::uint64_t Xoshiro256::next() {
  std::uint64_t result = rotl(s[1] * 5, 7) * 9;
  std::uint64_t t = s[1] << 17;
  s[2] ^= s[0];
  s[3] ^= s[1];
  s[1] ^= s[2];
  s[0] ^= s[3];
  s[2] ^= t;
  s[3] = rotl(s[3], 45);
  return result;
}

double Xoshiro256::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Xoshiro256::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::uint64_t Xoshiro256::below(std::uint64_t bound) { return next() % bound; }

void GeneratorSpec::validate() const {
  if (!power_of_two_plus_one(n)) throw std::invalid_argument("GeneratorSpec: n must be a power of two plus one");
  switch (family) {
    case Family::Constant:
    case Family::Linear:
      break;
    case Family::Weierstrass:
      if (!(w_a > 0 && w_a < 1)) throw std::invalid_argument("weierstrass: need 0 < a < 1");
      if (Rat(w_b) * w_a < 1) throw std::invalid_argument("weierstrass: need a*b >= 1");
      if (terms == 0) throw std::invalid_argument("weierstrass: need terms >= 1");
      break;
    case Family::Takagi:
      if (terms == 0) throw std::invalid_argument("takagi: need terms >= 1");
      break;
    case Family::MidpointDisplacement:
      if (!(hurst > 0 && hurst < 1)) throw std::invalid_argument("midpoint: need hurst in (0,1)");
      if (depth == 0) throw std::invalid_argument("midpoint: need depth >= 1");
      break;
    case Family::FaberSchauder:
      if (!(decay > 0)) throw std::invalid_argument("faber: need decay > 0");
      if (depth == 0) throw std::invalid_argument("faber: need depth >= 1");
      break;
  }
}

std::string GeneratorSpec::family_name() const {
  switch (family) {
    case Family::Constant: return "constant";
    case Family::Linear: return "linear";
    case Family::Weierstrass: return "weierstrass";
    case Family::Takagi: return "takagi";
    case Family::MidpointDisplacement: return "midpoint";
    case Family::FaberSchauder: return "faber";
  }
  return "?";
}

SampledFunction generate(const GeneratorSpec& spec) {
  spec.validate();
  std::size_t n = spec.n;
  std::vector<double> v(n, 0.0);
  switch (spec.family) {
    case Family::Constant: {
      std::fill(v.begin(), v.end(), to_double(spec.c));
      break;
    }
    case Family::Linear: {
      double a = to_double(spec.slope), b = to_double(spec.intercept);
      for (std::size_t i = 0; i < n; ++i) v[i] = a * (static_cast<double>(i) / (n - 1)) + b;
      break;
    }
    case Family::Weierstrass: {
      double a = to_double(spec.w_a);
      for (std::size_t i = 0; i < n; ++i) {
        double x = static_cast<double>(i) / (n - 1), amp = 1.0, freq = 1.0, sum = 0.0;
        for (unsigned t = 0; t < spec.terms; ++t) {
          sum += amp * std::cos(freq * M_PI * x);
          amp *= a;
          freq *= spec.w_b;
        }
        v[i] = sum;
      }
      break;
    }
    case Family::Takagi: {
      for (std::size_t i = 0; i < n; ++i) {
        double x = static_cast<double>(i) / (n - 1), amp = 1.0, freq = 1.0, sum = 0.0;
        for (unsigned t = 0; t < spec.terms; ++t) {
          double y = freq * x;
          double fr = y - std::floor(y);
          sum += amp * std::min(fr, 1.0 - fr);
          amp *= 0.5;
          freq *= 2.0;
        }
        v[i] = sum;
      }
      break;
    }
    case Family::MidpointDisplacement: {
      // recursive midpoint displacement: level L midpoints get a uniform
      // [-1,1] displacement scaled by 2^{-(L+1)*hurst}; levels past `depth`
      // interpolate without displacement
      Xoshiro256 rng(spec.seed);
      std::size_t levels = 0;
      while ((std::size_t{1} << levels) < n - 1) ++levels;
      for (std::size_t L = 0; L < levels; ++L) {
        std::size_t step = (n - 1) >> L;       // span at this level
        std::size_t half = step / 2;
        double amp = std::pow(2.0, -static_cast<double>(L + 1) * spec.hurst);
        for (std::size_t left = 0; left + step < n; left += step) {
          double mid = 0.5 * (v[left] + v[left + step]);
          double disp = (L < spec.depth) ? amp * rng.uniform(-1.0, 1.0) : 0.0;
          v[left + half] = mid + disp;
        }
      }
      break;
    }
    case Family::FaberSchauder: {
      // random +-1 coefficients on the Schauder hat basis, amplitude 2^{-j*decay}
      Xoshiro256 rng(spec.seed);
      std::size_t levels = 0;
      while ((std::size_t{1} << levels) < n - 1) ++levels;
      unsigned maxj = std::min<unsigned>(spec.depth, static_cast<unsigned>(levels));
      for (unsigned j = 0; j < maxj; ++j) {
        double amp = std::pow(2.0, -static_cast<double>(j) * spec.decay);
        std::size_t hats = std::size_t{1} << j;
        for (std::size_t i = 0; i < hats; ++i) {
          double coeff = (rng.next() & 1) ? amp : -amp;
          double center = (i + 0.5) / hats, halfw = 0.5 / hats;
          // add the hat on the grid
          for (std::size_t g = 0; g < n; ++g) {
            double x = static_cast<double>(g) / (n - 1);
            double w = 1.0 - std::fabs(x - center) / halfw;
            if (w > 0) v[g] += coeff * w;
          }
        }
      }
      break;
    }
  }
  return SampledFunction(n, std::move(v));
}

bool has_exact_form(const GeneratorSpec& spec) {
  return spec.family == Family::Constant || spec.family == Family::Linear || spec.family == Family::Takagi;
}

PiecewiseFunction to_piecewise(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::Constant:
      return PiecewiseFunction::constant(spec.c);
    case Family::Linear:
      return PiecewiseFunction::linear(spec.slope, spec.intercept);
    case Family::Takagi: {
      // the truncated series is affine between consecutive multiples of 2^-terms
      std::size_t segs = std::size_t{1} << spec.terms;
      std::vector<Rat> xs(segs + 1), ys(segs + 1);
      for (std::size_t t = 0; t <= segs; ++t) {
        Rat x(static_cast<long long>(t), static_cast<long long>(segs));
        Rat sum(0);
        Rat amp(1), freq(1);
        for (unsigned i = 0; i < spec.terms; ++i) {
          sum += amp * tent(freq * x);
          amp /= 2;
          freq *= 2;
        }
        xs[t] = x;
        ys[t] = sum;
      }
      return PiecewiseFunction::interpolate(xs, ys);
    }
    default:
      throw std::invalid_argument("to_piecewise: no exact form for family " + spec.family_name());
  }
}

ModulusOracle modulus_oracle(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::Constant:
      return {true, [](const Rat&) { return Rat(0); }};
    case Family::Linear: {
      Rat s = spec.slope < 0 ? Rat(-spec.slope) : spec.slope;
      return {true, [s](const Rat& t) { return s * t; }};
    }
    case Family::Takagi: {
      unsigned terms = spec.terms;
      return {true, [terms](const Rat& t) {
                Rat sum(0), amp(1), freq(1);
                for (unsigned i = 0; i < terms; ++i) {
                  Rat local = freq * t;
                  sum += amp * (local < 1 ? local : Rat(1));
                  amp /= 2;
                  freq *= 2;
                }
                return sum;
              }};
    }
    case Family::Weierstrass: {
      // |cos u - cos w| <= min(|u - w|, 2); 355/113 is an upper bound on pi
      Rat a = spec.w_a;
      unsigned b = spec.w_b, terms = spec.terms;
      const Rat pi_hi(355, 113);
      return {true, [a, b, terms, pi_hi](const Rat& t) {
                Rat sum(0), amp(1), freq(1);
                for (unsigned i = 0; i < terms; ++i) {
                  Rat local = freq * pi_hi * t;
                  sum += amp * (local < 2 ? local : Rat(2));
                  amp *= a;
                  freq *= b;
                }
                return sum;
              }};
    }
    default:
      throw UnsupportedOracle("no closed-form modulus for family " + spec.family_name());
  }
}

ModulusOracle heuristic_modulus(const SampledFunction& f) {
  double dmax = 0;
  for (std::size_t i = 0; i + 1 < f.n; ++i) dmax = std::max(dmax, std::fabs(f.values[i + 1] - f.values[i]));
  Rat step = rat_from_double(dmax);
  Rat delta = f.delta_rat();
  return {false, [step, delta](const Rat& t) { return step * (t / delta + 2); }};
}

GeneratorSpec parse_generator_spec(const std::string& text, std::uint64_t seed, std::size_t n) {
  GeneratorSpec spec;
  spec.seed = seed;
  spec.n = n;
  auto colon = text.find(':');
  std::string fam = text.substr(0, colon);
  std::vector<std::string> args;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) args.push_back(tok);
  }
  auto want = [&](std::size_t k) {
    if (args.size() != k)
      throw std::invalid_argument("generator '" + fam + "' expects " + std::to_string(k) + " parameter(s)");
  };
  if (fam == "constant") {
    want(args.empty() ? 0 : 1);
    spec.family = Family::Constant;
    spec.c = args.empty() ? Rat(0) : parse_rat(args[0]);
  } else if (fam == "linear") {
    want(2);
    spec.family = Family::Linear;
    spec.slope = parse_rat(args[0]);
    spec.intercept = parse_rat(args[1]);
  } else if (fam == "weierstrass") {
    want(3);
    spec.family = Family::Weierstrass;
    spec.w_a = parse_rat(args[0]);
    spec.w_b = static_cast<unsigned>(std::stoul(args[1]));
    spec.terms = static_cast<unsigned>(std::stoul(args[2]));
  } else if (fam == "takagi") {
    want(1);
    spec.family = Family::Takagi;
    spec.terms = static_cast<unsigned>(std::stoul(args[0]));
  } else if (fam == "midpoint") {
    want(2);
    spec.family = Family::MidpointDisplacement;
    spec.hurst = std::stod(args[0]);
    spec.depth = static_cast<unsigned>(std::stoul(args[1]));
  } else if (fam == "faber") {
    want(2);
    spec.family = Family::FaberSchauder;
    spec.decay = std::stod(args[0]);
    spec.depth = static_cast<unsigned>(std::stoul(args[1]));
  } else {
    throw std::invalid_argument("unknown generator family '" + fam + "'");
  }
  spec.validate();
  return spec;
}

}  // namespace dimlab
