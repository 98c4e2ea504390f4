#pragma once

#include "dimlab/function.hpp"
#include "dimlab/rational.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace dimlab {

/// splitmix64-seeded xoshiro256** (public domain algorithms by Blackman
/// and Vigna). Fixed here so that seeded runs are portable across builds.
struct Xoshiro256 {
  std::uint64_t s[4];

  explicit Xoshiro256(std::uint64_t seed);
  std::uint64_t next();
  double uniform01();                       // in [0,1)
  double uniform(double lo, double hi);
  std::uint64_t below(std::uint64_t bound); // in [0, bound)
};

enum class Family { Constant, Linear, Weierstrass, Takagi, MidpointDisplacement, FaberSchauder };

struct GeneratorSpec {
  Family family = Family::Constant;
  Rat c;                   // constant
  Rat slope, intercept;    // linear
  Rat w_a;                 // weierstrass amplitude ratio, 0 < a < 1
  unsigned w_b = 0;        // weierstrass frequency ratio, a*b >= 1
  unsigned terms = 0;      // weierstrass / takagi
  double hurst = 0.5;      // midpoint displacement
  double decay = 1.0;      // faber-schauder
  unsigned depth = 0;      // midpoint / faber levels
  std::uint64_t seed = 0;
  std::size_t n = 0;       // power of two plus one

  void validate() const;
  std::string family_name() const;
};

/// Deterministic function of the spec; bit-for-bit reproducible per platform.
SampledFunction generate(const GeneratorSpec& spec);

/// Exact piecewise form; available for constant, linear and takagi.
PiecewiseFunction to_piecewise(const GeneratorSpec& spec);
bool has_exact_form(const GeneratorSpec& spec);

struct UnsupportedOracle : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Certified oscillation bound over intervals of length t.
struct ModulusOracle {
  bool exact = true;
  std::function<Rat(const Rat&)> bound;
};

/// Closed-form modulus for constant, linear, weierstrass, takagi.
/// Throws UnsupportedOracle for the stochastic families.
ModulusOracle modulus_oracle(const GeneratorSpec& spec);

/// Grid-Lipschitz fallback for arbitrary samples: bound(t) =
/// max|dv| * (t/delta + 2). Sound for the sampled points only; flagged
/// non-exact.
ModulusOracle heuristic_modulus(const SampledFunction& f);

/// Parses "family:params", e.g. "constant:0", "linear:2,-1",
/// "weierstrass:1/2,3,12", "takagi:10", "midpoint:0.5,8", "faber:1.0,8".
GeneratorSpec parse_generator_spec(const std::string& text, std::uint64_t seed, std::size_t n);

}  // namespace dimlab
