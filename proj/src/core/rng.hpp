#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace deconv {

inline uint64_t
splitmix64(uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

//! Child seed for stream `counter` of `master`; streams never overlap in
//! practice and do not depend on the order in which they are requested.
inline uint64_t
stream_seed(uint64_t master, uint64_t counter)
{
  return splitmix64(splitmix64(master) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
}

//! mt19937_64 with portable uniform and normal draws (the standard
//! distributions are implementation defined, these are not).
class Rng
{
public:
  explicit Rng(uint64_t seed)
    : engine_(seed)
  {}

  uint64_t bits() { return engine_(); }

  //! Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  //! Box-Muller, one value per call (the partner value is discarded).
  double normal()
  {
    double u1 = uniform();
    while (u1 <= 0.0)
      u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  //! Standard Laplace by inversion.
  double laplace()
  {
    const double u = uniform() - 0.5;
    const double s = u < 0.0 ? -1.0 : 1.0;
    double v = 1.0 - 2.0 * std::abs(u);
    if (v <= 0.0)
      v = 0x1.0p-53;
    return -s * std::log(v);
  }

private:
  std::mt19937_64 engine_;
};

} // namespace deconv
