#pragma once

#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

#include "iprox/types.hpp"

namespace iprox {

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Seed for per-point randomness: depends on the bit pattern of x only.
inline std::uint64_t hash_point(std::uint64_t seed, const Vec& x) {
  std::uint64_t h = mix64(seed);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double v = x[i] == 0.0 ? 0.0 : x[i];  // fold -0.0 into +0.0
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    h = mix64(h ^ bits);
  }
  return h;
}

using Rng = std::mt19937_64;

inline Vec gaussian_vec(Rng& rng, int dim) {
  std::normal_distribution<double> nd;
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = nd(rng);
  return v;
}

/// Uniform direction on the unit sphere.
inline Vec unit_direction(Rng& rng, int dim) {
  Vec v = gaussian_vec(rng, dim);
  double n = v.norm();
  while (n == 0.0) {
    v = gaussian_vec(rng, dim);
    n = v.norm();
  }
  return v / n;
}

/// Points uniform in the box [-r, r]^dim.
inline std::vector<Vec> box_cloud(std::uint64_t seed, int dim, int count, double r) {
  Rng rng(derive_seed(seed, 0xc10d));
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<Vec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v[j] = u(rng);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace iprox
