#pragma once

// Shared helpers for the test suites: an independent map-based convolution
// oracle (kept deliberately separate from the library's dense path) and a
// splittable seeded generator so suites are reproducible and parallelizable.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "majorant/seq.hpp"

namespace testsup {

using majorant::cplx;
using majorant::SeqZ;
using SparseSeq = std::map<std::int64_t, cplx>;

inline SparseSeq to_sparse(const SeqZ& x) {
  SparseSeq m;
  for (std::int64_t n = 0; n < x.width(); ++n) {
    cplx v = x.coeffs()[static_cast<std::size_t>(n)];
    if (v != cplx{}) m[x.start() + n] = v;
  }
  return m;
}

inline SeqZ to_seq(const SparseSeq& m) {
  if (m.empty()) return {};
  const std::int64_t lo = m.begin()->first;
  const std::int64_t hi = m.rbegin()->first;
  std::vector<cplx> v(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [n, z] : m) v[static_cast<std::size_t>(n - lo)] = z;
  return SeqZ(lo, std::move(v));
}

inline SparseSeq naive_conv(const SparseSeq& x, const SparseSeq& y) {
  SparseSeq out;
  for (const auto& [n, a] : x) {
    for (const auto& [m, b] : y) out[n + m] += a * b;
  }
  return out;
}

inline SparseSeq naive_involute(const SparseSeq& x) {
  SparseSeq out;
  for (const auto& [n, a] : x) out[-n] = std::conj(a);
  return out;
}

inline SeqZ naive_convolve(const SeqZ& x, const SeqZ& y) {
  return to_seq(naive_conv(to_sparse(x), to_sparse(y)));
}

// splitmix64; streams derived by hashing (seed, stream) are independent.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static Rng stream(std::uint64_t seed, std::uint64_t idx) {
    Rng mix(seed);
    mix.state ^= 0x632be59bd9b4e019ULL * (idx + 1);
    mix.next();
    return Rng(mix.next());
  }
  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  double gauss() {
    double u1 = uniform(), u2 = uniform();
    while (u1 == 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

// Random sequence with support inside [start, start + width), at least one
// nonzero coefficient. Integer or complex-Gaussian values.
inline SeqZ random_seq(Rng& rng, std::int64_t width, bool integer_valued,
                       std::int64_t start = 0) {
  std::vector<cplx> v(static_cast<std::size_t>(width));
  bool any = false;
  for (auto& z : v) {
    const bool keep = rng.uniform() < 0.8;
    if (!keep) continue;
    if (integer_valued) {
      const std::int64_t k = rng.range(-3, 3);
      z = cplx(static_cast<double>(k), 0.0);
    } else {
      z = cplx(rng.gauss(), rng.gauss());
    }
    if (z != cplx{}) any = true;
  }
  if (!any) v[0] = integer_valued ? cplx(1.0, 0.0) : cplx(rng.gauss() + 2.0, rng.gauss());
  return SeqZ(start, std::move(v));
}

}  // namespace testsup
