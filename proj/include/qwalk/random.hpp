#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qwalk/linalg.hpp"

namespace qwalk {

// std::mt19937_64 and std::seed_seq are fully specified by the standard, so
// every stream below is reproducible across toolchains. The std::*_distribution
// templates are not, hence the hand-rolled transforms.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline int uniform_int(Rng& rng, int n) {
  return static_cast<int>(uniform01(rng) * static_cast<double>(n));
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Standard normal via Box-Muller.
inline double standard_normal(Rng& rng) {
  double u1 = 0.0;
  do {
    u1 = uniform01(rng);
  } while (u1 <= 0.0);
  double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal pushed into Q.
inline Matrix haar_unitary(int d, Rng& rng) {
  Matrix g(d, d);
  const double s = std::sqrt(0.5);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = cplx(s * standard_normal(rng), s * standard_normal(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    double mag = std::abs(r(i, i));
    cplx phase = mag > 0.0 ? r(i, i) / mag : cplx(1.0, 0.0);
    q.col(i) *= phase;
  }
  return q;
}

}  // namespace qwalk
