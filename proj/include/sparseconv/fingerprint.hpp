#pragma once

// Probabilistic check that x * y == w: treat the vectors as coefficient
// lists of polynomials f_x, f_y, f_w and compare f_x(r) f_y(r) with f_w(r)
// modulo a random prime p in [c'N, 2c'N] at a few random points r.
// Equal inputs always pass; unequal ones pass with probability <= delta.

#include <sparseconv/numtheory.hpp>
#include <sparseconv/random.hpp>
#include <sparseconv/sparse_vector.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace sparseconv {

struct FingerprintParams {
  std::uint64_t c_prime = 64;
  int mr_rounds = kFingerprintMillerRabinRounds;

  /// ceil(log2(3/delta) / log2(c')) + 1 evaluation points.
  int eval_rounds(double delta) const {
    return static_cast<int>(std::ceil(std::log2(3.0 / delta) /
                                      std::log2(static_cast<double>(c_prime)))) +
           1;
  }
};

/// sum_j f_j * point^j mod p.
inline std::uint64_t eval_sparse_poly_mod(const SparseVector& f, std::uint64_t point,
                                          std::uint64_t p) {
  if (p == 0) throw std::invalid_argument("eval_sparse_poly_mod: modulus must be positive");
  std::uint64_t acc = 0;
  for (const auto& t : f.terms()) {
    const auto sp = static_cast<std::int64_t>(p);
    std::int64_t c = t.coeff % sp;
    if (c < 0) c += sp;
    acc = (acc + mulmod(static_cast<std::uint64_t>(c), modpow(point, t.index, p), p)) % p;
  }
  return acc;
}

enum class Equality { no, yes };

/// Operands must be zero-padded so that x * y has no cyclic wrap; the test
/// compares the polynomial product f_x f_y against f_w.
inline Equality equality_test(const SparseVector& x, const SparseVector& y,
                              const SparseVector& w, double delta, Rng& rng,
                              const FingerprintParams& params = {}) {
  if (x.length() != y.length() || x.length() != w.length()) {
    throw LengthMismatch("equality_test: x, y and w must share one length");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("equality_test: delta must lie in (0, 1)");
  }
  const std::uint64_t lo = params.c_prime * x.length();
  const std::uint64_t p = random_prime_in_range(lo, 2 * lo, delta / 3.0, rng, params.mr_rounds);
  const int rounds = params.eval_rounds(delta);
  for (int r = 0; r < rounds; ++r) {
    const std::uint64_t point = uniform_u64(rng, 0, p - 1);
    const std::uint64_t lhs =
        mulmod(eval_sparse_poly_mod(x, point, p), eval_sparse_poly_mod(y, point, p), p);
    if (lhs != eval_sparse_poly_mod(w, point, p)) return Equality::no;
  }
  return Equality::yes;
}

}  // namespace sparseconv
