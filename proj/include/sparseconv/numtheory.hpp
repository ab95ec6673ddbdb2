#pragma once

/**
 * @file numtheory.hpp
 * @brief Primes for hashing and fingerprinting.
 *
 * Locate draws its hash moduli uniformly from a sieved prime pool; the
 * fingerprint test draws one large random prime by rejection sampling with
 * Miller-Rabin. Both take the caller's generator explicitly.
 */

#include <sparseconv/random.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparseconv {

/// All primes <= limit, ascending.
class PrimePool {
 public:
  PrimePool() = default;
  PrimePool(std::uint64_t limit, std::vector<std::uint64_t> primes)
      : limit_(limit), primes_(std::move(primes)) {}

  std::uint64_t limit() const noexcept { return limit_; }
  std::span<const std::uint64_t> primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }
  bool empty() const noexcept { return primes_.empty(); }

  /// The primes <= bound (bound must not exceed limit()).
  std::span<const std::uint64_t> up_to(std::uint64_t bound) const {
    if (bound > limit_) throw std::out_of_range("PrimePool::up_to: bound exceeds sieve limit");
    auto end = std::upper_bound(primes_.begin(), primes_.end(), bound);
    return {primes_.data(), static_cast<std::size_t>(end - primes_.begin())};
  }

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> primes_;
};

/// Sieve of Eratosthenes over the odd numbers.
inline PrimePool sieve_primes(std::uint64_t limit) {
  if (limit < 2) throw std::invalid_argument("sieve_primes: limit must be at least 2");
  // composite[i] describes the odd number 2i+1
  const std::uint64_t half = (limit + 1) / 2;
  std::vector<bool> composite(half, false);
  for (std::uint64_t i = 1; 2 * i * (i + 1) < half; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    for (std::uint64_t j = 2 * i * (i + 1); j < half; j += p) composite[j] = true;
  }
  std::vector<std::uint64_t> primes;
  primes.reserve(static_cast<std::size_t>(1.3 * limit / std::max(1.0, std::log(limit))) + 8);
  primes.push_back(2);
  for (std::uint64_t i = 1; i < half; ++i) {
    if (!composite[i]) primes.push_back(2 * i + 1);
  }
  return {limit, std::move(primes)};
}

/// Grows a single pool monotonically so repeated requests with increasing
/// limits never re-sieve below what is already known.
class PrimeCache {
 public:
  std::span<const std::uint64_t> primes_up_to(std::uint64_t limit) {
    if (limit < 2) return {};
    if (limit > pool_.limit()) {
      pool_ = sieve_primes(std::max(limit, 2 * pool_.limit()));
    }
    return pool_.up_to(limit);
  }

  const PrimePool& pool() const noexcept { return pool_; }

 private:
  PrimePool pool_;
};

inline std::uint64_t sample_prime_uniform(std::span<const std::uint64_t> primes, Rng& rng) {
  if (primes.empty()) throw std::invalid_argument("sample_prime_uniform: empty prime pool");
  return primes[uniform_u64(rng, 0, primes.size() - 1)];
}

inline std::uint64_t sample_prime_uniform(const PrimePool& pool, Rng& rng) {
  return sample_prime_uniform(pool.primes(), rng);
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

/// base^exponent mod modulus by square-and-multiply.
inline std::uint64_t modpow(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus) {
  if (modulus == 0) throw std::invalid_argument("modpow: modulus must be positive");
  std::uint64_t result = 1 % modulus;
  base %= modulus;
  while (exponent > 0) {
    if (exponent & 1U) result = mulmod(result, base, modulus);
    base = mulmod(base, base, modulus);
    exponent >>= 1U;
  }
  return result;
}

enum class Primality { composite, probably_prime };

/// Randomized Miller-Rabin. A composite verdict is always correct; a
/// probably_prime verdict errs with probability at most 4^-rounds.
inline Primality miller_rabin(std::uint64_t n, int rounds, Rng& rng) {
  if (n < 2) return Primality::composite;
  if (n < 4) return Primality::probably_prime;
  if (n % 2 == 0) return Primality::composite;

  const std::uint64_t m = n - 1;
  const int s = std::countr_zero(m);
  const std::uint64_t d = m >> s;
  for (int r = 0; r < rounds; ++r) {
    const std::uint64_t a = uniform_u64(rng, 2, n - 2);
    std::uint64_t x = modpow(a, d, n);
    if (x == 1 || x == m) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == m) {
        witness = false;
        break;
      }
    }
    if (witness) return Primality::composite;
  }
  return Primality::probably_prime;
}

inline constexpr int kFingerprintMillerRabinRounds = 50;

class PrimeSearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of uniform draws random_prime_in_range makes before giving up:
/// ceil(ln(hi) * ln(2 / failure_budget)).
inline std::uint64_t prime_search_budget(std::uint64_t hi, double failure_budget) {
  return static_cast<std::uint64_t>(
      std::ceil(std::log(static_cast<double>(hi)) * std::log(2.0 / failure_budget)));
}

/// Uniform draws from the odd numbers in [lo, hi] until one passes
/// Miller-Rabin. The per-call chance of returning a composite is below
/// failure_budget / 2.
inline std::uint64_t random_prime_in_range(std::uint64_t lo, std::uint64_t hi,
                                           double failure_budget, Rng& rng,
                                           int min_rounds = kFingerprintMillerRabinRounds) {
  if (lo < 2 || hi < 2 * lo) {
    throw std::invalid_argument("random_prime_in_range: need hi >= 2*lo >= 4");
  }
  if (!(failure_budget > 0.0 && failure_budget < 1.0)) {
    throw std::invalid_argument("random_prime_in_range: failure budget must be in (0,1)");
  }
  // 4^-rounds <= budget/2
  const int rounds = std::max(
      min_rounds,
      static_cast<int>(std::ceil(std::log2(2.0 / failure_budget) / 2.0)));
  const std::uint64_t draws = prime_search_budget(hi, failure_budget);
  // Only odd candidates are drawn (the range always holds an odd prime since
  // hi >= 2 lo), which halves the expected number of draws.
  const std::uint64_t first = lo | 1U;
  const std::uint64_t odd_count = ((hi - first) >> 1U) + 1;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const std::uint64_t candidate = first + 2 * uniform_u64(rng, 0, odd_count - 1);
    if (miller_rabin(candidate, rounds, rng) == Primality::probably_prime) return candidate;
  }
  throw PrimeSearchExhausted("no prime found in [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] within " + std::to_string(draws) +
                             " draws");
}

}  // namespace sparseconv
