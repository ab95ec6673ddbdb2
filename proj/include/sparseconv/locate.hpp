#pragma once

/**
 * @file locate.hpp
 * @brief Recovering (index, value) pairs of the residual (x * y) - w.
 *
 * Each repetition hashes indices by j mod p for a random prime p, computes
 * the folded residual, and reads every heavy bucket as v * omega^j: the
 * magnitude rounds to |v| and the phase decodes to j (or j + N when v < 0).
 * Pairs decoded in at least 3/4 of the repetitions survive.
 */

#include <sparseconv/fold.hpp>
#include <sparseconv/numtheory.hpp>
#include <sparseconv/random.hpp>
#include <sparseconv/sparse_vector.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace sparseconv {

using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

class DeadlineExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double unit_distance2(Complex u, Index l, Index two_n, Index n) {
  const Index e = l % two_n;
  return std::norm(u - root_of_unity_power(e, n));
}

}  // namespace detail

/// The j in [0, 2N) minimizing |u - omega^j|, for u on (or near) the unit
/// circle. The sign pattern of u picks the quarter of the circle, then a
/// ternary search over that arc (padded by one step on each side) finds j
/// with O(log N) root evaluations.
inline Index decode_index(Complex u, Index n) {
  if (n == 0) throw std::invalid_argument("decode_index: N must be positive");
  const Index two_n = 2 * n;
  if (n <= 8) {
    Index best = 0;
    double best_d = detail::unit_distance2(u, 0, two_n, n);
    for (Index l = 1; l < two_n; ++l) {
      const double d = detail::unit_distance2(u, l, two_n, n);
      if (d < best_d) {
        best_d = d;
        best = l;
      }
    }
    return best;
  }

  int quadrant = 0;
  if (u.imag() >= 0.0) {
    quadrant = u.real() >= 0.0 ? 0 : 1;
  } else {
    quadrant = u.real() < 0.0 ? 2 : 3;
  }
  // Quadrant q covers exponents [qN/2, (q+1)N/2]; offsets are shifted by
  // 2N so the padded window never goes negative.
  const Index q = static_cast<Index>(quadrant);
  Index lo = two_n + (q * n) / 2 - 1;
  Index hi = two_n + ((q + 1) * n + 1) / 2 + 1;
  auto dist = [&](Index l) { return detail::unit_distance2(u, l, two_n, n); };

  while (hi - lo > 2) {
    const Index third = (hi - lo) / 3;
    const Index m1 = lo + third;
    const Index m2 = hi - third;
    const double d1 = dist(m1);
    const double d2 = dist(m2);
    if (d1 < d2) {
      hi = m2 - 1;
    } else if (d1 > d2) {
      lo = m1 + 1;
    } else {
      lo = m1;
      hi = m2;
    }
  }
  Index best = lo;
  double best_d = dist(lo);
  for (Index l = lo + 1; l <= hi; ++l) {
    const double d = dist(l);
    if (d < best_d) {
      best_d = d;
      best = l;
    }
  }
  return best % two_n;
}

struct Candidate {
  Index index = 0;
  Coeff value = 0;
  std::size_t hits = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

inline Index ceil_log2(Index v) {
  return v <= 1 ? 0 : static_cast<Index>(std::bit_width(v - 1));
}

/// Repetition count max(1, 5 * ceil(log2(1/delta))).
inline std::size_t locate_repetitions(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("locate: delta must lie in (0, 1)");
  }
  const double bits = std::ceil(std::log2(1.0 / delta) - 1e-12);
  return std::max<std::size_t>(1, 5 * static_cast<std::size_t>(std::max(0.0, bits)));
}

struct LocateParams {
  std::size_t budget = 1;  // B: at most this many heavy buckets per repetition
  double delta = 0.5;
  double isolation_constant = 16.0;  // C
  double heavy_threshold = 0.5;
  double reencode_tolerance = 0.1;

  std::size_t repetitions() const { return locate_repetitions(delta); }
  /// ceil(3t/4)
  std::size_t prune_threshold() const { return (3 * repetitions() + 3) / 4; }
};

/// Upper end of the prime range for hashing: C * B * ceil(log2 N)^2
/// (saturating at 2^63).
inline Index locate_prime_limit(std::size_t budget, Index n, double isolation_constant) {
  const double lg = static_cast<double>(std::max<Index>(1, ceil_log2(n)));
  const double v = isolation_constant * static_cast<double>(budget) * lg * lg;
  if (v >= 9.2e18) return Index{1} << 63;
  return static_cast<Index>(v);
}

/// Fraction of support indices whose bucket j mod p holds no other index.
inline double isolated_fraction(std::span<const Index> support, Index p) {
  if (support.empty()) return 1.0;
  std::unordered_map<Index, std::size_t> load;
  load.reserve(support.size() * 2);
  for (Index j : support) ++load[j % p];
  std::size_t isolated = 0;
  for (Index j : support) isolated += load[j % p] == 1 ? 1 : 0;
  return static_cast<double>(isolated) / static_cast<double>(support.size());
}

struct LocateReport {
  std::vector<Index> moduli;  // bucket count used by each evaluated repetition
  std::size_t repetitions = 0;
  bool identity_hash = false;
  bool overflow = false;
  std::size_t conflicts = 0;
  std::vector<Candidate> candidates;  // survivors of pruning, by index
};

/**
 * Locate for fixed operands x and y, reusable across many (w, B, delta).
 *
 * When the prime range C*B*ceil(log2 N)^2 reaches N, no hash modulus can beat
 * the identity j -> j, which isolates every index. The engine then folds with
 * m = N; that choice is deterministic, so all t repetitions coincide and the
 * bucket array is evaluated once and counted t times.
 */
class LocateEngine {
 public:
  LocateEngine(const SparseVector& x, const SparseVector& y, double isolation_constant = 16.0)
      : folder_(x, y), isolation_constant_(isolation_constant) {}

  void set_deadline(Deadline deadline) { deadline_ = deadline; }
  Index length() const noexcept { return folder_.length(); }

  SparseVector run(const SparseVector& w, std::size_t budget, double delta, Rng& rng,
                   LocateReport* report = nullptr) {
    LocateParams params;
    params.budget = budget;
    params.delta = delta;
    params.isolation_constant = isolation_constant_;
    return run(w, params, rng, report);
  }

  SparseVector run(const SparseVector& w, const LocateParams& params, Rng& rng,
                   LocateReport* report = nullptr) {
    const Index n = folder_.length();
    if (w.length() != n) throw LengthMismatch("locate: w length differs from x and y");
    if (params.budget == 0) throw std::invalid_argument("locate: budget B must be positive");
    const std::size_t t = params.repetitions();
    const std::size_t keep = params.prune_threshold();
    const Index limit = locate_prime_limit(params.budget, n, params.isolation_constant);
    const bool identity = limit >= n;
    const std::size_t evaluations = identity ? 1 : t;
    const PhasedVector residual_w = PhasedVector::encode(w);

    LocateReport local;
    LocateReport& rep = report != nullptr ? *report : local;
    rep = LocateReport{};
    rep.repetitions = t;
    rep.identity_hash = identity;

    std::vector<std::pair<Index, Coeff>> decoded;
    for (std::size_t r = 0; r < evaluations; ++r) {
      if (deadline_ && Clock::now() > *deadline_) {
        throw DeadlineExceeded("locate: deadline exceeded");
      }
      const Index m = identity ? n : sample_prime_uniform(primes_.primes_up_to(limit), rng);
      rep.moduli.push_back(m);
      buckets_.assign(m, Complex{});
      folder_.compute(residual_w, m, buckets_);

      heavy_.clear();
      for (Index b = 0; b < m; ++b) {
        if (std::abs(buckets_[b]) >= params.heavy_threshold) {
          heavy_.push_back(b);
          if (heavy_.size() > params.budget) {
            rep.overflow = true;
            return SparseVector(n);
          }
        }
      }
      for (Index b : heavy_) {
        const Complex value = buckets_[b];
        const double magnitude = std::abs(value);
        const Coeff v = std::llround(magnitude);
        const Index raw = decode_index(value / magnitude, n);
        const Index i = raw >= n ? raw - n : raw;
        if (i % m != b) continue;
        const Complex expected = static_cast<double>(v) * root_of_unity_power(raw, n);
        if (std::abs(value - expected) > params.reencode_tolerance) continue;
        decoded.emplace_back(i, raw >= n ? -v : v);
      }
    }

    std::sort(decoded.begin(), decoded.end());
    const std::size_t weight = identity ? t : 1;
    std::vector<Candidate> survivors;
    for (std::size_t a = 0; a < decoded.size();) {
      std::size_t b = a;
      while (b < decoded.size() && decoded[b] == decoded[a]) ++b;
      const std::size_t hits = (b - a) * weight;
      if (hits >= keep) survivors.push_back({decoded[a].first, decoded[a].second, hits});
      a = b;
    }

    // Distinct values at one index: keep the most frequent, then the smaller
    // magnitude, then the smaller value.
    std::vector<Candidate> chosen;
    for (std::size_t a = 0; a < survivors.size();) {
      std::size_t b = a;
      Candidate best = survivors[a];
      while (b < survivors.size() && survivors[b].index == survivors[a].index) {
        const auto& c = survivors[b];
        const auto mag = [](Coeff v) { return v < 0 ? -v : v; };
        if (c.hits > best.hits ||
            (c.hits == best.hits &&
             (mag(c.value) < mag(best.value) ||
              (mag(c.value) == mag(best.value) && c.value < best.value)))) {
          best = c;
        }
        ++b;
      }
      if (b - a > 1) ++rep.conflicts;
      chosen.push_back(best);
      a = b;
    }

    std::vector<Term> terms;
    terms.reserve(chosen.size());
    for (const auto& c : chosen) terms.push_back({c.index, c.value});
    rep.candidates = std::move(chosen);
    return SparseVector::from_canonical(n, std::move(terms));
  }

 private:
  ResidualFolder folder_;
  PrimeCache primes_;
  double isolation_constant_;
  Deadline deadline_;
  std::vector<Complex> buckets_;
  std::vector<Index> heavy_;
};

/// One-shot Locate(x, y, w, B, delta). x and y must be zero-padded.
inline SparseVector locate(const SparseVector& x, const SparseVector& y, const SparseVector& w,
                           std::size_t budget, double delta, Rng& rng,
                           LocateReport* report = nullptr) {
  LocateEngine engine(x, y);
  return engine.run(w, budget, delta, rng, report);
}

}  // namespace sparseconv
