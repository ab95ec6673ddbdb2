#pragma once

/**
 * @file driver.hpp
 * @brief Peeling loop and the sparsity-doubling outer loop.
 *
 * hash_and_iterate runs ceil(log2 B) Locate rounds with budgets B, B/2, ...,
 * adding each round's recovered vector z into a running accumulator w, so
 * later rounds see the smaller residual (x * y) - w and also repair earlier
 * mistakes.
 *
 * sparse_multiply guesses the output sparsity by doubling: round r uses
 * B_r = C * 2^r and delta_r = c / r^2, and returns the first candidate the
 * fingerprint test accepts. A run that exhausts its rounds reports failure
 * instead of an unverified vector.
 */

#include <sparseconv/fingerprint.hpp>
#include <sparseconv/fold.hpp>
#include <sparseconv/locate.hpp>
#include <sparseconv/random.hpp>
#include <sparseconv/sparse_vector.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace sparseconv {

struct AlgoParams {
  double isolation_constant = 16.0;   // C
  double failure_constant = 1.0 / 400;  // c
  double isolation_failure = 1.0 / 8;   // q
  double collision_fraction = 1.0 / 16;  // gamma
  Envelope envelope = kDefaultEnvelope;
  Index round_cap = 0;  // 0: ceil(log2 N) + 2

  Index max_outer_rounds(Index n) const {
    return round_cap != 0 ? round_cap : ceil_log2(n) + 2;
  }

  /// The relations the constants must satisfy:
  /// 2/(C^2 q) = gamma, gamma < 1/10, q <= 2^(-12/5), 5 gamma < 1/2 and
  /// 2 c sum r^-2 = c pi^2 / 3 <= 1/100.
  bool consistent() const {
    const double C = isolation_constant;
    const double derived_gamma = 2.0 / (C * C * isolation_failure);
    return std::abs(derived_gamma - collision_fraction) <= 1e-12 &&
           collision_fraction < 0.1 && isolation_failure <= std::pow(2.0, -12.0 / 5.0) &&
           5.0 * collision_fraction < 0.5 &&
           failure_constant * std::numbers::pi * std::numbers::pi / 3.0 <= 0.01;
  }
};

struct HashIterateTrace {
  std::vector<std::size_t> budgets;
  std::vector<SparseVector> accumulators;  // w after each round
  std::vector<LocateReport> locates;
  double round_delta = 0.0;
};

/// HashAndIterate on an engine already bound to (x, y).
inline SparseVector hash_and_iterate(LocateEngine& engine, std::size_t budget, double delta,
                                     Rng& rng, HashIterateTrace* trace = nullptr) {
  if (budget == 0) throw std::invalid_argument("hash_and_iterate: budget must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("hash_and_iterate: delta must lie in (0, 1)");
  }
  const Index rounds = std::max<Index>(1, ceil_log2(budget));
  const double round_delta = delta / static_cast<double>(rounds);
  if (trace != nullptr) *trace = HashIterateTrace{{}, {}, {}, round_delta};

  SparseVector w(engine.length());
  for (Index r = 1; r <= rounds; ++r) {
    const std::size_t round_budget = std::max<std::size_t>(1, budget >> (r - 1));
    LocateReport report;
    const SparseVector z = engine.run(w, round_budget, round_delta, rng, &report);
    w = add(w, z);
    if (trace != nullptr) {
      trace->budgets.push_back(round_budget);
      trace->accumulators.push_back(w);
      trace->locates.push_back(std::move(report));
    }
  }
  return w;
}

/// HashAndIterate(x, y, B, delta). x and y must be zero-padded.
inline SparseVector hash_and_iterate(const SparseVector& x, const SparseVector& y,
                                     std::size_t budget, double delta, Rng& rng,
                                     const AlgoParams& params = {},
                                     HashIterateTrace* trace = nullptr) {
  LocateEngine engine(x, y, params.isolation_constant);
  return hash_and_iterate(engine, budget, delta, rng, trace);
}

enum class MultiplyStatus {
  ok,
  rounds_exhausted,
  prime_search_failed,
  precision_exceeded,
  deadline_exceeded,
};

inline std::string_view to_string(MultiplyStatus s) {
  switch (s) {
    case MultiplyStatus::ok: return "ok";
    case MultiplyStatus::rounds_exhausted: return "rounds_exhausted";
    case MultiplyStatus::prime_search_failed: return "prime_search_failed";
    case MultiplyStatus::precision_exceeded: return "precision_exceeded";
    case MultiplyStatus::deadline_exceeded: return "deadline_exceeded";
  }
  return "unknown";
}

struct RoundRecord {
  Index round = 0;
  std::size_t budget = 0;
  double delta = 0.0;
  std::size_t candidate_terms = 0;
  bool verified = false;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct MultiplyResult {
  MultiplyStatus status = MultiplyStatus::rounds_exhausted;
  SparseVector product;  // zero vector unless status == ok
  Index rounds = 0;
  std::vector<RoundRecord> history;
  std::string message;

  bool ok() const noexcept { return status == MultiplyStatus::ok; }
};

struct MultiplyOptions {
  AlgoParams params;
  Deadline deadline;
};

/// Product of two polynomials of degree < n given as length-n vectors; the
/// result has length 2n. Deterministic in (u, v, seed).
inline MultiplyResult sparse_multiply(const SparseVector& u, const SparseVector& v,
                                      std::uint64_t seed, const MultiplyOptions& options = {}) {
  if (u.length() != v.length()) {
    throw LengthMismatch("sparse_multiply: operand lengths differ");
  }
  const AlgoParams& params = options.params;
  require_operand(u, params.envelope);
  require_operand(v, params.envelope);
  const Index n = 2 * u.length();
  if (n > params.envelope.max_dimension) {
    throw EnvelopeError("sparse_multiply: padded length 2n exceeds the envelope dimension");
  }
  const SparseVector x = pad_to(u, n);
  const SparseVector y = pad_to(v, n);

  Rng locate_rng = make_stream(seed, Stream::locate);
  Rng fingerprint_rng = make_stream(seed, Stream::fingerprint);
  LocateEngine engine(x, y, params.isolation_constant);
  engine.set_deadline(options.deadline);

  MultiplyResult result;
  result.product = SparseVector(n);
  const Index max_rounds = params.max_outer_rounds(n);
  for (Index r = 1; r <= max_rounds; ++r) {
    const auto budget = static_cast<std::size_t>(params.isolation_constant) << r;
    const double delta = params.failure_constant / static_cast<double>(r * r);
    RoundRecord record{r, budget, delta, 0, false};
    result.rounds = r;
    try {
      SparseVector z = hash_and_iterate(engine, budget, delta, locate_rng);
      record.candidate_terms = z.l0();
      if (options.deadline && Clock::now() > *options.deadline) {
        throw DeadlineExceeded("sparse_multiply: deadline exceeded");
      }
      record.verified = equality_test(x, y, z, delta, fingerprint_rng) == Equality::yes;
      result.history.push_back(record);
      if (record.verified) {
        result.status = MultiplyStatus::ok;
        result.product = std::move(z);
        return result;
      }
    } catch (const PrecisionError& e) {
      result.history.push_back(record);
      result.status = MultiplyStatus::precision_exceeded;
      result.message = e.what();
      return result;
    } catch (const PrimeSearchExhausted& e) {
      result.history.push_back(record);
      result.status = MultiplyStatus::prime_search_failed;
      result.message = e.what();
      return result;
    } catch (const DeadlineExceeded& e) {
      result.history.push_back(record);
      result.status = MultiplyStatus::deadline_exceeded;
      result.message = e.what();
      return result;
    }
  }
  result.status = MultiplyStatus::rounds_exhausted;
  result.message = "no candidate passed verification within " + std::to_string(max_rounds) +
                   " rounds";
  return result;
}

}  // namespace sparseconv
