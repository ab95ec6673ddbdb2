#pragma once

#include <sparseconv/random.hpp>
#include <sparseconv/sparse_vector.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

namespace sparseconv {

/// Parameters of a generated operand pair.
///
/// cancel_fraction = 0 draws both operands uniformly (distinct random
/// indices in [0, n), coefficients uniform in [-bound, bound] \ {0}).
/// cancel_fraction = 1 gives the telescoping pair u = 1 + z + ... + z^(terms-1),
/// v = z - 1, whose product z^terms - 1 has two terms. In between, u starts
/// with a block of round(f * terms) ones followed by random terms, and v is
/// z - 1 plus round((1 - f) * (terms - 2)) random terms.
struct InstanceSpec {
  Index n = 1;
  std::size_t terms = 1;
  Coeff coeff_bound = 1;
  double cancel_fraction = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

/// count distinct integers from [lo, hi), ascending (Floyd's sampling).
inline std::vector<Index> sample_distinct(Rng& rng, Index lo, Index hi, std::size_t count) {
  const Index range = hi - lo;
  if (count > range) throw std::invalid_argument("sample_distinct: count exceeds range");
  std::unordered_set<Index> chosen;
  chosen.reserve(count * 2);
  std::vector<Index> out;
  out.reserve(count);
  for (Index j = range - count; j < range; ++j) {
    const Index t = uniform_u64(rng, 0, j);
    const Index pick = chosen.contains(t) ? j : t;
    chosen.insert(pick);
    out.push_back(lo + pick);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Coeff random_coeff(Rng& rng, Coeff bound) {
  const auto mag = static_cast<Coeff>(uniform_u64(rng, 1, static_cast<std::uint64_t>(bound)));
  return uniform_u64(rng, 0, 1) == 0 ? -mag : mag;
}

inline void append_random_terms(std::vector<Term>& terms, Rng& rng, Index lo, Index hi,
                                std::size_t count, Coeff bound) {
  for (Index i : sample_distinct(rng, lo, hi, count)) {
    terms.push_back({i, random_coeff(rng, bound)});
  }
}

}  // namespace detail

inline void validate(const InstanceSpec& spec, const Envelope& env = kDefaultEnvelope) {
  if (spec.n == 0) throw std::invalid_argument("instance: n must be positive");
  if (2 * spec.n > env.max_dimension) {
    throw EnvelopeError("instance: 2n exceeds the envelope dimension");
  }
  if (spec.terms == 0) throw std::invalid_argument("instance: terms must be positive");
  if (spec.terms > spec.n) throw std::invalid_argument("instance: terms exceeds n");
  if (spec.terms > env.max_terms) throw EnvelopeError("instance: too many terms");
  if (spec.coeff_bound < 1 || spec.coeff_bound > env.max_coeff_abs) {
    throw EnvelopeError("instance: coefficient bound outside [1, envelope bound]");
  }
  if (!(spec.cancel_fraction >= 0.0 && spec.cancel_fraction <= 1.0)) {
    throw std::invalid_argument("instance: cancel fraction must lie in [0, 1]");
  }
  if (spec.cancel_fraction > 0.0 && spec.n < 2) {
    throw std::invalid_argument("instance: cancellation needs n >= 2");
  }
}

/// Deterministic in spec.seed. Both operands have length n.
inline std::pair<SparseVector, SparseVector> gen_instance(const InstanceSpec& spec,
                                                          const Envelope& env = kDefaultEnvelope) {
  validate(spec, env);
  Rng rng = make_stream(spec.seed, Stream::generation);
  std::vector<Term> u;
  std::vector<Term> v;
  const double f = spec.cancel_fraction;
  if (f == 0.0) {
    detail::append_random_terms(u, rng, 0, spec.n, spec.terms, spec.coeff_bound);
    detail::append_random_terms(v, rng, 0, spec.n, spec.terms, spec.coeff_bound);
  } else {
    const auto block = static_cast<std::size_t>(std::llround(f * static_cast<double>(spec.terms)));
    for (Index i = 0; i < block; ++i) u.push_back({i, 1});
    detail::append_random_terms(u, rng, block, spec.n, spec.terms - block, spec.coeff_bound);
    v.push_back({0, -1});
    v.push_back({1, 1});
    if (spec.terms > 2) {
      const auto extra = static_cast<std::size_t>(
          std::llround((1.0 - f) * static_cast<double>(spec.terms - 2)));
      detail::append_random_terms(v, rng, 2, spec.n, extra, spec.coeff_bound);
    }
  }
  return {make_sparse_vector(spec.n, std::move(u), env),
          make_sparse_vector(spec.n, std::move(v), env)};
}

/// Operands whose product collapses to 2 * spread terms:
///   u = (1 + ... + z^(spread-1)) (1 + ... + z^(run-1))
///   v = (z - 1) (1 + z^run + ... + z^((repeats-1) run))
///   u v = (1 + ... + z^(spread-1)) (z^(run*repeats) - 1).
/// u has run + spread - 1 terms and v has 2 * repeats terms (run >= 2), so
/// input size grows while the output stays fixed. Length n is the smallest
/// that holds both operands unless a larger one is given.
inline std::pair<SparseVector, SparseVector> gen_cancelling_pair(Index run, Index repeats,
                                                                 Index spread, Index n = 0) {
  if (run < 2 || repeats < 1 || spread < 1) {
    throw std::invalid_argument("gen_cancelling_pair: need run >= 2, repeats >= 1, spread >= 1");
  }
  if (spread > run * repeats) {
    throw std::invalid_argument("gen_cancelling_pair: spread must not exceed run * repeats");
  }
  const Index deg_u = run + spread - 2;
  const Index deg_v = (repeats - 1) * run + 1;
  n = std::max(n, std::max(deg_u, deg_v) + 1);
  std::vector<Term> u;
  for (Index i = 0; i <= deg_u; ++i) {
    // number of (b, k) with b < spread, k < run, b + k = i
    const Index lo = i >= run - 1 ? i - (run - 1) : 0;
    const Index hi = std::min(i, spread - 1);
    u.push_back({i, static_cast<Coeff>(hi - lo + 1)});
  }
  std::vector<Term> v;
  for (Index j = 0; j < repeats; ++j) {
    v.push_back({j * run, -1});
    v.push_back({j * run + 1, 1});
  }
  return {make_sparse_vector(n, std::move(u)), make_sparse_vector(n, std::move(v))};
}

}  // namespace sparseconv
