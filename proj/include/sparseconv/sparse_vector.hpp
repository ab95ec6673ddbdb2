#pragma once

/**
 * @file sparse_vector.hpp
 * @brief Length-N integer vectors stored as sorted (index, coefficient) terms.
 *
 * A SparseVector is always kept in canonical form: indices strictly
 * increasing and every stored coefficient nonzero. Two vectors are equal
 * exactly when their lengths and canonical term lists agree.
 *
 * The same type holds polynomial operands, products, running accumulators
 * and residuals, so nothing here bounds coefficient size beyond int64.
 * The operand envelope (see Envelope) is checked by the multipliers.
 */

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparseconv {

using Index = std::uint64_t;
using Coeff = std::int64_t;

struct Term {
  Index index = 0;
  Coeff coeff = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Operand bounds under which every product coefficient satisfies
/// |c| <= max_terms * max_coeff_abs^2 <= 2^60.
struct Envelope {
  Index max_dimension = Index{1} << 26;
  Coeff max_coeff_abs = Coeff{1} << 20;
  std::size_t max_terms = std::size_t{1} << 20;
};

inline constexpr Envelope kDefaultEnvelope{};

class EnvelopeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline Coeff checked_add(Coeff a, Coeff b) {
  Coeff out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw EnvelopeError("coefficient overflow in int64 accumulation");
  }
  return out;
}

inline Coeff checked_neg(Coeff a) {
  if (a == std::numeric_limits<Coeff>::min()) {
    throw EnvelopeError("coefficient overflow in int64 negation");
  }
  return -a;
}

}  // namespace detail

class SparseVector {
 public:
  /// Zero vector of length one.
  SparseVector() = default;

  /// Zero vector of the given length.
  explicit SparseVector(Index length) : length_(length) {
    if (length == 0) {
      throw std::invalid_argument("vector length must be positive");
    }
  }

  /// Build from terms that are already canonical. Checked in debug builds only.
  static SparseVector from_canonical(Index length, std::vector<Term> terms) {
    SparseVector v(length);
    v.terms_ = std::move(terms);
#ifndef NDEBUG
    for (std::size_t i = 0; i < v.terms_.size(); ++i) {
      if (v.terms_[i].coeff == 0 || v.terms_[i].index >= length ||
          (i > 0 && v.terms_[i - 1].index >= v.terms_[i].index)) {
        throw std::logic_error("from_canonical: terms are not canonical");
      }
    }
#endif
    return v;
  }

  Index length() const noexcept { return length_; }
  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t l0() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Coefficient at i (zero when absent).
  Coeff operator[](Index i) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), i,
                               [](const Term& t, Index k) { return t.index < k; });
    return (it != terms_.end() && it->index == i) ? it->coeff : 0;
  }

  Coeff max_abs_coeff() const noexcept {
    Coeff m = 0;
    for (const auto& t : terms_) {
      m = std::max(m, t.coeff < 0 ? -t.coeff : t.coeff);
    }
    return m;
  }

  std::vector<Index> support() const {
    std::vector<Index> s;
    s.reserve(terms_.size());
    for (const auto& t : terms_) s.push_back(t.index);
    return s;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  Index length_ = 1;
  std::vector<Term> terms_;
};

/// Canonicalize arbitrary (index, coefficient) pairs: duplicates are summed,
/// zero sums dropped, terms sorted.
inline SparseVector make_sparse_vector(Index length, std::vector<Term> pairs,
                                       const Envelope& env = kDefaultEnvelope) {
  if (length == 0) {
    throw std::invalid_argument("vector length must be positive");
  }
  if (length > env.max_dimension) {
    throw EnvelopeError("vector length " + std::to_string(length) +
                        " exceeds the envelope dimension " +
                        std::to_string(env.max_dimension));
  }
  for (const auto& t : pairs) {
    if (t.index >= length) {
      throw std::out_of_range("index " + std::to_string(t.index) +
                              " out of range for length " + std::to_string(length));
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const Term& a, const Term& b) { return a.index < b.index; });
  std::vector<Term> out;
  out.reserve(pairs.size());
  for (const auto& t : pairs) {
    if (!out.empty() && out.back().index == t.index) {
      out.back().coeff = detail::checked_add(out.back().coeff, t.coeff);
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coeff == 0; });
  return SparseVector::from_canonical(length, std::move(out));
}

/// Throws EnvelopeError unless v may be used as a multiplication operand.
inline void require_operand(const SparseVector& v, const Envelope& env = kDefaultEnvelope) {
  if (v.length() > env.max_dimension) {
    throw EnvelopeError("operand length exceeds the envelope dimension");
  }
  if (v.l0() > env.max_terms) {
    throw EnvelopeError("operand has more terms than the envelope allows");
  }
  for (const auto& t : v.terms()) {
    if (t.coeff > env.max_coeff_abs || t.coeff < -env.max_coeff_abs) {
      throw EnvelopeError("operand coefficient " + std::to_string(t.coeff) +
                          " exceeds the envelope bound");
    }
  }
}

namespace detail {

template <typename Combine>
SparseVector merge_terms(const SparseVector& a, const SparseVector& b, Combine combine,
                         const char* what) {
  if (a.length() != b.length()) {
    throw LengthMismatch(std::string(what) + ": length mismatch (" +
                         std::to_string(a.length()) + " vs " + std::to_string(b.length()) +
                         ")");
  }
  auto ta = a.terms();
  auto tb = b.terms();
  std::vector<Term> out;
  out.reserve(ta.size() + tb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ta.size() || j < tb.size()) {
    if (j == tb.size() || (i < ta.size() && ta[i].index < tb[j].index)) {
      out.push_back({ta[i].index, combine(ta[i].coeff, Coeff{0})});
      ++i;
    } else if (i == ta.size() || tb[j].index < ta[i].index) {
      out.push_back({tb[j].index, combine(Coeff{0}, tb[j].coeff)});
      ++j;
    } else {
      Coeff c = combine(ta[i].coeff, tb[j].coeff);
      if (c != 0) out.push_back({ta[i].index, c});
      ++i;
      ++j;
    }
  }
  return SparseVector::from_canonical(a.length(), std::move(out));
}

}  // namespace detail

inline SparseVector add(const SparseVector& a, const SparseVector& b) {
  return detail::merge_terms(
      a, b, [](Coeff x, Coeff y) { return detail::checked_add(x, y); }, "add");
}

inline SparseVector subtract(const SparseVector& a, const SparseVector& b) {
  return detail::merge_terms(
      a, b, [](Coeff x, Coeff y) { return detail::checked_add(x, detail::checked_neg(y)); },
      "subtract");
}

/// Same coefficients in a longer vector (zero padding at the top).
inline SparseVector pad_to(const SparseVector& v, Index length) {
  if (length < v.length()) {
    throw std::invalid_argument("pad_to: target length is shorter than the vector");
  }
  return SparseVector::from_canonical(length, {v.terms().begin(), v.terms().end()});
}

/// Number of indices where a and b differ, i.e. l0(a - b).
inline std::size_t hamming_distance(const SparseVector& a, const SparseVector& b) {
  return subtract(a, b).l0();
}

}  // namespace sparseconv
