#pragma once

// Reference multipliers: exact pairwise convolution (the ground-truth oracle)
// and the dense floating-point FFT product.

#include <sparseconv/fft.hpp>
#include <sparseconv/sparse_vector.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace sparseconv {

namespace detail {

inline void require_same_length(const SparseVector& x, const SparseVector& y,
                                const char* what) {
  if (x.length() != y.length()) {
    throw LengthMismatch(std::string(what) + ": operand lengths differ (" +
                         std::to_string(x.length()) + " vs " + std::to_string(y.length()) +
                         ")");
  }
}

// Dense accumulation is used below this length; above it the products are
// sorted so memory tracks l0(x)*l0(y) instead of N.
inline constexpr Index kNaiveDenseLimit = Index{1} << 16;

}  // namespace detail

/// Exact cyclic convolution by enumerating every term pair:
/// (x * y)_i = sum over (j + j') mod N = i of x_j y_j'.
inline SparseVector cyclic_convolve_naive(const SparseVector& x, const SparseVector& y,
                                          const Envelope& env = kDefaultEnvelope) {
  detail::require_same_length(x, y, "cyclic_convolve_naive");
  require_operand(x, env);
  require_operand(y, env);
  const Index n = x.length();
  if (x.is_zero() || y.is_zero()) return SparseVector(n);

  auto reduce = [n](Index a, Index b) {
    const Index s = a + b;
    return s >= n ? s - n : s;
  };

  if (n <= detail::kNaiveDenseLimit) {
    std::vector<Coeff> acc(n, 0);
    for (const auto& a : x.terms()) {
      for (const auto& b : y.terms()) {
        acc[reduce(a.index, b.index)] += a.coeff * b.coeff;
      }
    }
    std::vector<Term> out;
    for (Index i = 0; i < n; ++i) {
      if (acc[i] != 0) out.push_back({i, acc[i]});
    }
    return SparseVector::from_canonical(n, std::move(out));
  }

  std::vector<Term> products;
  products.reserve(x.l0() * y.l0());
  for (const auto& a : x.terms()) {
    for (const auto& b : y.terms()) {
      products.push_back({reduce(a.index, b.index), a.coeff * b.coeff});
    }
  }
  std::sort(products.begin(), products.end(),
            [](const Term& a, const Term& b) { return a.index < b.index; });
  std::vector<Term> out;
  for (const auto& t : products) {
    if (!out.empty() && out.back().index == t.index) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff == 0) out.pop_back();
      out.push_back(t);
    }
  }
  if (!out.empty() && out.back().coeff == 0) out.pop_back();
  return SparseVector::from_canonical(n, std::move(out));
}

namespace detail {

// Signed digits of base 2^bits: v = sum_k limb[k] * 2^(bits*k), each limb
// carrying the sign of v.
inline std::vector<std::vector<Term>> split_limbs(const SparseVector& v, int bits,
                                                  int count) {
  std::vector<std::vector<Term>> limbs(count);
  const Coeff mask = (Coeff{1} << bits) - 1;
  for (const auto& t : v.terms()) {
    Coeff mag = t.coeff < 0 ? -t.coeff : t.coeff;
    const Coeff sign = t.coeff < 0 ? -1 : 1;
    for (int k = 0; k < count && mag != 0; ++k) {
      const Coeff digit = mag & mask;
      if (digit != 0) limbs[k].push_back({t.index, sign * digit});
      mag >>= bits;
    }
  }
  return limbs;
}

inline double l2_norm(const std::vector<Term>& terms) {
  double s = 0.0;
  for (const auto& t : terms) {
    const double c = static_cast<double>(t.coeff);
    s += c * c;
  }
  return std::sqrt(s);
}

struct LimbPlan {
  int bits = 0;
  int limbs_x = 1;
  int limbs_y = 1;
  std::vector<std::vector<Term>> x;
  std::vector<std::vector<Term>> y;
  double bound = 0.0;
};

// Widest limb size whose worst-case rounding error stays under the budget.
inline LimbPlan plan_limbs(const SparseVector& x, const SparseVector& y,
                           std::size_t transform_length, double budget) {
  const int bits_x = std::bit_width(static_cast<std::uint64_t>(x.max_abs_coeff()));
  const int bits_y = std::bit_width(static_cast<std::uint64_t>(y.max_abs_coeff()));
  for (int bits = std::max(bits_x, bits_y); bits >= 1; --bits) {
    LimbPlan plan;
    plan.bits = bits;
    plan.limbs_x = (bits_x + bits - 1) / bits;
    plan.limbs_y = (bits_y + bits - 1) / bits;
    plan.x = split_limbs(x, bits, plan.limbs_x);
    plan.y = split_limbs(y, bits, plan.limbs_y);
    std::vector<double> nx(plan.limbs_x);
    std::vector<double> ny(plan.limbs_y);
    for (int i = 0; i < plan.limbs_x; ++i) nx[i] = l2_norm(plan.x[i]);
    for (int j = 0; j < plan.limbs_y; ++j) ny[j] = l2_norm(plan.y[j]);
    double worst = 0.0;
    for (int k = 0; k + 1 < plan.limbs_x + plan.limbs_y; ++k) {
      double group = 0.0;
      for (int i = 0; i < plan.limbs_x; ++i) {
        const int j = k - i;
        if (j >= 0 && j < plan.limbs_y) {
          group += fft::convolution_error_bound(transform_length, nx[i], ny[j]);
        }
      }
      worst = std::max(worst, group);
    }
    plan.bound = worst;
    if (worst <= budget) return plan;
  }
  throw EnvelopeError("dense_fft_multiply: floating-point error budget exceeded");
}

}  // namespace detail

/// Dense FFT product, rounded to integers. Coefficients too wide for a single
/// double-precision transform are split into limbs so that the rounding error
/// bound stays below 1/4; the result is then exact.
inline SparseVector dense_fft_multiply(const SparseVector& x, const SparseVector& y,
                                       const Envelope& env = kDefaultEnvelope) {
  detail::require_same_length(x, y, "dense_fft_multiply");
  require_operand(x, env);
  require_operand(y, env);
  const Index n = x.length();
  if (x.is_zero() || y.is_zero()) return SparseVector(n);

  const std::size_t length = fft::cyclic_transform_length(n);
  const auto plan = detail::plan_limbs(x, y, length, 0.25);

  fft::RealTransform transform(length);
  auto spectrum_of = [&](const std::vector<Term>& terms) {
    auto real = transform.real();
    std::fill(real.begin(), real.end(), 0.0);
    for (const auto& t : terms) real[t.index] = static_cast<double>(t.coeff);
    transform.forward();
    auto s = transform.spectrum();
    return std::vector<fft::Complex>(s.begin(), s.end());
  };
  std::vector<std::vector<fft::Complex>> sx;
  std::vector<std::vector<fft::Complex>> sy;
  for (const auto& limb : plan.x) sx.push_back(spectrum_of(limb));
  for (const auto& limb : plan.y) sy.push_back(spectrum_of(limb));

  std::vector<Coeff> acc(n, 0);
  const double scale = 1.0 / static_cast<double>(length);
  for (int k = 0; k + 1 < plan.limbs_x + plan.limbs_y; ++k) {
    auto spec = transform.spectrum();
    std::fill(spec.begin(), spec.end(), fft::Complex{});
    for (int i = 0; i < plan.limbs_x; ++i) {
      const int j = k - i;
      if (j < 0 || j >= plan.limbs_y) continue;
      for (std::size_t f = 0; f < spec.size(); ++f) spec[f] += sx[i][f] * sy[j][f];
    }
    transform.backward();
    const auto real = transform.real();
    const int shift = plan.bits * k;
    for (std::size_t i = 0; i < length; ++i) {
      const Coeff v = std::llround(real[i] * scale);
      if (v == 0) continue;
      acc[i % n] += v * (Coeff{1} << shift);
    }
  }

  std::vector<Term> out;
  for (Index i = 0; i < n; ++i) {
    if (acc[i] != 0) out.push_back({i, acc[i]});
  }
  return SparseVector::from_canonical(n, std::move(out));
}

/// Degree < n polynomials multiplied as cyclic convolution at N = 2n.
inline SparseVector polynomial_multiply_naive(const SparseVector& u, const SparseVector& v,
                                              const Envelope& env = kDefaultEnvelope) {
  detail::require_same_length(u, v, "polynomial_multiply_naive");
  const Index n2 = 2 * u.length();
  return cyclic_convolve_naive(pad_to(u, n2), pad_to(v, n2), env);
}

inline SparseVector polynomial_multiply_dense(const SparseVector& u, const SparseVector& v,
                                              const Envelope& env = kDefaultEnvelope) {
  detail::require_same_length(u, v, "polynomial_multiply_dense");
  const Index n2 = 2 * u.length();
  return dense_fft_multiply(pad_to(u, n2), pad_to(v, n2), env);
}

}  // namespace sparseconv
