#pragma once

/**
 * @file fold.hpp
 * @brief Root-of-unity weighted folding P_m and the folded residual.
 *
 * With omega = exp(i*pi/N), a primitive 2N-th root of unity, the fold of x
 * into m buckets is
 *
 *     P_m(x)[b] = sum_{j : j mod m == b} x_j * omega^j.
 *
 * P_m is linear, and for x, y supported in [0, N/2) (zero-padded operands,
 * so j + j' never wraps) the length-m cyclic convolution of P_m(x) and
 * P_m(y) equals P_m(x * y). The weight omega^j survives folding, which is
 * what lets an isolated bucket reveal its index, and because omega^N = -1 a
 * negative value shows up as a phase shift of N.
 */

#include <sparseconv/fft.hpp>
#include <sparseconv/sparse_vector.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparseconv {

using Complex = std::complex<double>;

/// Largest admissible absolute error in a folded-residual bucket. Integer
/// bucket values sit at distance >= 1 from each other, so 0.1 leaves the
/// heavy-bucket (0.5) and rounding decisions unambiguous.
inline constexpr double kFoldErrorBudget = 0.1;

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// omega^j = exp(i*pi*j/N) for 0 <= j < 2N, accurate to about 2 ulp.
/// The argument is reduced exactly in integers to [0, pi/4] before calling
/// cos/sin, so multiples of pi/2 come out exact (omega^N == -1).
inline Complex root_of_unity_power(Index j, Index n) {
  if (n == 0) throw std::invalid_argument("root_of_unity_power: N must be positive");
  if (j >= 2 * n) {
    throw std::out_of_range("root_of_unity_power: exponent " + std::to_string(j) +
                            " outside [0, 2N)");
  }
  // theta = (2j) * pi / (2N); quarter turns are whole multiples of N.
  const Index twice = 2 * j;
  const Index quadrant = twice / n;
  const Index rem = twice - quadrant * n;  // in [0, N), units of pi/(2N)
  double c = 0.0;
  double s = 0.0;
  if (2 * rem <= n) {
    const double phi = std::numbers::pi * static_cast<double>(rem) / static_cast<double>(2 * n);
    c = std::cos(phi);
    s = std::sin(phi);
  } else {
    const double phi =
        std::numbers::pi * static_cast<double>(n - rem) / static_cast<double>(2 * n);
    c = std::sin(phi);
    s = std::cos(phi);
  }
  switch (quadrant) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

/// Terms of a SparseVector with their weights x_j * omega^j precomputed.
/// Building one costs a sin/cos per term; folding it afterwards is pure
/// accumulation, so encodings are reused across hash moduli.
struct PhasedVector {
  Index length = 1;
  std::vector<Index> index;
  std::vector<Complex> value;
  double l1 = 0.0;  // sum |x_j|

  static PhasedVector encode(const SparseVector& x) {
    PhasedVector p;
    p.length = x.length();
    p.index.reserve(x.l0());
    p.value.reserve(x.l0());
    for (const auto& t : x.terms()) {
      const double c = static_cast<double>(t.coeff);
      p.index.push_back(t.index);
      p.value.push_back(c * root_of_unity_power(t.index, x.length()));
      p.l1 += std::abs(c);
    }
    return p;
  }

  std::size_t size() const noexcept { return index.size(); }

  /// Upper bound on the l2 norm of the error vector of fold(), from the
  /// weight evaluation and the bucket summation.
  double fold_error() const {
    return (4.0 + static_cast<double>(size())) * std::numeric_limits<double>::epsilon() * l1;
  }
};

/// buckets[j mod m] += sign * value_j for every term. buckets.size() >= m.
inline void fold_accumulate(const PhasedVector& x, Index m, std::span<Complex> buckets,
                            double sign = 1.0) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    buckets[x.index[k] % m] += sign * x.value[k];
  }
}

struct FoldedVector {
  Index modulus = 1;
  std::vector<Complex> buckets;
};

inline FoldedVector fold(const PhasedVector& x, Index m) {
  if (m == 0) throw std::invalid_argument("fold: bucket count must be positive");
  FoldedVector out{m, std::vector<Complex>(m)};
  fold_accumulate(x, m, out.buckets);
  return out;
}

inline FoldedVector fold(const SparseVector& x, Index m) {
  return fold(PhasedVector::encode(x), m);
}

inline double l2_norm(std::span<const Complex> a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

namespace detail {

// Runs conv (whose lhs/rhs hold the zero-padded inputs of length m) and
// writes the length-m cyclic result into out.
inline void finish_cyclic(fft::ComplexConvolver& conv, std::size_t m, std::span<Complex> out) {
  conv.run();
  const auto full = conv.lhs();
  const double scale = 1.0 / static_cast<double>(conv.length());
  for (std::size_t i = 0; i < m; ++i) {
    Complex v = full[i];
    if (i + m < full.size()) v += full[i + m];
    out[i] = v * scale;
  }
}

}  // namespace detail

/// Length-m cyclic convolution via a power-of-two FFT (padded to >= 2m-1
/// when m is not a power of two, then wrapped).
inline std::vector<Complex> cyclic_fft_convolve(std::span<const Complex> a,
                                                std::span<const Complex> b,
                                                fft::ConvolutionWorkspace& workspace) {
  if (a.size() != b.size()) {
    throw LengthMismatch("cyclic_fft_convolve: lengths differ (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  }
  const std::size_t m = a.size();
  if (m == 0) return {};
  auto& conv = workspace.for_length(fft::cyclic_transform_length(m));
  auto lhs = conv.lhs();
  auto rhs = conv.rhs();
  std::fill(lhs.begin(), lhs.end(), Complex{});
  std::fill(rhs.begin(), rhs.end(), Complex{});
  std::copy(a.begin(), a.end(), lhs.begin());
  std::copy(b.begin(), b.end(), rhs.begin());
  std::vector<Complex> out(m);
  detail::finish_cyclic(conv, m, out);
  return out;
}

inline std::vector<Complex> cyclic_fft_convolve(std::span<const Complex> a,
                                                std::span<const Complex> b) {
  fft::ConvolutionWorkspace workspace;
  return cyclic_fft_convolve(a, b, workspace);
}

/**
 * Computes P_m((x * y) - w) as (P_m(x) (*) P_m(y)) - P_m(w) for fixed x, y
 * and varying (w, m). Holds the encodings of x and y plus the FFT buffers.
 *
 * Requires x and y to be zero-padded (supported below N/2) so the linear
 * index sum j + j' equals the cyclic one; this is how the driver calls it.
 */
class ResidualFolder {
 public:
  ResidualFolder(const SparseVector& x, const SparseVector& y)
      : length_(x.length()), x_(PhasedVector::encode(x)), y_(PhasedVector::encode(y)) {
    if (x.length() != y.length()) {
      throw LengthMismatch("folded_residual: x and y lengths differ");
    }
  }

  Index length() const noexcept { return length_; }
  const PhasedVector& x() const noexcept { return x_; }
  const PhasedVector& y() const noexcept { return y_; }

  /// Writes P_m((x*y) - w) into out (size m) and returns an upper bound on
  /// the absolute error of any bucket. Throws PrecisionError if that bound
  /// exceeds kFoldErrorBudget.
  double compute(const PhasedVector& w, Index m, std::span<Complex> out) {
    if (w.length != length_) throw LengthMismatch("folded_residual: w length differs");
    if (m == 0) throw std::invalid_argument("folded_residual: bucket count must be positive");
    if (out.size() < m) throw std::invalid_argument("folded_residual: output too short");

    if (m != cached_m_) {
      auto& conv = workspace_.for_length(fft::cyclic_transform_length(m));
      auto lhs = conv.lhs();
      auto rhs = conv.rhs();
      std::fill(lhs.begin(), lhs.end(), Complex{});
      std::fill(rhs.begin(), rhs.end(), Complex{});
      fold_accumulate(x_, m, lhs);
      fold_accumulate(y_, m, rhs);
      const double na = l2_norm(lhs.first(m));
      const double nb = l2_norm(rhs.first(m));
      const double ea = x_.fold_error();
      const double eb = y_.fold_error();
      cached_bound_ = fft::convolution_error_bound(conv.length(), na, nb) + ea * nb + na * eb +
                      ea * eb;
      cached_conv_.resize(m);
      detail::finish_cyclic(conv, m, cached_conv_);
      cached_m_ = m;
    }
    const double bound = cached_bound_ + w.fold_error();
    if (bound > kFoldErrorBudget) {
      throw PrecisionError("folded residual error bound " + std::to_string(bound) +
                           " exceeds the budget " + std::to_string(kFoldErrorBudget));
    }
    std::copy(cached_conv_.begin(), cached_conv_.end(), out.begin());
    fold_accumulate(w, m, out, -1.0);
    return bound;
  }

  FoldedVector compute(const SparseVector& w, Index m) {
    FoldedVector out{m, std::vector<Complex>(m)};
    compute(PhasedVector::encode(w), m, out.buckets);
    return out;
  }

 private:
  Index length_;
  PhasedVector x_;
  PhasedVector y_;
  fft::ConvolutionWorkspace workspace_;
  // P_m(x) (*) P_m(y) for the most recent m; the identity hash reuses it.
  Index cached_m_ = 0;
  double cached_bound_ = 0.0;
  std::vector<Complex> cached_conv_;
};

/// P_p((x * y) - w) up to an error below kFoldErrorBudget per bucket.
inline FoldedVector folded_residual(const SparseVector& x, const SparseVector& y,
                                    const SparseVector& w, Index p) {
  if (x.length() != w.length()) throw LengthMismatch("folded_residual: w length differs");
  ResidualFolder folder(x, y);
  return folder.compute(w, p);
}

}  // namespace sparseconv
