#include <sparseconv/baseline.hpp>
#include <sparseconv/fold.hpp>
#include <sparseconv/instances.hpp>
#include <sparseconv/locate.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace sc = sparseconv;
using sc::Complex;
using sc::SparseVector;

namespace {

// High-precision reference values of exp(i * 5pi/8).
constexpr double kCos5Pi8 = -0.38268343236508977172845998403;
constexpr double kSin5Pi8 = 0.923879532511286756128183189397;

SparseVector random_vector(sc::Rng& rng, sc::Index n, sc::Index support, std::size_t terms,
                           sc::Coeff bound) {
  std::vector<sc::Term> t;
  sc::detail::append_random_terms(t, rng, 0, support, terms, bound);
  return sc::make_sparse_vector(n, std::move(t));
}

double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<Complex> direct_cyclic(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  const std::size_t m = a.size();
  std::vector<Complex> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) out[(i + j) % m] += a[i] * b[j];
  }
  return out;
}

}  // namespace

TEST(RootOfUnity, Examples) {
  EXPECT_EQ(sc::root_of_unity_power(0, 8), Complex(1.0, 0.0));
  EXPECT_EQ(sc::root_of_unity_power(0, 1), Complex(1.0, 0.0));
  EXPECT_EQ(sc::root_of_unity_power(8, 8), Complex(-1.0, 0.0));
  EXPECT_EQ(sc::root_of_unity_power(1000, 1000), Complex(-1.0, 0.0));
  EXPECT_EQ(sc::root_of_unity_power(4, 8), Complex(0.0, 1.0));
  EXPECT_EQ(sc::root_of_unity_power(12, 8), Complex(0.0, -1.0));
  const auto w = sc::root_of_unity_power(5, 8);
  EXPECT_NEAR(w.real(), kCos5Pi8, 1e-15);
  EXPECT_NEAR(w.imag(), kSin5Pi8, 1e-15);
}

TEST(RootOfUnity, OutOfRange) {
  EXPECT_THROW(sc::root_of_unity_power(16, 8), std::out_of_range);
  EXPECT_THROW(sc::root_of_unity_power(0, 0), std::invalid_argument);
}

TEST(RootOfUnity, AgreesWithPolar) {
  const sc::Index n = 1000003;
  for (sc::Index j = 0; j < 2 * n; j += 9973) {
    const auto w = sc::root_of_unity_power(j, n);
    const auto ref = std::polar(1.0, std::numbers::pi * static_cast<double>(j) / n);
    EXPECT_LT(std::abs(w - ref), 1e-9) << j;
    EXPECT_NEAR(std::abs(w), 1.0, 1e-15);
  }
}

TEST(RootOfUnity, Multiplicative) {
  const sc::Index n = 4096;
  for (sc::Index a = 0; a < 2 * n; a += 517) {
    for (sc::Index b = 0; b < 2 * n; b += 733) {
      const auto prod = sc::root_of_unity_power(a, n) * sc::root_of_unity_power(b, n);
      EXPECT_LT(std::abs(prod - sc::root_of_unity_power((a + b) % (2 * n), n)), 1e-14);
    }
  }
}

TEST(Fold, Examples) {
  auto f1 = sc::fold(sc::make_sparse_vector(8, {{0, 1}}), 4);
  ASSERT_EQ(f1.buckets.size(), 4u);
  EXPECT_EQ(f1.buckets[0], Complex(1.0, 0.0));
  for (int b = 1; b < 4; ++b) EXPECT_EQ(f1.buckets[b], Complex{});

  auto f2 = sc::fold(sc::make_sparse_vector(8, {{5, 2}}), 3);
  EXPECT_NEAR(f2.buckets[2].real(), -0.765366864730179543456919968061, 1e-15);
  EXPECT_NEAR(f2.buckets[2].imag(), 1.84775906502257351225636637879, 1e-15);
  EXPECT_EQ(f2.buckets[0], Complex{});
  EXPECT_EQ(f2.buckets[1], Complex{});
}

TEST(Fold, IndexOutsideLengthRejected) {
  EXPECT_THROW(sc::make_sparse_vector(4, {{0, 1}, {4, 1}}), std::out_of_range);
}

TEST(Fold, CancellationInsideBucket) {
  // omega = exp(i pi / 6): 1 - omega^2 + omega^4 = 0, all in bucket 0 mod 2.
  auto f = sc::fold(sc::make_sparse_vector(6, {{0, 1}, {2, -1}, {4, 1}}), 2);
  EXPECT_LT(std::abs(f.buckets[0]), 1e-15);
  EXPECT_EQ(f.buckets[1], Complex{});
}

TEST(Fold, ZeroModulus) {
  EXPECT_THROW(sc::fold(SparseVector(4), 0), std::invalid_argument);
}

TEST(Fold, Linear) {
  sc::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_vector(rng, 1024, 1024, 40, 1000);
    auto w = random_vector(rng, 1024, 1024, 40, 1000);
    const sc::Index m = 17 + trial;
    auto lhs = sc::fold(sc::subtract(x, w), m);
    auto fx = sc::fold(x, m);
    auto fw = sc::fold(w, m);
    const double tol = 2 * (sc::PhasedVector::encode(x).fold_error() +
                            sc::PhasedVector::encode(w).fold_error());
    for (sc::Index b = 0; b < m; ++b) {
      EXPECT_LE(std::abs(lhs.buckets[b] - (fx.buckets[b] - fw.buckets[b])), tol);
    }
  }
}

TEST(CyclicFft, Examples) {
  std::vector<Complex> delta{1, 0, 0, 0};
  std::vector<Complex> b{{1, 2}, {3, -1}, {0, 5}, {-2, 0}};
  EXPECT_LT(max_diff(sc::cyclic_fft_convolve(delta, b), b), 1e-14);
  std::vector<Complex> z{0, 1, 0, 0};
  std::vector<Complex> expect{0, 0, 1, 0};
  EXPECT_LT(max_diff(sc::cyclic_fft_convolve(z, z), expect), 1e-14);
}

TEST(CyclicFft, LengthMismatchAndEmpty) {
  std::vector<Complex> a(3);
  std::vector<Complex> b(4);
  EXPECT_THROW(sc::cyclic_fft_convolve(a, b), sc::LengthMismatch);
  EXPECT_TRUE(sc::cyclic_fft_convolve(std::vector<Complex>{}, std::vector<Complex>{}).empty());
}

TEST(CyclicFft, Length127AgainstQuadraticOracle) {
  sc::Rng rng(127);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Complex> a(127);
    std::vector<Complex> b(127);
    for (auto& v : a) v = {d(rng), d(rng)};
    for (auto& v : b) v = {d(rng), d(rng)};
    const auto got = sc::cyclic_fft_convolve(a, b);
    const auto want = direct_cyclic(a, b);
    EXPECT_LE(max_diff(got, want), 1e-9 * sc::l2_norm(want));
  }
}

TEST(CyclicFft, NonPowerOfTwoLengths) {
  sc::Rng rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  sc::fft::ConvolutionWorkspace ws;
  for (std::size_t m : {1u, 2u, 3u, 5u, 31u, 64u, 100u, 257u}) {
    std::vector<Complex> a(m);
    std::vector<Complex> b(m);
    for (auto& v : a) v = {d(rng), d(rng)};
    for (auto& v : b) v = {d(rng), d(rng)};
    EXPECT_LE(max_diff(sc::cyclic_fft_convolve(a, b, ws), direct_cyclic(a, b)), 1e-12) << m;
  }
}

TEST(FoldedResidual, ExactProductGivesSmallBuckets) {
  sc::Rng rng(40);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = random_vector(rng, 2048, 1024, 30, 1000);
    auto y = random_vector(rng, 2048, 1024, 30, 1000);
    auto w = sc::cyclic_convolve_naive(x, y);
    auto r = sc::folded_residual(x, y, w, 101);
    for (const auto& b : r.buckets) EXPECT_LT(std::abs(b), 0.1);
  }
}

TEST(FoldedResidual, SingleTermProduct) {
  const sc::Index n = 64;
  for (sc::Index j : {0u, 5u, 31u}) {
    for (sc::Index p : {2u, 3u, 7u, 13u}) {
      auto x = sc::make_sparse_vector(n, {{0, 1}});
      auto y = sc::make_sparse_vector(n, {{j, -9}});
      auto r = sc::folded_residual(x, y, SparseVector(n), p);
      const auto direct = sc::fold(sc::cyclic_convolve_naive(x, y), p);
      EXPECT_LT(max_diff(r.buckets, direct.buckets), 1e-12);
      EXPECT_LT(std::abs(r.buckets[j % p] + 9.0 * sc::root_of_unity_power(j, n)), 1e-12);
    }
  }
}

TEST(FoldedResidual, MatchesDirectFoldOfExactResidual) {
  sc::Rng rng(41);
  const sc::Index n = 1024;
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_vector(rng, n, n / 2, 16, 100);
    auto y = random_vector(rng, n, n / 2, 16, 100);
    auto w = random_vector(rng, n, n, 10, 100);
    const sc::Index p = 97;
    auto got = sc::folded_residual(x, y, w, p);
    auto want = sc::fold(sc::subtract(sc::cyclic_convolve_naive(x, y), w), p);
    double biggest = 0.0;
    for (const auto& b : want.buckets) biggest = std::max(biggest, std::abs(b));
    EXPECT_LE(max_diff(got.buckets, want.buckets), 1e-6 * (biggest + 1.0));
  }
}

TEST(FoldedResidual, IsolatedBucketRoundsToValue) {
  // Residual with one index per bucket: every bucket is v * omega^j.
  const sc::Index n = 256;
  auto x = sc::make_sparse_vector(n, {{0, 1}});
  auto y = sc::make_sparse_vector(n, {{3, 7}, {20, -5}, {41, 2}});
  auto r = sc::folded_residual(x, y, SparseVector(n), 11);
  EXPECT_EQ(std::llround(std::abs(r.buckets[3])), 7);
  EXPECT_EQ(std::llround(std::abs(r.buckets[20 % 11])), 5);
  EXPECT_EQ(std::llround(std::abs(r.buckets[41 % 11])), 2);
  // -5 at index 20 reads as +5 at phase index 20 + N.
  EXPECT_EQ(sc::decode_index(r.buckets[20 % 11] / 5.0, n), 20 + n);
}

TEST(FoldedResidual, LengthMismatch) {
  EXPECT_THROW(sc::folded_residual(SparseVector(8), SparseVector(16), SparseVector(8), 3),
               sc::LengthMismatch);
  EXPECT_THROW(sc::folded_residual(SparseVector(8), SparseVector(8), SparseVector(16), 3),
               sc::LengthMismatch);
}

TEST(FoldedResidual, PrecisionBudgetEnforced) {
  // Maximal coefficients on many terms: the worst-case error bound is far
  // above the budget, and the folder must refuse rather than guess.
  const sc::Index n = sc::Index{1} << 20;
  std::vector<sc::Term> t;
  for (sc::Index i = 0; i < (sc::Index{1} << 17); ++i) t.push_back({2 * i, sc::Coeff{1} << 20});
  auto x = sc::make_sparse_vector(n, t);
  sc::ResidualFolder folder(x, x);
  EXPECT_THROW(folder.compute(SparseVector(n), 3), sc::PrecisionError);
}
