#include <sparseconv/baseline.hpp>
#include <sparseconv/driver.hpp>
#include <sparseconv/instances.hpp>

#include <gtest/gtest.h>

#include <vector>

namespace sc = sparseconv;
using sc::SparseVector;

namespace {

SparseVector random_vector(sc::Rng& rng, sc::Index n, sc::Index support, std::size_t terms,
                           sc::Coeff bound) {
  std::vector<sc::Term> t;
  sc::detail::append_random_terms(t, rng, 0, support, terms, bound);
  return sc::make_sparse_vector(n, std::move(t));
}

}  // namespace

TEST(AlgoParams, DefaultsAreConsistent) {
  sc::AlgoParams p;
  EXPECT_TRUE(p.consistent());
  EXPECT_EQ(p.max_outer_rounds(1 << 10), 12u);
  p.collision_fraction = 0.2;
  EXPECT_FALSE(p.consistent());
}

TEST(HashAndIterate, ZeroOperands) {
  sc::Rng rng(1);
  EXPECT_TRUE(sc::hash_and_iterate(SparseVector(32), SparseVector(32), 16, 0.1, rng).is_zero());
}

TEST(HashAndIterate, Telescoping) {
  sc::Rng rng(2);
  auto x = sc::make_sparse_vector(16, {{0, 1}, {1, 1}, {2, 1}, {3, 1}});
  auto y = sc::make_sparse_vector(16, {{0, -1}, {1, 1}});
  EXPECT_EQ(sc::hash_and_iterate(x, y, 16 * 6, 0.1, rng),
            sc::make_sparse_vector(16, {{0, -1}, {4, 1}}));
}

TEST(HashAndIterate, TraceRecordsHalvingBudgets) {
  sc::Rng rng(3);
  auto x = sc::make_sparse_vector(64, {{0, 2}, {5, 1}});
  auto y = sc::make_sparse_vector(64, {{1, 3}});
  sc::HashIterateTrace trace;
  auto w = sc::hash_and_iterate(x, y, 100, 0.1, rng, {}, &trace);
  EXPECT_EQ(trace.budgets, (std::vector<std::size_t>{100, 50, 25, 12, 6, 3, 1}));
  EXPECT_DOUBLE_EQ(trace.round_delta, 0.1 / 7);
  ASSERT_EQ(trace.accumulators.size(), 7u);
  EXPECT_EQ(trace.accumulators.back(), w);
  EXPECT_EQ(w, sc::cyclic_convolve_naive(x, y));
}

TEST(HashAndIterate, RandomInstancesWithAmpleBudget) {
  // N = 4096 is below C * B * log^2 N, so Locate folds with the identity hash.
  const sc::Index n = 4096;
  sc::Rng data(4);
  int exact = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto x = random_vector(data, n, n / 2, 1 + trial % 10, 100);
    auto y = random_vector(data, n, n / 2, 1 + trial % 7, 100);
    const auto truth = sc::cyclic_convolve_naive(x, y);
    sc::Rng rng(1000 + trial);
    const std::size_t budget = 16 * truth.l0() + 1;
    exact += sc::hash_and_iterate(x, y, budget, 0.1, rng) == truth ? 1 : 0;
  }
  EXPECT_GE(exact, 45);
}

TEST(HashAndIterate, HashedRegimeConverges) {
  // N = 2^18 with at most three output terms keeps every prime range below
  // N. The residual must not grow between rounds and must end at zero.
  const sc::Index n = sc::Index{1} << 18;
  sc::Rng data(5);
  int converged = 0;
  for (int trial = 0; trial < 6; ++trial) {
    auto x = random_vector(data, n, n / 2, 1, 100);
    auto y = random_vector(data, n, n / 2, 1 + trial % 3, 100);
    const auto truth = sc::cyclic_convolve_naive(x, y);
    sc::Rng rng(2000 + trial);
    sc::HashIterateTrace trace;
    const std::size_t budget = 16 * truth.l0() + 1;
    sc::hash_and_iterate(x, y, budget, 0.1, rng, {}, &trace);
    ASSERT_FALSE(trace.locates.empty());
    EXPECT_FALSE(trace.locates.front().identity_hash);
    std::size_t prev = truth.l0();
    bool ok = true;
    for (const auto& acc : trace.accumulators) {
      const auto cur = sc::hamming_distance(truth, acc);
      ok = ok && cur <= prev;
      prev = cur;
    }
    converged += (ok && prev == 0) ? 1 : 0;
  }
  EXPECT_GE(converged, 5);
}

TEST(HashAndIterate, BadArguments) {
  sc::Rng rng(6);
  SparseVector v(8);
  EXPECT_THROW(sc::hash_and_iterate(v, v, 0, 0.1, rng), std::invalid_argument);
  EXPECT_THROW(sc::hash_and_iterate(v, v, 4, 1.5, rng), std::invalid_argument);
}

TEST(SparseMultiply, Telescoping) {
  auto u = sc::make_sparse_vector(4, {{0, 1}, {1, 1}, {2, 1}, {3, 1}});
  auto v = sc::make_sparse_vector(4, {{0, -1}, {1, 1}});
  auto r = sc::sparse_multiply(u, v, 7);
  ASSERT_TRUE(r.ok()) << r.message;
  EXPECT_EQ(r.product, sc::make_sparse_vector(8, {{0, -1}, {4, 1}}));
  EXPECT_EQ(r.rounds, 1u);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_TRUE(r.history[0].verified);
  EXPECT_EQ(r.history[0].budget, 32u);
  EXPECT_DOUBLE_EQ(r.history[0].delta, 1.0 / 400);
}

TEST(SparseMultiply, EmptyOperand) {
  auto u = sc::make_sparse_vector(8, {{3, 2}});
  auto r = sc::sparse_multiply(u, SparseVector(8), 1);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.product.is_zero());
  EXPECT_EQ(r.product.length(), 16u);
}

TEST(SparseMultiply, MatchesOracleOnRandomInstances) {
  sc::Rng data(7);
  for (int trial = 0; trial < 40; ++trial) {
    const sc::Index n = sc::Index{1} << (6 + trial % 8);
    const std::size_t terms = 1 + sc::uniform_u64(data, 0, std::min<sc::Index>(n, 64) - 1);
    auto u = random_vector(data, n, n, terms, 100);
    auto v = random_vector(data, n, n, terms, 100);
    auto r = sc::sparse_multiply(u, v, 500 + trial);
    ASSERT_TRUE(r.ok()) << to_string(r.status) << " " << r.message;
    EXPECT_EQ(r.product, sc::polynomial_multiply_naive(u, v));
    EXPECT_LE(r.product.l0(), u.l0() * v.l0());
  }
}

TEST(SparseMultiply, HashedRegime) {
  // n = 2^17 keeps the first round's prime range below N = 2^18.
  sc::Rng data(8);
  for (int trial = 0; trial < 2; ++trial) {
    const sc::Index n = sc::Index{1} << 17;
    auto u = random_vector(data, n, n, 2, 100);
    auto v = random_vector(data, n, n, 2, 100);
    auto r = sc::sparse_multiply(u, v, 900 + trial);
    ASSERT_TRUE(r.ok()) << r.message;
    EXPECT_EQ(r.product, sc::polynomial_multiply_naive(u, v));
  }
}

TEST(SparseMultiply, DeterministicForSeed) {
  sc::Rng data(9);
  auto u = random_vector(data, 1024, 1024, 30, 50);
  auto v = random_vector(data, 1024, 1024, 30, 50);
  auto a = sc::sparse_multiply(u, v, 42);
  auto b = sc::sparse_multiply(u, v, 42);
  EXPECT_EQ(a.product, b.product);
  EXPECT_EQ(a.history, b.history);
  EXPECT_EQ(a.status, b.status);
}

TEST(SparseMultiply, ExplicitFailureWhenRoundsRunOut) {
  // A single outer round has budget 32, too small for ~100 output terms; the
  // result must be a failure, not an unverified vector.
  sc::Rng data(10);
  const sc::Index n = sc::Index{1} << 19;
  auto u = random_vector(data, n, n, 10, 100);
  auto v = random_vector(data, n, n, 10, 100);
  sc::MultiplyOptions options;
  options.params.round_cap = 1;
  auto r = sc::sparse_multiply(u, v, 3, options);
  EXPECT_EQ(r.status, sc::MultiplyStatus::rounds_exhausted);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.product.is_zero());
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_FALSE(r.history[0].verified);
  EXPECT_EQ(sc::to_string(r.status), "rounds_exhausted");
}

TEST(SparseMultiply, PrecisionLimitIsReported) {
  // Full-width coefficients over 2^16 terms push the fold error bound past
  // its budget, which surfaces as a status rather than a wrong answer.
  const sc::Index n = sc::Index{1} << 18;
  std::vector<sc::Term> t;
  for (sc::Index i = 0; i < (sc::Index{1} << 16); ++i) t.push_back({4 * i, sc::Coeff{1} << 20});
  auto u = sc::make_sparse_vector(n, t);
  auto r = sc::sparse_multiply(u, u, 1);
  EXPECT_EQ(r.status, sc::MultiplyStatus::precision_exceeded);
  EXPECT_FALSE(r.message.empty());
}

TEST(SparseMultiply, DeadlineIsReported) {
  auto u = sc::make_sparse_vector(64, {{1, 1}, {7, 3}});
  sc::MultiplyOptions options;
  options.deadline = sc::Clock::now() - std::chrono::seconds(1);
  auto r = sc::sparse_multiply(u, u, 1, options);
  EXPECT_EQ(r.status, sc::MultiplyStatus::deadline_exceeded);
}

TEST(SparseMultiply, BadArguments) {
  EXPECT_THROW(sc::sparse_multiply(SparseVector(4), SparseVector(8), 0), sc::LengthMismatch);
  auto big = sc::make_sparse_vector(4, {{0, sc::Coeff{1} << 30}});
  EXPECT_THROW(sc::sparse_multiply(big, big, 0), sc::EnvelopeError);
  const sc::Index n = sc::Index{1} << 26;
  EXPECT_THROW(sc::sparse_multiply(SparseVector(n), SparseVector(n), 0), sc::EnvelopeError);
}
