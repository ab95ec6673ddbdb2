#pragma once

#include <sparseconv/baseline.hpp>
#include <sparseconv/driver.hpp>
#include <sparseconv/sparse_vector.hpp>

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sparseconv {

enum class Algo { naive, dense, sparse };

inline std::string_view to_string(Algo a) {
  switch (a) {
    case Algo::naive: return "naive";
    case Algo::dense: return "dense";
    case Algo::sparse: return "sparse";
  }
  return "unknown";
}

inline Algo parse_algo(std::string_view s) {
  if (s == "naive") return Algo::naive;
  if (s == "dense") return Algo::dense;
  if (s == "sparse") return Algo::sparse;
  throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

inline std::vector<Algo> parse_algo_list(std::string_view list) {
  if (list.empty()) throw std::invalid_argument("empty algorithm list");
  std::vector<Algo> out;
  for (;;) {
    const auto comma = list.find(',');
    out.push_back(parse_algo(list.substr(0, comma)));
    if (comma == std::string_view::npos) return out;
    list.remove_prefix(comma + 1);
  }
}

struct MultiplyOutcome {
  SparseVector product;
  bool success = false;
  std::string status;
};

/// Polynomial product of length-n operands (result length 2n) by the chosen
/// backend. With fallback_dense a failed sparse run is redone densely.
inline MultiplyOutcome multiply_polynomials(Algo algo, const SparseVector& u,
                                            const SparseVector& v, std::uint64_t seed,
                                            bool fallback_dense = false,
                                            const MultiplyOptions& options = {}) {
  switch (algo) {
    case Algo::naive: return {polynomial_multiply_naive(u, v), true, "ok"};
    case Algo::dense: return {polynomial_multiply_dense(u, v), true, "ok"};
    case Algo::sparse: {
      auto r = sparse_multiply(u, v, seed, options);
      if (r.ok()) return {std::move(r.product), true, "ok"};
      if (fallback_dense) {
        return {polynomial_multiply_dense(u, v), true, "dense_fallback"};
      }
      return {std::move(r.product), false, std::string(to_string(r.status))};
    }
  }
  throw std::logic_error("unreachable");
}

struct BenchRecord {
  Algo algo = Algo::naive;
  Index n = 0;
  std::size_t s_in = 0;
  std::size_t k_out = 0;
  double wall_millis = 0.0;
  std::uint64_t seed = 0;
  bool success = false;
};

inline nlohmann::ordered_json to_json(const BenchRecord& r) {
  nlohmann::ordered_json j;
  j["algo"] = std::string(to_string(r.algo));
  j["n"] = r.n;
  j["s_in"] = r.s_in;
  j["k_out"] = r.k_out;
  j["wall_millis"] = r.wall_millis;
  j["seed"] = r.seed;
  j["success"] = r.success;
  return j;
}

/// Times one multiplication of (u, v) and returns its record.
inline BenchRecord bench_one(Algo algo, const SparseVector& u, const SparseVector& v,
                             std::uint64_t seed, SparseVector* product = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  auto outcome = multiply_polynomials(algo, u, v, seed);
  const auto stop = std::chrono::steady_clock::now();
  BenchRecord rec;
  rec.algo = algo;
  rec.n = u.length();
  rec.s_in = u.l0() + v.l0();
  rec.k_out = outcome.success ? outcome.product.l0() : 0;
  rec.wall_millis = std::chrono::duration<double, std::milli>(stop - start).count();
  rec.seed = seed;
  rec.success = outcome.success;
  if (product != nullptr) *product = std::move(outcome.product);
  return rec;
}

}  // namespace sparseconv
