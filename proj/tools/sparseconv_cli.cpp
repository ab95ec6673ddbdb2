// sparseconv: multiply, generate, verify and benchmark sparse polynomials.
//
// Exit status: 0 success, 1 verification or algorithm failure, 2 invalid input.

#include <sparseconv/sparseconv.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace sparseconv;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;

struct MultiplyArgs {
  std::string a;
  std::string b;
  std::string out;
  std::string algo = "sparse";
  std::uint64_t seed = 0;
  bool fallback_dense = false;
};

struct GenArgs {
  Index n = 0;
  std::size_t terms = 0;
  Coeff coeff_bound = 100;
  double cancel_fraction = 0.0;
  std::uint64_t seed = 0;
  std::string out_a;
  std::string out_b;
};

struct VerifyArgs {
  std::string a;
  std::string b;
  std::string product;
  double delta = 0.01;
  std::uint64_t seed = 0;
};

struct BenchArgs {
  Index n = 0;
  std::size_t terms = 0;
  Coeff coeff_bound = 100;
  double cancel_fraction = 0.0;
  std::string algos = "naive,dense,sparse";
  int repeats = 1;
  std::uint64_t seed = 0;
  std::string json;
};

void require_same_length(const SparseVector& a, const SparseVector& b) {
  if (a.length() != b.length()) {
    throw std::invalid_argument("operands have different lengths (" +
                                std::to_string(a.length()) + " vs " +
                                std::to_string(b.length()) + ")");
  }
}

int run_multiply(const MultiplyArgs& args) {
  const auto u = parse_poly_file(args.a);
  const auto v = parse_poly_file(args.b);
  require_same_length(u, v);
  const Algo algo = parse_algo(args.algo);
  auto outcome = multiply_polynomials(algo, u, v, args.seed, args.fallback_dense);
  if (!outcome.success) {
    std::cerr << "sparseconv: multiplication failed (" << outcome.status
              << "); rerun with another --seed or use --fallback-dense\n";
    return kExitFailure;
  }
  if (outcome.status != "ok") std::cerr << "sparseconv: " << outcome.status << '\n';
  if (args.out.empty()) {
    write_poly(std::cout, outcome.product);
    std::cerr << "k_out " << outcome.product.l0() << '\n';
  } else {
    write_poly_file(outcome.product, args.out);
    std::cout << "k_out " << outcome.product.l0() << '\n';
  }
  return kExitOk;
}

int run_gen(const GenArgs& args) {
  InstanceSpec spec{args.n, args.terms, args.coeff_bound, args.cancel_fraction, args.seed};
  const auto [u, v] = gen_instance(spec);
  write_poly_file(u, args.out_a);
  write_poly_file(v, args.out_b);
  return kExitOk;
}

int run_verify(const VerifyArgs& args) {
  const auto u = parse_poly_file(args.a);
  const auto v = parse_poly_file(args.b);
  const auto w = parse_poly_file(args.product);
  require_same_length(u, v);
  if (w.length() != 2 * u.length()) {
    throw std::invalid_argument("product length must be 2n = " +
                                std::to_string(2 * u.length()));
  }
  require_operand(u);
  require_operand(v);
  Rng rng = make_stream(args.seed, Stream::fingerprint);
  const auto verdict =
      equality_test(pad_to(u, w.length()), pad_to(v, w.length()), w, args.delta, rng);
  if (verdict == Equality::yes) {
    std::cout << "yes\n";
    return kExitOk;
  }
  std::cout << "no\n";
  return kExitFailure;
}

int run_bench(const BenchArgs& args) {
  const auto algos = parse_algo_list(args.algos);
  std::ofstream file;
  if (!args.json.empty()) {
    file.open(args.json);
    if (!file) throw std::runtime_error("cannot write " + args.json);
  }
  std::ostream& out = args.json.empty() ? std::cout : file;
  const std::uint64_t base = derive_seed(args.seed, static_cast<std::uint64_t>(Stream::bench));
  bool agree = true;
  for (int r = 0; r < args.repeats; ++r) {
    const std::uint64_t instance_seed = derive_seed(base, static_cast<std::uint64_t>(r));
    const auto [u, v] = gen_instance(
        {args.n, args.terms, args.coeff_bound, args.cancel_fraction, instance_seed});
    std::optional<SparseVector> reference;
    for (Algo algo : algos) {
      SparseVector product;
      const auto rec = bench_one(algo, u, v, instance_seed, &product);
      out << to_json(rec).dump() << '\n';
      if (!rec.success) continue;
      if (!reference) {
        reference = std::move(product);
      } else if (!(*reference == product)) {
        std::cerr << "sparseconv: backends disagree on instance seed " << instance_seed << '\n';
        agree = false;
      }
    }
  }
  return agree ? kExitOk : kExitFailure;
}

// "-o2" is a two-character short flag, which CLI11 cannot express.
std::vector<std::string> normalize_args(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "-o2") == 0) {
      args.emplace_back("--o2");
    } else {
      args.emplace_back(argv[i]);
    }
  }
  std::reverse(args.begin(), args.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Output-sensitive sparse polynomial multiplication", "sparseconv"};
  app.require_subcommand(1);

  MultiplyArgs mul;
  auto* multiply = app.add_subcommand("multiply", "Multiply two polynomial files");
  multiply->add_option("A", mul.a, "first operand")->required()->check(CLI::ExistingFile);
  multiply->add_option("B", mul.b, "second operand")->required()->check(CLI::ExistingFile);
  multiply->add_option("-o,--output", mul.out, "product file (default: stdout)");
  multiply->add_option("--algo", mul.algo, "sparse|naive|dense")
      ->check(CLI::IsMember({"sparse", "naive", "dense"}));
  multiply->add_option("--seed", mul.seed, "random seed")->envname("SPARSECONV_SEED");
  multiply->add_flag("--fallback-dense", mul.fallback_dense,
                     "redo a failed sparse run with the dense backend");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random operand pair");
  gen_cmd->add_option("--n", gen.n, "degree bound (operand length)")->required();
  gen_cmd->add_option("--terms", gen.terms, "terms per operand")->required();
  gen_cmd->add_option("--coeff-bound", gen.coeff_bound, "max |coefficient|");
  gen_cmd->add_option("--cancel-fraction", gen.cancel_fraction, "0 = random, 1 = telescoping");
  gen_cmd->add_option("--seed", gen.seed, "random seed")->envname("SPARSECONV_SEED");
  gen_cmd->add_option("-o", gen.out_a, "first operand file")->required();
  gen_cmd->add_option("--o2", gen.out_b, "second operand file (-o2)")->required();

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Check P = A * B by fingerprinting");
  verify->add_option("A", ver.a)->required()->check(CLI::ExistingFile);
  verify->add_option("B", ver.b)->required()->check(CLI::ExistingFile);
  verify->add_option("P", ver.product)->required()->check(CLI::ExistingFile);
  verify->add_option("--delta", ver.delta, "failure probability")
      ->check(CLI::Range(1e-300, 0.999999));
  verify->add_option("--seed", ver.seed, "random seed")->envname("SPARSECONV_SEED");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time backends on generated instances");
  bench_cmd->add_option("--n", bench.n)->required();
  bench_cmd->add_option("--terms", bench.terms)->required();
  bench_cmd->add_option("--coeff-bound", bench.coeff_bound);
  bench_cmd->add_option("--cancel-fraction", bench.cancel_fraction);
  bench_cmd->add_option("--algos", bench.algos, "comma-separated list");
  bench_cmd->add_option("--repeats", bench.repeats)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed)->envname("SPARSECONV_SEED");
  bench_cmd->add_option("--json", bench.json, "write records here instead of stdout");

  try {
    auto args = normalize_args(argc, argv);
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*multiply) return run_multiply(mul);
    if (*gen_cmd) return run_gen(gen);
    if (*verify) return run_verify(ver);
    if (*bench_cmd) return run_bench(bench);
  } catch (const PolyFileError& e) {
    std::cerr << "sparseconv: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "sparseconv: invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    std::cerr << "sparseconv: invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "sparseconv: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitInvalid;
}
