#pragma once

// Thin RAII layer over FFTW3. Plans are built with FFTW_ESTIMATE on buffers
// the objects own, so execution is deterministic and allocation happens once
// per transform length. Only plan creation/destruction touch FFTW's global
// planner, and those calls are serialized here.

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <span>
#include <stdexcept>

namespace sparseconv::fft {

using Complex = std::complex<double>;

namespace detail {

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwArray = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwArray<T> fftw_alloc(std::size_t n) {
  void* p = fftw_malloc(sizeof(T) * (n == 0 ? 1 : n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwArray<T>(static_cast<T*>(p));
}

class Plan {
 public:
  Plan() = default;
  explicit Plan(fftw_plan p) : plan_(p) {
    if (plan_ == nullptr) throw std::runtime_error("FFTW failed to create a plan");
  }
  Plan(Plan&& o) noexcept : plan_(o.plan_) { o.plan_ = nullptr; }
  Plan& operator=(Plan&& o) noexcept {
    if (this != &o) {
      reset();
      plan_ = o.plan_;
      o.plan_ = nullptr;
    }
    return *this;
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() { reset(); }

  void execute() const { fftw_execute(plan_); }

 private:
  void reset() noexcept {
    if (plan_ != nullptr) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
      plan_ = nullptr;
    }
  }
  fftw_plan plan_ = nullptr;
};

inline fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace detail

/// Transform length used for a cyclic convolution of length m: m itself when
/// it is a power of two, otherwise the next power of two >= 2m-1 (linear
/// convolution followed by wrap-around).
inline std::size_t cyclic_transform_length(std::size_t m) {
  if (m == 0) throw std::invalid_argument("transform length must be positive");
  if (std::has_single_bit(m)) return m;
  return std::bit_ceil(2 * m - 1);
}

/// Worst-case l-infinity error of an FFT-based convolution of length L with
/// accurate twiddles: c * log2(L) * eps * |a|_2 * |b|_2 (Percival-type bound,
/// c covers the forward, pointwise and inverse stages).
inline constexpr double kFftErrorFactor = 12.0;

inline double convolution_error_bound(std::size_t length, double norm_a, double norm_b) {
  const double levels = std::max(1.0, std::log2(static_cast<double>(length)));
  return kFftErrorFactor * levels * std::numeric_limits<double>::epsilon() * norm_a * norm_b;
}

/// Unnormalized complex convolution engine of a fixed power-of-two length.
/// Fill lhs() and rhs(), call run(); lhs() then holds L * (lhs (*) rhs).
class ComplexConvolver {
 public:
  explicit ComplexConvolver(std::size_t length)
      : length_(length),
        lhs_(detail::fftw_alloc<Complex>(length)),
        rhs_(detail::fftw_alloc<Complex>(length)) {
    std::lock_guard lock(detail::planner_mutex());
    const int n = static_cast<int>(length);
    fwd_lhs_ = detail::Plan(fftw_plan_dft_1d(n, detail::as_fftw(lhs_.get()),
                                             detail::as_fftw(lhs_.get()), FFTW_FORWARD,
                                             FFTW_ESTIMATE));
    fwd_rhs_ = detail::Plan(fftw_plan_dft_1d(n, detail::as_fftw(rhs_.get()),
                                             detail::as_fftw(rhs_.get()), FFTW_FORWARD,
                                             FFTW_ESTIMATE));
    inv_lhs_ = detail::Plan(fftw_plan_dft_1d(n, detail::as_fftw(lhs_.get()),
                                             detail::as_fftw(lhs_.get()), FFTW_BACKWARD,
                                             FFTW_ESTIMATE));
  }

  std::size_t length() const noexcept { return length_; }
  std::span<Complex> lhs() noexcept { return {lhs_.get(), length_}; }
  std::span<Complex> rhs() noexcept { return {rhs_.get(), length_}; }

  void run() {
    fwd_lhs_.execute();
    fwd_rhs_.execute();
    Complex* a = lhs_.get();
    const Complex* b = rhs_.get();
    for (std::size_t i = 0; i < length_; ++i) a[i] *= b[i];
    inv_lhs_.execute();
  }

 private:
  std::size_t length_;
  detail::FftwArray<Complex> lhs_;
  detail::FftwArray<Complex> rhs_;
  detail::Plan fwd_lhs_;
  detail::Plan fwd_rhs_;
  detail::Plan inv_lhs_;
};

/// Caches one ComplexConvolver per transform length.
class ConvolutionWorkspace {
 public:
  ComplexConvolver& for_length(std::size_t length) {
    auto it = engines_.find(length);
    if (it == engines_.end()) {
      it = engines_.emplace(length, std::make_unique<ComplexConvolver>(length)).first;
    }
    return *it->second;
  }

 private:
  std::map<std::size_t, std::unique_ptr<ComplexConvolver>> engines_;
};

/// Real-input forward/backward transforms of one length, for the dense baseline.
class RealTransform {
 public:
  explicit RealTransform(std::size_t length)
      : length_(length),
        real_(detail::fftw_alloc<double>(length)),
        spectrum_(detail::fftw_alloc<Complex>(length / 2 + 1)) {
    std::lock_guard lock(detail::planner_mutex());
    const int n = static_cast<int>(length);
    forward_ = detail::Plan(fftw_plan_dft_r2c_1d(n, real_.get(),
                                                 detail::as_fftw(spectrum_.get()),
                                                 FFTW_ESTIMATE));
    backward_ = detail::Plan(fftw_plan_dft_c2r_1d(n, detail::as_fftw(spectrum_.get()),
                                                  real_.get(), FFTW_ESTIMATE));
  }

  std::size_t length() const noexcept { return length_; }
  std::size_t spectrum_length() const noexcept { return length_ / 2 + 1; }
  std::span<double> real() noexcept { return {real_.get(), length_}; }
  std::span<Complex> spectrum() noexcept { return {spectrum_.get(), spectrum_length()}; }

  /// real() -> spectrum(); real() is preserved.
  void forward() { forward_.execute(); }
  /// spectrum() -> L * inverse in real(); spectrum() is clobbered.
  void backward() { backward_.execute(); }

 private:
  std::size_t length_;
  detail::FftwArray<double> real_;
  detail::FftwArray<Complex> spectrum_;
  detail::Plan forward_;
  detail::Plan backward_;
};

}  // namespace sparseconv::fft
