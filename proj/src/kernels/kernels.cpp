#include "reactwave/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_detail.hpp"

namespace reactwave::kernels {

namespace {

void cmul_scalar(cdouble* y, const cdouble* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= m[i];
}

void scale_scalar(cdouble* y, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= s;
}

double damp_scalar(cdouble* y, const double* d, std::size_t n) {
  double removed = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = y[i].real();
    const double im = y[i].imag();
    const double before = re * re + im * im;
    y[i] = {re * d[i], im * d[i]};
    removed += before * (1.0 - d[i] * d[i]);
  }
  return removed;
}

double norm_sq_scalar(const cdouble* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = y[i].real();
    const double im = y[i].imag();
    s += re * re + im * im;
  }
  return s;
}

cdouble dot_scalar(const cdouble* a, const cdouble* b, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

void fft_pass_first_scalar(cdouble* x, std::size_t n) {
  for (std::size_t i = 0; i < n; i += 2) {
    const cdouble a = x[i];
    const cdouble b = x[i + 1];
    x[i] = a + b;
    x[i + 1] = a - b;
  }
}

void fft_pass_scalar(cdouble* x, std::size_t n, std::size_t len,
                     const cdouble* tw) {
  const std::size_t half = len / 2;
  for (std::size_t block = 0; block < n; block += len) {
    cdouble* lo = x + block;
    cdouble* hi = lo + half;
    for (std::size_t j = 0; j < half; ++j) {
      const cdouble b = hi[j] * tw[j];
      const cdouble a = lo[j];
      lo[j] = a + b;
      hi[j] = a - b;
    }
  }
}

constexpr std::size_t kBlock = 32;

void transpose_scalar(const cdouble* in, cdouble* out, std::size_t rows,
                      std::size_t cols) {
  for (std::size_t ib = 0; ib < rows; ib += kBlock) {
    const std::size_t imax = ib + kBlock < rows ? ib + kBlock : rows;
    for (std::size_t jb = 0; jb < cols; jb += kBlock) {
      const std::size_t jmax = jb + kBlock < cols ? jb + kBlock : cols;
      for (std::size_t i = ib; i < imax; ++i)
        for (std::size_t j = jb; j < jmax; ++j)
          out[j * rows + i] = in[i * cols + j];
    }
  }
}

}  // namespace

namespace detail {
const Ops scalar_ops = {cmul_scalar,    scale_scalar,
                        damp_scalar,    norm_sq_scalar,
                        dot_scalar,     fft_pass_first_scalar,
                        fft_pass_scalar, transpose_scalar};
}  // namespace detail

namespace {

const detail::Ops* ops_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &detail::scalar_ops;
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2:
      return &detail::avx2_ops;
#endif
#if defined(__aarch64__)
    case Isa::neon:
      return &detail::neon_ops;
#endif
    default:
      return nullptr;
  }
}

Isa detect_best() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return Isa::avx2;
#elif defined(__aarch64__)
  return Isa::neon;
#endif
  return Isa::scalar;
}

Isa initial_isa() {
  if (const char* env = std::getenv("REACTWAVE_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0 && isa_supported(Isa::avx2))
      return Isa::avx2;
    if (std::strcmp(env, "neon") == 0 && isa_supported(Isa::neon))
      return Isa::neon;
  }
  return detect_best();
}

std::atomic<const detail::Ops*> g_ops{nullptr};
std::atomic<Isa> g_isa{Isa::scalar};

const detail::Ops& ops() {
  const detail::Ops* p = g_ops.load(std::memory_order_acquire);
  if (!p) {
    const Isa isa = initial_isa();
    p = ops_for(isa);
    g_isa.store(isa, std::memory_order_relaxed);
    g_ops.store(p, std::memory_order_release);
  }
  return *p;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

Isa active_isa() {
  ops();
  return g_isa.load(std::memory_order_relaxed);
}

Isa best_supported_isa() { return detect_best(); }

bool isa_supported(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::avx2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#endif
#if defined(__aarch64__)
  if (isa == Isa::neon) return true;
#endif
  return false;
}

bool select_isa(Isa isa) {
  if (!isa_supported(isa)) return false;
  g_isa.store(isa, std::memory_order_relaxed);
  g_ops.store(ops_for(isa), std::memory_order_release);
  return true;
}

void cmul(cdouble* y, const cdouble* m, std::size_t n) { ops().cmul(y, m, n); }
void scale(cdouble* y, double s, std::size_t n) { ops().scale(y, s, n); }
double damp(cdouble* y, const double* d, std::size_t n) {
  return ops().damp(y, d, n);
}
double norm_sq(const cdouble* y, std::size_t n) { return ops().norm_sq(y, n); }
cdouble dot(const cdouble* a, const cdouble* b, std::size_t n) {
  return ops().dot(a, b, n);
}
void fft_pass_first(cdouble* x, std::size_t n) { ops().fft_pass_first(x, n); }
void fft_pass(cdouble* x, std::size_t n, std::size_t len, const cdouble* tw) {
  ops().fft_pass(x, n, len, tw);
}
void transpose(const cdouble* in, cdouble* out, std::size_t rows,
               std::size_t cols) {
  ops().transpose(in, out, rows, cols);
}

}  // namespace reactwave::kernels
