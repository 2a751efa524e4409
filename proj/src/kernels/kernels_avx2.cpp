// AVX2/FMA variants of the propagation kernels. Two complex doubles per
// 256-bit vector, interleaved re/im layout. This translation unit is compiled
// with -mavx2 -mfma and must only be reached through the runtime dispatch.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "kernels_detail.hpp"

namespace reactwave::kernels {

namespace {

inline double* dp(cdouble* p) { return reinterpret_cast<double*>(p); }
inline const double* dp(const cdouble* p) {
  return reinterpret_cast<const double*>(p);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (a0+ib0, a1+ib1) * (w0, w1) elementwise for two complex lanes
inline __m256d cmul2(__m256d y, __m256d w) {
  const __m256d wre = _mm256_movedup_pd(w);
  const __m256d wim = _mm256_permute_pd(w, 0xF);
  const __m256d ysw = _mm256_permute_pd(y, 0x5);
  return _mm256_fmaddsub_pd(y, wre, _mm256_mul_pd(ysw, wim));
}

void cmul_avx2(cdouble* y, const cdouble* m, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d yv = _mm256_loadu_pd(dp(y + i));
    const __m256d mv = _mm256_loadu_pd(dp(m + i));
    _mm256_storeu_pd(dp(y + i), cmul2(yv, mv));
  }
  for (; i < n; ++i) y[i] *= m[i];
}

void scale_avx2(cdouble* y, double s, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    _mm256_storeu_pd(dp(y + i), _mm256_mul_pd(_mm256_loadu_pd(dp(y + i)), sv));
  for (; i < n; ++i) y[i] *= s;
}

double damp_avx2(cdouble* y, const double* d, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d dd = _mm256_permute4x64_pd(
        _mm256_castpd128_pd256(_mm_loadu_pd(d + i)), 0x50);
    const __m256d yv = _mm256_loadu_pd(dp(y + i));
    const __m256d sq = _mm256_mul_pd(yv, yv);
    const __m256d fac = _mm256_fnmadd_pd(dd, dd, one);
    acc = _mm256_fmadd_pd(sq, fac, acc);
    _mm256_storeu_pd(dp(y + i), _mm256_mul_pd(yv, dd));
  }
  double removed = hsum(acc);
  for (; i < n; ++i) {
    const double re = y[i].real(), im = y[i].imag();
    const double before = re * re + im * im;
    y[i] = {re * d[i], im * d[i]};
    removed += before * (1.0 - d[i] * d[i]);
  }
  return removed;
}

double norm_sq_avx2(const cdouble* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d yv = _mm256_loadu_pd(dp(y + i));
    acc = _mm256_fmadd_pd(yv, yv, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double re = y[i].real(), im = y[i].imag();
    s += re * re + im * im;
  }
  return s;
}

cdouble dot_avx2(const cdouble* a, const cdouble* b, std::size_t n) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();  // lanes [ai*br, ar*bi, ...]
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(dp(a + i));
    const __m256d bv = _mm256_loadu_pd(dp(b + i));
    acc_re = _mm256_fmadd_pd(av, bv, acc_re);
    acc_im = _mm256_fmadd_pd(_mm256_permute_pd(av, 0x5), bv, acc_im);
  }
  double re = hsum(acc_re);
  {
    __m128d lo = _mm256_castpd256_pd128(acc_im);
    __m128d hi = _mm256_extractf128_pd(acc_im, 1);
    __m128d s = _mm_add_pd(lo, hi);  // [sum even, sum odd]
    // im = sum(ar*bi) - sum(ai*br)
    const double even = _mm_cvtsd_f64(s);
    const double odd = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
    double im = odd - even;
    for (; i < n; ++i) {
      const double ar = a[i].real(), ai = a[i].imag();
      const double br = b[i].real(), bi = b[i].imag();
      re += ar * br + ai * bi;
      im += ar * bi - ai * br;
    }
    return {re, im};
  }
}

void fft_pass_first_avx2(cdouble* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(dp(x + i));
    const __m256d v1 = _mm256_loadu_pd(dp(x + i + 2));
    const __m256d ap = _mm256_permute2f128_pd(v0, v1, 0x20);
    const __m256d bp = _mm256_permute2f128_pd(v0, v1, 0x31);
    const __m256d s = _mm256_add_pd(ap, bp);
    const __m256d d = _mm256_sub_pd(ap, bp);
    _mm256_storeu_pd(dp(x + i), _mm256_permute2f128_pd(s, d, 0x20));
    _mm256_storeu_pd(dp(x + i + 2), _mm256_permute2f128_pd(s, d, 0x31));
  }
  for (; i < n; i += 2) {
    const cdouble a = x[i];
    const cdouble b = x[i + 1];
    x[i] = a + b;
    x[i + 1] = a - b;
  }
}

void fft_pass_avx2(cdouble* x, std::size_t n, std::size_t len,
                   const cdouble* tw) {
  const std::size_t half = len / 2;
  if (half < 2) {
    detail::scalar_ops.fft_pass(x, n, len, tw);
    return;
  }
  for (std::size_t block = 0; block < n; block += len) {
    cdouble* lo = x + block;
    cdouble* hi = lo + half;
    for (std::size_t j = 0; j < half; j += 2) {
      const __m256d tv = _mm256_loadu_pd(dp(tw + j));
      const __m256d hv = _mm256_loadu_pd(dp(hi + j));
      const __m256d bv = cmul2(hv, tv);
      const __m256d av = _mm256_loadu_pd(dp(lo + j));
      _mm256_storeu_pd(dp(lo + j), _mm256_add_pd(av, bv));
      _mm256_storeu_pd(dp(hi + j), _mm256_sub_pd(av, bv));
    }
  }
}

constexpr std::size_t kBlock = 32;

void transpose_avx2(const cdouble* in, cdouble* out, std::size_t rows,
                    std::size_t cols) {
  if (rows % 2 || cols % 2) {
    detail::scalar_ops.transpose(in, out, rows, cols);
    return;
  }
  for (std::size_t ib = 0; ib < rows; ib += kBlock) {
    const std::size_t imax = ib + kBlock < rows ? ib + kBlock : rows;
    for (std::size_t jb = 0; jb < cols; jb += kBlock) {
      const std::size_t jmax = jb + kBlock < cols ? jb + kBlock : cols;
      for (std::size_t i = ib; i < imax; i += 2) {
        for (std::size_t j = jb; j < jmax; j += 2) {
          const __m256d r0 = _mm256_loadu_pd(dp(in + i * cols + j));
          const __m256d r1 = _mm256_loadu_pd(dp(in + (i + 1) * cols + j));
          _mm256_storeu_pd(dp(out + j * rows + i),
                           _mm256_permute2f128_pd(r0, r1, 0x20));
          _mm256_storeu_pd(dp(out + (j + 1) * rows + i),
                           _mm256_permute2f128_pd(r0, r1, 0x31));
        }
      }
    }
  }
}

}  // namespace

namespace detail {
const Ops avx2_ops = {cmul_avx2,    scale_avx2,
                      damp_avx2,    norm_sq_avx2,
                      dot_avx2,     fft_pass_first_avx2,
                      fft_pass_avx2, transpose_avx2};
}  // namespace detail

}  // namespace reactwave::kernels

#endif  // x86-64
