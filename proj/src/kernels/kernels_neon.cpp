// NEON variants for aarch64. One complex double per 128-bit vector.

#if defined(__aarch64__)

#include <arm_neon.h>

#include "kernels_detail.hpp"

namespace reactwave::kernels {

namespace {

inline double* dp(cdouble* p) { return reinterpret_cast<double*>(p); }
inline const double* dp(const cdouble* p) {
  return reinterpret_cast<const double*>(p);
}

// [yr, yi] * [wr, wi]
inline float64x2_t cmul1(float64x2_t y, float64x2_t w) {
  const float64x2_t sign = {-1.0, 1.0};
  const float64x2_t wre = vdupq_laneq_f64(w, 0);
  const float64x2_t wim = vdupq_laneq_f64(w, 1);
  const float64x2_t ysw = vextq_f64(y, y, 1);  // [yi, yr]
  // [yr*wr - yi*wi, yi*wr + yr*wi]
  return vfmaq_f64(vmulq_f64(vmulq_f64(ysw, wim), sign), y, wre);
}

void cmul_neon(cdouble* y, const cdouble* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t yv = vld1q_f64(dp(y + i));
    const float64x2_t mv = vld1q_f64(dp(m + i));
    vst1q_f64(dp(y + i), cmul1(yv, mv));
  }
}

void scale_neon(cdouble* y, double s, std::size_t n) {
  const float64x2_t sv = vdupq_n_f64(s);
  for (std::size_t i = 0; i < n; ++i)
    vst1q_f64(dp(y + i), vmulq_f64(vld1q_f64(dp(y + i)), sv));
}

double damp_neon(cdouble* y, const double* d, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t dd = vdupq_n_f64(d[i]);
    const float64x2_t yv = vld1q_f64(dp(y + i));
    const float64x2_t sq = vmulq_f64(yv, yv);
    const float64x2_t fac = vfmsq_f64(one, dd, dd);  // 1 - d*d
    acc = vfmaq_f64(acc, sq, fac);
    vst1q_f64(dp(y + i), vmulq_f64(yv, dd));
  }
  return vaddvq_f64(acc);
}

double norm_sq_neon(const cdouble* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t yv = vld1q_f64(dp(y + i));
    acc = vfmaq_f64(acc, yv, yv);
  }
  return vaddvq_f64(acc);
}

cdouble dot_neon(const cdouble* a, const cdouble* b, std::size_t n) {
  float64x2_t acc_re = vdupq_n_f64(0.0);
  float64x2_t acc_im = vdupq_n_f64(0.0);  // [ai*br, ar*bi]
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t av = vld1q_f64(dp(a + i));
    const float64x2_t bv = vld1q_f64(dp(b + i));
    acc_re = vfmaq_f64(acc_re, av, bv);
    acc_im = vfmaq_f64(acc_im, vextq_f64(av, av, 1), bv);
  }
  const double re = vaddvq_f64(acc_re);
  const double im = vgetq_lane_f64(acc_im, 1) - vgetq_lane_f64(acc_im, 0);
  return {re, im};
}

void fft_pass_first_neon(cdouble* x, std::size_t n) {
  for (std::size_t i = 0; i < n; i += 2) {
    const float64x2_t a = vld1q_f64(dp(x + i));
    const float64x2_t b = vld1q_f64(dp(x + i + 1));
    vst1q_f64(dp(x + i), vaddq_f64(a, b));
    vst1q_f64(dp(x + i + 1), vsubq_f64(a, b));
  }
}

void fft_pass_neon(cdouble* x, std::size_t n, std::size_t len,
                   const cdouble* tw) {
  const std::size_t half = len / 2;
  for (std::size_t block = 0; block < n; block += len) {
    cdouble* lo = x + block;
    cdouble* hi = lo + half;
    for (std::size_t j = 0; j < half; ++j) {
      const float64x2_t bv = cmul1(vld1q_f64(dp(hi + j)), vld1q_f64(dp(tw + j)));
      const float64x2_t av = vld1q_f64(dp(lo + j));
      vst1q_f64(dp(lo + j), vaddq_f64(av, bv));
      vst1q_f64(dp(hi + j), vsubq_f64(av, bv));
    }
  }
}

}  // namespace

namespace detail {
const Ops neon_ops = {cmul_neon,    scale_neon,
                      damp_neon,    norm_sq_neon,
                      dot_neon,     fft_pass_first_neon,
                      fft_pass_neon, scalar_ops.transpose};
}  // namespace detail

}  // namespace reactwave::kernels

#endif  // aarch64
