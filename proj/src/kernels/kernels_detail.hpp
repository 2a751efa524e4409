#pragma once

#include "reactwave/kernels.hpp"

namespace reactwave::kernels::detail {

struct Ops {
  void (*cmul)(cdouble*, const cdouble*, std::size_t);
  void (*scale)(cdouble*, double, std::size_t);
  double (*damp)(cdouble*, const double*, std::size_t);
  double (*norm_sq)(const cdouble*, std::size_t);
  cdouble (*dot)(const cdouble*, const cdouble*, std::size_t);
  void (*fft_pass_first)(cdouble*, std::size_t);
  void (*fft_pass)(cdouble*, std::size_t, std::size_t, const cdouble*);
  void (*transpose)(const cdouble*, cdouble*, std::size_t, std::size_t);
};

extern const Ops scalar_ops;

#if defined(__x86_64__) || defined(_M_X64)
extern const Ops avx2_ops;
#endif
#if defined(__aarch64__)
extern const Ops neon_ops;
#endif

}  // namespace reactwave::kernels::detail
