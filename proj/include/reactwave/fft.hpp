#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace reactwave::fft {

using cdouble = std::complex<double>;

bool is_pow2(std::size_t n);

// In-place complex power-of-two FFT, radix 2, precomputed per-stage twiddle
// tables. forward uses e^{-2pi i jk/n}; both directions are unnormalized.
class Plan1D {
 public:
  explicit Plan1D(std::size_t n);

  void forward(cdouble* x) const;
  void inverse(cdouble* x) const;
  std::size_t size() const { return n_; }

 private:
  void run(cdouble* x, const std::vector<cdouble>& tw) const;

  std::size_t n_ = 0;
  std::size_t log2n_ = 0;
  std::vector<cdouble> tw_fwd_;  // stages concatenated: 2, 4, ..., n
  std::vector<cdouble> tw_inv_;
  std::vector<std::uint32_t> bitrev_;
};

// 2D transform over row-major [n1][n2] data: rows, transpose, rows. The
// *_transposed entry points leave/accept spectral data in [n2][n1] layout so a
// propagation step needs just two transposes. inverse includes the 1/(n1*n2)
// normalization.
class Plan2D {
 public:
  Plan2D(std::size_t n1, std::size_t n2);

  void forward(cdouble* x);
  void inverse(cdouble* x);

  void forward_transposed(cdouble* x, cdouble* spec_t);
  void inverse_transposed(cdouble* spec_t, cdouble* x);

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }

 private:
  std::size_t n1_, n2_;
  Plan1D row_;  // length n2
  Plan1D col_;  // length n1
  std::vector<cdouble> scratch_;
};

}  // namespace reactwave::fft
