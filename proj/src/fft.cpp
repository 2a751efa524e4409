#include "reactwave/fft.hpp"

#include <cmath>
#include <utility>

#include "reactwave/constants.hpp"
#include "reactwave/errors.hpp"
#include "reactwave/kernels.hpp"

namespace reactwave::fft {

bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

Plan1D::Plan1D(std::size_t n) : n_(n) {
  if (!is_pow2(n)) throw validation_error("fft: size must be a power of two >= 2");
  while ((std::size_t{1} << log2n_) < n_) ++log2n_;

  bitrev_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < log2n_; ++b) r |= ((i >> b) & 1u) << (log2n_ - 1 - b);
    bitrev_[i] = static_cast<std::uint32_t>(r);
  }

  // Per-stage tables laid out contiguously: stage len has len/2 entries
  // w_j = e^{-2pi i j/len}. Total n-1 entries.
  tw_fwd_.reserve(n_ - 1);
  tw_inv_.reserve(n_ - 1);
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    for (std::size_t j = 0; j < len / 2; ++j) {
      const double ang = -2.0 * constants::pi * static_cast<double>(j) /
                         static_cast<double>(len);
      tw_fwd_.emplace_back(std::cos(ang), std::sin(ang));
      tw_inv_.emplace_back(std::cos(ang), -std::sin(ang));
    }
  }
}

void Plan1D::run(cdouble* x, const std::vector<cdouble>& tw) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bitrev_[i];
    if (i < j) std::swap(x[i], x[j]);
  }
  kernels::fft_pass_first(x, n_);
  std::size_t off = 1;  // skip the trivial stage-2 table entry
  for (std::size_t len = 4; len <= n_; len <<= 1) {
    kernels::fft_pass(x, n_, len, tw.data() + off);
    off += len / 2;
  }
}

void Plan1D::forward(cdouble* x) const { run(x, tw_fwd_); }
void Plan1D::inverse(cdouble* x) const { run(x, tw_inv_); }

Plan2D::Plan2D(std::size_t n1, std::size_t n2)
    : n1_(n1), n2_(n2), row_(n2), col_(n1), scratch_(n1 * n2) {}

void Plan2D::forward_transposed(cdouble* x, cdouble* spec_t) {
  for (std::size_t i = 0; i < n1_; ++i) row_.forward(x + i * n2_);
  kernels::transpose(x, spec_t, n1_, n2_);
  for (std::size_t j = 0; j < n2_; ++j) col_.forward(spec_t + j * n1_);
}

void Plan2D::inverse_transposed(cdouble* spec_t, cdouble* x) {
  for (std::size_t j = 0; j < n2_; ++j) col_.inverse(spec_t + j * n1_);
  kernels::transpose(spec_t, x, n2_, n1_);
  for (std::size_t i = 0; i < n1_; ++i) row_.inverse(x + i * n2_);
  kernels::scale(x, 1.0 / static_cast<double>(n1_ * n2_), n1_ * n2_);
}

void Plan2D::forward(cdouble* x) {
  forward_transposed(x, scratch_.data());
  kernels::transpose(scratch_.data(), x, n2_, n1_);
}

void Plan2D::inverse(cdouble* x) {
  kernels::transpose(x, scratch_.data(), n1_, n2_);
  inverse_transposed(scratch_.data(), x);
}

}  // namespace reactwave::fft
