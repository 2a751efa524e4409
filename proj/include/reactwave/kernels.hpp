#pragma once

#include <complex>
#include <cstddef>

namespace reactwave::kernels {

using cdouble = std::complex<double>;

// Data-parallel inner loops of the propagator. Scalar reference
// implementations always exist; AVX2 (x86-64) and NEON (aarch64) variants are
// selected at runtime from CPU capabilities. The REACTWAVE_KERNELS
// environment variable (scalar|avx2|neon|auto) or select() overrides the
// choice, which lets the test suite run every variant on one machine.
enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);
Isa active_isa();
Isa best_supported_isa();
bool isa_supported(Isa isa);
// Returns false (and leaves the dispatch unchanged) if unsupported.
bool select_isa(Isa isa);

// y[i] *= m[i], complex pointwise.
void cmul(cdouble* y, const cdouble* m, std::size_t n);

// y[i] *= s.
void scale(cdouble* y, double s, std::size_t n);

// y[i] *= d[i] with real d[i] in (0, 1]; returns sum_i |y_before|^2 - |y_after|^2.
double damp(cdouble* y, const double* d, std::size_t n);

// sum_i |y[i]|^2
double norm_sq(const cdouble* y, std::size_t n);

// sum_i conj(a[i]) * b[i]
cdouble dot(const cdouble* a, const cdouble* b, std::size_t n);

// Radix-2 butterfly passes over interleaved complex data; building blocks of
// the FFT plans. n and len are powers of two, tw holds len/2 unit twiddles.
void fft_pass_first(cdouble* x, std::size_t n);
void fft_pass(cdouble* x, std::size_t n, std::size_t len, const cdouble* tw);

// out[j*rows + i] = in[i*cols + j]
void transpose(const cdouble* in, cdouble* out, std::size_t rows,
               std::size_t cols);

}  // namespace reactwave::kernels
