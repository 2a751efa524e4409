#include "reactwave/grid.hpp"

#include <cmath>

#include "reactwave/fft.hpp"
#include "reactwave/kernels.hpp"

namespace reactwave {

Grid2D Grid2D::from_extents(double q1_min, double q1_max, double q2_min,
                            double q2_max, std::size_t n1, std::size_t n2) {
  if (!(q1_max > q1_min) || !(q2_max > q2_min))
    throw validation_error("Grid2D: extents must be increasing");
  Grid2D g;
  g.q1_min = q1_min;
  g.q2_min = q2_min;
  g.n1 = n1;
  g.n2 = n2;
  g.dx1 = (q1_max - q1_min) / double(n1);
  g.dx2 = (q2_max - q2_min) / double(n2);
  g.validate();
  return g;
}

void Grid2D::validate() const {
  if (n1 < 64 || n2 < 64 || !fft::is_pow2(n1) || !fft::is_pow2(n2))
    throw validation_error("Grid2D: n1, n2 must be powers of two >= 64");
  if (!(dx1 > 0.0) || !(dx2 > 0.0))
    throw validation_error("Grid2D: spacings must be positive");
}

double Wavefunction::norm() const {
  return kernels::norm_sq(amp.data(), amp.size()) * grid.cell_area();
}

void Wavefunction::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw numerical_error("Wavefunction: cannot normalize zero state");
  kernels::scale(amp.data(), 1.0 / std::sqrt(n), amp.size());
}

}  // namespace reactwave
