#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "reactwave/errors.hpp"

namespace reactwave {

using cdouble = std::complex<double>;

// Uniform periodic grid over the simulation frame, row-major [n1][n2] with
// the Q2 index fastest. Node i sits at min + i*dx; max is the periodic image.
struct Grid2D {
  double q1_min = 0.0, q2_min = 0.0;  // m
  double dx1 = 0.0, dx2 = 0.0;        // m
  std::size_t n1 = 0, n2 = 0;

  static Grid2D from_extents(double q1_min, double q1_max, double q2_min,
                             double q2_max, std::size_t n1, std::size_t n2);

  double q1_max() const { return q1_min + double(n1) * dx1; }
  double q2_max() const { return q2_min + double(n2) * dx2; }
  double x1(std::size_t i) const { return q1_min + double(i) * dx1; }
  double x2(std::size_t j) const { return q2_min + double(j) * dx2; }
  std::size_t size() const { return n1 * n2; }
  double cell_area() const { return dx1 * dx2; }

  void validate() const;
};

struct Wavefunction {
  Grid2D grid;
  std::vector<cdouble> amp;  // size n1*n2
  double time = 0.0;         // s

  explicit Wavefunction(const Grid2D& g)
      : grid(g), amp(g.size(), cdouble{0.0, 0.0}) {}

  cdouble& at(std::size_t i, std::size_t j) { return amp[i * grid.n2 + j]; }
  const cdouble& at(std::size_t i, std::size_t j) const {
    return amp[i * grid.n2 + j];
  }

  double norm() const;  // sum |amp|^2 dA
  void normalize();
};

}  // namespace reactwave
