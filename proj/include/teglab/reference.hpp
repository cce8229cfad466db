#pragma once

// Independent ground truth: dense matrix-exponential evolution on a periodic
// spectral grid, and the Stirling identities.

#include <complex>
#include <vector>

#include "teglab/potential.hpp"
#include "teglab/teg.hpp"

namespace teglab::ref {

using Complex = std::complex<double>;

/// Periodic grid x_j = -L + j h, j = 0..n-1, n = 2L / h (must be an even integer).
struct GridSpec {
  double L = 12.0;
  double h = 0.05;
};

int grid_points(const GridSpec& grid);

/// Fourier spectral second-derivative matrix (row-major, n x n).
std::vector<double> spectral_second_derivative(const GridSpec& grid);

class GridFunction {
 public:
  GridFunction(GridSpec grid, std::vector<Complex> values);

  const GridSpec& grid() const noexcept { return grid_; }
  const std::vector<Complex>& values() const noexcept { return values_; }
  double node(int j) const { return -grid_.L + j * grid_.h; }

  /// Trigonometric interpolant at any x (periodic in 2L).
  Complex operator()(double x) const;

  /// max |value| over the 8 outermost nodes at each end.
  double boundary_amplitude() const;
  /// True when boundary_amplitude() exceeds 1e-8.
  bool underresolved() const { return boundary_amplitude() > 1e-8; }

 private:
  GridSpec grid_;
  std::vector<Complex> values_;
  std::vector<Complex> coefficients_;  // modes -n/2 .. n/2 - 1
};

/// Evolves initial data to time T with generator
///   diffusion:   1/4 d^2/dx^2 + V
///   Schrodinger: -i (-1/2 d^2/dx^2 + U)
/// as a product of dense matrix exponentials, one per substep with the
/// potential frozen at the substep midpoint. A time-independent potential
/// uses a single exponential. One dimension only.
GridFunction matrix_exponential_solve(teg::Equation kind, const dsl::Field& potential,
                                      const dsl::ComplexField& initial, double T, int substeps = 256,
                                      GridSpec grid = {});

/// sqrt(2 pi N) N^N e^{-N}; infinite beyond double range (see log_stirling_approx).
double stirling_approx(int N);
double log_stirling_approx(int N);
/// N! as the product 1 * 2 * ... * N; infinite past 170.
double factorial_exact(int N);
double log_factorial(int N);
/// N! / stirling_approx(N), evaluated in log space past 170.
double stirling_ratio(int N);

struct FactorialCheck {
  double quadrature;
  double closed_form;
  double rel_error;
};

/// B^N / N! as the e^{iN phi} coefficient of the exponential series of
/// B e^{i phi} truncated at `degree` (default 4N), by periodic quadrature.
/// Requires 0 <= N <= 30, 0 < B <= 30 and degree >= N.
FactorialCheck csi_factorial_integrand_check(int N, double B, int degree = -1);

}  // namespace teglab::ref
