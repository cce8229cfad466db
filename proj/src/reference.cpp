#include "teglab/reference.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "teglab/csi.hpp"
#include "teglab/errors.hpp"

namespace teglab::ref {
namespace {

constexpr int kBoundaryNodes = 8;

void require_grid(const GridSpec& grid) {
  if (!(grid.L > 0) || !(grid.h > 0) || !std::isfinite(grid.L) || !std::isfinite(grid.h)) {
    throw InvalidArgument("grid: L and h must be positive");
  }
}

Eigen::MatrixXd d2_matrix(const GridSpec& grid) {
  const int n = grid_points(grid);
  const double hp = 2.0 * std::numbers::pi / n;
  const double scale = std::pow(std::numbers::pi / grid.L, 2);
  Eigen::MatrixXd D(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const int m = j - k;
      if (m == 0) {
        D(j, k) = -std::numbers::pi * std::numbers::pi / (3.0 * hp * hp) - 1.0 / 6.0;
      } else {
        const double s = std::sin(m * hp / 2.0);
        D(j, k) = -((m % 2 == 0) ? 1.0 : -1.0) / (2.0 * s * s);
      }
      D(j, k) *= scale;
    }
  }
  return D;
}

// Generator A with u_t = A u, the potential frozen at `time`.
Eigen::MatrixXcd generator(teg::Equation kind, const Eigen::MatrixXd& D2, const dsl::Field& potential,
                           const GridSpec& grid, double time) {
  const int n = static_cast<int>(D2.rows());
  Eigen::MatrixXcd A(n, n);
  const bool diffusion = kind == teg::Equation::diffusion;
  const Complex minus_i(0.0, -1.0);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) A(j, k) = diffusion ? Complex(0.25 * D2(j, k)) : minus_i * (-0.5 * D2(j, k));
  }
  if (!potential.is_zero()) {
    for (int j = 0; j < n; ++j) {
      const double x[1] = {-grid.L + j * grid.h};
      const double v = potential(x, time);
      A(j, j) += diffusion ? Complex(v) : minus_i * v;
    }
  }
  return A;
}

}  // namespace

int grid_points(const GridSpec& grid) {
  require_grid(grid);
  const double n = 2.0 * grid.L / grid.h;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * rounded || static_cast<long>(rounded) % 2 != 0 || rounded < 4) {
    throw InvalidArgument("grid: 2L/h must be an even integer >= 4");
  }
  if (rounded > 4096) throw GuardError("grid: more than 4096 nodes");
  return static_cast<int>(rounded);
}

std::vector<double> spectral_second_derivative(const GridSpec& grid) {
  const Eigen::MatrixXd D = d2_matrix(grid);
  std::vector<double> out(static_cast<std::size_t>(D.size()));
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out.data(), D.rows(), D.cols()) = D;
  return out;
}

GridFunction::GridFunction(GridSpec grid, std::vector<Complex> values) : grid_(grid), values_(std::move(values)) {
  const int n = grid_points(grid_);
  if (static_cast<int>(values_.size()) != n) throw InvalidArgument("GridFunction: value count does not match grid");
  coefficients_.assign(static_cast<std::size_t>(n), Complex{});
  for (int m = -n / 2; m < n / 2; ++m) {
    Complex c = 0.0;
    for (int j = 0; j < n; ++j) c += values_[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * std::numbers::pi * m * j / n);
    coefficients_[static_cast<std::size_t>(m + n / 2)] = c / static_cast<double>(n);
  }
}

Complex GridFunction::operator()(double x) const {
  const int n = static_cast<int>(values_.size());
  const double theta = std::numbers::pi * (x + grid_.L) / grid_.L;
  Complex sum = 0.0;
  for (int m = -n / 2 + 1; m < n / 2; ++m) {
    sum += coefficients_[static_cast<std::size_t>(m + n / 2)] * std::polar(1.0, m * theta);
  }
  // the Nyquist mode splits evenly between +n/2 and -n/2
  sum += coefficients_[0] * std::cos(0.5 * n * theta);
  return sum;
}

double GridFunction::boundary_amplitude() const {
  const int n = static_cast<int>(values_.size());
  double amp = 0.0;
  for (int j = 0; j < kBoundaryNodes && j < n; ++j) {
    amp = std::max(amp, std::abs(values_[static_cast<std::size_t>(j)]));
    amp = std::max(amp, std::abs(values_[static_cast<std::size_t>(n - 1 - j)]));
  }
  return amp;
}

GridFunction matrix_exponential_solve(teg::Equation kind, const dsl::Field& potential,
                                      const dsl::ComplexField& initial, double T, int substeps, GridSpec grid) {
  if (potential.dimension() != 1 || initial.dimension() != 1) {
    throw InvalidArgument("matrix_exponential_solve: one spatial dimension only");
  }
  if (!std::isfinite(T) || T < 0) throw InvalidArgument("matrix_exponential_solve: T must be finite and >= 0");
  if (substeps < 1) throw InvalidArgument("matrix_exponential_solve: substeps must be positive");
  const int n = grid_points(grid);
  Eigen::VectorXcd u(n);
  for (int j = 0; j < n; ++j) {
    const double x[1] = {-grid.L + j * grid.h};
    u(j) = initial(x);
  }
  if (T > 0) {
    const Eigen::MatrixXd D2 = d2_matrix(grid);
    if (!potential.depends_on_time()) {
      const Eigen::MatrixXcd A = generator(kind, D2, potential, grid, 0.0) * Complex(T);
      u = A.exp() * u;
    } else {
      const double dt = T / substeps;
      for (int s = 0; s < substeps; ++s) {
        const Eigen::MatrixXcd A = generator(kind, D2, potential, grid, (s + 0.5) * dt) * Complex(dt);
        u = A.exp() * u;
      }
    }
  }
  std::vector<Complex> values(u.data(), u.data() + n);
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw EvaluationError("matrix_exponential_solve: non-finite grid value");
    }
  }
  return GridFunction(grid, std::move(values));
}

double stirling_approx(int N) {
  if (N < 1) throw InvalidArgument("stirling_approx: N must be >= 1");
  return std::sqrt(2.0 * std::numbers::pi * N) * std::pow(N / std::numbers::e, N);
}

double log_stirling_approx(int N) {
  if (N < 1) throw InvalidArgument("log_stirling_approx: N must be >= 1");
  return 0.5 * std::log(2.0 * std::numbers::pi * N) + N * std::log(static_cast<double>(N)) - N;
}

double factorial_exact(int N) {
  if (N < 0) throw InvalidArgument("factorial_exact: N must be >= 0");
  double f = 1.0;
  for (int i = 2; i <= N; ++i) f *= i;
  return f;
}

double log_factorial(int N) {
  if (N < 0) throw InvalidArgument("log_factorial: N must be >= 0");
  double s = 0.0;
  for (int i = 2; i <= N; ++i) s += std::log(static_cast<double>(i));
  return s;
}

double stirling_ratio(int N) {
  if (N < 1) throw InvalidArgument("stirling_ratio: N must be >= 1");
  if (N <= 170) return factorial_exact(N) / stirling_approx(N);
  return std::exp(log_factorial(N) - log_stirling_approx(N));
}

FactorialCheck csi_factorial_integrand_check(int N, double B, int degree) {
  if (N < 0 || N > 30) throw InvalidArgument("csi_factorial_integrand_check: N must lie in [0, 30]");
  if (!(B > 0) || B > 30) throw InvalidArgument("csi_factorial_integrand_check: B must lie in (0, 30]");
  if (degree < 0) degree = 4 * N;
  if (degree < N) {
    throw InvalidArgument("csi_factorial_integrand_check: truncation degree " + std::to_string(degree) +
                          " cannot carry the e^{iN phi} mode");
  }
  std::vector<csi::Coefficient> series(static_cast<std::size_t>(degree) + 1);
  double term = 1.0;
  for (int j = 0; j <= degree; ++j) {
    series[static_cast<std::size_t>(j)] = term;
    term *= B / (j + 1);
  }
  const csi::LaurentPoly p = csi::LaurentPoly::univariate(series);
  const csi::ExponentVec e{N};
  const double quadrature = csi::quadrature_coeff(p, e, csi::minimum_samples(p, e)).real();
  double closed = 1.0;
  for (int j = 1; j <= N; ++j) closed *= B / j;
  return {quadrature, closed, std::abs(quadrature - closed) / std::abs(closed)};
}

}  // namespace teglab::ref
