#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "teglab/errors.hpp"
#include "teglab/reference.hpp"

using namespace teglab;
using ref::Complex;
using ref::GridSpec;

namespace {

double sup_diff(const ref::GridFunction& a, const ref::GridFunction& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  return d;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK(ref::grid_points({}) == 480);
  CHECK(ref::grid_points({3.0, 0.5}) == 12);
  CHECK_THROWS_AS(ref::grid_points({3.0, 0.7}), InvalidArgument);
  CHECK_THROWS_AS(ref::grid_points({3.0, 0.4}), InvalidArgument);  // 15 nodes: odd
  CHECK_THROWS_AS(ref::grid_points({-1.0, 0.1}), InvalidArgument);
  CHECK_THROWS_AS(ref::grid_points({100.0, 0.01}), GuardError);
}

TEST_CASE("spectral second derivative matches the band-limited cosine sum") {
  const GridSpec g{3.0, 0.5};
  const int n = ref::grid_points(g);
  const auto D = ref::spectral_second_derivative(g);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      // (1/n) sum_m -(m pi/L)^2 cos(m pi (x_j - x_k)/L), Nyquist mode weighted by 1/2
      double want = 0.0;
      for (int m = -n / 2; m <= n / 2; ++m) {
        const double weight = (std::abs(m) == n / 2) ? 0.5 : 1.0;
        const double km = m * std::numbers::pi / g.L;
        want -= weight * km * km * std::cos(km * (j - k) * g.h);
      }
      want /= n;
      CHECK(D[static_cast<std::size_t>(j * n + k)] == doctest::Approx(want).epsilon(1e-10).scale(1.0));
      CHECK(D[static_cast<std::size_t>(j * n + k)] == D[static_cast<std::size_t>(k * n + j)]);
    }
  }
}

TEST_CASE("grid functions interpolate trigonometric data exactly") {
  const GridSpec g{4.0, 0.25};
  const int n = ref::grid_points(g);
  std::vector<Complex> v(static_cast<std::size_t>(n));
  auto f = [&](double x) { return Complex(std::cos(3 * std::numbers::pi * x / g.L), std::sin(std::numbers::pi * x / g.L)); };
  for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = f(-g.L + j * g.h);
  const ref::GridFunction gf(g, v);
  for (int j = 0; j < n; ++j) CHECK(std::abs(gf(gf.node(j)) - v[static_cast<std::size_t>(j)]) < 1e-13);
  for (double x : {-3.9, -1.234, 0.0, 0.77, 3.5}) CHECK(std::abs(gf(x) - f(x)) < 1e-13);
  CHECK_THROWS_AS(ref::GridFunction(g, std::vector<Complex>(3)), InvalidArgument);
}

TEST_CASE("free diffusion matches the heat kernel") {
  const auto g = ref::matrix_exponential_solve(teg::Equation::diffusion, dsl::Field(),
                                               dsl::ComplexField::parse("exp(-x^2)"), 1.0);
  double err = 0.0;
  for (int j = 0; j < ref::grid_points(g.grid()); ++j) {
    const double x = g.node(j);
    err = std::max(err, std::abs(g.values()[static_cast<std::size_t>(j)] - std::exp(-x * x / 2.0) / std::sqrt(2.0)));
  }
  CHECK(err < 1e-6);
  CHECK_FALSE(g.underresolved());
  CHECK(std::abs(g(0.5) - 0.62401954419369145) < 1e-6);
}

TEST_CASE("free Schrodinger wavepacket spreads analytically") {
  const double T = 1.0;
  const auto g = ref::matrix_exponential_solve(teg::Equation::schrodinger, dsl::Field(),
                                               dsl::ComplexField::parse("exp(-x^2)"), T);
  const Complex a(1.0, 2.0 * T);
  double err = 0.0;
  for (int j = 0; j < ref::grid_points(g.grid()); ++j) {
    const double x = g.node(j);
    err = std::max(err, std::abs(g.values()[static_cast<std::size_t>(j)] - std::exp(-x * x / a) / std::sqrt(a)));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("harmonic coherent state returns after one period") {
  const auto psi0 = dsl::ComplexField::parse("exp(-(x-1)^2/2)");
  const auto g = ref::matrix_exponential_solve(teg::Equation::schrodinger, dsl::Field::parse("0.5*x^2"), psi0,
                                               2.0 * std::numbers::pi);
  Complex overlap = 0.0;
  double n0 = 0.0, n1 = 0.0;
  for (int j = 0; j < ref::grid_points(g.grid()); ++j) {
    const double x[1] = {g.node(j)};
    const Complex a = psi0(x), b = g.values()[static_cast<std::size_t>(j)];
    overlap += std::conj(a) * b;
    n0 += std::norm(a);
    n1 += std::norm(b);
  }
  CHECK(std::norm(overlap) / (n0 * n1) >= 1.0 - 1e-5);
}

TEST_CASE("time-dependent potentials: second order in the substep") {
  const GridSpec grid{6.0, 0.1};
  const auto V = dsl::Field::parse("0.5*x^2*cos(2*t)");
  const auto psi0 = dsl::ComplexField::parse("exp(-x^2)");
  for (teg::Equation eq : {teg::Equation::diffusion, teg::Equation::schrodinger}) {
    const auto a = ref::matrix_exponential_solve(eq, V, psi0, 1.0, 16, grid);
    const auto b = ref::matrix_exponential_solve(eq, V, psi0, 1.0, 32, grid);
    const auto c = ref::matrix_exponential_solve(eq, V, psi0, 1.0, 64, grid);
    const double ratio = sup_diff(a, b) / sup_diff(b, c);
    CHECK((ratio > 3.5 && ratio < 4.5));
  }
}

TEST_CASE("doubling substeps is a no-op for time-independent potentials") {
  const auto V = dsl::Field::parse("0.5*x^2");
  const auto psi0 = dsl::ComplexField::parse("exp(-x^2)");
  const auto a = ref::matrix_exponential_solve(teg::Equation::schrodinger, V, psi0, 1.0, 256);
  const auto b = ref::matrix_exponential_solve(teg::Equation::schrodinger, V, psi0, 1.0, 512);
  CHECK(sup_diff(a, b) < 1e-8);
}

TEST_CASE("underresolved grids are flagged") {
  const auto g = ref::matrix_exponential_solve(teg::Equation::diffusion, dsl::Field(),
                                               dsl::ComplexField::parse("exp(-x^2/4)"), 1.0, 256, {4.0, 0.1});
  CHECK(g.underresolved());
  CHECK(g.boundary_amplitude() > 1e-8);
  CHECK_THROWS_AS(ref::matrix_exponential_solve(teg::Equation::diffusion, dsl::Field(),
                                                dsl::ComplexField::parse("1"), -1.0),
                  InvalidArgument);
}

TEST_CASE("Stirling") {
  CHECK(ref::factorial_exact(20) == 2432902008176640000.0);
  CHECK(ref::factorial_exact(0) == 1.0);
  CHECK(ref::stirling_approx(20) == doctest::Approx(2.4227868467611334e18).epsilon(1e-14));
  CHECK(ref::stirling_ratio(1) == doctest::Approx(1.0844375514192275).epsilon(1e-14));
  CHECK(ref::stirling_ratio(20) == doctest::Approx(1.0041750108677653).epsilon(1e-14));
  CHECK(ref::stirling_ratio(170) == doctest::Approx(1.0004903156784981).epsilon(1e-12));
  double prev = ref::stirling_ratio(1);
  for (int N = 1; N <= 170; ++N) {
    const double r = ref::stirling_ratio(N);
    CHECK(r > 1.0);
    CHECK(r < std::exp(1.0 / (12.0 * N)));
    if (N > 1) CHECK(r < prev);
    prev = r;
  }
  CHECK(std::isinf(ref::stirling_approx(200)));
  CHECK(ref::stirling_ratio(1000) == doctest::Approx(std::exp(1.0 / 12000.0)).epsilon(1e-9));
  CHECK_THROWS_AS(ref::stirling_approx(0), InvalidArgument);
}

TEST_CASE("factorial through the exponential-series integral") {
  CHECK(ref::csi_factorial_integrand_check(5, 5.0).closed_form == doctest::Approx(26.041666666666667));
  CHECK(ref::csi_factorial_integrand_check(5, 5.0).quadrature == doctest::Approx(26.041666666666667).epsilon(1e-8));
  CHECK(ref::csi_factorial_integrand_check(0, 1.0).quadrature == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ref::csi_factorial_integrand_check(10, 10.0).rel_error <= 1e-8);
  for (int N = 1; N <= 30; ++N) CHECK(ref::csi_factorial_integrand_check(N, 0.5 * N).rel_error <= 1e-8);
  CHECK_THROWS_AS(ref::csi_factorial_integrand_check(5, 5.0, 4), InvalidArgument);
  CHECK_THROWS_AS(ref::csi_factorial_integrand_check(31, 1.0), InvalidArgument);
  CHECK_THROWS_AS(ref::csi_factorial_integrand_check(3, 0.0), InvalidArgument);
}
