#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "teglab/errors.hpp"
#include "teglab/solver.hpp"
#include "teglab/teg.hpp"

using namespace teglab;
using teg::Complex;
using teg::Shift;
using teg::TegSpec;

namespace {

void check_poly_close(const csi::LaurentPoly& a, const csi::LaurentPoly& b, double tol) {
  REQUIRE(a.arity() == b.arity());
  for (const auto& t : a.terms()) CHECK(std::abs(csi::coeff(b, t.exponents) - t.value) <= tol);
  for (const auto& t : b.terms()) CHECK(std::abs(csi::coeff(a, t.exponents) - t.value) <= tol);
}

}  // namespace

TEST_CASE("standard specs") {
  const auto d = TegSpec::diffusion(5, 1.0);
  CHECK(d.order() == 2);
  CHECK(d.move(0).displacement == Shift{-1});
  CHECK(d.move(1).displacement == Shift{1});
  CHECK(d.move(0).weight == Complex(0.5));
  CHECK(d.potential_sign() == Complex(1.0));
  CHECK(d.weight_growth() == 1.0);
  CHECK(d.spacing() == doctest::Approx(std::sqrt(0.1)));
  CHECK(d.step_time() == doctest::Approx(0.2));

  const auto s = TegSpec::schrodinger(4, 1.0);
  CHECK(s.order() == 3);
  CHECK(s.move(0).weight == Complex(1.0, -2.0));
  CHECK(s.move(1).displacement == Shift{1});
  CHECK(s.move(2).displacement == Shift{-1});
  CHECK(s.move(2).weight == Complex(0.0, 1.0));
  CHECK(s.potential_sign() == Complex(0.0, -1.0));
  CHECK(s.weight_growth() == doctest::Approx(std::sqrt(5.0) + 2.0));

  const auto s2 = TegSpec::schrodinger(2, 1.0, 2);
  CHECK(s2.order() == 5);
  CHECK(s2.move(0).weight == Complex(1.0, -4.0));
  CHECK(s2.move(3).displacement == Shift{0, 1});
  CHECK(s2.move(4).displacement == Shift{0, -1});
  CHECK(s2.reach() == 1);

  CHECK_THROWS_AS(TegSpec::diffusion(0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(TegSpec::diffusion(2, -1.0), InvalidArgument);
  CHECK_THROWS_AS(TegSpec::schrodinger(2, 1.0, 4), InvalidArgument);
  CHECK_THROWS_AS(TegSpec({{1.0, {1}}}, 2, 1.0, {}), InvalidArgument);
  CHECK_THROWS_AS(TegSpec::schrodinger(40, 1.0).path_count(), OverflowError);
}

TEST_CASE("golden paths") {
  const auto spec = TegSpec::diffusion(5, 1.0);
  const auto p11 = teg::path_from_index(11, spec);
  CHECK(p11.moves == std::vector<int>{1, 1, 0, 1, 0});
  CHECK(p11.prefix_shifts == std::vector<Shift>{{1}, {2}, {1}, {2}, {1}});
  CHECK(p11.terminal == Shift{1});
  const auto p26 = teg::path_from_index(26, spec);
  CHECK(p26.moves == std::vector<int>{0, 1, 0, 1, 1});
  CHECK(p26.prefix_shifts == std::vector<Shift>{{-1}, {0}, {-1}, {0}, {1}});
  CHECK(p26.terminal == Shift{1});
  CHECK(teg::path_from_index(0, spec).terminal == Shift{-5});
  CHECK_THROWS_AS(teg::path_from_index(32, spec), InvalidArgument);
  CHECK_THROWS_AS(teg::path_from_index(-1, spec), InvalidArgument);

  const auto flat = teg::path_from_index(0, TegSpec::schrodinger(4, 1.0));
  CHECK(flat.terminal == Shift{0});
}

TEST_CASE("shift_csi") {
  const auto spec = TegSpec::diffusion(5, 1.0);
  CHECK(teg::shift_csi(11, spec) == Shift{1});
  CHECK(teg::shift_csi(26, spec) == Shift{1});
  CHECK(teg::shift_csi(0, spec) == Shift{-5});
  for (int N = 1; N <= 10; ++N) {
    const auto s = TegSpec::diffusion(N, 1.0);
    for (std::int64_t M = 0; M < s.path_count(); ++M) {
      REQUIRE(teg::shift_csi(M, s) == teg::path_from_index(M, s).terminal);
    }
  }
}

TEST_CASE("property: path counts by terminal shift are binomial") {
  for (int N = 1; N <= 14; ++N) {
    const auto spec = TegSpec::diffusion(N, 1.0);
    std::map<std::int64_t, std::int64_t> counts;
    for (std::int64_t M = 0; M < spec.path_count(); ++M) ++counts[teg::path_from_index(M, spec).terminal[0]];
    for (int s = -N; s <= N; ++s) {
      const std::int64_t want = ((N - s) % 2 == 0) ? static_cast<std::int64_t>(solver::binomial(N, (N - s) / 2)) : 0;
      CHECK(counts[s] == want);
    }
  }
}

TEST_CASE("property: Lambda prefix and csi agreement") {
  for (int b_spec = 0; b_spec < 3; ++b_spec) {
    const TegSpec spec = b_spec == 0   ? TegSpec::diffusion(6, 1.0)
                         : b_spec == 1 ? TegSpec::schrodinger(5, 1.0)
                                       : TegSpec::schrodinger(3, 1.0, 2);
    for (std::int64_t M = 0; M < spec.path_count(); ++M) {
      const auto path = teg::path_from_index(M, spec);
      CHECK(teg::lambda_k(M, 0, spec) == Shift(static_cast<std::size_t>(spec.dimension()), 0));
      for (int k = 1; k <= spec.slices(); ++k) {
        const Shift prev = teg::lambda_k(M, k - 1, spec);
        const Shift cur = teg::lambda_k(M, k, spec);
        const Shift& d = spec.move(path.moves[static_cast<std::size_t>(k - 1)]).displacement;
        for (std::size_t i = 0; i < cur.size(); ++i) CHECK(cur[i] - prev[i] == d[i]);
        CHECK(teg::lambda_k_csi(M, k, spec) == cur);
      }
    }
  }
  const auto spec = TegSpec::diffusion(5, 1.0);
  CHECK(teg::lambda_k_csi(11, 1, spec) == Shift{1});
}

TEST_CASE("selection_G digit filtering") {
  const auto spec = TegSpec::diffusion(3, 1.0);
  // M = 5 = digits (1, 0, 1): F_1(0) F_0(1) F_1(2)
  const auto g = teg::selection_G(5, spec);
  CHECK(g.arity() == 2);
  CHECK(g.size() == 8);
  CHECK(csi::coeff(g, {0, 0}) == Complex(1.0));
  CHECK(csi::coeff(g, {7, -1}) == Complex(1.0));
  CHECK(csi::coeff(g, {1, -1}) == Complex(1.0));
  CHECK(csi::coeff(g, {2, 1}) == Complex(1.0));
  const double zero[2] = {0.0, 0.0};
  CHECK(g.evaluate(zero) == Complex(8.0));
  CHECK_THROWS_AS(teg::selection_G(0, TegSpec::diffusion(9, 1.0)), GuardError);
}

TEST_CASE("property: selection_G equals the dense extraction") {
  for (int N = 1; N <= 6; ++N) {
    const auto spec = TegSpec::diffusion(N, 1.0);
    for (std::int64_t M = 0; M < spec.path_count(); ++M) {
      check_poly_close(teg::selection_G(M, spec), teg::selection_G_dense(M, spec), 1e-12);
    }
  }
  for (int N = 1; N <= 4; ++N) {
    const auto spec = TegSpec::schrodinger(N, 1.0);
    for (std::int64_t M = 0; M < spec.path_count(); ++M) {
      check_poly_close(teg::selection_G(M, spec), teg::selection_G_dense(M, spec), 1e-12);
    }
  }
  std::mt19937_64 rng(11);
  for (int N = 5; N <= 6; ++N) {
    const auto spec = TegSpec::schrodinger(N, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
      const std::int64_t M = std::uniform_int_distribution<std::int64_t>(0, spec.path_count() - 1)(rng);
      check_poly_close(teg::selection_G(M, spec), teg::selection_G_dense(M, spec), 1e-12);
    }
  }
}

TEST_CASE("prefactors") {
  const auto s = TegSpec::schrodinger(2, 1.0);
  CHECK(teg::prefactor_C(0, s) == Complex(1.0, -2.0) * Complex(1.0, -2.0));
  CHECK(teg::prefactor_C(4, s) == Complex(-1.0));
  const auto d = TegSpec::diffusion(7, 1.0);
  for (std::int64_t M = 0; M < d.path_count(); ++M) CHECK(teg::prefactor_C(M, d) == Complex(std::ldexp(1.0, -7)));
}

TEST_CASE("property: prefactors via csi and completeness") {
  for (int N = 1; N <= 6; ++N) {
    for (const auto& spec : {TegSpec::diffusion(N, 1.0), TegSpec::schrodinger(N, 1.0)}) {
      for (std::int64_t M = 0; M < spec.path_count(); ++M) {
        CHECK(std::abs(teg::prefactor_C(M, spec) - teg::prefactor_C_csi(M, spec)) < 1e-12);
      }
    }
  }
  for (int N = 1; N <= 10; ++N) {
    for (const auto& spec : {TegSpec::diffusion(N, 1.0), TegSpec::schrodinger(N, 1.0)}) {
      Complex sum = 0.0;
      for (std::int64_t M = 0; M < spec.path_count(); ++M) sum += teg::prefactor_C(M, spec);
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("exponent_E") {
  const auto spec = TegSpec::diffusion(5, 1.0);
  const double x0[1] = {0.0};
  for (std::int64_t M = 0; M < 32; ++M) CHECK(teg::exponent_E(M, spec, dsl::Field(), x0) == Complex(1.0));
  const auto c = dsl::Field::constant(0.7);
  CHECK(std::abs(teg::exponent_E(3, spec, c, x0) - std::exp(0.7)) < 1e-14);
  const auto s = TegSpec::schrodinger(4, 2.0);
  CHECK(std::abs(teg::exponent_E(17, s, c, x0) - std::exp(Complex(0.0, -1.4))) < 1e-14);
  // V = x along the upper golden path
  const auto vx = dsl::Field::parse("x");
  CHECK(teg::exponent_E(11, spec, vx, x0).real() == doctest::Approx(1.5569345755677463).epsilon(1e-14));
  // time argument is T - (k - 1) t at step k: with V = t only the schedule matters
  const auto vt = dsl::Field::parse("t");
  CHECK(teg::exponent_E(0, spec, vt, x0).real() == doctest::Approx(std::exp(0.2 * (1.0 + 0.8 + 0.6 + 0.4 + 0.2))));
  const auto bad = dsl::Field::parse("1/x");
  CHECK_THROWS_AS(teg::exponent_E(0, TegSpec::diffusion(2, 1.0), bad, std::vector<double>{std::sqrt(0.25)}),
                  EvaluationError);
}

TEST_CASE("property: exponent_E through the gamma integral") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const auto V = dsl::Field::parse("0.3*x^2-sin(x)*t");
  for (const auto& spec : {TegSpec::diffusion(6, 0.8), TegSpec::schrodinger(5, 1.3)}) {
    for (int trial = 0; trial < 40; ++trial) {
      const std::int64_t M = std::uniform_int_distribution<std::int64_t>(0, spec.path_count() - 1)(rng);
      const double x[1] = {u(rng)};
      const Complex a = teg::exponent_E(M, spec, V, x);
      CHECK(std::abs(a - teg::exponent_E_csi(M, spec, V, x)) <= 1e-13 * std::abs(a));
    }
  }
}
