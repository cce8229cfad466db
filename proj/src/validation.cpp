#include "teglab/validation.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>

#include "teglab/base_repr.hpp"
#include "teglab/csi.hpp"
#include "teglab/errors.hpp"
#include "teglab/propagators.hpp"
#include "teglab/reference.hpp"
#include "teglab/solver.hpp"
#include "teglab/teg.hpp"

namespace teglab::validation {
namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// A random potential in the expression language with two-decimal constants.
std::string random_potential(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-150, 150);
  std::uniform_int_distribution<int> width(20, 200);
  std::uniform_int_distribution<int> kind(0, 2);
  auto c = [&] { return fmt("%.2f", coef(rng) / 100.0); };
  switch (kind(rng)) {
    case 0: return c() + " + " + c() + "*x + " + c() + "*x^2";
    case 1: return c() + "*exp(-" + fmt("%.2f", width(rng) / 100.0) + "*x^2)";
    default: return c() + "*x^2*cos(t) + " + c() + "*x";
  }
}

SuiteResult csi_vs_quadrature() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> exp_dist(-6, 6);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t arity = 1 + static_cast<std::size_t>(trial % 2);
    std::vector<csi::Term> terms;
    for (int j = 0; j < 8; ++j) {
      csi::ExponentVec e(arity);
      for (auto& v : e) v = exp_dist(rng);
      terms.push_back({e, {val(rng), val(rng)}});
    }
    const csi::LaurentPoly p = csi::LaurentPoly::from_terms(arity, terms);
    const csi::ExponentVec target = terms[static_cast<std::size_t>(trial) % terms.size()].exponents;
    const csi::Coefficient exact = csi::coeff(p, target);
    const csi::Coefficient quad = csi::quadrature_coeff(p, target, csi::minimum_samples(p, target));
    worst = std::max(worst, std::abs(exact - quad) / std::max(1.0, std::abs(exact)));
  }
  return {"csi_vs_quadrature", worst <= 1e-10, fmt("50 polynomials, worst relative gap %.3g", worst)};
}

SuiteResult digits() {
  int mismatches = 0;
  int checked = 0;
  for (std::int64_t b : {2, 3, 5}) {
    const int N = b == 2 ? 6 : 3;
    const base::DigitCsiTable table(b, N);
    const std::int64_t limit = base::checked_pow(b, N + 1);
    for (std::int64_t M = 0; M < limit; ++M) {
      const auto euclid = base::digits_euclid(M, b).digits;
      for (int m = 0; m <= N; ++m) {
        const std::int64_t expect = static_cast<std::size_t>(m) < euclid.size() ? euclid[static_cast<std::size_t>(m)] : 0;
        ++checked;
        if (table.digit(M, m) != expect) ++mismatches;
      }
    }
  }
  return {"digit_extraction", mismatches == 0, fmt("%g digit positions, %g mismatches", checked, mismatches)};
}

SuiteResult golden_paths() {
  const teg::TegSpec spec = teg::TegSpec::diffusion(5, 1.0);
  const teg::Path up = teg::path_from_index(11, spec);
  const teg::Path low = teg::path_from_index(26, spec);
  const std::vector<int> up_moves{1, 1, 0, 1, 0};
  const std::vector<int> low_moves{0, 1, 0, 1, 1};
  const std::vector<teg::Shift> up_shifts{{1}, {2}, {1}, {2}, {1}};
  const std::vector<teg::Shift> low_shifts{{-1}, {0}, {-1}, {0}, {1}};
  bool ok = up.moves == up_moves && low.moves == low_moves && up.prefix_shifts == up_shifts &&
            low.prefix_shifts == low_shifts;
  for (int k = 1; k <= 5; ++k) {
    ok = ok && teg::lambda_k_csi(11, k, spec) == up_shifts[static_cast<std::size_t>(k - 1)] &&
         teg::lambda_k_csi(26, k, spec) == low_shifts[static_cast<std::size_t>(k - 1)];
  }
  return {"golden_paths", ok, "M = 11 -> 11010 (1,2,1,2,1); M = 26 -> 01011 (-1,0,-1,0,1)"};
}

SuiteResult path_counts() {
  bool ok = true;
  for (int N = 1; N <= 12; ++N) {
    const teg::TegSpec spec = teg::TegSpec::diffusion(N, 1.0);
    std::map<std::int64_t, double> counts;
    for (std::int64_t M = 0; M < spec.path_count(); ++M) counts[teg::path_from_index(M, spec).terminal[0]] += 1;
    for (int s = -N; s <= N; ++s) {
      const double expect = (N - s) % 2 == 0 ? solver::binomial(N, (N - s) / 2) : 0.0;
      const auto it = counts.find(s);
      ok = ok && (it == counts.end() ? 0.0 : it->second) == expect;
    }
  }
  return {"path_counts", ok, "#{M : S_M = s} = C(N, (N - s)/2) for N <= 12"};
}

SuiteResult prefactor_completeness() {
  double worst = 0.0;
  for (int N = 1; N <= 8; ++N) {
    for (const teg::TegSpec& spec : {teg::TegSpec::diffusion(N, 1.0), teg::TegSpec::schrodinger(N, 1.0)}) {
      std::complex<double> sum = 0.0;
      for (std::int64_t M = 0; M < spec.path_count(); ++M) sum += teg::prefactor_C(M, spec);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  return {"prefactor_completeness", worst <= 1e-12, fmt("|sum C_M - 1| <= %.3g for b in {2,3}, N <= 8", worst)};
}

SuiteResult enumerate_vs_dp() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> xdist(-1.5, 1.5);
  double worst = 0.0;
  const dsl::ComplexField initial(dsl::Field::parse("exp(-x^2)*(1 + 0.3*x)"));
  for (int trial = 0; trial < 12; ++trial) {
    const bool tdse = trial % 3 == 2;
    const int N = tdse ? 2 + trial % 4 : 3 + trial % 5;
    const teg::TegSpec spec = tdse ? teg::TegSpec::schrodinger(N, 0.8) : teg::TegSpec::diffusion(N, 0.8);
    const dsl::Field V = dsl::Field::parse(random_potential(rng));
    const double x[1] = {xdist(rng)};
    const auto dp = prop::evolve(initial, x, spec, V);
    const auto en = prop::enumerate_paths(initial, x, spec, V);
    worst = std::max(worst, std::abs(dp - en) / (1.0 + std::abs(dp)));
  }
  return {"enumerate_vs_dp", worst <= 1e-10, fmt("12 random configurations, worst relative gap %.3g", worst)};
}

SuiteResult closed_form() {
  const dsl::ComplexField quad(dsl::Field::parse("x^2"));
  const dsl::ComplexField gauss(dsl::Field::parse("exp(-x^2)"));
  double worst = 0.0;
  for (int N : {1, 2, 7, 16, 30}) {
    const teg::TegSpec spec = teg::TegSpec::diffusion(N, 1.3);
    for (double x : {-1.0, 0.25, 1.5}) {
      const double p[1] = {x};
      const auto v = prop::evolve(quad, p, spec, dsl::Field());
      worst = std::max(worst, std::abs(v - (x * x + 0.65)));
      const auto g = prop::evolve(gauss, p, spec, dsl::Field());
      worst = std::max(worst, std::abs(g - solver::binomial_closed_form(gauss, x, N, 1.3)));
    }
  }
  return {"v0_closed_form", worst <= 1e-12, fmt("lattice DP vs binomial sum and x^2 + T/2, worst %.3g", worst)};
}

SuiteResult asymptotics() {
  const double exact = 100891344545564193334812497256.0;
  const double dm = std::abs(solver::demoivre_weight(100, 50) - exact) / exact;
  bool ok = dm < 0.005 && std::abs(ref::stirling_ratio(20) - 1.0) < 0.005;
  for (int N = 1; N <= 170; ++N) {
    const double r = ref::stirling_ratio(N);
    ok = ok && r > 1.0 && r < std::exp(1.0 / (12.0 * N));
  }
  const auto f = ref::csi_factorial_integrand_check(10, 10.0);
  ok = ok && f.rel_error <= 1e-8;
  return {"asymptotics", ok, fmt("de Moivre rel err %.4f, Stirling ratio(20) %.6f", dm, ref::stirling_ratio(20))};
}

}  // namespace

std::vector<SuiteResult> run_all() {
  const std::vector<std::function<SuiteResult()>> suites{csi_vs_quadrature, digits,          golden_paths,
                                                         path_counts,       prefactor_completeness,
                                                         enumerate_vs_dp,   closed_form,     asymptotics};
  std::vector<SuiteResult> results;
  for (const auto& suite : suites) {
    try {
      results.push_back(suite());
    } catch (const std::exception& e) {
      results.push_back({"<suite raised>", false, e.what()});
    }
  }
  return results;
}

}  // namespace teglab::validation
