// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <unistd.h>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "teglab/base_repr.hpp"
#include "teglab/csi.hpp"
#include "teglab/propagators.hpp"
#include "teglab/reference.hpp"
#include "teglab/solver.hpp"
#include "teglab/teg.hpp"

#ifndef TEGLAB_CLI_PATH
#error "TEGLAB_CLI_PATH must name the teglab executable"
#endif

namespace {

using namespace teglab;
using Complex = std::complex<double>;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. CSI digit extraction equals Euclidean division on the full range.
Outcome digits() {
  const auto start = Clock::now();
  long checked = 0;
  for (std::int64_t b : {2, 3, 4, 5}) {
    for (int N = 0; N <= 8; ++N) {
      const std::int64_t limit = base::checked_pow(b, N + 1);
      if (limit > 6561) break;
      const base::DigitCsiTable table(b, N);
      for (std::int64_t M = 0; M < limit; ++M) {
        const auto want = base::digits_euclid(M, b).digits;
        for (int m = 0; m <= N; ++m) {
          const auto raw = table.raw(M, m);
          const std::int64_t euclid = static_cast<std::size_t>(m) < want.size() ? want[static_cast<std::size_t>(m)] : 0;
          const double rounding = std::abs(raw - std::round(raw.real()));
          if (rounding > 1e-6 || table.digit(M, m) != euclid) {
            return {false, "b=" + std::to_string(b) + " N=" + std::to_string(N) + " M=" + std::to_string(M) +
                               " m=" + std::to_string(m)};
          }
          ++checked;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {elapsed < 60.0, std::to_string(checked) + " digits, " + fmt("%.2f s", elapsed)};
}

// 2. Golden paths M = 11 and M = 26 at N = 5.
Outcome golden() {
  const auto spec = teg::TegSpec::diffusion(5, 1.0);
  const auto p11 = teg::path_from_index(11, spec);
  const auto p26 = teg::path_from_index(26, spec);
  const bool ok = p11.moves == std::vector<int>{1, 1, 0, 1, 0} &&
                  p11.prefix_shifts == std::vector<teg::Shift>{{1}, {2}, {1}, {2}, {1}} &&
                  p26.moves == std::vector<int>{0, 1, 0, 1, 1} &&
                  p26.prefix_shifts == std::vector<teg::Shift>{{-1}, {0}, {-1}, {0}, {1}} &&
                  p11.terminal == teg::Shift{1} && p26.terminal == teg::Shift{1} &&
                  teg::shift_csi(11, spec) == teg::Shift{1} && teg::shift_csi(26, spec) == teg::Shift{1};
  return {ok, "M=11 -> 11010, M=26 -> 01011"};
}

// 3. Path enumeration equals lattice DP on random DSL configurations.
Outcome path_sum() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto num = [&](double lo, double hi) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", lo + (hi - lo) * 0.5 * (u(rng) + 1.0));
    return std::string(buf);
  };
  auto random_potential = [&]() -> std::string {
    switch (rng() % 3) {
      case 0: return num(-1, 1) + "*x^2+" + num(-1, 1) + "*x+" + num(-0.5, 0.5);
      case 1: return num(-2, 2) + "*exp(-(x-" + num(-1, 1) + ")^2/" + num(0.2, 2) + ")";
      default: return num(-0.5, 0.5) + "*x^4+" + num(-1, 1) + "*x^2*t+" + num(-1, 1) + "*exp(-x^2)";
    }
  };
  double worst = 0.0;
  int configs = 0;
  for (int b : {2, 3}) {
    const int count = b == 2 ? 50 : 20;
    for (int i = 0; i < count; ++i) {
      const int N = 1 + static_cast<int>(rng() % (b == 2 ? 8 : 6));
      const double T = 0.1 + 1.9 * 0.5 * (u(rng) + 1.0);
      const auto V = dsl::Field::parse(random_potential());
      const auto psi = dsl::ComplexField::parse("exp(-(x-" + num(-1, 1) + ")^2)", num(-1, 1) + "*x*exp(-x^2)");
      const double x[1] = {2.0 * u(rng)};
      const auto spec = b == 2 ? teg::TegSpec::diffusion(N, T) : teg::TegSpec::schrodinger(N, T);
      const Complex dp = prop::evolve(psi, x, spec, V);
      const Complex en = prop::enumerate_paths(psi, x, spec, V);
      worst = std::max(worst, std::abs(en - dp) / std::max(std::abs(dp), 1e-300));
      ++configs;
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-10 && elapsed < 120.0,
          std::to_string(configs) + " configs, max rel " + fmt("%.2e", worst) + ", " + fmt("%.2f s", elapsed)};
}

// 4. Prefactors sum to one; path counts by terminal shift are binomial.
Outcome completeness() {
  double worst = 0.0;
  for (int N = 1; N <= 12; ++N) {
    for (const auto& spec : {teg::TegSpec::diffusion(N, 1.0), teg::TegSpec::schrodinger(N, 1.0)}) {
      Complex sum = 0.0;
      for (std::int64_t M = 0; M < spec.path_count(); ++M) sum += teg::prefactor_C(M, spec);
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    const auto d = teg::TegSpec::diffusion(N, 1.0);
    std::map<std::int64_t, std::int64_t> counts;
    for (std::int64_t M = 0; M < d.path_count(); ++M) ++counts[teg::path_from_index(M, d).terminal[0]];
    for (int s = -N; s <= N; ++s) {
      const std::int64_t want = (N - s) % 2 == 0 ? static_cast<std::int64_t>(solver::binomial(N, (N - s) / 2)) : 0;
      if (counts[s] != want) return {false, "count mismatch N=" + std::to_string(N) + " s=" + std::to_string(s)};
    }
  }
  return {worst <= 1e-12, "max |sum C - 1| = " + fmt("%.2e", worst)};
}

// 5. V = 0 diffusion equals the binomial closed form; x^2 evolves to x^2 + T/2.
Outcome closed_form() {
  double worst = 0.0, worst_q = 0.0;
  const double T = 1.0;
  for (int N = 1; N <= 30; ++N) {
    solver::SolveConfig c;
    c.kind = {teg::Equation::diffusion, 1};
    c.N = N;
    c.T = T;
    c.initial = dsl::ComplexField::parse("exp(-x^2)*(1+0.3*sin(3*x))");
    const auto dp = solver::solve(c);
    const auto pts = solver::default_points(1);
    for (std::size_t i = 0; i < dp.size(); ++i) {
      worst = std::max(worst, std::abs(dp[i] - solver::binomial_closed_form(c.initial, pts[i][0], N, T)));
    }
    c.initial = dsl::ComplexField::parse("x^2");
    const auto q = solver::solve(c);
    for (std::size_t i = 0; i < q.size(); ++i) {
      worst_q = std::max(worst_q, std::abs(q[i] - (pts[i][0] * pts[i][0] + T / 2)));
    }
  }
  return {worst <= 1e-12 && worst_q <= 1e-12,
          "binomial " + fmt("%.2e", worst) + ", x^2+T/2 " + fmt("%.2e", worst_q)};
}

std::string ratios_text(const std::vector<solver::ConvergenceRow>& rows, bool& ok) {
  std::string text;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double r = rows[i - 1].error / rows[i].error;
    ok = ok && r >= 1.6 && r <= 2.4;
    text += (i > 1 ? "," : "") + fmt("%.3f", r);
  }
  return text;
}

// 6. Discrete diffusion converges to the Gaussian integral at first order.
Outcome diffusion_rate() {
  const auto start = Clock::now();
  solver::SolveConfig c;
  c.kind = {teg::Equation::diffusion, 1};
  c.T = 1.0;
  c.initial = dsl::ComplexField::parse("exp(-x^2)");
  solver::ConvergenceOptions o;
  o.reference = solver::Reference::gaussian_integral;
  const std::vector<int> Ns{16, 32, 64, 128};
  const auto rows = solver::convergence_study(c, Ns, o);
  bool ok = true;
  const std::string r = ratios_text(rows, ok);
  const double elapsed = seconds_since(start);
  return {ok && elapsed < 30.0, "ratios " + r + ", " + fmt("%.2f s", elapsed)};
}

// 7. Harmonic TDSE converges to the matrix-exponential reference at first order.
Outcome tdse_rate() {
  const auto start = Clock::now();
  solver::SolveConfig c;
  c.kind = {teg::Equation::schrodinger, 1};
  c.T = 1.0;
  c.potential = dsl::Field::parse("0.5*x^2");
  c.initial = dsl::ComplexField::parse("exp(-x^2)");
  solver::ConvergenceOptions o;
  o.reference = solver::Reference::matrix_exponential;
  solver::ReferenceReport report;
  const std::vector<int> Ns{32, 64, 128};
  const auto rows = solver::convergence_study(c, Ns, o, &report);
  bool ok = !report.underresolved;
  const std::string r = ratios_text(rows, ok);
  const double elapsed = seconds_since(start);
  return {ok && elapsed < 300.0, "ratios " + r + ", " + fmt("%.2f s", elapsed)};
}

// 8. de Moivre and Stirling.
Outcome asymptotics() {
  const double rel = std::abs(solver::demoivre_weight(100, 50) / solver::binomial(100, 50) - 1.0);
  const double r20 = ref::stirling_ratio(20);
  bool bracket = true;
  for (int N = 1; N <= 170; ++N) {
    const double r = ref::stirling_ratio(N);
    bracket = bracket && r > 1.0 && r < std::exp(1.0 / (12.0 * N));
  }
  return {rel < 0.005 && std::abs(r20 - 1.0) < 0.005 && bracket,
          "de Moivre rel " + fmt("%.5f", rel) + ", Stirling(20) " + fmt("%.6f", r20)};
}

// 9. Coefficient extraction equals periodic quadrature.
Outcome csi_equivalence() {
  std::mt19937_64 rng(9001);
  std::uniform_int_distribution<std::int64_t> ex(-50, 50);
  std::uniform_real_distribution<double> co(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t arity = 1 + static_cast<std::size_t>(i % 2);
    std::vector<csi::Term> terms;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int k = 0; k < n; ++k) {
      csi::ExponentVec e(arity);
      for (auto& v : e) v = arity == 1 ? ex(rng) : ex(rng) / 5;
      terms.push_back({e, {co(rng), co(rng)}});
    }
    const auto p = csi::LaurentPoly::from_terms(arity, terms);
    const csi::ExponentVec e = (i % 4 == 0) ? csi::ExponentVec(arity, 3) : terms[rng() % terms.size()].exponents;
    const Complex a = csi::coeff(p, e);
    const Complex q = csi::quadrature_coeff(p, e, csi::minimum_samples(p, e));
    worst = std::max(worst, std::abs(a - q) / (1.0 + std::abs(a)));
  }
  return {worst <= 1e-10, "200 polynomials, max rel " + fmt("%.2e", worst)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 10. Identical CLI invocations give byte-identical CSV, whatever TEG_THREADS is.
Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / ("teglab_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string cli = TEGLAB_CLI_PATH;
  const std::vector<std::string> commands{
      "solve --eq schrodinger --potential '0.5*x^2' --initial 'exp(-x^2)' --T 1 --N 40",
      "solve --eq diffusion --potential 'sin(x)*t' --initial 'cos(x)' --T 0.7 --N 60",
      "converge --eq diffusion --initial 'exp(-x^2)' --T 1 --Nlist 16,32,64 --reference gaussian_integral",
      "converge --eq schrodinger --potential '0.5*x^2' --initial 'exp(-x^2)' --T 1 --Nlist 8,16 "
      "--reference matrix_exponential",
  };
  const std::vector<std::string> envs{"", "", "TEG_THREADS=1 ", "TEG_THREADS=4 "};
  bool ok = true;
  std::string detail;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string first;
    for (std::size_t e = 0; e < envs.size(); ++e) {
      const auto out = dir / ("run_" + std::to_string(c) + "_" + std::to_string(e) + ".csv");
      const std::string cmd = envs[e] + "'" + cli + "' " + commands[c] + " --out '" + out.string() + "'";
      if (std::system(cmd.c_str()) != 0) {
        ok = false;
        detail = "command failed: " + cmd;
        break;
      }
      const std::string bytes = slurp(out);
      if (e == 0) {
        first = bytes;
        if (bytes.empty()) ok = false;
      } else if (bytes != first) {
        ok = false;
        detail = "output differs: " + commands[c] + " under '" + envs[e] + "'";
      }
    }
  }
  std::filesystem::remove_all(dir);
  if (detail.empty()) detail = std::to_string(commands.size()) + " commands x " + std::to_string(envs.size()) + " runs";
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"digit formula", digits},
      {"golden paths", golden},
      {"path-sum identity", path_sum},
      {"prefactor completeness", completeness},
      {"V=0 closed form", closed_form},
      {"diffusion first order", diffusion_rate},
      {"Schrodinger first order", tdse_rate},
      {"asymptotic identities", asymptotics},
      {"CSI vs quadrature", csi_equivalence},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %2d %-24s %s\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
