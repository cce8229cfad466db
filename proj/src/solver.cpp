#include "teglab/solver.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "parallel.hpp"
#include "teglab/errors.hpp"

namespace teglab::solver {
namespace {

constexpr int kDefaultPointCount = 11;

Complex solve_point(const SolveConfig& config, const teg::TegSpec& spec, const Point& x) {
  switch (config.method) {
    case Method::compact_enumerate:
      return prop::enumerate_paths(config.initial, x, spec, config.potential, config.precision);
    case Method::lattice_dp: return prop::evolve(config.initial, x, spec, config.potential, config.precision);
    case Method::binomial_closed_form: return binomial_closed_form(config.initial, x[0], config.N, config.T);
  }
  throw InvalidArgument("unknown solve method");
}

QuadratureRule build_gauss_hermite(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(k / 2.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = eig.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = std::sqrt(std::numbers::pi) * v0 * v0;
  }
  // the rule is symmetric about 0; enforce it exactly
  for (int i = 0; i < n / 2; ++i) {
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(n - 1 - i);
    const double x = 0.5 * (rule.nodes[b] - rule.nodes[a]);
    const double w = 0.5 * (rule.weights[a] + rule.weights[b]);
    rule.nodes[a] = -x;
    rule.nodes[b] = x;
    rule.weights[a] = rule.weights[b] = w;
  }
  return rule;
}

void require_increasing(std::span<const int> Ns) {
  if (Ns.empty()) throw InvalidArgument("convergence_study: empty N list");
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] < 1) throw InvalidArgument("convergence_study: N must be positive");
    if (i > 0 && Ns[i] <= Ns[i - 1]) throw InvalidArgument("convergence_study: N list must be strictly increasing");
  }
}

}  // namespace

std::vector<Point> default_points(int K) {
  if (K < 1 || K > 3) throw InvalidArgument("default_points: dimension must be 1, 2 or 3");
  std::vector<Point> points;
  for (int i = 0; i < kDefaultPointCount; ++i) {
    const double x = -2.0 + 4.0 * i / (kDefaultPointCount - 1);
    points.emplace_back(static_cast<std::size_t>(K), x);
  }
  return points;
}

teg::TegSpec make_spec(const SolveConfig& config) {
  if (config.kind.equation == teg::Equation::diffusion) {
    if (config.kind.dimension != 1) throw InvalidArgument("the diffusion equation is one-dimensional");
    return teg::TegSpec::diffusion(config.N, config.T);
  }
  return teg::TegSpec::schrodinger(config.N, config.T, config.kind.dimension);
}

void validate(const SolveConfig& config) {
  const int K = config.kind.dimension;
  if (K < 1 || K > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
  if (config.N < 1) throw InvalidArgument("N must be at least 1");
  if (!std::isfinite(config.T) || config.T < 0) throw InvalidArgument("T must be finite and non-negative");
  if (config.potential.dimension() != K) throw InvalidArgument("potential dimension differs from K");
  if (config.initial.dimension() != K) throw InvalidArgument("initial data dimension differs from K");
  for (const Point& p : config.points) {
    if (static_cast<int>(p.size()) != K) throw InvalidArgument("evaluation point dimension differs from K");
    for (double v : p) {
      if (!std::isfinite(v)) throw InvalidArgument("evaluation points must be finite");
    }
  }
  if (config.method == Method::binomial_closed_form &&
      (config.kind.equation != teg::Equation::diffusion || K != 1 || !config.potential.is_zero())) {
    throw InvalidArgument("binomial_closed_form requires one-dimensional diffusion with V = 0");
  }
  (void)make_spec(config);
}

std::vector<Complex> solve(const SolveConfig& config) {
  validate(config);
  const teg::TegSpec spec = make_spec(config);
  const std::vector<Point> points = config.points.empty() ? default_points(config.kind.dimension) : config.points;
  std::vector<Complex> out(points.size());
  parallel::parallel_for(points.size(), [&](std::size_t i) { out[i] = solve_point(config, spec, points[i]); });
  return out;
}

Complex binomial_closed_form(const dsl::ComplexField& initial, double x, int N, double T) {
  if (N < 1) throw InvalidArgument("binomial_closed_form: N must be at least 1");
  if (!std::isfinite(T) || T < 0) throw InvalidArgument("binomial_closed_form: T must be finite and >= 0");
  const double point0[1] = {x};
  if (T == 0.0) return initial(point0);
  const double tau = std::sqrt(T / (2.0 * N));
  Complex sum = 0.0;
  const bool direct = N <= 1000;
  double w = std::ldexp(1.0, -N);
  for (int k = 0; k <= N; ++k) {
    const double weight =
        direct ? w
               : std::exp(std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0) - N * std::numbers::ln2);
    const double point[1] = {x + (N - 2 * k) * tau};
    sum += weight * initial(point);
    w = w * (N - k) / (k + 1);
  }
  return sum;
}

const QuadratureRule& gauss_hermite_64() {
  static const QuadratureRule rule = build_gauss_hermite(64);
  return rule;
}

Complex free_solution_continuous(const dsl::ComplexField& initial, double x, double T) {
  if (!std::isfinite(T) || T < 0) throw InvalidArgument("free_solution_continuous: T must be finite and >= 0");
  const double point0[1] = {x};
  if (T == 0.0) return initial(point0);
  const QuadratureRule& rule = gauss_hermite_64();
  const double s = std::sqrt(T);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double point[1] = {x + rule.nodes[i] * s};
    sum += rule.weights[i] * initial(point);
  }
  return sum / std::sqrt(std::numbers::pi);
}

double binomial(int N, int k) {
  if (N < 0 || k < 0 || k > N) throw InvalidArgument("binomial: need 0 <= k <= N");
  k = std::min(k, N - k);
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * (N - k + j) / j;
  return c < 0x1p53 ? std::round(c) : c;
}

double demoivre_weight(int N, int k) {
  if (N < 1 || k < 0 || k > N) throw InvalidArgument("demoivre_weight: need N >= 1 and 0 <= k <= N");
  const double d = k - N / 2.0;
  const double log_w = N * std::numbers::ln2 - 0.5 * std::log(std::numbers::pi * N / 2.0) - 2.0 * d * d / N;
  return std::exp(log_w);
}

std::vector<ConvergenceRow> convergence_study(const SolveConfig& config, std::span<const int> Ns,
                                              const ConvergenceOptions& options, ReferenceReport* report) {
  require_increasing(Ns);
  SolveConfig trial = config;
  trial.N = Ns.front();
  validate(trial);
  const std::vector<Point> points = config.points.empty() ? default_points(config.kind.dimension) : config.points;
  trial.points = points;

  std::vector<Complex> reference(points.size());
  ReferenceReport diagnostics;
  switch (options.reference) {
    case Reference::closed_form:
      if (options.exact.dimension() != config.kind.dimension) {
        throw InvalidArgument("closed-form reference dimension differs from K");
      }
      for (std::size_t i = 0; i < points.size(); ++i) {
        reference[i] = {options.exact.re(points[i], config.T), options.exact.im(points[i], config.T)};
      }
      break;
    case Reference::gaussian_integral:
      if (config.kind.equation != teg::Equation::diffusion || !config.potential.is_zero()) {
        throw InvalidArgument("the Gaussian-integral reference applies to diffusion with V = 0 only");
      }
      for (std::size_t i = 0; i < points.size(); ++i) {
        reference[i] = free_solution_continuous(config.initial, points[i][0], config.T);
      }
      break;
    case Reference::matrix_exponential: {
      if (config.kind.dimension != 1) throw InvalidArgument("the matrix-exponential reference is one-dimensional");
      if (config.T == 0.0) {
        for (std::size_t i = 0; i < points.size(); ++i) reference[i] = config.initial(points[i]);
        break;
      }
      const ref::GridFunction g = ref::matrix_exponential_solve(config.kind.equation, config.potential, config.initial,
                                                                config.T, options.substeps, options.grid);
      diagnostics.boundary_amplitude = g.boundary_amplitude();
      diagnostics.underresolved = g.underresolved();
      for (std::size_t i = 0; i < points.size(); ++i) reference[i] = g(points[i][0]);
      break;
    }
  }
  if (report != nullptr) *report = diagnostics;

  std::vector<ConvergenceRow> rows;
  for (int N : Ns) {
    trial.N = N;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Complex> values = solve(trial);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    double error = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) error = std::max(error, std::abs(values[i] - reference[i]));
    rows.push_back({N, error, elapsed});
  }
  return rows;
}

}  // namespace teglab::solver
