#pragma once

// Discrete compact-form solutions Phi_N(x, T) = sum_M C_M E_M Phi_0(x + S_M tau),
// the V = 0 closed forms, and convergence studies against references.

#include <complex>
#include <span>
#include <vector>

#include "teglab/potential.hpp"
#include "teglab/propagators.hpp"
#include "teglab/reference.hpp"
#include "teglab/teg.hpp"

namespace teglab::solver {

using Complex = std::complex<double>;
using Point = std::vector<double>;

enum class Method { compact_enumerate, lattice_dp, binomial_closed_form };

struct SolveConfig {
  teg::EquationKind kind{};
  double T = 1.0;
  int N = 8;
  dsl::Field potential;
  dsl::ComplexField initial;
  /// Empty selects default_points(kind.dimension).
  std::vector<Point> points;
  Method method = Method::lattice_dp;
  prop::Precision precision = prop::Precision::automatic;
};

/// 11 uniform points on [-2, 2]; along the diagonal x_1 = ... = x_K for K > 1.
std::vector<Point> default_points(int K);

/// The spec the configuration discretizes with.
teg::TegSpec make_spec(const SolveConfig& config);

/// Throws InvalidArgument on dimension mismatches, and when the binomial
/// closed form is requested for anything but one-dimensional diffusion with V = 0.
void validate(const SolveConfig& config);

/// Phi_N at every evaluation point, in point order. Points are processed in
/// parallel (TEG_THREADS caps the workers); results do not depend on the count.
std::vector<Complex> solve(const SolveConfig& config);

/// 2^{-N} sum_k C(N, k) Phi_0(x + (N - 2k) tau).
Complex binomial_closed_form(const dsl::ComplexField& initial, double x, int N, double T);

/// (1 / sqrt(pi)) int e^{-y^2} Phi_0(x + y sqrt(T)) dy by 64-point Gauss-Hermite.
Complex free_solution_continuous(const dsl::ComplexField& initial, double x, double T);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for weight e^{-y^2} (Golub-Welsch), nodes ascending.
const QuadratureRule& gauss_hermite_64();

/// C(N, k) as a double.
double binomial(int N, int k);

/// de Moivre: 2^N / sqrt(pi N / 2) exp[-(2/N)(k - N/2)^2]. Infinite past double range.
double demoivre_weight(int N, int k);

enum class Reference {
  /// An exact solution given as an expression in (x, t), evaluated at t = T.
  closed_form,
  /// free_solution_continuous; diffusion with V = 0 only.
  gaussian_integral,
  /// ref::matrix_exponential_solve.
  matrix_exponential,
};

struct ConvergenceOptions {
  Reference reference = Reference::matrix_exponential;
  /// Exact solution for Reference::closed_form.
  dsl::ComplexField exact;
  ref::GridSpec grid{};
  int substeps = 256;
};

struct ConvergenceRow {
  int N;
  /// max over evaluation points of |Phi_N - reference|.
  double error;
  double runtime_s;
};

struct ReferenceReport {
  /// Grid boundary amplitude of the matrix-exponential reference (0 otherwise).
  double boundary_amplitude = 0.0;
  bool underresolved = false;
};

/// One row per N (strictly increasing), each solving `config` with that N.
/// The reference is computed once; `report`, if given, receives its diagnostics.
std::vector<ConvergenceRow> convergence_study(const SolveConfig& config, std::span<const int> Ns,
                                              const ConvergenceOptions& options, ReferenceReport* report = nullptr);

}  // namespace teglab::solver
