#pragma once

// First-order single-step propagators in translation form and the two exact
// evaluations of their N-fold product:
//
//   diffusion     P_n = 1/2 [T(+tau) + T(-tau)] exp[t V(x, n t)]
//   Schrodinger   P_n = [(1 - 2iK) + i sum_j (T_j(+tau) + T_j(-tau))] exp[-i t U(x, n t)]
//
// Phi_N(x) = P_N ... P_1 Phi_0 (x), P_1 applied first.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "teglab/potential.hpp"
#include "teglab/teg.hpp"

namespace teglab::prop {

using Complex = std::complex<double>;

/// Amplitudes on the box |s|_inf <= radius around `anchor`, points anchor + s tau.
class LatticeState {
 public:
  LatticeState(std::vector<double> anchor, double spacing, int radius);

  /// Unit amplitude at s = 0.
  static LatticeState delta(std::vector<double> anchor, double spacing);

  int dimension() const noexcept { return static_cast<int>(anchor_.size()); }
  int radius() const noexcept { return radius_; }
  const std::vector<double>& anchor() const noexcept { return anchor_; }
  double spacing() const noexcept { return spacing_; }

  /// Zero outside the box.
  Complex at(const teg::Shift& s) const;
  void set(const teg::Shift& s, Complex value);

  /// Number of box sites, (2 radius + 1)^K.
  std::size_t size() const noexcept { return values_.size(); }
  /// Shift of site `index` (first coordinate varies slowest).
  teg::Shift shift_of(std::size_t index) const;
  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }

  Complex sum() const;
  /// Largest |s|_inf carrying a nonzero amplitude; -1 if all are zero.
  int support_radius() const;

 private:
  std::size_t index_of(const teg::Shift& s) const;

  std::vector<double> anchor_;
  double spacing_;
  int radius_;
  std::vector<Complex> values_;
};

/// One application of P_n to samples on the lattice:
/// out(s) = sum_c w_c exp[sign t V(x + (s + d_c) tau, n t)] in(s + d_c).
/// The box grows by the stencil reach. Throws EvaluationError on a
/// non-finite potential value.
LatticeState step(const LatticeState& state, int n, const teg::TegSpec& spec, const dsl::Field& V);

enum class Precision {
  /// Widen the working precision until stencil cancellation is absorbed.
  automatic,
  /// IEEE double regardless of cancellation.
  native_double,
};

/// Decimal digits the lattice kernels run with for `spec` (16 for double).
int working_digits(const teg::TegSpec& spec, Precision precision = Precision::automatic);

/// Path weights w_s with Phi_N(x) = sum_s w_s Phi_0(x + s tau), built by
/// distributing amplitude from x through P_N, ..., P_1. Double precision.
LatticeState evolve_weights(std::span<const double> x, const teg::TegSpec& spec, const dsl::Field& V);

/// Phi_N(x) by lattice dynamic programming, O(N (2N+1)^K). Fields must be
/// expression-backed when the working precision exceeds double.
Complex evolve(const dsl::ComplexField& initial, std::span<const double> x, const teg::TegSpec& spec,
               const dsl::Field& V, Precision precision = Precision::automatic);

/// Phi_N(x) = sum_M C_M E_M Phi_0(x + S_M tau) over all b^N paths in
/// ascending M. Throws GuardError when b^N > 1e7.
Complex enumerate_paths(const dsl::ComplexField& initial, std::span<const double> x, const teg::TegSpec& spec,
                        const dsl::Field& V, Precision precision = Precision::automatic);

/// Largest b^N accepted by enumerate_paths.
inline constexpr std::int64_t kEnumerationLimit = 10'000'000;

}  // namespace teglab::prop
