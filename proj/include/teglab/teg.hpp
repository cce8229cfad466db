#pragma once

// Translation Evolution Grid: the (step, shift) lattice on which a product of
// N single-step propagators expands into b^N weighted paths.
//
// Path M moves by digit a_{k-1}(b, M) at step k (least significant digit
// first). Step k = 1 belongs to the outermost propagator P_N, so it samples
// the potential at time (N - k + 1) t = T - (k - 1) t.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "teglab/csi.hpp"
#include "teglab/potential.hpp"

namespace teglab::teg {

using Complex = std::complex<double>;
using Shift = std::vector<std::int64_t>;

enum class Equation { diffusion, schrodinger };

struct EquationKind {
  Equation equation = Equation::diffusion;
  int dimension = 1;
};

struct Move {
  Complex weight;
  Shift displacement;
};

class TegSpec {
 public:
  /// Throws InvalidArgument unless b >= 2, N >= 1, T >= 0 (finite) and every
  /// displacement has `kind.dimension` components.
  TegSpec(std::vector<Move> moves, int N, double T, EquationKind kind);

  /// b = 2: codes (0, 1) step (-1, +1) with weights (1/2, 1/2).
  static TegSpec diffusion(int N, double T);
  /// b = 2K + 1: code 0 stays with weight 1 - 2iK; codes 2i-1 / 2i step
  /// +e_i / -e_i with weight i.
  static TegSpec schrodinger(int N, double T, int K = 1);

  int order() const noexcept { return static_cast<int>(moves_.size()); }
  int slices() const noexcept { return N_; }
  int dimension() const noexcept { return kind_.dimension; }
  EquationKind kind() const noexcept { return kind_; }
  double total_time() const noexcept { return T_; }
  /// t = T / N.
  double step_time() const noexcept { return T_ / N_; }
  /// tau = sqrt(T / (2N)).
  double spacing() const;
  const std::vector<Move>& moves() const noexcept { return moves_; }
  const Move& move(std::int64_t code) const;

  /// Factor multiplying t V in the exponent: +1 (diffusion) or -i.
  Complex potential_sign() const noexcept;
  /// sum |w| / |sum w|; 1 for stencils without cancellation.
  double weight_growth() const;
  /// max over moves of |displacement|_inf.
  std::int64_t reach() const;
  /// b^N. Throws OverflowError past 63 bits.
  std::int64_t path_count() const;

 private:
  std::vector<Move> moves_;
  int N_;
  double T_;
  EquationKind kind_;
};

struct Path {
  std::int64_t index = 0;
  /// Move code per step, step 1 first.
  std::vector<int> moves;
  /// s_1 .. s_N, with s_k the displacement after k moves.
  std::vector<Shift> prefix_shifts;
  /// S_M = s_N.
  Shift terminal;
};

/// Throws InvalidArgument if M is outside [0, b^N).
Path path_from_index(std::int64_t M, const TegSpec& spec);

/// s_k for 1 <= k <= N (s_0 = 0 is accepted too).
Shift lambda_k(std::int64_t M, int k, const TegSpec& spec);

/// The same shift read from the phi^{2^k - 1} coefficient of the selection
/// function, whose gamma exponent is -s_k. Validator; N <= 8.
Shift lambda_k_csi(std::int64_t M, int k, const TegSpec& spec);

/// Selection function in (phi, gamma_1..gamma_K): the coefficient of theta^M
/// in prod_n [F_0(n) + sum_k F_k(n) e^{i k b^n theta}] with
/// F_c(n) = 1 + e^{-i d_c.gamma} e^{i 2^n phi}, taken digit by digit.
/// Throws GuardError for N > 8.
csi::LaurentPoly selection_G(std::int64_t M, const TegSpec& spec);

/// Same polynomial by dense expansion of the full product. Validator; N <= 6.
csi::LaurentPoly selection_G_dense(std::int64_t M, const TegSpec& spec);

/// C_M: product of the move weights selected by the digits of M.
Complex prefactor_C(std::int64_t M, const TegSpec& spec);

/// C_M as the theta^M coefficient of prod_n sum_c w_c e^{i c b^n theta}.
Complex prefactor_C_csi(std::int64_t M, const TegSpec& spec);

/// E_M = exp[sign t sum_k V(x + s_k tau, T - (k - 1) t)]. Throws
/// EvaluationError if V is non-finite at a sampled point.
Complex exponent_E(std::int64_t M, const TegSpec& spec, const dsl::Field& V, std::span<const double> x);

/// E_M with each s_k extracted through the gamma integral of Lambda_k.
/// Validator; N <= 8.
Complex exponent_E_csi(std::int64_t M, const TegSpec& spec, const dsl::Field& V, std::span<const double> x);

/// S_M from the theta^M slice of prod_n sum_c e^{-i d_c.gamma} e^{i c b^n theta}
/// for N <= 8, by digit sum beyond.
Shift shift_csi(std::int64_t M, const TegSpec& spec);

}  // namespace teglab::teg
