#pragma once

// Base-b digits of non-negative integers, plus the selection-integral
// formulas that recover them. Digits are stored least-significant first.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "teglab/csi.hpp"

namespace teglab::base {

struct BaseRepresentation {
  std::int64_t base = 2;
  /// a_0 .. a_l, least significant first; empty for zero.
  std::vector<std::int64_t> digits;
};

/// Canonical digits by repeated Euclidean division. Throws InvalidArgument
/// for b < 2 or M < 0.
BaseRepresentation digits_euclid(std::int64_t M, std::int64_t base);

/// sum a_m b^m. Throws InvalidArgument on a digit outside [0, b) and
/// OverflowError if the value does not fit in 63 bits.
std::int64_t recompose(const BaseRepresentation& r);

/// Digits of M+1 from the digits of M using the carry rule of the existence
/// proof: trailing (b-1) digits reset to zero and the first smaller digit
/// increments, or the representation grows by one digit.
BaseRepresentation increment(const BaseRepresentation& r);

/// b^e with overflow checking.
std::int64_t checked_pow(std::int64_t base, int exponent);

/// Factor table A_n(k) for positions n = 0..N and digits k = 1..b-1.
/// A_n(0) is fixed to 1 and never queried.
using FactorTable = std::function<std::complex<double>(int n, std::int64_t k)>;

/// Coefficient of z^M in prod_{n=0}^{N} [1 + sum_{k=1}^{b-1} A_n(k) z^{k b^n}],
/// read off the digits of M (one factor per digit). Zero when M >= b^{N+1}.
std::complex<double> selection_product(std::int64_t M, std::int64_t base, int N, const FactorTable& factors);

/// The same coefficient by sparse expansion in the CSI engine; a validator
/// for selection_product.
std::complex<double> selection_product_csi(std::int64_t M, std::int64_t base, int N, const FactorTable& factors);

enum class DigitMethod {
  /// Coefficient of theta^M phi^{2^m} in
  /// prod_{n=0}^{N} [1 + sum_k (1 + k e^{i 2^n phi}) e^{i k b^n theta}].
  exact_csi,
  /// Digit lookup through digits_euclid.
  digit_filtered,
};

/// a_m(b, M) for the representation length N; zero for every m when
/// M >= b^{N+1} and for m > N.
std::int64_t digit_csi(std::int64_t M, std::int64_t base, int m, int N,
                       DigitMethod method = DigitMethod::exact_csi);

/// The full two-variable digit-selection polynomial for one (b, N), expanded
/// once so every (M, m) query is a coefficient lookup.
class DigitCsiTable {
 public:
  /// Throws GuardError if the expansion would exceed `max_terms` terms.
  DigitCsiTable(std::int64_t base, int N, std::size_t max_terms = 4'000'000);

  std::int64_t base() const noexcept { return base_; }
  int length() const noexcept { return N_; }
  std::size_t term_count() const noexcept { return poly_.size(); }

  /// Raw coefficient before rounding to an integer.
  std::complex<double> raw(std::int64_t M, int m) const;
  std::int64_t digit(std::int64_t M, int m) const;

 private:
  std::int64_t base_;
  int N_;
  csi::LaurentPoly poly_;  // variables (theta, phi)
};

}  // namespace teglab::base
