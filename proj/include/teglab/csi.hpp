#pragma once

// Sparse multivariate Laurent polynomials over complex doubles.
//
// A monomial exponent k in variable Y stands for e^{ikY} on the torus
// [-pi, pi)^V, so the normalized torus integral of p * e^{-i e.Y} is exactly
// the coefficient of e in p. Every selection integral in the library is
// evaluated that way; `quadrature_coeff` exists only to cross-check it.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace teglab::csi {

using Coefficient = std::complex<double>;
using ExponentVec = std::vector<std::int64_t>;

struct Term {
  ExponentVec exponents;
  Coefficient value;
};

class LaurentPoly {
 public:
  /// Zero polynomial in `arity` variables. Coefficients with magnitude below
  /// `prune_threshold` (and exact zeros) are never stored.
  explicit LaurentPoly(std::size_t arity, double prune_threshold = 0.0);

  static LaurentPoly constant(std::size_t arity, Coefficient value);
  static LaurentPoly monomial(ExponentVec exponents, Coefficient value = 1.0);
  /// Builds a polynomial from unsorted terms; repeated exponents are summed.
  static LaurentPoly from_terms(std::size_t arity, std::vector<Term> terms, double prune_threshold = 0.0);
  /// Single-variable polynomial sum_k coeffs[k] z^k.
  static LaurentPoly univariate(std::span<const Coefficient> coeffs);

  std::size_t arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  double prune_threshold() const noexcept { return prune_; }
  void set_prune_threshold(double threshold);

  /// Terms sorted lexicographically by exponent vector, one per exponent.
  const std::vector<Term>& terms() const noexcept { return terms_; }

  /// Accumulates `value` onto the coefficient of `exponents`.
  void add_term(const ExponentVec& exponents, Coefficient value);

  std::int64_t min_exponent(std::size_t var) const;
  std::int64_t max_exponent(std::size_t var) const;
  /// max |exponent| in `var` over stored terms (0 for the zero polynomial).
  std::int64_t max_abs_exponent(std::size_t var) const;

  /// Value at the torus point Y: sum_terms c * exp(i e.Y).
  Coefficient evaluate(std::span<const double> angles) const;

  /// Terms whose exponent in `var` equals `exponent`, with that variable
  /// removed (arity - 1). Requires arity >= 2.
  LaurentPoly slice(std::size_t var, std::int64_t exponent) const;

  LaurentPoly& operator+=(const LaurentPoly& other);
  LaurentPoly& operator*=(Coefficient scalar);

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);

 private:
  void normalize(std::vector<Term>&& unsorted);

  std::size_t arity_;
  double prune_;
  std::vector<Term> terms_;
};

LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b);

/// Sparse convolution. Throws InvalidArgument on arity mismatch and
/// OverflowError if any product exponent leaves the signed 64-bit range.
LaurentPoly poly_mul(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);

/// p^n by repeated squaring, n >= 0.
LaurentPoly poly_pow(const LaurentPoly& p, unsigned n);

/// Coefficient of `e` in p; equals (1/2pi)^V times the torus integral of
/// p e^{-i e.Y}. Zero when absent.
Coefficient coeff(const LaurentPoly& p, const ExponentVec& e);

/// Sum of coeff(structure, e) over all condition exponents.
Coefficient select(const LaurentPoly& structure, std::span<const ExponentVec> conditions);

/// Trapezoid rule on the uniform periodic grid with `samples_per_var` points
/// per variable. Throws SamplingError unless samples_per_var exceeds
/// 2 * max(|exponent|) in every variable of both p and e.
Coefficient quadrature_coeff(const LaurentPoly& p, const ExponentVec& e, int samples_per_var);

/// Smallest grid size accepted by quadrature_coeff for (p, e).
int minimum_samples(const LaurentPoly& p, const ExponentVec& e);

/// Terms of prod(factors) whose exponents match `target` in every variable
/// where target has a value, computed without forming the full product:
/// partial products are pruned of terms that the remaining factors can no
/// longer carry onto the target. Factors are multiplied in the given order.
LaurentPoly extract_from_product(std::span<const LaurentPoly> factors,
                                 std::span<const std::optional<std::int64_t>> target);

/// Coefficient of `e` in prod(factors) via extract_from_product.
Coefficient coeff_of_product(std::span<const LaurentPoly> factors, const ExponentVec& e);

}  // namespace teglab::csi
