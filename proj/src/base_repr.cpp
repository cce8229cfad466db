#include "teglab/base_repr.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "teglab/errors.hpp"

namespace teglab::base {
namespace {

void require_base(std::int64_t base) {
  if (base < 2) throw InvalidArgument("invalid base " + std::to_string(base) + " (need b >= 2)");
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError("integer overflow: " + std::to_string(a) + " * " + std::to_string(b));
  }
  return out;
}

// Rounds an exactly-integer CSI coefficient, rejecting anything that is not.
std::int64_t to_integer(std::complex<double> value) {
  const double re = std::round(value.real());
  if (std::abs(value.imag()) > 1e-6 || std::abs(value.real() - re) > 1e-6) {
    throw Error("digit extraction produced a non-integer coefficient");
  }
  return static_cast<std::int64_t>(re);
}

// Exponent b^n, or nullopt once it exceeds `limit`.
std::optional<std::int64_t> power_within(std::int64_t base, int n, std::int64_t limit) {
  std::int64_t p = 1;
  for (int i = 0; i < n; ++i) {
    if (p > limit / base) return std::nullopt;
    p *= base;
  }
  return p;
}

// 1 + sum_k (1 + k e^{i 2^n phi}) e^{i k b^n theta} over (theta, phi).
csi::LaurentPoly digit_factor(std::int64_t base, int n) {
  const std::int64_t bn = checked_pow(base, n);
  const std::int64_t phi = checked_pow(2, n);
  std::vector<csi::Term> terms;
  terms.push_back({{0, 0}, 1.0});
  for (std::int64_t k = 1; k < base; ++k) {
    const std::int64_t theta = checked_mul(k, bn);
    terms.push_back({{theta, 0}, 1.0});
    terms.push_back({{theta, phi}, static_cast<double>(k)});
  }
  return csi::LaurentPoly::from_terms(2, std::move(terms));
}

}  // namespace

std::int64_t checked_pow(std::int64_t base, int exponent) {
  if (exponent < 0) throw InvalidArgument("checked_pow: negative exponent");
  std::int64_t p = 1;
  for (int i = 0; i < exponent; ++i) p = checked_mul(p, base);
  return p;
}

BaseRepresentation digits_euclid(std::int64_t M, std::int64_t base) {
  require_base(base);
  if (M < 0) throw InvalidArgument("digits_euclid: M must be non-negative");
  BaseRepresentation r{base, {}};
  while (M > 0) {
    r.digits.push_back(M % base);
    M /= base;
  }
  return r;
}

std::int64_t recompose(const BaseRepresentation& r) {
  require_base(r.base);
  std::int64_t value = 0;
  std::int64_t place = 1;
  for (std::size_t m = 0; m < r.digits.size(); ++m) {
    const std::int64_t a = r.digits[m];
    if (a < 0 || a >= r.base) {
      throw InvalidArgument("invalid digit " + std::to_string(a) + " at position " + std::to_string(m) +
                            " for base " + std::to_string(r.base));
    }
    std::int64_t next = 0;
    if (__builtin_add_overflow(value, checked_mul(a, place), &next)) throw OverflowError("recompose: overflow");
    value = next;
    if (m + 1 < r.digits.size()) place = checked_mul(place, r.base);
  }
  return value;
}

BaseRepresentation increment(const BaseRepresentation& r) {
  require_base(r.base);
  BaseRepresentation next = r;
  std::size_t m = 0;
  while (m < next.digits.size() && next.digits[m] == r.base - 1) ++m;
  if (m == next.digits.size()) {
    // every digit is b-1: M = b^{l+1} - 1, so M + 1 = b^{l+1}
    std::fill(next.digits.begin(), next.digits.end(), 0);
    next.digits.push_back(1);
    return next;
  }
  for (std::size_t j = 0; j < m; ++j) next.digits[j] = 0;
  next.digits[m] += 1;
  return next;
}

std::complex<double> selection_product(std::int64_t M, std::int64_t base, int N, const FactorTable& factors) {
  require_base(base);
  if (M < 0) throw InvalidArgument("selection_product: M must be non-negative");
  if (N < 0) throw InvalidArgument("selection_product: N must be non-negative");
  const BaseRepresentation r = digits_euclid(M, base);
  if (r.digits.size() > static_cast<std::size_t>(N) + 1) return 0.0;  // M >= b^{N+1}
  std::complex<double> product = 1.0;
  for (std::size_t n = 0; n < r.digits.size(); ++n) {
    if (r.digits[n] != 0) product *= factors(static_cast<int>(n), r.digits[n]);
  }
  return product;
}

std::complex<double> selection_product_csi(std::int64_t M, std::int64_t base, int N, const FactorTable& factors) {
  require_base(base);
  if (M < 0 || N < 0) throw InvalidArgument("selection_product_csi: M and N must be non-negative");
  double terms = 1.0;
  for (int n = 0; n <= N; ++n) terms *= static_cast<double>(base);
  if (terms > 4e6) throw GuardError("selection_product_csi: expansion of " + std::to_string(terms) + " terms");
  csi::LaurentPoly product = csi::LaurentPoly::constant(1, 1.0);
  for (int n = 0; n <= N; ++n) {
    const std::int64_t bn = checked_pow(base, n);
    std::vector<csi::Term> f{{{0}, 1.0}};
    for (std::int64_t k = 1; k < base; ++k) f.push_back({{checked_mul(k, bn)}, factors(n, k)});
    product = csi::poly_mul(product, csi::LaurentPoly::from_terms(1, std::move(f)));
  }
  return csi::coeff(product, {M});
}

std::int64_t digit_csi(std::int64_t M, std::int64_t base, int m, int N, DigitMethod method) {
  require_base(base);
  if (M < 0) throw InvalidArgument("digit_csi: M must be non-negative");
  if (N < 0 || m < 0) throw InvalidArgument("digit_csi: N and m must be non-negative");
  if (m > N) return 0;

  if (method == DigitMethod::digit_filtered) {
    const auto bound = power_within(base, N + 1, M);  // nullopt: b^{N+1} > M
    if (bound) return 0;
    const BaseRepresentation r = digits_euclid(M, base);
    return static_cast<std::size_t>(m) < r.digits.size() ? r.digits[static_cast<std::size_t>(m)] : 0;
  }

  // Highest place first: with the remaining places bounded by b^n - 1, the
  // pruning admits exactly one digit per factor.
  std::vector<csi::LaurentPoly> factors;
  factors.reserve(static_cast<std::size_t>(N) + 1);
  for (int n = N; n >= 0; --n) factors.push_back(digit_factor(base, n));
  return to_integer(csi::coeff_of_product(factors, {M, checked_pow(2, m)}));
}

DigitCsiTable::DigitCsiTable(std::int64_t base, int N, std::size_t max_terms)
    : base_(base), N_(N), poly_(csi::LaurentPoly::constant(2, 1.0)) {
  require_base(base);
  if (N < 0) throw InvalidArgument("DigitCsiTable: N must be non-negative");
  // each factor contributes (2b - 1) distinct monomials, none of which collide
  double terms = 1.0;
  for (int n = 0; n <= N; ++n) terms *= static_cast<double>(2 * base - 1);
  if (terms > static_cast<double>(max_terms)) {
    throw GuardError("DigitCsiTable: expansion of " + std::to_string(terms) + " terms exceeds the guard");
  }
  for (int n = 0; n <= N; ++n) poly_ = csi::poly_mul(poly_, digit_factor(base, n));
}

std::complex<double> DigitCsiTable::raw(std::int64_t M, int m) const {
  if (M < 0 || m < 0) throw InvalidArgument("DigitCsiTable: M and m must be non-negative");
  if (m > 62) return 0.0;
  return csi::coeff(poly_, {M, std::int64_t{1} << m});
}

std::int64_t DigitCsiTable::digit(std::int64_t M, int m) const { return to_integer(raw(M, m)); }

}  // namespace teglab::base
