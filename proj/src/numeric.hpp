#pragma once

// Working-precision plumbing shared by the path and lattice kernels.
//
// The Schrodinger stencil has weights whose absolute sum exceeds their sum,
// so the lattice weights grow like g^N (g = sum|c| / |sum c|) while the
// physical answer stays O(1). Every kernel is therefore templated on the real
// type, and precision_for() picks the narrowest type that still carries
// N log10(g) digits of cancellation plus a double's worth of result.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <type_traits>

#include <boost/multiprecision/mpfr.hpp>

#include "teglab/errors.hpp"

namespace teglab::numeric {

template <unsigned Digits>
using Mpfr = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<Digits>,
                                           boost::multiprecision::et_off>;

/// Digits carried by each tier; 0 denotes IEEE double.
inline constexpr unsigned kTiers[] = {0, 50, 100, 150, 200, 300};
inline constexpr unsigned kMaxDigits = 300;

// Minimal complex arithmetic; std::complex is unspecified for non-builtin types.
template <class R>
struct Cplx {
  R re{0};
  R im{0};

  Cplx() = default;
  Cplx(R r, R i) : re(std::move(r)), im(std::move(i)) {}
  explicit Cplx(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}

  Cplx& operator+=(const Cplx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Cplx& operator*=(const R& s) {
    re *= s;
    im *= s;
    return *this;
  }
  friend Cplx operator+(Cplx a, const Cplx& b) { return a += b; }
  friend Cplx operator*(const Cplx& a, const Cplx& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Cplx operator*(Cplx a, const R& s) { return a *= s; }
  bool is_zero() const { return re == 0 && im == 0; }

  std::complex<double> to_std() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

/// exp(a + i b).
template <class R>
Cplx<R> cexp(const R& a, const R& b) {
  using std::cos;
  using std::exp;
  using std::sin;
  const R m = exp(a);
  return {m * cos(b), m * sin(b)};
}

/// exp(sign * x) for sign in {+1, -i} given as a complex double.
template <class R>
Cplx<R> signed_exp(const std::complex<double>& sign, const R& x) {
  return cexp<R>(x * R(sign.real()), x * R(sign.imag()));
}

/// Decimal digits of cancellation the kernels must absorb.
inline double cancellation_digits(double growth, int N) {
  return growth <= 1.0 ? 0.0 : static_cast<double>(N) * std::log10(growth);
}

/// Tier (0 = double) able to absorb `loss` digits. Throws GuardError if none can.
inline unsigned precision_for(double loss) {
  if (loss <= 3.0) return 0;
  const double needed = loss + 20.0;
  for (unsigned tier : kTiers) {
    if (tier != 0 && needed <= tier) return tier;
  }
  throw GuardError("working precision of " + std::to_string(static_cast<int>(std::ceil(needed))) +
                   " digits exceeds the " + std::to_string(kMaxDigits) + "-digit limit");
}

/// Calls fn.template operator()<Real>() with the real type of the tier.
template <class F>
decltype(auto) with_precision(unsigned tier, F&& fn) {
  switch (tier) {
    case 0: return fn.template operator()<double>();
    case 50: return fn.template operator()<Mpfr<50>>();
    case 100: return fn.template operator()<Mpfr<100>>();
    case 150: return fn.template operator()<Mpfr<150>>();
    case 200: return fn.template operator()<Mpfr<200>>();
    case 300: return fn.template operator()<Mpfr<300>>();
    default: throw InvalidArgument("unsupported precision tier " + std::to_string(tier));
  }
}

}  // namespace teglab::numeric
