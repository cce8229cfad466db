#pragma once

// Definition of Field::eval<Real>. Nodes are stored children-first, so a
// single forward sweep over the arena evaluates the tree without recursion.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "teglab/errors.hpp"
#include "teglab/potential.hpp"

namespace teglab::dsl {
namespace detail {

template <class Real>
bool finite(const Real& v) {
  using std::isfinite;
  return isfinite(v);
}

template <class Real>
Real literal(const Node& node) {
  if constexpr (std::is_same_v<Real, double>) {
    return node.value;
  } else {
    using std::atan;
    using std::exp;
    if (node.name == "pi") return 4 * atan(Real(1));
    if (node.name == "e") return exp(Real(1));
    if (!node.text.empty()) return Real(node.text.c_str());
    return Real(node.value);
  }
}

template <class Real>
Real int_pow(Real base, std::int64_t n) {
  const bool invert = n < 0;
  std::uint64_t k = invert ? static_cast<std::uint64_t>(-n) : static_cast<std::uint64_t>(n);
  Real result(1);
  while (k != 0) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k != 0) base *= base;
  }
  if (invert) {
    if (result == 0) throw EvaluationError("division by zero in negative power");
    result = Real(1) / result;
  }
  return result;
}

template <class Real>
Real power(const Real& base, const Real& exponent) {
  using std::floor;
  using std::pow;
  using std::abs;
  if (floor(exponent) == exponent && abs(exponent) <= 64) {
    return int_pow(base, static_cast<std::int64_t>(exponent));
  }
  if (base < 0) throw EvaluationError("negative base raised to a non-integer power");
  if (base == 0 && exponent < 0) throw EvaluationError("division by zero in negative power");
  return pow(base, exponent);
}

}  // namespace detail

template <class Real>
Real Field::eval(std::span<const Real> x, const Real& t) const {
  if (static_cast<int>(x.size()) != dimension_) {
    throw InvalidArgument("field expects " + std::to_string(dimension_) + " coordinates, got " +
                          std::to_string(x.size()));
  }
  if (!expr_) {
    if constexpr (std::is_same_v<Real, double>) {
      const double v = native_(x, t);
      if (!std::isfinite(v)) throw EvaluationError("non-finite value from " + source_);
      return v;
    } else {
      throw InvalidArgument("native field " + source_ + " supports double precision only");
    }
  }
  using std::abs;
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  const Expr& e = *expr_;
  std::vector<Real> v(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const Node& n = e.node(static_cast<int>(i));
    Real r{};
    switch (n.kind) {
      case NodeKind::constant: r = detail::literal<Real>(n); break;
      case NodeKind::variable: r = x[static_cast<std::size_t>(n.variable)]; break;
      case NodeKind::time: r = t; break;
      case NodeKind::negate: r = -v[static_cast<std::size_t>(n.lhs)]; break;
      case NodeKind::function: {
        const Real& a = v[static_cast<std::size_t>(n.lhs)];
        switch (n.function) {
          case Function::sin: r = sin(a); break;
          case Function::cos: r = cos(a); break;
          case Function::exp: r = exp(a); break;
          case Function::abs: r = abs(a); break;
          case Function::sqrt:
            if (a < 0) throw EvaluationError("sqrt of a negative number");
            r = sqrt(a);
            break;
        }
        break;
      }
      case NodeKind::binary: {
        const Real& a = v[static_cast<std::size_t>(n.lhs)];
        const Real& b = v[static_cast<std::size_t>(n.rhs)];
        switch (n.op) {
          case BinaryOp::add: r = a + b; break;
          case BinaryOp::sub: r = a - b; break;
          case BinaryOp::mul: r = a * b; break;
          case BinaryOp::div:
            if (b == 0) throw EvaluationError("division by zero");
            r = a / b;
            break;
          case BinaryOp::pow: r = detail::power(a, b); break;
        }
        break;
      }
    }
    if (!detail::finite(r)) throw EvaluationError("non-finite value while evaluating " + source_);
    v[i] = std::move(r);
  }
  return std::move(v.back());
}

}  // namespace teglab::dsl
