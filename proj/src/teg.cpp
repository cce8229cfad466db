#include "teglab/teg.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "teg_impl.hpp"
#include "teglab/base_repr.hpp"
#include "teglab/errors.hpp"

namespace teglab::teg {
namespace {

constexpr int kSelectionMaxN = 8;
constexpr int kDenseMaxN = 6;

void require_index(std::int64_t M, const TegSpec& spec) {
  if (M < 0 || M >= spec.path_count()) {
    throw InvalidArgument("path index " + std::to_string(M) + " outside [0, " + std::to_string(spec.path_count()) +
                          ")");
  }
}

std::vector<std::int64_t> padded_digits(std::int64_t M, const TegSpec& spec) {
  std::vector<std::int64_t> d = base::digits_euclid(M, spec.order()).digits;
  d.resize(static_cast<std::size_t>(spec.slices()), 0);
  return d;
}

// Exponent vector (lead, -d) for a move's gamma monomial e^{-i d.gamma}.
csi::ExponentVec with_gamma(std::initializer_list<std::int64_t> lead, const Shift& d) {
  csi::ExponentVec e(lead);
  for (std::int64_t v : d) e.push_back(-v);
  return e;
}

}  // namespace

TegSpec::TegSpec(std::vector<Move> moves, int N, double T, EquationKind kind)
    : moves_(std::move(moves)), N_(N), T_(T), kind_(kind) {
  if (moves_.size() < 2) throw InvalidArgument("TegSpec: variety order must be at least 2");
  if (N < 1) throw InvalidArgument("TegSpec: slicing number N must be at least 1");
  if (!std::isfinite(T) || T < 0) throw InvalidArgument("TegSpec: total time must be finite and non-negative");
  if (kind.dimension < 1 || kind.dimension > 3) throw InvalidArgument("TegSpec: dimension must be 1, 2 or 3");
  for (const Move& m : moves_) {
    if (static_cast<int>(m.displacement.size()) != kind.dimension) {
      throw InvalidArgument("TegSpec: displacement dimension does not match the equation");
    }
    if (!std::isfinite(m.weight.real()) || !std::isfinite(m.weight.imag())) {
      throw InvalidArgument("TegSpec: move weights must be finite");
    }
  }
}

TegSpec TegSpec::diffusion(int N, double T) {
  return TegSpec({{0.5, {-1}}, {0.5, {+1}}}, N, T, {Equation::diffusion, 1});
}

TegSpec TegSpec::schrodinger(int N, double T, int K) {
  if (K < 1 || K > 3) throw InvalidArgument("TegSpec: dimension must be 1, 2 or 3");
  const Complex i(0.0, 1.0);
  std::vector<Move> moves;
  moves.push_back({Complex(1.0, -2.0 * K), Shift(static_cast<std::size_t>(K), 0)});
  for (int axis = 0; axis < K; ++axis) {
    Shift up(static_cast<std::size_t>(K), 0);
    Shift down(static_cast<std::size_t>(K), 0);
    up[static_cast<std::size_t>(axis)] = 1;
    down[static_cast<std::size_t>(axis)] = -1;
    moves.push_back({i, up});
    moves.push_back({i, down});
  }
  return TegSpec(std::move(moves), N, T, {Equation::schrodinger, K});
}

double TegSpec::spacing() const { return std::sqrt(T_ / (2.0 * N_)); }

const Move& TegSpec::move(std::int64_t code) const {
  if (code < 0 || code >= order()) throw InvalidArgument("move code " + std::to_string(code) + " out of range");
  return moves_[static_cast<std::size_t>(code)];
}

Complex TegSpec::potential_sign() const noexcept {
  return kind_.equation == Equation::diffusion ? Complex(1.0, 0.0) : Complex(0.0, -1.0);
}

double TegSpec::weight_growth() const {
  double abs_sum = 0.0;
  Complex sum = 0.0;
  for (const Move& m : moves_) {
    abs_sum += std::abs(m.weight);
    sum += m.weight;
  }
  return abs_sum / std::abs(sum);
}

std::int64_t TegSpec::reach() const {
  std::int64_t r = 0;
  for (const Move& m : moves_) {
    for (std::int64_t v : m.displacement) r = std::max(r, v < 0 ? -v : v);
  }
  return r;
}

std::int64_t TegSpec::path_count() const { return base::checked_pow(order(), N_); }

Path path_from_index(std::int64_t M, const TegSpec& spec) {
  require_index(M, spec);
  Path p;
  p.index = M;
  Shift s(static_cast<std::size_t>(spec.dimension()), 0);
  for (std::int64_t digit : padded_digits(M, spec)) {
    p.moves.push_back(static_cast<int>(digit));
    const Shift& d = spec.move(digit).displacement;
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += d[i];
    p.prefix_shifts.push_back(s);
  }
  p.terminal = s;
  return p;
}

Shift lambda_k(std::int64_t M, int k, const TegSpec& spec) {
  if (k < 0 || k > spec.slices()) throw InvalidArgument("lambda_k: step index outside 0..N");
  const Path p = path_from_index(M, spec);
  if (k == 0) return Shift(static_cast<std::size_t>(spec.dimension()), 0);
  return p.prefix_shifts[static_cast<std::size_t>(k - 1)];
}

Shift lambda_k_csi(std::int64_t M, int k, const TegSpec& spec) {
  if (k < 0 || k > spec.slices()) throw InvalidArgument("lambda_k_csi: step index outside 0..N");
  const csi::LaurentPoly lambda = selection_G(M, spec).slice(0, (std::int64_t{1} << k) - 1);
  if (lambda.size() != 1 || std::abs(lambda.terms()[0].value - Complex(1.0)) > 1e-12) {
    throw Error("lambda_k_csi: selection integral is not a unit gamma monomial");
  }
  Shift s;
  for (std::int64_t e : lambda.terms()[0].exponents) s.push_back(-e);
  return s;
}

csi::LaurentPoly selection_G(std::int64_t M, const TegSpec& spec) {
  if (spec.slices() > kSelectionMaxN) {
    throw GuardError("selection_G: N = " + std::to_string(spec.slices()) + " exceeds the limit of " +
                     std::to_string(kSelectionMaxN));
  }
  require_index(M, spec);
  const std::size_t arity = 1 + static_cast<std::size_t>(spec.dimension());
  csi::LaurentPoly g = csi::LaurentPoly::constant(arity, 1.0);
  const auto digits = padded_digits(M, spec);
  for (int n = 0; n < spec.slices(); ++n) {
    const Shift& d = spec.move(digits[static_cast<std::size_t>(n)]).displacement;
    const csi::LaurentPoly factor = csi::LaurentPoly::from_terms(
        arity, {{csi::ExponentVec(arity, 0), 1.0}, {with_gamma({std::int64_t{1} << n}, d), 1.0}});
    g = csi::poly_mul(g, factor);
  }
  return g;
}

csi::LaurentPoly selection_G_dense(std::int64_t M, const TegSpec& spec) {
  if (spec.slices() > kDenseMaxN) {
    throw GuardError("selection_G_dense: N = " + std::to_string(spec.slices()) + " exceeds the limit of " +
                     std::to_string(kDenseMaxN));
  }
  require_index(M, spec);
  const std::size_t arity = 2 + static_cast<std::size_t>(spec.dimension());
  csi::LaurentPoly product = csi::LaurentPoly::constant(arity, 1.0);
  for (int n = 0; n < spec.slices(); ++n) {
    const std::int64_t bn = base::checked_pow(spec.order(), n);
    std::vector<csi::Term> terms;
    for (int c = 0; c < spec.order(); ++c) {
      const Shift& d = spec.move(c).displacement;
      csi::ExponentVec plain(arity, 0);
      plain[0] = c * bn;
      terms.push_back({plain, 1.0});
      terms.push_back({with_gamma({c * bn, std::int64_t{1} << n}, d), 1.0});
    }
    product = csi::poly_mul(product, csi::LaurentPoly::from_terms(arity, std::move(terms)));
  }
  return product.slice(0, M);
}

Complex prefactor_C(std::int64_t M, const TegSpec& spec) {
  require_index(M, spec);
  Complex c = 1.0;
  for (std::int64_t digit : padded_digits(M, spec)) c *= spec.move(digit).weight;
  return c;
}

Complex prefactor_C_csi(std::int64_t M, const TegSpec& spec) {
  require_index(M, spec);
  std::vector<csi::LaurentPoly> factors;
  for (int n = spec.slices() - 1; n >= 0; --n) {
    const std::int64_t bn = base::checked_pow(spec.order(), n);
    std::vector<csi::Term> terms;
    for (int c = 0; c < spec.order(); ++c) terms.push_back({{c * bn}, spec.move(c).weight});
    factors.push_back(csi::LaurentPoly::from_terms(1, std::move(terms)));
  }
  return csi::coeff_of_product(factors, {M});
}

Complex exponent_E(std::int64_t M, const TegSpec& spec, const dsl::Field& V, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dimension() || V.dimension() != spec.dimension()) {
    throw InvalidArgument("exponent_E: point, potential and spec dimensions differ");
  }
  const Path p = path_from_index(M, spec);
  const double sum = detail::path_potential_sum<double>(p, spec, V, x, spec.spacing(), spec.step_time());
  const Complex z = std::exp(spec.potential_sign() * (spec.step_time() * sum));
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw EvaluationError("exponent_E: non-finite E_M");
  return z;
}

Complex exponent_E_csi(std::int64_t M, const TegSpec& spec, const dsl::Field& V, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dimension() || V.dimension() != spec.dimension()) {
    throw InvalidArgument("exponent_E_csi: point, potential and spec dimensions differ");
  }
  const csi::LaurentPoly g = selection_G(M, spec);
  const int N = spec.slices();
  const double tau = spec.spacing();
  const double t = spec.step_time();
  Complex sum = 0.0;
  std::vector<double> point(x.size());
  for (int k = 1; k <= N; ++k) {
    // gamma integral against sum_s e^{i s.gamma} V(x + s tau) keeps s = -exponent
    const csi::LaurentPoly lambda = g.slice(0, (std::int64_t{1} << k) - 1);
    for (const csi::Term& term : lambda.terms()) {
      for (std::size_t i = 0; i < x.size(); ++i) point[i] = x[i] - static_cast<double>(term.exponents[i]) * tau;
      sum += term.value * V(point, static_cast<double>(N - k + 1) * t);
    }
  }
  const Complex z = std::exp(spec.potential_sign() * (t * sum));
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw EvaluationError("exponent_E_csi: non-finite E_M");
  return z;
}

Shift shift_csi(std::int64_t M, const TegSpec& spec) {
  require_index(M, spec);
  if (spec.slices() > kSelectionMaxN) return path_from_index(M, spec).terminal;
  const std::size_t arity = 1 + static_cast<std::size_t>(spec.dimension());
  std::vector<csi::LaurentPoly> factors;
  for (int n = spec.slices() - 1; n >= 0; --n) {
    const std::int64_t bn = base::checked_pow(spec.order(), n);
    std::vector<csi::Term> terms;
    for (int c = 0; c < spec.order(); ++c) terms.push_back({with_gamma({c * bn}, spec.move(c).displacement), 1.0});
    factors.push_back(csi::LaurentPoly::from_terms(arity, std::move(terms)));
  }
  std::vector<std::optional<std::int64_t>> target(arity);
  target[0] = M;
  const csi::LaurentPoly slice = csi::extract_from_product(factors, target);
  if (slice.size() != 1) throw Error("shift_csi: theta slice is not a single monomial");
  Shift s;
  for (std::size_t i = 1; i < arity; ++i) s.push_back(-slice.terms()[0].exponents[i]);
  return s;
}

}  // namespace teglab::teg
