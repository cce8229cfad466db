#include "teglab/propagators.hpp"

#include <cmath>
#include <string>

#include "numeric.hpp"
#include "teg_impl.hpp"
#include "teglab/errors.hpp"

namespace teglab::prop {
namespace {

using numeric::Cplx;

// Dense box |s|_inf <= r in K dimensions, first coordinate slowest.
struct Box {
  int K;
  int r;
  std::size_t side;
  std::size_t count;

  Box(int dim, int radius) : K(dim), r(radius), side(2 * static_cast<std::size_t>(radius) + 1), count(1) {
    for (int i = 0; i < K; ++i) count *= side;
  }

  bool contains(const teg::Shift& s) const {
    for (std::int64_t v : s) {
      if (v < -r || v > r) return false;
    }
    return true;
  }

  std::size_t index(const teg::Shift& s) const {
    std::size_t idx = 0;
    for (std::int64_t v : s) idx = idx * side + static_cast<std::size_t>(v + r);
    return idx;
  }

  teg::Shift shift(std::size_t idx) const {
    teg::Shift s(static_cast<std::size_t>(K));
    for (int i = K - 1; i >= 0; --i) {
      s[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(idx % side) - r;
      idx /= side;
    }
    return s;
  }
};

unsigned tier_for(const teg::TegSpec& spec, Precision precision) {
  if (precision == Precision::native_double) return 0;
  return numeric::precision_for(numeric::cancellation_digits(spec.weight_growth(), spec.slices()));
}

template <class R>
Cplx<R> potential_factor(const teg::TegSpec& spec, const dsl::Field& V, std::span<const R> point, const R& time,
                         const R& t) {
  if (V.is_zero()) return {R(1), R(0)};
  const R v = V.eval<R>(point, time);
  return numeric::signed_exp<R>(spec.potential_sign(), t * v);
}

template <class R>
Cplx<R> initial_value(const dsl::ComplexField& initial, std::span<const R> point) {
  return {initial.re.eval<R>(point, R(0)), initial.im.eval<R>(point, R(0))};
}

// Adjoint sweep n = N..1 followed by the weighted sum of initial samples.
template <class R>
Complex evolve_impl(const dsl::ComplexField& initial, std::span<const double> x, const teg::TegSpec& spec,
                    const dsl::Field& V) {
  const int K = spec.dimension();
  const int N = spec.slices();
  const int reach = static_cast<int>(spec.reach());
  const R T(spec.total_time());
  const R t = T / R(N);
  using std::sqrt;
  const R tau = sqrt(T / R(2 * N));
  std::vector<R> xr(x.begin(), x.end());
  std::vector<Cplx<R>> weights;
  for (const teg::Move& m : spec.moves()) weights.emplace_back(m.weight);

  Box box(K, 0);
  std::vector<Cplx<R>> w(box.count, Cplx<R>{});
  w[0] = {R(1), R(0)};
  std::vector<R> point;
  for (int n = N; n >= 1; --n) {
    Box next(K, box.r + reach);
    std::vector<Cplx<R>> out(next.count, Cplx<R>{});
    teg::Shift dst(static_cast<std::size_t>(K));
    for (std::size_t i = 0; i < box.count; ++i) {
      if (w[i].is_zero()) continue;
      const teg::Shift s = box.shift(i);
      for (std::size_t c = 0; c < weights.size(); ++c) {
        const teg::Shift& d = spec.moves()[c].displacement;
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = s[j] + d[j];
        out[next.index(dst)] += weights[c] * w[i];
      }
    }
    const R time = R(n) * t;
    for (std::size_t i = 0; i < next.count; ++i) {
      if (out[i].is_zero()) continue;
      teg::detail::lattice_point<R>(xr, next.shift(i), tau, point);
      out[i] = out[i] * potential_factor<R>(spec, V, std::span<const R>(point), time, t);
    }
    box = next;
    w = std::move(out);
  }

  Cplx<R> total;
  for (std::size_t i = 0; i < box.count; ++i) {
    if (w[i].is_zero()) continue;
    teg::detail::lattice_point<R>(xr, box.shift(i), tau, point);
    total += w[i] * initial_value<R>(initial, std::span<const R>(point));
  }
  return total.to_std();
}

template <class R>
Complex enumerate_impl(const dsl::ComplexField& initial, std::span<const double> x, const teg::TegSpec& spec,
                       const dsl::Field& V) {
  const int N = spec.slices();
  const R T(spec.total_time());
  const R t = T / R(N);
  using std::sqrt;
  const R tau = sqrt(T / R(2 * N));
  std::vector<R> xr(x.begin(), x.end());
  std::vector<Cplx<R>> weights;
  for (const teg::Move& m : spec.moves()) weights.emplace_back(m.weight);

  const std::int64_t count = spec.path_count();
  Cplx<R> total;
  std::vector<R> point;
  for (std::int64_t M = 0; M < count; ++M) {
    const teg::Path path = teg::path_from_index(M, spec);
    Cplx<R> c{R(1), R(0)};
    for (int code : path.moves) c = c * weights[static_cast<std::size_t>(code)];
    Cplx<R> e{R(1), R(0)};
    if (!V.is_zero()) {
      const R sum = teg::detail::path_potential_sum<R>(path, spec, V, xr, tau, t);
      e = numeric::signed_exp<R>(spec.potential_sign(), t * sum);
    }
    teg::detail::lattice_point<R>(xr, path.terminal, tau, point);
    total += c * e * initial_value<R>(initial, std::span<const R>(point));
  }
  return total.to_std();
}

void require_dimensions(const dsl::ComplexField& initial, std::span<const double> x, const teg::TegSpec& spec,
                        const dsl::Field& V) {
  const int K = spec.dimension();
  if (static_cast<int>(x.size()) != K || V.dimension() != K || initial.dimension() != K) {
    throw InvalidArgument("point, potential, initial data and spec must share the dimension " + std::to_string(K));
  }
}

// T = 0 collapses every lattice point onto x.
Complex at_zero_time(const dsl::ComplexField& initial, std::span<const double> x, const teg::TegSpec& spec) {
  Complex sum = 0.0;
  for (const teg::Move& m : spec.moves()) sum += m.weight;
  return initial(x) * std::pow(sum, spec.slices());
}

}  // namespace

LatticeState::LatticeState(std::vector<double> anchor, double spacing, int radius)
    : anchor_(std::move(anchor)), spacing_(spacing), radius_(radius) {
  if (anchor_.empty() || anchor_.size() > 3) throw InvalidArgument("LatticeState: dimension must be 1, 2 or 3");
  if (radius < 0) throw InvalidArgument("LatticeState: radius must be non-negative");
  values_.assign(Box(dimension(), radius).count, Complex{});
}

LatticeState LatticeState::delta(std::vector<double> anchor, double spacing) {
  LatticeState s(std::move(anchor), spacing, 0);
  s.values_[0] = 1.0;
  return s;
}

std::size_t LatticeState::index_of(const teg::Shift& s) const {
  if (static_cast<int>(s.size()) != dimension()) throw InvalidArgument("LatticeState: shift dimension mismatch");
  return Box(dimension(), radius_).index(s);
}

Complex LatticeState::at(const teg::Shift& s) const {
  const Box box(dimension(), radius_);
  if (static_cast<int>(s.size()) != dimension()) throw InvalidArgument("LatticeState: shift dimension mismatch");
  return box.contains(s) ? values_[box.index(s)] : Complex{};
}

void LatticeState::set(const teg::Shift& s, Complex value) {
  const Box box(dimension(), radius_);
  if (static_cast<int>(s.size()) != dimension() || !box.contains(s)) {
    throw InvalidArgument("LatticeState: shift outside the box");
  }
  values_[box.index(s)] = value;
}

teg::Shift LatticeState::shift_of(std::size_t index) const { return Box(dimension(), radius_).shift(index); }

Complex LatticeState::sum() const {
  Complex s = 0.0;
  for (const Complex& v : values_) s += v;
  return s;
}

int LatticeState::support_radius() const {
  int r = -1;
  const Box box(dimension(), radius_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == Complex{}) continue;
    for (std::int64_t v : box.shift(i)) r = std::max(r, static_cast<int>(v < 0 ? -v : v));
  }
  return r;
}

LatticeState step(const LatticeState& state, int n, const teg::TegSpec& spec, const dsl::Field& V) {
  if (n < 1 || n > spec.slices()) throw InvalidArgument("step: n outside 1..N");
  if (state.dimension() != spec.dimension() || V.dimension() != spec.dimension()) {
    throw InvalidArgument("step: state, potential and spec dimensions differ");
  }
  const int K = spec.dimension();
  const Box in(K, state.radius());
  const Box out_box(K, state.radius() + static_cast<int>(spec.reach()));
  const double t = spec.step_time();
  const double time = n * t;
  const auto values = state.values();

  // E at every input site, applied before the stencil
  std::vector<Complex> damped(in.count);
  std::vector<double> point(static_cast<std::size_t>(K));
  for (std::size_t i = 0; i < in.count; ++i) {
    if (values[i] == Complex{}) continue;
    const teg::Shift s = in.shift(i);
    for (int j = 0; j < K; ++j) {
      point[static_cast<std::size_t>(j)] =
          state.anchor()[static_cast<std::size_t>(j)] + static_cast<double>(s[static_cast<std::size_t>(j)]) * state.spacing();
    }
    const Cplx<double> e = potential_factor<double>(spec, V, point, time, t);
    damped[i] = values[i] * e.to_std();
  }

  LatticeState result(state.anchor(), state.spacing(), out_box.r);
  auto out = result.values();
  teg::Shift src(static_cast<std::size_t>(K));
  for (std::size_t o = 0; o < out_box.count; ++o) {
    const teg::Shift s = out_box.shift(o);
    Complex acc = 0.0;
    for (const teg::Move& m : spec.moves()) {
      for (std::size_t j = 0; j < src.size(); ++j) src[j] = s[j] + m.displacement[j];
      if (in.contains(src)) acc += m.weight * damped[in.index(src)];
    }
    out[o] = acc;
  }
  return result;
}

int working_digits(const teg::TegSpec& spec, Precision precision) {
  const unsigned tier = tier_for(spec, precision);
  return tier == 0 ? 16 : static_cast<int>(tier);
}

LatticeState evolve_weights(std::span<const double> x, const teg::TegSpec& spec, const dsl::Field& V) {
  if (static_cast<int>(x.size()) != spec.dimension() || V.dimension() != spec.dimension()) {
    throw InvalidArgument("evolve_weights: point, potential and spec dimensions differ");
  }
  const int K = spec.dimension();
  const int reach = static_cast<int>(spec.reach());
  const double t = spec.step_time();
  LatticeState w = LatticeState::delta({x.begin(), x.end()}, spec.spacing());
  for (int n = spec.slices(); n >= 1; --n) {
    const Box box(K, w.radius());
    LatticeState next(w.anchor(), w.spacing(), w.radius() + reach);
    const Box nb(K, next.radius());
    auto out = next.values();
    const auto in = w.values();
    teg::Shift dst(static_cast<std::size_t>(K));
    for (std::size_t i = 0; i < box.count; ++i) {
      if (in[i] == Complex{}) continue;
      const teg::Shift s = box.shift(i);
      for (const teg::Move& m : spec.moves()) {
        for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = s[j] + m.displacement[j];
        out[nb.index(dst)] += m.weight * in[i];
      }
    }
    std::vector<double> point;
    for (std::size_t i = 0; i < nb.count; ++i) {
      if (out[i] == Complex{}) continue;
      teg::detail::lattice_point<double>(x, nb.shift(i), spec.spacing(), point);
      out[i] *= potential_factor<double>(spec, V, point, n * t, t).to_std();
    }
    w = std::move(next);
  }
  return w;
}

Complex evolve(const dsl::ComplexField& initial, std::span<const double> x, const teg::TegSpec& spec,
               const dsl::Field& V, Precision precision) {
  require_dimensions(initial, x, spec, V);
  if (spec.total_time() == 0.0) return at_zero_time(initial, x, spec);
  return numeric::with_precision(tier_for(spec, precision), [&]<class R>() {
    return evolve_impl<R>(initial, x, spec, V);
  });
}

Complex enumerate_paths(const dsl::ComplexField& initial, std::span<const double> x, const teg::TegSpec& spec,
                        const dsl::Field& V, Precision precision) {
  require_dimensions(initial, x, spec, V);
  double paths = 1.0;
  for (int n = 0; n < spec.slices(); ++n) paths *= spec.order();
  if (paths > static_cast<double>(kEnumerationLimit)) {
    throw GuardError("enumerate_paths: " + std::to_string(spec.order()) + "^" + std::to_string(spec.slices()) +
                     " paths exceed the limit of " + std::to_string(kEnumerationLimit));
  }
  if (spec.total_time() == 0.0) return at_zero_time(initial, x, spec);
  return numeric::with_precision(tier_for(spec, precision), [&]<class R>() {
    return enumerate_impl<R>(initial, x, spec, V);
  });
}

}  // namespace teglab::prop
