#pragma once

#include <span>
#include <vector>

#include "numeric.hpp"
#include "potential_eval.hpp"
#include "teglab/teg.hpp"

namespace teglab::teg::detail {

/// Lattice point x + s tau in working precision.
template <class R>
void lattice_point(std::span<const R> x, const Shift& s, const R& tau, std::vector<R>& out) {
  out.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + R(s[i]) * tau;
}

/// sum_k V(x + s_k tau, (N - k + 1) t) along one path.
template <class R>
R path_potential_sum(const Path& path, const TegSpec& spec, const dsl::Field& V, std::span<const R> x,
                     const R& tau, const R& t) {
  const int N = spec.slices();
  R sum(0);
  std::vector<R> point;
  for (int k = 1; k <= N; ++k) {
    lattice_point<R>(x, path.prefix_shifts[static_cast<std::size_t>(k - 1)], tau, point);
    sum += V.eval<R>(std::span<const R>(point), R(N - k + 1) * t);
  }
  return sum;
}

}  // namespace teglab::teg::detail
