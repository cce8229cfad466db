#include "teglab/csi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "teglab/errors.hpp"

namespace teglab::csi {
namespace {

__extension__ typedef __int128 Wide;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError("Laurent exponent overflow: " + std::to_string(a) + " + " + std::to_string(b));
  }
  return out;
}

void require_arity(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InvalidArgument(std::string(what) + ": arity mismatch (" + std::to_string(a) + " vs " +
                          std::to_string(b) + ")");
  }
}

bool keep(const Coefficient& c, double prune) {
  if (c == Coefficient{}) return false;
  return !(prune > 0.0 && std::abs(c) < prune);
}

// Sparse product restricted to exponents accepted by `accept`.
template <class Accept>
std::vector<Term> multiply_terms(const LaurentPoly& a, const LaurentPoly& b, Accept&& accept) {
  std::vector<Term> out;
  out.reserve(a.size() * b.size());
  const std::size_t arity = a.arity();
  ExponentVec e(arity);
  for (const Term& ta : a.terms()) {
    for (const Term& tb : b.terms()) {
      for (std::size_t v = 0; v < arity; ++v) e[v] = checked_add(ta.exponents[v], tb.exponents[v]);
      if (!accept(e)) continue;
      out.push_back(Term{e, ta.value * tb.value});
    }
  }
  return out;
}

}  // namespace

LaurentPoly::LaurentPoly(std::size_t arity, double prune_threshold) : arity_(arity), prune_(prune_threshold) {
  if (arity == 0) throw InvalidArgument("LaurentPoly: arity must be at least 1");
  if (!(prune_threshold >= 0.0)) throw InvalidArgument("LaurentPoly: prune threshold must be >= 0");
}

LaurentPoly LaurentPoly::constant(std::size_t arity, Coefficient value) {
  LaurentPoly p(arity);
  p.add_term(ExponentVec(arity, 0), value);
  return p;
}

LaurentPoly LaurentPoly::monomial(ExponentVec exponents, Coefficient value) {
  LaurentPoly p(exponents.size());
  p.add_term(exponents, value);
  return p;
}

LaurentPoly LaurentPoly::univariate(std::span<const Coefficient> coeffs) {
  LaurentPoly p(1);
  std::vector<Term> terms;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    terms.push_back(Term{ExponentVec{static_cast<std::int64_t>(k)}, coeffs[k]});
  }
  p.normalize(std::move(terms));
  return p;
}

void LaurentPoly::set_prune_threshold(double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("LaurentPoly: prune threshold must be >= 0");
  prune_ = threshold;
  std::erase_if(terms_, [&](const Term& t) { return !keep(t.value, prune_); });
}

void LaurentPoly::normalize(std::vector<Term>&& unsorted) {
  std::stable_sort(unsorted.begin(), unsorted.end(),
                   [](const Term& a, const Term& b) { return a.exponents < b.exponents; });
  terms_.clear();
  for (auto& t : unsorted) {
    if (!terms_.empty() && terms_.back().exponents == t.exponents) {
      terms_.back().value += t.value;
    } else {
      terms_.push_back(std::move(t));
    }
  }
  std::erase_if(terms_, [&](const Term& t) { return !keep(t.value, prune_); });
}

void LaurentPoly::add_term(const ExponentVec& exponents, Coefficient value) {
  require_arity(arity_, exponents.size(), "add_term");
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exponents,
                             [](const Term& t, const ExponentVec& e) { return t.exponents < e; });
  if (it != terms_.end() && it->exponents == exponents) {
    it->value += value;
    if (!keep(it->value, prune_)) terms_.erase(it);
  } else if (keep(value, prune_)) {
    terms_.insert(it, Term{exponents, value});
  }
}

std::int64_t LaurentPoly::min_exponent(std::size_t var) const {
  if (var >= arity_) throw InvalidArgument("min_exponent: variable out of range");
  std::int64_t m = 0;
  bool first = true;
  for (const Term& t : terms_) {
    if (first || t.exponents[var] < m) m = t.exponents[var];
    first = false;
  }
  return m;
}

std::int64_t LaurentPoly::max_exponent(std::size_t var) const {
  if (var >= arity_) throw InvalidArgument("max_exponent: variable out of range");
  std::int64_t m = 0;
  bool first = true;
  for (const Term& t : terms_) {
    if (first || t.exponents[var] > m) m = t.exponents[var];
    first = false;
  }
  return m;
}

std::int64_t LaurentPoly::max_abs_exponent(std::size_t var) const {
  if (terms_.empty()) return 0;
  const std::int64_t lo = min_exponent(var);
  const std::int64_t hi = max_exponent(var);
  if (lo == INT64_MIN) throw OverflowError("max_abs_exponent: exponent magnitude not representable");
  return std::max(hi < 0 ? -hi : hi, -lo);
}

Coefficient LaurentPoly::evaluate(std::span<const double> angles) const {
  require_arity(arity_, angles.size(), "evaluate");
  Coefficient sum{};
  for (const Term& t : terms_) {
    double phase = 0.0;
    for (std::size_t v = 0; v < arity_; ++v) phase += static_cast<double>(t.exponents[v]) * angles[v];
    sum += t.value * std::polar(1.0, phase);
  }
  return sum;
}

LaurentPoly LaurentPoly::slice(std::size_t var, std::int64_t exponent) const {
  if (arity_ < 2) throw InvalidArgument("slice: needs at least two variables");
  if (var >= arity_) throw InvalidArgument("slice: variable out of range");
  LaurentPoly out(arity_ - 1, prune_);
  std::vector<Term> kept;
  for (const Term& t : terms_) {
    if (t.exponents[var] != exponent) continue;
    ExponentVec e;
    e.reserve(arity_ - 1);
    for (std::size_t v = 0; v < arity_; ++v) {
      if (v != var) e.push_back(t.exponents[v]);
    }
    kept.push_back(Term{std::move(e), t.value});
  }
  out.normalize(std::move(kept));
  return out;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
  require_arity(arity_, other.arity_, "operator+");
  std::vector<Term> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  normalize(std::move(all));
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(Coefficient scalar) {
  for (Term& t : terms_) t.value *= scalar;
  std::erase_if(terms_, [&](const Term& t) { return !keep(t.value, prune_); });
  return *this;
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.arity_ != b.arity_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].exponents != b.terms_[i].exponents || a.terms_[i].value != b.terms_[i].value) return false;
  }
  return true;
}

LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) {
  a += b;
  return a;
}

LaurentPoly poly_mul(const LaurentPoly& a, const LaurentPoly& b) {
  require_arity(a.arity(), b.arity(), "poly_mul");
  return LaurentPoly::from_terms(a.arity(), multiply_terms(a, b, [](const ExponentVec&) { return true; }),
                                 a.prune_threshold());
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) { return poly_mul(a, b); }

LaurentPoly poly_pow(const LaurentPoly& p, unsigned n) {
  LaurentPoly result = LaurentPoly::constant(p.arity(), 1.0);
  result.set_prune_threshold(p.prune_threshold());
  LaurentPoly base = p;
  while (n > 0) {
    if (n & 1u) result = poly_mul(result, base);
    n >>= 1u;
    if (n > 0) base = poly_mul(base, base);
  }
  return result;
}

Coefficient coeff(const LaurentPoly& p, const ExponentVec& e) {
  require_arity(p.arity(), e.size(), "coeff");
  const auto& terms = p.terms();
  auto it = std::lower_bound(terms.begin(), terms.end(), e,
                             [](const Term& t, const ExponentVec& x) { return t.exponents < x; });
  if (it != terms.end() && it->exponents == e) return it->value;
  return {};
}

Coefficient select(const LaurentPoly& structure, std::span<const ExponentVec> conditions) {
  Coefficient sum{};
  for (const ExponentVec& e : conditions) sum += coeff(structure, e);
  return sum;
}

int minimum_samples(const LaurentPoly& p, const ExponentVec& e) {
  require_arity(p.arity(), e.size(), "quadrature_coeff");
  std::int64_t widest = 0;
  for (std::size_t v = 0; v < p.arity(); ++v) {
    if (e[v] == INT64_MIN) throw OverflowError("quadrature_coeff: exponent magnitude not representable");
    widest = std::max({widest, p.max_abs_exponent(v), e[v] < 0 ? -e[v] : e[v]});
  }
  if (widest > (INT32_MAX - 1) / 2) throw SamplingError("quadrature_coeff: exponents too large for a periodic grid");
  return static_cast<int>(2 * widest + 1);
}

Coefficient quadrature_coeff(const LaurentPoly& p, const ExponentVec& e, int samples_per_var) {
  const int needed = minimum_samples(p, e);
  if (samples_per_var < needed) {
    throw SamplingError("quadrature_coeff: " + std::to_string(samples_per_var) +
                        " samples per variable alias the integrand; need at least " + std::to_string(needed));
  }
  const std::size_t arity = p.arity();
  const std::int64_t s = samples_per_var;
  double points = 1.0;
  for (std::size_t v = 0; v < arity; ++v) points *= static_cast<double>(s);
  if (points > 2e8) throw SamplingError("quadrature_coeff: grid of " + std::to_string(points) + " points is too large");

  // Phases are looked up by exact residue (k * j mod s), which keeps the
  // grid angles free of accumulated rounding.
  std::vector<Coefficient> roots(static_cast<std::size_t>(s));
  for (std::int64_t q = 0; q < s; ++q) {
    roots[static_cast<std::size_t>(q)] =
        std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(s));
  }
  auto residue = [s](std::int64_t k) {
    const std::int64_t r = k % s;
    return r < 0 ? r + s : r;
  };
  std::vector<ExponentVec> term_res;
  term_res.reserve(p.size());
  for (const Term& t : p.terms()) {
    ExponentVec r(arity);
    for (std::size_t v = 0; v < arity; ++v) r[v] = residue(t.exponents[v]);
    term_res.push_back(std::move(r));
  }
  ExponentVec cond_res(arity);
  for (std::size_t v = 0; v < arity; ++v) cond_res[v] = residue(-e[v]);

  std::vector<std::int64_t> j(arity, 0);
  Coefficient total{};
  while (true) {
    Coefficient value{};
    for (std::size_t i = 0; i < term_res.size(); ++i) {
      std::int64_t q = 0;
      for (std::size_t v = 0; v < arity; ++v) q = (q + term_res[i][v] * j[v]) % s;
      value += p.terms()[i].value * roots[static_cast<std::size_t>(q)];
    }
    std::int64_t qc = 0;
    for (std::size_t v = 0; v < arity; ++v) qc = (qc + cond_res[v] * j[v]) % s;
    total += value * roots[static_cast<std::size_t>(qc)];

    std::size_t v = 0;
    while (v < arity && ++j[v] == s) j[v++] = 0;
    if (v == arity) break;
  }
  return total / points;
}

LaurentPoly extract_from_product(std::span<const LaurentPoly> factors,
                                 std::span<const std::optional<std::int64_t>> target) {
  if (factors.empty()) throw InvalidArgument("extract_from_product: no factors");
  const std::size_t arity = factors.front().arity();
  require_arity(arity, target.size(), "extract_from_product");
  for (const auto& f : factors) require_arity(arity, f.arity(), "extract_from_product");

  // suffix_lo[i][v] / suffix_hi[i][v]: exponent range reachable by factors i..end.
  const std::size_t count = factors.size();
  std::vector<ExponentVec> suffix_lo(count + 1, ExponentVec(arity, 0));
  std::vector<ExponentVec> suffix_hi(count + 1, ExponentVec(arity, 0));
  for (std::size_t i = count; i-- > 0;) {
    if (factors[i].empty()) return LaurentPoly(arity, factors.front().prune_threshold());
    for (std::size_t v = 0; v < arity; ++v) {
      suffix_lo[i][v] = checked_add(suffix_lo[i + 1][v], factors[i].min_exponent(v));
      suffix_hi[i][v] = checked_add(suffix_hi[i + 1][v], factors[i].max_exponent(v));
    }
  }

  LaurentPoly partial = LaurentPoly::constant(arity, 1.0);
  partial.set_prune_threshold(factors.front().prune_threshold());
  for (std::size_t i = 0; i < count; ++i) {
    const ExponentVec& lo = suffix_lo[i + 1];
    const ExponentVec& hi = suffix_hi[i + 1];
    auto reachable = [&](const ExponentVec& e) {
      for (std::size_t v = 0; v < arity; ++v) {
        if (!target[v]) continue;
        // need = target - e must lie in [lo, hi]; compare without overflow.
        const Wide need = static_cast<Wide>(*target[v]) - e[v];
        if (need < lo[v] || need > hi[v]) return false;
      }
      return true;
    };
    partial = LaurentPoly::from_terms(arity, multiply_terms(partial, factors[i], reachable),
                                      partial.prune_threshold());
    if (partial.empty()) break;
  }
  return partial;
}

Coefficient coeff_of_product(std::span<const LaurentPoly> factors, const ExponentVec& e) {
  std::vector<std::optional<std::int64_t>> target(e.begin(), e.end());
  return coeff(extract_from_product(factors, target), e);
}

LaurentPoly LaurentPoly::from_terms(std::size_t arity, std::vector<Term> terms, double prune_threshold) {
  LaurentPoly p(arity, prune_threshold);
  for (const Term& t : terms) require_arity(arity, t.exponents.size(), "from_terms");
  p.normalize(std::move(terms));
  return p;
}

}  // namespace teglab::csi
