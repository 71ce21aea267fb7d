#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "cosetforge/group.hpp"

namespace cosetforge {

using Cplx = std::complex<double>;
using Rat = mpq_class;

/// A scalar-valued function on a finite group, one value per element index.
/// Two scalar modes exist: Func<Cplx> for floating-point work (everything
/// spectral) and Func<Rat> for the exact-rational decomposition pipeline,
/// where every intermediate is propagated without rounding.
template <class S>
struct Func {
  GroupPtr group;
  std::vector<S> values;

  Func(GroupPtr g, std::vector<S> v) : group(std::move(g)), values(std::move(v)) {
    if (!group || values.size() != size_t(group->order()))
      fail(errc::bad_input, "function length does not match group order");
  }
  static Func zero(GroupPtr g) { return Func(g, std::vector<S>(g->order(), S(0))); }
  const S& operator[](element_t x) const { return values[x]; }
  S& operator[](element_t x) { return values[x]; }
  int size() const { return group->order(); }
};

using FuncC = Func<Cplx>;
using FuncQ = Func<Rat>;

/// A complex measure on the group, identified with its density against
/// counting measure; the total variation norm is cached on construction.
class MeasureOnG {
 public:
  MeasureOnG(GroupPtr group, std::vector<Cplx> weights);

  /// m_S: the uniform probability measure on a nonempty set S.
  static MeasureOnG uniform_on(const GroupPtr& g, const std::vector<element_t>& s);
  /// Unit point mass at x.
  static MeasureOnG point_mass(const GroupPtr& g, element_t x);

  const GroupPtr& group() const { return group_; }
  const std::vector<Cplx>& weights() const { return w_; }
  Cplx at(element_t x) const { return w_[x]; }
  double total_variation() const { return tv_; }

 private:
  GroupPtr group_;
  std::vector<Cplx> w_;
  double tv_;
};

bool same_group(const GroupPtr& a, const GroupPtr& b);
void require_same_group(const GroupPtr& a, const GroupPtr& b, const char* op);

namespace detail {
inline Cplx conj_s(const Cplx& v) { return std::conj(v); }
inline const Rat& conj_s(const Rat& v) { return v; }  // exact mode is real-valued
inline double abs_to_double(const Cplx& v) { return std::abs(v); }
inline double abs_to_double(const Rat& v) { return std::abs(v.get_d()); }
}  // namespace detail

// ---- construction helpers ----

template <class S>
Func<S> indicator(const GroupPtr& g, const std::vector<element_t>& set) {
  auto f = Func<S>::zero(g);
  for (element_t x : set) f[x] = S(1);
  return f;
}
FuncC indicator_c(const GroupPtr& g, const std::vector<element_t>& set);
FuncQ indicator_q(const GroupPtr& g, const std::vector<element_t>& set);

FuncC to_complex(const FuncQ& f);
/// Exact embedding of binary floating-point values into rationals.
/// Rejects functions with a nonzero imaginary part.
FuncQ rationalize(const FuncC& f);

// ---- convolution, translation, involution ----

/// (f*g)(x) = (1/n) sum_y f(y) g(y^-1 x), the mean normalization.
template <class S>
Func<S> convolve_mean(const Func<S>& f, const Func<S>& g) {
  require_same_group(f.group, g.group, "convolve_mean");
  const auto& G = *f.group;
  int n = G.order();
  auto out = Func<S>::zero(f.group);
  for (element_t y = 0; y < n; ++y) {
    if (f[y] == S(0)) continue;
    element_t yi = G.inv(y);
    for (element_t x = 0; x < n; ++x) out[x] += f[y] * g[G.mul(yi, x)];
  }
  for (element_t x = 0; x < n; ++x) out[x] /= n;
  return out;
}

/// (f*g)(x) = sum_y f(y) g(y^-1 x), the counting normalization.
template <class S>
Func<S> convolve_count(const Func<S>& f, const Func<S>& g) {
  require_same_group(f.group, g.group, "convolve_count");
  const auto& G = *f.group;
  int n = G.order();
  auto out = Func<S>::zero(f.group);
  for (element_t y = 0; y < n; ++y) {
    if (f[y] == S(0)) continue;
    element_t yi = G.inv(y);
    for (element_t x = 0; x < n; ++x) out[x] += f[y] * g[G.mul(yi, x)];
  }
  return out;
}

/// rho_y(f)(x) = f(xy).
template <class S>
Func<S> translate(const Func<S>& f, element_t y) {
  const auto& G = *f.group;
  auto out = Func<S>::zero(f.group);
  for (element_t x = 0; x < G.order(); ++x) out[x] = f[G.mul(x, y)];
  return out;
}

/// f~(x) = conj(f(x^-1)).
template <class S>
Func<S> tilde(const Func<S>& f) {
  const auto& G = *f.group;
  auto out = Func<S>::zero(f.group);
  for (element_t x = 0; x < G.order(); ++x) out[x] = detail::conj_s(f[G.inv(x)]);
  return out;
}

/// f * m_H: the average of f over the left coset xH, evaluated exactly in
/// rational mode. Constant on every left coset of H.
template <class S>
Func<S> coset_average(const Func<S>& f, const Subgroup& h) {
  require_same_group(f.group, h.group(), "coset_average");
  const auto& G = *f.group;
  auto out = Func<S>::zero(f.group);
  for (element_t x = 0; x < G.order(); ++x) {
    S acc(0);
    for (element_t e : h.elements()) acc += f[G.mul(x, G.inv(e))];
    out[x] = acc / S(h.order());
  }
  return out;
}

// ---- inner products (both conjugation conventions, named apart) ----

template <class S>
S inner_count(const Func<S>& f, const Func<S>& g) {
  require_same_group(f.group, g.group, "inner_count");
  S acc(0);
  for (element_t x = 0; x < f.size(); ++x) acc += f[x] * detail::conj_s(g[x]);
  return acc;
}

template <class S>
S inner_mean(const Func<S>& f, const Func<S>& g) {
  return inner_count(f, g) / S(f.size());
}

/// <f, mu> = sum_x f(x) conj(mu{x}).
Cplx inner_fn_measure(const FuncC& f, const MeasureOnG& mu);
/// <mu, f> = sum_x conj(f(x)) mu{x}.
Cplx inner_measure_fn(const MeasureOnG& mu, const FuncC& f);

// ---- norms and support ----

enum class Weighting { mean, count };

/// L_p norm with p in [1, inf]; pass std::numeric_limits<double>::infinity()
/// for the sup norm. mean weights by 1/n, count by 1.
template <class S>
double lp_norm(const Func<S>& f, double p, Weighting w) {
  int n = f.size();
  if (std::isinf(p)) {
    double m = 0;
    for (element_t x = 0; x < n; ++x) m = std::max(m, detail::abs_to_double(f[x]));
    return m;
  }
  if (p < 1) fail(errc::bad_input, "lp_norm needs p >= 1");
  double acc = 0;
  for (element_t x = 0; x < n; ++x) acc += std::pow(detail::abs_to_double(f[x]), p);
  if (w == Weighting::mean) acc /= n;
  return std::pow(acc, 1.0 / p);
}

/// L_p norm against an arbitrary probability-like weight measure (e.g. m_S).
double lp_norm(const FuncC& f, double p, const MeasureOnG& mu);

template <class S>
std::vector<element_t> support(const Func<S>& f, double tol = 0.0) {
  std::vector<element_t> out;
  for (element_t x = 0; x < f.size(); ++x)
    if (detail::abs_to_double(f[x]) > tol) out.push_back(x);
  return out;
}
std::vector<element_t> support_exact(const FuncQ& f);

// ---- almost-integer rounding ----

/// Nearest-integer rounding of an epsilon-almost integer-valued function.
/// Requires eps < 1/2 so the rounding is unique; a value at distance exactly
/// 1/2 is always rejected. eps = 0 accepts exactly integer-valued input only.
FuncQ round_almost_integer(const FuncC& f, double eps);
FuncQ round_almost_integer(const FuncQ& f, const Rat& eps);

bool is_integer_valued(const FuncQ& f);
long long rat_to_ll(const Rat& v);

/// Canonicalized rational from a raw numerator/denominator pair. The two-arg
/// mpq_class constructor keeps the pair as given, which breaks comparisons.
inline Rat make_rat(long long num, long long den) {
  if (den == 0) fail(errc::bad_input, "zero denominator");
  Rat r(static_cast<long>(num), static_cast<long>(den));
  r.canonicalize();
  return r;
}

// ---- measure arithmetic ----

/// (f*mu)(x) = sum_y f(x y^-1) mu{y}.
FuncC convolve(const FuncC& f, const MeasureOnG& mu);
/// (mu*nu){x} = sum_y mu{x y^-1} nu{y}.
MeasureOnG convolve(const MeasureOnG& mu, const MeasureOnG& nu);
/// mu~{x} = conj(mu{x^-1}).
MeasureOnG tilde(const MeasureOnG& mu);

// ---- pointwise arithmetic ----

template <class S>
Func<S> operator+(const Func<S>& f, const Func<S>& g) {
  require_same_group(f.group, g.group, "operator+");
  Func<S> out = f;
  for (element_t x = 0; x < f.size(); ++x) out[x] += g[x];
  return out;
}

template <class S>
Func<S> operator-(const Func<S>& f, const Func<S>& g) {
  require_same_group(f.group, g.group, "operator-");
  Func<S> out = f;
  for (element_t x = 0; x < f.size(); ++x) out[x] -= g[x];
  return out;
}

template <class S>
Func<S> operator*(const S& c, const Func<S>& f) {
  Func<S> out = f;
  for (element_t x = 0; x < f.size(); ++x) out[x] *= c;
  return out;
}

template <class S>
Func<S> operator*(const Func<S>& f, const S& c) {
  return c * f;
}

}  // namespace cosetforge
