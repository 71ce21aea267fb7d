#include "cosetforge/func.hpp"

#include <algorithm>
#include <sstream>

namespace cosetforge {

bool same_group(const GroupPtr& a, const GroupPtr& b) {
  if (a.get() == b.get()) return true;
  return a && b && a->order() == b->order() && a->flat_table() == b->flat_table();
}

void require_same_group(const GroupPtr& a, const GroupPtr& b, const char* op) {
  if (!same_group(a, b))
    fail(errc::group_mismatch, std::string(op) + " needs both operands on one group");
}

MeasureOnG::MeasureOnG(GroupPtr group, std::vector<Cplx> weights)
    : group_(std::move(group)), w_(std::move(weights)) {
  if (!group_ || w_.size() != size_t(group_->order()))
    fail(errc::bad_input, "measure length does not match group order");
  tv_ = 0;
  for (const Cplx& v : w_) tv_ += std::abs(v);
}

MeasureOnG MeasureOnG::uniform_on(const GroupPtr& g, const std::vector<element_t>& s) {
  if (s.empty()) fail(errc::empty_set, "uniform measure needs a nonempty set");
  std::vector<Cplx> w(g->order(), 0.0);
  for (element_t x : s) w[x] = 1.0 / double(s.size());
  return MeasureOnG(g, std::move(w));
}

MeasureOnG MeasureOnG::point_mass(const GroupPtr& g, element_t x) {
  std::vector<Cplx> w(g->order(), 0.0);
  w[x] = 1.0;
  return MeasureOnG(g, std::move(w));
}

FuncC indicator_c(const GroupPtr& g, const std::vector<element_t>& set) {
  return indicator<Cplx>(g, set);
}
FuncQ indicator_q(const GroupPtr& g, const std::vector<element_t>& set) {
  return indicator<Rat>(g, set);
}

FuncC to_complex(const FuncQ& f) {
  auto out = FuncC::zero(f.group);
  for (element_t x = 0; x < f.size(); ++x) out[x] = f[x].get_d();
  return out;
}

FuncQ rationalize(const FuncC& f) {
  auto out = FuncQ::zero(f.group);
  for (element_t x = 0; x < f.size(); ++x) {
    if (f[x].imag() != 0.0)
      fail(errc::bad_input, "complex values cannot enter the exact pipeline");
    out[x] = Rat(f[x].real());  // binary floats embed exactly
  }
  return out;
}

Cplx inner_fn_measure(const FuncC& f, const MeasureOnG& mu) {
  require_same_group(f.group, mu.group(), "inner_fn_measure");
  Cplx acc = 0;
  for (element_t x = 0; x < f.size(); ++x) acc += f[x] * std::conj(mu.at(x));
  return acc;
}

Cplx inner_measure_fn(const MeasureOnG& mu, const FuncC& f) {
  require_same_group(f.group, mu.group(), "inner_measure_fn");
  Cplx acc = 0;
  for (element_t x = 0; x < f.size(); ++x) acc += std::conj(f[x]) * mu.at(x);
  return acc;
}

double lp_norm(const FuncC& f, double p, const MeasureOnG& mu) {
  require_same_group(f.group, mu.group(), "lp_norm");
  if (std::isinf(p)) {
    double m = 0;
    for (element_t x = 0; x < f.size(); ++x)
      if (std::abs(mu.at(x)) > 0) m = std::max(m, std::abs(f[x]));
    return m;
  }
  if (p < 1) fail(errc::bad_input, "lp_norm needs p >= 1");
  double acc = 0;
  for (element_t x = 0; x < f.size(); ++x)
    acc += std::pow(std::abs(f[x]), p) * std::abs(mu.at(x));
  return std::pow(acc, 1.0 / p);
}

std::vector<element_t> support_exact(const FuncQ& f) {
  std::vector<element_t> out;
  for (element_t x = 0; x < f.size(); ++x)
    if (f[x] != 0) out.push_back(x);
  return out;
}

namespace {

[[noreturn]] void reject_rounding(element_t x, double dist, double eps) {
  std::ostringstream msg;
  msg << "value at x=" << x << " is " << dist << " from the nearest integer (eps=" << eps
      << ")";
  fail(errc::not_almost_integer, msg.str());
}

}  // namespace

FuncQ round_almost_integer(const FuncC& f, double eps) {
  if (!(eps < 0.5)) fail(errc::ambiguous_epsilon, "rounding needs eps < 1/2");
  if (eps < 0) fail(errc::bad_input, "eps must be nonnegative");
  auto out = FuncQ::zero(f.group);
  element_t worst = -1;
  double worst_dist = -1;
  for (element_t x = 0; x < f.size(); ++x) {
    double m = std::nearbyint(f[x].real());
    double dist = std::abs(f[x] - Cplx(m, 0.0));
    if (!(dist < eps || dist == 0)) {
      if (dist > worst_dist) { worst_dist = dist; worst = x; }
    }
    out[x] = Rat(m);
  }
  if (worst >= 0) reject_rounding(worst, worst_dist, eps);
  return out;
}

FuncQ round_almost_integer(const FuncQ& f, const Rat& eps) {
  if (!(eps < Rat(1, 2))) fail(errc::ambiguous_epsilon, "rounding needs eps < 1/2");
  if (eps < 0) fail(errc::bad_input, "eps must be nonnegative");
  auto out = FuncQ::zero(f.group);
  element_t worst = -1;
  Rat worst_dist(-1);
  for (element_t x = 0; x < f.size(); ++x) {
    // nearest integer: floor(v + 1/2); the distance check rejects exact ties
    Rat shifted = f[x] + Rat(1, 2);
    mpz_class m;
    mpz_fdiv_q(m.get_mpz_t(), shifted.get_num().get_mpz_t(), shifted.get_den().get_mpz_t());
    Rat dist = abs(f[x] - Rat(m));
    if (!(dist < eps || dist == 0)) {
      if (dist > worst_dist) { worst_dist = dist; worst = x; }
    }
    out[x] = Rat(m);
  }
  if (worst >= 0) reject_rounding(worst, worst_dist.get_d(), eps.get_d());
  return out;
}

bool is_integer_valued(const FuncQ& f) {
  for (element_t x = 0; x < f.size(); ++x)
    if (f[x].get_den() != 1) return false;
  return true;
}

long long rat_to_ll(const Rat& v) {
  if (v.get_den() != 1 || !v.get_num().fits_slong_p())
    fail(errc::bad_input, "rational is not a machine integer");
  return v.get_num().get_si();
}

FuncC convolve(const FuncC& f, const MeasureOnG& mu) {
  require_same_group(f.group, mu.group(), "convolve");
  const auto& G = *f.group;
  auto out = FuncC::zero(f.group);
  for (element_t y = 0; y < G.order(); ++y) {
    if (mu.at(y) == Cplx(0)) continue;
    for (element_t x = 0; x < G.order(); ++x)
      out[x] += f[G.mul(x, G.inv(y))] * mu.at(y);
  }
  return out;
}

MeasureOnG convolve(const MeasureOnG& mu, const MeasureOnG& nu) {
  require_same_group(mu.group(), nu.group(), "convolve");
  const auto& G = *mu.group();
  std::vector<Cplx> w(G.order(), 0.0);
  for (element_t y = 0; y < G.order(); ++y) {
    if (nu.at(y) == Cplx(0)) continue;
    for (element_t x = 0; x < G.order(); ++x)
      w[x] += mu.at(G.mul(x, G.inv(y))) * nu.at(y);
  }
  return MeasureOnG(mu.group(), std::move(w));
}

MeasureOnG tilde(const MeasureOnG& mu) {
  const auto& G = *mu.group();
  std::vector<Cplx> w(G.order(), 0.0);
  for (element_t x = 0; x < G.order(); ++x) w[x] = std::conj(mu.at(G.inv(x)));
  return MeasureOnG(mu.group(), std::move(w));
}

}  // namespace cosetforge
