#include "cosetforge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "cosetforge/addcomb.hpp"
#include "cosetforge/errors.hpp"
#include "cosetforge/func.hpp"
#include "cosetforge/group.hpp"
#include "cosetforge/spectral.hpp"

namespace cosetforge {
namespace {

std::mt19937_64 rng_for(uint64_t seed, uint64_t stream) {
  return std::mt19937_64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

FuncC random_fn(const GroupPtr& g, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  auto f = FuncC::zero(g);
  for (element_t x = 0; x < g->order(); ++x) f[x] = Cplx(d(rng), d(rng));
  return f;
}

std::vector<element_t> random_subset(const GroupPtr& g, std::mt19937_64& rng, int size) {
  std::vector<element_t> all(g->order());
  std::iota(all.begin(), all.end(), element_t(0));
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(size);
  std::sort(all.begin(), all.end());
  return all;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string set_label(const std::vector<element_t>& s) {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << '}';
  return os.str();
}

PropertyCheck check(std::string suite, std::string property, bool passed, std::string detail) {
  PropertyCheck pc;
  pc.suite = std::move(suite);
  pc.property = std::move(property);
  pc.passed = passed;
  pc.detail = std::move(detail);
  return pc;
}

// ---- coset-norm: every coset indicator has algebra norm exactly 1 ----

void suite_coset_norm(uint64_t, std::vector<PropertyCheck>& out) {
  const GroupPtr groups[] = {make_cyclic(12), make_product(make_cyclic(2), make_cyclic(4)),
                             make_dihedral(6), make_symmetric(3)};
  for (const auto& g : groups) {
    double worst = 0;
    int count = 0;
    for (const auto& h : enumerate_subgroups(g)) {
      for (const auto& c : left_cosets(h)) {
        double nrm = algebra_norm(indicator_c(g, c.members()));
        worst = std::max(worst, std::abs(nrm - 1.0));
        ++count;
      }
    }
    out.push_back(check("coset-norm", "every coset indicator has unit norm on " + g->name(),
                        worst <= 1e-9,
                        std::to_string(count) + " cosets, worst deviation " + num(worst)));
  }
}

// ---- split: additivity of the coset-average decomposition ----

void suite_split(uint64_t seed, std::vector<PropertyCheck>& out) {
  const GroupPtr groups[] = {make_boolean_cube(3), make_symmetric(3)};
  int stream = 100;
  for (const auto& g : groups) {
    auto rng = rng_for(seed, stream++);
    auto subgroups = enumerate_subgroups(g);
    double worst = 0;
    std::string worst_at = "-";
    for (int trial = 0; trial < 20; ++trial) {
      auto f = random_fn(g, rng);
      double total = algebra_norm(f);
      for (const auto& h : subgroups) {
        auto structured = coset_average(f, h);
        auto residual = f - structured;
        double gap = std::abs(total - algebra_norm(structured) - algebra_norm(residual));
        if (gap > worst) {
          worst = gap;
          worst_at = set_label(h.elements());
        }
      }
    }
    out.push_back(check("split", "norm splits additively across coset averages on " + g->name(),
                        worst <= 1e-8,
                        "20 functions x " + std::to_string(subgroups.size()) +
                            " subgroups, worst gap " + num(worst) + " at subgroup " + worst_at));
  }
}

// ---- banach: norm axioms and the dual-route agreement ----

void suite_banach(uint64_t seed, std::vector<PropertyCheck>& out) {
  {
    auto g = make_cyclic(16);
    auto rng = rng_for(seed, 200);
    double worst = 0;
    for (int t = 0; t < 30; ++t) {
      auto f = random_fn(g, rng);
      worst = std::max(worst, std::abs(algebra_norm(f) - fourier_l1_abelian(f)));
    }
    out.push_back(check("banach", "trace norm agrees with the character-sum route on Z16",
                        worst <= 1e-8, "30 functions, worst gap " + num(worst)));
  }
  const GroupPtr groups[] = {make_cyclic(16), make_symmetric(3)};
  double lowest = -std::numeric_limits<double>::infinity();
  double submult = lowest, triangle = lowest, domination = lowest;
  double homogeneity = 0, translation = 0;
  auto rng = rng_for(seed, 201);
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI), radius(0.1, 3.0);
  for (const auto& g : groups) {
    for (int t = 0; t < 20; ++t) {
      auto f = random_fn(g, rng);
      auto h = random_fn(g, rng);
      double nf = algebra_norm(f), nh = algebra_norm(h);
      submult = std::max(submult, algebra_norm(convolve_mean(f, h)) - nf * nh);
      triangle = std::max(triangle, algebra_norm(f + h) - nf - nh);
      double inf = std::numeric_limits<double>::infinity();
      domination = std::max(domination, lp_norm(f, inf, Weighting::count) - nf);
      Cplx c = std::polar(radius(rng), angle(rng));
      homogeneity = std::max(homogeneity, std::abs(algebra_norm(c * f) - std::abs(c) * nf));
      element_t y = element_t(rng() % g->order());
      translation = std::max(translation, std::abs(algebra_norm(translate(f, y)) - nf));
    }
  }
  out.push_back(check("banach", "norm of a convolution stays below the product of norms",
                      submult <= 1e-8, "40 pairs, worst excess " + num(submult)));
  out.push_back(check("banach", "triangle inequality", triangle <= 1e-8,
                      "40 pairs, worst excess " + num(triangle)));
  out.push_back(check("banach", "sup norm is dominated by the algebra norm", domination <= 1e-9,
                      "40 functions, worst excess " + num(domination)));
  out.push_back(check("banach", "absolute homogeneity", homogeneity <= 1e-8,
                      "40 scalings, worst gap " + num(homogeneity)));
  out.push_back(check("banach", "translation invariance", translation <= 1e-9,
                      "40 translates, worst gap " + num(translation)));
}

// ---- cover: eta-closure of subgroups and externally re-checked covers ----

void suite_cover(uint64_t seed, std::vector<PropertyCheck>& out) {
  {
    double worst = 0;
    int count = 0;
    for (const auto& g : {make_cyclic(12), make_dihedral(6)}) {
      for (const auto& h : enumerate_subgroups(g)) {
        auto w = check_eta_closed(g, h.elements(), h.elements(), h.elements(), h.elements(), true);
        worst = std::max(worst, w.eta_achieved);
        ++count;
      }
    }
    out.push_back(check("cover", "every subgroup closes on itself with eta 0", worst == 0.0,
                        std::to_string(count) + " subgroups, worst eta " + num(worst)));
  }
  auto rng = rng_for(seed, 300);
  int pairs = 0, failed = 0;
  std::string first_bad = "-";
  auto run_pair = [&](const GroupPtr& g, const std::vector<element_t>& x,
                      const std::vector<element_t>& w) {
    ++pairs;
    auto res = ruzsa_cover(g, x, w);
    auto wx = product_set(g, w, x);
    bool ok = res.translates.size() * w.size() <= wx.size();
    for (element_t t : res.translates)
      ok = ok && std::binary_search(x.begin(), x.end(), t);
    auto wiw = product_set(g, inverse_set(g, w), w);
    std::vector<uint8_t> covered(g->order(), 0);
    for (element_t t : res.translates)
      for (element_t u : wiw) covered[g->mul(u, t)] = 1;
    for (element_t e : x) ok = ok && covered[e];
    if (!ok && failed++ == 0)
      first_bad = "X=" + set_label(x) + " W=" + set_label(w) + " on " + g->name();
  };
  auto z64 = make_cyclic(64);
  for (int t = 0; t < 25; ++t)
    run_pair(z64, random_subset(z64, rng, 1 + int(rng() % 20)),
             random_subset(z64, rng, 1 + int(rng() % 8)));
  auto s4 = make_symmetric(4);
  for (int t = 0; t < 25; ++t)
    run_pair(s4, random_subset(s4, rng, 1 + int(rng() % 12)),
             random_subset(s4, rng, 1 + int(rng() % 6)));
  out.push_back(check("cover", "covering translates satisfy the size bound and cover the set",
                      failed == 0,
                      failed == 0 ? std::to_string(pairs) + " random pairs re-checked"
                                  : "first failure at " + first_bad));
}

// ---- cs: sampled convolution estimates ----

void suite_cs(uint64_t seed, std::vector<PropertyCheck>& out) {
  auto g = make_cyclic(64);
  auto rng = rng_for(seed, 400);
  auto f = random_fn(g, rng);
  std::vector<FuncC> family;
  family.reserve(g->order());
  for (element_t y = 0; y < g->order(); ++y) family.push_back(translate(f, y));
  auto h = generated_subgroup(g, {8});
  auto nu = MeasureOnG::uniform_on(g, h.elements());
  auto base = croot_sisask_trial(nu, family, 2.0, 0.5, 200, seed);
  out.push_back(check("cs", "sampled estimates hit the L2 tolerance often enough",
                      base.success_rate >= 0.35,
                      "r=" + std::to_string(base.r_used) + ", 200 trials, success rate " +
                          num(base.success_rate)));
  const int rs[3] = {4, 16, 64};
  double rates[3];
  for (int i = 0; i < 3; ++i)
    rates[i] = croot_sisask_trial(nu, family, 2.0, 0.5, 200, seed + 1, rs[i]).success_rate;
  bool monotone = rates[0] <= rates[1] + 0.05 && rates[1] <= rates[2] + 0.05;
  out.push_back(check("cs", "success rate grows with the sample count", monotone,
                      "r=4/16/64 -> " + num(rates[0]) + "/" + num(rates[1]) + "/" +
                          num(rates[2])));
}

// ---- ct: counting identities, certificates, energy ----

bool reverify_witness(const GroupPtr& g, const std::vector<element_t>& a,
                      const ConnectivityWitness& w, int k, int l) {
  if (w.r < 1 || w.r > l) return false;
  size_t t = 2 * static_cast<size_t>(w.r) + 1;
  if (w.index_vector.size() != t || w.signs.size() != t) return false;
  if (w.x.size() != static_cast<size_t>(k)) return false;
  std::vector<int> sorted = w.index_vector;
  std::sort(sorted.begin(), sorted.end());
  int singles = 0;
  for (size_t j = 0; j < sorted.size();) {
    size_t e = j;
    while (e < sorted.size() && sorted[e] == sorted[j]) ++e;
    if (e - j == 1) ++singles;
    j = e;
  }
  if (singles < 2) return false;
  element_t acc = g->identity();
  for (size_t j = 0; j < t; ++j) {
    if (w.index_vector[j] < 0 || w.index_vector[j] >= k) return false;
    element_t f = w.x[w.index_vector[j]];
    acc = g->mul(acc, w.signs[j] > 0 ? f : g->inv(f));
  }
  return std::binary_search(a.begin(), a.end(), acc);
}

// Exhaustively confirms the tuple has no witness at any r <= l.
bool no_witness_exists(const GroupPtr& g, const std::vector<element_t>& a,
                       const std::vector<element_t>& tuple, int l) {
  int k = int(tuple.size());
  for (int r = 1; r <= l; ++r) {
    int t = 2 * r + 1;
    std::vector<int> idx(t, 0);
    while (true) {
      std::vector<int> sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      int singles = 0;
      for (size_t j = 0; j < sorted.size();) {
        size_t e = j;
        while (e < sorted.size() && sorted[e] == sorted[j]) ++e;
        if (e - j == 1) ++singles;
        j = e;
      }
      if (singles >= 2) {
        for (int mask = 0; mask < (1 << t); ++mask) {
          element_t acc = g->identity();
          for (int j = 0; j < t; ++j) {
            element_t f = tuple[idx[j]];
            acc = g->mul(acc, (mask >> j) & 1 ? g->inv(f) : f);
          }
          if (std::binary_search(a.begin(), a.end(), acc)) return false;
        }
      }
      int pos = t - 1;
      while (pos >= 0 && idx[pos] == k - 1) idx[pos--] = 0;
      if (pos < 0) break;
      ++idx[pos];
    }
  }
  return true;
}

void suite_ct(uint64_t seed, std::vector<PropertyCheck>& out) {
  {
    bool ok = true;
    std::string bad;
    for (int k = 1; k <= 4 && ok; ++k)
      for (int r = 1; r <= 3 && ok; ++r) {
        int t = 2 * r + 1;
        auto counts = trivial_indices(k, t);
        long long total = 1;
        for (int i = 0; i < t; ++i) total *= k;
        long long cap = static_cast<long long>(t) * k * r_multi_count(k, r);
        if (counts.trivial + counts.nontrivial != total || counts.trivial > cap) {
          ok = false;
          bad = "k=" + std::to_string(k) + " r=" + std::to_string(r);
        }
      }
    out.push_back(check("ct", "index-vector counts partition k^t under the surjection bound",
                        ok, ok ? "k <= 4, r <= 3 all verified" : "failed at " + bad));
  }
  {
    auto z12 = make_cyclic(12);
    auto h = generated_subgroup(z12, {4});
    auto cert = is_arithmetically_connected(z12, h.elements(), 3, 1);
    int verified = 0;
    for (const auto& w : cert.witnesses)
      if (reverify_witness(z12, h.elements(), w, 3, 1)) ++verified;
    bool ok = cert.verdict == ConnectivityVerdict::connected &&
              verified == int(cert.witnesses.size());
    out.push_back(check("ct", "connectivity witnesses re-verify independently", ok,
                        std::to_string(verified) + "/" + std::to_string(cert.witnesses.size()) +
                            " witnesses on the order-3 subgroup of Z12"));
  }
  {
    auto z101 = make_cyclic(101);
    std::vector<element_t> a = {3, 10, 45};
    auto cert = is_arithmetically_connected(z101, a, 3, 1);
    bool ok = cert.verdict == ConnectivityVerdict::counterexample &&
              no_witness_exists(z101, a, cert.counterexample, 1);
    out.push_back(check("ct", "reported counterexamples admit no witness", ok,
                        "tuple " + set_label(cert.counterexample) + " of " + set_label(a) +
                            " in Z101, re-checked exhaustively"));
  }
  {
    auto g = make_cyclic(20);
    auto rng = rng_for(seed, 500);
    bool ok = true;
    std::string bad = "-";
    for (int t = 0; t < 10 && ok; ++t) {
      auto a = random_subset(g, rng, 1 + int(rng() % 8));
      auto b = random_subset(g, rng, 1 + int(rng() % 8));
      long long e = energy(g, a, b);
      long long rect = static_cast<long long>(a.size()) * static_cast<long long>(b.size());
      std::set<element_t> products;
      for (element_t x : a)
        for (element_t y : b) products.insert(g->mul(x, y));
      bool distinct = products.size() == size_t(rect);
      ok = e >= rect && (e == rect) == distinct;
      if (!ok) bad = "A=" + set_label(a) + " B=" + set_label(b);
    }
    out.push_back(check("ct", "energy is at least |A||B| with equality iff products are distinct",
                        ok, ok ? "10 random pairs on Z20" : "failed at " + bad));
  }
}

using SuiteFn = void (*)(uint64_t, std::vector<PropertyCheck>&);

struct SuiteEntry {
  const char* name;
  SuiteFn fn;
};

const SuiteEntry kSuites[] = {{"coset-norm", suite_coset_norm}, {"split", suite_split},
                              {"banach", suite_banach},         {"cover", suite_cover},
                              {"cs", suite_cs},                 {"ct", suite_ct}};

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : kSuites) v.emplace_back(s.name);
    return v;
  }();
  return names;
}

std::vector<PropertyCheck> run_verify_suite(const std::string& suite, uint64_t seed) {
  std::vector<PropertyCheck> out;
  if (suite == "all") {
    for (const auto& s : kSuites) s.fn(seed, out);
    return out;
  }
  for (const auto& s : kSuites)
    if (suite == s.name) {
      s.fn(seed, out);
      return out;
    }
  fail(errc::suite_unknown,
       "unknown verify suite: " + suite + " (expected all, coset-norm, split, banach, cover, cs, ct)");
}

}  // namespace cosetforge
