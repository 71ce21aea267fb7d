#include "cosetforge/addcomb.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cosetforge/errors.hpp"
#include "cosetforge/group.hpp"

namespace cosetforge {

namespace {

constexpr long long kMaxEnumeration = 10'000'000;

std::vector<element_t> canon_set(const GroupPtr& g, std::vector<element_t> a,
                                 const std::string& what) {
  if (!g) fail(errc::bad_input, what + ": no group");
  if (a.empty()) fail(errc::empty_set, what + ": empty set");
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  if (a.front() < 0 || a.back() >= g->order())
    fail(errc::bad_input, what + ": element out of range");
  return a;
}

std::vector<char> member_mask(const GroupPtr& g, const std::vector<element_t>& a) {
  std::vector<char> m(g->order(), 0);
  for (element_t x : a) m[x] = 1;
  return m;
}

std::string tuple_label(const std::vector<element_t>& t) {
  std::string s = "(";
  for (size_t j = 0; j < t.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(t[j]);
  }
  return s + ")";
}

long long checked_pow(long long base, int expo, const std::string& what) {
  long long p = 1;
  for (int j = 0; j < expo; ++j) {
    if (p > kMaxEnumeration / std::max<long long>(base, 1))
      fail(errc::enumeration_too_large,
           what + ": " + std::to_string(base) + "^" + std::to_string(expo) +
               " exceeds the enumeration cap of 10^7");
    p *= base;
  }
  return p;
}

// Number of values that occur exactly once among the digits.
int unique_values(const std::vector<int>& digits) {
  auto s = digits;
  std::sort(s.begin(), s.end());
  int singles = 0;
  for (size_t j = 0; j < s.size();) {
    size_t e = j;
    while (e < s.size() && s[e] == s[j]) ++e;
    if (e - j == 1) ++singles;
    j = e;
  }
  return singles;
}

bool next_digits(std::vector<int>& digits, int base) {
  int j = static_cast<int>(digits.size()) - 1;
  while (j >= 0 && digits[j] == base - 1) digits[j--] = 0;
  if (j < 0) return false;
  ++digits[j];
  return true;
}

struct Pattern {
  int r;
  std::vector<int> idx;
  std::vector<int> signs;
};

// All candidate words in search order: increasing r, lexicographic index
// vector (nontrivial only), then signs with all-positive first.
std::vector<Pattern> word_patterns(int k, int l, const std::string& what) {
  std::vector<Pattern> out;
  for (int r = 1; r <= l; ++r) {
    int t = 2 * r + 1;
    if (t > 20) fail(errc::enumeration_too_large, what + ": word length over 20");
    checked_pow(k, t, what);
    std::vector<int> idx(t, 0);
    do {
      if (unique_values(idx) < 2) continue;
      for (unsigned long long sm = 0; sm < (1ull << t); ++sm) {
        Pattern p;
        p.r = r;
        p.idx = idx;
        p.signs.resize(t);
        for (int j = 0; j < t; ++j) p.signs[j] = (sm >> j) & 1 ? -1 : 1;
        out.push_back(std::move(p));
      }
    } while (next_digits(idx, k));
  }
  return out;
}

element_t word_value(const FiniteGroup& G, const std::vector<element_t>& tup,
                     const Pattern& p) {
  element_t acc = G.identity();
  for (size_t j = 0; j < p.idx.size(); ++j) {
    element_t f = tup[p.idx[j]];
    acc = G.mul(acc, p.signs[j] > 0 ? f : G.inv(f));
  }
  return acc;
}

ConnectivityCertificate connectivity_scan(const GroupPtr& g, std::vector<element_t> a,
                                          int k, int l, const SampleMode* mode) {
  if (k < 1) fail(errc::bad_input, "is_arithmetically_connected: k must be at least 1");
  if (l < 1) fail(errc::bad_input, "is_arithmetically_connected: l must be at least 1");
  auto patterns = word_patterns(k, l, "is_arithmetically_connected");
  auto mask = member_mask(g, a);
  int m = static_cast<int>(a.size());

  ConnectivityCertificate cert;
  cert.k = k;
  cert.l = l;

  std::mt19937_64 rng(mode ? mode->seed : 0);
  std::uniform_int_distribution<int> pick(0, m - 1);
  long long total = mode ? mode->samples
                         : checked_pow(m, k,
                                       "is_arithmetically_connected (use the sampling mode)");
  if (mode && mode->samples < 1)
    fail(errc::bad_input, "is_arithmetically_connected: need at least one sample");

  std::vector<int> pos(k, 0);
  std::vector<element_t> tup(k);
  for (long long step = 0; step < total; ++step) {
    if (mode)
      for (int j = 0; j < k; ++j) tup[j] = a[pick(rng)];
    else
      for (int j = 0; j < k; ++j) tup[j] = a[pos[j]];
    ++cert.tuples_checked;

    const Pattern* hit = nullptr;
    for (const auto& p : patterns)
      if (mask[word_value(*g, tup, p)]) {
        hit = &p;
        break;
      }
    if (!hit) {
      cert.verdict = ConnectivityVerdict::counterexample;
      cert.counterexample = tup;
      cert.witnesses.clear();
      return cert;
    }
    cert.witnesses.push_back({tup, hit->r, hit->idx, hit->signs});
    if (!mode) next_digits(pos, m);
  }
  cert.verdict = mode ? ConnectivityVerdict::inconclusive : ConnectivityVerdict::connected;
  return cert;
}

std::vector<long long> product_counts(const GroupPtr& g, const std::vector<element_t>& a,
                                      const std::vector<element_t>& b) {
  auto r = convolve_count(indicator_q(g, a), indicator_q(g, b));
  std::vector<long long> out(g->order());
  for (element_t x = 0; x < g->order(); ++x) out[x] = rat_to_ll(r[x]);
  return out;
}

}  // namespace

std::vector<element_t> product_set(const GroupPtr& g, const std::vector<element_t>& a,
                                   const std::vector<element_t>& b) {
  auto ca = canon_set(g, a, "product_set");
  auto cb = canon_set(g, b, "product_set");
  std::vector<char> seen(g->order(), 0);
  for (element_t x : ca)
    for (element_t y : cb) seen[g->mul(x, y)] = 1;
  std::vector<element_t> out;
  for (element_t x = 0; x < g->order(); ++x)
    if (seen[x]) out.push_back(x);
  return out;
}

std::vector<element_t> inverse_set(const GroupPtr& g, const std::vector<element_t>& a) {
  auto ca = canon_set(g, a, "inverse_set");
  std::vector<element_t> out;
  out.reserve(ca.size());
  for (element_t x : ca) out.push_back(g->inv(x));
  std::sort(out.begin(), out.end());
  return out;
}

double doubling_ratio(const GroupPtr& g, const std::vector<element_t>& a) {
  auto ca = canon_set(g, a, "doubling_ratio");
  auto quot = product_set(g, ca, inverse_set(g, ca));
  return static_cast<double>(quot.size()) / static_cast<double>(ca.size());
}

EtaClosedWitness check_eta_closed(const GroupPtr& g, const std::vector<element_t>& z,
                                  const std::vector<element_t>& x,
                                  const std::vector<element_t>& zplus,
                                  const std::vector<element_t>& zminus,
                                  bool as_neighbourhoods) {
  EtaClosedWitness w;
  w.z = canon_set(g, z, "check_eta_closed Z");
  w.x = canon_set(g, x, "check_eta_closed X");
  w.zplus = canon_set(g, zplus, "check_eta_closed Zplus");
  w.zminus = canon_set(g, zminus, "check_eta_closed Zminus");

  if (as_neighbourhoods) {
    const std::pair<const char*, const std::vector<element_t>*> sets[] = {
        {"Z", &w.z}, {"X", &w.x}, {"Zplus", &w.zplus}, {"Zminus", &w.zminus}};
    for (const auto& [name, s] : sets) {
      auto ms = member_mask(g, *s);
      if (!ms[g->identity()])
        fail(errc::not_symmetric, std::string(name) + " does not contain the identity");
      for (element_t e : *s)
        if (!ms[g->inv(e)])
          fail(errc::not_symmetric, std::string(name) + " contains " + std::to_string(e) +
                                        " but not its inverse " +
                                        std::to_string(g->inv(e)));
    }
  }

  auto in_z = member_mask(g, w.z);
  auto in_zplus = member_mask(g, w.zplus);
  for (element_t zm : w.zminus)
    for (element_t xx : w.x) {
      element_t p = g->mul(zm, xx);
      if (!in_z[p])
        fail(errc::inclusion_violation,
             "Zminus*X is not inside Z: " + std::to_string(zm) + " * " +
                 std::to_string(xx) + " = " + std::to_string(p));
    }
  for (element_t zz : w.z)
    for (element_t xx : w.x) {
      element_t p = g->mul(zz, g->inv(xx));
      if (!in_zplus[p])
        fail(errc::inclusion_violation,
             "Z*X^-1 is not inside Zplus: " + std::to_string(zz) + " * inv(" +
                 std::to_string(xx) + ") = " + std::to_string(p));
    }

  auto in_zminus = member_mask(g, w.zminus);
  long long extra = 0;
  for (element_t e : w.zplus)
    if (!in_zminus[e]) ++extra;
  w.eta_achieved = static_cast<double>(extra) / static_cast<double>(w.z.size());
  return w;
}

CoverResult ruzsa_cover(const GroupPtr& g, const std::vector<element_t>& x,
                        const std::vector<element_t>& w) {
  auto cx = canon_set(g, x, "ruzsa_cover X");
  auto cw = canon_set(g, w, "ruzsa_cover W");
  auto wx = product_set(g, cw, cx);

  CoverResult res;
  res.bound = static_cast<double>(wx.size()) / static_cast<double>(cw.size());

  // Greedy maximal family of pairwise disjoint translates W t, t in X.
  std::vector<char> taken(g->order(), 0);
  for (element_t t : cx) {
    bool clash = false;
    for (element_t ww : cw)
      if (taken[g->mul(ww, t)]) {
        clash = true;
        break;
      }
    if (clash) continue;
    res.translates.push_back(t);
    for (element_t ww : cw) taken[g->mul(ww, t)] = 1;
  }

  if (res.translates.size() * cw.size() > wx.size())
    fail(errc::mismatch, "ruzsa_cover: translate count exceeds |W*X|/|W|");
  std::vector<char> reach(g->order(), 0);
  for (element_t t : res.translates)
    for (element_t w1 : cw)
      for (element_t w2 : cw) reach[g->mul(g->inv(w1), g->mul(w2, t))] = 1;
  for (element_t e : cx)
    if (!reach[e])
      fail(errc::mismatch,
           "ruzsa_cover: " + std::to_string(e) + " is missed by the W^-1 W t cover");
  return res;
}

IndexCounts trivial_indices(int k, int t) {
  if (k < 1 || t < 1) fail(errc::bad_input, "trivial_indices: k and t must be positive");
  checked_pow(k, t, "trivial_indices");
  IndexCounts out;
  std::vector<int> digits(t, 0);
  do {
    if (unique_values(digits) <= 1)
      ++out.trivial;
    else
      ++out.nontrivial;
  } while (next_digits(digits, k));
  return out;
}

long long r_multi_count(int k, int r) {
  if (k < 1 || r < 1) fail(errc::bad_input, "r_multi_count: k and r must be positive");
  checked_pow(k, 2 * r, "r_multi_count");
  long long count = 0;
  std::vector<int> digits(2 * r, 0);
  do {
    if (unique_values(digits) == 0) ++count;
  } while (next_digits(digits, k));
  return count;
}

ConnectivityCertificate is_arithmetically_connected(const GroupPtr& g,
                                                    const std::vector<element_t>& a, int k,
                                                    int l) {
  return connectivity_scan(g, canon_set(g, a, "is_arithmetically_connected"), k, l,
                           nullptr);
}

ConnectivityCertificate is_arithmetically_connected(const GroupPtr& g,
                                                    const std::vector<element_t>& a, int k,
                                                    int l, const SampleMode& mode) {
  return connectivity_scan(g, canon_set(g, a, "is_arithmetically_connected"), k, l,
                           &mode);
}

long long energy(const GroupPtr& g, const std::vector<element_t>& a,
                 const std::vector<element_t>& b) {
  auto ca = canon_set(g, a, "energy");
  auto cb = canon_set(g, b, "energy");
  auto counts = product_counts(g, ca, cb);
  long long e = 0;
  for (long long c : counts) e += c * c;
  return e;
}

BsgResult bsg_extract(const GroupPtr& g, const std::vector<element_t>& a,
                      const std::vector<element_t>& b, double threshold_k) {
  auto ca = canon_set(g, a, "bsg_extract A");
  auto cb = canon_set(g, b, "bsg_extract B");
  if (!(threshold_k > 0)) fail(errc::bad_input, "bsg_extract: threshold must be positive");

  long long e = energy(g, ca, cb);
  double need = static_cast<double>(ca.size()) * ca.size() * ca.size() / threshold_k;
  if (static_cast<double>(e) + 1e-9 < need)
    fail(errc::threshold_unmet, "energy " + std::to_string(e) + " is below |A|^3 / K = " +
                                    std::to_string(need));

  // Bipartite graph on A x B keeping pairs whose product is popular.
  auto counts = product_counts(g, ca, cb);
  double theta = static_cast<double>(e) /
                 (2.0 * static_cast<double>(ca.size()) * static_cast<double>(cb.size()));
  int na = static_cast<int>(ca.size());
  int nb = static_cast<int>(cb.size());
  std::vector<std::vector<char>> adj(na, std::vector<char>(nb, 0));
  std::vector<long long> deg(na, 0);
  long long edges = 0;
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j)
      if (static_cast<double>(counts[g->mul(ca[i], cb[j])]) + 1e-9 >= theta) {
        adj[i][j] = 1;
        ++deg[i];
        ++edges;
      }

  // Keep at-least-half-average degree, anchor at the busiest vertex, and
  // gather everything sharing enough popular neighbours with the anchor.
  double half_avg = static_cast<double>(edges) / (2.0 * na);
  int anchor = -1;
  for (int i = 0; i < na; ++i) {
    if (static_cast<double>(deg[i]) + 1e-9 < half_avg) continue;
    if (anchor < 0 || deg[i] > deg[anchor]) anchor = i;
  }
  double density = static_cast<double>(edges) /
                   (static_cast<double>(na) * static_cast<double>(nb));
  double cothresh = density * density * nb / 2.0;

  BsgResult res;
  for (int i = 0; i < na; ++i) {
    if (static_cast<double>(deg[i]) + 1e-9 < half_avg) continue;
    long long co = 0;
    for (int j = 0; j < nb; ++j)
      if (adj[i][j] && adj[anchor][j]) ++co;
    if (i == anchor || static_cast<double>(co) + 1e-9 >= cothresh)
      res.subset.push_back(ca[i]);
  }
  res.fraction = static_cast<double>(res.subset.size()) / static_cast<double>(ca.size());
  res.doubling = doubling_ratio(g, res.subset);
  res.energy_found = e;
  return res;
}

CsTrialResult croot_sisask_trial(const MeasureOnG& nu, const std::vector<FuncC>& family,
                                 double p, double eps, int trials, uint64_t seed,
                                 int r_override) {
  const GroupPtr& g = nu.group();
  int n = g->order();
  if (p < 2) fail(errc::bad_input, "croot_sisask_trial: p must be at least 2");
  if (!(eps > 0) || eps > 1)
    fail(errc::bad_input, "croot_sisask_trial: eps must lie in (0, 1]");
  if (trials < 1) fail(errc::bad_input, "croot_sisask_trial: need at least one trial");
  if (r_override < 0) fail(errc::bad_input, "croot_sisask_trial: negative sample count");
  if (static_cast<int>(family.size()) != n)
    fail(errc::bad_input, "croot_sisask_trial: need one function per group element");
  for (const auto& f : family) require_same_group(f.group, g, "croot_sisask_trial");

  double tv = nu.total_variation();
  if (tv <= 0) fail(errc::degenerate_measure, "measure has zero total variation");
  int r = r_override > 0 ? r_override : static_cast<int>(std::ceil(8.0 * p / (eps * eps)));

  auto target = FuncC::zero(g);
  double scale = 0;
  std::vector<double> wts(n);
  for (element_t om = 0; om < n; ++om) {
    scale = std::max(scale, lp_norm(family[om], p, Weighting::mean));
    Cplx wgt = nu.at(om);
    wts[om] = std::abs(wgt);
    if (wgt == Cplx(0)) continue;
    for (element_t y = 0; y < n; ++y) target.values[y] += wgt * family[om][y];
  }

  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> draw(wts.begin(), wts.end());
  int successes = 0;
  for (int trial = 0; trial < trials; ++trial) {
    auto est = FuncC::zero(g);
    for (int i = 0; i < r; ++i) {
      element_t om = draw(rng);
      Cplx h = tv * nu.at(om) / std::abs(nu.at(om));
      for (element_t y = 0; y < n; ++y) est.values[y] += h * family[om][y];
    }
    for (element_t y = 0; y < n; ++y) est.values[y] /= static_cast<double>(r);
    if (lp_norm(target - est, p, Weighting::mean) <= eps * scale) ++successes;
  }
  return {r, trials, static_cast<double>(successes) / trials};
}

StructSubsetResult find_struct_subset(const FuncC& f, double eps, int k, int l) {
  if (!f.group) fail(errc::bad_input, "find_struct_subset: no group");
  if (k < 2) fail(errc::bad_input, "find_struct_subset: k must be at least 2");
  if (l < 1) fail(errc::bad_input, "find_struct_subset: l must be at least 1");
  const GroupPtr& g = f.group;
  const FiniteGroup& G = *g;

  auto fz = round_almost_integer(f, eps);
  auto a = support_exact(fz);
  if (a.empty()) fail(errc::empty_set, "find_struct_subset: rounded function is zero");
  int m = static_cast<int>(a.size());
  checked_pow(m, k, "find_struct_subset");

  // Averaging step: count, for every candidate word, how many tuples from
  // A^k it maps back into A. A tuple matching no word at all refutes
  // connectivity and there is nothing to extract.
  auto patterns = word_patterns(k, l, "find_struct_subset");
  auto mask = member_mask(g, a);
  std::vector<long long> hits(patterns.size(), 0);
  std::vector<int> pos(k, 0);
  std::vector<element_t> tup(k);
  while (true) {
    for (int j = 0; j < k; ++j) tup[j] = a[pos[j]];
    bool any = false;
    for (size_t pi = 0; pi < patterns.size(); ++pi)
      if (mask[word_value(G, tup, patterns[pi])]) {
        ++hits[pi];
        any = true;
      }
    if (!any)
      fail(errc::no_popular_pattern,
           "support is not (" + std::to_string(k) + "," + std::to_string(l) +
               ")-connected: tuple " + tuple_label(tup) + " matches no word");
    if (!next_digits(pos, m)) break;
  }
  size_t best = 0;
  for (size_t pi = 1; pi < patterns.size(); ++pi)
    if (hits[pi] > hits[best]) best = pi;
  const Pattern& pat = patterns[best];
  int t = static_cast<int>(pat.idx.size());

  // The word is linear in the variables at its first two unique positions;
  // every other used variable gets fixed to the assignment with the most
  // solutions.
  int j1 = -1, j2 = -1;
  for (int j = 0; j < t && j2 < 0; ++j) {
    if (std::count(pat.idx.begin(), pat.idx.end(), pat.idx[j]) != 1) continue;
    (j1 < 0 ? j1 : j2) = j;
  }
  std::vector<int> outer;
  for (int v : pat.idx)
    if (v != pat.idx[j1] && v != pat.idx[j2] &&
        std::find(outer.begin(), outer.end(), v) == outer.end())
      outer.push_back(v);

  auto segment = [&](int from, int to, const std::vector<element_t>& fix) {
    element_t acc = G.identity();
    for (int j = from; j < to; ++j) {
      element_t e = fix[pat.idx[j]];
      acc = G.mul(acc, pat.signs[j] > 0 ? e : G.inv(e));
    }
    return acc;
  };

  long long best_inner = -1;
  element_t pre = G.identity(), mid = G.identity(), post = G.identity();
  std::vector<int> opos(outer.size(), 0);
  std::vector<element_t> fix(k, 0);
  while (true) {
    for (size_t j = 0; j < outer.size(); ++j) fix[outer[j]] = a[opos[j]];
    element_t cpre = segment(0, j1, fix);
    element_t cmid = segment(j1 + 1, j2, fix);
    element_t cpost = segment(j2 + 1, t, fix);
    long long inner = 0;
    for (element_t u : a) {
      element_t au = G.mul(G.mul(cpre, pat.signs[j1] > 0 ? u : G.inv(u)), cmid);
      for (element_t v : a)
        if (mask[G.mul(au, G.mul(pat.signs[j2] > 0 ? v : G.inv(v), cpost))]) ++inner;
    }
    if (inner > best_inner) {
      best_inner = inner;
      pre = cpre;
      mid = cmid;
      post = cpost;
    }
    if (outer.empty() || !next_digits(opos, m)) break;
  }

  // Energy of the two derived translate families, then graph extraction.
  std::vector<element_t> a1, b1;
  std::vector<element_t> alpha(m);
  for (int i = 0; i < m; ++i) {
    element_t u = a[i];
    alpha[i] = G.mul(G.mul(pre, pat.signs[j1] > 0 ? u : G.inv(u)), mid);
    a1.push_back(alpha[i]);
    element_t v = a[i];
    b1.push_back(G.mul(pat.signs[j2] > 0 ? v : G.inv(v), post));
  }
  long long e2 = energy(g, a1, b1);
  double threshold_k = static_cast<double>(m) * m * m / static_cast<double>(e2);
  auto br = bsg_extract(g, a1, b1, threshold_k);

  StructSubsetResult res;
  auto picked = member_mask(g, br.subset);
  for (int i = 0; i < m; ++i)
    if (picked[alpha[i]]) res.subset.push_back(a[i]);
  res.stats.r = pat.r;
  res.stats.index_vector = pat.idx;
  res.stats.signs = pat.signs;
  res.stats.pattern_count = hits[best];
  res.stats.translate_energy = e2;
  res.stats.fraction = static_cast<double>(res.subset.size()) / static_cast<double>(m);
  res.stats.doubling = doubling_ratio(g, res.subset);
  return res;
}

}  // namespace cosetforge
