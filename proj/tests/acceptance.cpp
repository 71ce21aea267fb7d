// Acceptance gate: eleven checks, one PASS/FAIL line each, with tolerances
// and wall-clock budgets pinned in this file. A check fails when its property
// is violated or its budget is blown. Failures print indented diagnostics
// with the measured counterexample; the process exits nonzero if anything
// failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cosetforge/addcomb.hpp"
#include "cosetforge/decompose.hpp"
#include "cosetforge/errors.hpp"
#include "cosetforge/func.hpp"
#include "cosetforge/group.hpp"
#include "cosetforge/spectral.hpp"
#include "cosetforge/tree.hpp"

namespace {

using namespace cosetforge;

constexpr std::uint64_t kSeed = 29;

struct Outcome {
  bool passed = false;
  std::string stats;
  std::vector<std::string> diagnostics;
};

std::mt19937_64 rng_for(std::uint64_t stream) {
  return std::mt19937_64(kSeed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

FuncC random_fn(const GroupPtr& g, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  auto f = FuncC::zero(g);
  for (element_t x = 0; x < g->order(); ++x) f[x] = Cplx(d(rng), d(rng));
  return f;
}

std::vector<element_t> random_subset(const GroupPtr& g, std::mt19937_64& rng, int size) {
  std::set<element_t> s;
  std::uniform_int_distribution<int> pick(0, g->order() - 1);
  while (static_cast<int>(s.size()) < size) s.insert(pick(rng));
  return {s.begin(), s.end()};
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

// ---- 1: every coset indicator has algebra norm 1 (tolerance 1e-9) ----

Outcome coset_indicator_norms() {
  Outcome out;
  const GroupPtr groups[] = {make_cyclic(12), make_product(make_cyclic(2), make_cyclic(4)),
                             make_dihedral(6), make_symmetric(3)};
  double worst = 0;
  int count = 0;
  std::string worst_at = "-";
  for (const auto& g : groups)
    for (const auto& h : enumerate_subgroups(g))
      for (const auto& c : left_cosets(h)) {
        double dev = std::abs(algebra_norm(indicator_c(g, c.members())) - 1.0);
        if (dev > worst) {
          worst = dev;
          worst_at = g->name() + " coset " + set_label(c.members());
        }
        ++count;
      }
  out.passed = worst <= 1e-9;
  out.stats =
      std::to_string(count) + " cosets across 4 groups, worst |norm - 1| = " + num(worst);
  if (!out.passed) out.diagnostics.push_back("worst case at " + worst_at);
  return out;
}

// ---- 2: trace norm equals the character sum on abelian groups (1e-8) ----

Outcome abelian_oracle_agreement() {
  Outcome out;
  const GroupPtr groups[] = {make_cyclic(16), make_product(make_cyclic(3), make_cyclic(5))};
  double worst = 0;
  int stream = 20;
  for (const auto& g : groups) {
    auto rng = rng_for(stream++);
    for (int t = 0; t < 100; ++t) {
      auto f = random_fn(g, rng);
      worst = std::max(worst, std::abs(algebra_norm(f) - fourier_l1_abelian(f)));
    }
  }
  out.passed = worst <= 1e-8;
  out.stats = "100 functions each on Z16 and Z3xZ5, worst route gap = " + num(worst);
  return out;
}

// ---- 3: coset-average splits are norm-additive (1e-8) ----

Outcome split_additivity() {
  Outcome out;
  const GroupPtr groups[] = {make_symmetric(3), make_boolean_cube(3)};
  double worst = 0;
  std::string worst_at = "-";
  std::string per_group;
  int stream = 30;
  for (const auto& g : groups) {
    auto rng = rng_for(stream++);
    auto subgroups = enumerate_subgroups(g);
    double group_worst = 0;
    for (int t = 0; t < 20; ++t) {
      auto f = random_fn(g, rng);
      double total = algebra_norm(f);
      for (const auto& h : subgroups) {
        auto structured = coset_average(f, h);
        double gap =
            std::abs(total - algebra_norm(structured) - algebra_norm(f - structured));
        if (gap > group_worst) group_worst = gap;
        if (gap > worst) {
          worst = gap;
          worst_at = "subgroup " + set_label(h.elements()) + " of " + g->name();
        }
      }
    }
    per_group += (per_group.empty() ? "" : ", ") + g->name() + " worst " + num(group_worst);
  }
  out.passed = worst <= 1e-8;
  out.stats = "20 functions x all subgroups: " + per_group;
  if (!out.passed) {
    out.diagnostics.push_back("worst gap " + num(worst) + " at " + worst_at);
    out.diagnostics.push_back(
        "averaging over a subgroup that is not normal can push norm into the parts:");

    auto s3 = make_symmetric(3);
    double r3 = std::sqrt(3.0);
    FuncC f(s3, {2.0, r3 - 1.0, 2.0, r3 - 1.0, -r3 - 1.0, -r3 - 1.0});
    Subgroup h(s3, {0, 2});
    auto structured = coset_average(f, h);
    double total = algebra_norm(f);
    double parts = algebra_norm(structured) + algebra_norm(f - structured);
    out.diagnostics.push_back("deterministic witness on S3, subgroup {0,2}: whole " +
                              num(total) + ", parts " + num(parts) + ", gap " +
                              num(parts - total));
    out.diagnostics.push_back(
        "every subgroup of an abelian group passes; no additive split exists here");
  }
  return out;
}

// ---- 4: submultiplicativity and sup-norm domination (1e-8) ----

Outcome norm_properties() {
  Outcome out;
  const GroupPtr groups[] = {make_cyclic(12), make_product(make_cyclic(2), make_cyclic(4)),
                             make_dihedral(6), make_symmetric(3)};
  double conv_excess = -1e300, sup_excess = -1e300;
  int pairs = 0;
  int stream = 40;
  for (const auto& g : groups) {
    auto rng = rng_for(stream++);
    for (int t = 0; t < 100; ++t) {
      auto f = random_fn(g, rng);
      auto h = random_fn(g, rng);
      double nf = algebra_norm(f), nh = algebra_norm(h);
      conv_excess = std::max(conv_excess, algebra_norm(convolve_mean(f, h)) - nf * nh);
      double linf = lp_norm(f, std::numeric_limits<double>::infinity(), Weighting::count);
      sup_excess = std::max(sup_excess, linf - nf);
      ++pairs;
    }
  }
  out.passed = conv_excess <= 1e-8 && sup_excess <= 1e-8;
  out.stats = std::to_string(pairs) + " pairs, worst convolution excess " + num(conv_excess) +
              ", worst sup-norm excess " + num(sup_excess);
  return out;
}

// ---- 5: greedy decomposition and compiled trees reconstruct coset sums ----

FuncQ random_coset_sum(const GroupPtr& g, const std::vector<Subgroup>& subs,
                       std::mt19937_64& rng) {
  std::uniform_int_distribution<int> layer_count(1, 3);
  std::uniform_int_distribution<int> coeff(-3, 3);
  for (;;) {
    auto f = FuncQ::zero(g);
    int layers = layer_count(rng);
    for (int i = 0; i < layers; ++i) {
      const auto& h = subs[rng() % subs.size()];
      auto cosets = left_cosets(h);
      bool any = false;
      for (const auto& c : cosets) {
        if (rng() % 2) continue;
        int z = coeff(rng);
        if (z == 0) continue;
        for (element_t x : c.members()) f[x] += Rat(z);
        any = true;
      }
      if (!any) {
        const auto& c = cosets[rng() % cosets.size()];
        int z = 0;
        while (z == 0) z = coeff(rng);
        for (element_t x : c.members()) f[x] += Rat(z);
      }
    }
    if (!support_exact(f).empty()) return f;
  }
}

Outcome decompose_compile_roundtrip() {
  Outcome out;
  const GroupPtr groups[] = {make_boolean_cube(4), make_dihedral(6)};
  int trials = 0;
  long long worst_leaves = 0;
  int worst_layers = 0;
  int stream = 50;
  for (const auto& g : groups) {
    auto rng = rng_for(stream++);
    auto subs = enumerate_subgroups(g);
    for (int t = 0; t < 100; ++t) {
      auto f = random_coset_sum(g, subs, rng);
      auto [dec, report] = greedy_decompose(f);
      verify(f, dec);
      if (to_function(dec).values != f.values) {
        out.stats = "reconstruction mismatch on " + g->name() + " trial " + std::to_string(t);
        return out;
      }
      auto tree = compile(dec);
      for (element_t x = 0; x < g->order(); ++x)
        if (eval(tree, x) != rat_to_ll(f[x])) {
          out.stats = "tree eval mismatch at element " + std::to_string(x) + " on " +
                      g->name() + " trial " + std::to_string(t);
          return out;
        }
      long long bound = 1;
      for (const auto& layer : dec.layers)
        bound *= static_cast<long long>(layer.coeffs.size()) + 1;
      if (leaf_count(tree) > bound) {
        out.stats = "leaf count " + std::to_string(leaf_count(tree)) + " exceeds bound " +
                    std::to_string(bound) + " on " + g->name();
        return out;
      }
      worst_leaves = std::max(worst_leaves, static_cast<long long>(leaf_count(tree)));
      worst_layers = std::max(worst_layers, report.layer_count());
      ++trials;
    }
  }
  out.passed = true;
  out.stats = std::to_string(trials) + " coset sums reconstructed exactly; trees peak at " +
              std::to_string(worst_leaves) + " leaves and " + std::to_string(worst_layers) +
              " layers, all within the per-layer product bound";
  return out;
}

// ---- 6: progression norms grow with slope in [0.30, 0.52] ----

Outcome progression_slope() {
  Outcome out;
  auto g = make_cyclic(2053);
  const int lengths[] = {32, 64, 128, 256, 512};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::string rows;
  for (int n : lengths) {
    std::vector<element_t> seg(n);
    for (int i = 0; i < n; ++i) seg[i] = element_t(i);
    double norm = fourier_l1_abelian(indicator_c(g, seg));
    double lnn = std::log(double(n));
    sx += lnn;
    sy += norm;
    sxx += lnn * lnn;
    sxy += lnn * norm;
    rows += (rows.empty() ? "" : ", ") + std::to_string(n) + ": " + num(norm);
  }
  double m = 5.0;
  double slope = (sxy - sx * sy / m) / (sxx - sx * sx / m);
  out.passed = slope >= 0.30 && slope <= 0.52;
  out.stats = "slope " + num(slope) + " in window [0.30, 0.52]; norms " + rows;
  return out;
}

// ---- 7: covering translates certify the size bound and the cover ----

Outcome covering_certificates() {
  Outcome out;
  const GroupPtr groups[] = {make_cyclic(64), make_symmetric(4)};
  int pairs = 0;
  size_t largest = 0;
  int stream = 60;
  for (const auto& g : groups) {
    auto rng = rng_for(stream++);
    int max_x = g->order() == 64 ? 20 : 12;
    int max_w = g->order() == 64 ? 8 : 6;
    for (int t = 0; t < 50; ++t) {
      auto x = random_subset(g, rng, 1 + int(rng() % max_x));
      auto w = random_subset(g, rng, 1 + int(rng() % max_w));
      auto res = ruzsa_cover(g, x, w);
      auto wx = product_set(g, w, x);
      bool ok = res.translates.size() * w.size() <= wx.size();
      for (element_t tr : res.translates)
        ok = ok && std::binary_search(x.begin(), x.end(), tr);
      auto wiw = product_set(g, inverse_set(g, w), w);
      std::vector<uint8_t> covered(g->order(), 0);
      for (element_t tr : res.translates)
        for (element_t u : wiw) covered[g->mul(u, tr)] = 1;
      for (element_t e : x) ok = ok && covered[e];
      if (!ok) {
        out.stats = "failed pair X=" + set_label(x) + " W=" + set_label(w) + " on " + g->name();
        return out;
      }
      largest = std::max(largest, res.translates.size());
      ++pairs;
    }
  }
  out.passed = true;
  out.stats = std::to_string(pairs) +
              " random pairs on Z64 and S4, size bound and cover re-checked exhaustively; "
              "largest translate set " +
              std::to_string(largest);
  return out;
}

// ---- 8: index-vector counts partition k^t under the surjection bound ----

Outcome index_count_bounds() {
  Outcome out;
  int cells = 0;
  for (int k = 1; k <= 4; ++k)
    for (int r = 1; r <= 3; ++r) {
      int t = 2 * r + 1;
      auto counts = trivial_indices(k, t);
      long long total = 1;
      for (int i = 0; i < t; ++i) total *= k;
      long long cap = static_cast<long long>(t) * k * r_multi_count(k, r);
      if (counts.trivial + counts.nontrivial != total) {
        out.stats = "partition failed at k=" + std::to_string(k) + " r=" + std::to_string(r);
        return out;
      }
      if (counts.trivial > cap) {
        out.stats = "surjection bound failed at k=" + std::to_string(k) +
                    " r=" + std::to_string(r) + ": " + std::to_string(counts.trivial) + " > " +
                    std::to_string(cap);
        return out;
      }
      ++cells;
    }
  out.passed = true;
  out.stats = std::to_string(cells) + " (k, r) cells enumerated exactly, partition and "
              "bound hold in every one";
  return out;
}

// ---- 9: connectivity verdicts against ground truth ----

bool witness_reverifies(const GroupPtr& g, const std::vector<element_t>& a,
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

Outcome connectivity_ground_truth() {
  Outcome out;
  const GroupPtr groups[] = {make_cyclic(12), make_symmetric(3), make_dihedral(6)};
  int sub_count = 0;
  bool subgroups_ok = true;
  std::string bad = "-";
  for (const auto& g : groups)
    for (const auto& h : enumerate_subgroups(g)) {
      auto cert = is_arithmetically_connected(g, h.elements(), 3, 1);
      bool ok = cert.verdict == ConnectivityVerdict::connected;
      for (const auto& w : cert.witnesses) ok = ok && witness_reverifies(g, h.elements(), w, 3, 1);
      if (!ok && subgroups_ok) {
        subgroups_ok = false;
        bad = set_label(h.elements()) + " of " + g->name();
      }
      ++sub_count;
    }

  auto z1000 = make_cyclic(1000);
  std::vector<element_t> pair = {1, 10};
  auto cert = is_arithmetically_connected(z1000, pair, 3, 1);
  bool pair_is_counterexample = cert.verdict == ConnectivityVerdict::counterexample;
  const char* verdict = cert.verdict == ConnectivityVerdict::connected ? "connected"
                        : pair_is_counterexample ? "counterexample"
                                                 : "inconclusive";

  out.passed = subgroups_ok && pair_is_counterexample;
  out.stats = std::to_string(sub_count) + " subgroups (3,1)-connected with re-verified "
              "witnesses; {1,10} in Z1000: " + verdict + " after " +
              std::to_string(cert.tuples_checked) + " tuples (expected a counterexample)";
  if (!subgroups_ok) out.diagnostics.push_back("first failing subgroup: " + bad);
  if (!pair_is_counterexample) {
    int verified = 0;
    for (const auto& w : cert.witnesses)
      if (witness_reverifies(z1000, pair, w, 3, 1)) ++verified;
    out.diagnostics.push_back(
        "the exhaustive scan finds a witness for every one of the 8 tuples (" +
        std::to_string(verified) + "/" + std::to_string(cert.witnesses.size()) +
        " re-verified independently), so no counterexample exists:");
    out.diagnostics.push_back(
        "a length-3 tuple over a two-element set repeats a value, the index vector");
    out.diagnostics.push_back(
        "(0,1,2) uses each position once (hence is nontrivial), and signing the");
    out.diagnostics.push_back(
        "repeated pair oppositely cancels it, e.g. (1,1,10) -> 1 - 1 + 10 = 10");
  }
  return out;
}

// ---- 10: sampled convolution estimates concentrate ----

Outcome concentration_rate() {
  Outcome out;
  auto g = make_cyclic(64);
  auto rng = rng_for(70);
  auto f = random_fn(g, rng);
  std::vector<FuncC> family;
  family.reserve(g->order());
  for (element_t y = 0; y < g->order(); ++y) family.push_back(translate(f, y));
  auto h = generated_subgroup(g, {8});
  auto nu = MeasureOnG::uniform_on(g, h.elements());
  auto res = croot_sisask_trial(nu, family, 2.0, 0.5, 200, kSeed);
  out.passed = res.r_used == 64 && res.success_rate >= 0.35;
  out.stats = "64 translates on Z64, r = " + std::to_string(res.r_used) + ", success rate " +
              num(res.success_rate) + " over " + std::to_string(res.trials) +
              " trials (threshold 0.35)";
  return out;
}

// ---- 11: the running-example tree evaluates, expands, and prunes ----

long long running_example_formula(element_t x) {
  auto in = [x](std::initializer_list<element_t> s) {
    return std::find(s.begin(), s.end(), x) != s.end();
  };
  const bool w0 = in({0, 2, 4, 6, 8, 10});
  const bool w1 = in({0, 3, 6, 9});
  const bool w2 = in({1, 5, 9});
  const bool w3 = in({1, 7});
  const bool w5 = in({0, 4, 8});
  return (w0 && w1 && w3) + (w0 && !w1) + (!w0 && !w2 && w5);
}

Outcome running_example_tree() {
  Outcome out;
  using Internal = CosetDecisionTree::Internal;
  using Leaf = CosetDecisionTree::Leaf;
  auto z12 = make_cyclic(12);
  const Coset w0(generated_subgroup(z12, {2}), 0);
  const Coset w1(generated_subgroup(z12, {3}), 0);
  const Coset w2(generated_subgroup(z12, {4}), 1);
  const Coset w3(generated_subgroup(z12, {6}), 1);
  const Coset w4(generated_subgroup(z12, {6}), 2);  // {2,8}: both edges lead to 0
  const Coset w5(generated_subgroup(z12, {4}), 0);
  std::vector<CosetDecisionTree::Node> nodes;
  nodes.push_back(Leaf{1});
  nodes.push_back(Leaf{1});
  nodes.push_back(Leaf{0});
  nodes.push_back(Internal{w3, 1, 2});
  nodes.push_back(Internal{w1, 3, 0});
  nodes.push_back(Leaf{0});
  nodes.push_back(Leaf{0});
  nodes.push_back(Internal{w4, 5, 6});
  nodes.push_back(Leaf{1});
  nodes.push_back(Leaf{0});
  nodes.push_back(Internal{w5, 8, 9});
  nodes.push_back(Internal{w2, 7, 10});
  nodes.push_back(Internal{w0, 4, 11});
  CosetDecisionTree t(z12, std::move(nodes), 12);

  if (leaf_count(t) != 7) {
    out.stats = "expected 7 leaves, got " + std::to_string(leaf_count(t));
    return out;
  }
  auto f = to_function(t);
  for (element_t x = 0; x < 12; ++x) {
    long long walked = eval(t, x);
    long long expanded = rat_to_ll(f[x]);
    long long formula = running_example_formula(x);
    long long expected = (x == 2 || x == 4 || x == 8 || x == 10) ? 1 : 0;
    if (walked != formula || expanded != formula || formula != expected) {
      out.stats = "disagreement at element " + std::to_string(x) + ": walk " +
                  std::to_string(walked) + ", expansion " + std::to_string(expanded) +
                  ", formula " + std::to_string(formula);
      return out;
    }
  }

  auto pruned = prune(t);
  bool still_tests_w4 = false;
  for (const auto& node : pruned.nodes())
    if (const auto* in = std::get_if<Internal>(&node))
      if (in->test.subgroup().elements() == std::vector<element_t>{0, 6} &&
          in->test.representative() == 2)
        still_tests_w4 = true;
  for (element_t x = 0; x < 12; ++x)
    if (eval(pruned, x) != eval(t, x)) {
      out.stats = "pruning changed the value at element " + std::to_string(x);
      return out;
    }
  if (leaf_count(pruned) != 6 || still_tests_w4) {
    out.stats = "pruning kept " + std::to_string(leaf_count(pruned)) +
                " leaves; test on {2,8} " + (still_tests_w4 ? "survived" : "removed");
    return out;
  }
  out.passed = true;
  out.stats = "walk, exact expansion, and the hand formula agree at all 12 points; "
              "pruning collapses exactly the dead test on {2,8} (7 -> 6 leaves)";
  return out;
}

struct Entry {
  int id;
  const char* title;
  double budget_seconds;
  Outcome (*run)();
};

}  // namespace

int main() {
  const Entry entries[] = {
      {1, "coset indicators have unit algebra norm", 10.0, coset_indicator_norms},
      {2, "trace norm matches the character sum on abelian groups", 30.0,
       abelian_oracle_agreement},
      {3, "coset-average splits are norm-additive", 30.0, split_additivity},
      {4, "submultiplicativity and sup-norm domination", 30.0, norm_properties},
      {5, "decompositions and compiled trees reconstruct coset sums", 120.0,
       decompose_compile_roundtrip},
      {6, "progression norms grow with the right log slope", 60.0, progression_slope},
      {7, "covering translates certify the size bound and the cover", 30.0,
       covering_certificates},
      {8, "index-vector counts obey the surjection bound", 60.0, index_count_bounds},
      {9, "connectivity verdicts match ground truth", 60.0, connectivity_ground_truth},
      {10, "sampled convolution estimates concentrate", 60.0, concentration_rate},
      {11, "the running-example tree evaluates, expands, and prunes", 1.0,
       running_example_tree},
  };

  int failed = 0;
  for (const auto& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = e.run();
    } catch (const std::exception& ex) {
      out.passed = false;
      out.stats = std::string("threw: ") + ex.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = secs <= e.budget_seconds;
    bool ok = out.passed && in_budget;
    std::printf("criterion %2d  %s  %7.2fs / %gs  %s\n              %s\n", e.id,
                ok ? "PASS" : "FAIL", secs, e.budget_seconds, e.title, out.stats.c_str());
    if (!in_budget)
      std::printf("              | wall time %.2fs blew the %.0fs budget\n", secs,
                  e.budget_seconds);
    if (!ok) {
      ++failed;
      for (const auto& line : out.diagnostics) std::printf("              | %s\n", line.c_str());
    }
  }
  std::printf("%d of 11 criteria passed, %d failed\n", 11 - failed, failed);
  return failed == 0 ? 0 : 1;
}
