#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cosetforge/addcomb.hpp"
#include "cosetforge/decompose.hpp"
#include "cosetforge/errors.hpp"
#include "cosetforge/func.hpp"
#include "cosetforge/group.hpp"
#include "cosetforge/io.hpp"
#include "cosetforge/spectral.hpp"
#include "cosetforge/tree.hpp"
#include "cosetforge/verify.hpp"

namespace {

using namespace cosetforge;

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 1 failed verify checks, 2 flag/JSON parse errors,
// 3 file I/O, 4 schema violations, 5 any other domain error.
int exit_code_for(errc c) {
  switch (c) {
    case errc::parse_failure:
      return 2;
    case errc::io_failure:
      return 3;
    case errc::schema_violation:
      return 4;
    default:
      return 5;
  }
}

/// Group-size cap: COSETFORGE_CAP when set, clamped to the compiled limit.
int group_cap() {
  const char* env = std::getenv("COSETFORGE_CAP");
  if (!env) return kMaxGroupOrder;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1)
    fail(errc::bad_input, "COSETFORGE_CAP must be a positive integer");
  return int(std::min<long>(v, kMaxGroupOrder));
}

GroupPtr capped(GroupPtr g) {
  int cap = group_cap();
  if (g->order() > cap)
    fail(errc::bad_input, "group order " + std::to_string(g->order()) +
                              " exceeds the configured cap " + std::to_string(cap));
  return g;
}

struct Ctx {
  std::string command;
  Json inputs = Json::object();
  Json outputs = Json::object();
  int exit_code = 0;
};

struct Opts {
  std::string name, group_ref, fn_path, fn2_path, tree_path, dec_path, out_path;
  std::string strategy = "largest_subgroup";
  std::string mode = "exhaustive";
  std::string suite = "all";
  double epsilon = 0.0;
  double cs_eps = 0.5;
  double cs_p = 2.0;
  double threshold = 1.0;
  bool exact_min = false;
  long long cost_budget = 0;
  long long node_budget = 200000;
  long long at = -1;
  std::uint64_t seed = 0;
  int k = 3, l = 1, kmax = 0, lmax = 0;
  int cs_trials = 200, cs_r = 0;
  int prime_p = 0;
  std::vector<int> set_a, set_b, ns;
};

std::string fn_group_ref(const Json& j) {
  if (j.is_object() && j.contains("group") && j["group"].is_string())
    return j["group"].get<std::string>();
  return "";
}

void maybe_write(Ctx& c, const std::string& path, const std::string& text) {
  if (path.empty()) return;
  write_text_file(path, text);
  c.outputs["written"] = path;
}

Strategy parse_strategy(const std::string& s) {
  if (s == "largest_subgroup") return Strategy::largest_subgroup;
  if (s == "max_mass") return Strategy::max_mass;
  if (s == "norm_drop") return Strategy::norm_drop;
  fail(errc::bad_input,
       "unknown strategy " + s + " (expected largest_subgroup, max_mass, norm_drop)");
}

std::optional<SampleMode> parse_mode(const std::string& mode, std::uint64_t seed) {
  if (mode == "exhaustive") return std::nullopt;
  if (mode.rfind("samples:", 0) == 0) {
    long long n = 0;
    try {
      size_t used = 0;
      n = std::stoll(mode.substr(8), &used);
      if (used != mode.size() - 8) n = 0;
    } catch (...) {
      n = 0;
    }
    if (n < 1) fail(errc::bad_input, "mode samples:N needs a positive sample count");
    return SampleMode{n, seed};
  }
  fail(errc::bad_input, "mode must be exhaustive or samples:N, got " + mode);
}

std::vector<element_t> to_elements(const std::vector<int>& v) {
  return std::vector<element_t>(v.begin(), v.end());
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; (long long)d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::string csv_num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// ---- group ----

void run_group_make(Ctx& c, const Opts& o) {
  c.inputs = {{"name", o.name}, {"out", o.out_path}};
  auto g = capped(load_group(o.name));
  write_text_file(o.out_path, group_to_json(*g).dump(2) + "\n");
  c.outputs = {{"name", g->name()},
               {"order", g->order()},
               {"identity", g->identity()},
               {"abelian", is_abelian(*g)},
               {"written", o.out_path}};
}

void run_group_validate(Ctx& c, const Opts& o) {
  c.inputs = {{"group", o.group_ref}};
  auto g = capped(load_group(o.group_ref));
  c.outputs = {{"valid", true},
               {"name", g->name()},
               {"order", g->order()},
               {"identity", g->identity()},
               {"abelian", is_abelian(*g)}};
}

void run_group_subgroups(Ctx& c, const Opts& o) {
  c.inputs = {{"group", o.group_ref}};
  auto g = capped(load_group(o.group_ref));
  auto subs = enumerate_subgroups(g);
  Json arr = Json::array();
  for (const auto& h : subs) arr.push_back(h.elements());
  c.outputs = {{"count", subs.size()}, {"subgroups", arr}};
}

// ---- fn ----

FunctionFile load_fn(const std::string& path, std::string* gref = nullptr) {
  auto j = read_json_file(path);
  if (gref) *gref = fn_group_ref(j);
  auto ff = function_from_json(j);
  capped(ff.group);
  return ff;
}

void run_fn_norm(Ctx& c, const Opts& o) {
  c.inputs = {{"fn", o.fn_path}};
  auto ff = load_fn(o.fn_path);
  FuncC f = ff.exact ? to_complex(*ff.rational) : *ff.floating;
  c.outputs["algebra_norm"] = algebra_norm(f);
  c.outputs["linf"] = lp_norm(f, std::numeric_limits<double>::infinity(), Weighting::count);
  try {
    c.outputs["abelian_l1"] = fourier_l1_abelian(f);
  } catch (const Error& e) {
    if (e.code() != errc::not_explicitly_abelian) throw;
    c.outputs["abelian_l1"] = nullptr;
  }
}

void run_fn_round(Ctx& c, const Opts& o) {
  c.inputs = {{"fn", o.fn_path}, {"epsilon", o.epsilon}};
  std::string gref;
  auto ff = load_fn(o.fn_path, &gref);
  FuncQ rounded = ff.exact ? round_almost_integer(*ff.rational, Rat(o.epsilon))
                           : round_almost_integer(*ff.floating, o.epsilon);
  Json out = function_to_json(rounded, gref);
  c.outputs = {{"support_size", support_exact(rounded).size()}, {"function", out}};
  maybe_write(c, o.out_path, out.dump(2) + "\n");
}

void run_fn_conv(Ctx& c, const Opts& o) {
  c.inputs = {{"fn", o.fn_path}, {"fn2", o.fn2_path}};
  std::string gref;
  auto a = load_fn(o.fn_path, &gref);
  auto b = load_fn(o.fn2_path);
  require_same_group(a.group, b.group, "fn conv");
  Json out;
  if (a.exact && b.exact) {
    out = function_to_json(convolve_mean(*a.rational, *b.rational), gref);
    c.outputs["mode"] = "exact";
  } else {
    FuncC fa = a.exact ? to_complex(*a.rational) : *a.floating;
    FuncC fb = b.exact ? to_complex(*b.rational) : *b.floating;
    fb.group = fa.group;
    out = function_to_json(convolve_mean(fa, fb), gref);
    c.outputs["mode"] = "float";
  }
  c.outputs["function"] = out;
  maybe_write(c, o.out_path, out.dump(2) + "\n");
}

// ---- decompose ----

void run_decompose(Ctx& c, const Opts& o) {
  c.inputs = {{"fn", o.fn_path},
              {"epsilon", o.epsilon},
              {"strategy", o.strategy},
              {"exact_min", o.exact_min}};
  std::string gref;
  auto ff = load_fn(o.fn_path, &gref);
  Strategy s = parse_strategy(o.strategy);
  auto [dec, report] = ff.exact ? greedy_decompose(*ff.rational, Rat(o.epsilon), s)
                                : greedy_decompose(*ff.floating, o.epsilon, s);
  Json dj = decomposition_to_json(dec, gref);
  c.outputs["report"] = {{"layers", report.layer_count()},
                         {"layer_costs", report.layer_costs},
                         {"total_cost", report.total_cost},
                         {"norm_trace", report.norm_trace},
                         {"exact", report.exact}};
  c.outputs["decomposition"] = dj;
  if (o.exact_min) {
    FuncQ fz = ff.exact ? round_almost_integer(*ff.rational, Rat(o.epsilon))
                        : round_almost_integer(*ff.floating, o.epsilon);
    long long budget = o.cost_budget > 0 ? o.cost_budget : report.total_cost;
    auto best = exact_min_cost(fz, budget, o.node_budget);
    if (best)
      c.outputs["exact_min"] = {{"found", true},
                                {"min_cost", best->report.total_cost},
                                {"optimal", best->optimal},
                                {"decomposition", decomposition_to_json(best->decomposition, gref)}};
    else
      c.outputs["exact_min"] = {{"found", false}};
  }
  maybe_write(c, o.out_path, dj.dump(2) + "\n");
}

// ---- tree ----

void run_tree_compile(Ctx& c, const Opts& o) {
  c.inputs = {{"decomposition", o.dec_path}, {"out", o.out_path}};
  auto j = read_json_file(o.dec_path);
  std::string gref = fn_group_ref(j);
  auto d = decomposition_from_json(j);
  capped(d.group);
  auto t = compile(d);
  write_text_file(o.out_path, tree_to_json(t, gref).dump(2) + "\n");
  c.outputs = {{"leaf_count", leaf_count(t)},
               {"node_count", t.nodes().size()},
               {"written", o.out_path}};
}

void run_tree_eval(Ctx& c, const Opts& o) {
  c.inputs = {{"tree", o.tree_path}};
  auto t = tree_from_json(read_json_file(o.tree_path));
  capped(t.group());
  if (o.at >= 0) {
    if (o.at >= t.group()->order())
      fail(errc::bad_input, "element " + std::to_string(o.at) + " is out of range");
    c.inputs["at"] = o.at;
    c.outputs = {{"at", o.at}, {"value", eval(t, element_t(o.at))}};
  } else {
    auto f = to_function(t);
    std::vector<long long> vals(f.values.size());
    for (size_t i = 0; i < vals.size(); ++i) vals[i] = rat_to_ll(f.values[i]);
    c.outputs = {{"values", vals}};
  }
}

void run_tree_prune(Ctx& c, const Opts& o) {
  c.inputs = {{"tree", o.tree_path}, {"out", o.out_path}};
  auto j = read_json_file(o.tree_path);
  std::string gref = fn_group_ref(j);
  auto t = tree_from_json(j);
  capped(t.group());
  auto p = prune(t);
  write_text_file(o.out_path, tree_to_json(p, gref).dump(2) + "\n");
  c.outputs = {{"leaf_count_before", leaf_count(t)},
               {"leaf_count_after", leaf_count(p)},
               {"written", o.out_path}};
}

void run_tree_dot(Ctx& c, const Opts& o) {
  c.inputs = {{"tree", o.tree_path}};
  auto t = tree_from_json(read_json_file(o.tree_path));
  capped(t.group());
  std::string dot = export_dot(t);
  c.outputs = {{"leaf_count", leaf_count(t)}};
  if (o.out_path.empty())
    c.outputs["dot"] = dot;
  else
    maybe_write(c, o.out_path, dot);
}

// ---- connectivity ----

Json cert_to_json(const ConnectivityCertificate& cert, size_t witness_cap) {
  const char* verdict = cert.verdict == ConnectivityVerdict::connected ? "connected"
                        : cert.verdict == ConnectivityVerdict::counterexample
                            ? "counterexample"
                            : "inconclusive";
  Json out = {{"k", cert.k}, {"l", cert.l}, {"verdict", verdict},
              {"tuples_checked", cert.tuples_checked}};
  if (cert.verdict == ConnectivityVerdict::counterexample)
    out["counterexample"] = cert.counterexample;
  else
    out["counterexample"] = nullptr;
  out["witness_count"] = cert.witnesses.size();
  Json ws = Json::array();
  for (size_t i = 0; i < cert.witnesses.size() && i < witness_cap; ++i) {
    const auto& w = cert.witnesses[i];
    ws.push_back({{"x", w.x}, {"r", w.r}, {"index_vector", w.index_vector}, {"signs", w.signs}});
  }
  out["witnesses"] = ws;
  return out;
}

void run_connect(Ctx& c, const Opts& o) {
  c.inputs = {{"group", o.group_ref}, {"set", o.set_a}, {"mode", o.mode}, {"seed", o.seed}};
  auto g = capped(load_group(o.group_ref));
  auto a = to_elements(o.set_a);
  auto mode = parse_mode(o.mode, o.seed);
  if (o.kmax > 0 || o.lmax > 0) {
    int kmax = std::max(2, o.kmax), lmax = std::max(1, o.lmax);
    c.inputs["kmax"] = kmax;
    c.inputs["lmax"] = lmax;
    Json rows = Json::array();
    for (int k = 2; k <= kmax; ++k)
      for (int l = 1; l <= lmax; ++l) {
        auto cert = mode ? is_arithmetically_connected(g, a, k, l, *mode)
                         : is_arithmetically_connected(g, a, k, l);
        rows.push_back(cert_to_json(cert, 0));
      }
    c.outputs = {{"grid", rows}};
  } else {
    c.inputs["k"] = o.k;
    c.inputs["l"] = o.l;
    auto cert = mode ? is_arithmetically_connected(g, a, o.k, o.l, *mode)
                     : is_arithmetically_connected(g, a, o.k, o.l);
    c.outputs = cert_to_json(cert, 25);
  }
}

// ---- energy / bsg ----

void run_energy(Ctx& c, const Opts& o) {
  c.inputs = {{"group", o.group_ref}, {"set", o.set_a}, {"set2", o.set_b}};
  auto g = capped(load_group(o.group_ref));
  long long e = energy(g, to_elements(o.set_a), to_elements(o.set_b));
  c.outputs = {{"energy", e},
               {"rectangle", (long long)o.set_a.size() * (long long)o.set_b.size()}};
}

void run_bsg(Ctx& c, const Opts& o) {
  c.inputs = {{"group", o.group_ref},
              {"set", o.set_a},
              {"set2", o.set_b},
              {"threshold", o.threshold}};
  auto g = capped(load_group(o.group_ref));
  auto res = bsg_extract(g, to_elements(o.set_a), to_elements(o.set_b), o.threshold);
  c.outputs = {{"subset", res.subset},
               {"size", res.subset.size()},
               {"fraction", res.fraction},
               {"doubling", res.doubling},
               {"energy_found", res.energy_found}};
}

// ---- sampling trials ----

void run_cs_trial(Ctx& c, const Opts& o) {
  c.inputs = {{"group", o.group_ref}, {"set", o.set_a},     {"p", o.cs_p},
              {"epsilon", o.cs_eps},  {"trials", o.cs_trials}, {"seed", o.seed},
              {"r", o.cs_r}};
  auto g = capped(load_group(o.group_ref));
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> d(0.0, 1.0);
  auto f = FuncC::zero(g);
  for (element_t x = 0; x < g->order(); ++x) f[x] = Cplx(d(rng), d(rng));
  std::vector<FuncC> family;
  family.reserve(g->order());
  for (element_t y = 0; y < g->order(); ++y) family.push_back(translate(f, y));
  auto nu = MeasureOnG::uniform_on(g, to_elements(o.set_a));
  auto res = croot_sisask_trial(nu, family, o.cs_p, o.cs_eps, o.cs_trials, o.seed, o.cs_r);
  c.outputs = {{"r_used", res.r_used},
               {"trials", res.trials},
               {"success_rate", res.success_rate}};
}

// ---- verify ----

void run_verify_cmd(Ctx& c, const Opts& o) {
  c.inputs = {{"suite", o.suite}, {"seed", o.seed}};
  auto checks = run_verify_suite(o.suite, o.seed);
  int passed = 0, failed = 0;
  Json arr = Json::array();
  for (const auto& pc : checks) {
    (pc.passed ? passed : failed)++;
    arr.push_back({{"suite", pc.suite},
                   {"property", pc.property},
                   {"passed", pc.passed},
                   {"detail", pc.detail}});
    std::cerr << (pc.passed ? "[ok]   " : "[FAIL] ") << pc.suite << ": " << pc.property << " ("
              << pc.detail << ")\n";
  }
  c.outputs = {{"suite", o.suite}, {"checks", arr}, {"passed", passed}, {"failed", failed}};
  c.exit_code = failed > 0 ? 1 : 0;
}

// ---- ap-scan ----

void run_ap_scan(Ctx& c, const Opts& o) {
  c.inputs = {{"p", o.prime_p}, {"n", o.ns}};
  if (!is_prime(o.prime_p))
    fail(errc::not_prime, std::to_string(o.prime_p) + " is not prime");
  if (o.ns.empty()) fail(errc::bad_input, "ap-scan needs at least one N");
  for (int n : o.ns)
    if (n < 1 || 2 * n >= o.prime_p)
      fail(errc::bad_input,
           "N = " + std::to_string(n) + " is outside the range 1 <= N < p/2");
  auto g = capped(make_cyclic(o.prime_p));
  std::vector<int> ns = o.ns;
  std::sort(ns.begin(), ns.end());
  std::ostringstream csv;
  csv << "N,algebra_norm,ln_N\n";
  Json rows = Json::array();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n : ns) {
    std::vector<element_t> seg(n);
    for (int i = 0; i < n; ++i) seg[i] = i;
    double norm = fourier_l1_abelian(indicator_c(g, seg));
    double lnn = std::log(double(n));
    rows.push_back({{"n", n}, {"algebra_norm", norm}, {"ln_n", lnn}});
    csv << n << ',' << csv_num(norm) << ',' << csv_num(lnn) << '\n';
    sx += lnn;
    sy += norm;
    sxx += lnn * lnn;
    sxy += lnn * norm;
  }
  double m = double(ns.size());
  double denom = sxx - sx * sx / m;
  Json slope = nullptr, intercept = nullptr;
  if (denom > 0) {
    double b = (sxy - sx * sy / m) / denom;
    slope = b;
    intercept = sy / m - b * sx / m;
    csv << "# slope," << csv_num(b) << '\n';
  }
  c.outputs = {{"rows", rows}, {"slope", slope}, {"intercept", intercept}, {"csv", csv.str()}};
  maybe_write(c, o.out_path, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral norms, coset decompositions, and decision trees on finite groups"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Opts o;
  std::string command;
  std::function<void(Ctx&)> todo;
  auto arm = [&](CLI::App* sub, const char* name, void (*fn)(Ctx&, const Opts&)) {
    sub->callback([&, name, fn] {
      command = name;
      todo = [&, fn](Ctx& c) { fn(c, o); };
    });
  };

  auto* grp = app.add_subcommand("group", "make, validate, and inspect group tables");
  grp->require_subcommand(1);
  auto* gmake = grp->add_subcommand("make", "write a builtin group table to a JSON file");
  gmake->add_option("--name", o.name, "builtin name: Z<n>, D<m>, S<m>, cube<k>, products like Z2xZ4")
      ->required();
  gmake->add_option("--out", o.out_path, "output path")->required();
  arm(gmake, "group make", run_group_make);
  auto* gval = grp->add_subcommand("validate", "load a group and check all axioms");
  gval->add_option("--group", o.group_ref, "group file or builtin name")->required();
  arm(gval, "group validate", run_group_validate);
  auto* gsub = grp->add_subcommand("subgroups", "enumerate all subgroups");
  gsub->add_option("--group", o.group_ref, "group file or builtin name")->required();
  arm(gsub, "group subgroups", run_group_subgroups);

  auto* fn = app.add_subcommand("fn", "norms and arithmetic on functions");
  fn->require_subcommand(1);
  auto* fnorm = fn->add_subcommand("norm", "algebra norm, sup norm, and the abelian route");
  fnorm->add_option("--fn", o.fn_path, "function file")->required();
  arm(fnorm, "fn norm", run_fn_norm);
  auto* fround = fn->add_subcommand("round", "round an almost-integer function to exact integers");
  fround->add_option("--fn", o.fn_path, "function file")->required();
  fround->add_option("--epsilon", o.epsilon, "rounding tolerance, below 1/2");
  fround->add_option("--out", o.out_path, "write the rounded function here");
  arm(fround, "fn round", run_fn_round);
  auto* fconv = fn->add_subcommand("conv", "mean-normalized convolution of two functions");
  fconv->add_option("--fn", o.fn_path, "left factor")->required();
  fconv->add_option("--fn2", o.fn2_path, "right factor")->required();
  fconv->add_option("--out", o.out_path, "write the convolution here");
  arm(fconv, "fn conv", run_fn_conv);

  auto* dec = app.add_subcommand("decompose", "write a function as integer coset-indicator sums");
  dec->add_option("--fn", o.fn_path, "function file")->required();
  dec->add_option("--epsilon", o.epsilon, "rounding tolerance for float input");
  dec->add_option("--strategy", o.strategy, "largest_subgroup, max_mass, or norm_drop");
  dec->add_flag("--exact-min", o.exact_min, "also search for a minimum-cost decomposition");
  dec->add_option("--cost-budget", o.cost_budget, "cost cap for the search (default: greedy cost)");
  dec->add_option("--node-budget", o.node_budget, "search node cap");
  dec->add_option("--out", o.out_path, "write the greedy decomposition here");
  arm(dec, "decompose", run_decompose);

  auto* tree = app.add_subcommand("tree", "compile, evaluate, prune, and export decision trees");
  tree->require_subcommand(1);
  auto* tcomp = tree->add_subcommand("compile", "compile a decomposition into a tree");
  tcomp->add_option("--decomposition", o.dec_path, "decomposition file")->required();
  tcomp->add_option("--out", o.out_path, "output tree path")->required();
  arm(tcomp, "tree compile", run_tree_compile);
  auto* teval = tree->add_subcommand("eval", "evaluate a tree at one element or everywhere");
  teval->add_option("--tree", o.tree_path, "tree file")->required();
  teval->add_option("--at", o.at, "element index; omit to evaluate everywhere");
  arm(teval, "tree eval", run_tree_eval);
  auto* tprune = tree->add_subcommand("prune", "collapse nodes whose subtrees coincide");
  tprune->add_option("--tree", o.tree_path, "tree file")->required();
  tprune->add_option("--out", o.out_path, "output tree path")->required();
  arm(tprune, "tree prune", run_tree_prune);
  auto* tdot = tree->add_subcommand("dot", "emit Graphviz source for a tree");
  tdot->add_option("--tree", o.tree_path, "tree file")->required();
  tdot->add_option("--out", o.out_path, "write the dot source here");
  arm(tdot, "tree dot", run_tree_dot);

  auto* conn = app.add_subcommand("connect", "arithmetic connectivity certificates");
  conn->add_option("--group", o.group_ref, "group file or builtin name")->required();
  conn->add_option("--set", o.set_a, "comma-separated element list")->required()->delimiter(',');
  conn->add_option("--k", o.k, "tuple length");
  conn->add_option("--l", o.l, "maximum word half-length r");
  conn->add_option("--kmax", o.kmax, "sweep k = 2..kmax instead of a single (k, l)");
  conn->add_option("--lmax", o.lmax, "sweep l = 1..lmax instead of a single (k, l)");
  conn->add_option("--mode", o.mode, "exhaustive or samples:N");
  conn->add_option("--seed", o.seed, "sampling seed");
  arm(conn, "connect", run_connect);

  auto* en = app.add_subcommand("energy", "additive energy of two sets");
  en->add_option("--group", o.group_ref, "group file or builtin name")->required();
  en->add_option("--set", o.set_a, "first set")->required()->delimiter(',');
  en->add_option("--set2", o.set_b, "second set")->required()->delimiter(',');
  arm(en, "energy", run_energy);

  auto* bsg = app.add_subcommand("bsg", "extract a high-energy subset");
  bsg->add_option("--group", o.group_ref, "group file or builtin name")->required();
  bsg->add_option("--set", o.set_a, "the set A")->required()->delimiter(',');
  bsg->add_option("--set2", o.set_b, "the set B")->required()->delimiter(',');
  bsg->add_option("--threshold", o.threshold, "K with energy(A,B) >= |A|^3 / K")->required();
  arm(bsg, "bsg", run_bsg);

  auto* cs = app.add_subcommand("cs-trial", "sampled convolution estimator trials");
  cs->add_option("--group", o.group_ref, "group file or builtin name")->required();
  cs->add_option("--set", o.set_a, "support of the uniform sampling measure")
      ->required()
      ->delimiter(',');
  cs->add_option("--p", o.cs_p, "L_p exponent, at least 2");
  cs->add_option("--epsilon", o.cs_eps, "relative tolerance in (0, 1]");
  cs->add_option("--trials", o.cs_trials, "number of trials");
  cs->add_option("--seed", o.seed, "seed for the family and the samples");
  cs->add_option("--r", o.cs_r, "sample count override; 0 picks ceil(8p/eps^2)");
  arm(cs, "cs-trial", run_cs_trial);

  auto* ver = app.add_subcommand("verify", "run property suites");
  ver->add_option("--suite", o.suite, "all, coset-norm, split, banach, cover, cs, or ct");
  ver->add_option("--seed", o.seed, "seed for the stochastic checks");
  arm(ver, "verify", run_verify_cmd);

  auto* ap = app.add_subcommand("ap-scan", "norms of progression indicators inside Z/p");
  ap->add_option("--p", o.prime_p, "prime modulus")->required();
  ap->add_option("--n", o.ns, "comma-separated progression lengths, each below p/2")
      ->required()
      ->delimiter(',');
  ap->add_option("--out", o.out_path, "write the CSV here");
  arm(ap, "ap-scan", run_ap_scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Ctx ctx;
  ctx.command = command;
  auto t0 = std::chrono::steady_clock::now();
  int rc = 0;
  try {
    todo(ctx);
    Json report = {{"command", ctx.command},
                   {"inputs", ctx.inputs},
                   {"outputs", ctx.outputs},
                   {"version", kVersion}};
    std::cout << report.dump(2) << "\n";
    rc = ctx.exit_code;
  } catch (const Error& e) {
    std::string what = e.what();
    std::string prefix = std::string(errc_name(e.code())) + ": ";
    if (what.rfind(prefix, 0) == 0) what = what.substr(prefix.size());
    Json err = {{"error", errc_name(e.code())}, {"message", what}};
    std::cerr << err.dump(2) << "\n";
    rc = exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    Json err = {{"error", "SchemaViolation"}, {"message", e.what()}};
    std::cerr << err.dump(2) << "\n";
    rc = 4;
  } catch (const std::exception& e) {
    Json err = {{"error", "Internal"}, {"message", e.what()}};
    std::cerr << err.dump(2) << "\n";
    rc = 5;
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                  t0)
                .count();
  std::cerr << "cosetforge: " << ctx.command << " finished in " << ms << " ms\n";
  return rc;
}
