#include "cosetforge/decompose.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

#include "cosetforge/spectral.hpp"

namespace cosetforge {

namespace {

bool all_zero(const FuncQ& f) {
  for (element_t x = 0; x < f.size(); ++x)
    if (f[x] != 0) return false;
  return true;
}

// Round if eps allows it; absence of an almost-integer reading is a value
// here, not an error.
std::optional<FuncQ> try_round(const FuncQ& f, const Rat& eps) {
  try {
    return round_almost_integer(f, eps);
  } catch (const Error& e) {
    if (e.code() == errc::not_almost_integer) return std::nullopt;
    throw;
  }
}

long long layer_cost(const std::map<element_t, long long>& coeffs) {
  long long cost = 0;
  for (const auto& [rep, z] : coeffs) cost += std::llabs(z);
  return cost;
}

FuncQ expand_layer(const GroupPtr& g, const CosetDecomposition::Layer& layer) {
  FuncQ part = FuncQ::zero(g);
  for (const auto& [rep, z] : layer.coeffs) {
    const Rat value = make_rat(z, 1);
    for (element_t x : Coset(layer.subgroup, rep).members()) part[x] += value;
  }
  return part;
}

// Costs and the algebra-norm trace of subtracting the layers one by one.
DecompositionReport build_report(const FuncQ& target, const CosetDecomposition& d) {
  DecompositionReport report;
  FuncQ residual = target;
  report.norm_trace.push_back(algebra_norm(to_complex(residual)));
  for (const auto& layer : d.layers) {
    const long long cost = layer_cost(layer.coeffs);
    report.layer_costs.push_back(cost);
    report.total_cost += cost;
    residual = residual - expand_layer(d.group, layer);
    report.norm_trace.push_back(algebra_norm(to_complex(residual)));
  }
  report.exact = all_zero(residual);
  return report;
}

// Layers over one subgroup add up, so fold them together; coefficients that
// cancel disappear, and so do layers left empty.
void merge_same_subgroup(CosetDecomposition& d) {
  std::vector<CosetDecomposition::Layer> merged;
  for (auto& layer : d.layers) {
    auto same = std::find_if(merged.begin(), merged.end(), [&](const auto& m) {
      return m.subgroup == layer.subgroup;
    });
    if (same == merged.end()) {
      merged.push_back(std::move(layer));
      continue;
    }
    for (const auto& [rep, z] : layer.coeffs) {
      const auto [it, fresh] = same->coeffs.try_emplace(rep, 0);
      it->second += z;
      if (it->second == 0) same->coeffs.erase(it);
    }
  }
  std::erase_if(merged, [](const auto& m) { return m.coeffs.empty(); });
  d.layers = std::move(merged);
}

DecompositionReport verify_rounded(const FuncQ& target, const CosetDecomposition& d) {
  check_decomposition(d);
  require_same_group(target.group, d.group, "verify");
  const FuncQ recon = to_function(d);
  for (element_t x = 0; x < target.size(); ++x)
    if (target[x] != recon[x])
      fail(errc::mismatch, "element " + std::to_string(x) + ": decomposition gives " +
                               recon[x].get_str() + ", function rounds to " +
                               target[x].get_str());
  return build_report(target, d);
}

}  // namespace

void check_decomposition(const CosetDecomposition& d) {
  if (!d.group) fail(errc::bad_input, "decomposition needs a group");
  for (const auto& layer : d.layers) {
    require_same_group(d.group, layer.subgroup.group(), "decomposition layer");
    for (const auto& [rep, coeff] : layer.coeffs) {
      if (coeff == 0) fail(errc::bad_input, "zero coefficient in a layer");
      if (rep < 0 || rep >= d.group->order())
        fail(errc::bad_input, "coset representative out of range");
      if (Coset(layer.subgroup, rep).representative() != rep)
        fail(errc::bad_input, "coset key " + std::to_string(rep) +
                                  " is not the canonical representative");
    }
  }
}

FuncQ to_function(const CosetDecomposition& d) {
  check_decomposition(d);
  FuncQ out = FuncQ::zero(d.group);
  for (const auto& layer : d.layers) out = out + expand_layer(d.group, layer);
  return out;
}

std::optional<ProjectedLayer> project_layer(const FuncQ& f, const Subgroup& h, const Rat& eps) {
  require_same_group(f.group, h.group(), "project_layer");
  const FuncQ averaged = coset_average(f, h);
  const auto rounded = try_round(averaged, eps);
  if (!rounded) return std::nullopt;
  // the average is constant on every left coset, so one probe per coset
  std::map<element_t, long long> coeffs;
  for (const Coset& w : left_cosets(h)) {
    const long long z = rat_to_ll((*rounded)[w.representative()]);
    if (z != 0) coeffs[w.representative()] = z;
  }
  if (coeffs.empty()) return std::nullopt;
  return ProjectedLayer{std::move(coeffs), f - averaged};
}

std::optional<ProjectedLayer> project_layer(const FuncC& f, const Subgroup& h, double eps) {
  return project_layer(rationalize(f), h, Rat(eps));
}

std::pair<CosetDecomposition, DecompositionReport> greedy_decompose(const FuncQ& f,
                                                                    const Rat& eps,
                                                                    Strategy strategy) {
  const FuncQ target = round_almost_integer(f, eps);
  const GroupPtr& g = f.group;
  const auto subgroups = enumerate_subgroups(g);

  const long long cap = static_cast<long long>(10.0 * algebra_norm(to_complex(target))) +
                        static_cast<long long>(support_exact(target).size());

  CosetDecomposition d{g, {}};
  FuncQ residual = target;
  long long steps = 0;
  while (!all_zero(residual)) {
    if (steps >= cap)
      fail(errc::iteration_cap, "no finished decomposition after " +
                                    std::to_string(steps) + " layers");
    ++steps;
    // score every subgroup admitting a nonzero integer projection; ties keep
    // the earliest in canonical enumeration order
    int best = -1;
    int best_order = 0;
    long long best_mass = 0;
    double best_drop = 0;
    std::optional<ProjectedLayer> best_layer;
    const double residual_norm =
        strategy == Strategy::norm_drop ? algebra_norm(to_complex(residual)) : 0.0;
    for (int i = 0; i < int(subgroups.size()); ++i) {
      auto layer = project_layer(residual, subgroups[i], Rat(0));
      if (!layer) continue;
      bool take = best < 0;
      switch (strategy) {
        case Strategy::largest_subgroup:
          take = take || subgroups[i].order() > best_order;
          break;
        case Strategy::max_mass: {
          const long long mass = layer_cost(layer->coeffs) * subgroups[i].order();
          take = take || mass > best_mass;
          if (take) best_mass = mass;
          break;
        }
        case Strategy::norm_drop: {
          const double drop = residual_norm - algebra_norm(to_complex(layer->residual));
          take = take || drop > best_drop;
          if (take) best_drop = drop;
          break;
        }
      }
      if (take) {
        best = i;
        best_order = subgroups[i].order();
        best_layer = std::move(*layer);
      }
    }
    // the trivial subgroup projects any nonzero integer residual onto
    // itself, so a step cannot stall
    if (best < 0) fail(errc::iteration_cap, "no subgroup admits a projection");
    d.layers.push_back({subgroups[best], std::move(best_layer->coeffs)});
    residual = std::move(best_layer->residual);
  }
  merge_same_subgroup(d);
  return {d, build_report(target, d)};
}

std::pair<CosetDecomposition, DecompositionReport> greedy_decompose(const FuncC& f, double eps,
                                                                    Strategy strategy) {
  return greedy_decompose(round_almost_integer(f, eps), Rat(0), strategy);
}

std::optional<MinCostResult> exact_min_cost(const FuncQ& f, long long cost_budget,
                                            long long node_budget) {
  if (cost_budget < 0 || node_budget < 0) fail(errc::bad_input, "budgets must be nonnegative");
  const FuncQ target = round_almost_integer(f, Rat(0));
  const GroupPtr& g = f.group;
  const int n = g->order();
  const auto subgroups = enumerate_subgroups(g);

  // every coset through every element, largest subgroups first so promising
  // single-term covers are tried early
  struct Move {
    int sub;
    element_t rep;
  };
  std::vector<std::vector<Move>> through(n);
  std::map<std::pair<int, element_t>, std::vector<element_t>> cell;
  for (int i = int(subgroups.size()) - 1; i >= 0; --i)
    for (const Coset& w : left_cosets(subgroups[i])) {
      cell.emplace(std::pair{i, w.representative()}, w.members());
      for (element_t x : w.members()) through[x].push_back({i, w.representative()});
    }

  std::optional<CosetDecomposition> best;
  long long best_cost = cost_budget + 1;
  {
    auto greedy = greedy_decompose(target, Rat(0), Strategy::largest_subgroup);
    if (greedy.second.total_cost <= cost_budget) {
      best = std::move(greedy.first);
      best_cost = greedy.second.total_cost;
    }
  }

  std::vector<long long> residual(n);
  for (element_t x = 0; x < n; ++x) residual[x] = rat_to_ll(target[x]);

  std::map<std::pair<int, element_t>, long long> chosen;
  long long nodes = 0;
  bool out_of_nodes = false;

  // any decomposition spends at least the largest remaining value (terms
  // through one element add up to it) and at least total mass over n
  auto lower_bound = [&]() {
    long long peak = 0;
    long long total = 0;
    for (long long v : residual) {
      peak = std::max(peak, std::llabs(v));
      total += std::llabs(v);
    }
    return std::max(peak, (total + n - 1) / n);
  };

  auto materialize = [&]() {
    CosetDecomposition d{g, {}};
    int current = -1;
    for (const auto& [key, delta] : chosen) {
      if (key.first != current) {
        d.layers.push_back({subgroups[key.first], {}});
        current = key.first;
      }
      d.layers.back().coeffs[key.second] = delta;
    }
    return d;
  };

  auto search = [&](auto&& self, long long spent) -> void {
    if (out_of_nodes) return;
    element_t pivot = -1;
    for (element_t x = 0; x < n; ++x)
      if (residual[x] != 0) {
        pivot = x;
        break;
      }
    if (pivot < 0) {
      if (spent < best_cost) {
        best_cost = spent;
        best = materialize();
      }
      return;
    }
    if (++nodes > node_budget) {
      out_of_nodes = true;
      return;
    }
    const long long room = std::min(best_cost - 1, cost_budget) - spent;
    if (lower_bound() > room) return;
    const long long sign = residual[pivot] > 0 ? 1 : -1;
    for (const Move& mv : through[pivot]) {
      const auto key = std::pair{mv.sub, mv.rep};
      if (chosen.count(key)) continue;
      const auto& members = cell.at(key);
      // sign-matching increments first, then the cancelling direction
      for (long long step = 1; step <= 2 * room; ++step) {
        const long long delta = step <= room ? sign * step : -sign * (step - room);
        chosen[key] = delta;
        for (element_t x : members) residual[x] -= delta;
        self(self, spent + std::llabs(delta));
        for (element_t x : members) residual[x] += delta;
        chosen.erase(key);
        if (out_of_nodes) return;
      }
    }
  };
  search(search, 0);

  if (!best) return std::nullopt;
  MinCostResult result{std::move(*best), {}, !out_of_nodes};
  result.report = build_report(target, result.decomposition);
  return result;
}

DecompositionReport verify(const FuncQ& f, const CosetDecomposition& d, const Rat& eps) {
  return verify_rounded(round_almost_integer(f, eps), d);
}

DecompositionReport verify(const FuncC& f, const CosetDecomposition& d, double eps) {
  return verify_rounded(round_almost_integer(f, eps), d);
}

}  // namespace cosetforge
