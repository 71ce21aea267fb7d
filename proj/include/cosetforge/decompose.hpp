#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cosetforge/func.hpp"

namespace cosetforge {

/// f written as sum_i sum_W z_W^(i) 1_W: an ordered list of layers, each a
/// subgroup H_i together with a map from canonical coset representatives to
/// nonzero integer coefficients.
struct CosetDecomposition {
  struct Layer {
    Subgroup subgroup;
    std::map<element_t, long long> coeffs;  // canonical rep -> nonzero integer
  };
  GroupPtr group;
  std::vector<Layer> layers;
};

/// Throws on ill-formed decompositions: layer subgroups on the wrong group,
/// zero coefficients, or keys that are not canonical representatives.
void check_decomposition(const CosetDecomposition& d);

/// Cost and certificate bookkeeping for a decomposition of f. norm_trace[i]
/// is the algebra norm of the residual before layer i is removed, ending
/// with the final residual, so it has layer_count()+1 entries.
struct DecompositionReport {
  std::vector<long long> layer_costs;  // l1 mass of z^(i) per layer
  long long total_cost = 0;
  std::vector<double> norm_trace;
  bool exact = false;

  int layer_count() const { return int(layer_costs.size()); }
};

/// Exact expansion sum_i sum_W z_W^(i) 1_W. An empty decomposition gives 0.
FuncQ to_function(const CosetDecomposition& d);

/// One projection step: computes f * m_H; if that is eps-almost integer
/// valued with a nonzero rounding, returns the coefficients (per canonical
/// coset representative) and the residual f - f * m_H, otherwise nothing.
struct ProjectedLayer {
  std::map<element_t, long long> coeffs;
  FuncQ residual;
};
std::optional<ProjectedLayer> project_layer(const FuncQ& f, const Subgroup& h, const Rat& eps);
std::optional<ProjectedLayer> project_layer(const FuncC& f, const Subgroup& h, double eps);

/// How greedy_decompose picks the next subgroup among those admitting a
/// nonzero integer projection.
enum class Strategy {
  largest_subgroup,  // maximal |H|
  max_mass,          // maximal l1 mass extracted
  norm_drop,         // maximal algebra-norm drop of the residual
};

/// Repeatedly projects the residual onto the best subgroup per the strategy
/// until the residual rounds to zero. Layers over the same subgroup are
/// merged afterwards. Float input is converted to exact rationals first, so
/// reconstruction is certified exactly in both modes.
std::pair<CosetDecomposition, DecompositionReport> greedy_decompose(
    const FuncQ& f, const Rat& eps = Rat(0), Strategy strategy = Strategy::largest_subgroup);
std::pair<CosetDecomposition, DecompositionReport> greedy_decompose(
    const FuncC& f, double eps, Strategy strategy = Strategy::largest_subgroup);

/// Branch-and-bound search for a minimum-total-cost decomposition of an
/// integer-valued f. Explores (coset, increment) moves against the residual;
/// prunes on cost_budget; gives up after node_budget search nodes and then
/// returns the best incumbent flagged non-optimal. Empty result means no
/// decomposition within cost_budget was found.
struct MinCostResult {
  CosetDecomposition decomposition;
  DecompositionReport report;
  bool optimal = false;
};
std::optional<MinCostResult> exact_min_cost(const FuncQ& f, long long cost_budget,
                                            long long node_budget);

/// Checks that d reconstructs the rounding of f at every element (throwing
/// Mismatch with the first differing element otherwise) and recomputes the
/// per-layer costs and norm trace.
DecompositionReport verify(const FuncQ& f, const CosetDecomposition& d, const Rat& eps = Rat(0));
DecompositionReport verify(const FuncC& f, const CosetDecomposition& d, double eps);

}  // namespace cosetforge
