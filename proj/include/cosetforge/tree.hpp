#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cosetforge/decompose.hpp"
#include "cosetforge/func.hpp"

namespace cosetforge {

/// A binary decision tree whose internal nodes test membership in a coset
/// (the 1-edge is taken when the input lies in it) and whose leaves carry
/// integer values. Nodes live in an arena and edges are arena indices.
/// Construction validates the shape: root in range, every node reachable
/// from it exactly once (no sharing, no cycles), and distinct out-edges.
class CosetDecisionTree {
 public:
  struct Internal {
    Coset test;
    int edge1;  // taken when the input is in the coset
    int edge0;
  };
  struct Leaf {
    long long value;
  };
  using Node = std::variant<Internal, Leaf>;

  CosetDecisionTree(GroupPtr group, std::vector<Node> nodes, int root);

  const GroupPtr& group() const { return group_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

 private:
  GroupPtr group_;
  std::vector<Node> nodes_;
  int root_ = 0;
};

/// Walks the tree on x and returns the reached leaf value.
long long eval(const CosetDecisionTree& t, element_t x);

/// One root-to-leaf path: the leaf value together with the coset tests along
/// the way and the polarity taken (true for the 1-edge). The product of the
/// matching indicators is the cell of inputs that reach this leaf.
struct PathTerm {
  long long value;
  std::vector<std::pair<Coset, bool>> factors;
};

/// All root-to-leaf paths, 1-edges first.
std::vector<PathTerm> path_terms(const CosetDecisionTree& t);

/// The function computed by the tree, expanded exactly as the sum over
/// leaves of value times the indicator of the leaf's cell.
FuncQ to_function(const CosetDecisionTree& t);

/// Compiles a decomposition into a tree of stacked decision lists: layer i
/// becomes a list testing its cosets in canonical-representative order, whose
/// 1-edges add the coefficient to a running total and continue with layer
/// i+1, and whose final fall-through keeps the total unchanged. The result
/// computes the decomposed function and has exactly prod_i (R_i + 1) leaves,
/// R_i the number of cosets in layer i.
CosetDecisionTree compile(const CosetDecomposition& d);

/// Collapses every internal node whose two subtrees are structurally
/// identical down to one copy of the subtree. The result is a fixed point of
/// that rule and computes the same function.
CosetDecisionTree prune(const CosetDecisionTree& t);

int leaf_count(const CosetDecisionTree& t);

/// Graphviz source: circles labelled with the tested coset's member set,
/// boxes with leaf values, edges labelled 1 and 0.
std::string export_dot(const CosetDecisionTree& t);

}  // namespace cosetforge
