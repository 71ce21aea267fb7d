#include "cosetforge/tree.hpp"

#include <map>
#include <sstream>

namespace cosetforge {

namespace {

using Internal = CosetDecisionTree::Internal;
using Leaf = CosetDecisionTree::Leaf;

// Compiled trees can blow up as the product of the layer widths; refuse
// anything past this many leaves before allocating a single node.
constexpr long long kMaxCompiledLeaves = 1'000'000;

std::string coset_label(const Coset& w) {
  std::ostringstream os;
  os << '{';
  const std::vector<element_t> members = w.members();
  for (size_t i = 0; i < members.size(); ++i) {
    if (i) os << ',';
    os << members[i];
  }
  os << '}';
  return os.str();
}

}  // namespace

CosetDecisionTree::CosetDecisionTree(GroupPtr group, std::vector<Node> nodes, int root)
    : group_(std::move(group)), nodes_(std::move(nodes)), root_(root) {
  if (!group_) fail(errc::bad_input, "decision tree needs a group");
  const int count = int(nodes_.size());
  if (count == 0) fail(errc::malformed_tree, "empty node arena");
  if (root_ < 0 || root_ >= count) fail(errc::malformed_tree, "root id out of range");
  for (const Node& node : nodes_) {
    const auto* in = std::get_if<Internal>(&node);
    if (!in) continue;
    require_same_group(group_, in->test.subgroup().group(), "coset test");
    if (in->edge1 < 0 || in->edge1 >= count || in->edge0 < 0 || in->edge0 >= count)
      fail(errc::malformed_tree, "edge id out of range");
    if (in->edge1 == in->edge0)
      fail(errc::malformed_tree, "both edges of a test lead to the same node");
  }
  // Sweep from the root. Meeting a node twice means a shared subtree or a
  // cycle; finishing with unvisited nodes means garbage in the arena.
  std::vector<uint8_t> seen(nodes_.size(), 0);
  std::vector<int> stack = {root_};
  int visited = 0;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (seen[id])
      fail(errc::malformed_tree,
           "node " + std::to_string(id) + " is reachable along two paths");
    seen[id] = 1;
    ++visited;
    if (const auto* in = std::get_if<Internal>(&nodes_[id])) {
      stack.push_back(in->edge1);
      stack.push_back(in->edge0);
    }
  }
  if (visited != count)
    fail(errc::malformed_tree,
         std::to_string(count - visited) + " node(s) unreachable from the root");
}

long long eval(const CosetDecisionTree& t, element_t x) {
  if (x < 0 || x >= t.group()->order()) fail(errc::bad_input, "element out of range");
  int id = t.root();
  while (const auto* in = std::get_if<Internal>(&t.nodes()[id]))
    id = in->test.contains(x) ? in->edge1 : in->edge0;
  return std::get<Leaf>(t.nodes()[id]).value;
}

std::vector<PathTerm> path_terms(const CosetDecisionTree& t) {
  std::vector<PathTerm> out;
  std::vector<std::pair<Coset, bool>> trail;
  auto walk = [&](auto&& self, int id) -> void {
    if (const auto* in = std::get_if<Internal>(&t.nodes()[id])) {
      trail.emplace_back(in->test, true);
      self(self, in->edge1);
      trail.back().second = false;
      self(self, in->edge0);
      trail.pop_back();
    } else {
      out.push_back({std::get<Leaf>(t.nodes()[id]).value, trail});
    }
  };
  walk(walk, t.root());
  return out;
}

FuncQ to_function(const CosetDecisionTree& t) {
  FuncQ out = FuncQ::zero(t.group());
  const int n = t.group()->order();
  for (const PathTerm& path : path_terms(t)) {
    const Rat value = make_rat(path.value, 1);
    for (element_t x = 0; x < n; ++x) {
      bool in_cell = true;
      for (const auto& [test, polarity] : path.factors)
        if (test.contains(x) != polarity) {
          in_cell = false;
          break;
        }
      if (in_cell) out[x] += value;
    }
  }
  return out;
}

CosetDecisionTree compile(const CosetDecomposition& d) {
  check_decomposition(d);
  if (d.layers.empty()) fail(errc::empty_decomposition, "no layers to compile");
  long long leaves = 1;
  for (const auto& layer : d.layers) {
    if (layer.coeffs.empty()) fail(errc::empty_decomposition, "layer with no cosets");
    leaves *= static_cast<long long>(layer.coeffs.size()) + 1;
    if (leaves > kMaxCompiledLeaves)
      fail(errc::size_limit_exceeded,
           "compiled tree would have more than " + std::to_string(kMaxCompiledLeaves) +
               " leaves");
  }
  std::vector<CosetDecisionTree::Node> arena;
  // build(i, acc) returns the subtree handling layers i.. after the earlier
  // layers contributed acc. Each layer becomes a decision list over its
  // cosets in canonical-representative order; building the list back to
  // front lets every test point at the already-built fall-through.
  auto build = [&](auto&& self, size_t i, long long acc) -> int {
    if (i == d.layers.size()) {
      arena.push_back(Leaf{acc});
      return int(arena.size()) - 1;
    }
    const auto& layer = d.layers[i];
    int next = self(self, i + 1, acc);
    for (auto it = layer.coeffs.rbegin(); it != layer.coeffs.rend(); ++it) {
      const int hit = self(self, i + 1, acc + it->second);
      arena.push_back(Internal{Coset(layer.subgroup, it->first), hit, next});
      next = int(arena.size()) - 1;
    }
    return next;
  };
  const int root = build(build, 0, 0);
  return CosetDecisionTree(d.group, std::move(arena), root);
}

CosetDecisionTree prune(const CosetDecisionTree& t) {
  const auto& nodes = t.nodes();
  // Signature of each subtree with the collapse rule already applied below
  // and at it: a test whose branches share a signature takes that signature
  // itself. Signatures therefore describe fully pruned shapes and a single
  // bottom-up pass reaches the fixed point.
  std::vector<int> sig(nodes.size(), -1);
  std::map<std::string, int> interned;
  auto signature = [&](auto&& self, int id) -> int {
    if (sig[id] >= 0) return sig[id];
    std::string key;
    if (const auto* in = std::get_if<Internal>(&nodes[id])) {
      const int s1 = self(self, in->edge1);
      const int s0 = self(self, in->edge0);
      if (s1 == s0) return sig[id] = s1;
      std::ostringstream os;
      os << 'T' << in->test.representative();
      for (element_t e : in->test.subgroup().elements()) os << ',' << e;
      os << '|' << s1 << '|' << s0;
      key = os.str();
    } else {
      key = 'L' + std::to_string(std::get<Leaf>(nodes[id]).value);
    }
    const auto [it, inserted] = interned.try_emplace(key, int(interned.size()));
    (void)inserted;
    return sig[id] = it->second;
  };
  signature(signature, t.root());

  std::vector<CosetDecisionTree::Node> arena;
  auto rebuild = [&](auto&& self, int id) -> int {
    const Internal* in;
    while ((in = std::get_if<Internal>(&nodes[id])) && sig[in->edge1] == sig[in->edge0])
      id = in->edge1;
    if (!in) {
      arena.push_back(nodes[id]);
      return int(arena.size()) - 1;
    }
    const int e1 = self(self, in->edge1);
    const int e0 = self(self, in->edge0);
    arena.push_back(Internal{in->test, e1, e0});
    return int(arena.size()) - 1;
  };
  const int root = rebuild(rebuild, t.root());
  return CosetDecisionTree(t.group(), std::move(arena), root);
}

int leaf_count(const CosetDecisionTree& t) {
  int count = 0;
  for (const auto& node : t.nodes()) count += std::holds_alternative<Leaf>(node);
  return count;
}

std::string export_dot(const CosetDecisionTree& t) {
  std::ostringstream os;
  os << "digraph coset_decision_tree {\n";
  for (size_t id = 0; id < t.nodes().size(); ++id) {
    if (const auto* in = std::get_if<Internal>(&t.nodes()[id]))
      os << "  n" << id << " [shape=circle, label=\"" << coset_label(in->test) << "\"];\n";
    else
      os << "  n" << id << " [shape=box, label=\""
         << std::get<Leaf>(t.nodes()[id]).value << "\"];\n";
  }
  for (size_t id = 0; id < t.nodes().size(); ++id)
    if (const auto* in = std::get_if<Internal>(&t.nodes()[id])) {
      os << "  n" << id << " -> n" << in->edge1 << " [label=\"1\"];\n";
      os << "  n" << id << " -> n" << in->edge0 << " [label=\"0\"];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace cosetforge
