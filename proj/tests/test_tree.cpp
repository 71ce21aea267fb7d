#include <algorithm>
#include <random>

#include "cosetforge/tree.hpp"
#include "doctest.h"

using namespace cosetforge;

namespace {

using Internal = CosetDecisionTree::Internal;
using Leaf = CosetDecisionTree::Leaf;

// Six coset tests over Z/12 stacked into a seven-leaf tree. The evens W0
// split the tree; inside the evens we test W1 = <3> and then W3 = 1 + <6>,
// outside we test W2 = 1 + <4> followed by W4 = 2 + <6> on the 1-side and
// W5 = <4> on the 0-side. W4 sends both edges to value 0, so pruning must
// remove exactly that test and nothing else.
CosetDecisionTree figure_tree(const GroupPtr& z12) {
  const Coset w0(generated_subgroup(z12, {2}), 0);   // {0,2,4,6,8,10}
  const Coset w1(generated_subgroup(z12, {3}), 0);   // {0,3,6,9}
  const Coset w2(generated_subgroup(z12, {4}), 1);   // {1,5,9}
  const Coset w3(generated_subgroup(z12, {6}), 1);   // {1,7}
  const Coset w4(generated_subgroup(z12, {6}), 2);   // {2,8}
  const Coset w5(generated_subgroup(z12, {4}), 0);   // {0,4,8}
  std::vector<CosetDecisionTree::Node> nodes;
  nodes.push_back(Leaf{1});               // 0: in W0, out of W1
  nodes.push_back(Leaf{1});               // 1: in W0, W1, W3
  nodes.push_back(Leaf{0});               // 2: in W0, W1, out of W3
  nodes.push_back(Internal{w3, 1, 2});    // 3
  nodes.push_back(Internal{w1, 3, 0});    // 4
  nodes.push_back(Leaf{0});               // 5: out of W0, in W2, W4
  nodes.push_back(Leaf{0});               // 6: out of W0, in W2, out of W4
  nodes.push_back(Internal{w4, 5, 6});    // 7
  nodes.push_back(Leaf{1});               // 8: out of W0, W2, in W5
  nodes.push_back(Leaf{0});               // 9: out of W0, W2, W5
  nodes.push_back(Internal{w5, 8, 9});    // 10
  nodes.push_back(Internal{w2, 7, 10});   // 11
  nodes.push_back(Internal{w0, 4, 11});   // 12
  return CosetDecisionTree(z12, std::move(nodes), 12);
}

// Hand expansion of the same tree as a sum of indicator products, written
// against literal member sets so it shares nothing with the tree code.
long long figure_formula(element_t x) {
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

int internal_count(const CosetDecisionTree& t) {
  return int(t.nodes().size()) - leaf_count(t);
}

size_t count_occurrences(const std::string& text, const std::string& needle) {
  size_t count = 0;
  for (size_t at = text.find(needle); at != std::string::npos;
       at = text.find(needle, at + needle.size()))
    ++count;
  return count;
}

}  // namespace

TEST_SUITE_BEGIN("tree");

TEST_CASE("a single leaf is a constant") {
  auto z12 = make_cyclic(12);
  CosetDecisionTree t(z12, {Leaf{7}}, 0);
  CHECK(leaf_count(t) == 1);
  for (element_t x = 0; x < 12; ++x) CHECK(eval(t, x) == 7);

  auto f = to_function(t);
  REQUIRE(is_integer_valued(f));
  for (element_t x = 0; x < 12; ++x) CHECK(rat_to_ll(f[x]) == 7);

  auto paths = path_terms(t);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].value == 7);
  CHECK(paths[0].factors.empty());

  auto pruned = prune(t);
  CHECK(pruned.nodes().size() == 1);
  CHECK(eval(pruned, 0) == 7);
}

TEST_CASE("a depth-one tree computes a coset indicator") {
  auto z12 = make_cyclic(12);
  Coset w(generated_subgroup(z12, {4}), 1);  // {1,5,9}
  CosetDecisionTree t(z12, {Leaf{1}, Leaf{0}, Internal{w, 0, 1}}, 2);
  auto f = to_function(t);
  auto expected = indicator_q(z12, {1, 5, 9});
  for (element_t x = 0; x < 12; ++x) {
    CHECK(eval(t, x) == (w.contains(x) ? 1 : 0));
    CHECK(f[x] == expected[x]);
  }
}

TEST_CASE("construction rejects malformed arenas") {
  auto z12 = make_cyclic(12);
  Coset w(generated_subgroup(z12, {4}), 0);

  CHECK_THROWS_WITH_AS(CosetDecisionTree(z12, {}, 0), doctest::Contains("MalformedTree"),
                       Error);
  CHECK_THROWS_WITH_AS(CosetDecisionTree(z12, {Leaf{1}}, 3),
                       doctest::Contains("root id out of range"), Error);
  CHECK_THROWS_WITH_AS(CosetDecisionTree(z12, {Leaf{1}, Internal{w, 0, 9}}, 1),
                       doctest::Contains("edge id out of range"), Error);
  CHECK_THROWS_WITH_AS(CosetDecisionTree(z12, {Leaf{1}, Internal{w, 0, 0}}, 1),
                       doctest::Contains("same node"), Error);

  // two paths into node 0
  std::vector<CosetDecisionTree::Node> shared;
  shared.push_back(Leaf{1});
  shared.push_back(Leaf{0});
  shared.push_back(Internal{w, 0, 1});
  shared.push_back(Internal{Coset(generated_subgroup(z12, {6}), 0), 2, 0});
  CHECK_THROWS_WITH_AS(CosetDecisionTree(z12, std::move(shared), 3),
                       doctest::Contains("two paths"), Error);

  // a self-loop walks back into an already-seen node
  CHECK_THROWS_WITH_AS(CosetDecisionTree(z12, {Internal{w, 1, 0}, Leaf{2}}, 0),
                       doctest::Contains("two paths"), Error);

  CHECK_THROWS_WITH_AS(CosetDecisionTree(z12, {Leaf{1}, Leaf{2}}, 0),
                       doctest::Contains("unreachable"), Error);

  auto z6 = make_cyclic(6);
  Coset foreign(generated_subgroup(z6, {2}), 0);
  CHECK_THROWS_WITH_AS(CosetDecisionTree(z12, {Leaf{1}, Leaf{0}, Internal{foreign, 0, 1}}, 2),
                       doctest::Contains("GroupMismatch"), Error);

  CosetDecisionTree ok(z12, {Leaf{1}}, 0);
  CHECK_THROWS_WITH_AS(eval(ok, 12), doctest::Contains("BadInput"), Error);
  CHECK_THROWS_WITH_AS(eval(ok, -1), doctest::Contains("BadInput"), Error);
}

TEST_CASE("the running example evaluates, expands, and prunes") {
  auto z12 = make_cyclic(12);
  auto t = figure_tree(z12);
  CHECK(leaf_count(t) == 7);
  CHECK(internal_count(t) == 6);

  // three routes to the same function: pointwise walks, the exact path-sum
  // expansion, and the frozen hand formula
  auto f = to_function(t);
  REQUIRE(is_integer_valued(f));
  for (element_t x = 0; x < 12; ++x) {
    CHECK(eval(t, x) == figure_formula(x));
    CHECK(rat_to_ll(f[x]) == figure_formula(x));
  }

  auto paths = path_terms(t);
  REQUIRE(paths.size() == 7);
  CHECK(std::count_if(paths.begin(), paths.end(),
                      [](const PathTerm& p) { return p.value == 1; }) == 3);
  // the all-ones path picks up every test on the 1-side spine
  CHECK(paths[0].value == 1);
  REQUIRE(paths[0].factors.size() == 3);
  for (const auto& factor : paths[0].factors) CHECK(factor.second);
  CHECK(paths[0].factors[0].first.members() ==
        std::vector<element_t>{0, 2, 4, 6, 8, 10});
  CHECK(paths[0].factors[2].first.members() == std::vector<element_t>{1, 7});

  // the test on {2,8} sends both edges to 0, so pruning removes it alone
  auto pruned = prune(t);
  CHECK(leaf_count(pruned) == 6);
  CHECK(internal_count(pruned) == 5);
  for (element_t x = 0; x < 12; ++x) CHECK(eval(pruned, x) == eval(t, x));
  for (const auto& node : pruned.nodes())
    if (const auto* in = std::get_if<Internal>(&node))
      CHECK(in->test.members() != std::vector<element_t>{2, 8});

  // already a fixed point
  auto twice = prune(pruned);
  CHECK(twice.nodes().size() == pruned.nodes().size());
  CHECK(leaf_count(twice) == 6);
}

TEST_CASE("pruning collapses identical subtrees and cascades") {
  auto z12 = make_cyclic(12);
  const Coset w0(generated_subgroup(z12, {2}), 0);
  const Coset w5(generated_subgroup(z12, {4}), 0);

  // two structurally identical depth-one subtrees under the root
  std::vector<CosetDecisionTree::Node> dup;
  dup.push_back(Leaf{2});
  dup.push_back(Leaf{3});
  dup.push_back(Internal{w5, 0, 1});
  dup.push_back(Leaf{2});
  dup.push_back(Leaf{3});
  dup.push_back(Internal{w5, 3, 4});
  dup.push_back(Internal{w0, 2, 5});
  CosetDecisionTree t(z12, std::move(dup), 6);
  auto pruned = prune(t);
  CHECK(leaf_count(pruned) == 2);
  CHECK(pruned.nodes().size() == 3);
  for (element_t x = 0; x < 12; ++x) CHECK(eval(pruned, x) == eval(t, x));

  // a collapse that only appears after the one below it happened
  std::vector<CosetDecisionTree::Node> cascade;
  cascade.push_back(Leaf{1});
  cascade.push_back(Leaf{1});
  cascade.push_back(Internal{w5, 0, 1});
  cascade.push_back(Leaf{1});
  cascade.push_back(Internal{w0, 2, 3});
  CosetDecisionTree chain(z12, std::move(cascade), 4);
  auto collapsed = prune(chain);
  CHECK(collapsed.nodes().size() == 1);
  CHECK(leaf_count(collapsed) == 1);
  CHECK(eval(collapsed, 5) == 1);

  // a minimal tree comes back unchanged
  Coset w(generated_subgroup(z12, {4}), 1);
  CosetDecisionTree minimal(z12, {Leaf{1}, Leaf{0}, Internal{w, 0, 1}}, 2);
  auto same = prune(minimal);
  CHECK(same.nodes().size() == 3);
  for (element_t x = 0; x < 12; ++x) CHECK(eval(same, x) == eval(minimal, x));
}

TEST_CASE("compile builds one decision list per layer") {
  auto z12 = make_cyclic(12);
  const Subgroup evens = generated_subgroup(z12, {2});
  const Subgroup h6 = generated_subgroup(z12, {6});

  // one layer, one coset: a two-leaf tree testing that coset
  CosetDecomposition single{z12, {{evens, {{0, 3}}}}};
  auto t = compile(single);
  CHECK(leaf_count(t) == 2);
  const auto* root = std::get_if<Internal>(&t.nodes()[t.root()]);
  REQUIRE(root != nullptr);
  CHECK(root->test.members() == std::vector<element_t>{0, 2, 4, 6, 8, 10});
  CHECK(std::get<Leaf>(t.nodes()[root->edge1]).value == 3);
  CHECK(std::get<Leaf>(t.nodes()[root->edge0]).value == 0);
  for (element_t x = 0; x < 12; ++x) CHECK(eval(t, x) == (x % 2 == 0 ? 3 : 0));

  // two layers: leaf count is exactly (2+1)*(1+1), and the compiled tree
  // expands to the same function as the decomposition itself
  CosetDecomposition two{z12, {{h6, {{0, 1}, {1, -2}}}, {evens, {{0, 5}}}}};
  auto tt = compile(two);
  CHECK(leaf_count(tt) == 6);
  auto via_tree = to_function(tt);
  auto direct = to_function(two);
  for (element_t x = 0; x < 12; ++x) CHECK(via_tree[x] == direct[x]);
  // list order: the root tests the coset with the smallest representative
  const auto* head = std::get_if<Internal>(&tt.nodes()[tt.root()]);
  REQUIRE(head != nullptr);
  CHECK(head->test.representative() == 0);
  CHECK(head->test.subgroup().order() == 2);

  // a one-layer 0/1 decomposition compiles to 0/1 leaves
  CosetDecomposition boolean{z12, {{h6, {{0, 1}, {3, 1}, {4, 1}}}}};
  auto tb = compile(boolean);
  CHECK(leaf_count(tb) == 4);
  for (const auto& node : tb.nodes())
    if (const auto* leaf = std::get_if<Leaf>(&node))
      CHECK((leaf->value == 0 || leaf->value == 1));

  CHECK_THROWS_WITH_AS(compile(CosetDecomposition{z12, {}}),
                       doctest::Contains("EmptyDecomposition"), Error);
  CHECK_THROWS_WITH_AS(compile(CosetDecomposition{z12, {{evens, {}}}}),
                       doctest::Contains("EmptyDecomposition"), Error);
  CHECK_THROWS_WITH_AS(compile(CosetDecomposition{z12, {{evens, {{0, 0}}}}}),
                       doctest::Contains("zero coefficient"), Error);
  CHECK_THROWS_WITH_AS(compile(CosetDecomposition{z12, {{h6, {{7, 1}}}}}),
                       doctest::Contains("canonical"), Error);
}

TEST_CASE("compile round-trips random decompositions") {
  auto z12 = make_cyclic(12);
  auto subgroups = enumerate_subgroups(z12);
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<int> pick_sub(0, int(subgroups.size()) - 1);
  std::uniform_int_distribution<int> pick_coeff(-3, 3);

  for (int trial = 0; trial < 20; ++trial) {
    CosetDecomposition d{z12, {}};
    long long expected_leaves = 1;
    for (int layer = 0; layer < 2; ++layer) {
      const Subgroup& h = subgroups[pick_sub(rng)];
      std::map<element_t, long long> coeffs;
      for (const Coset& w : left_cosets(h)) {
        int z = pick_coeff(rng);
        if (z != 0 && rng() % 2 == 0) coeffs[w.representative()] = z;
      }
      if (coeffs.empty()) coeffs[h.group()->identity()] = 1;
      expected_leaves *= static_cast<long long>(coeffs.size()) + 1;
      d.layers.push_back({h, std::move(coeffs)});
    }
    auto t = compile(d);
    CHECK(leaf_count(t) == expected_leaves);
    auto via_tree = to_function(t);
    auto direct = to_function(d);
    for (element_t x = 0; x < 12; ++x) {
      CHECK(via_tree[x] == direct[x]);
      CHECK(eval(t, x) == rat_to_ll(direct[x]));
    }
  }
}

TEST_CASE("dot export lists every node and edge") {
  auto z12 = make_cyclic(12);
  auto dot = export_dot(figure_tree(z12));
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(count_occurrences(dot, "shape=circle") == 6);
  CHECK(count_occurrences(dot, "shape=box") == 7);
  CHECK(count_occurrences(dot, " -> ") == 12);
  CHECK(count_occurrences(dot, "[label=\"1\"]") == 6);
  CHECK(count_occurrences(dot, "[label=\"0\"]") == 6);
  CHECK(dot.find("{2,8}") != std::string::npos);
  CHECK(dot.find("{0,2,4,6,8,10}") != std::string::npos);

  auto leaf_only = export_dot(CosetDecisionTree(z12, {Leaf{-4}}, 0));
  CHECK(leaf_only.find("shape=box") != std::string::npos);
  CHECK(leaf_only.find("-4") != std::string::npos);
}

TEST_SUITE_END();
