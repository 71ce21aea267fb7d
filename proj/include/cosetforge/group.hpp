#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cosetforge/errors.hpp"

namespace cosetforge {

using element_t = int32_t;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// A finite group of order n presented by its full Cayley table.
/// Elements are the indices 0..n-1 and table[a][b] = a*b. The identity and
/// the inverse table are derived during validation, never assumed.
class FiniteGroup {
 public:
  int order() const { return n_; }
  element_t mul(element_t a, element_t b) const { return table_[size_t(a) * n_ + b]; }
  element_t inv(element_t a) const { return inv_[a]; }
  element_t identity() const { return identity_; }
  const std::string& name() const { return name_; }

  /// Row-major n*n multiplication table.
  const std::vector<element_t>& flat_table() const { return table_; }

  /// Cyclic factor sizes when the group was assembled as an explicit product
  /// of cyclic groups (element index = mixed-radix digit tuple, first factor
  /// most significant). Empty for raw tables and nonabelian constructions.
  const std::vector<int>& cyclic_factors() const { return cyclic_factors_; }

  struct Trusted {};  // tag: skip the O(n^3) associativity sweep

  FiniteGroup(std::string name, int n, std::vector<element_t> flat_table);
  FiniteGroup(std::string name, int n, std::vector<element_t> flat_table, Trusted);

 private:
  void derive_and_check(bool trusted);

  std::string name_;
  int n_ = 0;
  std::vector<element_t> table_;
  std::vector<element_t> inv_;
  element_t identity_ = 0;
  std::vector<int> cyclic_factors_;

  friend GroupPtr make_cyclic(int);
  friend GroupPtr make_product(const GroupPtr&, const GroupPtr&);
  friend GroupPtr make_boolean_cube(int);
};

/// Largest group order any constructor or table validator will accept.
inline constexpr int kMaxGroupOrder = 4096;

/// Builds a FiniteGroup from a nested table, deriving identity and inverses
/// and checking all group axioms (including the O(n^3) associativity sweep).
GroupPtr validate_group(const std::vector<std::vector<element_t>>& table,
                        const std::string& name);

GroupPtr make_cyclic(int n);
GroupPtr make_product(const GroupPtr& g, const GroupPtr& h);
GroupPtr make_dihedral(int m);  // order 2m: indices 0..m-1 rotations, m..2m-1 reflections
GroupPtr make_boolean_cube(int k);
GroupPtr make_symmetric(int m);  // m <= 6; permutations in lexicographic order

/// A subgroup of a fixed parent group, stored as a sorted element list with a
/// constant-time membership mask. Validated on construction.
class Subgroup {
 public:
  Subgroup(GroupPtr group, std::vector<element_t> elements);

  const GroupPtr& group() const { return group_; }
  const std::vector<element_t>& elements() const { return elements_; }
  int order() const { return int(elements_.size()); }
  bool contains(element_t x) const { return member_[x] != 0; }

  bool operator==(const Subgroup& o) const {
    return group_->order() == o.group_->order() && elements_ == o.elements_;
  }

 private:
  GroupPtr group_;
  std::vector<element_t> elements_;
  std::vector<uint8_t> member_;
};

/// A left coset rep*H with the canonical (minimal) representative.
class Coset {
 public:
  Coset(Subgroup subgroup, element_t member_of_coset);

  const Subgroup& subgroup() const { return sub_; }
  element_t representative() const { return rep_; }
  bool contains(element_t x) const {
    return sub_.contains(sub_.group()->mul(sub_.group()->inv(rep_), x));
  }
  std::vector<element_t> members() const;

  bool operator==(const Coset& o) const { return rep_ == o.rep_ && sub_ == o.sub_; }

 private:
  Subgroup sub_;
  element_t rep_;
};

/// Smallest subgroup containing gens (closure by breadth-first products).
/// Empty gens give the trivial subgroup.
Subgroup generated_subgroup(const GroupPtr& g, const std::vector<element_t>& gens);

/// All subgroups of g, duplicate-free, sorted by (order, elements lex).
/// Works by repeatedly extending known subgroups by one generator until no
/// new closures appear, so it is complete. Refuses n > cap.
std::vector<Subgroup> enumerate_subgroups(const GroupPtr& g, int cap = 384);

/// The left cosets of H, sorted by canonical representative.
std::vector<Coset> left_cosets(const Subgroup& h);
Coset coset_of(const Subgroup& h, element_t x);

bool is_abelian(const FiniteGroup& g);

}  // namespace cosetforge
