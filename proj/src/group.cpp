#include "cosetforge/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace cosetforge {

FiniteGroup::FiniteGroup(std::string name, int n, std::vector<element_t> flat_table)
    : name_(std::move(name)), n_(n), table_(std::move(flat_table)) {
  derive_and_check(false);
}

FiniteGroup::FiniteGroup(std::string name, int n, std::vector<element_t> flat_table, Trusted)
    : name_(std::move(name)), n_(n), table_(std::move(flat_table)) {
  derive_and_check(true);
}

void FiniteGroup::derive_and_check(bool trusted) {
  if (n_ <= 0 || n_ > kMaxGroupOrder)
    fail(errc::size_limit_exceeded,
         "group order " + std::to_string(n_) + " outside [1, " +
             std::to_string(kMaxGroupOrder) + "]");
  if (table_.size() != size_t(n_) * n_)
    fail(errc::bad_input, "table is not n*n");
  for (element_t v : table_)
    if (v < 0 || v >= n_) fail(errc::bad_input, "table entry out of range");

  std::vector<uint8_t> seen(n_);
  for (int a = 0; a < n_; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int b = 0; b < n_; ++b) seen[mul(a, b)] = 1;
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
      fail(errc::non_bijective_row, "row " + std::to_string(a) + " of " + name_);
  }
  for (int b = 0; b < n_; ++b) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int a = 0; a < n_; ++a) seen[mul(a, b)] = 1;
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
      fail(errc::non_bijective_column, "column " + std::to_string(b) + " of " + name_);
  }

  identity_ = -1;
  for (int e = 0; e < n_; ++e) {
    bool ok = true;
    for (int x = 0; x < n_ && ok; ++x)
      ok = mul(e, x) == x && mul(x, e) == x;
    if (ok) { identity_ = e; break; }
  }
  if (identity_ < 0) fail(errc::no_identity, "no two-sided identity in " + name_);

  inv_.assign(n_, -1);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b)
      if (mul(a, b) == identity_ && mul(b, a) == identity_) { inv_[a] = b; break; }
    if (inv_[a] < 0) fail(errc::missing_inverse, "element " + std::to_string(a) + " of " + name_);
  }

  if (!trusted) {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) {
        element_t ab = mul(a, b);
        for (int c = 0; c < n_; ++c)
          if (mul(ab, c) != mul(a, mul(b, c)))
            fail(errc::non_associative,
                 "witness (" + std::to_string(a) + "," + std::to_string(b) + "," +
                     std::to_string(c) + ") in " + name_);
      }
  }
}

GroupPtr validate_group(const std::vector<std::vector<element_t>>& table,
                        const std::string& name) {
  size_t n = table.size();
  if (n == 0 || n > size_t(kMaxGroupOrder))
    fail(errc::size_limit_exceeded, "table of size " + std::to_string(n));
  std::vector<element_t> flat;
  flat.reserve(n * n);
  for (const auto& row : table) {
    if (row.size() != n) fail(errc::bad_input, "table is not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return std::make_shared<FiniteGroup>(name, int(n), std::move(flat));
}

GroupPtr make_cyclic(int n) {
  if (n < 1 || n > kMaxGroupOrder)
    fail(errc::size_limit_exceeded, "cyclic order " + std::to_string(n));
  std::vector<element_t> t(size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[size_t(a) * n + b] = element_t((a + b) % n);
  auto g = std::make_shared<FiniteGroup>("Z" + std::to_string(n), n, std::move(t),
                                         FiniteGroup::Trusted{});
  g->cyclic_factors_ = {n};
  return g;
}

GroupPtr make_product(const GroupPtr& g, const GroupPtr& h) {
  long long n = (long long)g->order() * h->order();
  if (n > kMaxGroupOrder)
    fail(errc::size_limit_exceeded, "product order " + std::to_string(n));
  int nh = h->order(), np = int(n);
  std::vector<element_t> t(size_t(np) * np);
  for (int a = 0; a < np; ++a)
    for (int b = 0; b < np; ++b) {
      element_t p = g->mul(a / nh, b / nh);
      element_t q = h->mul(a % nh, b % nh);
      t[size_t(a) * np + b] = p * nh + q;
    }
  auto r = std::make_shared<FiniteGroup>(g->name() + "x" + h->name(), np, std::move(t),
                                         FiniteGroup::Trusted{});
  if (!g->cyclic_factors().empty() && !h->cyclic_factors().empty()) {
    auto f = g->cyclic_factors();
    f.insert(f.end(), h->cyclic_factors().begin(), h->cyclic_factors().end());
    r->cyclic_factors_ = std::move(f);
  }
  return r;
}

GroupPtr make_dihedral(int m) {
  if (m < 1 || 2 * m > kMaxGroupOrder)
    fail(errc::size_limit_exceeded, "dihedral parameter " + std::to_string(m));
  // Indices 0..m-1 are rotations r^i, indices m..2m-1 are reflections s r^i.
  int n = 2 * m;
  auto idx = [m](bool flip, int i) { return element_t((flip ? m : 0) + ((i % m + m) % m)); };
  std::vector<element_t> t(size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      bool fa = a >= m, fb = b >= m;
      int ia = a % m, ib = b % m;
      element_t p;
      if (!fa && !fb) p = idx(false, ia + ib);       // r^i r^j = r^(i+j)
      else if (!fa && fb) p = idx(true, ib - ia);    // r^i s r^j = s r^(j-i)
      else if (fa && !fb) p = idx(true, ia + ib);    // s r^i r^j = s r^(i+j)
      else p = idx(false, ib - ia);                  // s r^i s r^j = r^(j-i)
      t[size_t(a) * n + b] = p;
    }
  return std::make_shared<FiniteGroup>("D" + std::to_string(m), n, std::move(t),
                                       FiniteGroup::Trusted{});
}

GroupPtr make_boolean_cube(int k) {
  if (k < 1 || k > 12)
    fail(errc::size_limit_exceeded, "cube dimension " + std::to_string(k));
  int n = 1 << k;
  std::vector<element_t> t(size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[size_t(a) * n + b] = element_t(a ^ b);
  auto g = std::make_shared<FiniteGroup>("cube" + std::to_string(k), n, std::move(t),
                                         FiniteGroup::Trusted{});
  g->cyclic_factors_ = std::vector<int>(k, 2);
  return g;
}

GroupPtr make_symmetric(int m) {
  if (m < 1 || m > 6)
    fail(errc::size_limit_exceeded, "symmetric parameter " + std::to_string(m) + " (max 6)");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p); while (std::next_permutation(p.begin(), p.end()));
  int n = int(perms.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < n; ++i) index[perms[i]] = i;
  std::vector<element_t> t(size_t(n) * n);
  std::vector<int> comp(m);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int x = 0; x < m; ++x) comp[x] = perms[a][perms[b][x]];  // (a*b)(x) = a(b(x))
      t[size_t(a) * n + b] = element_t(index[comp]);
    }
  return std::make_shared<FiniteGroup>("S" + std::to_string(m), n, std::move(t),
                                       FiniteGroup::Trusted{});
}

Subgroup::Subgroup(GroupPtr group, std::vector<element_t> elements)
    : group_(std::move(group)), elements_(std::move(elements)) {
  int n = group_->order();
  std::sort(elements_.begin(), elements_.end());
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
    fail(errc::bad_input, "duplicate subgroup elements");
  if (elements_.empty() || elements_.front() < 0 || elements_.back() >= n)
    fail(errc::bad_input, "subgroup elements out of range");
  member_.assign(n, 0);
  for (element_t x : elements_) member_[x] = 1;
  if (!member_[group_->identity()])
    fail(errc::bad_input, "subgroup misses the identity");
  for (element_t a : elements_)
    for (element_t b : elements_)
      if (!member_[group_->mul(a, b)])
        fail(errc::bad_input, "subgroup not closed under multiplication");
  if (n % int(elements_.size()) != 0)
    fail(errc::bad_input, "subgroup order does not divide group order");
}

Coset::Coset(Subgroup subgroup, element_t member_of_coset) : sub_(std::move(subgroup)) {
  const auto& g = *sub_.group();
  rep_ = member_of_coset;
  for (element_t h : sub_.elements())
    rep_ = std::min(rep_, g.mul(member_of_coset, h));
}

std::vector<element_t> Coset::members() const {
  const auto& g = *sub_.group();
  std::vector<element_t> out;
  out.reserve(sub_.order());
  for (element_t h : sub_.elements()) out.push_back(g.mul(rep_, h));
  std::sort(out.begin(), out.end());
  return out;
}

Subgroup generated_subgroup(const GroupPtr& g, const std::vector<element_t>& gens) {
  std::vector<uint8_t> seen(g->order(), 0);
  std::vector<element_t> closure;
  std::queue<element_t> todo;
  auto push = [&](element_t x) {
    if (!seen[x]) { seen[x] = 1; closure.push_back(x); todo.push(x); }
  };
  push(g->identity());
  for (element_t x : gens) {
    if (x < 0 || x >= g->order()) fail(errc::bad_input, "generator out of range");
    push(x);
  }
  while (!todo.empty()) {
    element_t x = todo.front();
    todo.pop();
    for (element_t y : gens) push(g->mul(x, y));
  }
  return Subgroup(g, std::move(closure));
}

std::vector<Subgroup> enumerate_subgroups(const GroupPtr& g, int cap) {
  if (g->order() > cap)
    fail(errc::size_limit_exceeded, "subgroup enumeration capped at order " +
                                        std::to_string(cap));
  // Grow every known subgroup by one extra generator until nothing new
  // appears. Each subgroup is reachable through a chain of such extensions,
  // so the sweep is complete.
  std::set<std::vector<element_t>> known;
  std::queue<std::vector<element_t>> frontier;
  auto add = [&](std::vector<element_t> elems) {
    if (known.insert(elems).second) frontier.push(std::move(elems));
  };
  add(generated_subgroup(g, {}).elements());
  while (!frontier.empty()) {
    std::vector<element_t> base = std::move(frontier.front());
    frontier.pop();
    std::vector<uint8_t> in_base(g->order(), 0);
    for (element_t x : base) in_base[x] = 1;
    for (element_t x = 0; x < g->order(); ++x) {
      if (in_base[x]) continue;
      std::vector<element_t> gens = base;
      gens.push_back(x);
      add(generated_subgroup(g, gens).elements());
    }
  }
  std::vector<Subgroup> out;
  out.reserve(known.size());
  for (const auto& elems : known) out.emplace_back(g, elems);
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements() < b.elements();
  });
  return out;
}

std::vector<Coset> left_cosets(const Subgroup& h) {
  const auto& g = *h.group();
  std::vector<uint8_t> seen(g.order(), 0);
  std::vector<Coset> out;
  for (element_t x = 0; x < g.order(); ++x) {
    if (seen[x]) continue;
    Coset c(h, x);
    for (element_t m : c.members()) seen[m] = 1;
    out.push_back(std::move(c));
  }
  return out;
}

Coset coset_of(const Subgroup& h, element_t x) {
  if (x < 0 || x >= h.group()->order()) fail(errc::bad_input, "element out of range");
  return Coset(h, x);
}

bool is_abelian(const FiniteGroup& g) {
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < a; ++b)
      if (g.mul(a, b) != g.mul(b, a)) return false;
  return true;
}

}  // namespace cosetforge
