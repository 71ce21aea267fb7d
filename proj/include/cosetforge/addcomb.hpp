#pragma once

#include <cstdint>
#include <vector>

#include "cosetforge/func.hpp"

namespace cosetforge {

/// A*B = {a*b}, returned sorted and duplicate-free. Inputs are canonicalized
/// the same way; empty inputs are errors throughout this header.
std::vector<element_t> product_set(const GroupPtr& g, const std::vector<element_t>& a,
                                   const std::vector<element_t>& b);
std::vector<element_t> inverse_set(const GroupPtr& g, const std::vector<element_t>& a);

/// |A*A^-1| / |A|.
double doubling_ratio(const GroupPtr& g, const std::vector<element_t>& a);

/// The checked data of an eta-closed system: Zminus*X inside Z, Z*X^-1
/// inside Zplus, and the achieved eta = |Zplus \ Zminus| / |Z|.
struct EtaClosedWitness {
  std::vector<element_t> z, x, zplus, zminus;
  double eta_achieved;
};

/// Verifies both inclusions (the error names a violating pair) and computes
/// the achieved eta. With as_neighbourhoods set, all four sets must also be
/// symmetric and contain the identity.
EtaClosedWitness check_eta_closed(const GroupPtr& g, const std::vector<element_t>& z,
                                  const std::vector<element_t>& x,
                                  const std::vector<element_t>& zplus,
                                  const std::vector<element_t>& zminus,
                                  bool as_neighbourhoods = false);

/// Covering translates T, a subset of X with {W^-1 W t : t in T} covering X;
/// the size bound is |W*X| / |W|. Both facts are re-checked exhaustively
/// before returning.
struct CoverResult {
  std::vector<element_t> translates;
  double bound;
};
CoverResult ruzsa_cover(const GroupPtr& g, const std::vector<element_t>& x,
                        const std::vector<element_t>& w);

/// Index vectors in [k]^t split by triviality: trivial means at most one
/// coordinate holds a value no other coordinate holds. Exact enumeration,
/// refused above k^t = 10^7.
struct IndexCounts {
  long long trivial = 0;
  long long nontrivial = 0;
};
IndexCounts trivial_indices(int k, int t);

/// Number of maps [2r] -> [k] in which no value occurs exactly once.
long long r_multi_count(int k, int r);

/// One connectivity witness: the signed product of x-entries selected by the
/// index vector lands back in A. index_vector holds 0-based positions into
/// x, signs hold +1/-1, and the word length is 2r+1.
struct ConnectivityWitness {
  std::vector<element_t> x;
  int r;
  std::vector<int> index_vector;
  std::vector<int> signs;
};

enum class ConnectivityVerdict { connected, counterexample, inconclusive };

struct ConnectivityCertificate {
  int k = 0;
  int l = 0;
  ConnectivityVerdict verdict = ConnectivityVerdict::inconclusive;
  std::vector<element_t> counterexample;  // the offending tuple, if any
  std::vector<ConnectivityWitness> witnesses;
  long long tuples_checked = 0;
};

/// Exhaustive check over all of A^k: every tuple needs a witness with some
/// r <= l, a nontrivial index vector, and signs putting the word back in A.
/// Search order is increasing r, lexicographic index vector, then signs with
/// the all-positive assignment first, so certificates are deterministic.
/// Refuses |A|^k > 10^7 and suggests sampling instead.
ConnectivityCertificate is_arithmetically_connected(const GroupPtr& g,
                                                    const std::vector<element_t>& a, int k,
                                                    int l);

/// Same search over uniformly sampled tuples: a counterexample is definitive,
/// anything else stays inconclusive.
struct SampleMode {
  long long samples;
  uint64_t seed;
};
ConnectivityCertificate is_arithmetically_connected(const GroupPtr& g,
                                                    const std::vector<element_t>& a, int k,
                                                    int l, const SampleMode& mode);

/// #{(a,a',b,b') in A^2 x B^2 : a*b = a'*b'}, the squared l2 norm of the
/// counting convolution of the indicators. Exact integer.
long long energy(const GroupPtr& g, const std::vector<element_t>& a,
                 const std::vector<element_t>& b);

/// A subset of A extracted through the popular-products graph, with its
/// measured size fraction and doubling; the energy that justified the
/// extraction is reported back.
struct BsgResult {
  std::vector<element_t> subset;
  double fraction;
  double doubling;
  long long energy_found;
};

/// Requires energy(A,B) >= |A|^3 / threshold_k (recomputed here). Builds the
/// bipartite graph of pairs whose product is popular, keeps A-vertices of at
/// least half-average degree, anchors at the best of them, and returns the
/// anchor together with everything sharing enough popular neighbours.
BsgResult bsg_extract(const GroupPtr& g, const std::vector<element_t>& a,
                      const std::vector<element_t>& b, double threshold_k);

/// Outcome of repeated sampling trials of the convolution estimator.
struct CsTrialResult {
  int r_used;
  int trials;
  double success_rate;
};

/// For a measure nu and one function per group element, compares the true
/// weighted sum against averages of r samples drawn from |nu|/||nu||, each
/// weighted by ||nu|| times the unit phase of nu at the sample. A trial
/// succeeds when the L_p(mean) error stays within eps times the largest
/// L_p norm in the family. r defaults to ceil(8 p / eps^2).
CsTrialResult croot_sisask_trial(const MeasureOnG& nu, const std::vector<FuncC>& family,
                                 double p, double eps, int trials, uint64_t seed,
                                 int r_override = 0);

/// Structured subset of the support of the rounding of f, produced by the
/// popular-pattern pipeline: exhaustive connectivity, the most popular
/// (r, index vector, signs) word, the best fixing of its repeated variables,
/// energy of the two derived translate families, and graph extraction, all
/// pulled back into the support.
struct StructSubsetStats {
  int r;
  std::vector<int> index_vector;
  std::vector<int> signs;
  long long pattern_count;
  long long translate_energy;
  double fraction;
  double doubling;
};
struct StructSubsetResult {
  std::vector<element_t> subset;
  StructSubsetStats stats;
};
StructSubsetResult find_struct_subset(const FuncC& f, double eps, int k, int l);

}  // namespace cosetforge
