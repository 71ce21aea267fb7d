#pragma once

#include <stdexcept>
#include <string>

namespace cosetforge {

/// Every failure the library reports, by name. The CLI maps these to exit
/// codes and a structured stderr record; tests match on them directly.
enum class errc {
  // group construction and validation
  non_bijective_row,
  non_bijective_column,
  no_identity,
  missing_inverse,
  non_associative,
  size_limit_exceeded,
  // functions and measures
  group_mismatch,
  not_almost_integer,
  ambiguous_epsilon,
  // spectral
  numerical_failure,
  not_explicitly_abelian,
  additivity_violation,
  // trees and decompositions
  malformed_tree,
  empty_decomposition,
  mismatch,
  budget_exhausted,
  iteration_cap,
  // additive combinatorics
  empty_set,
  inclusion_violation,
  not_symmetric,
  enumeration_too_large,
  threshold_unmet,
  degenerate_measure,
  no_popular_pattern,
  // serialization and cli
  io_failure,
  parse_failure,
  schema_violation,
  suite_unknown,
  not_prime,
  bad_input,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
  throw Error(code, what);
}

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::non_bijective_row: return "NonBijectiveRow";
    case errc::non_bijective_column: return "NonBijectiveColumn";
    case errc::no_identity: return "NoIdentity";
    case errc::missing_inverse: return "MissingInverse";
    case errc::non_associative: return "NonAssociative";
    case errc::size_limit_exceeded: return "SizeLimitExceeded";
    case errc::group_mismatch: return "GroupMismatch";
    case errc::not_almost_integer: return "NotAlmostInteger";
    case errc::ambiguous_epsilon: return "AmbiguousEpsilon";
    case errc::numerical_failure: return "NumericalFailure";
    case errc::not_explicitly_abelian: return "NotExplicitlyAbelian";
    case errc::additivity_violation: return "AdditivityViolation";
    case errc::malformed_tree: return "MalformedTree";
    case errc::empty_decomposition: return "EmptyDecomposition";
    case errc::mismatch: return "Mismatch";
    case errc::budget_exhausted: return "BudgetExhausted";
    case errc::iteration_cap: return "IterationCap";
    case errc::empty_set: return "EmptySet";
    case errc::inclusion_violation: return "InclusionViolation";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::enumeration_too_large: return "EnumerationTooLarge";
    case errc::threshold_unmet: return "ThresholdUnmet";
    case errc::degenerate_measure: return "DegenerateMeasure";
    case errc::no_popular_pattern: return "NoPopularPattern";
    case errc::io_failure: return "IoFailure";
    case errc::parse_failure: return "ParseFailure";
    case errc::schema_violation: return "SchemaViolation";
    case errc::suite_unknown: return "SuiteUnknown";
    case errc::not_prime: return "NotPrime";
    case errc::bad_input: return "BadInput";
  }
  return "UnknownError";
}

}  // namespace cosetforge
