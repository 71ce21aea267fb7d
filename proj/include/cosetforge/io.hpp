#pragma once

#include <optional>
#include <string>

#include "cosetforge/decompose.hpp"
#include "cosetforge/func.hpp"
#include "cosetforge/group.hpp"
#include "cosetforge/tree.hpp"
#include "json.hpp"

namespace cosetforge {

/// All file payloads use order-preserving JSON so output is byte-stable.
using Json = nlohmann::ordered_json;

/// Builtin group grammar: Z<n>, D<m>, S<m>, cube<k>, and x-joined products
/// of those ("Z2xZ4"). Returns nullptr when the name does not parse, so
/// callers can fall back to treating it as a path.
GroupPtr parse_group_name(const std::string& name);

/// A builtin name, or else a path to a group JSON file.
GroupPtr load_group(const std::string& ref);

/// {"name", "order", "identity", "table"}. Reading validates the full group
/// axioms and cross-checks the declared identity against the derived one.
GroupPtr group_from_json(const Json& j);
Json group_to_json(const FiniteGroup& g);

/// {"group": name-or-path, "mode": "float"|"exact", "values": [...]}.
/// Exact values are integers or [num,den] pairs; float values are numbers
/// or [re,im] pairs. Exactly one of the two function fields is meaningful.
struct FunctionFile {
  GroupPtr group;
  bool exact = false;
  std::optional<FuncQ> rational;
  std::optional<FuncC> floating;
};
FunctionFile function_from_json(const Json& j);
Json function_to_json(const FuncQ& f, const std::string& group_ref = "");
Json function_to_json(const FuncC& f, const std::string& group_ref = "");

/// {"group": ref, "root": id, "nodes": [{"kind":"internal","subgroup":[...],
/// "rep":int,"e1":id,"e0":id} | {"kind":"leaf","value":int}]}.
CosetDecisionTree tree_from_json(const Json& j);
Json tree_to_json(const CosetDecisionTree& t, const std::string& group_ref = "");

/// {"group": ref, "layers": [{"subgroup":[ints],
/// "terms":[{"rep":int,"coeff":int}]}]}.
CosetDecomposition decomposition_from_json(const Json& j);
Json decomposition_to_json(const CosetDecomposition& d,
                           const std::string& group_ref = "");

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cosetforge
