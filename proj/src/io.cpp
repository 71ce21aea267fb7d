#include "cosetforge/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cosetforge/errors.hpp"

namespace cosetforge {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

GroupPtr parse_atom(const std::string& name) {
  auto num = [&](size_t prefix) { return std::stoi(name.substr(prefix)); };
  if (name.size() > 1 && name[0] == 'Z' && all_digits(name.substr(1)))
    return make_cyclic(num(1));
  if (name.size() > 1 && name[0] == 'D' && all_digits(name.substr(1)))
    return make_dihedral(num(1));
  if (name.size() > 1 && name[0] == 'S' && all_digits(name.substr(1)))
    return make_symmetric(num(1));
  if (name.size() > 4 && name.rfind("cube", 0) == 0 && all_digits(name.substr(4)))
    return make_boolean_cube(num(4));
  return nullptr;
}

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    fail(errc::schema_violation, where + ": missing \"" + key + "\"");
  return j.at(key);
}

long long need_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer())
    fail(errc::schema_violation, where + ": expected an integer");
  return j.get<long long>();
}

std::vector<element_t> need_elements(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty())
    fail(errc::schema_violation, where + ": expected a nonempty array of elements");
  std::vector<element_t> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(static_cast<element_t>(
        need_int(j[i], where + "[" + std::to_string(i) + "]")));
  return out;
}

// Numerator/denominator as long long, refusing values that do not fit.
std::pair<long long, long long> rat_parts(const Rat& v) {
  if (!v.get_num().fits_slong_p() || !v.get_den().fits_slong_p())
    fail(errc::io_failure, "rational value too large to serialize");
  return {v.get_num().get_si(), v.get_den().get_si()};
}

}  // namespace

GroupPtr parse_group_name(const std::string& name) {
  if (name.find('x') == std::string::npos) return parse_atom(name);
  GroupPtr acc;
  size_t start = 0;
  while (start <= name.size()) {
    size_t cut = name.find('x', start);
    std::string part =
        name.substr(start, cut == std::string::npos ? cut : cut - start);
    auto g = parse_atom(part);
    if (!g) return nullptr;
    acc = acc ? make_product(acc, g) : g;
    if (cut == std::string::npos) break;
    start = cut + 1;
  }
  return acc;
}

GroupPtr load_group(const std::string& ref) {
  if (auto g = parse_group_name(ref)) return g;
  return group_from_json(read_json_file(ref));
}

GroupPtr group_from_json(const Json& j) {
  const auto& name = need(j, "name", "group");
  if (!name.is_string()) fail(errc::schema_violation, "group: \"name\" must be a string");
  long long order = need_int(need(j, "order", "group"), "group order");
  long long identity = need_int(need(j, "identity", "group"), "group identity");
  const auto& table = need(j, "table", "group");
  if (!table.is_array() || table.size() != static_cast<size_t>(order))
    fail(errc::schema_violation, "group: \"table\" must be an array of " +
                                     std::to_string(order) + " rows");
  std::vector<std::vector<element_t>> rows;
  for (size_t a = 0; a < table.size(); ++a) {
    const auto& row = table[a];
    if (!row.is_array() || row.size() != static_cast<size_t>(order))
      fail(errc::schema_violation,
           "group: row " + std::to_string(a) + " must have " + std::to_string(order) +
               " entries");
    std::vector<element_t> r;
    for (size_t b = 0; b < row.size(); ++b) {
      long long v = need_int(row[b], "group table[" + std::to_string(a) + "][" +
                                         std::to_string(b) + "]");
      if (v < 0 || v >= order)
        fail(errc::schema_violation, "group: table entry " + std::to_string(v) +
                                         " out of range at [" + std::to_string(a) +
                                         "][" + std::to_string(b) + "]");
      r.push_back(static_cast<element_t>(v));
    }
    rows.push_back(std::move(r));
  }
  auto g = validate_group(rows, name.get<std::string>());
  if (g->identity() != identity)
    fail(errc::schema_violation, "group: declared identity " + std::to_string(identity) +
                                     " but the table derives " +
                                     std::to_string(g->identity()));
  return g;
}

Json group_to_json(const FiniteGroup& g) {
  Json j;
  j["name"] = g.name();
  j["order"] = g.order();
  j["identity"] = g.identity();
  Json table = Json::array();
  for (element_t a = 0; a < g.order(); ++a) {
    Json row = Json::array();
    for (element_t b = 0; b < g.order(); ++b) row.push_back(g.mul(a, b));
    table.push_back(std::move(row));
  }
  j["table"] = std::move(table);
  return j;
}

FunctionFile function_from_json(const Json& j) {
  const auto& ref = need(j, "group", "function");
  if (!ref.is_string())
    fail(errc::schema_violation, "function: \"group\" must be a name or path");
  const auto& mode = need(j, "mode", "function");
  if (!mode.is_string() || (mode != "float" && mode != "exact"))
    fail(errc::schema_violation, "function: \"mode\" must be \"float\" or \"exact\"");
  const auto& values = need(j, "values", "function");

  FunctionFile out;
  out.group = load_group(ref.get<std::string>());
  out.exact = mode == "exact";
  if (!values.is_array() || values.size() != static_cast<size_t>(out.group->order()))
    fail(errc::schema_violation, "function: \"values\" must list " +
                                     std::to_string(out.group->order()) + " entries");

  if (out.exact) {
    auto f = FuncQ::zero(out.group);
    for (size_t i = 0; i < values.size(); ++i) {
      const auto& v = values[i];
      std::string where = "function values[" + std::to_string(i) + "]";
      if (v.is_number_integer()) {
        f.values[i] = make_rat(v.get<long long>(), 1);
      } else if (v.is_array() && v.size() == 2) {
        long long num = need_int(v[0], where);
        long long den = need_int(v[1], where);
        if (den == 0) fail(errc::schema_violation, where + ": zero denominator");
        f.values[i] = make_rat(num, den);
      } else {
        fail(errc::schema_violation, where + ": exact mode wants an integer or [num,den]");
      }
    }
    out.rational = std::move(f);
  } else {
    auto f = FuncC::zero(out.group);
    for (size_t i = 0; i < values.size(); ++i) {
      const auto& v = values[i];
      std::string where = "function values[" + std::to_string(i) + "]";
      if (v.is_number()) {
        f.values[i] = Cplx(v.get<double>(), 0.0);
      } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        f.values[i] = Cplx(v[0].get<double>(), v[1].get<double>());
      } else {
        fail(errc::schema_violation, where + ": float mode wants a number or [re,im]");
      }
    }
    out.floating = std::move(f);
  }
  return out;
}

Json function_to_json(const FuncQ& f, const std::string& group_ref) {
  Json j;
  j["group"] = group_ref.empty() ? f.group->name() : group_ref;
  j["mode"] = "exact";
  Json values = Json::array();
  for (element_t x = 0; x < f.size(); ++x) {
    auto [num, den] = rat_parts(f[x]);
    if (den == 1)
      values.push_back(num);
    else
      values.push_back(Json::array({num, den}));
  }
  j["values"] = std::move(values);
  return j;
}

Json function_to_json(const FuncC& f, const std::string& group_ref) {
  Json j;
  j["group"] = group_ref.empty() ? f.group->name() : group_ref;
  j["mode"] = "float";
  Json values = Json::array();
  for (element_t x = 0; x < f.size(); ++x) {
    if (f[x].imag() == 0.0)
      values.push_back(f[x].real());
    else
      values.push_back(Json::array({f[x].real(), f[x].imag()}));
  }
  j["values"] = std::move(values);
  return j;
}

CosetDecisionTree tree_from_json(const Json& j) {
  const auto& ref = need(j, "group", "tree");
  if (!ref.is_string())
    fail(errc::schema_violation, "tree: \"group\" must be a name or path");
  auto g = load_group(ref.get<std::string>());
  int root = static_cast<int>(need_int(need(j, "root", "tree"), "tree root"));
  const auto& nodes = need(j, "nodes", "tree");
  if (!nodes.is_array()) fail(errc::schema_violation, "tree: \"nodes\" must be an array");

  std::vector<CosetDecisionTree::Node> arena;
  for (size_t i = 0; i < nodes.size(); ++i) {
    const auto& nd = nodes[i];
    std::string where = "tree nodes[" + std::to_string(i) + "]";
    const auto& kind = need(nd, "kind", where);
    if (kind == "leaf") {
      arena.emplace_back(
          CosetDecisionTree::Leaf{need_int(need(nd, "value", where), where + " value")});
    } else if (kind == "internal") {
      Subgroup sub(g, need_elements(need(nd, "subgroup", where), where + " subgroup"));
      auto rep = static_cast<element_t>(need_int(need(nd, "rep", where), where + " rep"));
      if (rep < 0 || rep >= g->order())
        fail(errc::schema_violation, where + ": rep out of range");
      int e1 = static_cast<int>(need_int(need(nd, "e1", where), where + " e1"));
      int e0 = static_cast<int>(need_int(need(nd, "e0", where), where + " e0"));
      arena.emplace_back(CosetDecisionTree::Internal{Coset(std::move(sub), rep), e1, e0});
    } else {
      fail(errc::schema_violation, where + ": kind must be \"internal\" or \"leaf\"");
    }
  }
  return CosetDecisionTree(g, std::move(arena), root);
}

Json tree_to_json(const CosetDecisionTree& t, const std::string& group_ref) {
  Json j;
  j["group"] = group_ref.empty() ? t.group()->name() : group_ref;
  j["root"] = t.root();
  Json nodes = Json::array();
  for (const auto& node : t.nodes()) {
    Json nd;
    if (const auto* in = std::get_if<CosetDecisionTree::Internal>(&node)) {
      nd["kind"] = "internal";
      nd["subgroup"] = in->test.subgroup().elements();
      nd["rep"] = in->test.representative();
      nd["e1"] = in->edge1;
      nd["e0"] = in->edge0;
    } else {
      nd["kind"] = "leaf";
      nd["value"] = std::get<CosetDecisionTree::Leaf>(node).value;
    }
    nodes.push_back(std::move(nd));
  }
  j["nodes"] = std::move(nodes);
  return j;
}

CosetDecomposition decomposition_from_json(const Json& j) {
  const auto& ref = need(j, "group", "decomposition");
  if (!ref.is_string())
    fail(errc::schema_violation, "decomposition: \"group\" must be a name or path");
  CosetDecomposition d;
  d.group = load_group(ref.get<std::string>());
  const auto& layers = need(j, "layers", "decomposition");
  if (!layers.is_array())
    fail(errc::schema_violation, "decomposition: \"layers\" must be an array");
  for (size_t i = 0; i < layers.size(); ++i) {
    std::string where = "decomposition layers[" + std::to_string(i) + "]";
    const auto& layer = layers[i];
    Subgroup sub(d.group, need_elements(need(layer, "subgroup", where), where + " subgroup"));
    CosetDecomposition::Layer out{std::move(sub), {}};
    const auto& terms = need(layer, "terms", where);
    if (!terms.is_array()) fail(errc::schema_violation, where + ": terms must be an array");
    for (size_t k = 0; k < terms.size(); ++k) {
      std::string twhere = where + " terms[" + std::to_string(k) + "]";
      const auto& term = terms[k];
      auto rep = static_cast<element_t>(need_int(need(term, "rep", twhere), twhere));
      long long coeff = need_int(need(term, "coeff", twhere), twhere);
      if (!out.coeffs.emplace(rep, coeff).second)
        fail(errc::schema_violation, twhere + ": duplicate representative");
    }
    d.layers.push_back(std::move(out));
  }
  check_decomposition(d);
  return d;
}

Json decomposition_to_json(const CosetDecomposition& d, const std::string& group_ref) {
  Json j;
  j["group"] = group_ref.empty() ? d.group->name() : group_ref;
  Json layers = Json::array();
  for (const auto& layer : d.layers) {
    Json jl;
    jl["subgroup"] = layer.subgroup.elements();
    Json terms = Json::array();
    for (const auto& [rep, coeff] : layer.coeffs) {
      Json t;
      t["rep"] = rep;
      t["coeff"] = coeff;
      terms.push_back(std::move(t));
    }
    jl["terms"] = std::move(terms);
    layers.push_back(std::move(jl));
  }
  j["layers"] = std::move(layers);
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_failure, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(errc::io_failure, "cannot read " + path);
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    fail(errc::parse_failure, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(errc::io_failure, "cannot open " + path + " for writing");
  out << text;
  if (!out) fail(errc::io_failure, "cannot write " + path);
}

}  // namespace cosetforge
