#pragma once

// JSON encodings of fibres, moduli, graphs, groups and cuspidal divisors.
// Integers that do not fit in 64 bits are written as decimal strings.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "neron/modular.hpp"
#include "neron/neron.hpp"

namespace neron::io {

using Json = nlohmann::ordered_json;

inline Json to_json(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return Json(static_cast<std::int64_t>(x));
  return Json(x.str());
}

inline Integer integer_from_json(const Json& j, const std::string& what) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw InvalidInput(what + ": expected an integer");
}

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(where + ": missing field '" + key + "'");
  return *it;
}

inline const Json& array_field(const Json& j, const char* key, const std::string& where) {
  const auto& a = field(j, key, where);
  if (!a.is_array()) throw InvalidInput(where + ": field '" + key + "' must be an array");
  return a;
}

inline std::string string_field(const Json& j, const char* key, const std::string& where) {
  const auto& s = field(j, key, where);
  if (!s.is_string()) throw InvalidInput(where + ": field '" + key + "' must be a string");
  return s.get<std::string>();
}

inline Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Json to_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

inline IntMatrix matrix_from_json(const Json& j, const std::string& what, std::size_t cols_if_empty = 0) {
  if (!j.is_array()) throw InvalidInput(what + ": expected an array of rows");
  std::vector<IntVector> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw InvalidInput(what + ": every row must be an array");
    IntVector row;
    for (const auto& x : r) row.push_back(integer_from_json(x, what));
    rows.push_back(std::move(row));
  }
  return IntMatrix::from_rows(rows, cols_if_empty);
}

inline Json to_json(const FGAbGroup& g) {
  return Json{{"invariant_factors", to_json(g.invariant_factors())},
              {"free_rank", g.free_rank()},
              {"string", g.to_string()}};
}

// ---------------------------------------------------------------------------
// fibres and moduli

inline Json to_json(const SpecialFibre& f) {
  Json comps = Json::array();
  for (const auto& c : f.components) comps.push_back(Json{{"label", c.label}, {"d", to_json(c.d)}, {"n", c.n}});
  return Json{{"p", to_json(f.p)}, {"components", comps}, {"intersection", to_json(f.intersection)}};
}

inline SpecialFibre fibre_from_json(const Json& j) {
  const std::string where = "fibre";
  SpecialFibre f;
  f.p = integer_from_json(field(j, "p", where), "fibre.p");
  for (const auto& c : array_field(j, "components", where)) {
    FibreComponent fc;
    fc.label = string_field(c, "label", "fibre.components");
    fc.d = integer_from_json(field(c, "d", "fibre.components"), "fibre.components.d");
    if (c.contains("n")) {
      Integer n = integer_from_json(c["n"], "fibre.components.n");
      if (n < 0 || n > 64) throw InvalidInput("fibre.components.n: out of range");
      fc.n = static_cast<unsigned>(n);
    }
    f.components.push_back(std::move(fc));
  }
  f.intersection = matrix_from_json(field(j, "intersection", where), "fibre.intersection", f.components.size());
  return f;
}

inline Json to_json(const ModulusIncidence& m) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) pts.push_back(Json{{"label", m.points[i]}, {"e", to_json(m.e[i])}});
  return Json{{"points", pts}, {"h", to_json(m.h)}};
}

inline ModulusIncidence modulus_from_json(const Json& j, std::size_t components) {
  const std::string where = "modulus";
  ModulusIncidence m;
  for (const auto& p : array_field(j, "points", where)) {
    m.points.push_back(string_field(p, "label", "modulus.points"));
    m.e.push_back(integer_from_json(field(p, "e", "modulus.points"), "modulus.points.e"));
  }
  m.h = matrix_from_json(field(j, "h", where), "modulus.h", components);
  return m;
}

// ---------------------------------------------------------------------------
// graphs

inline Json to_json(const GraphWithModulus& g) {
  Json b = Json::array(), ss = Json::array(), sr = Json::array();
  for (const auto& x : g.base().B()) b.push_back(Json{{"id", x.id}, {"phi", x.phi}, {"psi", x.psi}});
  for (const auto& x : g.sigma_sing()) ss.push_back(Json{{"id", x.id}, {"lambda", x.target}});
  for (const auto& x : g.sigma_reg()) sr.push_back(Json{{"id", x.id}, {"theta", x.target}});
  return Json{{"A", g.base().A()}, {"C", g.base().C()}, {"B", b}, {"sigma_sing", ss}, {"sigma_reg", sr}};
}

inline GraphWithModulus graph_from_json(const Json& j) {
  const std::string where = "graph";
  auto labels = [&](const char* key) {
    std::vector<std::string> out;
    for (const auto& s : array_field(j, key, where)) {
      if (!s.is_string()) throw InvalidInput(std::string("graph.") + key + ": labels must be strings");
      out.push_back(s.get<std::string>());
    }
    return out;
  };
  std::vector<Branch> B;
  for (const auto& x : array_field(j, "B", where))
    B.push_back({string_field(x, "id", "graph.B"), string_field(x, "phi", "graph.B"), string_field(x, "psi", "graph.B")});
  auto points = [&](const char* key, const char* target) {
    std::vector<ModulusPoint> out;
    if (!j.contains(key)) return out;
    for (const auto& x : array_field(j, key, where))
      out.push_back({string_field(x, "id", std::string("graph.") + key), string_field(x, target, std::string("graph.") + key)});
    return out;
  };
  return GraphWithModulus(ExtendedGraph(labels("A"), labels("C"), std::move(B)), points("sigma_sing", "lambda"),
                          points("sigma_reg", "theta"));
}

// ---------------------------------------------------------------------------
// cuspidal divisors

inline Json to_json(const CuspidalDivisor& D) {
  Json terms = Json::array();
  for (const auto& [x, c] : D.terms()) terms.push_back(Json{{"d", x.d}, {"c", x.c}, {"coeff", to_json(c)}});
  return Json{{"N", D.N()}, {"terms", terms}};
}

inline std::uint64_t small_from_json(const Json& j, const std::string& what) {
  Integer x = integer_from_json(j, what);
  if (x < 0 || x > std::numeric_limits<std::uint32_t>::max()) throw InvalidInput(what + ": out of range");
  return static_cast<std::uint64_t>(x);
}

inline CuspidalDivisor divisor_from_json(const Json& j) {
  const std::string where = "divisor";
  const std::uint64_t N = small_from_json(field(j, "N", where), "divisor.N");
  if (N == 0) throw InvalidInput("divisor.N: must be positive");
  CuspidalDivisor D(N);
  for (const auto& t : array_field(j, "terms", where)) {
    auto x = make_cusp(N, small_from_json(field(t, "d", "divisor.terms"), "divisor.terms.d"),
                       small_from_json(field(t, "c", "divisor.terms"), "divisor.terms.c"));
    D.add(x, integer_from_json(field(t, "coeff", "divisor.terms"), "divisor.terms.coeff"));
  }
  return D;
}

// ---------------------------------------------------------------------------
// files

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Plain-text rendering of a report: scalars as "key: value", integer
/// matrices as aligned rows, objects indented.
namespace detail {

inline std::string scalar_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

inline bool is_scalar_array(const Json& j) {
  if (!j.is_array()) return false;
  for (const auto& x : j)
    if (x.is_structured()) return false;
  return true;
}

inline bool is_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const auto& r : j)
    if (!is_scalar_array(r) || r.empty()) return false;
  return true;
}

inline void render(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, v] : j.items()) {
    os << pad << key << ':';
    if (!v.is_structured()) {
      os << ' ' << scalar_text(v) << '\n';
    } else if (v.empty()) {
      os << (v.is_array() ? " []" : " {}") << '\n';
    } else if (is_scalar_array(v)) {
      os << ' ';
      bool first = true;
      for (const auto& x : v) {
        os << (first ? "" : ", ") << scalar_text(x);
        first = false;
      }
      os << '\n';
    } else if (is_matrix(v)) {
      os << '\n';
      std::size_t w = 1;
      for (const auto& r : v)
        for (const auto& x : r) w = std::max(w, scalar_text(x).size());
      for (const auto& r : v) {
        os << pad << "  [";
        bool first = true;
        for (const auto& x : r) {
          auto s = scalar_text(x);
          os << (first ? "" : " ") << std::string(w - s.size(), ' ') << s;
          first = false;
        }
        os << "]\n";
      }
    } else if (v.is_array()) {
      os << '\n';
      for (const auto& x : v) {
        if (x.is_object()) {
          os << pad << "  -\n";
          render(os, x, indent + 4);
        } else {
          os << pad << "  - " << x.dump() << '\n';
        }
      }
    } else {
      os << '\n';
      render(os, v, indent + 2);
    }
  }
}

}  // namespace detail

inline std::string to_table(const Json& report) {
  std::ostringstream os;
  if (report.is_object()) detail::render(os, report, 0);
  else os << report.dump() << '\n';
  return os.str();
}

}  // namespace neron::io
