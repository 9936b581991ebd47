#include "conecrafter/document.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace conecrafter {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ParseError(path.empty() ? key : path + "." + key, "missing field");
  return obj.at(key);
}

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Rational rational_of(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
  throw ParseError(path, "expected a rational as a \"p/q\" string or an integer");
}

Integer integer_of(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Integer(v.get<long long>());
  if (v.is_string()) {
    const Rational q = rational_of(v, path);
    if (denominator_of(q) != 1) throw ParseError(path, "expected an integer");
    return numerator_of(q);
  }
  throw ParseError(path, "expected an integer");
}

template <typename Scalar, typename F>
Matrix<Scalar> matrix_of(const json& v, Index size, const std::string& path, F entry) {
  if (!v.is_array() || static_cast<Index>(v.size()) != size)
    throw ParseError(path, "expected " + std::to_string(size) + " rows");
  Matrix<Scalar> m(size, size);
  for (Index i = 0; i < size; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    const std::string rp = index(path, static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Index>(row.size()) != size)
      throw ParseError(rp, "expected " + std::to_string(size) + " entries");
    for (Index j = 0; j < size; ++j)
      m(i, j) = entry(row[static_cast<std::size_t>(j)], index(rp, static_cast<std::size_t>(j)));
  }
  return m;
}

RationalMatrix rational_matrix(const json& v, Index size, const std::string& path) {
  return matrix_of<Rational>(v, size, path, rational_of);
}

IntegerMatrix integer_matrix(const json& v, Index size, const std::string& path) {
  return matrix_of<Integer>(v, size, path, integer_of);
}

RationalVector rational_vector(const json& v, Index size, const std::string& path) {
  if (!v.is_array() || static_cast<Index>(v.size()) != size)
    throw ParseError(path, "expected " + std::to_string(size) + " entries");
  RationalVector out(size);
  for (Index i = 0; i < size; ++i)
    out(i) = rational_of(v[static_cast<std::size_t>(i)], index(path, static_cast<std::size_t>(i)));
  return out;
}

std::int64_t positive_int(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() <= 0) throw ParseError(path, "expected a positive integer");
  return v.get<long long>();
}

}  // namespace

ProblemDocument parse_document(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("", "document must be a JSON object");

  const json& schema = require(root, "schema", "");
  if (!schema.is_string() || schema.get<std::string>() != "conecrafter/1")
    throw ParseError("schema", "expected \"conecrafter/1\"");

  ProblemDocument doc;
  if (root.contains("name")) {
    if (!root["name"].is_string()) throw ParseError("name", "expected a string");
    doc.name = root["name"].get<std::string>();
  }
  if (root.contains("kind")) {
    if (!root["kind"].is_string()) throw ParseError("kind", "expected a string");
    doc.kind = root["kind"].get<std::string>();
    if (doc.kind != "ghv" && doc.kind != "abelian") throw ParseError("kind", "expected \"ghv\" or \"abelian\"");
  }
  const json& rank = require(root, "lattice_rank", "");
  if (!rank.is_number_integer() || rank.get<long long>() <= 0 || rank.get<long long>() % 2 != 0)
    throw ParseError("lattice_rank", "expected a positive even integer");
  doc.lattice_rank = rank.get<long long>();
  const Index n = doc.lattice_rank;

  doc.complex_structure = rational_matrix(require(root, "complex_structure", ""), n, "complex_structure");
  doc.polarization = integer_matrix(require(root, "polarization", ""), n, "polarization");

  if (root.contains("group")) {
    const json& group = root["group"];
    if (!group.is_array()) throw ParseError("group", "expected a list");
    for (std::size_t i = 0; i < group.size(); ++i) {
      const std::string p = index("group", i);
      const json& g = group[i];
      if (!g.is_object()) throw ParseError(p, "expected an object");
      IntegerMatrix linear = integer_matrix(require(g, "linear", p), n, child(p, "linear"));
      RationalVector translation = RationalVector::Zero(n);
      if (g.contains("translation")) translation = rational_vector(g["translation"], n, child(p, "translation"));
      doc.group.push_back({std::move(linear), std::move(translation)});
    }
  }
  if (root.contains("normalizer_generators")) {
    const json& gens = root["normalizer_generators"];
    if (!gens.is_array()) throw ParseError("normalizer_generators", "expected a list");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const std::string p = index("normalizer_generators", i);
      if (!gens[i].is_object()) throw ParseError(p, "expected an object");
      doc.normalizer_generators.push_back(integer_matrix(require(gens[i], "linear", p), n, child(p, "linear")));
    }
  }
  if (root.contains("test_classes")) {
    const json& classes = root["test_classes"];
    if (!classes.is_array()) throw ParseError("test_classes", "expected a list");
    for (std::size_t i = 0; i < classes.size(); ++i)
      doc.test_classes.push_back(rational_matrix(classes[i], n, index("test_classes", i)));
  }
  if (root.contains("reduction")) {
    const json& r = root["reduction"];
    if (!r.is_object()) throw ParseError("reduction", "expected an object");
    if (r.contains("samples")) doc.reduction.samples = static_cast<std::size_t>(positive_int(r["samples"], "reduction.samples"));
    if (r.contains("seed")) {
      if (!r["seed"].is_number_unsigned()) throw ParseError("reduction.seed", "expected a nonnegative integer");
      doc.reduction.seed = r["seed"].get<std::uint64_t>();
    }
    if (r.contains("max_steps")) doc.reduction.max_steps = static_cast<int>(positive_int(r["max_steps"], "reduction.max_steps"));
    if (r.contains("slice")) {
      const json& s = r["slice"];
      if (!s.is_array()) throw ParseError("reduction.slice", "expected a list of forms");
      for (std::size_t i = 0; i < s.size(); ++i)
        doc.reduction.slice.push_back(rational_matrix(s[i], n, index("reduction.slice", i)));
    }
  }
  return doc;
}

ProblemDocument load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

}  // namespace conecrafter
