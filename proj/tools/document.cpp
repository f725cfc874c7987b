#include "document.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace hyperdet::cli {

using nlohmann::json;

Layout parse_layout(std::string_view name) {
  if (name == "first-axis-fastest") return Layout::first_axis_fastest;
  if (name == "last-axis-fastest") return Layout::last_axis_fastest;
  throw ParseError("unknown layout '" + std::string(name) +
                   "' (expected first-axis-fastest or last-axis-fastest)");
}

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Line of the first occurrence of "key" in the text, for field diagnostics.
std::string where(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return "field '" + std::string(key) + "'";
  return "line " + std::to_string(line_column(text, pos).first) + ", field '" + std::string(key) +
         "'";
}

[[noreturn]] void fail(std::string_view text, std::string_view key, const std::string& message) {
  throw ParseError("tensor document: " + where(text, key) + ": " + message);
}

Rational exact_number(const json& v) {
  if (v.is_number_unsigned()) {
    return Rational(mpz_class(std::to_string(v.get<std::uint64_t>())));
  }
  if (v.is_number_integer()) return Rational(mpz_class(std::to_string(v.get<std::int64_t>())));
  return Rational(v.get<double>());
}

// psi offset of the k-th entry of a last-axis-fastest listing.
std::size_t row_major_to_psi(std::size_t k, const Shape& shape) {
  std::size_t offset = 0;
  std::size_t stride = shape.size();
  for (std::size_t axis = 0; axis < shape.order(); ++axis) {
    stride /= shape.extent(axis);
    const std::size_t i = k / stride;
    k %= stride;
    std::size_t psi_stride = 1;
    for (std::size_t j = 0; j < axis; ++j) psi_stride *= shape.extent(j);
    offset += i * psi_stride;
  }
  return offset;
}

}  // namespace

TensorDocument parse_document(std::string_view text, Layout layout) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("tensor document: line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": malformed JSON");
  }
  if (!doc.is_object()) throw ParseError("tensor document: line 1: expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "shape" && key != "data" && key != "symmetric") fail(text, key, "unknown field");
  }
  if (!doc.contains("shape")) throw ParseError("tensor document: missing field 'shape'");
  if (!doc.contains("data")) throw ParseError("tensor document: missing field 'data'");

  const json& js = doc["shape"];
  if (!js.is_array() || js.empty()) fail(text, "shape", "must be a non-empty list of extents");
  std::vector<std::size_t> extents;
  for (std::size_t k = 0; k < js.size(); ++k) {
    if (!js[k].is_number_unsigned() || js[k].get<std::uint64_t>() == 0) {
      fail(text, "shape", "shape[" + std::to_string(k) + "] must be a positive integer");
    }
    extents.push_back(js[k].get<std::size_t>());
  }
  TensorDocument out;
  try {
    out.shape = Shape(std::move(extents));
  } catch (const Error& e) {
    fail(text, "shape", e.what());
  }

  const json& jd = doc["data"];
  if (!jd.is_array()) fail(text, "data", "must be a list");
  if (jd.size() != out.shape.size()) {
    fail(text, "data",
         "has " + std::to_string(jd.size()) + " entries, shape " + out.shape.str() + " needs " +
             std::to_string(out.shape.size()));
  }
  if (jd[0].is_string()) {
    out.kind = EntryKind::rational;
  } else if (jd[0].is_array()) {
    out.kind = EntryKind::complex;
  } else {
    out.kind = EntryKind::number;
  }
  const std::size_t n = jd.size();
  if (out.kind == EntryKind::complex) {
    out.complexes.resize(n);
  } else {
    out.reals.resize(n);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const json& v = jd[k];
    const std::size_t dest = layout == Layout::first_axis_fastest ? k : row_major_to_psi(k, out.shape);
    const std::string field = "data[" + std::to_string(k) + "]";
    switch (out.kind) {
      case EntryKind::number:
        if (!v.is_number()) fail(text, "data", field + " is not a number; entries must share one kind");
        if (!std::isfinite(v.get<double>())) fail(text, "data", field + " is not finite");
        out.reals[dest] = exact_number(v);
        break;
      case EntryKind::rational:
        if (!v.is_string()) {
          fail(text, "data", field + " is not a \"p/q\" string; entries must share one kind");
        }
        try {
          out.reals[dest] = parse_rational(v.get<std::string>());
        } catch (const ParseError& e) {
          fail(text, "data", field + ": " + e.what());
        }
        break;
      case EntryKind::complex:
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
          fail(text, "data", field + " is not a [real, imaginary] pair; entries must share one kind");
        }
        out.complexes[dest] = {v[0].get<double>(), v[1].get<double>()};
        break;
    }
  }

  if (doc.contains("symmetric")) {
    if (!doc["symmetric"].is_boolean()) fail(text, "symmetric", "must be true or false");
    out.symmetric = doc["symmetric"].get<bool>();
  }
  return out;
}

TensorDocument read_document(const std::filesystem::path& path, Layout layout) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open tensor document " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), layout);
}

std::string serialize_document(const TensorDocument& doc) {
  json out;
  out["shape"] = doc.shape.extents();
  json data = json::array();
  switch (doc.kind) {
    case EntryKind::number:
      for (const auto& r : doc.reals) {
        if (r.get_den() == 1 && r.get_num().fits_slong_p()) {
          data.push_back(r.get_num().get_si());
        } else {
          data.push_back(r.get_d());
        }
      }
      break;
    case EntryKind::rational:
      for (const auto& r : doc.reals) data.push_back(format_scalar(r));
      break;
    case EntryKind::complex:
      for (const auto& c : doc.complexes) data.push_back({c.real(), c.imag()});
      break;
  }
  out["data"] = std::move(data);
  if (doc.symmetric) out["symmetric"] = *doc.symmetric;
  return out.dump();
}

template <>
Hypermatrix<Rational> to_hypermatrix(const TensorDocument& doc) {
  if (doc.kind == EntryKind::complex) {
    throw ParseError("tensor document: field 'data' holds complex entries; use a complex backend");
  }
  return Hypermatrix<Rational>(doc.shape, doc.reals);
}

template <>
Hypermatrix<double> to_hypermatrix(const TensorDocument& doc) {
  if (doc.kind == EntryKind::complex) {
    throw ParseError("tensor document: field 'data' holds complex entries; use a complex backend");
  }
  std::vector<double> v;
  v.reserve(doc.reals.size());
  for (const auto& r : doc.reals) v.push_back(r.get_d());
  return Hypermatrix<double>(doc.shape, std::move(v));
}

template <>
Hypermatrix<Complex> to_hypermatrix(const TensorDocument& doc) {
  if (doc.kind == EntryKind::complex) return Hypermatrix<Complex>(doc.shape, doc.complexes);
  std::vector<Complex> v;
  v.reserve(doc.reals.size());
  for (const auto& r : doc.reals) v.emplace_back(r.get_d(), 0.0);
  return Hypermatrix<Complex>(doc.shape, std::move(v));
}

TensorDocument to_document(const Hypermatrix<Rational>& a) {
  TensorDocument doc;
  doc.shape = a.shape();
  doc.kind = EntryKind::rational;
  doc.reals = a.values();
  return doc;
}

TensorDocument to_document(const Hypermatrix<double>& a) {
  TensorDocument doc;
  doc.shape = a.shape();
  doc.kind = EntryKind::number;
  for (double v : a.values()) doc.reals.emplace_back(v);
  return doc;
}

TensorDocument to_document(const Hypermatrix<Complex>& a) {
  TensorDocument doc;
  doc.shape = a.shape();
  doc.kind = EntryKind::complex;
  doc.complexes = a.values();
  return doc;
}

}  // namespace hyperdet::cli
