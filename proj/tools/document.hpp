#pragma once

// TensorDocument: the JSON text format read by the CLI.
//
//   {"shape": [2, 2], "data": [1, 3, 2, 4], "symmetric": false}
//
// `data` is flat in psi order: the FIRST axis varies fastest. [[1,2],[3,4]]
// is therefore written [1, 3, 2, 4]. Inputs produced in row-major (last axis
// fastest) order can be loaded with Layout::last_axis_fastest, which
// re-permutes them on load.
//
// Entries are all of one kind: JSON numbers, "p/q" rational strings, or
// [real, imaginary] pairs.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperdet/core.hpp"

namespace hyperdet::cli {

enum class Layout { first_axis_fastest, last_axis_fastest };
Layout parse_layout(std::string_view name);

enum class EntryKind { number, rational, complex };

struct TensorDocument {
  Shape shape;
  EntryKind kind = EntryKind::number;
  // number and rational kinds; JSON numbers are held as their exact binary value
  std::vector<Rational> reals;
  std::vector<Complex> complexes;  // complex kind
  std::optional<bool> symmetric;

  bool operator==(const TensorDocument&) const = default;
};

// ParseError with line/column for malformed JSON, or the offending field path.
TensorDocument parse_document(std::string_view text, Layout layout = Layout::first_axis_fastest);
TensorDocument read_document(const std::filesystem::path& path,
                             Layout layout = Layout::first_axis_fastest);

// Always emits psi order.
std::string serialize_document(const TensorDocument& doc);

// Conversions to a backend. Complex entries into a real backend are a ParseError.
template <Scalar T>
Hypermatrix<T> to_hypermatrix(const TensorDocument& doc);

TensorDocument to_document(const Hypermatrix<Rational>& a);
TensorDocument to_document(const Hypermatrix<double>& a);
TensorDocument to_document(const Hypermatrix<Complex>& a);

}  // namespace hyperdet::cli
