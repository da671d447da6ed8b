#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "permbound/matrix.hpp"

namespace permbound {

/// Input diagnostics in the "source:line:column: message" form.
class ParseError : public InputError {
 public:
  ParseError(std::string_view source, int line, int column, const std::string& message)
      : InputError(std::string(source) + ":" + std::to_string(line) + ":" +
                   std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Matrix files come in two flavours:
//   CSV  - one row per line, comma separated, decimal or "p/q" literals;
//   JSON - {"n": 3, "entries": [[...], ...]} with numbers or "p/q" strings.
// Both reject ragged, non-square, and negative input. For JSON the reported
// line is the 1-based row of `entries` and the column its 1-based position.

template <Scalar T>
NonNegMatrix<T> parse_matrix_csv(std::string_view text, std::string_view source = "<csv>");

template <Scalar T>
NonNegMatrix<T> parse_matrix_json(std::string_view text, std::string_view source = "<json>");

/// Dispatches on content: a leading '{' selects JSON, anything else CSV.
template <Scalar T>
NonNegMatrix<T> parse_matrix(std::string_view text, std::string_view source);

template <Scalar T>
NonNegMatrix<T> read_matrix_file(const std::filesystem::path& path);

/// Stochastic-vector files: a CSV line (or one value per line), a JSON array,
/// or {"p": [...]}.
template <Scalar T>
std::vector<T> parse_vector(std::string_view text, std::string_view source);

template <Scalar T>
std::vector<T> read_vector_file(const std::filesystem::path& path);

/// {"n": n, "entries": [[...]]}. Float entries use shortest round-trip
/// formatting; rational entries are integers or "p/q" strings, so the output
/// re-parses to an identical matrix.
template <Scalar T>
nlohmann::json matrix_to_json(const Matrix<T>& m);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace permbound
