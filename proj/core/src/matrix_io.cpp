#include "permbound/matrix_io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace permbound {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <Scalar T>
T parse_literal(std::string_view text) {
  if constexpr (is_exact_v<T>) {
    return parse_rational(text);
  } else {
    return parse_double(text);
  }
}

// Shortest decimal that round-trips the double; lets rational mode recover the
// literal the author typed ("0.1" -> 1/10) from nlohmann's parsed double.
std::string shortest_decimal(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

template <Scalar T>
T json_scalar(const nlohmann::json& v, std::string_view source, int line, int column) {
  try {
    if (v.is_string()) return parse_literal<T>(v.get<std::string>());
    if (v.is_number_integer()) {
      if constexpr (is_exact_v<T>) {
        return BigRational(v.dump());
      } else {
        return v.get<double>();
      }
    }
    if (v.is_number_float()) {
      if constexpr (is_exact_v<T>) {
        return parse_rational(shortest_decimal(v.get<double>()));
      } else {
        return v.get<double>();
      }
    }
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ParseError(source, line, column, e.what());
  }
  throw ParseError(source, line, column, "expected a number or \"p/q\" string, got " + v.dump());
}

template <Scalar T>
void check_nonneg(const std::vector<std::vector<T>>& rows, std::string_view source) {
  std::size_t width = rows.empty() ? 0 : rows.front().size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width) {
      throw ParseError(source, static_cast<int>(i + 1), 1,
                       "row has " + std::to_string(rows[i].size()) + " entries, expected " +
                           std::to_string(width));
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      if (rows[i][j] < 0) {
        throw ParseError(source, static_cast<int>(i + 1), static_cast<int>(j + 1),
                         "negative entry");
      }
    }
  }
  if (rows.empty()) throw ParseError(source, 1, 1, "no matrix rows");
  if (rows.size() != width) {
    throw ParseError(source, static_cast<int>(rows.size()), 1,
                     "matrix is not square: " + std::to_string(rows.size()) + " rows, " +
                         std::to_string(width) + " columns");
  }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

template <Scalar T>
NonNegMatrix<T> parse_matrix_csv(std::string_view text, std::string_view source) {
  std::vector<std::vector<T>> rows;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    std::vector<T> row;
    int column = 0;
    std::size_t field_start = 0;
    while (true) {
      std::size_t comma = line.find(',', field_start);
      std::string_view field =
          line.substr(field_start, comma == std::string_view::npos ? std::string_view::npos
                                                                     : comma - field_start);
      ++column;
      try {
        row.push_back(parse_literal<T>(field));
      } catch (const InputError& e) {
        throw ParseError(source, line_no, column, e.what());
      }
      if (row.back() < 0) throw ParseError(source, line_no, column, "negative entry");
      if (comma == std::string_view::npos) break;
      field_start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(source, line_no, 1,
                       "row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
    if (end == text.size()) break;
  }
  if (rows.empty()) throw ParseError(source, 1, 1, "no matrix rows");
  if (rows.size() != rows.front().size()) {
    throw ParseError(source, line_no, 1,
                     "matrix is not square: " + std::to_string(rows.size()) + " rows, " +
                         std::to_string(rows.front().size()) + " columns");
  }
  return NonNegMatrix<T>::from_rows(rows);
}

template <Scalar T>
NonNegMatrix<T> parse_matrix_json(std::string_view text, std::string_view source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, 1, static_cast<int>(e.byte), e.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw ParseError(source, 1, 1, "expected an object with an \"entries\" array");
  }
  const auto& entries = doc["entries"];
  std::vector<std::vector<T>> rows;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].is_array()) {
      throw ParseError(source, static_cast<int>(i + 1), 1, "row is not an array");
    }
    std::vector<T> row;
    for (std::size_t j = 0; j < entries[i].size(); ++j) {
      row.push_back(json_scalar<T>(entries[i][j], source, static_cast<int>(i + 1),
                                   static_cast<int>(j + 1)));
    }
    rows.push_back(std::move(row));
  }
  check_nonneg(rows, source);
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer() || doc["n"].get<long>() != static_cast<long>(rows.size())) {
      throw ParseError(source, 1, 1,
                       "\"n\" is " + doc["n"].dump() + " but entries has " +
                           std::to_string(rows.size()) + " rows");
    }
  }
  return NonNegMatrix<T>::from_rows(rows);
}

template <Scalar T>
NonNegMatrix<T> parse_matrix(std::string_view text, std::string_view source) {
  std::string_view t = trim(text);
  if (!t.empty() && t.front() == '{') return parse_matrix_json<T>(text, source);
  return parse_matrix_csv<T>(text, source);
}

template <Scalar T>
NonNegMatrix<T> read_matrix_file(const std::filesystem::path& path) {
  return parse_matrix<T>(read_text_file(path), path.string());
}

template <Scalar T>
std::vector<T> parse_vector(std::string_view text, std::string_view source) {
  std::string_view t = trim(text);
  std::vector<T> out;
  if (!t.empty() && (t.front() == '[' || t.front() == '{')) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(t);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, 1, static_cast<int>(e.byte), e.what());
    }
    const nlohmann::json& arr = doc.is_object() && doc.contains("p") ? doc["p"] : doc;
    if (!arr.is_array()) throw ParseError(source, 1, 1, "expected an array of numbers");
    for (std::size_t k = 0; k < arr.size(); ++k)
      out.push_back(json_scalar<T>(arr[k], source, 1, static_cast<int>(k + 1)));
    return out;
  }
  int line_no = 0;
  std::istringstream in{std::string(t)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    std::istringstream fields(line);
    std::string field;
    int column = 0;
    while (std::getline(fields, field, ',')) {
      ++column;
      try {
        out.push_back(parse_literal<T>(field));
      } catch (const InputError& e) {
        throw ParseError(source, line_no, column, e.what());
      }
    }
  }
  if (out.empty()) throw ParseError(source, 1, 1, "no vector entries");
  return out;
}

template <Scalar T>
std::vector<T> read_vector_file(const std::filesystem::path& path) {
  return parse_vector<T>(read_text_file(path), path.string());
}

template <Scalar T>
nlohmann::json matrix_to_json(const Matrix<T>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) {
      if constexpr (is_exact_v<T>) {
        const BigRational& v = m(i, j);
        if (v.get_den() == 1 && v.get_num().fits_slong_p()) {
          row.push_back(v.get_num().get_si());
        } else {
          row.push_back(to_string(v));
        }
      } else {
        row.push_back(m(i, j));
      }
    }
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"n", m.rows()}, {"entries", std::move(rows)}};
}

#define PERMBOUND_INSTANTIATE_IO(T)                                                   \
  template NonNegMatrix<T> parse_matrix_csv<T>(std::string_view, std::string_view);  \
  template NonNegMatrix<T> parse_matrix_json<T>(std::string_view, std::string_view); \
  template NonNegMatrix<T> parse_matrix<T>(std::string_view, std::string_view);      \
  template NonNegMatrix<T> read_matrix_file<T>(const std::filesystem::path&);        \
  template std::vector<T> parse_vector<T>(std::string_view, std::string_view);       \
  template std::vector<T> read_vector_file<T>(const std::filesystem::path&);         \
  template nlohmann::json matrix_to_json<T>(const Matrix<T>&);

PERMBOUND_INSTANTIATE_IO(double)
PERMBOUND_INSTANTIATE_IO(BigRational)

#undef PERMBOUND_INSTANTIATE_IO

}  // namespace permbound
