#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "permbound/error.hpp"
#include "permbound/rational.hpp"

namespace permbound {

/// Dense row-major matrix. Shape checks only; no algebraic meaning.
template <Scalar T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, T fill = T(0))
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  static Matrix square(int n, T fill = T(0)) { return Matrix(n, n, fill); }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  /// Builds from nested rows; ragged input throws InputError naming the row.
  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows.front().size());
    Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rows[i].size()) != c) {
        throw InputError("row " + std::to_string(i + 1) + " has " +
                         std::to_string(rows[i].size()) + " entries, expected " +
                         std::to_string(c));
      }
      for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  std::span<const T> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
  }
  std::span<T> row(int i) {
    return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
  }
  std::span<const T> data() const { return data_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * cols_ + j; }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

template <Scalar T>
Matrix<double> to_double(const Matrix<T>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

/// Square matrix with nonnegative entries: the argument of the permanent.
template <Scalar T>
class NonNegMatrix {
 public:
  /// Validates squareness and nonnegativity; reports the first offending
  /// entry 1-based.
  explicit NonNegMatrix(Matrix<T> m) : m_(std::move(m)) {
    if (!m_.is_square()) {
      throw InputError("matrix is not square: " + std::to_string(m_.rows()) + "x" +
                       std::to_string(m_.cols()));
    }
    if (m_.rows() == 0) throw InputError("matrix is empty");
    for (int i = 0; i < m_.rows(); ++i) {
      for (int j = 0; j < m_.cols(); ++j) {
        if (!(m_(i, j) >= 0)) {
          throw InputError("negative entry at row " + std::to_string(i + 1) + ", column " +
                           std::to_string(j + 1));
        }
      }
    }
  }

  static NonNegMatrix from_rows(const std::vector<std::vector<T>>& rows) {
    return NonNegMatrix(Matrix<T>::from_rows(rows));
  }
  static NonNegMatrix identity(int n) { return NonNegMatrix(Matrix<T>::identity(n)); }
  static NonNegMatrix ones(int n) { return NonNegMatrix(Matrix<T>::square(n, T(1))); }

  int n() const { return m_.rows(); }
  const T& operator()(int i, int j) const { return m_(i, j); }
  std::span<const T> row(int i) const { return m_.row(i); }
  const Matrix<T>& matrix() const { return m_; }

  friend bool operator==(const NonNegMatrix& a, const NonNegMatrix& b) { return a.m_ == b.m_; }

 private:
  Matrix<T> m_;
};

/// Default row/column-sum tolerance for float-mode doubly stochastic checks.
inline constexpr double kDoublyStochasticTol = 1e-9;

/// First violated constraint of a doubly stochastic candidate. Indices are
/// 1-based, matching the diagnostics users see.
struct StochasticViolation {
  enum class Kind { NotSquare, NegativeEntry, EntryAboveOne, RowSum, ColumnSum };
  Kind kind;
  int row = 0;
  int col = 0;
  double value = 0.0;

  std::string describe() const {
    std::ostringstream os;
    os.precision(15);
    switch (kind) {
      case Kind::NotSquare: os << "matrix is not square"; break;
      case Kind::NegativeEntry: os << "negative entry at row " << row << ", column " << col << ": " << value; break;
      case Kind::EntryAboveOne: os << "entry above 1 at row " << row << ", column " << col << ": " << value; break;
      case Kind::RowSum: os << "row " << row << " sums to " << value; break;
      case Kind::ColumnSum: os << "column " << col << " sums to " << value; break;
    }
    return os.str();
  }
};

class DoublyStochasticError : public InputError {
 public:
  explicit DoublyStochasticError(StochasticViolation v)
      : InputError("not doubly stochastic: " + v.describe()), violation_(v) {}
  const StochasticViolation& violation() const { return violation_; }

 private:
  StochasticViolation violation_;
};

/// Returns the first violated constraint, or nothing. Rational mode ignores
/// `tol` and demands exact sums.
template <Scalar T>
std::optional<StochasticViolation> find_stochastic_violation(const Matrix<T>& m,
                                                             double tol = kDoublyStochasticTol) {
  using Kind = StochasticViolation::Kind;
  if (!m.is_square()) return StochasticViolation{Kind::NotSquare};
  const int n = m.rows();
  auto off = [&](const T& sum) {
    if constexpr (is_exact_v<T>) {
      return sum != 1;
    } else {
      return !(std::abs(sum - 1.0) <= tol);
    }
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m(i, j) < 0) return StochasticViolation{Kind::NegativeEntry, i + 1, j + 1, to_double(m(i, j))};
      if (off(m(i, j)) && m(i, j) > 1) {
        return StochasticViolation{Kind::EntryAboveOne, i + 1, j + 1, to_double(m(i, j))};
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    T sum(0);
    for (int j = 0; j < n; ++j) sum += m(i, j);
    if (off(sum)) return StochasticViolation{Kind::RowSum, i + 1, 0, to_double(sum)};
  }
  for (int j = 0; j < n; ++j) {
    T sum(0);
    for (int i = 0; i < n; ++i) sum += m(i, j);
    if (off(sum)) return StochasticViolation{Kind::ColumnSum, 0, j + 1, to_double(sum)};
  }
  return std::nullopt;
}

template <Scalar T>
class DoublyStochMatrix;

/// Accepts `m` iff rows and columns sum to 1 (within `tol` in float mode,
/// exactly in rational mode) and entries lie in [0, 1]. Throws
/// DoublyStochasticError naming the first violated constraint.
template <Scalar T>
DoublyStochMatrix<T> validate_doubly_stochastic(Matrix<T> m, double tol = kDoublyStochasticTol);

/// A point of the Birkhoff polytope. Only obtainable through validation.
template <Scalar T>
class DoublyStochMatrix {
 public:
  int n() const { return m_.rows(); }
  const T& operator()(int i, int j) const { return m_(i, j); }
  std::span<const T> row(int i) const { return m_.row(i); }
  const Matrix<T>& matrix() const { return m_; }

  friend bool operator==(const DoublyStochMatrix& a, const DoublyStochMatrix& b) {
    return a.m_ == b.m_;
  }

 private:
  explicit DoublyStochMatrix(Matrix<T> m) : m_(std::move(m)) {}

  template <Scalar U>
  friend DoublyStochMatrix<U> validate_doubly_stochastic(Matrix<U> m, double tol);

  Matrix<T> m_;
};

template <Scalar T>
DoublyStochMatrix<T> validate_doubly_stochastic(Matrix<T> m, double tol) {
  if (auto v = find_stochastic_violation(m, tol)) throw DoublyStochasticError(*v);
  return DoublyStochMatrix<T>(std::move(m));
}

/// A point of the standard simplex.
template <Scalar T>
class StochasticVector {
 public:
  explicit StochasticVector(std::vector<T> p, double tol = kDoublyStochasticTol) : p_(std::move(p)) {
    if (p_.empty()) throw InputError("stochastic vector is empty");
    T sum(0);
    for (std::size_t k = 0; k < p_.size(); ++k) {
      if (!(p_[k] >= 0)) {
        throw InputError("negative coordinate at position " + std::to_string(k + 1));
      }
      sum += p_[k];
    }
    bool ok;
    if constexpr (is_exact_v<T>) {
      ok = sum == 1;
    } else {
      ok = std::abs(sum - 1.0) <= tol;
    }
    if (!ok) {
      std::ostringstream os;
      os.precision(15);
      os << "coordinates sum to " << to_double(sum) << ", expected 1";
      throw InputError(os.str());
    }
  }

  int size() const { return static_cast<int>(p_.size()); }
  const T& operator[](int k) const { return p_[static_cast<std::size_t>(k)]; }
  std::span<const T> values() const { return p_; }

 private:
  std::vector<T> p_;
};

/// [[B, 0], [0, C]].
template <Scalar T>
NonNegMatrix<T> block_diag(const NonNegMatrix<T>& b, const NonNegMatrix<T>& c) {
  const int n1 = b.n();
  const int n2 = c.n();
  Matrix<T> m = Matrix<T>::square(n1 + n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) m(i, j) = b(i, j);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j) m(n1 + i, n1 + j) = c(i, j);
  return NonNegMatrix<T>(std::move(m));
}

/// I_m ⊗ A: m copies of A along the diagonal.
template <Scalar T>
NonNegMatrix<T> identity_tensor(int copies, const NonNegMatrix<T>& a) {
  if (copies < 1) throw InputError("identity_tensor: copy count must be >= 1");
  const int n = a.n();
  Matrix<T> m = Matrix<T>::square(copies * n);
  for (int b = 0; b < copies; ++b)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(b * n + i, b * n + j) = a(i, j);
  return NonNegMatrix<T>(std::move(m));
}

/// The 2x2 all-ones block repeated n/2 times; per = 2^(n/2), bethe = 1.
template <Scalar T>
NonNegMatrix<T> tight_example(int n) {
  if (n < 2 || n % 2 != 0) throw InputError("tight_example: n must be a positive even number");
  return identity_tensor(n / 2, NonNegMatrix<T>::ones(2));
}

}  // namespace permbound
