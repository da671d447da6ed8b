#pragma once

#include <map>

#include "permbound/rational.hpp"

namespace permbound {

/// A real number of the form sum_k c_k log(b_k) with rational coefficients
/// c_k and positive rational bases b_k, kept symbolically so that its sign can
/// be decided exactly: with D the common denominator of the c_k, the sign of
/// the sum equals the sign of log(prod_k b_k^(D c_k)), i.e. a comparison of two
/// big integers.
class LogLinearForm {
 public:
  /// Adds coef * log(base). A zero coefficient is dropped (so 0 log 0 = 0);
  /// a nonpositive base with a nonzero coefficient throws InputError.
  void add(const BigRational& coef, const BigRational& base);

  LogLinearForm& operator+=(const LogLinearForm& other);
  LogLinearForm& operator-=(const LogLinearForm& other);
  LogLinearForm& operator*=(const BigRational& factor);

  friend LogLinearForm operator+(LogLinearForm a, const LogLinearForm& b) { return a += b; }
  friend LogLinearForm operator-(LogLinearForm a, const LogLinearForm& b) { return a -= b; }
  friend LogLinearForm operator*(LogLinearForm a, const BigRational& f) { return a *= f; }

  /// Floating-point evaluation.
  double value() const;

  /// Exact sign: -1, 0 or +1. Throws InputError if the integer powers
  /// involved would exceed an internal size cap (~2^30 bits).
  int sign() const;

  std::size_t term_count() const { return terms_.size(); }

 private:
  std::map<BigRational, BigRational> terms_;  // base -> coefficient
};

/// Exact three-way comparison of two forms.
inline int compare(const LogLinearForm& a, const LogLinearForm& b) { return (a - b).sign(); }

}  // namespace permbound
