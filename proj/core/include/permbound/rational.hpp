#pragma once

#include <cmath>
#include <concepts>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace permbound {

/// Exact rational scalar. mpq_class keeps values canonical (gcd = 1, den > 0)
/// as long as constructions from separate num/den go through make_ratio.
using BigRational = mpq_class;
using BigInteger = mpz_class;

/// The two numeric modes every dual-mode operation is instantiated for.
template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, BigRational>;

template <Scalar T>
inline constexpr bool is_exact_v = std::same_as<T, BigRational>;

/// Parses "p/q", an integer, or a decimal literal such as "-1.25e-3" exactly.
/// Throws InputError on malformed text.
BigRational parse_rational(std::string_view text);

/// Parses a decimal literal or "p/q" to the nearest double.
double parse_double(std::string_view text);

std::string to_string(const BigRational& value);

inline double to_double(double value) { return value; }
inline double to_double(const BigRational& value) { return value.get_d(); }

/// Natural log of a positive rational; safe for numerators and denominators
/// far outside double range.
double log_of(const BigRational& value);
inline double log_of(double value) { return std::log(value); }

template <Scalar T>
T from_int(long value) {
  if constexpr (is_exact_v<T>) {
    return BigRational(value);
  } else {
    return static_cast<double>(value);
  }
}

template <Scalar T>
T make_ratio(long num, long den) {
  if constexpr (is_exact_v<T>) {
    BigRational r(num, den);
    r.canonicalize();
    return r;
  } else {
    return static_cast<double>(num) / static_cast<double>(den);
  }
}

}  // namespace permbound
