#include "permbound/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "permbound/error.hpp"

namespace permbound {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_literal(std::string_view text) {
  throw InputError("malformed numeric literal '" + std::string(text) + "'");
}

// Exact value of a decimal literal: [sign] digits [. digits] [(e|E) [sign] digits].
BigRational parse_decimal(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) bad_literal(text);
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  std::size_t pos = 0;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) bad_literal(text);
  long exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') bad_literal(text);
    std::string_view exp_text = s.substr(pos + 1);
    if (exp_text.empty()) bad_literal(text);
    std::size_t k = 0;
    bool exp_negative = false;
    if (exp_text[0] == '+' || exp_text[0] == '-') {
      exp_negative = exp_text[0] == '-';
      k = 1;
    }
    if (k == exp_text.size()) bad_literal(text);
    for (; k < exp_text.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(exp_text[k]))) bad_literal(text);
      exponent = exponent * 10 + (exp_text[k] - '0');
      if (exponent > 100000) bad_literal(text);
    }
    if (exp_negative) exponent = -exponent;
  }
  BigInteger mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  long scale = exponent - frac_digits;
  BigInteger power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  BigRational value = scale >= 0 ? BigRational(mantissa * power) : BigRational(mantissa, power);
  value.canonicalize();
  return value;
}

}  // namespace

BigRational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s);
  BigRational num = parse_decimal(s.substr(0, slash));
  BigRational den = parse_decimal(s.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
  BigRational value = num / den;
  value.canonicalize();
  return value;
}

double parse_double(std::string_view text) {
  std::string_view s = trim(text);
  if (s.find('/') != std::string_view::npos) return parse_rational(s).get_d();
  std::string owned(s);
  char* end = nullptr;
  double value = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size()) bad_literal(text);
  // strtod accepts "inf"/"nan"; matrix entries must be finite.
  if (!std::isfinite(value)) bad_literal(text);
  return value;
}

std::string to_string(const BigRational& value) { return value.get_str(); }

double log_of(const BigRational& value) {
  if (value <= 0) {
    return value == 0 ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::quiet_NaN();
  }
  long num_exp = 0;
  long den_exp = 0;
  double num_mant = mpz_get_d_2exp(&num_exp, value.get_num_mpz_t());
  double den_mant = mpz_get_d_2exp(&den_exp, value.get_den_mpz_t());
  return std::log(num_mant / den_mant) + static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

}  // namespace permbound
