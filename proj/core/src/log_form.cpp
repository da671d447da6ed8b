#include "permbound/log_form.hpp"

#include <cmath>

#include "permbound/error.hpp"

namespace permbound {
namespace {

constexpr double kMaxBits = 1073741824.0;  // 2^30

}  // namespace

void LogLinearForm::add(const BigRational& coef, const BigRational& base) {
  if (coef == 0) return;
  if (base <= 0) throw InputError("log of a nonpositive rational " + to_string(base));
  if (base == 1) return;
  auto [it, inserted] = terms_.try_emplace(base, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0) terms_.erase(it);
  }
}

LogLinearForm& LogLinearForm::operator+=(const LogLinearForm& other) {
  for (const auto& [base, coef] : other.terms_) add(coef, base);
  return *this;
}

LogLinearForm& LogLinearForm::operator-=(const LogLinearForm& other) {
  for (const auto& [base, coef] : other.terms_) add(BigRational(-coef), base);
  return *this;
}

LogLinearForm& LogLinearForm::operator*=(const BigRational& factor) {
  if (factor == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [base, coef] : terms_) coef *= factor;
  return *this;
}

double LogLinearForm::value() const {
  double total = 0.0;
  for (const auto& [base, coef] : terms_) total += coef.get_d() * log_of(base);
  return total;
}

int LogLinearForm::sign() const {
  if (terms_.empty()) return 0;
  BigInteger common = 1;
  for (const auto& [base, coef] : terms_) {
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), coef.get_den_mpz_t());
  }
  double bits = 0.0;
  for (const auto& [base, coef] : terms_) {
    BigInteger k = coef.get_num() * (common / coef.get_den());
    double size = std::abs(k.get_d()) *
                  static_cast<double>(mpz_sizeinbase(base.get_num_mpz_t(), 2) +
                                      mpz_sizeinbase(base.get_den_mpz_t(), 2));
    bits += size;
  }
  if (bits > kMaxBits) throw InputError("exact log comparison too large to evaluate");

  // sum k log(num/den) > 0  <=>  prod num^k (k > 0) * den^-k (k < 0) > the mirror product.
  BigInteger left = 1;
  BigInteger right = 1;
  BigInteger power;
  for (const auto& [base, coef] : terms_) {
    BigInteger k = coef.get_num() * (common / coef.get_den());
    unsigned long e = mpz_get_ui(BigInteger(abs(k)).get_mpz_t());
    const bool positive = k > 0;
    mpz_pow_ui(power.get_mpz_t(), base.get_num_mpz_t(), e);
    (positive ? left : right) *= power;
    mpz_pow_ui(power.get_mpz_t(), base.get_den_mpz_t(), e);
    (positive ? right : left) *= power;
  }
  int c = cmp(left, right);
  return (c > 0) - (c < 0);
}

}  // namespace permbound
