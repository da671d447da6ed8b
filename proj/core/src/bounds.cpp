#include "permbound/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "permbound/matching.hpp"
#include "permbound/permanent.hpp"

namespace permbound {
namespace {

void fill_checks(BoundReport& r) {
  const double half_n_log2 = 0.5 * r.n * std::log(2.0);
  const double rounding = 1e-12 * std::max(1.0, std::abs(r.log_per));
  r.checks["bethe_le_per"] = r.log_bethe <= r.log_per + rounding;
  r.checks["per_le_sqrt2n_beta_marginals"] =
      r.log_per <= half_n_log2 + r.log_beta_marginals + kBoundSlack;
  r.checks["per_le_sqrt2n_bethe"] = r.log_per <= half_n_log2 + r.log_bethe + kBoundSlack;
  r.checks["per_le_bp_half"] = r.log_per <= r.log_bp_half + kBoundSlack;
  r.checks["bp_half_le_sqrte_n_bethe"] = r.log_bp_half <= 0.5 * r.n + r.log_bethe + kBoundSlack;
  r.ratio_per_bethe = std::exp(r.log_per - r.log_bethe);
  r.ratio_per_bp_half = std::exp(r.log_per - r.log_bp_half);
}

void fill_optimized(BoundReport& r, const NonNegMatrix<double>& a, const OptimizeOptions& opts) {
  BetheResult b = optimize(a, -1.0, opts);
  BetheResult h = optimize(a, -0.5, opts);
  r.log_bethe = b.log_value;
  r.log_bp_half = h.log_value;
  r.bethe_converged = b.converged;
  r.bp_half_converged = h.converged;
}

}  // namespace

bool BoundReport::all_pass() const {
  for (const auto& [name, ok] : checks)
    if (!ok) return false;
  return true;
}

BoundReport bound_report(const NonNegMatrix<double>& a, const OptimizeOptions& opts) {
  if (!has_perfect_matching(a)) throw ZeroPermanentError();
  BoundReport r;
  r.n = a.n();
  r.log_per = log_permanent(a);
  r.log_beta_marginals = beta_objective(a, marginals(a));
  fill_optimized(r, a, opts);
  fill_checks(r);
  return r;
}

BoundReport bound_report(const NonNegMatrix<BigRational>& a, const OptimizeOptions& opts) {
  if (!has_perfect_matching(a)) throw ZeroPermanentError();
  BoundReport r;
  r.n = a.n();
  r.log_per = log_permanent(a);
  r.log_beta_marginals = beta_objective(a, marginals(a));
  fill_optimized(r, NonNegMatrix<double>(to_double(a.matrix())), opts);
  fill_checks(r);
  return r;
}

double round_sig15(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return std::strtod(buf, nullptr);
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json checks = nlohmann::json::object();
  for (const auto& [name, ok] : r.checks) checks[name] = ok;
  return nlohmann::json{
      {"n", r.n},
      {"log_per", round_sig15(r.log_per)},
      {"log_bethe", round_sig15(r.log_bethe)},
      {"log_bp_half", round_sig15(r.log_bp_half)},
      {"log_beta_marginals", round_sig15(r.log_beta_marginals)},
      {"ratio_per_bethe", round_sig15(r.ratio_per_bethe)},
      {"ratio_per_bp_half", round_sig15(r.ratio_per_bp_half)},
      {"bethe_converged", r.bethe_converged},
      {"bp_half_converged", r.bp_half_converged},
      {"checks", checks},
  };
}

}  // namespace permbound
