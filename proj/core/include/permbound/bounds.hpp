#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "permbound/bethe.hpp"

namespace permbound {

/// Additive slack, in log space, granted to the upper-bound checks of a
/// BoundReport to absorb optimizer and rounding error.
inline constexpr double kBoundSlack = 1e-9;

/// The permanent sandwiched between its Bethe-type approximations.
///
/// Checks (all in log space):
///   bethe_le_per                  log bethe            <= log per
///   per_le_sqrt2n_beta_marginals  log per              <= (n/2) log 2 + beta(A, P*)
///   per_le_sqrt2n_bethe           log per              <= (n/2) log 2 + log bethe
///   per_le_bp_half                log per              <= log bp_{-1/2}
///   bp_half_le_sqrte_n_bethe      log bp_{-1/2}        <= n/2 + log bethe
/// where P* is the marginal matrix of the Gibbs distribution. The first check
/// gets only rounding slack (1e-12 relative); the others get kBoundSlack.
struct BoundReport {
  int n = 0;
  double log_per = 0.0;
  double log_bethe = 0.0;
  double log_bp_half = 0.0;
  double log_beta_marginals = 0.0;
  double ratio_per_bethe = 0.0;    // per / bethe
  double ratio_per_bp_half = 0.0;  // per / bp_{-1/2}
  bool bethe_converged = false;
  bool bp_half_converged = false;
  std::map<std::string, bool> checks;

  bool all_pass() const;
};

/// Float mode: permanent and marginals from Ryser in floating point.
/// Throws ZeroPermanentError when per(A) = 0.
BoundReport bound_report(const NonNegMatrix<double>& a, const OptimizeOptions& opts = {});

/// Rational mode: the permanent and marginal matrix are exact; only the two
/// optimizations run in floating point.
BoundReport bound_report(const NonNegMatrix<BigRational>& a, const OptimizeOptions& opts = {});

/// {"n", "log_per", "log_bethe", "log_bp_half", "log_beta_marginals", ratios,
/// convergence flags, "checks": {name: bool}}; reals carry 15 significant digits.
nlohmann::json to_json(const BoundReport& report);

/// Rounds to 15 significant digits for stable, diffable output.
double round_sig15(double x);

}  // namespace permbound
