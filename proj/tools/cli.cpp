#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "permbound/bethe.hpp"
#include "permbound/bounds.hpp"
#include "permbound/certificate.hpp"
#include "permbound/matrix_io.hpp"
#include "permbound/permanent.hpp"
#include "permbound/phi.hpp"
#include "permbound/sampling.hpp"

namespace permbound::cli {
namespace {

using json = nlohmann::json;

struct Options {
  std::string verb;
  std::string input;
  std::string mode = "float";
  std::string format;  // empty: verb default
  double tol = 1e-8;
  int max_iter = 100000;
  double gamma = -1.0;
  std::string order = "identity";
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  bool oracle = false;
  long smoke = 0;
  long count = 1;
  long n_grid = 2000;
  bool given_p = false;
};

std::string fmt15(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

// JSON has no infinities; they become null.
json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_sig15(x);
}

bool rational_mode(const Options& o) { return o.mode == "rational"; }

bool scalar_format(const Options& o, bool scalar_by_default) {
  if (o.format.empty()) return scalar_by_default;
  return o.format == "scalar";
}

int worker_count(const Options& o) {
  if (o.threads > 0) return o.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

OptimizeOptions optimize_options(const Options& o) { return {o.tol, o.max_iter}; }

NonNegMatrix<double> read_float_matrix(const Options& o) {
  if (rational_mode(o)) return NonNegMatrix<double>(to_double(read_matrix_file<BigRational>(o.input).matrix()));
  return read_matrix_file<double>(o.input);
}

template <Scalar T>
int do_per(const Options& o, std::ostream& out) {
  NonNegMatrix<T> a = read_matrix_file<T>(o.input);
  T value = o.oracle ? per_bruteforce(a) : per_ryser(a);
  const double log_value = log_permanent(a);
  std::string text;
  if constexpr (is_exact_v<T>) {
    text = to_string(value);
  } else {
    text = fmt15(value);
  }
  if (scalar_format(o, true)) {
    out << text << '\n';
  } else {
    json j{{"n", a.n()},
           {"algorithm", o.oracle ? "bruteforce" : "ryser"},
           {"per", is_exact_v<T> ? json(text) : num(to_double(value))},
           {"log_per", num(log_value)}};
    out << j.dump(2) << '\n';
  }
  return kOk;
}

int do_optimize(const Options& o, double gamma, std::ostream& out) {
  NonNegMatrix<double> a = read_float_matrix(o);
  BetheResult r = optimize(a, gamma, optimize_options(o));
  if (scalar_format(o, false)) {
    out << fmt15(r.log_value) << '\n';
  } else {
    json j{{"n", a.n()},
           {"gamma", r.gamma},
           {"log_value", num(r.log_value)},
           {"value", num(std::exp(r.log_value))},
           {"iterations", r.iterations},
           {"converged", r.converged},
           {"gradient_residual", num(r.gradient_residual)},
           {"optimizer", r.optimizer ? matrix_to_json(r.optimizer->matrix()) : json(nullptr)}};
    out << j.dump(2) << '\n';
  }
  return r.converged ? kOk : kCheckFailed;
}

template <Scalar T>
int do_marginals(const Options& o, std::ostream& out) {
  NonNegMatrix<T> a = read_matrix_file<T>(o.input);
  out << matrix_to_json(marginals(a).matrix()).dump(2) << '\n';
  return kOk;
}

template <Scalar T>
int do_bounds(const Options& o, std::ostream& out) {
  BoundReport report = bound_report(read_matrix_file<T>(o.input), optimize_options(o));
  out << to_json(report).dump(2) << '\n';
  return report.all_pass() ? kOk : kCheckFailed;
}

// The proposal: the input itself under --doubly-stochastic, else marginals(A).
template <Scalar T>
DoublyStochMatrix<T> proposal(const Options& o, const NonNegMatrix<T>& a) {
  if (o.given_p) return validate_doubly_stochastic(a.matrix());
  return marginals(a);
}

template <Scalar T>
int do_sample(const Options& o, std::ostream& out) {
  if (o.count < 0) throw InputError("--count must be nonnegative");
  NonNegMatrix<T> a = read_matrix_file<T>(o.input);
  std::mt19937_64 rng(o.seed);
  Permutation order = make_order(o.order, a.n(), rng);
  NuDistribution<T> d(proposal(o, a), order);
  for (const Permutation& s : nu_sample_many(d, o.count, rng)) {
    const std::vector<int> images = s.one_based();
    for (std::size_t k = 0; k < images.size(); ++k) out << (k ? " " : "") << images[k];
    out << '\n';
  }
  return kOk;
}

template <Scalar T>
int do_kl(const Options& o, std::ostream& out) {
  NonNegMatrix<T> a = read_matrix_file<T>(o.input);
  std::mt19937_64 rng(o.seed);
  Permutation order = make_order(o.order, a.n(), rng);
  NuDistribution<T> d(proposal(o, a), order);
  const double kl = kl_mu_nu(a, d);
  if (scalar_format(o, true)) {
    out << fmt15(kl) << '\n';
  } else {
    out << json{{"n", a.n()}, {"order", order.one_based()}, {"kl", num(kl)}}.dump(2) << '\n';
  }
  return kOk;
}

int do_certify(const Options& o, std::ostream& out) {
  CertificateRun run = o.smoke > 0 ? certify_smoke(o.n_grid, o.smoke, o.seed, worker_count(o))
                                   : certify(o.n_grid, worker_count(o));
  out << to_json(run).dump(2) << '\n';
  return run.passed() ? kOk : kCheckFailed;
}

template <Scalar T>
int do_phi(const Options& o, std::ostream& out) {
  StochasticVector<T> p(read_vector_file<T>(o.input));
  const double value = phi(p);
  if (scalar_format(o, true)) {
    out << fmt15(value) << '\n';
  } else {
    out << json{{"n", p.size()}, {"phi", num(value)}, {"log2", num(std::log(2.0))}}.dump(2) << '\n';
  }
  return kOk;
}

int dispatch(const Options& o, std::ostream& out) {
  const bool exact = rational_mode(o);
  const std::string& v = o.verb;
  if (v == "per") return exact ? do_per<BigRational>(o, out) : do_per<double>(o, out);
  if (v == "bethe") return do_optimize(o, -1.0, out);
  if (v == "bp") return do_optimize(o, o.gamma, out);
  if (v == "marginals") return exact ? do_marginals<BigRational>(o, out) : do_marginals<double>(o, out);
  if (v == "bounds") return exact ? do_bounds<BigRational>(o, out) : do_bounds<double>(o, out);
  if (v == "sample") return exact ? do_sample<BigRational>(o, out) : do_sample<double>(o, out);
  if (v == "kl") return exact ? do_kl<BigRational>(o, out) : do_kl<double>(o, out);
  if (v == "certify") return do_certify(o, out);
  if (v == "phi") return exact ? do_phi<BigRational>(o, out) : do_phi<double>(o, out);
  throw InternalError("unhandled verb " + v);
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--mode", o.mode, "Numeric mode")->check(CLI::IsMember({"float", "rational"}));
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "scalar"}));
}

void add_input(CLI::App* cmd, Options& o, const std::string& what) {
  cmd->add_option("input", o.input, what)->required();
}

void add_optimizer(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol", o.tol, "Optimizer residual tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", o.max_iter, "Optimizer iteration cap")->check(CLI::PositiveNumber);
}

void add_proposal(CLI::App* cmd, Options& o) {
  cmd->add_option("--order", o.order, "Row order of the proposal")
      ->check(CLI::IsMember({"identity", "reverse", "random"}));
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_flag("--doubly-stochastic", o.given_p,
                "Treat the input as the proposal matrix P instead of computing marginals");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Permanents, Bethe approximations and the phi certificate", "permbound"};
  app.require_subcommand(1, 1);

  auto* per = app.add_subcommand("per", "Exact permanent (Ryser; brute force with --oracle)");
  add_input(per, o, "Matrix file (CSV or JSON)");
  add_common(per, o);
  per->add_flag("--oracle", o.oracle, "Use brute-force enumeration");

  auto* bethe_cmd = app.add_subcommand("bethe", "Maximize the Bethe objective");
  add_input(bethe_cmd, o, "Matrix file");
  add_common(bethe_cmd, o);
  add_optimizer(bethe_cmd, o);

  auto* bp = app.add_subcommand("bp", "Maximize the fractional BP objective bp_gamma");
  add_input(bp, o, "Matrix file");
  add_common(bp, o);
  add_optimizer(bp, o);
  bp->add_option("--gamma", o.gamma, "gamma in [-1, 1]")->required()->check(CLI::Range(-1.0, 1.0));

  auto* marg = app.add_subcommand("marginals", "Marginal matrix of the Gibbs distribution");
  add_input(marg, o, "Matrix file");
  add_common(marg, o);

  auto* bounds = app.add_subcommand("bounds", "Permanent sandwich report");
  add_input(bounds, o, "Matrix file");
  add_common(bounds, o);
  add_optimizer(bounds, o);

  auto* sample = app.add_subcommand("sample", "Draw permutations from the sequential proposal");
  add_input(sample, o, "Matrix file");
  add_common(sample, o);
  add_proposal(sample, o);
  sample->add_option("--count", o.count, "Number of samples")->check(CLI::NonNegativeNumber);

  auto* kl = app.add_subcommand("kl", "KL divergence from the Gibbs distribution to the proposal");
  add_input(kl, o, "Matrix file");
  add_common(kl, o);
  add_proposal(kl, o);

  auto* cert = app.add_subcommand("certify", "Exact grid certificate that phi <= log 2");
  add_common(cert, o);
  cert->add_option("--n-grid", o.n_grid, "Grid resolution N");
  cert->add_option("--threads", o.threads, "Worker threads (default: all cores)")
      ->check(CLI::NonNegativeNumber);
  cert->add_option("--smoke", o.smoke, "Check this many random cells instead of all")
      ->check(CLI::NonNegativeNumber);
  cert->add_option("--seed", o.seed, "Random seed for --smoke");

  auto* phi_cmd = app.add_subcommand("phi", "The gap function at a point of the simplex");
  add_input(phi_cmd, o, "Vector file (JSON array or CSV)");
  add_common(phi_cmd, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  o.verb = app.get_subcommands().front()->get_name();

  try {
    return dispatch(o, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ZeroPermanentError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DimensionGuardError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const SamplingError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
}

}  // namespace permbound::cli
