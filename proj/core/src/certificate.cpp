#include "permbound/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "permbound/error.hpp"

namespace permbound {
namespace {

BigInteger pow_ui(unsigned long base, unsigned long exp) {
  BigInteger out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
  return out;
}

BigRational pow_q(const BigRational& base, const BigInteger& exp) {
  if (!exp.fits_ulong_p()) throw InputError("phi3_exp_form: exponent out of range");
  const unsigned long e = exp.get_ui();
  BigInteger num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  BigRational out(num, den);
  out.canonicalize();
  return out;
}

BigInteger integral_or_throw(const BigRational& x, const char* what) {
  if (x.get_den() != 1) throw InputError(std::string("phi3_exp_form: ") + what + " is not integral");
  return x.get_num();
}

void check_grid(long n_grid) {
  // N > 2e guarantees 2 eps < 1/e, so the corner shift is valid.
  if (n_grid < 6) throw InputError("grid resolution N must exceed 2e (N >= 6)");
}

}  // namespace

long grid_bound(long n_grid) { return 44 * n_grid / 100; }

CellVariant algorithm_variant(long i, long j, long n_grid) {
  return (i == 0 && j == 0 && n_grid > 100) ? CellVariant::CornerShift : CellVariant::Plain;
}

CellSides cell_sides(long i, long j, long n_grid, CellVariant variant) {
  check_grid(n_grid);
  const unsigned long n = static_cast<unsigned long>(n_grid);
  const unsigned long ui = static_cast<unsigned long>(i);
  const unsigned long uj = static_cast<unsigned long>(j);
  if (i < 0 || j < 0 || i + 1 >= n_grid || j + 1 >= n_grid) {
    throw InputError("cell index outside the grid");
  }
  CellSides out;
  out.lhs = pow_ui(ui + 1, ui) * pow_ui(uj + 1, uj) * pow_ui(n, 2 * n + ui + uj + 6);
  const unsigned long sum_base = ui + uj + (variant == CellVariant::CornerShift ? 2 : 0);
  out.rhs = pow_ui(n - ui - 1, n - ui + uj + 1) * pow_ui(n - uj - 1, n + ui - uj + 1) *
            pow_ui(sum_base, 2 * (ui + uj + 2));
  mpz_mul_2exp(out.rhs.get_mpz_t(), out.rhs.get_mpz_t(), n);
  return out;
}

bool verify_cell(long i, long j, long n_grid, CellVariant variant) {
  CellSides s = cell_sides(i, j, n_grid, variant);
  return s.lhs <= s.rhs;
}

bool verify_cell(long i, long j, long n_grid) {
  return verify_cell(i, j, n_grid, algorithm_variant(i, j, n_grid));
}

std::pair<BigRational, BigRational> phi3_exp_form(const BigRational& q, const BigRational& s,
                                                  long n_grid) {
  if (q < 0 || s < 0 || q + s > 1) throw InputError("phi3_exp_form: (q, s) must lie on the simplex");
  const BigRational n(n_grid);
  const BigInteger nq = integral_or_throw(n * q, "N q");
  const BigInteger ns = integral_or_throw(n * s, "N s");
  const BigInteger ng(n_grid);
  BigRational lhs = pow_q(q, nq) * pow_q(s, ns);
  BigRational rhs = pow_q(BigRational(2), ng) * pow_q(1 - q, ng - nq + ns) *
                    pow_q(1 - s, ng + nq - ns) * pow_q(q + s, 2 * (nq + ns));
  return {lhs, rhs};
}

GridVerifier::GridVerifier(long n_grid) : n_(n_grid), m_(grid_bound(n_grid)) {
  check_grid(n_grid);
  const unsigned long n = static_cast<unsigned long>(n_);
  const long m = m_;
  self_power_.reserve(m + 1);
  col_base_.reserve(m + 1);
  for (long k = 0; k <= m; ++k) {
    self_power_.push_back(pow_ui(k + 1, k));
    col_base_.push_back(pow_ui(n - k - 1, n - k + 1));
  }
  n_power_.reserve(2 * m + 1);
  sum_power_.reserve(2 * m + 1);
  BigInteger np = pow_ui(n, 2 * n + 6);
  for (long k = 0; k <= 2 * m; ++k) {
    n_power_.push_back(np);
    np *= n;
    sum_power_.push_back(pow_ui(k, 2 * (k + 2)));
  }
  two_n_ = 1;
  mpz_mul_2exp(two_n_.get_mpz_t(), two_n_.get_mpz_t(), n);
}

void GridVerifier::verify_rows(long row_begin, long row_end,
                               std::vector<std::pair<long, long>>& failures) const {
  const unsigned long n = static_cast<unsigned long>(n_);
  // col_shift[j] = (N - j - 1)^i, advanced once per row.
  std::vector<BigInteger> col_shift;
  col_shift.reserve(m_ + 1);
  for (long j = 0; j <= m_; ++j) col_shift.push_back(pow_ui(n - j - 1, row_begin));
  BigInteger lhs, rhs, row_factor;
  for (long i = row_begin; i < row_end; ++i) {
    const unsigned long row_base = n - i - 1;
    // (N - i - 1)^(N - i + j + 1) at j = 0.
    row_factor = pow_ui(row_base, n - i + 1);
    for (long j = 0; j <= m_; ++j) {
      mpz_mul(lhs.get_mpz_t(), self_power_[i].get_mpz_t(), self_power_[j].get_mpz_t());
      mpz_mul(lhs.get_mpz_t(), lhs.get_mpz_t(), n_power_[i + j].get_mpz_t());

      mpz_mul(rhs.get_mpz_t(), col_base_[j].get_mpz_t(), col_shift[j].get_mpz_t());
      mpz_mul(rhs.get_mpz_t(), rhs.get_mpz_t(), row_factor.get_mpz_t());
      if (algorithm_variant(i, j, n_) == CellVariant::CornerShift) {
        rhs *= pow_ui(i + j + 2, 2 * (i + j + 2));
      } else {
        mpz_mul(rhs.get_mpz_t(), rhs.get_mpz_t(), sum_power_[i + j].get_mpz_t());
      }
      mpz_mul(rhs.get_mpz_t(), rhs.get_mpz_t(), two_n_.get_mpz_t());

      if (lhs > rhs) failures.emplace_back(i, j);
      mpz_mul_ui(row_factor.get_mpz_t(), row_factor.get_mpz_t(), row_base);
    }
    for (long j = 0; j <= m_; ++j) mpz_mul_ui(col_shift[j].get_mpz_t(), col_shift[j].get_mpz_t(), n - j - 1);
  }
}

bool GridVerifier::verify(long i, long j) const {
  const unsigned long n = static_cast<unsigned long>(n_);
  BigInteger lhs = self_power_[i] * self_power_[j] * n_power_[i + j];
  BigInteger rhs = two_n_ * col_base_[j] * pow_ui(n - j - 1, i) * pow_ui(n - i - 1, n - i + j + 1);
  if (algorithm_variant(i, j, n_) == CellVariant::CornerShift) {
    rhs *= pow_ui(i + j + 2, 2 * (i + j + 2));
  } else {
    rhs *= sum_power_[i + j];
  }
  return lhs <= rhs;
}

CertificateRun certify(long n_grid, int threads) {
  check_grid(n_grid);
  const auto start = std::chrono::steady_clock::now();
  GridVerifier verifier(n_grid);
  const long rows = verifier.bound() + 1;
  const int workers = static_cast<int>(std::clamp<long>(threads, 1, rows));
  std::vector<std::vector<std::pair<long, long>>> found(workers);
  std::vector<std::thread> pool;
  auto block = [&](int w) { return rows * w / workers; };
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back([&, w] { verifier.verify_rows(block(w), block(w + 1), found[w]); });
  }
  verifier.verify_rows(block(0), block(1), found[0]);
  for (auto& t : pool) t.join();

  CertificateRun run;
  run.n_grid = n_grid;
  run.bound = verifier.bound();
  run.cells_checked = rows * rows;
  for (auto& f : found) run.failures.insert(run.failures.end(), f.begin(), f.end());
  run.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return run;
}

CertificateRun certify_smoke(long n_grid, long cells, std::uint64_t seed, int threads) {
  check_grid(n_grid);
  if (cells < 1) throw InputError("smoke mode needs at least one cell");
  const auto start = std::chrono::steady_clock::now();
  GridVerifier verifier(n_grid);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> index(0, verifier.bound());
  std::vector<std::pair<long, long>> sample(static_cast<std::size_t>(cells));
  for (auto& c : sample) {
    c.first = index(rng);
    c.second = index(rng);
  }
  const int workers = static_cast<int>(std::clamp<long>(threads, 1, cells));
  std::vector<char> ok(sample.size(), 1);
  std::vector<std::thread> pool;
  auto work = [&](int w) {
    for (std::size_t k = w; k < sample.size(); k += workers)
      ok[k] = verifier.verify(sample[k].first, sample[k].second) ? 1 : 0;
  };
  for (int w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();

  CertificateRun run;
  run.n_grid = n_grid;
  run.bound = verifier.bound();
  run.cells_checked = cells;
  run.smoke = true;
  for (std::size_t k = 0; k < sample.size(); ++k)
    if (!ok[k]) run.failures.push_back(sample[k]);
  std::sort(run.failures.begin(), run.failures.end());
  run.failures.erase(std::unique(run.failures.begin(), run.failures.end()), run.failures.end());
  run.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return run;
}

nlohmann::json to_json(const CertificateRun& run) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& [i, j] : run.failures) failures.push_back({i, j});
  nlohmann::json out{{"N", run.n_grid},
                     {"M", run.bound},
                     {"cells", run.cells_checked},
                     {"failures", failures},
                     {"elapsed_ms", run.elapsed.count()}};
  if (run.smoke) out["smoke"] = true;
  return out;
}

}  // namespace permbound
