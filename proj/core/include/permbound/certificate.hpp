#pragma once

#include <chrono>
#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "permbound/rational.hpp"

namespace permbound {

// Exact grid certificate that phi(q, r, s) <= log 2 on
//   U = {(q, r, s) in the 2-simplex : q, s <= 1 - gamma},  gamma = (sqrt(17) - 3) / 2.
//
// Cell (i, j) of an N-grid covers [i/N, (i+1)/N] x [j/N, (j+1)/N] in (q, s).
// With eps = 1/N, qb = i/N, sb = j/N the cell passes when
//
//   (qb + eps)^i (sb + eps)^j
//     <= 2^N (1 - qb - eps)^(N - i + j + 1) (1 - sb - eps)^(N + i - j + 1) (qb + sb + d)^(2 (i + j + 2))
//
// where d = 0, or d = 2 eps for the corner cell i = j = 0 when N > 100 (the
// plain form has a zero right side there). Multiplying through by
// N^(2N + 2i + 2j + 6) turns both sides into integers:
//
//   lhs = (i + 1)^i (j + 1)^j N^(2N + i + j + 6)
//   rhs = 2^N (N - i - 1)^(N - i + j + 1) (N - j - 1)^(N + i - j + 1) (i + j + Nd)^(2 (i + j + 2))

enum class CellVariant { Plain, CornerShift };

/// Largest grid index checked: floor(44 N / 100), from 1 - gamma < 0.44.
long grid_bound(long n_grid);

/// CornerShift exactly when i = j = 0 and N > 100.
CellVariant algorithm_variant(long i, long j, long n_grid);

struct CellSides {
  BigInteger lhs;
  BigInteger rhs;
};

/// Both sides of the integer-form cell inequality, each power computed from
/// scratch.
CellSides cell_sides(long i, long j, long n_grid, CellVariant variant);

/// lhs <= rhs for the variant the algorithm prescribes.
bool verify_cell(long i, long j, long n_grid);
bool verify_cell(long i, long j, long n_grid, CellVariant variant);

/// Both sides of q^(Nq) s^(Ns) <= 2^N (1-q)^(N(1-q+s)) (1-s)^(N(1+q-s)) (q+s)^(2N(q+s)),
/// the N-th power of exp(phi(q, 1 - q - s, s)) <= 2, as exact rationals
/// (0^0 = 1). Requires q, s >= 0, q + s <= 1 and N q, N s integral.
std::pair<BigRational, BigRational> phi3_exp_form(const BigRational& q, const BigRational& s,
                                                  long n_grid);

/// Table-driven evaluator for a whole grid. Per-row factors are advanced by
/// one multiplication per step instead of re-exponentiating, so a worker must
/// visit the cells of a row in increasing j and rows in increasing i.
class GridVerifier {
 public:
  explicit GridVerifier(long n_grid);

  long n_grid() const { return n_; }
  long bound() const { return m_; }

  /// Checks every cell of rows [row_begin, row_end) and appends failures.
  void verify_rows(long row_begin, long row_end, std::vector<std::pair<long, long>>& failures) const;

  /// Single cell using the tables but with fresh per-row factors.
  bool verify(long i, long j) const;

 private:
  long n_;
  long m_;
  std::vector<BigInteger> self_power_;   // k -> (k + 1)^k
  std::vector<BigInteger> n_power_;      // k -> N^(2N + 6 + k)
  std::vector<BigInteger> sum_power_;    // k -> k^(2 (k + 2))
  std::vector<BigInteger> col_base_;     // j -> (N - j - 1)^(N - j + 1)
  BigInteger two_n_;
};

struct CertificateRun {
  long n_grid = 0;
  long bound = 0;  // M
  long cells_checked = 0;
  std::vector<std::pair<long, long>> failures;  // ordered by (i, j)
  std::chrono::milliseconds elapsed{0};
  bool smoke = false;

  bool passed() const { return failures.empty(); }
};

/// Every cell (i, j) in {0..M}^2. Rows are split across `threads` workers and
/// failures merged in (i, j) order. Throws InputError unless N > 2e.
CertificateRun certify(long n_grid, int threads = 1);

/// `cells` cells drawn uniformly (with replacement) from {0..M}^2.
CertificateRun certify_smoke(long n_grid, long cells, std::uint64_t seed, int threads = 1);

/// {"N", "M", "cells", "failures": [[i, j], ...], "elapsed_ms"}.
nlohmann::json to_json(const CertificateRun& run);

}  // namespace permbound
