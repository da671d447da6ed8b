#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "permbound/certificate.hpp"
#include "permbound/phi.hpp"

using namespace permbound;

namespace {

const double kLog2 = std::log(2.0);

// Random point (q, r, s, t) of the 3-simplex with r + s <= gamma.
std::array<double, 4> merge_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r, s;
  do {
    r = u(rng) * kMergeThreshold;
    s = u(rng) * kMergeThreshold;
  } while (r + s > kMergeThreshold);
  const double rest = 1.0 - r - s;
  const double q = u(rng) * rest;
  return {q, r, s, rest - q};
}

BigRational rat(long a, long b) {
  BigRational x(a, b);
  x.canonicalize();
  return x;
}

}  // namespace

TEST_CASE("phi examples") {
  CHECK(phi(StochasticVector<double>({0.5, 0.5})) == doctest::Approx(kLog2).epsilon(1e-15));
  CHECK(phi(StochasticVector<double>({1.0})) == 0.0);
  CHECK(phi(StochasticVector<double>({0.5, 0.0, 0.5})) == doctest::Approx(kLog2).epsilon(1e-15));
  CHECK(phi(StochasticVector<BigRational>({BigRational(1, 2), BigRational(1, 2)})) ==
        doctest::Approx(kLog2).epsilon(1e-15));
  LogLinearForm f = phi_form(StochasticVector<BigRational>({BigRational(1, 2), BigRational(1, 2)}));
  f.add(-1, 2);
  CHECK(f.sign() == 0);
}

TEST_CASE("phi matches the direct oracle, ignores zeros and is reversal invariant") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = oracle::random_simplex(rng, 1 + trial % 8, 0.2);
    const double v = phi_unchecked(p);
    CHECK(v == doctest::Approx(static_cast<double>(oracle::phi_direct(p))).epsilon(1e-12));
    CHECK(v <= kLog2 + 1e-12);

    std::vector<double> padded;
    for (double x : p) {
      padded.push_back(0.0);
      padded.push_back(x);
    }
    padded.push_back(0.0);
    CHECK(phi_unchecked(padded) == v);

    std::vector<double> rev(p.rbegin(), p.rend());
    CHECK(phi_unchecked(rev) == doctest::Approx(v).epsilon(1e-13));
  }
}

TEST_CASE("phi_max_search") {
  auto two = phi_max_search(2, 1e-3);
  CHECK(two.value == doctest::Approx(kLog2).epsilon(1e-9));
  CHECK(two.argmax[0] == doctest::Approx(0.5));
  auto three = phi_max_search(3, 5e-3);
  CHECK(three.value == doctest::Approx(kLog2).epsilon(1e-9));
  auto u = phi_max_search(3, 5e-3, true);
  CHECK(u.value <= kLog2);
  CHECK(u.argmax[0] <= 1 - kMergeThreshold + 1e-12);
  CHECK(u.argmax[2] <= 1 - kMergeThreshold + 1e-12);
  CHECK_THROWS_AS(phi_max_search(5), InputError);
}

TEST_CASE("merge threshold is decided exactly") {
  CHECK(kMergeThreshold == doctest::Approx(0.5615528128088303));
  CHECK(within_merge_threshold(rat(28, 100), rat(28, 100)));
  CHECK_FALSE(within_merge_threshold(rat(29, 100), rat(28, 100)));
  // 0.5615528128 is just below gamma, 0.5615528129 just above
  CHECK(within_merge_threshold(parse_rational("0.5615528128"), BigRational(0)));
  CHECK_FALSE(within_merge_threshold(parse_rational("0.5615528129"), BigRational(0)));
}

TEST_CASE("reduction_check examples") {
  auto q = [](long a, long b) { return BigRational(a, b); };
  auto out = reduction_check(q(1, 4), q(1, 4), q(1, 4), q(1, 4));
  CHECK(out.applicable);
  CHECK(out.holds);
  auto far = reduction_check(q(0, 1), q(1, 2), q(1, 2), q(0, 1));
  CHECK_FALSE(far.applicable);
  CHECK_THROWS_AS(reduction_check(q(1, 2), q(1, 2), q(1, 2), q(0, 1)), InputError);
  // merging two zero coordinates changes nothing
  auto trivial = reduction_check(0.5, 0.0, 0.0, 0.5);
  CHECK(trivial.applicable);
  CHECK(trivial.holds);
}

TEST_CASE("reduction holds on random points below the threshold") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10000; ++trial) {
    auto [q, r, s, t] = merge_point(rng);
    auto out = reduction_check(q, r, s, t);
    CHECK(out.applicable);
    CHECK(out.holds);
  }
  // exact on rational points with denominator 64
  std::uniform_int_distribution<long> d(0, 64);
  int checked = 0;
  while (checked < 300) {
    long r = d(rng), s = d(rng);
    if (!within_merge_threshold(rat(r, 64), rat(s, 64))) continue;
    long rest = 64 - r - s;
    long q = std::uniform_int_distribution<long>(0, rest)(rng);
    auto out = reduction_check(rat(q, 64), rat(r, 64), rat(s, 64), rat(rest - q, 64));
    CHECK(out.holds);
    ++checked;
  }
}

TEST_CASE("stationary_qt") {
  auto [q, t] = stationary_qt(BigRational(0), BigRational(0));
  CHECK(q == BigRational(1, 2));
  CHECK(t == BigRational(1, 2));
  auto [q2, t2] = stationary_qt(BigRational(1, 4), BigRational(1, 8));
  CHECK(q2 + BigRational(3, 8) + t2 == 1);
  CHECK(q2 == (1 - BigRational(1, 4) * BigRational(11, 8)) / BigRational(19, 8));
  CHECK_THROWS_AS(stationary_qt(BigRational(9, 10), BigRational(0)), InputError);

  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10000; ++trial) {
    auto pt = merge_point(rng);
    const double r = pt[1], s = pt[2];
    if ((1 + r + s) * std::max(r, s) > 1) continue;
    auto [qq, tt] = stationary_qt(r, s);
    CHECK(std::abs(qq + r + s + tt - 1.0) <= 1e-15);
  }
}

TEST_CASE("stationary point maximizes the merge difference") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto pt = merge_point(rng);
    const double r = pt[1], s = pt[2];
    if ((1 + r + s) * std::max(r, s) > 1) continue;
    auto diff = [&](double q) {
      const double t = 1 - q - r - s;
      std::vector<double> four{q, r, s, t}, three{q, r + s, t};
      return phi_unchecked(four) - phi_unchecked(three);
    };
    auto [qs, ts] = stationary_qt(r, s);
    const double best = diff(qs);
    for (int k = 0; k < 20; ++k) CHECK(diff(u(rng) * (1 - r - s)) <= best + 1e-12);
  }
}

TEST_CASE("prefix_suffix_check") {
  StochasticVector<BigRational> half({BigRational(1, 2), BigRational(1, 2)});
  CHECK(prefix_suffix_check(half));
  CHECK(prefix_suffix_slack(half) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(prefix_suffix_check(StochasticVector<double>({1.0})));
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 10000; ++trial) {
    StochasticVector<double> p(oracle::random_simplex(rng, 1 + trial % 10, 0.1));
    CHECK(prefix_suffix_check(p));
    CHECK(prefix_suffix_slack(p) >= -1e-12);
  }
  for (int trial = 0; trial < 200; ++trial) {
    StochasticVector<BigRational> p(oracle::random_rational_simplex(rng, 2 + trial % 6, 30));
    CHECK(prefix_suffix_check(p));
  }
}

TEST_CASE("grid bound and variant") {
  CHECK(grid_bound(2000) == 880);
  CHECK(grid_bound(100) == 44);
  CHECK(algorithm_variant(0, 0, 2000) == CellVariant::CornerShift);
  CHECK(algorithm_variant(0, 1, 2000) == CellVariant::Plain);
  CHECK(algorithm_variant(0, 0, 100) == CellVariant::Plain);
  CHECK_THROWS_AS(certify(5), InputError);
  CHECK_THROWS_AS(verify_cell(0, 0, 3), InputError);
}

TEST_CASE("phi3_exp_form") {
  auto [l1, r1] = phi3_exp_form(BigRational(1, 2), BigRational(1, 2), 2);
  CHECK(l1 == BigRational(1, 4));
  CHECK(r1 == BigRational(1, 4));  // phi(1/2, 0, 1/2) = log 2: equality
  auto [l0, r0] = phi3_exp_form(BigRational(0), BigRational(0), 10);
  CHECK(l0 == 1);
  CHECK(r0 == 1024);
  auto [l2, r2] = phi3_exp_form(BigRational(1, 5), BigRational(2, 5), 10);
  CHECK(l2 <= r2);
  const double lhs_log = std::log(l2.get_d()), rhs_log = std::log(r2.get_d());
  std::vector<double> p{0.2, 0.4, 0.4};
  CHECK((rhs_log - lhs_log) / 10 == doctest::Approx(kLog2 - phi_unchecked(p)).epsilon(1e-12));
  CHECK_THROWS_AS(phi3_exp_form(BigRational(1, 3), BigRational(0), 10), InputError);
}

TEST_CASE("cell inequality examples") {
  CHECK(verify_cell(0, 0, 2000));
  CHECK(verify_cell(880, 880, 2000));
  CHECK(verify_cell(440, 17, 2000));
  // without the corner shift the right side is zero
  CHECK_FALSE(verify_cell(0, 0, 2000, CellVariant::Plain));
  auto sides = cell_sides(0, 0, 2000, CellVariant::Plain);
  CHECK(sides.rhs == 0);
}

TEST_CASE("integer cell form agrees with the rational oracle") {
  std::mt19937_64 rng(46);
  for (long n_grid : {50L, 200L}) {
    std::uniform_int_distribution<long> d(0, grid_bound(n_grid));
    for (int trial = 0; trial < 50; ++trial) {
      const long i = d(rng), j = d(rng);
      const bool corner = algorithm_variant(i, j, n_grid) == CellVariant::CornerShift;
      CHECK(verify_cell(i, j, n_grid) == oracle::cell_rational(i, j, n_grid, corner));
    }
    CHECK(verify_cell(0, 0, n_grid, CellVariant::CornerShift) == oracle::cell_rational(0, 0, n_grid, true));
  }
  for (auto [i, j] : {std::pair{0L, 0L}, {880L, 880L}, {123L, 456L}})
    CHECK(verify_cell(i, j, 2000) == oracle::cell_rational(i, j, 2000, i == 0 && j == 0));
}

TEST_CASE("table-driven verifier agrees with fresh evaluation") {
  for (long n_grid : {60L, 250L}) {
    GridVerifier g(n_grid);
    CHECK(g.bound() == grid_bound(n_grid));
    std::vector<std::pair<long, long>> failures;
    g.verify_rows(0, g.bound() + 1, failures);
    std::vector<std::pair<long, long>> expect;
    for (long i = 0; i <= g.bound(); ++i)
      for (long j = 0; j <= g.bound(); ++j) {
        CHECK(g.verify(i, j) == verify_cell(i, j, n_grid));
        if (!verify_cell(i, j, n_grid)) expect.emplace_back(i, j);
      }
    CHECK(failures == expect);
  }
}

TEST_CASE("points inside passing cells satisfy phi <= log 2") {
  const long n_grid = 300;
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<long> d(0, grid_bound(n_grid));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const long i = d(rng), j = d(rng);
    if (!verify_cell(i, j, n_grid)) continue;
    for (int k = 0; k < 10; ++k) {
      const double q = (i + u(rng)) / n_grid, s = (j + u(rng)) / n_grid;
      std::vector<double> p{q, 1 - q - s, s};
      CHECK(phi_unchecked(p) <= kLog2 + 1e-12);
      ++tested;
    }
  }
  CHECK(tested > 0);
}

TEST_CASE("certify is independent of the thread count") {
  auto one = certify(120, 1);
  auto three = certify(120, 3);
  CHECK(one.bound == grid_bound(120));
  CHECK(one.cells_checked == (one.bound + 1) * (one.bound + 1));
  CHECK(one.failures == three.failures);
  CHECK(one.cells_checked == three.cells_checked);
  auto j = to_json(one);
  CHECK(j["N"] == 120);
  CHECK(j["cells"] == one.cells_checked);
  CHECK(j["failures"].is_array());
}

TEST_CASE("smoke certificate at N = 2000") {
  auto run = certify_smoke(2000, 1000, 7, 1);
  CHECK(run.smoke);
  CHECK(run.cells_checked == 1000);
  CHECK(run.passed());
  CHECK(run.elapsed < std::chrono::seconds(10));
  auto again = certify_smoke(2000, 200, 7, 2);
  CHECK(again.passed());
}
