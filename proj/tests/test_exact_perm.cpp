#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "permbound/permanent.hpp"

using namespace permbound;

namespace {

NonNegMatrix<BigRational> q_rows(const std::vector<std::vector<long>>& rows) {
  std::vector<std::vector<BigRational>> r;
  for (const auto& row : rows) {
    r.emplace_back();
    for (long x : row) r.back().emplace_back(x);
  }
  return NonNegMatrix<BigRational>::from_rows(r);
}

}  // namespace

TEST_CASE("per examples") {
  auto ones = NonNegMatrix<BigRational>::ones(2);
  CHECK(per_bruteforce(ones) == 2);
  CHECK(per_ryser(ones) == 2);
  CHECK(per_bruteforce(NonNegMatrix<BigRational>::identity(6)) == 1);
  CHECK(per_ryser(NonNegMatrix<BigRational>::identity(6)) == 1);
  auto a = q_rows({{1, 2}, {3, 4}});
  CHECK(per_bruteforce(a) == 10);
  CHECK(per_ryser(a) == 10);
  CHECK(per_ryser(NonNegMatrix<BigRational>::ones(5)) == 120);
  CHECK(per_ryser(NonNegMatrix<double>::ones(5)) == 120.0);
  CHECK(per_ryser(NonNegMatrix<double>::from_rows({{1, 1}, {0, 0}})) == 0.0);
}

TEST_CASE("per_ryser matches the enumeration oracle on random rationals") {
  std::mt19937_64 rng(1);
  for (int n = 1; n <= 7; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      NonNegMatrix<BigRational> a(oracle::random_quarter_matrix(rng, n));
      BigRational expect = oracle::permanent(a.matrix());
      CHECK(per_ryser(a) == expect);
      CHECK(per_bruteforce(a) == expect);
    }
  }
}

TEST_CASE("float Ryser agrees with the exact value") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    NonNegMatrix<BigRational> q(oracle::random_quarter_matrix(rng, 8));
    NonNegMatrix<double> f(to_double(q.matrix()));
    const double exact = per_ryser(q).get_d();
    CHECK(per_ryser(f) == doctest::Approx(exact).epsilon(1e-12));
    if (exact > 0) CHECK(log_permanent(f) == doctest::Approx(std::log(exact)).epsilon(1e-12));
  }
}

TEST_CASE("dimension guards") {
  CHECK_THROWS_AS(per_bruteforce(NonNegMatrix<double>::ones(kBruteForceLimit + 1)), DimensionGuardError);
  CHECK_THROWS_AS(per_ryser(NonNegMatrix<double>::ones(kRyserLimit + 1)), DimensionGuardError);
  try {
    per_bruteforce(NonNegMatrix<double>::ones(11));
  } catch (const DimensionGuardError& e) {
    CHECK(e.n() == 11);
    CHECK(e.limit() == 10);
  }
}

TEST_CASE("log_permanent survives entries that overflow the plain value") {
  Matrix<double> m = Matrix<double>::square(20, 1e30);
  const double expect = 20 * std::log(1e30) + std::lgamma(21.0);
  // Ryser's largest terms exceed per(J_20) by ~1e9, so expect ~1e-7 relative
  CHECK(std::abs(log_permanent(NonNegMatrix<double>(m)) - expect) < 1e-6);
  CHECK(std::isinf(log_permanent(NonNegMatrix<double>::from_rows({{1, 1}, {0, 0}}))));
}

TEST_CASE("marginals examples") {
  auto half = BigRational(1, 2);
  auto u = marginals(NonNegMatrix<BigRational>::ones(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(u(i, j) == half);
  CHECK(marginals(NonNegMatrix<BigRational>::identity(4)).matrix() == Matrix<BigRational>::identity(4));
  auto p = marginals(q_rows({{1, 2}, {3, 4}}));
  CHECK(p(0, 0) == BigRational(2, 5));
  CHECK(p(0, 1) == BigRational(3, 5));
  CHECK(p(1, 0) == BigRational(3, 5));
  CHECK(p(1, 1) == BigRational(2, 5));
  CHECK_THROWS_AS(marginals(NonNegMatrix<double>::from_rows({{1, 1}, {0, 0}})), ZeroPermanentError);
}

TEST_CASE("marginals equal the minor-ratio oracle and sum exactly to one") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 5;
    Matrix<BigRational> m = oracle::random_quarter_matrix(rng, n);
    for (int i = 0; i < n; ++i) m(i, i) += 1;  // keep per > 0
    NonNegMatrix<BigRational> a(m);
    auto p = marginals(a);
    BigRational total = oracle::permanent(m);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        BigRational expect = n == 1 ? BigRational(1) : m(i, j) * oracle::permanent(oracle::minor(m, i, j)) / total;
        CHECK(p(i, j) == expect);
      }
    }
    CHECK_NOTHROW(validate_doubly_stochastic(p.matrix()));
  }
}

TEST_CASE("float marginals with huge entries stay doubly stochastic") {
  Matrix<double> m = Matrix<double>::square(12, 1e200);
  m(0, 0) = 3e200;
  auto p = marginals(NonNegMatrix<double>(m));
  // Ryser's alternating sum loses about 1e-11 here; the default tolerance holds
  CHECK_NOTHROW(validate_doubly_stochastic(p.matrix()));
  CHECK(p(0, 0) > p(0, 1));
}

TEST_CASE("marginals of I_m (x) A are block copies of marginals(A)") {
  auto a = q_rows({{1, 2, 0}, {3, 1, 1}, {1, 1, 2}});
  auto p = marginals(a);
  auto big = marginals(identity_tensor(3, a));
  for (int b = 0; b < 3; ++b)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 9; ++j) {
        const int bj = j / 3;
        CHECK(big(3 * b + i, j) == (bj == b ? p(i, j % 3) : BigRational(0)));
      }
}

TEST_CASE("mu_prob examples and normalization") {
  auto id2 = Permutation::identity(2);
  auto swap = Permutation({1, 0});
  CHECK(mu_prob(NonNegMatrix<BigRational>::ones(2), id2) == BigRational(1, 2));
  CHECK(mu_prob(NonNegMatrix<BigRational>::identity(2), id2) == 1);
  CHECK(mu_prob(q_rows({{1, 2}, {3, 4}}), swap) == BigRational(3, 5));
  CHECK_THROWS_AS(mu_prob(NonNegMatrix<double>::from_rows({{1, 1}, {0, 0}}), id2), ZeroPermanentError);

  std::mt19937_64 rng(4);
  Matrix<BigRational> m = oracle::random_quarter_matrix(rng, 6);
  for (int i = 0; i < 6; ++i) m(i, (i + 1) % 6) += 1;
  GibbsWeights<BigRational> g{NonNegMatrix<BigRational>(m)};
  BigRational total = 0;
  for_each_permutation(6, [&](const Permutation& s) { total += g.prob(s); });
  CHECK(total == 1);
}

TEST_CASE("permutations") {
  Permutation p = Permutation::from_one_based({2, 3, 1});
  CHECK(p[0] == 1);
  CHECK(p.one_based() == std::vector<int>{2, 3, 1});
  CHECK(compose(p, p.inverse()) == Permutation::identity(3));
  CHECK(p.reversed().images() == std::vector<int>{0, 2, 1});
  CHECK_THROWS_AS(Permutation({0, 0, 1}), InputError);
  long count = 0;
  for_each_permutation(5, [&](const Permutation&) { ++count; });
  CHECK(count == factorial(5));
}
