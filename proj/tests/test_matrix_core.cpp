#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "permbound/matching.hpp"
#include "permbound/matrix_io.hpp"
#include "permbound/permanent.hpp"
#include "permbound/sinkhorn.hpp"

using namespace permbound;

TEST_CASE("validate_doubly_stochastic accepts permutation and uniform matrices") {
  CHECK_NOTHROW(validate_doubly_stochastic(Matrix<double>::identity(3), 1e-12));
  CHECK_NOTHROW(validate_doubly_stochastic(Matrix<double>::from_rows({{0.5, 0.5}, {0.5, 0.5}}), 1e-12));
}

TEST_CASE("validate_doubly_stochastic reports the first violated row") {
  auto m = Matrix<double>::from_rows({{0.6, 0.5}, {0.5, 0.5}});
  try {
    validate_doubly_stochastic(m);
    FAIL("accepted a matrix whose first row sums to 1.1");
  } catch (const DoublyStochasticError& e) {
    CHECK(e.violation().kind == StochasticViolation::Kind::RowSum);
    CHECK(e.violation().row == 1);
    CHECK(std::string(e.what()).find("row 1 sums to 1.1") != std::string::npos);
  }
}

TEST_CASE("validate_doubly_stochastic flags negatives, columns and shape") {
  auto neg = Matrix<double>::from_rows({{1.5, -0.5}, {-0.5, 1.5}});
  CHECK_THROWS_AS(validate_doubly_stochastic(neg), DoublyStochasticError);
  auto col = Matrix<double>::from_rows({{0.5, 0.5}, {0.6, 0.4}});
  try {
    validate_doubly_stochastic(col);
    FAIL("accepted bad columns");
  } catch (const DoublyStochasticError& e) {
    CHECK(e.violation().kind == StochasticViolation::Kind::ColumnSum);
    CHECK(e.violation().col == 1);
  }
  CHECK_THROWS_AS(validate_doubly_stochastic(Matrix<double>(2, 3, 0.5)), DoublyStochasticError);
}

TEST_CASE("rational validation is exact") {
  BigRational third(1, 3);
  auto m = Matrix<BigRational>::square(3, third);
  CHECK_NOTHROW(validate_doubly_stochastic(m));
  m(0, 0) = BigRational(333333333, 1000000000);
  CHECK_THROWS_AS(validate_doubly_stochastic(m), DoublyStochasticError);
}

TEST_CASE("NonNegMatrix rejects negative and non-square input") {
  CHECK_THROWS_AS(NonNegMatrix<double>::from_rows({{1, -1}, {0, 1}}), InputError);
  CHECK_THROWS_AS(NonNegMatrix<double>(Matrix<double>(2, 3)), InputError);
  CHECK_THROWS_AS(NonNegMatrix<double>::from_rows({{1, 2}, {3}}), InputError);
}

TEST_CASE("StochasticVector validation") {
  CHECK_NOTHROW(StochasticVector<double>({0.25, 0.75}));
  CHECK_THROWS_AS(StochasticVector<double>({0.5, 0.6}), InputError);
  CHECK_THROWS_AS(StochasticVector<double>({1.5, -0.5}), InputError);
  CHECK_THROWS_AS(StochasticVector<BigRational>({BigRational(1, 3), BigRational(1, 3)}), InputError);
}

TEST_CASE("sinkhorn_scale examples") {
  SUBCASE("identity is a fixed point") {
    auto r = sinkhorn_scale(NonNegMatrix<double>::identity(4));
    CHECK(r.scaled.matrix() == Matrix<double>::identity(4));
    for (double x : r.row_scalers) CHECK(x == 1.0);
    for (double x : r.col_scalers) CHECK(x == 1.0);
  }
  SUBCASE("constant 2x2 goes to uniform") {
    auto r = sinkhorn_scale(NonNegMatrix<double>::from_rows({{2, 2}, {2, 2}}));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(r.scaled(i, j) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("[[1,1],[0,1]] reaches the identity") {
    auto r = sinkhorn_scale(NonNegMatrix<double>::from_rows({{1, 1}, {0, 1}}), 1e-12);
    CHECK(r.scaled(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.scaled(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.scaled(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("no perfect matching") {
    CHECK_THROWS_AS(sinkhorn_scale(NonNegMatrix<double>::from_rows({{1, 1}, {0, 0}})), ZeroPermanentError);
  }
}

TEST_CASE("sinkhorn scalers reconstruct P and the output validates") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 6;
    Matrix<double> a = oracle::random_uniform_matrix(rng, n, 0.0, 5.0);
    if (trial % 3 == 0) a(0, n - 1) = 0.0;
    NonNegMatrix<double> nn(a);
    auto r = sinkhorn_scale(nn, 1e-12);
    CHECK_NOTHROW(validate_doubly_stochastic(r.scaled.matrix(), 1e-12));
    // entries off the matchable support vanish in the limit; the scalers
    // describe the pruned matrix
    auto keep = matchable_support(SupportPattern::of(nn));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (!keep(i, j)) {
          CHECK(r.scaled(i, j) == 0.0);
          continue;
        }
        CHECK(std::abs(r.row_scalers[i] * a(i, j) * r.col_scalers[j] - r.scaled(i, j)) <= 1e-12);
      }
  }
}

TEST_CASE("newton balancing handles targets near the boundary") {
  auto y = Matrix<double>::from_rows({{1e-9, 1.0}, {1.0, 1e-12}});
  SinkhornBalance slow = sinkhorn_balance(y, 1e-13, 2000);
  CHECK_FALSE(slow.converged);
  SinkhornBalance fast = balance(y, 1e-13, 2000);
  CHECK(fast.converged);
  CHECK(fast.deviation < 1e-13);
}

TEST_CASE("matching: perfect matching and matchable support") {
  auto a = NonNegMatrix<double>::from_rows({{1, 1, 0}, {0, 1, 1}, {0, 0, 1}});
  auto keep = matchable_support(SupportPattern::of(a));
  CHECK(keep(0, 0));
  CHECK(keep(1, 1));
  CHECK(keep(2, 2));
  CHECK_FALSE(keep(0, 1));
  CHECK_FALSE(keep(1, 2));
  CHECK_FALSE(perfect_matching(SupportPattern::of(NonNegMatrix<double>::from_rows({{1, 1}, {0, 0}}))));
}

TEST_CASE("block_diag and identity_tensor") {
  auto one = NonNegMatrix<double>::from_rows({{1}});
  CHECK(block_diag(one, one) == NonNegMatrix<double>::identity(2));
  auto j2 = NonNegMatrix<double>::ones(2);
  auto b = block_diag(j2, one);
  CHECK(b.matrix() == Matrix<double>::from_rows({{1, 1, 0}, {1, 1, 0}, {0, 0, 1}}));
  auto a = NonNegMatrix<double>::from_rows({{1, 2}, {3, 4}});
  CHECK(identity_tensor(1, a) == a);
  CHECK(identity_tensor(4, j2) == tight_example<double>(8));
  CHECK_THROWS_AS(identity_tensor(0, a), InputError);
}

TEST_CASE("per(block_diag(B, C)) = per(B) per(C) exactly") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    NonNegMatrix<BigRational> b(oracle::random_quarter_matrix(rng, 3));
    NonNegMatrix<BigRational> c(oracle::random_quarter_matrix(rng, 2));
    CHECK(per_ryser(block_diag(b, c)) == oracle::permanent(b.matrix()) * oracle::permanent(c.matrix()));
  }
}

TEST_CASE("per(identity_tensor(2, A)) = per(A)^2") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    NonNegMatrix<BigRational> a(oracle::random_quarter_matrix(rng, 3));
    BigRational p = oracle::permanent(a.matrix());
    CHECK(per_bruteforce(identity_tensor(2, a)) == p * p);
  }
}

TEST_CASE("CSV parsing: decimals, rationals and diagnostics") {
  auto a = parse_matrix_csv<BigRational>("1, 1/2\n0.25,3e-1\n", "a.csv");
  CHECK(a(0, 1) == BigRational(1, 2));
  CHECK(a(1, 0) == BigRational(1, 4));
  CHECK(a(1, 1) == BigRational(3, 10));
  try {
    parse_matrix_csv<double>("1,2\n3,-4\n", "m.csv");
    FAIL("accepted a negative entry");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 2);
    CHECK(std::string(e.what()).rfind("m.csv:2:2:", 0) == 0);
  }
  CHECK_THROWS_AS(parse_matrix_csv<double>("1,2\n3\n", "r.csv"), ParseError);
  CHECK_THROWS_AS(parse_matrix_csv<double>("1,2,3\n4,5,6\n", "s.csv"), InputError);
  CHECK_THROWS_AS(parse_matrix_csv<double>("1,x\n1,1\n", "t.csv"), ParseError);
}

TEST_CASE("JSON parsing and round trip") {
  auto a = parse_matrix<double>(R"({"n": 2, "entries": [[1, 2], [3, 4]]})", "a.json");
  CHECK(a(1, 0) == 3.0);
  CHECK_THROWS_AS(parse_matrix<double>(R"({"n": 3, "entries": [[1, 2], [3, 4]]})", "b.json"), InputError);

  std::mt19937_64 rng(9);
  NonNegMatrix<BigRational> q(oracle::random_quarter_matrix(rng, 4));
  auto back = parse_matrix<BigRational>(matrix_to_json(q.matrix()).dump(), "rt.json");
  CHECK(back == q);

  NonNegMatrix<double> f(oracle::random_uniform_matrix(rng, 4));
  auto fback = parse_matrix<double>(matrix_to_json(f.matrix()).dump(), "rt.json");
  CHECK(fback == f);
}

TEST_CASE("vector parsing") {
  CHECK(parse_vector<double>("[0.5, 0.5]", "v") == std::vector<double>{0.5, 0.5});
  CHECK(parse_vector<BigRational>(R"({"p": ["1/3", "2/3"]})", "v")[0] == BigRational(1, 3));
  CHECK(parse_vector<double>("0.25,0.75\n", "v").size() == 2);
}

TEST_CASE("rational literals") {
  CHECK(parse_rational("-1.25e-3") == BigRational(-1, 800));
  CHECK(parse_rational("6/4") == BigRational(3, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  CHECK(log_of(BigRational(BigInteger(1) << 4000)) == doctest::Approx(4000 * std::log(2.0)));
}
