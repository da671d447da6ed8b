#include <random>

#include <benchmark/benchmark.h>

#include "permbound/bethe.hpp"
#include "permbound/certificate.hpp"
#include "permbound/permanent.hpp"
#include "permbound/sampling.hpp"

using namespace permbound;

namespace {

NonNegMatrix<double> random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix<double> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return NonNegMatrix<double>(m);
}

NonNegMatrix<BigRational> random_rational(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(0, 16);
  Matrix<BigRational> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m(i, j) = BigRational(d(rng), 4);
      m(i, j).canonicalize();
    }
  return NonNegMatrix<BigRational>(m);
}

void BM_RyserFloat(benchmark::State& state) {
  auto a = random_matrix(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(per_ryser(a));
}
BENCHMARK(BM_RyserFloat)->DenseRange(8, 20, 4);

void BM_RyserRational(benchmark::State& state) {
  auto a = random_rational(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(per_ryser(a));
}
BENCHMARK(BM_RyserRational)->DenseRange(6, 12, 3);

void BM_Marginals(benchmark::State& state) {
  auto a = random_matrix(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(marginals(a));
}
BENCHMARK(BM_Marginals)->Arg(8)->Arg(12);

void BM_Bethe(benchmark::State& state) {
  auto a = random_matrix(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(bethe(a));
}
BENCHMARK(BM_Bethe)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_NuSample(benchmark::State& state) {
  auto a = random_matrix(8, 5);
  NuDistribution<double> d(marginals(a), Permutation::identity(8));
  std::mt19937_64 rng(6);
  for (auto _ : state) benchmark::DoNotOptimize(nu_sample(d, rng));
}
BENCHMARK(BM_NuSample);

void BM_KL(benchmark::State& state) {
  auto a = random_matrix(static_cast<int>(state.range(0)), 7);
  NuDistribution<double> d(marginals(a), Permutation::identity(a.n()));
  for (auto _ : state) benchmark::DoNotOptimize(kl_mu_nu(a, d));
}
BENCHMARK(BM_KL)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

// One grid row of the N = 2000 certificate via the incremental tables.
void BM_CertificateRow(benchmark::State& state) {
  GridVerifier g(2000);
  const long row = state.range(0);
  std::vector<std::pair<long, long>> failures;
  for (auto _ : state) {
    failures.clear();
    g.verify_rows(row, row + 1, failures);
  }
  state.SetItemsProcessed(state.iterations() * (g.bound() + 1));
}
BENCHMARK(BM_CertificateRow)->Arg(0)->Arg(440)->Arg(880)->Unit(benchmark::kMillisecond);

void BM_CertificateCellFresh(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_cell(440, 440, 2000));
}
BENCHMARK(BM_CertificateCellFresh)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
