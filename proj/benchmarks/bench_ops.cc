#include <benchmark/benchmark.h>

#include <regada/ops.hpp>
#include <regada/rng.hpp>

namespace {

regada::Tensor random_matrix(std::size_t r, std::size_t c, regada::Rng& rng,
                             bool grad = false) {
  std::vector<double> v(r * c);
  for (double& x : v) x = rng.uniform(-1, 1);
  return regada::Tensor({r, c}, std::move(v), grad);
}

void BM_MatmulForward(benchmark::State& state) {
  const std::size_t n = state.range(0);
  regada::Rng rng(1);
  regada::Tensor a = random_matrix(n, n, rng);
  regada::Tensor b = random_matrix(n, n, rng);
  for (auto _ : state) {
    regada::Tensor c = regada::matmul(a, b);
    benchmark::DoNotOptimize(c.values().data());
  }
  state.SetItemsProcessed(state.iterations() * 2 * n * n * n);
}
BENCHMARK(BM_MatmulForward)->Arg(64)->Arg(128)->Arg(256);

void BM_MatmulTrainStep(benchmark::State& state) {
  const std::size_t n = state.range(0);
  regada::Rng rng(1);
  regada::Tensor a = random_matrix(n, n, rng, true);
  regada::Tensor b = random_matrix(n, n, rng, true);
  for (auto _ : state) {
    a.zero_grad();
    b.zero_grad();
    regada::Tape tape;
    regada::Tensor loss = regada::mean(regada::square(regada::matmul(a, b)));
    tape.backward(loss);
    benchmark::DoNotOptimize(loss.item());
  }
}
BENCHMARK(BM_MatmulTrainStep)->Arg(64)->Arg(128);

void BM_SoftmaxRows(benchmark::State& state) {
  regada::Rng rng(2);
  regada::Tensor x = random_matrix(512, 64, rng);
  for (auto _ : state) {
    regada::Tensor y = regada::softmax(x, 1);
    benchmark::DoNotOptimize(y.values().data());
  }
}
BENCHMARK(BM_SoftmaxRows);

}  // namespace

BENCHMARK_MAIN();
