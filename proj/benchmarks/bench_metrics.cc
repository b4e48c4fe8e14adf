#include <benchmark/benchmark.h>

#include <regada/eval.hpp>

namespace {

void BM_ComputeMetrics(benchmark::State& state) {
  const std::size_t n = state.range(0);
  regada::Rng rng(1);
  const std::size_t n_adverbs = 18, n_actions = 50;
  regada::io::Vocabulary vocab;
  for (std::size_t v = 0; v < n_adverbs; ++v)
    vocab.adverbs.push_back("a" + std::to_string(v));
  for (std::size_t a = 0; a < n_actions; ++a)
    vocab.actions.push_back("x" + std::to_string(a));
  vocab.antonym.resize(n_adverbs);
  for (std::size_t v = 0; v < n_adverbs; v += 2) {
    vocab.antonym[v] = v + 1;
    vocab.antonym[v + 1] = v;
  }
  std::vector<regada::io::Sample> test(n);
  for (std::size_t i = 0; i < n; ++i) {
    test[i].video_id = "v" + std::to_string(i);
    test[i].adverb = rng.uniform_index(n_adverbs);
    test[i].action = rng.uniform_index(n_actions);
  }
  regada::ScoreMatrix scores;
  scores.n_samples = n;
  scores.n_adverbs = n_adverbs;
  scores.values.resize(n * n_adverbs);
  for (double& x : scores.values) x = rng.uniform(-1, 1);

  for (auto _ : state) {
    regada::io::MetricValues m = regada::compute_metrics(test, vocab, scores);
    benchmark::DoNotOptimize(m.map_w);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ComputeMetrics)->Arg(500)->Arg(2000);

void BM_AveragePrecision(benchmark::State& state) {
  regada::Rng rng(2);
  std::vector<bool> rel(state.range(0));
  for (std::size_t i = 0; i < rel.size(); ++i) rel[i] = rng.uniform() < 0.3;
  rel[0] = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(regada::average_precision(rel));
  }
}
BENCHMARK(BM_AveragePrecision)->Arg(100)->Arg(10000);

}  // namespace
