#include <benchmark/benchmark.h>

#include <regada/objective.hpp>
#include <regada/text_encoder.hpp>
#include <regada/video_encoder.hpp>

namespace {

regada::Tensor random_matrix(std::size_t r, std::size_t c, regada::Rng& rng) {
  std::vector<double> v(r * c);
  for (double& x : v) x = rng.uniform(-1, 1);
  return regada::Tensor({r, c}, std::move(v));
}

void BM_TextComposeEval(benchmark::State& state) {
  const std::size_t batch = state.range(0);
  regada::Rng rng(1);
  regada::TextEncoderConfig cfg;
  cfg.d_theta = 32;
  cfg.d_dim = 64;
  regada::TextEncoder enc(cfg, rng);
  regada::Tensor theta_main = random_matrix(batch, 32, rng);
  regada::Tensor theta_aux = random_matrix(batch, 32, rng);
  regada::Rng scratch(0);
  for (auto _ : state) {
    regada::Tensor out = enc.compose(enc.project_main(theta_main),
                                     enc.project_aux(theta_aux),
                                     regada::Mode::eval, scratch);
    benchmark::DoNotOptimize(out.values().data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_TextComposeEval)->Arg(32)->Arg(128)->Arg(512);

void BM_VideoEncodeEval(benchmark::State& state) {
  const std::size_t segments = state.range(0);
  regada::Rng rng(2);
  regada::VideoEncoderConfig cfg;
  cfg.d_x = 48;
  cfg.d_theta = 32;
  cfg.d_dim = 64;
  cfg.heads = 2;
  cfg.d_head = 16;
  regada::VideoEncoder enc(cfg, rng);
  regada::Tensor features = random_matrix(segments, 48, rng);
  regada::Tensor theta = random_matrix(1, 32, rng);
  regada::Rng scratch(0);
  for (auto _ : state) {
    regada::Tensor out = enc.encode(features, theta, regada::Mode::eval, scratch);
    benchmark::DoNotOptimize(out.values().data());
  }
}
BENCHMARK(BM_VideoEncodeEval)->Arg(2)->Arg(8)->Arg(32);

void BM_ObjectiveTrainStep(benchmark::State& state) {
  const std::size_t batch = state.range(0);
  regada::Rng rng(3);
  regada::TextEncoderConfig tcfg;
  tcfg.d_theta = 32;
  tcfg.d_dim = 64;
  regada::TextEncoder text(tcfg, rng);
  regada::VideoEncoderConfig vcfg;
  vcfg.d_x = 48;
  vcfg.d_theta = 32;
  vcfg.d_dim = 64;
  vcfg.heads = 2;
  vcfg.d_head = 16;
  regada::VideoEncoder video(vcfg, rng);
  regada::LossConfig loss;

  std::vector<regada::Tensor> features;
  for (std::size_t i = 0; i < batch; ++i) features.push_back(random_matrix(3, 48, rng));
  regada::Tensor theta_rows = random_matrix(batch, 32, rng);
  regada::Tensor theta_v = random_matrix(batch, 32, rng);
  regada::Tensor theta_a = random_matrix(batch, 32, rng);
  regada::Tensor theta_abar = random_matrix(batch, 32, rng);
  regada::Tensor theta_vbar = random_matrix(batch, 32, rng);

  std::vector<regada::Tensor> params = text.parameters();
  for (regada::Tensor& p : video.parameters()) params.push_back(p);

  regada::Rng drop(7);
  for (auto _ : state) {
    for (regada::Tensor& p : params) p.zero_grad();
    regada::Tape tape;
    std::vector<regada::Tensor> rows;
    for (std::size_t i = 0; i < batch; ++i) {
      regada::Tensor row = regada::reshape(
          regada::slice_cols(regada::reshape(theta_rows, {1, batch * 32}), i * 32, 32),
          {1, 32});
      rows.push_back(video.encode(features[i], row, regada::Mode::train, drop));
    }
    regada::Tensor anchor = regada::stack_rows(rows);
    regada::Tensor positive = text.compose(text.project_main(theta_v),
                                           text.project_aux(theta_a),
                                           regada::Mode::train, drop);
    regada::Tensor neg_action = text.compose(text.project_main(theta_v),
                                             text.project_aux(theta_abar),
                                             regada::Mode::train, drop);
    regada::Tensor neg_adverb = text.compose(text.project_main(theta_vbar),
                                             text.project_aux(theta_a),
                                             regada::Mode::train, drop);
    regada::LossTerms terms =
        regada::total_loss(anchor, positive, neg_action, neg_adverb, loss);
    tape.backward(terms.total);
    benchmark::DoNotOptimize(terms.total.item());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ObjectiveTrainStep)->Arg(32)->Arg(128);

}  // namespace
