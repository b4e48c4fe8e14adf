#include <doctest.h>

#include <cmath>

#include <regada/grad_check.hpp>
#include <regada/text_encoder.hpp>

#include "oracles.hpp"

using namespace regada;

namespace {

TextEncoderConfig tiny_config() {
  TextEncoderConfig cfg;
  cfg.d_theta = 5;
  cfg.d_dim = 6;
  cfg.gate_layers = 2;
  cfg.res_layers = 2;
  cfg.dropout = 0.4;
  return cfg;
}

io::EmbeddingTable tiny_table(std::size_t n_adverbs, std::size_t n_actions,
                              std::size_t dim, Rng& rng, bool with_pairs = false) {
  io::EmbeddingTable table;
  table.dim = dim;
  for (std::size_t v = 0; v < n_adverbs; ++v) {
    std::vector<double> vec(dim);
    for (double& x : vec) x = rng.uniform(-1, 1);
    table.adverb_vecs.push_back(vec);
  }
  for (std::size_t a = 0; a < n_actions; ++a) {
    std::vector<double> vec(dim);
    for (double& x : vec) x = rng.uniform(-1, 1);
    table.action_vecs.push_back(vec);
  }
  if (with_pairs) {
    for (std::size_t v = 0; v < n_adverbs; ++v) {
      for (std::size_t a = 0; a < n_actions; ++a) {
        std::vector<double> vec(dim);
        for (double& x : vec) x = rng.uniform(-1, 1);
        table.pair_vecs[{v, a}] = vec;
      }
    }
  }
  return table;
}

io::Vocabulary tiny_vocab(std::size_t n_adverbs, std::size_t n_actions) {
  io::Vocabulary vocab;
  for (std::size_t v = 0; v < n_adverbs; ++v)
    vocab.adverbs.push_back("adv" + std::to_string(v));
  for (std::size_t a = 0; a < n_actions; ++a)
    vocab.actions.push_back("act" + std::to_string(a));
  vocab.antonym.resize(n_adverbs);
  for (std::size_t v = 0; v + 1 < n_adverbs; v += 2) {
    vocab.antonym[v] = v + 1;
    vocab.antonym[v + 1] = v;
  }
  return vocab;
}

}  // namespace

TEST_CASE("config validation") {
  TextEncoderConfig cfg = tiny_config();
  cfg.gate_layers = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = tiny_config();
  cfg.main_modality = Modality::action;
  cfg.auxiliary_modality = Modality::action;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = tiny_config();
  cfg.auxiliary_modality = Modality::pair;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = tiny_config();
  cfg.share_gate_res_weights = true;
  cfg.res_layers = 3;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = tiny_config();
  cfg.dropout = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("word projections") {
  Rng rng(3);
  TextEncoder enc(tiny_config(), rng);

  SUBCASE("zero input gives zero output (no bias)") {
    Tensor zero = Tensor::zeros({2, 5});
    Tensor out = enc.project_main(zero);
    for (double v : out.values()) CHECK(v == 0.0);
  }

  SUBCASE("random case equals the matmul oracle") {
    Tensor theta = oracle::random_tensor({3, 5}, rng);
    Tensor out = enc.project_aux(theta);
    oracle::ParamMap params = oracle::snapshot(enc);
    const auto& w = params.shaped("text.aux_proj.W");
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 5; ++k) acc += theta.at(i, k) * w.second[k * 6 + j];
        CHECK(std::fabs(out.at(i, j) - acc) <= 1e-12);
      }
    }
  }

  SUBCASE("identity-initialized square map returns its input") {
    TextEncoderConfig cfg = tiny_config();
    cfg.d_theta = 6;  // square so the weight can be the identity
    Rng r2(4);
    TextEncoder square_enc(cfg, r2);
    auto named = square_enc.named_parameters();
    for (auto& [name, t] : named) {
      if (name != "text.main_proj.W") continue;
      auto vals = t.mutable_values();
      for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) vals[i * 6 + j] = i == j ? 1.0 : 0.0;
    }
    Tensor theta = oracle::random_tensor({2, 6}, r2);
    Tensor out = square_enc.project_main(theta);
    for (std::size_t i = 0; i < out.size(); ++i)
      CHECK(out.values()[i] == theta.values()[i]);
  }
}

TEST_CASE("compose matches the straight-line oracle in eval mode") {
  Rng rng(11);
  for (int variant = 0; variant < 4; ++variant) {
    TextEncoderConfig cfg = tiny_config();
    cfg.use_residual = variant != 2;
    cfg.use_sigmoid = variant != 1;
    cfg.share_gate_res_weights = variant == 3;
    TextEncoder enc(cfg, rng);

    // Push the running stats off their neutral init so eval batch norm is
    // exercised for real.
    Rng scratch(77);
    for (int warm = 0; warm < 3; ++warm) {
      Tensor tm = oracle::random_tensor({4, 5}, rng);
      Tensor ta = oracle::random_tensor({4, 5}, rng);
      Tape tape;
      (void)enc.compose(enc.project_main(tm), enc.project_aux(ta), Mode::train, scratch);
    }

    oracle::ParamMap params = oracle::snapshot(enc);
    Tensor theta_main = oracle::random_tensor({4, 5}, rng);
    Tensor theta_aux = oracle::random_tensor({4, 5}, rng);
    Tensor out = enc.compose(enc.project_main(theta_main), enc.project_aux(theta_aux),
                             Mode::eval, scratch);
    for (std::size_t row = 0; row < 4; ++row) {
      oracle::Vec tm(theta_main.values().begin() + row * 5,
                     theta_main.values().begin() + (row + 1) * 5);
      oracle::Vec ta(theta_aux.values().begin() + row * 5,
                     theta_aux.values().begin() + (row + 1) * 5);
      oracle::Vec expect = oracle::text_compose(params, cfg, tm, ta);
      for (std::size_t j = 0; j < 6; ++j) {
        CHECK(std::fabs(out.at(row, j) - expect[j]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("gate saturation and branch isolation") {
  Rng rng(13);
  TextEncoderConfig cfg = tiny_config();
  TextEncoder enc(cfg, rng);
  Rng scratch(1);

  Tensor phi_main = oracle::random_tensor({3, 6}, rng);
  Tensor phi_aux = oracle::random_tensor({3, 6}, rng);

  SUBCASE("saturated gate with omega_r = 0 passes phi_main through") {
    // Large positive pre-activations saturate the sigmoid to 1.
    for (auto& [name, t] : enc.named_parameters()) {
      if (name == "text.gate.out.b") {
        for (double& v : t.mutable_values()) v = 40.0;
      }
      if (name == "text.omega_r") {
        t.mutable_values()[0] = 0.0;
      }
    }
    Tensor out = enc.compose(phi_main, phi_aux, Mode::eval, scratch);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out.values()[i] == doctest::Approx(phi_main.values()[i]).epsilon(1e-9));
    }
  }

  SUBCASE("omega_g = 0 isolates the residual branch") {
    for (auto& [name, t] : enc.named_parameters()) {
      if (name == "text.omega_g") t.mutable_values()[0] = 0.0;
    }
    Tensor before = enc.compose(phi_main, phi_aux, Mode::eval, scratch);
    // With the gate weight zeroed, gate-only parameters cannot reach the
    // output any more.
    for (auto& [name, t] : enc.named_parameters()) {
      if (name == "text.gate.block0.W") {
        for (double& v : t.mutable_values()) v += 3.7;
      }
    }
    Tensor after = enc.compose(phi_main, phi_aux, Mode::eval, scratch);
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(before.values()[i] == after.values()[i]);
    }
  }
}

TEST_CASE("embed_all_adverbs") {
  Rng rng(17);
  TextEncoderConfig cfg = tiny_config();
  TextEncoder enc(cfg, rng);
  io::Vocabulary vocab = tiny_vocab(6, 3);
  io::EmbeddingTable table = tiny_table(6, 3, 5, rng);
  Rng scratch(0);

  Tensor block = enc.embed_all_adverbs(1, vocab, table);
  CHECK(block.shape() == std::vector<std::size_t>{6, cfg.d_dim});

  SUBCASE("rows are independent of the rest of the batch") {
    for (std::size_t v = 0; v < 6; ++v) {
      Tensor single = enc.encode_pairs({{v, 1}}, table, Mode::eval, scratch);
      for (std::size_t j = 0; j < cfg.d_dim; ++j) {
        CHECK(block.at(v, j) == single.at(0, j));
      }
    }
  }

  SUBCASE("rows match the per-row straight-line oracle") {
    oracle::ParamMap params = oracle::snapshot(enc);
    for (std::size_t v = 0; v < 6; ++v) {
      oracle::Vec expect = oracle::text_compose(params, cfg, table.adverb_vecs[v],
                                                table.action_vecs[1]);
      for (std::size_t j = 0; j < cfg.d_dim; ++j) {
        CHECK(std::fabs(block.at(v, j) - expect[j]) <= 1e-12);
      }
    }
  }

  SUBCASE("eval composition is deterministic") {
    Tensor again = enc.embed_all_adverbs(1, vocab, table);
    for (std::size_t i = 0; i < block.size(); ++i) {
      CHECK(block.values()[i] == again.values()[i]);
    }
  }

  SUBCASE("V=1 vocabulary gives a single row equal to compose") {
    io::Vocabulary v1 = tiny_vocab(1, 3);
    v1.antonym.clear();
    Tensor row = enc.embed_all_adverbs(2, v1, table);
    Tensor direct = enc.encode_pairs({{0, 2}}, table, Mode::eval, scratch);
    CHECK(row.shape()[0] == 1);
    for (std::size_t j = 0; j < cfg.d_dim; ++j) CHECK(row.at(0, j) == direct.at(0, j));
  }
}

TEST_CASE("sigmoid gate activations stay strictly inside (0,1)") {
  Rng rng(19);
  TextEncoderConfig cfg = tiny_config();
  cfg.use_residual = false;  // output = omega_g * gate (*) phi_main
  TextEncoder enc(cfg, rng);
  Rng scratch(0);
  // gate = out / (omega_g * phi_main); probe elementwise via division.
  Tensor phi_main = oracle::random_tensor_away_from({8, 6}, rng, 0.2);
  Tensor phi_aux = oracle::random_tensor({8, 6}, rng);
  Tensor out = enc.compose(phi_main, phi_aux, Mode::eval, scratch);
  const double omega_g = enc.omega_gate().item();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double gate = out.values()[i] / (omega_g * phi_main.values()[i]);
    CHECK(gate > 0.0);
    CHECK(gate < 1.0);
  }
}

TEST_CASE("pair modality") {
  Rng rng(23);
  TextEncoderConfig cfg = tiny_config();
  cfg.main_modality = Modality::pair;
  cfg.auxiliary_modality = Modality::action;
  TextEncoder enc(cfg, rng);
  Rng scratch(0);
  io::EmbeddingTable with_pairs = tiny_table(2, 2, 5, rng, /*with_pairs=*/true);
  io::EmbeddingTable without_pairs = tiny_table(2, 2, 5, rng, /*with_pairs=*/false);

  CHECK_NOTHROW(enc.encode_pairs({{0, 1}}, with_pairs, Mode::eval, scratch));
  CHECK_THROWS_AS(enc.encode_pairs({{0, 1}}, without_pairs, Mode::eval, scratch),
                  ValidationError);
}

TEST_CASE("train mode with a single row fails batch norm") {
  Rng rng(29);
  TextEncoder enc(tiny_config(), rng);
  Rng scratch(0);
  Tensor phi_main = oracle::random_tensor({1, 6}, rng);
  Tensor phi_aux = oracle::random_tensor({1, 6}, rng);
  CHECK_THROWS_AS(enc.compose(phi_main, phi_aux, Mode::train, scratch), ShapeError);
}

TEST_CASE("gradients flow to every text parameter") {
  Rng rng(31);
  for (int variant = 0; variant < 2; ++variant) {
    TextEncoderConfig cfg = tiny_config();
    cfg.d_theta = 3;
    cfg.d_dim = 4;
    cfg.gate_layers = 1;
    cfg.res_layers = 1;
    cfg.share_gate_res_weights = variant == 1;
    TextEncoder enc(cfg, rng);
    Tensor theta_main = oracle::random_tensor({3, 3}, rng);
    Tensor theta_aux = oracle::random_tensor({3, 3}, rng);
    std::vector<Tensor> leaves = enc.parameters();
    auto f = [&] {
      Rng drop(5);  // fixed dropout masks per evaluation
      Tensor out = enc.compose(enc.project_main(theta_main), enc.project_aux(theta_aux),
                               Mode::train, drop);
      return sum(square(out));
    };
    auto r = grad_check(f, leaves);
    CHECK(r.max_rel_err <= 1e-4);
  }
}
