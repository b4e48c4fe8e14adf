#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <regada/train.hpp>

using namespace regada;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  SynthConfig synth;
  TrainConfig config;
  TrainPaths paths;

  Workspace() {
    dir = fs::temp_directory_path() / ("regada_train_test_" + std::to_string(rand()));
    synth.n_adverbs = 4;
    synth.n_actions = 5;
    synth.n_train = 80;
    synth.n_test = 40;
    synth.d_theta = 8;
    synth.d_x = 12;
    synth.t_min = 2;
    synth.t_max = 3;
    synth.noise_sigma = 0.05;
    synth.distractors = 1;
    synth.seed = 7;
    SynthDataset data = generate_synth(synth);
    write_synth_dataset(data, dir);

    config.seed = 0;
    config.text.d_theta = 8;
    config.text.d_dim = 10;
    config.text.gate_layers = 1;
    config.text.res_layers = 1;
    config.text.dropout = 0.2;
    config.video.d_x = 12;
    config.video.d_theta = 8;
    config.video.d_dim = 10;
    config.video.heads = 2;
    config.video.d_head = 4;
    config.video.proj_layers = 1;
    config.optim.lr = 1e-3;
    config.batch_size = 16;
    config.epochs = 4;
    config.eval_every = 2;

    paths.manifest = dir / "manifest.jsonl";
    paths.vocab = dir / "vocab.json";
    paths.embeddings = dir / "embeddings.rgdt";
    paths.split = dir / "split.json";
    paths.out_dir = dir / "run";
  }
  ~Workspace() { fs::remove_all(dir); }
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("config json round trip") {
  TrainConfig cfg;
  cfg.seed = 17;
  cfg.text.gate_layers = 3;
  cfg.loss.lambda_adverb = 1.5;
  cfg.optim.lr = 3e-4;
  cfg.video.d_x = 24;
  cfg.text.d_theta = 16;
  cfg.video.d_theta = 16;
  cfg.video.d_dim = cfg.text.d_dim;
  TrainConfig back = TrainConfig::from_json(cfg.to_json());
  CHECK(back.canonical_dump() == cfg.canonical_dump());
  CHECK(back.text.gate_layers == 3);
  CHECK(back.optim.lr == 3e-4);

  SUBCASE("unknown keys are rejected") {
    nlohmann::json j = nlohmann::json::parse(R"({"trian": {"epochs": 3}})");
    CHECK_THROWS_AS(TrainConfig::from_json(j), ConfigError);
    nlohmann::json j2 = cfg.to_json();
    j2["text"]["dorpout"] = 0.5;
    CHECK_THROWS_AS(TrainConfig::from_json(j2), ConfigError);
  }

  SUBCASE("mismatched widths are rejected") {
    nlohmann::json j = cfg.to_json();
    j["video"]["d_dim"] = 123;
    CHECK_THROWS_AS(TrainConfig::from_json(j), ConfigError);
  }

  SUBCASE("all-zero loss weights are rejected") {
    nlohmann::json j = cfg.to_json();
    j["loss"]["lambda_action"] = 0.0;
    j["loss"]["lambda_adverb"] = 0.0;
    j["loss"]["lambda_reg"] = 0.0;
    CHECK_THROWS_AS(TrainConfig::from_json(j), ConfigError);
  }
}

TEST_CASE("bundled configs parse") {
  const fs::path repo = REGADA_REPO_DIR;
  CHECK_NOTHROW(load_train_config(repo / "configs" / "train_reference.json"));
  CHECK_NOTHROW(load_synth_config(repo / "configs" / "synth_reference.json"));
  for (const char* preset : {"howto100m", "adverbs_in_recipes", "vatex", "activitynet",
                             "msrvtt"}) {
    CHECK_NOTHROW(
        load_train_config(repo / "configs" / "presets" / (std::string(preset) + ".json")));
  }
  // The per-dataset values ride on the presets, not on code branches.
  TrainConfig howto =
      load_train_config(repo / "configs" / "presets" / "howto100m.json");
  CHECK(howto.text.gate_layers == 3);
  CHECK(howto.optim.lr == doctest::Approx(3e-5));
  CHECK(howto.loss.lambda_reg == doctest::Approx(1.5));
  TrainConfig recipes =
      load_train_config(repo / "configs" / "presets" / "adverbs_in_recipes.json");
  CHECK(recipes.text.gate_layers == 4);
  CHECK(recipes.text.res_layers == 3);
  CHECK(recipes.loss.lambda_adverb == doctest::Approx(1.5));
  CHECK(recipes.text.dropout == doctest::Approx(0.7));
}

TEST_CASE("training is bitwise deterministic") {
  Workspace ws;
  TrainPaths p1 = ws.paths;
  p1.out_dir = ws.dir / "run1";
  TrainPaths p2 = ws.paths;
  p2.out_dir = ws.dir / "run2";
  TrainOutcome a = train(ws.config, p1);
  TrainOutcome b = train(ws.config, p2);
  CHECK(slurp(a.checkpoint_path) == slurp(b.checkpoint_path));
  CHECK(slurp(a.report_path) == slurp(b.report_path));

  SUBCASE("a different seed diverges") {
    TrainConfig other = ws.config;
    other.seed = 1;
    TrainPaths p3 = ws.paths;
    p3.out_dir = ws.dir / "run3";
    TrainOutcome c = train(other, p3);
    CHECK(slurp(a.checkpoint_path) != slurp(c.checkpoint_path));
  }
}

TEST_CASE("checkpoints restore to the identical model") {
  Workspace ws;
  TrainOutcome outcome = train(ws.config, ws.paths);
  LoadedModel loaded = load_model(outcome.checkpoint_path);
  CHECK(loaded.epoch == ws.config.epochs);

  io::DatasetBundle bundle =
      io::load_dataset(ws.paths.manifest, ws.paths.vocab, ws.paths.embeddings);
  io::SplitFile split = io::load_split(ws.paths.split);
  std::vector<io::Sample> test = io::select_samples(bundle.samples, split.test);
  io::MetricValues fresh = evaluate_model(*loaded.model, bundle, test);

  const io::EpochEntry& last = outcome.report.epochs.back();
  REQUIRE(last.metrics.has_value());
  CHECK(fresh.map_w == last.metrics->map_w);
  CHECK(fresh.map_m == last.metrics->map_m);
  CHECK(*fresh.acc_a == *last.metrics->acc_a);

  SUBCASE("tampered config hash is rejected") {
    io::CheckpointData data = io::load_checkpoint(outcome.checkpoint_path);
    data.meta["config_hash"] = "0000000000000000";
    const fs::path tampered = ws.dir / "tampered.rgck";
    io::save_checkpoint(tampered, data);
    CHECK_THROWS_AS(load_model(tampered), ValidationError);
  }
}

TEST_CASE("training rejects broken inputs") {
  Workspace ws;

  SUBCASE("empty test split") {
    io::SplitFile split = io::load_split(ws.paths.split);
    split.test.clear();
    io::save_split(ws.dir / "empty_test.json", split);
    TrainPaths p = ws.paths;
    p.split = ws.dir / "empty_test.json";
    CHECK_THROWS_AS(train(ws.config, p), ValidationError);
  }

  SUBCASE("embedding width mismatch") {
    TrainConfig cfg = ws.config;
    cfg.text.d_theta = 9;
    cfg.video.d_theta = 9;
    CHECK_THROWS_AS(train(cfg, ws.paths), ValidationError);
  }

  SUBCASE("antonym negatives without an antonym map") {
    // Rewrite the vocabulary without antonyms.
    io::Vocabulary vocab = io::load_vocabulary(ws.paths.vocab);
    vocab.antonym.clear();
    io::save_vocabulary(ws.dir / "noant.json", vocab);
    TrainPaths p = ws.paths;
    p.vocab = ws.dir / "noant.json";
    CHECK_THROWS_AS(train(ws.config, p), ValidationError);
  }

  SUBCASE("random negatives work without antonyms and still report mAP") {
    io::Vocabulary vocab = io::load_vocabulary(ws.paths.vocab);
    vocab.antonym.clear();
    io::save_vocabulary(ws.dir / "noant.json", vocab);
    TrainPaths p = ws.paths;
    p.vocab = ws.dir / "noant.json";
    p.out_dir = ws.dir / "run_noant";
    TrainConfig cfg = ws.config;
    cfg.loss.adverb_negative_mode = AdverbNegativeMode::random_nonmatching;
    cfg.epochs = 2;
    cfg.eval_every = 2;
    TrainOutcome outcome = train(cfg, p);
    const io::EpochEntry& last = outcome.report.epochs.back();
    REQUIRE(last.metrics.has_value());
    CHECK_FALSE(last.metrics->acc_a.has_value());  // Acc_A unavailable
    CHECK(last.metrics->map_w >= 0.0);
  }
}

TEST_CASE("ablation grids mirror the documented axes") {
  TrainConfig base;
  base.text.d_theta = 8;
  base.video.d_theta = 8;
  base.text.d_dim = 10;
  base.video.d_dim = 10;

  SUBCASE("text-input axis has the four modality rows") {
    auto rows = ablation_grid(base, AblationAxis::text_input);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].config.text.main_modality == Modality::action);
    CHECK(rows[0].config.text.auxiliary_modality == Modality::adverb);
    CHECK(rows[1].config.text.main_modality == Modality::pair);
    CHECK(rows[3].config.text.main_modality == Modality::adverb);  // default row
    for (const auto& row : rows) {
      // Only the modality fields may differ from the base config.
      TrainConfig expect = base;
      expect.text.main_modality = row.config.text.main_modality;
      expect.text.auxiliary_modality = row.config.text.auxiliary_modality;
      CHECK(expect.canonical_dump() == row.config.canonical_dump());
    }
  }

  SUBCASE("losses axis has the five on/off rows") {
    auto rows = ablation_grid(base, AblationAxis::losses);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].config.loss.lambda_action == base.loss.lambda_action);
    CHECK(rows[0].config.loss.lambda_adverb == 0.0);
    CHECK(rows[0].config.loss.lambda_reg == 0.0);
    CHECK(rows[2].config.loss.lambda_reg == base.loss.lambda_reg);
    CHECK(rows[2].config.loss.lambda_action == 0.0);
    CHECK(rows[4].config.canonical_dump() == base.canonical_dump());  // full model
  }

  SUBCASE("gate axis has the four component rows") {
    auto rows = ablation_grid(base, AblationAxis::gate_components);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].config.text.share_gate_res_weights);
    CHECK_FALSE(rows[1].config.text.use_sigmoid);
    CHECK_FALSE(rows[2].config.text.use_residual);
    CHECK(rows[3].config.canonical_dump() == base.canonical_dump());  // default
    for (const auto& row : rows) {
      TrainConfig expect = base;
      expect.text.use_residual = row.config.text.use_residual;
      expect.text.use_sigmoid = row.config.text.use_sigmoid;
      expect.text.share_gate_res_weights = row.config.text.share_gate_res_weights;
      CHECK(expect.canonical_dump() == row.config.canonical_dump());
    }
  }

  SUBCASE("axis names parse") {
    CHECK(ablation_axis_from_name("losses") == AblationAxis::losses);
    CHECK_THROWS_AS(ablation_axis_from_name("nope"), ConfigError);
  }
}

TEST_CASE("report best blocks equal the series maxima") {
  Workspace ws;
  TrainOutcome outcome = train(ws.config, ws.paths);
  // Assertable from the JSON alone.
  nlohmann::ordered_json j = io::report_to_json(outcome.report);
  double best_w = -1.0;
  for (const auto& e : j.at("epochs")) {
    if (e.at("metrics").is_null()) continue;
    best_w = std::max(best_w, e.at("metrics").at("mAP_W").get<double>());
  }
  CHECK(j.at("best").at("mAP_W").at("value").get<double>() == best_w);
}
