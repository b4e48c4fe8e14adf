// Acceptance suite: numbered end-to-end checks with one pass/fail line
// each. Thresholds are pinned in code; the binary exits non-zero if any
// check fails.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <regada/config.hpp>
#include <regada/eval.hpp>
#include <regada/gradcheck_suite.hpp>
#include <regada/split_gen.hpp>
#include <regada/synth.hpp>
#include <regada/train.hpp>

#include "msrvtt_fixture.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace regada;

namespace {

const fs::path kRepo = REGADA_REPO_DIR;
const std::string kCli = REGADA_CLI_PATH;

struct Gate {
  int failures = 0;
  int count = 0;

  void report(int number, const std::string& name, bool passed,
              const std::string& detail) {
    ++count;
    failures += passed ? 0 : 1;
    std::cout << (passed ? "[PASS] " : "[FAIL] ") << "criterion " << number << ": "
              << name << " — " << detail << "\n"
              << std::flush;
  }
};

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

int run_cli(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

struct TempTree {
  fs::path path;
  explicit TempTree(const char* tag) {
    path = fs::temp_directory_path() / (std::string("regada_acc_") + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempTree() { fs::remove_all(path); }
};

double best_map_w(const io::RunReport& report) {
  double best = -1.0;
  for (const auto& e : report.epochs) {
    if (e.metrics) best = std::max(best, e.metrics->map_w);
  }
  return best;
}

// ---------------------------------------------------------------------------

void criterion_1(Gate& gate) {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream log;
  GradCheckSuiteResult result = run_gradcheck_suite(log, 20);
  const double elapsed = seconds_since(start);
  double worst = 0.0;
  for (const auto& e : result.entries) worst = std::max(worst, e.max_rel_err);
  const bool ok = result.all_passed && elapsed < 60.0;
  std::ostringstream detail;
  detail << result.entries.size() << " checks, worst rel err " << worst << ", "
         << elapsed << " s";
  if (!result.all_passed) std::cout << log.str();
  gate.report(1, "gradient correctness (every op + full objective, 20 points, 1e-4)",
              ok, detail.str());
}

void criterion_2(Gate& gate) {
  Rng rng(77);
  double worst_text = 0.0, worst_attend = 0.0, worst_project = 0.0;

  for (int c = 0; c < 100; ++c) {
    TextEncoderConfig cfg;
    cfg.d_theta = 5;
    cfg.d_dim = 6;
    cfg.gate_layers = 1 + c % 2;
    cfg.res_layers = 1 + c % 2;
    cfg.dropout = 0.4;
    cfg.use_residual = c % 3 != 0;
    cfg.use_sigmoid = c % 4 != 0;
    cfg.share_gate_res_weights = c % 5 == 0 && cfg.use_residual;
    if (cfg.share_gate_res_weights) cfg.res_layers = cfg.gate_layers;
    TextEncoder enc(cfg, rng);
    // Warm the batch-norm running statistics.
    Rng scratch(1);
    for (int w = 0; w < 2; ++w) {
      Tensor tm = oracle::random_tensor({4, 5}, rng);
      Tensor ta = oracle::random_tensor({4, 5}, rng);
      (void)enc.compose(enc.project_main(tm), enc.project_aux(ta), Mode::train, scratch);
    }
    oracle::ParamMap params = oracle::snapshot(enc);
    Tensor tm = oracle::random_tensor({3, 5}, rng);
    Tensor ta = oracle::random_tensor({3, 5}, rng);
    Tensor out = enc.compose(enc.project_main(tm), enc.project_aux(ta), Mode::eval, scratch);
    for (std::size_t row = 0; row < 3; ++row) {
      oracle::Vec main_row(tm.values().begin() + row * 5, tm.values().begin() + (row + 1) * 5);
      oracle::Vec aux_row(ta.values().begin() + row * 5, ta.values().begin() + (row + 1) * 5);
      oracle::Vec expect = oracle::text_compose(params, cfg, main_row, aux_row);
      for (std::size_t j = 0; j < 6; ++j) {
        worst_text = std::max(worst_text, std::fabs(out.at(row, j) - expect[j]));
      }
    }
  }

  for (int c = 0; c < 100; ++c) {
    VideoEncoderConfig cfg;
    cfg.d_x = 7;
    cfg.d_theta = 5;
    cfg.d_dim = 6;
    cfg.heads = 1 + c % 3;
    cfg.d_head = 3;
    cfg.proj_layers = 1 + c % 2;
    VideoEncoder enc(cfg, rng);
    oracle::ParamMap params = oracle::snapshot(enc);
    Rng scratch(1);
    const std::size_t t = 2 + c % 5;
    Tensor x = oracle::random_tensor({t, 7}, rng);
    Tensor theta = oracle::random_tensor({1, 5}, rng);
    oracle::Mat features;
    for (std::size_t i = 0; i < t; ++i) {
      features.emplace_back(x.values().begin() + i * 7, x.values().begin() + (i + 1) * 7);
    }
    oracle::Vec theta_row(theta.values().begin(), theta.values().end());

    Tensor attended = enc.attend(x, theta, Mode::eval, scratch);
    oracle::Vec expect_attn = oracle::video_attend(params, cfg, features, theta_row);
    for (std::size_t j = 0; j < 6; ++j) {
      worst_attend = std::max(worst_attend, std::fabs(attended.at(0, j) - expect_attn[j]));
    }
    Tensor projected = enc.project(attended, Mode::eval, scratch);
    oracle::Vec expect_proj = oracle::video_project(params, cfg, expect_attn);
    for (std::size_t j = 0; j < 6; ++j) {
      worst_project =
          std::max(worst_project, std::fabs(projected.at(0, j) - expect_proj[j]));
    }
  }

  const bool ok = worst_text <= 1e-12 && worst_attend <= 1e-12 && worst_project <= 1e-12;
  std::ostringstream detail;
  detail << "100 cases each; worst |diff|: compose " << worst_text << ", attention "
         << worst_attend << ", projection " << worst_project;
  gate.report(2, "straight-line oracle equivalence (eval mode, 1e-12)", ok, detail.str());
}

void criterion_3(Gate& gate) {
  Rng rng(99);
  double worst_ap = 0.0, worst_map = 0.0, worst_acc = 0.0;

  for (int it = 0; it < 100; ++it) {
    std::vector<bool> rel(1 + rng.uniform_index(25));
    bool any = false;
    for (std::size_t i = 0; i < rel.size(); ++i) {
      rel[i] = rng.uniform() < 0.35;
      any = any || rel[i];
    }
    if (!any) rel[rng.uniform_index(rel.size())] = true;
    worst_ap = std::max(worst_ap, std::fabs(average_precision(rel) -
                                            oracle::average_precision(rel)));
  }

  for (int it = 0; it < 100; ++it) {
    const std::size_t n_adverbs = 2 + 2 * rng.uniform_index(3);  // 2/4/6
    const std::size_t n_actions = 1 + rng.uniform_index(3);
    const std::size_t n = 5 + rng.uniform_index(26);  // <= 30 videos
    io::Vocabulary vocab;
    for (std::size_t v = 0; v < n_adverbs; ++v)
      vocab.adverbs.push_back("a" + std::to_string(v));
    for (std::size_t a = 0; a < n_actions; ++a)
      vocab.actions.push_back("x" + std::to_string(a));
    vocab.antonym.resize(n_adverbs);
    for (std::size_t v = 0; v < n_adverbs; v += 2) {
      vocab.antonym[v] = v + 1;
      vocab.antonym[v + 1] = v;
    }
    std::vector<io::Sample> test(n);
    for (std::size_t i = 0; i < n; ++i) {
      test[i].video_id = "v" + std::to_string(i);
      test[i].adverb = rng.uniform_index(n_adverbs);
      test[i].action = rng.uniform_index(n_actions);
    }
    ScoreMatrix scores;
    scores.n_samples = n;
    scores.n_adverbs = n_adverbs;
    scores.values.resize(n * n_adverbs);
    for (double& x : scores.values) x = rng.uniform(-1, 1);

    io::MetricValues got = compute_metrics(test, vocab, scores);
    std::vector<oracle::Vec> rows;
    for (std::size_t i = 0; i < n; ++i) {
      rows.emplace_back(scores.values.begin() + i * n_adverbs,
                        scores.values.begin() + (i + 1) * n_adverbs);
    }
    oracle::MetricOracleResult expect = oracle::metrics(test, vocab, rows);
    worst_map = std::max({worst_map, std::fabs(got.map_m - expect.map_m),
                          std::fabs(got.map_w - expect.map_w)});
    worst_acc = std::max(worst_acc, std::fabs(*got.acc_a - expect.acc_a));
  }

  const bool ok = worst_ap <= 1e-12 && worst_map <= 1e-12 && worst_acc <= 1e-12;
  std::ostringstream detail;
  detail << "100 instances each; worst |diff|: AP " << worst_ap << ", mAP " << worst_map
         << ", Acc_A " << worst_acc;
  gate.report(3, "metric oracle equivalence (1e-12)", ok, detail.str());
}

// Tie-aware analytic expectation of the priors baseline's Acc_A on the
// reference generator: composition counts are 1 + multinomial, a pair ties
// with probability sum_m P(Bin(n_extra, 2/C) = m) * P(Bin(m, 1/2) = m/2),
// and a tie scores wrong for both members, so E = (1 - p_tie) / 2 under
// near-uniform test weights.
double priors_accuracy_expectation(const SynthConfig& cfg) {
  const std::size_t comps = cfg.n_adverbs * cfg.n_actions;
  const std::size_t extra = cfg.n_train > comps ? cfg.n_train - comps : 0;
  const double p = 2.0 / static_cast<double>(comps);
  const double log_p = std::log(p), log_q = std::log1p(-p);
  auto log_choose = [](double n, double k) {
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
  };
  double p_tie = 0.0;
  const double n = static_cast<double>(extra);
  for (std::size_t m = 0; m <= extra; m += 2) {
    const double dm = static_cast<double>(m);
    const double log_pm = log_choose(n, dm) + dm * log_p + (n - dm) * log_q;
    const double log_tie_given_m =
        log_choose(dm, dm / 2.0) - dm * std::log(2.0);
    p_tie += std::exp(log_pm + log_tie_given_m);
    if (m > 400 && log_pm < -40.0) break;  // negligible tail
  }
  return 0.5 * (1.0 - p_tie);
}

void criterion_4(Gate& gate, const fs::path& data_dir) {
  const auto start = std::chrono::steady_clock::now();

  SynthConfig synth_cfg = load_synth_config(kRepo / "configs" / "synth_reference.json");
  // Threshold validation: the task must be solvable before the model is
  // held to it.
  SynthDataset data = generate_synth(synth_cfg);
  const double nn_acc = nearest_neighbor_antonym_accuracy(data);

  TrainConfig config = load_train_config(kRepo / "configs" / "train_reference.json");
  TrainPaths paths;
  paths.manifest = data_dir / "manifest.jsonl";
  paths.vocab = data_dir / "vocab.json";
  paths.embeddings = data_dir / "embeddings.rgdt";
  paths.split = data_dir / "split.json";
  paths.out_dir = data_dir / "reference_run";
  TrainOutcome outcome = train(config, paths);

  double best_acc = -1.0, best_map_m = -1.0;
  for (const auto& e : outcome.report.epochs) {
    if (!e.metrics) continue;
    best_map_m = std::max(best_map_m, e.metrics->map_m);
    if (e.metrics->acc_a) best_acc = std::max(best_acc, *e.metrics->acc_a);
  }

  // Priors baseline against its analytic expectation.
  io::DatasetBundle bundle =
      io::load_dataset(paths.manifest, paths.vocab, paths.embeddings);
  io::SplitFile split = io::load_split(paths.split);
  std::vector<io::Sample> train_set = io::select_samples(bundle.samples, split.train);
  std::vector<io::Sample> test_set = io::select_samples(bundle.samples, split.test);
  io::MetricValues priors = compute_metrics(
      test_set, bundle.vocab, priors_scores(train_set, test_set, bundle.vocab));
  const double expect = priors_accuracy_expectation(synth_cfg);
  const double priors_gap = std::fabs(*priors.acc_a - expect);

  const double elapsed = seconds_since(start);
  const bool ok = nn_acc >= 0.98 && best_acc >= 0.90 && best_map_m >= 0.50 &&
                  priors_gap <= 0.05 && elapsed < 600.0;
  std::ostringstream detail;
  detail << "NN oracle " << nn_acc << " (>=0.98), best Acc_A " << best_acc
         << " (>=0.90), best mAP_M " << best_map_m << " (>=0.50), priors Acc_A "
         << *priors.acc_a << " vs analytic " << expect << " (+/-0.05), " << elapsed
         << " s (<600)";
  gate.report(4, "learnability on the reference synthetic dataset", ok, detail.str());
}

void criterion_5(Gate& gate, const fs::path& data_dir) {
  TrainConfig base = load_train_config(kRepo / "configs" / "train_reference.json");
  base.epochs = 80;  // shared budget across the three arms

  TrainPaths paths;
  paths.manifest = data_dir / "manifest.jsonl";
  paths.vocab = data_dir / "vocab.json";
  paths.embeddings = data_dir / "embeddings.rgdt";
  paths.split = data_dir / "split.json";

  auto run_arm = [&](const char* tag, double la, double lv, double lr) {
    TrainConfig cfg = base;
    cfg.loss.lambda_action = la;
    cfg.loss.lambda_adverb = lv;
    cfg.loss.lambda_reg = lr;
    TrainPaths p = paths;
    p.out_dir = data_dir / (std::string("ablation_") + tag);
    return best_map_w(train(cfg, p).report);
  };

  const double full = run_arm("full", base.loss.lambda_action, base.loss.lambda_adverb,
                              base.loss.lambda_reg);
  const double no_reg = run_arm("no_reg", base.loss.lambda_action,
                                base.loss.lambda_adverb, 0.0);
  const double no_triplets = run_arm("no_triplets", 0.0, 0.0, base.loss.lambda_reg);

  const bool ok = full > no_reg && full > no_triplets;
  std::ostringstream detail;
  detail << "best mAP_W: full " << full << " > no-regression " << no_reg
         << " and > triplets-removed " << no_triplets;
  gate.report(5, "loss ablation directions (mAP_W ordering)", ok, detail.str());
}

void criterion_6(Gate& gate) {
  std::size_t passed_runs = 0;
  const std::size_t total_runs = 200;
  std::string first_failure;

  for (std::size_t run = 0; run < total_runs; ++run) {
    // A randomized feasible corpus: every antonym pair and every action
    // must reach at least two units.
    Rng corpus_rng(10000 + run);
    io::Vocabulary vocab;
    const std::size_t n_adverbs = 4 + 2 * corpus_rng.uniform_index(3);  // 4/6/8
    const std::size_t n_actions = 4 + corpus_rng.uniform_index(8);      // 4..11
    for (std::size_t v = 0; v < n_adverbs; ++v)
      vocab.adverbs.push_back("a" + std::to_string(v));
    for (std::size_t a = 0; a < n_actions; ++a)
      vocab.actions.push_back("x" + std::to_string(a));
    vocab.antonym.resize(n_adverbs);
    for (std::size_t v = 0; v < n_adverbs; v += 2) {
      vocab.antonym[v] = v + 1;
      vocab.antonym[v + 1] = v;
    }
    std::vector<io::Sample> samples;
    auto add_unit = [&](std::size_t pair, std::size_t action, bool both_members) {
      const std::size_t count =
          both_members ? 2 + corpus_rng.uniform_index(3) : 1 + corpus_rng.uniform_index(4);
      for (std::size_t k = 0; k < count; ++k) {
        io::Sample s;
        s.video_id = "v" + std::to_string(samples.size());
        // Required units start with one sample of each pair member so the
        // corpus stays feasible at adverb granularity.
        s.adverb = 2 * pair + (both_members && k < 2 ? k : corpus_rng.uniform_index(2));
        s.action = action;
        samples.push_back(std::move(s));
      }
    };
    for (std::size_t pair = 0; pair < n_adverbs / 2; ++pair) {
      for (std::size_t action = 0; action < n_actions; ++action) {
        // Guarantee two both-member units per pair and per action, drop the
        // rest at random to vary the shape.
        const bool required = action < 2 || pair < 2;
        if (required) {
          add_unit(pair, action, true);
        } else if (corpus_rng.uniform() < 0.6) {
          add_unit(pair, action, false);
        }
      }
    }

    try {
      SplitResult result = generate_split(samples, vocab, run);
      SplitCheck check = validate_split(result.split, samples, vocab);
      if (check.ok()) {
        ++passed_runs;
      } else if (first_failure.empty()) {
        first_failure = "seed " + std::to_string(run) + ": " +
                        (check.failures.empty() ? "unknown" : check.failures.front());
      }
    } catch (const Error& e) {
      if (first_failure.empty()) {
        first_failure = "seed " + std::to_string(run) + ": " + e.what();
      }
    }
  }

  // Infeasible corpora produce the documented error.
  bool infeasible_ok = false;
  {
    // A single action: no antonym pair can reach both sides.
    io::Vocabulary vocab;
    vocab.adverbs = {"a0", "a1"};
    vocab.actions = {"x0"};
    vocab.antonym = {1, 0};
    std::vector<io::Sample> samples;
    for (std::size_t k = 0; k < 4; ++k) {
      io::Sample s;
      s.video_id = "v" + std::to_string(k);
      s.action = 0;
      s.adverb = k % 2;
      samples.push_back(std::move(s));
    }
    try {
      generate_split(samples, vocab, 0);
    } catch (const ValidationError& e) {
      infeasible_ok = std::string(e.what()).find("infeasible") != std::string::npos;
    }
  }

  const bool ok = passed_runs == total_runs && infeasible_ok;
  std::ostringstream detail;
  detail << passed_runs << "/" << total_runs << " seeded runs satisfy all constraints"
         << (infeasible_ok ? "; infeasible corpus raises the documented error"
                           : "; infeasible-corpus error MISSING");
  if (!first_failure.empty()) detail << "; first failure: " << first_failure;
  gate.report(6, "split protocol over randomized corpora", ok, detail.str());
}

void criterion_7(Gate& gate) {
  TempTree tree("determinism");

  // Small dataset + two identical training runs.
  SynthConfig synth_cfg;
  synth_cfg.n_adverbs = 4;
  synth_cfg.n_actions = 5;
  synth_cfg.n_train = 60;
  synth_cfg.n_test = 30;
  synth_cfg.d_theta = 8;
  synth_cfg.d_x = 12;
  synth_cfg.t_min = 2;
  synth_cfg.t_max = 3;
  synth_cfg.noise_sigma = 0.1;
  synth_cfg.distractors = 1;
  synth_cfg.seed = 11;
  SynthDataset data = generate_synth(synth_cfg);
  write_synth_dataset(data, tree.path / "data");

  TrainConfig config;
  config.seed = 5;
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
  config.epochs = 3;
  config.eval_every = 3;

  TrainPaths paths;
  paths.manifest = tree.path / "data" / "manifest.jsonl";
  paths.vocab = tree.path / "data" / "vocab.json";
  paths.embeddings = tree.path / "data" / "embeddings.rgdt";
  paths.split = tree.path / "data" / "split.json";

  paths.out_dir = tree.path / "run1";
  TrainOutcome a = train(config, paths);
  paths.out_dir = tree.path / "run2";
  TrainOutcome b = train(config, paths);
  const bool checkpoints_equal = slurp(a.checkpoint_path) == slurp(b.checkpoint_path);
  const bool reports_equal = slurp(a.report_path) == slurp(b.report_path);

  // Split generation over the CLI, twice with the same seed.
  const std::string manifest = (tree.path / "data" / "manifest.jsonl").string();
  const std::string vocab = (tree.path / "data" / "vocab.json").string();
  const bool sg1 = run_cli("splitgen --manifest " + manifest + " --vocab " + vocab +
                           " --seed 9 --out " + (tree.path / "sg1").string()) == 0;
  const bool sg2 = run_cli("splitgen --manifest " + manifest + " --vocab " + vocab +
                           " --seed 9 --out " + (tree.path / "sg2").string()) == 0;
  const bool splits_equal =
      sg1 && sg2 &&
      slurp(tree.path / "sg1" / "split.json") == slurp(tree.path / "sg2" / "split.json");

  const bool ok = checkpoints_equal && reports_equal && splits_equal;
  std::ostringstream detail;
  detail << "checkpoints " << (checkpoints_equal ? "identical" : "DIFFER") << ", reports "
         << (reports_equal ? "identical" : "DIFFER") << ", split files "
         << (splits_equal ? "identical" : "DIFFER");
  gate.report(7, "bitwise determinism under a fixed seed", ok, detail.str());
}

void criterion_8(Gate& gate) {
  TempTree tree("msrvtt");
  fixture::MsrVttPaths paths;
  std::string source;
  if (const char* env = std::getenv("REGADA_MSRVTT_DIR")) {
    const fs::path dir = env;
    paths.manifest = dir / "manifest.jsonl";
    paths.vocab = dir / "vocab.json";
    paths.embeddings = dir / "embeddings.rgdt";
    paths.split = dir / "split.json";
    source = "user-supplied data from REGADA_MSRVTT_DIR";
  } else {
    paths = fixture::build_msrvtt_shaped_corpus(tree.path / "data");
    source = "synthetic stand-in corpus (set REGADA_MSRVTT_DIR for real data)";
  }

  // The stats validator must reproduce the published split sizes.
  io::Vocabulary vocab = io::load_vocabulary(paths.vocab);
  std::vector<io::Sample> samples = io::load_manifest(paths.manifest, vocab);
  io::SplitFile split = io::load_split(paths.split);
  SplitCheck check = validate_split(split, samples, vocab);
  const bool stats_ok = check.ok() && check.stats.train_samples == 987 &&
                        check.stats.test_samples == 454 &&
                        check.stats.train_pairs == 225 && check.stats.test_pairs == 225;

  // train + eval complete over the CLI on the documented formats.
  TrainConfig config;
  config.text.d_theta = 512;
  config.video.d_theta = 512;
  config.video.d_x = 1024;
  config.text.d_dim = 64;
  config.video.d_dim = 64;
  config.text.gate_layers = 1;
  config.text.res_layers = 1;
  config.text.dropout = 0.2;
  config.video.heads = 2;
  config.video.d_head = 16;
  config.video.proj_layers = 1;
  config.video.proj_dropout = 0.1;
  config.optim.lr = 1e-4;
  config.batch_size = 256;
  config.epochs = 2;
  config.eval_every = 2;
  {
    std::ofstream os(tree.path / "config.json");
    os << config.to_json().dump();
  }
  const std::string common = " --manifest " + paths.manifest.string() + " --vocab " +
                             paths.vocab.string() + " --embeddings " +
                             paths.embeddings.string() + " --split " +
                             paths.split.string();
  const bool train_ok = run_cli("train --config " + (tree.path / "config.json").string() +
                                common + " --out " + (tree.path / "run").string()) == 0;
  const bool eval_ok =
      train_ok &&
      run_cli("eval --checkpoint " + (tree.path / "run" / "checkpoint.rgck").string() +
              common + " --out " + (tree.path / "run" / "eval.json").string()) == 0;

  const bool ok = stats_ok && train_ok && eval_ok;
  std::ostringstream detail;
  detail << source << "; stats 987/454 samples + 225/225 pairs "
         << (stats_ok ? "reproduced" : "NOT reproduced") << " (got "
         << check.stats.train_samples << "/" << check.stats.test_samples << ", "
         << check.stats.train_pairs << "/" << check.stats.test_pairs << " pairs, "
         << check.stats.unlabelled_samples << "/" << check.stats.unlabelled_pairs
         << " unlabelled); train " << (train_ok ? "ok" : "FAILED") << ", eval "
         << (eval_ok ? "ok" : "FAILED");
  gate.report(8, "real-data pathway (MSR-VTT-shaped annotations)", ok, detail.str());
}

}  // namespace

int main() {
  std::cout << "regada acceptance suite\n";
  Gate gate;

  TempTree reference("reference");
  {
    // The reference dataset is produced once over the CLI and reused by
    // criteria 4 and 5.
    const int rc = run_cli("synth --config " +
                           (kRepo / "configs" / "synth_reference.json").string() +
                           " --out " + (reference.path).string());
    if (rc != 0) {
      std::cout << "[FAIL] setup: could not generate the reference dataset\n";
      return 1;
    }
  }

  criterion_1(gate);
  criterion_2(gate);
  criterion_3(gate);
  criterion_4(gate, reference.path);
  criterion_5(gate, reference.path);
  criterion_6(gate);
  criterion_7(gate);
  criterion_8(gate);

  std::cout << (gate.failures == 0 ? "all criteria passed" : "FAILURES present") << " ("
            << (gate.count - gate.failures) << "/" << gate.count << ")\n";
  return gate.failures == 0 ? 0 : 1;
}
