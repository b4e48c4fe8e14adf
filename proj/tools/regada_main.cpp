#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <regada/config.hpp>
#include <regada/gradcheck_suite.hpp>
#include <regada/split_gen.hpp>
#include <regada/synth.hpp>
#include <regada/train.hpp>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "regada 1.0.0";

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw regada::Error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << "\n";
}

ordered_json metrics_json(const regada::io::MetricValues& m) {
  ordered_json j;
  j["mAP_W"] = m.map_w;
  j["mAP_M"] = m.map_m;
  j["Acc_A"] = m.acc_a.has_value() ? ordered_json(*m.acc_a) : ordered_json(nullptr);
  return j;
}

struct TrainArgs {
  std::string config;
  std::string manifest, vocab, embeddings, split, out;
  std::string ablation;
  // Optional command-line overrides of the config file.
  std::int64_t epochs = -1;
  std::int64_t batch_size = -1;
  std::int64_t eval_every = -1;
  double lr = -1.0;
  std::int64_t seed = -1;
};

int cmd_train(const TrainArgs& args) {
  regada::TrainConfig config = regada::load_train_config(args.config);
  if (args.epochs > 0) config.epochs = static_cast<std::size_t>(args.epochs);
  if (args.batch_size > 0) config.batch_size = static_cast<std::size_t>(args.batch_size);
  if (args.eval_every > 0) config.eval_every = static_cast<std::size_t>(args.eval_every);
  if (args.lr > 0.0) config.optim.lr = args.lr;
  if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
  config.validate();

  regada::TrainPaths paths;
  paths.manifest = args.manifest;
  paths.vocab = args.vocab;
  paths.embeddings = args.embeddings;
  paths.split = args.split;
  paths.out_dir = args.out;

  if (!args.ablation.empty()) {
    const regada::AblationAxis axis = regada::ablation_axis_from_name(args.ablation);
    fs::create_directories(paths.out_dir);
    ordered_json table = regada::run_ablation(config, axis, paths);
    const fs::path table_path = paths.out_dir / ("ablation_" + args.ablation + ".json");
    write_json(table_path, table);
    std::cout << "ablation table written to " << table_path.string() << "\n";
    return 0;
  }

  regada::TrainOutcome outcome = regada::train(config, paths);
  const ordered_json report = regada::io::report_to_json(outcome.report);
  std::cout << "trained " << config.epochs << " epochs\n"
            << "checkpoint: " << outcome.checkpoint_path.string() << "\n"
            << "report:     " << outcome.report_path.string() << "\n"
            << "best:       " << report.at("best").dump() << "\n";
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& manifest,
             const std::string& split_path, const std::string& vocab,
             const std::string& embeddings, const std::string& out) {
  regada::LoadedModel loaded = regada::load_model(checkpoint);
  regada::io::DatasetBundle bundle =
      regada::io::load_dataset(manifest, vocab, embeddings);
  regada::io::SplitFile split = regada::io::load_split(split_path);
  std::vector<regada::io::Sample> test =
      regada::io::select_samples(bundle.samples, split.test);
  if (test.empty()) throw regada::ValidationError("eval: empty test split");

  regada::io::MetricValues metrics =
      regada::evaluate_model(*loaded.model, bundle, test);

  regada::io::RunReport report;
  report.config = loaded.config.to_json();
  report.epochs.push_back({loaded.epoch, std::nullopt, metrics});
  regada::io::save_report(out, report);
  std::cout << "metrics: " << metrics_json(metrics).dump() << "\n"
            << "report written to " << out << "\n";
  return 0;
}

int cmd_baseline(const std::string& manifest, const std::string& split_path,
                 const std::string& vocab_path, const std::string& out) {
  regada::io::Vocabulary vocab = regada::io::load_vocabulary(vocab_path);
  std::vector<regada::io::Sample> samples = regada::io::load_manifest(manifest, vocab);
  regada::io::SplitFile split = regada::io::load_split(split_path);
  std::vector<regada::io::Sample> train = regada::io::select_samples(samples, split.train);
  std::vector<regada::io::Sample> test = regada::io::select_samples(samples, split.test);
  if (train.empty() || test.empty()) {
    throw regada::ValidationError("baseline: train and test splits must be non-empty");
  }
  regada::ScoreMatrix scores = regada::priors_scores(train, test, vocab);
  regada::io::MetricValues metrics = regada::compute_metrics(test, vocab, scores);

  regada::io::RunReport report;
  report.config["baseline"] = "priors";
  report.config["train_samples"] = train.size();
  report.config["test_samples"] = test.size();
  report.epochs.push_back({0, std::nullopt, metrics});
  regada::io::save_report(out, report);
  std::cout << "priors baseline: " << metrics_json(metrics).dump() << "\n"
            << "report written to " << out << "\n";
  return 0;
}

int cmd_splitgen(const std::string& manifest, const std::string& vocab_path,
                 std::uint64_t seed, const std::string& out) {
  regada::io::Vocabulary vocab = regada::io::load_vocabulary(vocab_path);
  std::vector<regada::io::Sample> samples = regada::io::load_manifest(manifest, vocab);
  regada::SplitResult result = regada::generate_split(samples, vocab, seed);

  const fs::path out_dir = out;
  fs::create_directories(out_dir);
  regada::io::save_split(out_dir / "split.json", result.split);

  regada::SplitCheck check = regada::validate_split(result.split, samples, vocab);
  ordered_json stats;
  stats["seed"] = seed;
  stats["train_samples"] = result.stats.train_samples;
  stats["test_samples"] = result.stats.test_samples;
  stats["unlabelled_samples"] = result.stats.unlabelled_samples;
  stats["train_pairs"] = result.stats.train_pairs;
  stats["test_pairs"] = result.stats.test_pairs;
  stats["unlabelled_pairs"] = result.stats.unlabelled_pairs;
  stats["constraints_ok"] = check.ok();
  write_json(out_dir / "split_stats.json", stats);
  std::cout << "split written to " << (out_dir / "split.json").string() << "\n"
            << stats.dump(2) << "\n";
  return check.ok() ? 0 : 1;
}

int cmd_synth(const std::string& config_path, const std::string& out) {
  regada::SynthConfig config = regada::load_synth_config(config_path);
  regada::SynthDataset data = regada::generate_synth(config);
  const fs::path out_dir = out;
  regada::write_synth_dataset(data, out_dir);
  write_json(out_dir / "synth_config.json", regada::synth_config_to_json(config));
  std::cout << "synthetic dataset written to " << out_dir.string() << " ("
            << data.train.size() << " train / " << data.test.size() << " test)\n";
  return 0;
}

int cmd_gradcheck(std::size_t points) {
  regada::GradCheckSuiteResult result = regada::run_gradcheck_suite(std::cout, points);
  std::cout << (result.all_passed ? "gradcheck: all checks passed\n"
                                  : "gradcheck: FAILURES detected\n");
  return result.all_passed ? 0 : 1;
}

int cmd_validate_split(const std::string& manifest, const std::string& vocab_path,
                       const std::string& split_path) {
  regada::io::Vocabulary vocab = regada::io::load_vocabulary(vocab_path);
  std::vector<regada::io::Sample> samples = regada::io::load_manifest(manifest, vocab);
  regada::io::SplitFile split = regada::io::load_split(split_path);
  regada::SplitCheck check = regada::validate_split(split, samples, vocab);
  ordered_json j;
  j["compositions_disjoint"] = check.compositions_disjoint;
  j["adverb_coverage"] = check.adverb_coverage;
  j["action_coverage"] = check.action_coverage;
  j["antonym_closure"] = check.antonym_closure;
  j["half_partition"] = check.half_partition;
  j["ids_known"] = check.ids_known;
  j["failures"] = check.failures;
  j["stats"]["train_samples"] = check.stats.train_samples;
  j["stats"]["test_samples"] = check.stats.test_samples;
  j["stats"]["unlabelled_samples"] = check.stats.unlabelled_samples;
  j["stats"]["train_pairs"] = check.stats.train_pairs;
  j["stats"]["test_pairs"] = check.stats.test_pairs;
  j["stats"]["unlabelled_pairs"] = check.stats.unlabelled_pairs;
  std::cout << j.dump(2) << "\n";
  return check.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regada: video-adverb retrieval with residually gated "
               "compositional adverb-action embeddings"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "train a model");
  train_cmd->add_option("--config", train_args.config, "training config JSON")->required();
  train_cmd->add_option("--manifest", train_args.manifest, "dataset manifest (JSON lines)")->required();
  train_cmd->add_option("--vocab", train_args.vocab, "vocabulary JSON")->required();
  train_cmd->add_option("--embeddings", train_args.embeddings, "word embedding dictionary (RGDT)")->required();
  train_cmd->add_option("--split", train_args.split, "train/test split JSON")->required();
  train_cmd->add_option("--out", train_args.out, "output directory")->required();
  train_cmd->add_option("--epochs", train_args.epochs, "override config epochs");
  train_cmd->add_option("--batch-size", train_args.batch_size, "override batch size");
  train_cmd->add_option("--eval-every", train_args.eval_every, "override eval cadence");
  train_cmd->add_option("--lr", train_args.lr, "override learning rate");
  train_cmd->add_option("--seed", train_args.seed, "override seed");
  train_cmd->add_option("--ablation", train_args.ablation,
                        "run an ablation axis: text-input | losses | gate-components");

  std::string eval_checkpoint, eval_manifest, eval_split, eval_vocab, eval_embeddings,
      eval_out;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "model checkpoint (RGCK)")->required();
  eval_cmd->add_option("--manifest", eval_manifest, "dataset manifest")->required();
  eval_cmd->add_option("--split", eval_split, "split JSON (test side is evaluated)")->required();
  eval_cmd->add_option("--vocab", eval_vocab, "vocabulary JSON")->required();
  eval_cmd->add_option("--embeddings", eval_embeddings, "word embedding dictionary")->required();
  eval_cmd->add_option("--out", eval_out, "metric report output path")->required();

  std::string base_manifest, base_split, base_vocab, base_out;
  CLI::App* baseline_cmd =
      app.add_subcommand("baseline", "training-free priors baseline");
  baseline_cmd->add_option("--manifest", base_manifest, "dataset manifest")->required();
  baseline_cmd->add_option("--split", base_split, "split JSON")->required();
  baseline_cmd->add_option("--vocab", base_vocab, "vocabulary JSON")->required();
  baseline_cmd->add_option("--out", base_out, "metric report output path")->required();

  std::string sg_manifest, sg_vocab, sg_out;
  std::uint64_t sg_seed = 0;
  CLI::App* splitgen_cmd =
      app.add_subcommand("splitgen", "generate an unseen-composition split");
  splitgen_cmd->add_option("--manifest", sg_manifest, "dataset manifest")->required();
  splitgen_cmd->add_option("--vocab", sg_vocab, "vocabulary JSON")->required();
  splitgen_cmd->add_option("--seed", sg_seed, "random seed")->required();
  splitgen_cmd->add_option("--out", sg_out, "output directory")->required();

  std::string sv_manifest, sv_vocab, sv_split;
  CLI::App* validate_cmd =
      app.add_subcommand("validate-split", "check an existing split against the protocol");
  validate_cmd->add_option("--manifest", sv_manifest, "dataset manifest")->required();
  validate_cmd->add_option("--vocab", sv_vocab, "vocabulary JSON")->required();
  validate_cmd->add_option("--split", sv_split, "split JSON to validate")->required();

  std::string synth_config, synth_out;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset");
  synth_cmd->add_option("--config", synth_config, "synth config JSON")->required();
  synth_cmd->add_option("--out", synth_out, "output directory")->required();

  std::size_t gc_points = 20;
  CLI::App* gradcheck_cmd =
      app.add_subcommand("gradcheck", "finite-difference verification of all gradients");
  gradcheck_cmd->add_option("--points", gc_points, "random points per check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // Usage problems exit 2; --help/--version exit 0.
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train_cmd) return cmd_train(train_args);
    if (*eval_cmd) {
      return cmd_eval(eval_checkpoint, eval_manifest, eval_split, eval_vocab,
                      eval_embeddings, eval_out);
    }
    if (*baseline_cmd) return cmd_baseline(base_manifest, base_split, base_vocab, base_out);
    if (*splitgen_cmd) return cmd_splitgen(sg_manifest, sg_vocab, sg_seed, sg_out);
    if (*validate_cmd) return cmd_validate_split(sv_manifest, sv_vocab, sv_split);
    if (*synth_cmd) return cmd_synth(synth_config, synth_out);
    if (*gradcheck_cmd) return cmd_gradcheck(gc_points);
  } catch (const regada::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
