#include "regada/io/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace regada::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json parse_json_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw FormatError(path.string() + ": write failed");
}

std::size_t index_of(const std::vector<std::string>& labels, const std::string& label,
                     const char* kind) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw ValidationError(std::string("unknown ") + kind + " '" + label + "'");
  }
  return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

std::size_t Vocabulary::adverb_index(const std::string& label) const {
  return index_of(adverbs, label, "adverb");
}

std::size_t Vocabulary::action_index(const std::string& label) const {
  return index_of(actions, label, "action");
}

std::size_t Vocabulary::antonym_of(std::size_t adverb_idx) const {
  if (!has_antonyms()) throw ValidationError("vocabulary has no antonym map");
  return antonym.at(adverb_idx);
}

const std::vector<double>& EmbeddingTable::pair_vec(std::size_t adverb,
                                                    std::size_t action) const {
  auto it = pair_vecs.find({adverb, action});
  if (it == pair_vecs.end()) {
    throw ValidationError("missing pair embedding for (adverb " + std::to_string(adverb) +
                          ", action " + std::to_string(action) + ")");
  }
  return it->second;
}

void write_feature_file(const std::filesystem::path& path, const FeatureSequence& seq) {
  if (seq.segments == 0 || seq.width == 0 ||
      seq.data.size() != seq.segments * seq.width) {
    throw ShapeError("feature sequence is inconsistent: T=" + std::to_string(seq.segments) +
                     " d_x=" + std::to_string(seq.width));
  }
  TensorRecord rec;
  rec.dtype = DType::f32;
  rec.shape = {seq.segments, seq.width};
  rec.values = seq.data;
  write_tensor_file(path, rec);
}

FeatureSequence read_feature_file(const std::filesystem::path& path) {
  TensorRecord rec = read_tensor_file(path);
  if (rec.shape.size() != 2) {
    throw FormatError(path.string() + ": feature file must hold a rank-2 tensor, got rank " +
                      std::to_string(rec.shape.size()));
  }
  FeatureSequence seq;
  seq.segments = rec.shape[0];
  seq.width = rec.shape[1];
  seq.data = std::move(rec.values);
  return seq;
}

const FeatureSequence& FeatureStore::get(const std::string& path) {
  auto it = cache_.find(path);
  if (it == cache_.end()) {
    FeatureSequence seq = read_feature_file(path);
    if (width_ == 0) {
      width_ = seq.width;
    } else if (seq.width != width_) {
      throw ValidationError(path + ": feature width " + std::to_string(seq.width) +
                            " differs from dataset width " + std::to_string(width_));
    }
    it = cache_.emplace(path, std::move(seq)).first;
  }
  return it->second;
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  if (!j.is_object() || !j.contains("adverbs") || !j.contains("actions")) {
    throw FormatError(path.string() + ": expected an object with 'adverbs' and 'actions'");
  }
  Vocabulary vocab;
  for (const auto& a : j.at("adverbs")) vocab.adverbs.push_back(a.get<std::string>());
  for (const auto& a : j.at("actions")) vocab.actions.push_back(a.get<std::string>());

  for (const auto* labels : {&vocab.adverbs, &vocab.actions}) {
    std::set<std::string> seen;
    for (const auto& l : *labels) {
      if (!seen.insert(l).second) {
        throw ValidationError(path.string() + ": duplicate label '" + l + "'");
      }
    }
  }
  if (vocab.adverbs.empty() || vocab.actions.empty()) {
    throw ValidationError(path.string() + ": adverb and action lists must be non-empty");
  }

  if (j.contains("antonyms") && !j.at("antonyms").empty()) {
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> map(vocab.adverbs.size(), kUnset);
    auto link = [&](std::size_t a, std::size_t b) {
      if (map[a] != kUnset && map[a] != b) {
        throw ValidationError(path.string() + ": antonym map is not an involution at '" +
                              vocab.adverbs[a] + "'");
      }
      map[a] = b;
    };
    for (const auto& [key, value] : j.at("antonyms").items()) {
      const std::size_t a = vocab.adverb_index(key);
      const std::size_t b = vocab.adverb_index(value.get<std::string>());
      if (a == b) {
        throw ValidationError(path.string() + ": adverb '" + key +
                              "' is its own antonym");
      }
      // Stored one-directional per pair; complete the involution here.
      link(a, b);
      link(b, a);
    }
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (map[i] == kUnset) {
        throw ValidationError(path.string() + ": adverb '" + vocab.adverbs[i] +
                              "' has no antonym");
      }
    }
    vocab.antonym = std::move(map);
  }
  return vocab;
}

void save_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab) {
  ordered_json j;
  j["adverbs"] = vocab.adverbs;
  j["actions"] = vocab.actions;
  ordered_json ant = ordered_json::object();
  if (vocab.has_antonyms()) {
    // Emit each pair once, keyed by its lower-index member.
    for (std::size_t i = 0; i < vocab.adverbs.size(); ++i) {
      if (i < vocab.antonym[i]) ant[vocab.adverbs[i]] = vocab.adverbs[vocab.antonym[i]];
    }
  }
  j["antonyms"] = ant;
  write_text_file(path, j.dump(2) + "\n");
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               const Vocabulary& vocab) {
  const NamedRecords entries = read_dict_file(path);
  std::map<std::string, const TensorRecord*> by_name;
  for (const auto& [name, rec] : entries) by_name[name] = &rec;

  EmbeddingTable table;
  auto take = [&](const std::string& name) -> std::vector<double> {
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw ValidationError(path.string() + ": missing embedding '" + name + "'");
    }
    const TensorRecord& rec = *it->second;
    if (rec.shape.size() != 1) {
      throw ValidationError(path.string() + ": embedding '" + name +
                            "' must be rank-1, got rank " +
                            std::to_string(rec.shape.size()));
    }
    if (table.dim == 0) table.dim = rec.shape[0];
    if (rec.shape[0] != table.dim) {
      throw ValidationError(path.string() + ": embedding '" + name + "' has width " +
                            std::to_string(rec.shape[0]) + ", expected " +
                            std::to_string(table.dim));
    }
    return rec.values;
  };

  for (const auto& label : vocab.adverbs)
    table.adverb_vecs.push_back(take("adverb:" + label));
  for (const auto& label : vocab.actions)
    table.action_vecs.push_back(take("action:" + label));
  for (std::size_t v = 0; v < vocab.adverbs.size(); ++v) {
    for (std::size_t a = 0; a < vocab.actions.size(); ++a) {
      const std::string name = "pair:" + vocab.adverbs[v] + "|" + vocab.actions[a];
      if (by_name.count(name)) table.pair_vecs[{v, a}] = take(name);
    }
  }
  return table;
}

void save_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                     const EmbeddingTable& table) {
  NamedRecords entries;
  auto push = [&](const std::string& name, const std::vector<double>& vec) {
    TensorRecord rec;
    rec.dtype = DType::f32;
    rec.shape = {vec.size()};
    rec.values = vec;
    entries.emplace_back(name, std::move(rec));
  };
  for (std::size_t i = 0; i < vocab.adverbs.size(); ++i)
    push("adverb:" + vocab.adverbs[i], table.adverb_vecs.at(i));
  for (std::size_t i = 0; i < vocab.actions.size(); ++i)
    push("action:" + vocab.actions[i], table.action_vecs.at(i));
  for (const auto& [key, vec] : table.pair_vecs) {
    push("pair:" + vocab.adverbs.at(key.first) + "|" + vocab.actions.at(key.second), vec);
  }
  write_dict_file(path, entries);
}

std::vector<Sample> load_manifest(const std::filesystem::path& path,
                                  const Vocabulary& vocab) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  const std::filesystem::path base = path.parent_path();
  std::vector<Sample> samples;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    for (const char* key : {"video_id", "feature", "action", "adverb"}) {
      if (!j.contains(key)) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": missing key '" + key + "'");
      }
    }
    Sample s;
    s.video_id = j.at("video_id").get<std::string>();
    if (!ids.insert(s.video_id).second) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": duplicate video_id '" + s.video_id + "'");
    }
    try {
      s.action = vocab.action_index(j.at("action").get<std::string>());
      s.adverb = vocab.adverb_index(j.at("adverb").get<std::string>());
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " +
                            e.what());
    }
    const std::filesystem::path feature = j.at("feature").get<std::string>();
    s.feature_ref = (feature.is_absolute() ? feature : base / feature).string();
    samples.push_back(std::move(s));
  }
  return samples;
}

void save_manifest(const std::filesystem::path& path, const Vocabulary& vocab,
                   const std::vector<Sample>& samples,
                   const std::filesystem::path& feature_base) {
  std::ostringstream os;
  for (const Sample& s : samples) {
    ordered_json j;
    j["video_id"] = s.video_id;
    std::filesystem::path feature = s.feature_ref;
    j["feature"] = feature.lexically_relative(feature_base).string();
    j["action"] = vocab.actions.at(s.action);
    j["adverb"] = vocab.adverbs.at(s.adverb);
    os << j.dump() << "\n";
  }
  write_text_file(path, os.str());
}

SplitFile load_split(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  SplitFile split;
  for (const auto& [key, out] :
       {std::pair<const char*, std::vector<std::string>*>{"train", &split.train},
        {"test", &split.test},
        {"unlabelled", &split.unlabelled}}) {
    if (!j.contains(key)) {
      throw FormatError(path.string() + ": missing key '" + std::string(key) + "'");
    }
    for (const auto& id : j.at(key)) out->push_back(id.get<std::string>());
  }
  std::set<std::string> seen;
  for (const auto* list : {&split.train, &split.test, &split.unlabelled}) {
    for (const auto& id : *list) {
      if (!seen.insert(id).second) {
        throw ValidationError(path.string() + ": video_id '" + id +
                              "' appears in more than one part");
      }
    }
  }
  return split;
}

void save_split(const std::filesystem::path& path, const SplitFile& split) {
  ordered_json j;
  j["train"] = split.train;
  j["test"] = split.test;
  j["unlabelled"] = split.unlabelled;
  write_text_file(path, j.dump(2) + "\n");
}

DatasetBundle load_dataset(const std::filesystem::path& manifest_path,
                           const std::filesystem::path& vocab_path,
                           const std::filesystem::path& embeddings_path) {
  DatasetBundle bundle;
  bundle.vocab = load_vocabulary(vocab_path);
  bundle.table = load_embeddings(embeddings_path, bundle.vocab);
  bundle.samples = load_manifest(manifest_path, bundle.vocab);
  for (const Sample& s : bundle.samples) {
    if (!std::filesystem::exists(s.feature_ref)) {
      throw ValidationError("sample '" + s.video_id + "': feature file not found: " +
                            s.feature_ref);
    }
  }
  return bundle;
}

std::vector<Sample> select_samples(const std::vector<Sample>& all,
                                   const std::vector<std::string>& ids) {
  std::map<std::string, const Sample*> by_id;
  for (const Sample& s : all) by_id[s.video_id] = &s;
  std::vector<Sample> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw ValidationError("split references unknown video_id '" + id + "'");
    }
    out.push_back(*it->second);
  }
  return out;
}

}  // namespace regada::io
