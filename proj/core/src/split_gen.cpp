#include "regada/split_gen.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "regada/rng.hpp"

namespace regada {

namespace {

using Composition = std::pair<std::size_t, std::size_t>;  // (adverb, action)

// Canonical adverb-pair id: the smaller index of {v, antonym(v)}, or v
// itself when the vocabulary has no antonym map.
std::size_t pair_id(const io::Vocabulary& vocab, std::size_t adverb) {
  if (!vocab.has_antonyms()) return adverb;
  return std::min(adverb, vocab.antonym_of(adverb));
}

struct Unit {
  std::size_t action = 0;
  std::size_t adverb_pair = 0;
  std::set<std::size_t> adverbs;  // members actually observed in the samples
  std::vector<std::size_t> sample_indices;  // manifest order
};

std::vector<Unit> build_units(const std::vector<io::Sample>& samples,
                              const io::Vocabulary& vocab) {
  std::map<std::pair<std::size_t, std::size_t>, Unit> by_key;  // (action, pair)
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const io::Sample& s = samples[i];
    const std::pair<std::size_t, std::size_t> key{s.action, pair_id(vocab, s.adverb)};
    Unit& u = by_key[key];
    u.action = key.first;
    u.adverb_pair = key.second;
    u.adverbs.insert(s.adverb);
    u.sample_indices.push_back(i);
  }
  std::vector<Unit> units;
  units.reserve(by_key.size());
  for (auto& [key, unit] : by_key) units.push_back(std::move(unit));
  return units;  // sorted by (action, pair) via map order
}

// Coverage is per adverb, not per antonym pair: a unit only carries the
// members that actually occur in its samples.
void check_feasible(const std::vector<Unit>& units, const io::Vocabulary& vocab) {
  std::map<std::size_t, std::size_t> units_per_action, units_per_adverb;
  for (const Unit& u : units) {
    ++units_per_action[u.action];
    for (std::size_t v : u.adverbs) ++units_per_adverb[v];
  }
  for (std::size_t a = 0; a < vocab.actions.size(); ++a) {
    if (units_per_action[a] < 2) {
      throw ValidationError("split generation infeasible: action '" + vocab.actions[a] +
                            "' occurs in " + std::to_string(units_per_action[a]) +
                            " unit(s); it cannot appear on both sides");
    }
  }
  for (std::size_t v = 0; v < vocab.adverbs.size(); ++v) {
    if (units_per_adverb[v] < 2) {
      throw ValidationError("split generation infeasible: adverb '" + vocab.adverbs[v] +
                            "' occurs in " + std::to_string(units_per_adverb[v]) +
                            " unit(s); it cannot appear on both sides");
    }
  }
}

// True when some action or adverb is missing from one side. On failure
// fills (is_action, label, missing_side) for the first uncovered label.
bool coverage_violation(const std::vector<Unit>& units, const std::vector<int>& side,
                        bool* is_action, std::size_t* label, int* missing_side) {
  std::map<std::size_t, std::array<int, 2>> action_sides, adverb_sides;
  for (std::size_t i = 0; i < units.size(); ++i) {
    ++action_sides[units[i].action][side[i]];
    for (std::size_t v : units[i].adverbs) ++adverb_sides[v][side[i]];
  }
  for (const auto& [action, counts] : action_sides) {
    for (int s = 0; s < 2; ++s) {
      if (counts[s] == 0) {
        *is_action = true;
        *label = action;
        *missing_side = s;
        return true;
      }
    }
  }
  for (const auto& [adverb, counts] : adverb_sides) {
    for (int s = 0; s < 2; ++s) {
      if (counts[s] == 0) {
        *is_action = false;
        *label = adverb;
        *missing_side = s;
        return true;
      }
    }
  }
  return false;
}

SplitStats stats_for(const io::SplitFile& split, const std::vector<io::Sample>& samples) {
  std::map<std::string, const io::Sample*> by_id;
  for (const io::Sample& s : samples) by_id[s.video_id] = &s;
  SplitStats stats;
  auto pairs_of = [&](const std::vector<std::string>& ids) {
    std::set<Composition> comps;
    for (const std::string& id : ids) {
      const io::Sample* s = by_id.at(id);
      comps.insert({s->adverb, s->action});
    }
    return comps.size();
  };
  stats.train_samples = split.train.size();
  stats.test_samples = split.test.size();
  stats.unlabelled_samples = split.unlabelled.size();
  stats.train_pairs = pairs_of(split.train);
  stats.test_pairs = pairs_of(split.test);
  stats.unlabelled_pairs = pairs_of(split.unlabelled);
  return stats;
}

constexpr std::size_t kMaxRepairIterations = 10000;
constexpr std::size_t kMaxAttempts = 64;

}  // namespace

SplitResult generate_split(const std::vector<io::Sample>& samples,
                           const io::Vocabulary& vocab, std::uint64_t seed) {
  if (samples.empty()) throw ValidationError("generate_split: no samples");
  std::vector<Unit> units = build_units(samples, vocab);
  check_feasible(units, vocab);

  Rng rng(seed);
  std::vector<int> side(units.size(), 0);
  bool assigned = false;
  for (std::size_t attempt = 0; attempt < kMaxAttempts && !assigned; ++attempt) {
    for (int& s : side) s = rng.uniform() < 0.5 ? 0 : 1;
    std::size_t iterations = 0;
    while (iterations < kMaxRepairIterations) {
      bool is_action = false;
      std::size_t label = 0;
      int missing_side = 0;
      if (!coverage_violation(units, side, &is_action, &label, &missing_side)) {
        assigned = true;
        break;
      }
      ++iterations;
      // Move the smallest unit carrying the uncovered label across.
      std::size_t best = units.size();
      for (std::size_t i = 0; i < units.size(); ++i) {
        if (side[i] == missing_side) continue;
        const bool carries = is_action ? units[i].action == label
                                       : units[i].adverbs.count(label) != 0;
        if (!carries) continue;
        if (best == units.size() ||
            units[i].sample_indices.size() < units[best].sample_indices.size()) {
          best = i;
        }
      }
      side[best] = missing_side;
    }
  }
  if (!assigned) {
    throw Error("generate_split: repair did not converge; input may be degenerate");
  }

  // Side 0 becomes the training set.
  io::SplitFile split;
  std::map<Composition, std::vector<std::size_t>> side1_comps;
  for (std::size_t i = 0; i < units.size(); ++i) {
    for (std::size_t si : units[i].sample_indices) {
      if (side[i] == 0) {
        split.train.push_back(samples[si].video_id);
      } else {
        side1_comps[{samples[si].adverb, samples[si].action}].push_back(si);
      }
    }
  }
  // Per composition on side two: ceil(n/2) test, floor(n/2) unlabelled,
  // membership shuffled by the seed.
  for (auto& [comp, indices] : side1_comps) {
    rng.shuffle(indices);
    const std::size_t n_test = (indices.size() + 1) / 2;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      (k < n_test ? split.test : split.unlabelled)
          .push_back(samples[indices[k]].video_id);
    }
  }
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.unlabelled.begin(), split.unlabelled.end());

  SplitResult result;
  result.stats = stats_for(split, samples);
  result.split = std::move(split);
  return result;
}

SplitCheck validate_split(const io::SplitFile& split,
                          const std::vector<io::Sample>& samples,
                          const io::Vocabulary& vocab) {
  SplitCheck check;
  std::map<std::string, const io::Sample*> by_id;
  for (const io::Sample& s : samples) by_id[s.video_id] = &s;

  check.ids_known = true;
  for (const auto* part : {&split.train, &split.test, &split.unlabelled}) {
    for (const std::string& id : *part) {
      if (!by_id.count(id)) {
        check.ids_known = false;
        check.failures.push_back("unknown video_id '" + id + "'");
        return check;
      }
    }
  }

  auto comps_of = [&](const std::vector<std::string>& ids) {
    std::set<Composition> comps;
    for (const std::string& id : ids) {
      const io::Sample* s = by_id.at(id);
      comps.insert({s->adverb, s->action});
    }
    return comps;
  };
  const std::set<Composition> train_comps = comps_of(split.train);
  std::set<Composition> eval_comps = comps_of(split.test);
  for (const Composition& c : comps_of(split.unlabelled)) eval_comps.insert(c);

  // (i) no composition crosses sides
  check.compositions_disjoint = true;
  for (const Composition& c : train_comps) {
    if (eval_comps.count(c)) {
      check.compositions_disjoint = false;
      check.failures.push_back("composition (" + vocab.adverbs[c.first] + ", " +
                               vocab.actions[c.second] + ") appears on both sides");
      break;
    }
  }

  // (ii)/(iii) every observed adverb and action appears on both sides
  auto labels_of = [&](const std::set<Composition>& comps) {
    std::pair<std::set<std::size_t>, std::set<std::size_t>> out;  // adverbs, actions
    for (const Composition& c : comps) {
      out.first.insert(c.first);
      out.second.insert(c.second);
    }
    return out;
  };
  const auto [train_adverbs, train_actions] = labels_of(train_comps);
  const auto [eval_adverbs, eval_actions] = labels_of(eval_comps);
  std::set<std::size_t> all_adverbs = train_adverbs, all_actions = train_actions;
  all_adverbs.insert(eval_adverbs.begin(), eval_adverbs.end());
  all_actions.insert(eval_actions.begin(), eval_actions.end());

  check.adverb_coverage = true;
  for (std::size_t v : all_adverbs) {
    if (!train_adverbs.count(v) || !eval_adverbs.count(v)) {
      check.adverb_coverage = false;
      check.failures.push_back("adverb '" + vocab.adverbs[v] +
                               "' does not appear on both sides");
      break;
    }
  }
  check.action_coverage = true;
  for (std::size_t a : all_actions) {
    if (!train_actions.count(a) || !eval_actions.count(a)) {
      check.action_coverage = false;
      check.failures.push_back("action '" + vocab.actions[a] +
                               "' does not appear on both sides");
      break;
    }
  }

  // (iv) a composition and its antonym-action partner stay on one side
  check.antonym_closure = true;
  if (vocab.has_antonyms()) {
    for (const Composition& c : train_comps) {
      const Composition partner{vocab.antonym_of(c.first), c.second};
      if (eval_comps.count(partner)) {
        check.antonym_closure = false;
        check.failures.push_back("composition (" + vocab.adverbs[c.first] + ", " +
                                 vocab.actions[c.second] +
                                 ") is split from its antonym partner");
        break;
      }
    }
  }

  // ceil/floor rule: per composition, |test| - |unlabelled| in {0, 1}
  check.half_partition = true;
  std::map<Composition, std::pair<std::size_t, std::size_t>> counts;
  for (const std::string& id : split.test) {
    const io::Sample* s = by_id.at(id);
    ++counts[{s->adverb, s->action}].first;
  }
  for (const std::string& id : split.unlabelled) {
    const io::Sample* s = by_id.at(id);
    ++counts[{s->adverb, s->action}].second;
  }
  for (const auto& [comp, c] : counts) {
    const auto [n_test, n_unlabelled] = c;
    if (n_test < n_unlabelled || n_test > n_unlabelled + 1) {
      check.half_partition = false;
      check.failures.push_back(
          "composition (" + vocab.adverbs[comp.first] + ", " +
          vocab.actions[comp.second] + ") splits " + std::to_string(n_test) + "/" +
          std::to_string(n_unlabelled) + " instead of ceil/floor halves");
      break;
    }
  }

  check.stats = stats_for(split, samples);
  return check;
}

}  // namespace regada
