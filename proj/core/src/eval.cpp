#include "regada/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace regada {

RankedList rank_descending(std::span<const double> scores) {
  RankedList out;
  out.ids.resize(scores.size());
  std::iota(out.ids.begin(), out.ids.end(), 0);
  std::stable_sort(out.ids.begin(), out.ids.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  out.scores.reserve(scores.size());
  for (std::size_t id : out.ids) out.scores.push_back(scores[id]);
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("cosine_similarity: width mismatch " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return -1.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

RankedList rank_by_cosine(std::span<const double> query,
                          const std::vector<std::vector<double>>& rows) {
  std::vector<double> scores;
  scores.reserve(rows.size());
  for (const auto& row : rows) scores.push_back(cosine_similarity(query, row));
  return rank_descending(scores);
}

}  // namespace

RankedList video_to_adverb(std::span<const double> video_embedding,
                           const std::vector<std::vector<double>>& adverb_embeddings) {
  return rank_by_cosine(video_embedding, adverb_embeddings);
}

RankedList adverb_to_video(std::span<const double> text_embedding,
                           const std::vector<std::vector<double>>& video_embeddings) {
  return rank_by_cosine(text_embedding, video_embeddings);
}

double average_precision(const std::vector<bool>& relevance_by_rank) {
  std::size_t relevant = 0;
  double acc = 0.0;
  for (std::size_t k = 0; k < relevance_by_rank.size(); ++k) {
    if (!relevance_by_rank[k]) continue;
    ++relevant;
    acc += static_cast<double>(relevant) / static_cast<double>(k + 1);
  }
  if (relevant == 0) {
    throw ValidationError("average_precision: no relevant item in the ranking");
  }
  return acc / static_cast<double>(relevant);
}

io::MetricValues compute_metrics(const std::vector<io::Sample>& test,
                                 const io::Vocabulary& vocab,
                                 const ScoreMatrix& scores) {
  const std::size_t n = test.size();
  const std::size_t n_adverbs = vocab.adverbs.size();
  if (scores.n_samples != n || scores.n_adverbs != n_adverbs) {
    throw ShapeError("compute_metrics: score matrix is " +
                     std::to_string(scores.n_samples) + "x" +
                     std::to_string(scores.n_adverbs) + ", expected " +
                     std::to_string(n) + "x" + std::to_string(n_adverbs));
  }
  if (n == 0) throw ValidationError("compute_metrics: empty test set");

  io::MetricValues out;

  // Same-action video pools, in original test order.
  std::map<std::size_t, std::vector<std::size_t>> gamma;
  for (std::size_t i = 0; i < n; ++i) gamma[test[i].action].push_back(i);

  // One adverb-to-video query per distinct (adverb, action) composition.
  std::set<std::pair<std::size_t, std::size_t>> compositions;
  for (const io::Sample& s : test) compositions.insert({s.adverb, s.action});

  std::vector<std::vector<double>> ap_by_adverb(n_adverbs);
  for (const auto& [adverb, action] : compositions) {
    const std::vector<std::size_t>& pool = gamma.at(action);
    ++out.query_count;
    if (pool.empty()) {
      ++out.skipped_queries;
      continue;
    }
    std::vector<double> pool_scores;
    pool_scores.reserve(pool.size());
    for (std::size_t i : pool) pool_scores.push_back(scores.at(i, adverb));
    RankedList ranking = rank_descending(pool_scores);
    std::vector<bool> relevance(pool.size());
    bool any_relevant = false;
    for (std::size_t k = 0; k < ranking.ids.size(); ++k) {
      relevance[k] = test[pool[ranking.ids[k]]].adverb == adverb;
      any_relevant = any_relevant || relevance[k];
    }
    if (!any_relevant) {
      ++out.skipped_queries;
      continue;
    }
    ap_by_adverb[adverb].push_back(average_precision(relevance));
  }

  // Per-adverb mean AP, then the unweighted (mAP M) and support-weighted
  // (mAP W) aggregations of the same table.
  std::vector<std::size_t> support(n_adverbs, 0);
  for (const io::Sample& s : test) ++support[s.adverb];

  double macro = 0.0, weighted = 0.0;
  std::size_t adverbs_with_ap = 0;
  for (std::size_t v = 0; v < n_adverbs; ++v) {
    if (ap_by_adverb[v].empty()) {
      out.per_adverb_ap.emplace_back(vocab.adverbs[v], std::nullopt);
      continue;
    }
    double mean_ap = 0.0;
    for (double ap : ap_by_adverb[v]) mean_ap += ap;
    mean_ap /= static_cast<double>(ap_by_adverb[v].size());
    out.per_adverb_ap.emplace_back(vocab.adverbs[v], mean_ap);
    macro += mean_ap;
    weighted += mean_ap * static_cast<double>(support[v]) / static_cast<double>(n);
    ++adverbs_with_ap;
  }
  if (adverbs_with_ap == 0) {
    throw ValidationError("compute_metrics: every query was skipped");
  }
  out.map_m = macro / static_cast<double>(adverbs_with_ap);
  out.map_w = weighted;

  // Binary antonym accuracy; exact ties count as wrong.
  if (vocab.has_antonyms()) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t v = test[i].adverb;
      const std::size_t vbar = vocab.antonym_of(v);
      if (scores.at(i, v) > scores.at(i, vbar)) ++correct;
    }
    out.acc_a = static_cast<double>(correct) / static_cast<double>(n);
  }
  return out;
}

ScoreMatrix model_scores(TextEncoder& text, VideoEncoder& video,
                         const std::vector<io::Sample>& test,
                         const io::Vocabulary& vocab, const io::EmbeddingTable& table,
                         io::FeatureStore& features) {
  ScoreMatrix scores;
  scores.n_samples = test.size();
  scores.n_adverbs = vocab.adverbs.size();
  scores.values.assign(scores.n_samples * scores.n_adverbs, 0.0);

  // Text embeddings per action actually present, one V x d_dim block each.
  std::map<std::size_t, std::vector<std::vector<double>>> text_rows;
  for (const io::Sample& s : test) {
    if (text_rows.count(s.action)) continue;
    Tensor block = text.embed_all_adverbs(s.action, vocab, table);
    std::vector<std::vector<double>> rows;
    for (std::size_t v = 0; v < scores.n_adverbs; ++v) {
      const double* row = block.values().data() + v * block.cols();
      rows.emplace_back(row, row + block.cols());
    }
    text_rows.emplace(s.action, std::move(rows));
  }

  Rng unused(0);  // eval mode draws nothing
  for (std::size_t i = 0; i < test.size(); ++i) {
    const io::Sample& s = test[i];
    const io::FeatureSequence& seq = features.get(s.feature_ref);
    Tensor feats({seq.segments, seq.width}, seq.data);
    Tensor theta_a({1, table.dim}, table.action_vecs.at(s.action));
    Tensor o_video = video.encode(feats, theta_a, Mode::eval, unused);
    const auto& rows = text_rows.at(s.action);
    for (std::size_t v = 0; v < scores.n_adverbs; ++v) {
      scores.values[i * scores.n_adverbs + v] =
          cosine_similarity(o_video.values(), rows[v]);
    }
  }
  return scores;
}

ScoreMatrix priors_scores(const std::vector<io::Sample>& train,
                          const std::vector<io::Sample>& test,
                          const io::Vocabulary& vocab) {
  const std::size_t n_adverbs = vocab.adverbs.size();
  const std::size_t n_actions = vocab.actions.size();
  std::vector<std::size_t> pair_count(n_adverbs * n_actions, 0);
  std::vector<std::size_t> action_count(n_actions, 0);
  std::vector<std::size_t> adverb_count(n_adverbs, 0);
  for (const io::Sample& s : train) {
    ++pair_count[s.adverb * n_actions + s.action];
    ++action_count[s.action];
    ++adverb_count[s.adverb];
  }

  ScoreMatrix scores;
  scores.n_samples = test.size();
  scores.n_adverbs = n_adverbs;
  scores.values.assign(test.size() * n_adverbs, 0.0);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const std::size_t a = test[i].action;
    for (std::size_t v = 0; v < n_adverbs; ++v) {
      double score;
      if (action_count[a] > 0) {
        score = (static_cast<double>(pair_count[v * n_actions + a]) + 1.0) /
                (static_cast<double>(action_count[a]) + static_cast<double>(n_adverbs));
      } else {
        score = (static_cast<double>(adverb_count[v]) + 1.0) /
                (static_cast<double>(train.size()) + static_cast<double>(n_adverbs));
      }
      scores.values[i * n_adverbs + v] = score;
    }
  }
  return scores;
}

}  // namespace regada
