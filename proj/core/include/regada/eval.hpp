#pragma once

#include <span>
#include <vector>

#include "regada/io/dataset.hpp"
#include "regada/io/report.hpp"
#include "regada/text_encoder.hpp"
#include "regada/video_encoder.hpp"

namespace regada {

// Descending-score ordering with stable ties (equal scores keep ascending
// original index).
struct RankedList {
  std::vector<std::size_t> ids;
  std::vector<double> scores;  // aligned with ids, non-increasing
};

RankedList rank_descending(std::span<const double> scores);

// Cosine similarity; a zero-norm operand scores -1 so it ranks last rather
// than propagating NaN.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Ranks candidate adverb embeddings (rows) against one video embedding.
RankedList video_to_adverb(std::span<const double> video_embedding,
                           const std::vector<std::vector<double>>& adverb_embeddings);

// Ranks video embeddings (rows, in gamma-set order) against one text query.
RankedList adverb_to_video(std::span<const double> text_embedding,
                           const std::vector<std::vector<double>>& video_embeddings);

// AP = mean over relevant positions k of precision@k, with relevance given
// per ranked position. Throws ValidationError when nothing is relevant.
double average_precision(const std::vector<bool>& relevance_by_rank);

// scores[i*V + j]: how well adverb j describes test sample i, conditioned
// on sample i's ground-truth action. Both retrieval directions and all
// three metrics are computed from this matrix.
struct ScoreMatrix {
  std::size_t n_samples = 0;
  std::size_t n_adverbs = 0;
  std::vector<double> values;

  double at(std::size_t sample, std::size_t adverb) const {
    return values[sample * n_adverbs + adverb];
  }
};

// mAP W / mAP M over adverb-to-video queries (one per distinct composition
// in the test set, pooled over same-action videos) and binary antonym
// accuracy for video-to-adverb. Ties in Acc_A count as wrong.
io::MetricValues compute_metrics(const std::vector<io::Sample>& test,
                                 const io::Vocabulary& vocab, const ScoreMatrix& scores);

// Cosine scores from a trained model, eval mode.
ScoreMatrix model_scores(TextEncoder& text, VideoEncoder& video,
                         const std::vector<io::Sample>& test,
                         const io::Vocabulary& vocab, const io::EmbeddingTable& table,
                         io::FeatureStore& features);

// Training-free priors baseline: Laplace-smoothed train frequency of
// (adverb, action) pairs, falling back to the global adverb frequency for
// actions unseen in training.
ScoreMatrix priors_scores(const std::vector<io::Sample>& train,
                          const std::vector<io::Sample>& test,
                          const io::Vocabulary& vocab);

}  // namespace regada
