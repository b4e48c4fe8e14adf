#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regada/io/dataset.hpp"

namespace regada {

struct SplitStats {
  std::size_t train_samples = 0;
  std::size_t test_samples = 0;
  std::size_t unlabelled_samples = 0;
  std::size_t train_pairs = 0;
  std::size_t test_pairs = 0;
  std::size_t unlabelled_pairs = 0;
};

struct SplitResult {
  io::SplitFile split;
  SplitStats stats;
};

// Unseen-composition split: adverb-action compositions are grouped into
// units of (action, antonym pair) so that a composition and its
// antonym-action partner always land on the same side. Units are assigned
// to the two sides at random (seeded) with repair moves until every adverb
// and action appears on both sides; side one becomes the training set and
// side two is divided per composition into ceil(n/2) test and floor(n/2)
// unlabelled samples. Infeasible inputs (a label that cannot be covered on
// both sides) raise ValidationError naming the label.
SplitResult generate_split(const std::vector<io::Sample>& samples,
                           const io::Vocabulary& vocab, std::uint64_t seed);

struct SplitCheck {
  bool compositions_disjoint = false;
  bool adverb_coverage = false;
  bool action_coverage = false;
  bool antonym_closure = false;
  bool half_partition = false;
  bool ids_known = false;
  std::vector<std::string> failures;
  SplitStats stats;

  bool ok() const {
    return compositions_disjoint && adverb_coverage && action_coverage &&
           antonym_closure && half_partition && ids_known;
  }
};

SplitCheck validate_split(const io::SplitFile& split,
                          const std::vector<io::Sample>& samples,
                          const io::Vocabulary& vocab);

}  // namespace regada
