#include <doctest.h>

#include <cmath>

#include <regada/eval.hpp>

#include "oracles.hpp"

using namespace regada;

namespace {

io::Vocabulary make_vocab(std::size_t n_adverbs, std::size_t n_actions,
                          bool antonyms = true) {
  io::Vocabulary vocab;
  for (std::size_t v = 0; v < n_adverbs; ++v)
    vocab.adverbs.push_back("adv" + std::to_string(v));
  for (std::size_t a = 0; a < n_actions; ++a)
    vocab.actions.push_back("act" + std::to_string(a));
  if (antonyms && n_adverbs % 2 == 0) {
    vocab.antonym.resize(n_adverbs);
    for (std::size_t v = 0; v < n_adverbs; v += 2) {
      vocab.antonym[v] = v + 1;
      vocab.antonym[v + 1] = v;
    }
  }
  return vocab;
}

std::vector<io::Sample> random_test_set(std::size_t n, std::size_t n_adverbs,
                                        std::size_t n_actions, Rng& rng) {
  std::vector<io::Sample> test(n);
  for (std::size_t i = 0; i < n; ++i) {
    test[i].video_id = "v" + std::to_string(i);
    test[i].adverb = rng.uniform_index(n_adverbs);
    test[i].action = rng.uniform_index(n_actions);
  }
  return test;
}

ScoreMatrix random_scores(std::size_t n, std::size_t v, Rng& rng) {
  ScoreMatrix s;
  s.n_samples = n;
  s.n_adverbs = v;
  s.values.resize(n * v);
  for (double& x : s.values) x = rng.uniform(-1, 1);
  return s;
}

}  // namespace

TEST_CASE("ranking basics") {
  RankedList r = rank_descending(std::vector<double>{0.1, 0.9, 0.1, 0.5});
  CHECK(r.ids == std::vector<std::size_t>{1, 3, 0, 2});  // stable tie 0 before 2
  CHECK(r.scores[0] == 0.9);

  SUBCASE("all-equal scores keep the original order") {
    RankedList t = rank_descending(std::vector<double>{0.3, 0.3, 0.3});
    CHECK(t.ids == std::vector<std::size_t>{0, 1, 2});
  }
}

TEST_CASE("cosine similarity") {
  std::vector<double> a = {1, 0}, b = {0, 1}, z = {0, 0};
  CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
  CHECK(cosine_similarity(a, b) == doctest::Approx(0.0));
  CHECK(cosine_similarity(a, z) == -1.0);  // zero-norm ranks last
  CHECK_THROWS_AS(cosine_similarity(a, std::vector<double>{1.0}), ShapeError);

  SUBCASE("ranking is invariant to positive scaling") {
    Rng rng(3);
    for (int it = 0; it < 20; ++it) {
      std::vector<double> video(6), scaled(6);
      for (std::size_t i = 0; i < 6; ++i) video[i] = rng.uniform(-1, 1);
      const double c = rng.uniform(0.1, 10.0);
      for (std::size_t i = 0; i < 6; ++i) scaled[i] = c * video[i];
      std::vector<std::vector<double>> rows;
      for (int k = 0; k < 5; ++k) {
        std::vector<double> row(6);
        for (double& x : row) x = rng.uniform(-1, 1);
        rows.push_back(row);
      }
      CHECK(video_to_adverb(video, rows).ids == video_to_adverb(scaled, rows).ids);
    }
  }
}

TEST_CASE("video_to_adverb reference cases") {
  std::vector<double> video = {0.6, -0.2, 0.4};
  std::vector<std::vector<double>> rows = {video, {0.1, 0.9, -0.3}};
  RankedList r = video_to_adverb(video, rows);
  CHECK(r.ids[0] == 0);  // identical embedding ranks first

  std::vector<std::vector<double>> equal_rows = {video, video, video};
  RankedList ties = video_to_adverb(video, equal_rows);
  CHECK(ties.ids == std::vector<std::size_t>{0, 1, 2});

  SUBCASE("matches a brute-force cosine oracle") {
    Rng rng(5);
    for (int it = 0; it < 50; ++it) {
      std::vector<double> q(4);
      for (double& x : q) x = rng.uniform(-1, 1);
      std::vector<std::vector<double>> cand;
      for (int k = 0; k < 4; ++k) {
        std::vector<double> row(4);
        for (double& x : row) x = rng.uniform(-1, 1);
        cand.push_back(row);
      }
      RankedList got = video_to_adverb(q, cand);
      for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::fabs(got.scores[k] - oracle::cosine(q, cand[got.ids[k]])) <= 1e-12);
        if (k > 0) CHECK(got.scores[k - 1] >= got.scores[k]);
      }
    }
  }
}

TEST_CASE("adverb_to_video reference cases") {
  std::vector<double> query = {1.0, 0.0};
  SUBCASE("single-video pool ranks that video first") {
    RankedList r = adverb_to_video(query, {{0.3, 0.4}});
    CHECK(r.ids == std::vector<std::size_t>{0});
  }
  SUBCASE("a video equal to the query ranks first") {
    RankedList r = adverb_to_video(query, {{0.0, 1.0}, {1.0, 0.0}, {0.5, 0.5}});
    CHECK(r.ids[0] == 1);
  }
}

TEST_CASE("average precision") {
  CHECK(average_precision({true, true, false}) == doctest::Approx(1.0));
  CHECK(average_precision({false, true}) == doctest::Approx(0.5));
  CHECK(average_precision({true, false, true}) ==
        doctest::Approx((1.0 + 2.0 / 3.0) / 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(average_precision({false, false}), ValidationError);

  SUBCASE("matches the exhaustive prefix oracle on 100 random instances") {
    Rng rng(7);
    for (int it = 0; it < 100; ++it) {
      std::vector<bool> rel(1 + rng.uniform_index(20));
      bool any = false;
      for (std::size_t i = 0; i < rel.size(); ++i) {
        rel[i] = rng.uniform() < 0.4;
        any = any || rel[i];
      }
      if (!any) rel[rng.uniform_index(rel.size())] = true;
      CHECK(std::fabs(average_precision(rel) - oracle::average_precision(rel)) <= 1e-12);
    }
  }
}

TEST_CASE("metric aggregation reference cases") {
  SUBCASE("one adverb, one action, everything relevant") {
    io::Vocabulary vocab = make_vocab(1, 1, false);
    std::vector<io::Sample> test(3);
    for (std::size_t i = 0; i < 3; ++i) {
      test[i].video_id = "v" + std::to_string(i);
      test[i].adverb = 0;
      test[i].action = 0;
    }
    ScoreMatrix s;
    s.n_samples = 3;
    s.n_adverbs = 1;
    s.values = {0.2, 0.9, 0.5};
    io::MetricValues m = compute_metrics(test, vocab, s);
    CHECK(m.map_m == doctest::Approx(1.0));
    CHECK(m.map_w == doctest::Approx(1.0));
    CHECK_FALSE(m.acc_a.has_value());
  }

  SUBCASE("two adverbs with 3:1 support and APs 1 and 0-ish") {
    // Adverb 0: 3 test samples, ranked perfectly -> AP 1.0.
    // Adverb 1: 1 test sample ranked last of 4 -> AP 0.25.
    // mAP_M = (1.0 + 0.25)/2 = 0.625 ; mAP_W = 0.75*1.0 + 0.25*0.25 = 0.8125.
    io::Vocabulary vocab = make_vocab(2, 1, true);
    std::vector<io::Sample> test(4);
    for (std::size_t i = 0; i < 4; ++i) {
      test[i].video_id = "v" + std::to_string(i);
      test[i].action = 0;
      test[i].adverb = i < 3 ? 0 : 1;
    }
    ScoreMatrix s;
    s.n_samples = 4;
    s.n_adverbs = 2;
    s.values = {
        0.9, 0.9,   // v0: top for adverb0, high for adverb1
        0.8, 0.8,   // v1
        0.7, 0.7,   // v2
        0.1, 0.1,   // v3 (the adverb-1 sample) ranked last for both
    };
    io::MetricValues m = compute_metrics(test, vocab, s);
    CHECK(m.map_m == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(m.map_w == doctest::Approx(0.8125).epsilon(1e-12));

    // Hand-weighted mean with supports 3:1 and per-adverb APs (1.0, 0.0)
    // from the glossary example shape: with APs (1, 0) the weighted mean is
    // 0.75 and the macro mean 0.5.
    const double support_w = (3.0 / 4.0) * 1.0 + (1.0 / 4.0) * 0.0;
    CHECK(support_w == doctest::Approx(0.75));
    const double macro = (1.0 + 0.0) / 2.0;
    CHECK(macro == doctest::Approx(0.5));
  }

  SUBCASE("mAP_W equals mAP_M when supports are equal") {
    Rng rng(11);
    io::Vocabulary vocab = make_vocab(4, 2, true);
    std::vector<io::Sample> test;
    for (std::size_t v = 0; v < 4; ++v) {
      for (int k = 0; k < 3; ++k) {
        io::Sample s;
        s.video_id = "v" + std::to_string(test.size());
        s.adverb = v;
        s.action = k % 2;
        test.push_back(s);
      }
    }
    ScoreMatrix s = random_scores(test.size(), 4, rng);
    io::MetricValues m = compute_metrics(test, vocab, s);
    CHECK(m.map_w == doctest::Approx(m.map_m).epsilon(1e-12));
  }
}

TEST_CASE("metrics match the brute-force oracle on random instances") {
  Rng rng(13);
  for (int it = 0; it < 100; ++it) {
    const std::size_t n_adverbs = 2 + 2 * rng.uniform_index(3);  // 2, 4, 6
    const std::size_t n_actions = 1 + rng.uniform_index(3);
    const std::size_t n = 5 + rng.uniform_index(26);  // <= 30 videos
    io::Vocabulary vocab = make_vocab(n_adverbs, n_actions, true);
    std::vector<io::Sample> test = random_test_set(n, n_adverbs, n_actions, rng);
    ScoreMatrix s = random_scores(n, n_adverbs, rng);

    io::MetricValues got = compute_metrics(test, vocab, s);
    std::vector<oracle::Vec> rows;
    for (std::size_t i = 0; i < n; ++i) {
      rows.emplace_back(s.values.begin() + i * n_adverbs,
                        s.values.begin() + (i + 1) * n_adverbs);
    }
    oracle::MetricOracleResult expect = oracle::metrics(test, vocab, rows);
    CHECK(std::fabs(got.map_m - expect.map_m) <= 1e-12);
    CHECK(std::fabs(got.map_w - expect.map_w) <= 1e-12);
    REQUIRE(got.acc_a.has_value());
    CHECK(std::fabs(*got.acc_a - expect.acc_a) <= 1e-12);
  }
}

TEST_CASE("antonym accuracy details") {
  io::Vocabulary vocab = make_vocab(2, 1, true);
  std::vector<io::Sample> test(2);
  test[0] = {"v0", 0, 0, ""};
  test[1] = {"v1", 0, 1, ""};

  SUBCASE("scoring with the ground-truth one-hot adverb gives 1.0") {
    ScoreMatrix s;
    s.n_samples = 2;
    s.n_adverbs = 2;
    s.values = {1.0, 0.0, 0.0, 1.0};
    io::MetricValues m = compute_metrics(test, vocab, s);
    CHECK(*m.acc_a == 1.0);
  }

  SUBCASE("exact ties count as wrong") {
    ScoreMatrix s;
    s.n_samples = 2;
    s.n_adverbs = 2;
    s.values = {0.5, 0.5, 0.5, 0.5};
    io::MetricValues m = compute_metrics(test, vocab, s);
    CHECK(*m.acc_a == 0.0);
  }
}

TEST_CASE("priors baseline") {
  io::Vocabulary vocab = make_vocab(2, 2, true);

  SUBCASE("an action that always carries one adverb is learned") {
    std::vector<io::Sample> train;
    for (int i = 0; i < 10; ++i) {
      io::Sample s;
      s.video_id = "t" + std::to_string(i);
      s.action = 0;
      s.adverb = 0;
      train.push_back(s);
    }
    std::vector<io::Sample> test(3);
    for (std::size_t i = 0; i < 3; ++i) test[i] = {"v" + std::to_string(i), 0, 0, ""};
    ScoreMatrix s = priors_scores(train, test, vocab);
    io::MetricValues m = compute_metrics(test, vocab, s);
    CHECK(*m.acc_a == 1.0);
  }

  SUBCASE("unseen actions fall back to the global adverb frequency") {
    std::vector<io::Sample> train;
    for (int i = 0; i < 8; ++i) {
      io::Sample s;
      s.video_id = "t" + std::to_string(i);
      s.action = 0;
      s.adverb = i < 6 ? 0 : 1;  // adverb 0 dominates globally
      train.push_back(s);
    }
    std::vector<io::Sample> test = {{"v0", 1, 0, ""}};  // action 1 unseen
    ScoreMatrix s = priors_scores(train, test, vocab);
    CHECK(s.at(0, 0) > s.at(0, 1));
    CHECK(s.at(0, 0) == doctest::Approx((6.0 + 1.0) / (8.0 + 2.0)));
  }

  SUBCASE("uniform distribution scores near one half") {
    Rng rng(17);
    io::Vocabulary big = make_vocab(6, 12, true);
    std::vector<io::Sample> train, test;
    for (int i = 0; i < 4000; ++i) {
      io::Sample s;
      s.video_id = "t" + std::to_string(i);
      s.adverb = rng.uniform_index(6);
      s.action = rng.uniform_index(12);
      train.push_back(s);
    }
    for (int i = 0; i < 1500; ++i) {
      io::Sample s;
      s.video_id = "v" + std::to_string(i);
      s.adverb = rng.uniform_index(6);
      s.action = rng.uniform_index(12);
      test.push_back(s);
    }
    io::MetricValues m = compute_metrics(test, big, priors_scores(train, test, big));
    CHECK(std::fabs(*m.acc_a - 0.5) <= 0.05);
  }

  SUBCASE("a skewed 80/20 distribution is exploited") {
    Rng rng(19);
    io::Vocabulary big = make_vocab(2, 8, true);
    std::vector<io::Sample> train, test;
    // Adverb 0 appears 80% of the time for every action.
    for (int i = 0; i < 4000; ++i) {
      io::Sample s;
      s.video_id = "t" + std::to_string(i);
      s.adverb = rng.uniform() < 0.8 ? 0 : 1;
      s.action = rng.uniform_index(8);
      train.push_back(s);
    }
    for (int i = 0; i < 1500; ++i) {
      io::Sample s;
      s.video_id = "v" + std::to_string(i);
      s.adverb = rng.uniform() < 0.8 ? 0 : 1;
      s.action = rng.uniform_index(8);
      test.push_back(s);
    }
    io::MetricValues m = compute_metrics(test, big, priors_scores(train, test, big));
    CHECK(std::fabs(*m.acc_a - 0.8) <= 0.05);
  }
}
