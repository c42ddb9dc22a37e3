// Copyright 2026 The dscreen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "dscreen/screening.h"
#include "dscreen/student_t.h"
#include "testing/fixtures.h"
#include "testing/oracles.h"

namespace dscreen {
namespace {

using Ids = std::vector<KeywordId>;

// ------------------------------------------------------------- student t

TEST(StudentTTest, ExactSpecialCases) {
  for (double df : {1.0, 2.0, 7.5, 100.0}) EXPECT_EQ(StudentTTwoSidedP(0.0, df), 1.0);
  EXPECT_NEAR(StudentTTwoSidedP(1.0, 1.0), 0.5, 1e-12);
  // Cauchy: P(|T| > t) = 1 - 2 atan(t) / pi.
  EXPECT_NEAR(StudentTTwoSidedP(3.0, 1.0), 1.0 - 2.0 * std::atan(3.0) / M_PI, 1e-13);
  // df = 2 has the closed form 1 - t / sqrt(2 + t^2).
  EXPECT_NEAR(StudentTTwoSidedP(1.5, 2.0), 1.0 - 1.5 / std::sqrt(2.0 + 2.25), 1e-13);
}

TEST(StudentTTest, MatchesQuadratureOnGrid) {
  for (double t : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    for (double df : {1.0, 2.0, 5.0, 10.0, 30.0}) {
      EXPECT_NEAR(StudentTTwoSidedP(t, df), testing::QuadratureStudentTP(t, df), 1e-8)
          << "t=" << t << " df=" << df;
    }
  }
  EXPECT_NEAR(StudentTTwoSidedP(2.0, 10.0), testing::QuadratureStudentTP(2.0, 10.0), 1e-8);
}

TEST(StudentTTest, EvenAndDecreasingInAbsT) {
  for (double df : {1.0, 1.5, 3.0, 12.0, 60.0}) {
    double previous = 1.0;
    for (double t = 0.0; t <= 20.0; t += 0.25) {
      const double p = StudentTTwoSidedP(t, df);
      EXPECT_EQ(p, StudentTTwoSidedP(-t, df));
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      EXPECT_LE(p, previous);
      previous = p;
    }
  }
}

TEST(StudentTTest, RejectsBadArguments) {
  EXPECT_THROW(StudentTTwoSidedP(1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(StudentTTwoSidedP(std::numeric_limits<double>::infinity(), 3.0),
               std::invalid_argument);
  EXPECT_THROW(StudentTTwoSidedP(std::nan(""), 3.0), std::invalid_argument);
}

TEST(IncompleteBetaTest, ClosedForms) {
  for (double x : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(RegularizedIncompleteBeta(1.0, 1.0, x), x, 1e-14);
    EXPECT_NEAR(RegularizedIncompleteBeta(3.0, 1.0, x), x * x * x, 1e-14);
    EXPECT_NEAR(RegularizedIncompleteBeta(1.0, 2.0, x), 1.0 - (1 - x) * (1 - x), 1e-14);
  }
}

// ----------------------------------------------------------- paired t-test

TEST(PairedTTest, QuadratureExample) {
  const std::vector<double> d{0.1, 0.2, 0.15, 0.05};
  const double mean = 0.125;
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double t = mean / (std::sqrt(ss / 3.0) / 2.0);
  EXPECT_NEAR(PairedTTestP(d), testing::QuadratureStudentTP(t, 3.0), 1e-8);
}

TEST(PairedTTest, DegenerateConventions) {
  EXPECT_EQ(PairedTTestP(std::vector<double>{}), 1.0);
  EXPECT_EQ(PairedTTestP(std::vector<double>{0.4}), 1.0);
  EXPECT_EQ(PairedTTestP(std::vector<double>{0.0, 0.0, 0.0}), 1.0);
  EXPECT_EQ(PairedTTestP(std::vector<double>{0.25, 0.25}), 0.0);
}

// -------------------------------------------------------------------- CPE

const ModelKind kAllKinds[] = {ModelKind::kTextCnn, ModelKind::kSimpleRnn,
                               ModelKind::kMeanPool};

TEST(CpeTest, SparseEqualsDenseOracleExactly) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const ModelKind kind = kAllKinds[trial % 3];
    const std::size_t length = 3 + rng() % 8;
    const std::size_t classes = 2 + rng() % 3;
    auto corpus = testing::RandomCorpus(rng, 50, 50, length, classes);
    auto model = testing::RandomModel(
        testing::SmallConfig(kind, corpus.dictionary().size(), length, classes),
        trial);
    auto sparse = CpeScores(model, corpus);
    auto dense = testing::DenseCpeOracle(model, corpus);
    ASSERT_EQ(sparse.num_keywords(), dense.size());
    for (std::size_t d = 0; d < dense.size(); ++d) {
      EXPECT_EQ(sparse.values()[d], dense[d]) << "keyword " << d + 1;
    }
    ScoringOptions threaded;
    threaded.threads = 3;
    auto parallel = CpeScores(model, corpus, threaded);
    EXPECT_TRUE(std::equal(parallel.values().begin(), parallel.values().end(),
                           sparse.values().begin()));
  }
}

TEST(CpeTest, RangeAndZeroCharacterization) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 15; ++trial) {
    const ModelKind kind = kAllKinds[trial % 3];
    auto corpus = testing::RandomCorpus(rng, 20, 15, 6, 3);
    auto model = testing::RandomModel(
        testing::SmallConfig(kind, corpus.dictionary().size(), 6, 3), trial, 3.0);
    auto table = CpeScores(model, corpus);
    for (KeywordId d = 1; d <= table.num_keywords(); ++d) {
      const double s = table.score(d);
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 2.0);
      bool unchanged = true;
      for (const auto& doc : corpus.docs()) {
        unchanged &= model.PredictProba(doc) == model.PredictProba(Ablate(doc, d));
      }
      EXPECT_EQ(s == 0.0, unchanged) << "keyword " << d;
      if (corpus.index().DocumentFrequency(d) == 0) EXPECT_EQ(s, 0.0);
    }
  }
}

TEST(CpeTest, AbsentKeywordAndConstantModelScoreZero) {
  auto dict = Dictionary::FromKeywords({"a", "b", "c"});
  Corpus corpus(dict, {EncodedDocument({1, 2, 0}, 1), EncodedDocument({2, 2, 1}, 2),
                       EncodedDocument({1, 0, 0}, 1)});
  for (ModelKind kind : kAllKinds) {
    auto model = testing::RandomModel(testing::SmallConfig(kind, 3, 3, 2), 5);
    EXPECT_EQ(CpeScores(model, corpus).score(3), 0.0);
    model.param("dense.weight").value.Fill(0.0f);
    model.param("dense.bias").value[0] = 0.8f;
    auto constant = CpeScores(model, corpus);
    for (double s : constant.values()) EXPECT_EQ(s, 0.0);
  }
}

TEST(CpeTest, DictionaryMismatchIsRejected) {
  auto dict = Dictionary::FromKeywords({"a", "b"});
  Corpus corpus(dict, {EncodedDocument({1, 2, 0}, 1)});
  auto model = Model::Initialized(testing::SmallConfig(ModelKind::kMeanPool, 3, 3, 2), 1);
  EXPECT_THROW(CpeScores(model, corpus), std::invalid_argument);
  EXPECT_THROW(TstatScores(model, corpus), std::invalid_argument);
}

// ----------------------------------------------------------------- TF-IDF

TEST(TfidfTest, Examples) {
  auto dict = Dictionary::FromKeywords({"everywhere", "thrice", "absent"});
  Corpus corpus(dict, {EncodedDocument({1, 2, 2, 2}, 1), EncodedDocument({1, 0, 0, 0}, 1),
                       EncodedDocument({1, 1, 0, 0}, 2), EncodedDocument({1, 0, 0, 0}, 2)});
  auto table = TfidfScores(corpus);
  EXPECT_EQ(table.score(1), 0.0);
  EXPECT_NEAR(table.score(2), 3.0 * std::log(4.0), 1e-12);
  EXPECT_NEAR(table.score(2), 4.1589, 1e-4);
  EXPECT_EQ(table.score(3), 0.0);
  EXPECT_EQ(table.direction(), Direction::kHigherIsImportant);
}

TEST(TfidfTest, MatchesRecountFromTokens) {
  std::mt19937_64 rng(8);
  const std::vector<std::string> vocab{"w", "x", "y", "z", "q", "r", "s"};
  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < 25; ++i) {
    std::vector<std::string> doc;
    const std::size_t len = rng() % 9;
    for (std::size_t t = 0; t < len; ++t) doc.push_back(vocab[rng() % vocab.size()]);
    docs.push_back(doc);
  }
  auto dict = Dictionary::Build(docs, 1);
  std::vector<EncodedDocument> encoded;
  for (const auto& doc : docs) encoded.push_back(Encode(doc, dict, 10));
  auto table = TfidfScores(Corpus(dict, encoded));
  auto expected = testing::RecountTfidf(docs);
  for (KeywordId id = 1; id <= dict.size(); ++id) {
    EXPECT_NEAR(table.score(id), expected.at(dict.keyword(id)), 1e-12);
  }
  EXPECT_THROW(TfidfScores(Corpus(dict, {})), std::invalid_argument);
}

// ----------------------------------------------------------------- t-stat

// Dense oracle: every keyword against every containing document, p-values
// from the quadrature oracle.
std::vector<double> DenseTstatOracle(const Model& model, const Corpus& corpus) {
  std::vector<double> out;
  for (KeywordId d = 1; d <= corpus.dictionary().size(); ++d) {
    std::vector<std::vector<double>> diffs(model.config().num_classes);
    for (const auto& doc : corpus.docs()) {
      if (!doc.Contains(d)) continue;
      const auto p = model.PredictProba(doc);
      const auto q = model.PredictProba(Ablate(doc, d));
      for (std::size_t k = 0; k < diffs.size(); ++k) {
        diffs[k].push_back(static_cast<double>(p[k]) - static_cast<double>(q[k]));
      }
    }
    double best = 1.0;
    for (const auto& column : diffs) {
      const std::size_t n = column.size();
      double p = 1.0;
      if (n >= 2) {
        double mean = 0.0;
        for (double v : column) mean += v;
        mean /= n;
        double ss = 0.0;
        for (double v : column) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / (n - 1));
        if (sd == 0.0) {
          p = mean == 0.0 ? 1.0 : 0.0;
        } else {
          p = testing::QuadratureStudentTP(mean / (sd / std::sqrt(double(n))),
                                           double(n - 1));
        }
      }
      best = std::min(best, p);
    }
    out.push_back(best);
  }
  return out;
}

TEST(TstatTest, MatchesDenseOracle) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 9; ++trial) {
    const ModelKind kind = kAllKinds[trial % 3];
    auto corpus = testing::RandomCorpus(rng, 30, 12, 6, 3);
    auto model = testing::RandomModel(
        testing::SmallConfig(kind, corpus.dictionary().size(), 6, 3), trial);
    auto table = TstatScores(model, corpus);
    auto expected = DenseTstatOracle(model, corpus);
    EXPECT_EQ(table.direction(), Direction::kLowerIsImportant);
    for (std::size_t d = 0; d < expected.size(); ++d) {
      EXPECT_NEAR(table.values()[d], expected[d], 1e-8);
      EXPECT_GE(table.values()[d], 0.0);
      EXPECT_LE(table.values()[d], 1.0);
    }
  }
}

TEST(TstatTest, VanishingDifferencesScoreOne) {
  auto dict = Dictionary::FromKeywords({"a", "b"});
  Corpus corpus(dict, {EncodedDocument({1, 2, 0}, 1), EncodedDocument({2, 1, 1}, 2),
                       EncodedDocument({1, 0, 0}, 1)});
  auto model = testing::RandomModel(testing::SmallConfig(ModelKind::kTextCnn, 2, 3, 2), 3);
  model.param("dense.weight").value.Fill(0.0f);
  auto table = TstatScores(model, corpus);
  for (double s : table.values()) EXPECT_EQ(s, 1.0);
}

// ------------------------------------------------------------- selection

TEST(SelectTest, TopKExamples) {
  ScoreTable table(Scorer::kCpe, {0.5, 0.2, 0.9, 0.1}, 10);
  EXPECT_EQ(SelectTopK(table, 3), (Ids{0, 1, 2, 3}));
  EXPECT_EQ(SelectTopK(table, 4), (Ids{0, 1, 2, 3, 4}));
  EXPECT_EQ(SelectTopK(table, 0), (Ids{0}));
  EXPECT_THROW(SelectTopK(table, 5), std::invalid_argument);
  EXPECT_EQ(table.RankedIds(), (Ids{3, 1, 2, 4}));
}

TEST(SelectTest, LowerIsImportantAndTieBreak) {
  ScoreTable pvalues(Scorer::kTstat, {0.3, 0.01, 0.5, 0.01}, 4);
  EXPECT_EQ(SelectTopK(pvalues, 1), (Ids{0, 2}));
  EXPECT_EQ(SelectTopK(pvalues, 2), (Ids{0, 2, 4}));
  ScoreTable ties(Scorer::kTfidf, {1.0, 2.0, 2.0, 2.0}, 4);
  EXPECT_EQ(SelectTopK(ties, 2), (Ids{0, 2, 3}));
}

TEST(SelectTest, ThresholdBoundaries) {
  ScoreTable table(Scorer::kCpe, {0.0, 0.2, 0.9, 0.0}, 10);
  EXPECT_EQ(SelectByThreshold(table, 0.0), (Ids{0, 1, 2, 3, 4}));
  EXPECT_EQ(SelectByThreshold(table, 1.5), (Ids{0}));
  EXPECT_EQ(SelectByThreshold(table, 0.2), (Ids{0, 2, 3}));
  ScoreTable pvalues(Scorer::kTstat, {0.3, 0.01, 0.5}, 4);
  EXPECT_EQ(SelectByThreshold(pvalues, 0.3), (Ids{0, 1, 2}));
}

TEST(SelectTest, ThresholdAtKthScoreEqualsTopK) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<double> scores(n);
    for (double& s : scores) s = u(rng);
    const Scorer scorer = trial % 2 ? Scorer::kTstat : Scorer::kCpe;
    ScoreTable table(scorer, scores, 1);
    const std::size_t k = 1 + rng() % n;
    const double kth = table.score(table.RankedIds()[k - 1]);
    auto top = SelectTopK(table, k);
    EXPECT_EQ(top.size(), k + 1);
    EXPECT_TRUE(std::is_sorted(top.begin(), top.end()));
    EXPECT_EQ(SelectByThreshold(table, kth), top);
  }
}

TEST(ScoreTableTest, CoversEveryKeywordButPad) {
  ScoreTable table(Scorer::kCpe, {0.1, 0.2}, 2);
  EXPECT_THROW(table.score(0), std::out_of_range);
  EXPECT_THROW(table.score(3), std::out_of_range);
  EXPECT_THROW(ScoreTable(Scorer::kCpe, {std::nan("")}, 1), std::invalid_argument);
  EXPECT_EQ(ParseScorer("tstat"), Scorer::kTstat);
  EXPECT_THROW(ParseScorer("chi2"), std::invalid_argument);
}

TEST(ScoreFileTest, RoundTripAndLayout) {
  auto dict = Dictionary::FromKeywords({"alpha", "beta", "gamma"});
  ScoreTable table(Scorer::kCpe, {0.1 + 0.2, 1e-300, 0.7}, 42);
  std::stringstream buffer;
  WriteScoreFile(buffer, table, dict);
  EXPECT_EQ(buffer.str(),
            "#scorer=cpe direction=higher_is_important n_docs=42\n"
            "3\tgamma\t0.69999999999999996\n"
            "1\talpha\t0.30000000000000004\n"
            "2\tbeta\t1e-300\n");
  auto back = ReadScoreFile(buffer);
  EXPECT_EQ(back.scorer(), Scorer::kCpe);
  EXPECT_EQ(back.n_docs(), 42u);
  EXPECT_TRUE(std::equal(back.values().begin(), back.values().end(),
                         table.values().begin()));
  std::stringstream bad("#scorer=cpe direction=lower_is_important n_docs=1\n1\ta\t0\n");
  EXPECT_THROW(ReadScoreFile(bad), std::runtime_error);
  std::stringstream gap("#scorer=cpe direction=higher_is_important n_docs=1\n2\ta\t0\n");
  EXPECT_THROW(ReadScoreFile(gap), std::runtime_error);
}

}  // namespace
}  // namespace dscreen
