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

#ifndef DSCREEN_SCREENING_H_
#define DSCREEN_SCREENING_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "dscreen/corpus.h"
#include "dscreen/dictionary.h"
#include "dscreen/model.h"

namespace dscreen {

enum class Scorer { kCpe, kTfidf, kTstat };
enum class Direction { kHigherIsImportant, kLowerIsImportant };

std::string_view ScorerName(Scorer scorer);
Scorer ParseScorer(std::string_view name);
std::string_view DirectionName(Direction direction);
Direction ScorerDirection(Scorer scorer);

// One importance value per keyword id 1..D; w0 is never scored.
class ScoreTable {
 public:
  // scores[i] belongs to keyword id i + 1.
  ScoreTable(Scorer scorer, std::vector<double> scores, std::size_t n_docs);

  Scorer scorer() const { return scorer_; }
  Direction direction() const { return ScorerDirection(scorer_); }
  std::size_t num_keywords() const { return scores_.size(); }
  std::size_t n_docs() const { return n_docs_; }
  std::span<const double> values() const { return scores_; }

  // Throws std::out_of_range for w0 or ids beyond D.
  double score(KeywordId id) const;

  // True when `a` ranks ahead of `b`: more important per direction, ties to
  // the smaller id.
  bool RanksBefore(KeywordId a, KeywordId b) const;

  // All ids 1..D, most important first.
  std::vector<KeywordId> RankedIds() const;

 private:
  Scorer scorer_;
  std::vector<double> scores_;
  std::size_t n_docs_;
};

struct ScoringOptions {
  // Worker threads for the per-keyword loop; 0 picks hardware concurrency.
  std::size_t threads = 1;
};

// Squared L2 distance between two probability vectors, accumulated in
// double precision.
double SquaredDistance(std::span<const float> p, std::span<const float> q);

// Mean over all corpus documents of ||f(X_i) - f(X_i with d -> w0)||^2.
// Only documents listed in the inverted index for d are evaluated; the rest
// contribute exactly zero.
ScoreTable CpeScores(const Model& model, const Corpus& corpus,
                     const ScoringOptions& options = {});

// TF(d) * ln(N / DF(d)), TF the total occurrence count of d over the
// encoded corpus; zero when DF(d) == 0.
ScoreTable TfidfScores(const Corpus& corpus);

// Minimum over classes of the two-sided paired t-test p-value comparing
// f(X_i) with f(X_i with d -> w0), over the documents containing d.
// Degenerate cases: n < 2 or (sd == 0 and mean == 0) -> 1; sd == 0 and
// mean != 0 -> 0.
ScoreTable TstatScores(const Model& model, const Corpus& corpus,
                       const ScoringOptions& options = {});

// Two-sided p-value for a paired sample of differences.
double PairedTTestP(std::span<const double> differences);

// Top `k` ids per table direction, plus w0; sorted ascending. Throws when
// k exceeds the keyword count.
std::vector<KeywordId> SelectTopK(const ScoreTable& table, std::size_t k);

// {d : score(d) >= threshold} for higher-is-important tables, <= for
// lower-is-important, plus w0; sorted ascending.
std::vector<KeywordId> SelectByThreshold(const ScoreTable& table,
                                         double threshold);

// Score file: "#scorer=<name> direction=<dir> n_docs=<N>" then one line per
// keyword, "id <TAB> keyword <TAB> score", most important first.
void WriteScoreFile(std::ostream& out, const ScoreTable& table,
                    const Dictionary& dict);
ScoreTable ReadScoreFile(std::istream& in);

}  // namespace dscreen

#endif  // DSCREEN_SCREENING_H_
