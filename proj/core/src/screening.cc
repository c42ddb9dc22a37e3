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

#include "dscreen/screening.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "dscreen/student_t.h"

namespace dscreen {

std::string_view ScorerName(Scorer scorer) {
  switch (scorer) {
    case Scorer::kCpe:
      return "cpe";
    case Scorer::kTfidf:
      return "tfidf";
    case Scorer::kTstat:
      return "tstat";
  }
  return "unknown";
}

Scorer ParseScorer(std::string_view name) {
  if (name == "cpe") return Scorer::kCpe;
  if (name == "tfidf") return Scorer::kTfidf;
  if (name == "tstat") return Scorer::kTstat;
  throw std::invalid_argument("unknown scorer '" + std::string(name) +
                              "' (expected cpe, tfidf or tstat)");
}

std::string_view DirectionName(Direction direction) {
  return direction == Direction::kHigherIsImportant ? "higher_is_important"
                                                    : "lower_is_important";
}

Direction ScorerDirection(Scorer scorer) {
  return scorer == Scorer::kTstat ? Direction::kLowerIsImportant
                                  : Direction::kHigherIsImportant;
}

ScoreTable::ScoreTable(Scorer scorer, std::vector<double> scores,
                       std::size_t n_docs)
    : scorer_(scorer), scores_(std::move(scores)), n_docs_(n_docs) {
  for (double s : scores_) {
    if (!std::isfinite(s)) throw std::invalid_argument("non-finite score");
  }
}

double ScoreTable::score(KeywordId id) const {
  if (id == Dictionary::kPadId || id > scores_.size()) {
    throw std::out_of_range("no score for keyword id " + std::to_string(id));
  }
  return scores_[id - 1];
}

bool ScoreTable::RanksBefore(KeywordId a, KeywordId b) const {
  const double sa = scores_[a - 1];
  const double sb = scores_[b - 1];
  if (sa != sb) {
    return direction() == Direction::kHigherIsImportant ? sa > sb : sa < sb;
  }
  return a < b;
}

std::vector<KeywordId> ScoreTable::RankedIds() const {
  std::vector<KeywordId> ids(scores_.size());
  std::iota(ids.begin(), ids.end(), KeywordId{1});
  std::sort(ids.begin(), ids.end(),
            [this](KeywordId a, KeywordId b) { return RanksBefore(a, b); });
  return ids;
}

double SquaredDistance(std::span<const float> p, std::span<const float> q) {
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double diff = static_cast<double>(p[k]) - static_cast<double>(q[k]);
    total += diff * diff;
  }
  return total;
}

namespace {

void CheckModelMatchesCorpus(const Model& model, const Corpus& corpus) {
  if (model.config().dictionary_size != corpus.dictionary().size()) {
    throw std::invalid_argument(
        "model dictionary size " +
        std::to_string(model.config().dictionary_size) +
        " does not match corpus dictionary size " +
        std::to_string(corpus.dictionary().size()));
  }
  if (corpus.empty()) throw std::invalid_argument("scoring corpus is empty");
}

std::size_t ResolveThreads(std::size_t requested) {
  if (requested == 0) {
    requested = std::max(1u, std::thread::hardware_concurrency());
  }
  return requested;
}

// Runs body(i) for i in [begin, end) over `threads` workers with a static
// interleaved partition. Each i must write only its own output slot.
template <typename Body>
void ParallelFor(std::size_t begin, std::size_t end, std::size_t threads,
                 Body body) {
  threads = std::min(ResolveThreads(threads), std::max<std::size_t>(1, end - begin));
  if (threads <= 1) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = begin + w; i < end; i += threads) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (error) std::rethrow_exception(error);
}

std::vector<Tensor> BaselineProbabilities(const Model& model,
                                          const Corpus& corpus,
                                          std::size_t threads) {
  std::vector<Tensor> base(corpus.size());
  ParallelFor(0, corpus.size(), threads, [&](std::size_t i) {
    base[i] = model.PredictProba(corpus.doc(i));
  });
  return base;
}

}  // namespace

ScoreTable CpeScores(const Model& model, const Corpus& corpus,
                     const ScoringOptions& options) {
  CheckModelMatchesCorpus(model, corpus);
  const std::size_t num_keywords = corpus.dictionary().size();
  const auto base = BaselineProbabilities(model, corpus, options.threads);
  const double n = static_cast<double>(corpus.size());
  std::vector<double> scores(num_keywords, 0.0);
  ParallelFor(1, num_keywords + 1, options.threads, [&](std::size_t d) {
    const auto id = static_cast<KeywordId>(d);
    double total = 0.0;
    for (std::uint32_t i : corpus.index().Postings(id)) {
      const auto ablated = Ablate(corpus.doc(i), id);
      const auto probs = model.PredictProba(ablated.ids());
      total += SquaredDistance(base[i].data(), probs.data());
    }
    scores[d - 1] = total / n;
  });
  return ScoreTable(Scorer::kCpe, std::move(scores), corpus.size());
}

ScoreTable TfidfScores(const Corpus& corpus) {
  if (corpus.empty()) throw std::invalid_argument("TF-IDF of an empty corpus");
  const std::size_t num_keywords = corpus.dictionary().size();
  std::vector<double> term_counts(num_keywords + 1, 0.0);
  for (const auto& doc : corpus.docs()) {
    for (KeywordId id : doc.ids()) term_counts[id] += 1.0;
  }
  const double n = static_cast<double>(corpus.size());
  std::vector<double> scores(num_keywords, 0.0);
  for (std::size_t d = 1; d <= num_keywords; ++d) {
    const std::size_t df =
        corpus.index().DocumentFrequency(static_cast<KeywordId>(d));
    if (df == 0) continue;
    scores[d - 1] = term_counts[d] * std::log(n / static_cast<double>(df));
  }
  return ScoreTable(Scorer::kTfidf, std::move(scores), corpus.size());
}

double PairedTTestP(std::span<const double> differences) {
  const std::size_t n = differences.size();
  if (n < 2) return 1.0;
  double mean = 0.0;
  for (double v : differences) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : differences) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (sd == 0.0) return mean == 0.0 ? 1.0 : 0.0;
  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  return StudentTTwoSidedP(t, static_cast<double>(n - 1));
}

ScoreTable TstatScores(const Model& model, const Corpus& corpus,
                       const ScoringOptions& options) {
  CheckModelMatchesCorpus(model, corpus);
  const std::size_t num_keywords = corpus.dictionary().size();
  const std::size_t num_classes = model.config().num_classes;
  const auto base = BaselineProbabilities(model, corpus, options.threads);
  std::vector<double> scores(num_keywords, 1.0);
  ParallelFor(1, num_keywords + 1, options.threads, [&](std::size_t d) {
    const auto id = static_cast<KeywordId>(d);
    const auto postings = corpus.index().Postings(id);
    // differences[k][j]: class k, j-th containing document.
    std::vector<std::vector<double>> differences(
        num_classes, std::vector<double>(postings.size()));
    for (std::size_t j = 0; j < postings.size(); ++j) {
      const std::uint32_t i = postings[j];
      const auto probs = model.PredictProba(Ablate(corpus.doc(i), id).ids());
      for (std::size_t k = 0; k < num_classes; ++k) {
        differences[k][j] = static_cast<double>(base[i][k]) -
                            static_cast<double>(probs[k]);
      }
    }
    double best = 1.0;
    for (const auto& column : differences) {
      best = std::min(best, PairedTTestP(column));
    }
    scores[d - 1] = best;
  });
  return ScoreTable(Scorer::kTstat, std::move(scores), corpus.size());
}

std::vector<KeywordId> SelectTopK(const ScoreTable& table, std::size_t k) {
  if (k > table.num_keywords()) {
    throw std::invalid_argument("cannot keep " + std::to_string(k) +
                                " keywords from a dictionary of " +
                                std::to_string(table.num_keywords()));
  }
  auto ranked = table.RankedIds();
  std::vector<KeywordId> kept{Dictionary::kPadId};
  kept.insert(kept.end(), ranked.begin(), ranked.begin() + k);
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<KeywordId> SelectByThreshold(const ScoreTable& table,
                                         double threshold) {
  if (std::isnan(threshold)) throw std::invalid_argument("threshold is NaN");
  std::vector<KeywordId> kept{Dictionary::kPadId};
  const bool higher = table.direction() == Direction::kHigherIsImportant;
  for (std::size_t d = 1; d <= table.num_keywords(); ++d) {
    const double s = table.values()[d - 1];
    if (higher ? s >= threshold : s <= threshold) {
      kept.push_back(static_cast<KeywordId>(d));
    }
  }
  return kept;
}

void WriteScoreFile(std::ostream& out, const ScoreTable& table,
                    const Dictionary& dict) {
  if (dict.size() != table.num_keywords()) {
    throw std::invalid_argument("score table does not match dictionary");
  }
  out << "#scorer=" << ScorerName(table.scorer())
      << " direction=" << DirectionName(table.direction())
      << " n_docs=" << table.n_docs() << '\n';
  char buffer[64];
  for (KeywordId id : table.RankedIds()) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", table.score(id));
    out << id << '\t' << dict.keyword(id) << '\t' << buffer << '\n';
  }
}

ScoreTable ReadScoreFile(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#scorer=")) {
    throw std::runtime_error("score file must start with #scorer=");
  }
  char scorer_name[32] = {0};
  char direction_name[32] = {0};
  std::size_t n_docs = 0;
  if (std::sscanf(line.c_str(), "#scorer=%31s direction=%31s n_docs=%zu",
                  scorer_name, direction_name, &n_docs) != 3) {
    throw std::runtime_error("malformed score file header: " + line);
  }
  const Scorer scorer = ParseScorer(scorer_name);
  if (DirectionName(ScorerDirection(scorer)) != direction_name) {
    throw std::runtime_error("score file direction does not match scorer");
  }
  std::vector<std::pair<KeywordId, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = line.rfind('\t');
    if (tab1 == std::string::npos || tab1 == tab2) {
      throw std::runtime_error("malformed score line: " + line);
    }
    rows.emplace_back(static_cast<KeywordId>(std::stoul(line.substr(0, tab1))),
                      std::strtod(line.c_str() + tab2 + 1, nullptr));
  }
  std::vector<double> scores(rows.size(), 0.0);
  std::vector<bool> seen(rows.size(), false);
  for (const auto& [id, value] : rows) {
    if (id == 0 || id > rows.size() || seen[id - 1]) {
      throw std::runtime_error("score file ids must cover 1..D exactly once");
    }
    seen[id - 1] = true;
    scores[id - 1] = value;
  }
  return ScoreTable(scorer, std::move(scores), n_docs);
}

}  // namespace dscreen
