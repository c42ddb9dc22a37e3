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


#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dscreen/dataset_io.h"
#include "dscreen/digest.h"
#include "dscreen/experiment_config.h"
#include "dscreen/pipeline.h"
#include "dscreen/synthetic.h"
#include "dscreen/training.h"
#include "testing/experiment.h"

namespace dscreen {
namespace {

namespace fs = std::filesystem;
using testing::ReadDir;
using testing::ReadFile;
using testing::ScratchDir;
using testing::SyntheticExperiment;

SyntheticSpec SmallSpec(std::uint64_t seed = 1) {
  SyntheticSpec spec;
  spec.num_classes = 2;
  spec.docs_per_class = 150;
  spec.test_docs_per_class = 50;
  spec.vocab_size = 60;
  spec.planted_per_class = 5;
  spec.doc_length = 12;
  spec.noise_rate = 0.5;
  spec.seed = seed;
  return spec;
}

std::vector<std::string> Split(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string word; in >> word;) out.push_back(word);
  return out;
}

// ---------------------------------------------------------------- synthetic

TEST(Synthetic, SameSeedWritesIdenticalFiles) {
  const auto a = ScratchDir("synth_a");
  const auto b = ScratchDir("synth_b");
  WriteSynthetic(MakeSynthetic(SmallSpec(7)), a);
  WriteSynthetic(MakeSynthetic(SmallSpec(7)), b);
  const auto files = ReadDir(a);
  EXPECT_EQ(files.size(), 3u);
  EXPECT_EQ(files, ReadDir(b));
  WriteSynthetic(MakeSynthetic(SmallSpec(8)), b);
  EXPECT_NE(files.at("train.csv"), ReadDir(b).at("train.csv"));
}

TEST(Synthetic, AcceptanceFixtureSurvivesRecount) {
  SyntheticSpec spec;
  spec.num_classes = 2;
  spec.docs_per_class = 1000;
  spec.vocab_size = 500;
  spec.planted_per_class = 10;
  spec.doc_length = 30;
  spec.noise_rate = 0.5;
  spec.seed = 3;
  const auto ds = MakeSynthetic(spec);

  ASSERT_EQ(ds.planted.size(), 2u);
  std::set<std::string> all;
  for (const auto& words : ds.planted) {
    EXPECT_EQ(words.size(), 10u);
    all.insert(words.begin(), words.end());
  }
  EXPECT_EQ(all.size(), 20u);
  EXPECT_EQ(ds.noise.size(), 480u);
  const std::set<std::string> noise(ds.noise.begin(), ds.noise.end());
  for (const auto& word : noise) EXPECT_EQ(all.count(word), 0u);

  ASSERT_EQ(ds.train.size(), 2000u);
  ASSERT_EQ(ds.test.size(), 400u);
  std::size_t noisy = 0, total = 0;
  std::vector<std::size_t> per_class(3, 0);
  for (const auto& doc : ds.train) {
    ASSERT_GE(doc.label, 1);
    ASSERT_LE(doc.label, 2);
    ++per_class[doc.label];
    const std::set<std::string> own(ds.planted[doc.label - 1].begin(),
                                    ds.planted[doc.label - 1].end());
    const auto words = Split(doc.text);
    ASSERT_EQ(words.size(), 30u);
    for (const auto& word : words) {
      const bool is_noise = noise.count(word) > 0;
      ASSERT_TRUE(is_noise || own.count(word)) << word;
      noisy += is_noise;
      ++total;
    }
  }
  EXPECT_EQ(per_class[1], 1000u);
  EXPECT_EQ(per_class[2], 1000u);
  // 60000 Bernoulli(0.5) draws: sd 0.002.
  EXPECT_NEAR(static_cast<double>(noisy) / total, 0.5, 0.01);
}

TEST(Synthetic, ZeroNoiseIsSeparable) {
  SyntheticSpec spec = SmallSpec(2);
  spec.noise_rate = 0.0;
  const auto ds = MakeSynthetic(spec);
  for (const auto& doc : ds.train) {
    const auto& own = ds.planted[doc.label - 1];
    for (const auto& word : Split(doc.text)) {
      EXPECT_NE(std::find(own.begin(), own.end(), word), own.end());
    }
  }

  const auto dir = ScratchDir("synth_separable");
  Pipeline pipeline(SyntheticExperiment(spec, dir / "data", dir / "out"));
  EXPECT_EQ(EvaluateAccuracy(pipeline.benchmark(), pipeline.test_docs()), 1.0);
}

TEST(Synthetic, InfeasibleSpecsThrow) {
  auto bad = [](auto&& edit) {
    SyntheticSpec spec = SmallSpec();
    edit(spec);
    EXPECT_THROW(MakeSynthetic(spec), std::invalid_argument);
  };
  bad([](SyntheticSpec& s) { s.planted_per_class = 30; });
  bad([](SyntheticSpec& s) { s.num_classes = 1; });
  bad([](SyntheticSpec& s) { s.noise_rate = 1.5; });
  bad([](SyntheticSpec& s) { s.doc_length = 0; });
  bad([](SyntheticSpec& s) { s.planted_per_class = 0; });
}

// ------------------------------------------------------------------ config

TEST(ExperimentConfig, ParsesKeyValueText) {
  std::istringstream in(
      "# experiment\n"
      "dataset.name = agnews\n"
      "dataset.train = data/train.csv   # relative\n"
      "dataset.test = /abs/test.csv\n"
      "\n"
      "model.kind = textcnn\n"
      "model.d1 = 32\n"
      "model.kernel_sizes = 3,4,5\n"
      "train.max_epochs = 5\n"
      "scorer = tstat\n"
      "select.top_k = 3000\n"
      "seed = 9\n");
  const auto config = ExperimentConfig::Parse(in, "/base");
  EXPECT_EQ(config.dataset_name, "agnews");
  EXPECT_EQ(config.train_path, fs::path("/base/data/train.csv"));
  EXPECT_EQ(config.test_path, fs::path("/abs/test.csv"));
  EXPECT_EQ(config.model.kind, ModelKind::kTextCnn);
  EXPECT_EQ(config.model.embedding_dim, 32u);
  EXPECT_EQ(config.model.kernel_sizes, (std::vector<std::size_t>{3, 4, 5}));
  EXPECT_EQ(config.train.max_epochs, 5u);
  EXPECT_EQ(config.scorer, Scorer::kTstat);
  EXPECT_EQ(config.top_k, 3000u);
  EXPECT_FALSE(config.threshold);
  EXPECT_EQ(config.seed, 9u);
  EXPECT_NO_THROW(config.Validate());
}

TEST(ExperimentConfig, SerializeRoundTrips) {
  ExperimentConfig config;
  config.train_path = "/d/train.csv";
  config.test_path = "/d/test.csv";
  config.model.kind = ModelKind::kSimpleRnn;
  config.train.dropout_rate = 0.25;
  config.threshold = 1e-4;
  config.scorer = Scorer::kTfidf;
  config.score_split = ScoreSplit::kValidation;
  config.trr_split = TrrSplit::kTest;
  config.max_dictionary_size = 100;
  const std::string text = config.Serialize();
  std::istringstream in(text);
  const auto parsed = ExperimentConfig::Parse(in);
  EXPECT_EQ(parsed.Serialize(), text);
  EXPECT_EQ(parsed.threshold, 1e-4);
  EXPECT_EQ(parsed.score_split, ScoreSplit::kValidation);
  EXPECT_EQ(parsed.trr_split, TrrSplit::kTest);
}

TEST(ExperimentConfig, RejectsBadInput) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return ExperimentConfig::Parse(in);
  };
  EXPECT_THROW(parse("nonsense.key = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse("model.d1 = many\n"), std::invalid_argument);
  EXPECT_THROW(parse("model.kind = lstm\n"), std::invalid_argument);
  EXPECT_THROW(parse("no equals sign\n"), std::invalid_argument);

  auto both = parse("dataset.train = a\ndataset.test = b\n"
                    "select.top_k = 5\nselect.threshold = 0.1\n");
  EXPECT_THROW(both.Validate(), std::invalid_argument);
  auto neither = parse("dataset.train = a\ndataset.test = b\n");
  EXPECT_THROW(neither.Validate(), std::invalid_argument);
  EXPECT_THROW(ExperimentConfig::Load("/nonexistent/dscreen.cfg"),
               std::runtime_error);
}

// ---------------------------------------------------------------- pipeline

std::map<std::string, std::string> Artifacts(const fs::path& dir) {
  auto files = ReadDir(dir);
  // Both embed the output directory.
  files.erase("config.txt");
  files.erase("manifest.txt");
  return files;
}

TEST(Pipeline, RunAllIsDeterministic) {
  const auto dir = ScratchDir("pipeline_det");
  const auto spec = SmallSpec(4);
  Pipeline a(SyntheticExperiment(spec, dir / "data", dir / "a"));
  Pipeline b(SyntheticExperiment(spec, dir / "data", dir / "b"));
  EXPECT_EQ(a.RunAll(), b.RunAll());
  const auto files = Artifacts(dir / "a");
  for (const char* name : {"report.cpe.k10.tsv", "report.cpe.k10.txt",
                           "benchmark.ckpt", "reduced.cpe.k10.ckpt",
                           "scores.cpe.tsv", "screened.cpe.k10.dict"}) {
    EXPECT_TRUE(files.count(name)) << name;
  }
  EXPECT_EQ(files, Artifacts(dir / "b"));
}

TEST(Pipeline, ResumesFromPersistedArtifacts) {
  const auto dir = ScratchDir("pipeline_resume");
  const auto config = SyntheticExperiment(SmallSpec(5), dir / "data", dir / "out");
  CompressionReport first;
  {
    Pipeline pipeline(config);
    first = pipeline.RunAll();
    const auto& c = pipeline.counters();
    EXPECT_EQ(c.ingest + c.train + c.score + c.screen + c.retrain + c.report, 6u);
  }
  const std::string tsv = ReadFile(dir / "out" / "report.cpe.k10.tsv");
  const std::string txt = ReadFile(dir / "out" / "report.cpe.k10.txt");
  {
    Pipeline pipeline(config);
    EXPECT_EQ(pipeline.RunAll(), first);
    const auto& c = pipeline.counters();
    EXPECT_EQ(c.ingest + c.train + c.score + c.screen + c.retrain + c.report, 0u);
  }
  fs::remove(dir / "out" / "report.cpe.k10.tsv");
  fs::remove(dir / "out" / "report.cpe.k10.txt");
  {
    Pipeline pipeline(config);
    pipeline.RunAll();
    const auto& c = pipeline.counters();
    EXPECT_EQ(c.report, 1u);
    EXPECT_EQ(c.ingest + c.train + c.score + c.screen + c.retrain, 0u);
  }
  EXPECT_EQ(ReadFile(dir / "out" / "report.cpe.k10.tsv"), tsv);
  EXPECT_EQ(ReadFile(dir / "out" / "report.cpe.k10.txt"), txt);
  {
    Pipeline pipeline(config, /*force=*/true);
    EXPECT_EQ(pipeline.RunAll(), first);
    EXPECT_EQ(pipeline.counters().train, 1u);
  }
}

TEST(Pipeline, KeepingEveryKeywordIsANoOp) {
  const auto dir = ScratchDir("pipeline_noop");
  Pipeline pipeline(SyntheticExperiment(SmallSpec(6), dir / "data", dir / "out"));
  const std::size_t d = pipeline.dictionary().size();
  const auto report = pipeline.Report(Selection::TopK(d));
  EXPECT_EQ(report.k_kept, d);
  EXPECT_EQ(report.drr, 0.0);
  EXPECT_EQ(report.trr, 0.0);
  EXPECT_EQ(report.prr, 0.0);
  // Identical corpus, dictionary and seed: the retrained model is the
  // benchmark.
  EXPECT_EQ(report.reduced_acc, report.benchmark_acc);
  const std::string stem = "cpe.k" + std::to_string(d);
  EXPECT_EQ(ReadFile(pipeline.ArtifactPath("reduced." + stem + ".ckpt")),
            ReadFile(pipeline.ArtifactPath("benchmark.ckpt")));
}

TEST(Pipeline, ScreenedDictionaryOnDiskMatchesSelection) {
  const auto dir = ScratchDir("pipeline_screen");
  Pipeline pipeline(SyntheticExperiment(SmallSpec(7), dir / "data", dir / "out"));
  const auto kept = pipeline.Screen(Selection::TopK(10));
  EXPECT_EQ(kept, SelectTopK(pipeline.scores(), 10));
  const auto on_disk = Dictionary::Load(pipeline.ArtifactPath("screened.cpe.k10.dict"));
  ASSERT_EQ(on_disk.num_ids(), kept.size());
  for (std::size_t j = 1; j < kept.size(); ++j) {
    EXPECT_EQ(on_disk.keyword(static_cast<KeywordId>(j)),
              pipeline.dictionary().keyword(kept[j]));
  }
  const auto by_threshold = pipeline.Screen(Selection::Threshold(0.0));
  EXPECT_TRUE(fs::exists(pipeline.ArtifactPath("screened.cpe.t0.dict")));
  EXPECT_EQ(by_threshold, SelectByThreshold(pipeline.scores(), 0.0));
}

TEST(Pipeline, SweepScoresOnceAndPrrFallsWithK) {
  const auto dir = ScratchDir("pipeline_sweep");
  Pipeline pipeline(SyntheticExperiment(SmallSpec(8), dir / "data", dir / "out"));
  const auto reports = pipeline.Sweep({5, 10, 20, 40});
  ASSERT_EQ(reports.size(), 4u);
  EXPECT_EQ(pipeline.counters().score, 1u);
  EXPECT_EQ(pipeline.counters().train, 1u);
  EXPECT_EQ(pipeline.counters().retrain, 4u);
  for (std::size_t i = 1; i < reports.size(); ++i) {
    EXPECT_LT(reports[i].prr, reports[i - 1].prr);
    EXPECT_EQ(reports[i].benchmark_acc, reports[0].benchmark_acc);
  }
  std::ifstream in(pipeline.ArtifactPath("sweep.cpe.tsv"));
  EXPECT_EQ(ReadReportTsv(in), reports);

  const std::size_t d = pipeline.dictionary().size();
  const auto single = pipeline.Sweep({d});
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].drr, 0.0);
  EXPECT_EQ(pipeline.counters().score, 1u);
  EXPECT_THROW(pipeline.Sweep({}), StageError);
}

TEST(Pipeline, SweepAccuracyIsNonDecreasingWithinNoise) {
  const std::vector<std::size_t> ks{2, 6, 30};
  std::vector<double> mean(ks.size(), 0.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto dir = ScratchDir("pipeline_sweep_seed");
    Pipeline pipeline(
        SyntheticExperiment(SmallSpec(seed), dir / "data", dir / "out"));
    const auto reports = pipeline.Sweep(ks);
    for (std::size_t i = 0; i < ks.size(); ++i) mean[i] += reports[i].reduced_acc / 5;
  }
  // 100 test documents per seed.
  for (std::size_t i = 1; i < ks.size(); ++i) {
    EXPECT_GE(mean[i], mean[i - 1] - 0.02) << "K=" << ks[i];
  }
}

TEST(Pipeline, FailuresNameTheStage) {
  const auto dir = ScratchDir("pipeline_fail");
  auto config = SyntheticExperiment(SmallSpec(), dir / "data", dir / "out");
  config.train_path = dir / "missing.csv";
  Pipeline pipeline(config);
  try {
    pipeline.RunAll();
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "ingest");
    EXPECT_NE(std::string(e.what()).find("missing.csv"), std::string::npos);
  }

  auto bad_select = SyntheticExperiment(SmallSpec(), dir / "data", dir / "out2");
  bad_select.threshold = 0.5;
  Pipeline both(bad_select);
  try {
    both.RunAll();
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "config");
  }
}

TEST(Pipeline, InterruptedWriteLeavesPartialFile) {
  const auto dir = ScratchDir("pipeline_partial");
  const auto config = SyntheticExperiment(SmallSpec(), dir / "data", dir / "out");
  // A non-empty directory where the dictionary goes makes the final rename fail.
  fs::create_directories(dir / "out" / "dictionary.txt");
  std::ofstream(dir / "out" / "dictionary.txt" / "blocker") << "x";
  Pipeline pipeline(config);
  try {
    pipeline.Ingest();
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "ingest");
  }
  EXPECT_TRUE(fs::is_regular_file(dir / "out" / "dictionary.txt.partial"));
}

TEST(Pipeline, ManifestDigestsEveryArtifact) {
  const auto dir = ScratchDir("pipeline_manifest");
  Pipeline pipeline(SyntheticExperiment(SmallSpec(9), dir / "data", dir / "out"));
  pipeline.RunAll();
  std::set<std::string> listed;
  std::istringstream in(ReadFile(pipeline.ArtifactPath("manifest.txt")));
  for (std::string line; std::getline(in, line);) {
    const auto tab = line.find('\t');
    ASSERT_NE(tab, std::string::npos) << line;
    const std::string name = line.substr(0, tab);
    EXPECT_EQ(line.substr(tab + 1),
              "fnv1a64:" + HexDigest(DigestFile(pipeline.ArtifactPath(name))));
    listed.insert(name);
  }
  std::set<std::string> present;
  for (const auto& entry : fs::directory_iterator(dir / "out")) {
    const std::string name = entry.path().filename().string();
    EXPECT_FALSE(name.ends_with(".partial")) << name;
    if (name != "manifest.txt") present.insert(name);
  }
  EXPECT_EQ(listed, present);
}

}  // namespace
}  // namespace dscreen
