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

// Command-line front end for the dictionary screening pipeline.
//
//   dscreen synth --out data/ --seed 3
//   dscreen run-all --config exp.conf --out runs/exp1
//   dscreen sweep --config exp.conf --k 50,100,200

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dscreen/pipeline.h"
#include "dscreen/report.h"
#include "dscreen/synthetic.h"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> top_k;
  std::optional<double> threshold;
  bool force = false;
  bool quiet = false;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& flags, bool with_selection) {
  cmd->add_option("--config", flags.config_path, "Experiment config file")
      ->required();
  cmd->add_option("--out", flags.out_dir,
                  "Output directory (overrides output_dir)");
  cmd->add_option("--seed", flags.seed, "Seed (overrides seed)");
  cmd->add_option("--threads", flags.threads, "Scoring threads, 0 = all cores");
  cmd->add_flag("--force", flags.force, "Recompute existing artifacts");
  cmd->add_flag("-q,--quiet", flags.quiet, "Suppress progress output");
  if (with_selection) {
    auto* k = cmd->add_option("--top-k", flags.top_k, "Keep the top K keywords");
    auto* t = cmd->add_option("--threshold", flags.threshold,
                              "Keep keywords at least this important");
    k->excludes(t);
  }
}

dscreen::Pipeline MakePipeline(const CommonFlags& flags) {
  dscreen::ExperimentConfig config;
  try {
    config = dscreen::ExperimentConfig::Load(flags.config_path);
  } catch (const std::exception& e) {
    throw dscreen::StageError("config", e.what());
  }
  if (!flags.out_dir.empty()) config.output_dir = flags.out_dir;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.threads) config.threads = *flags.threads;
  if (flags.top_k) {
    config.top_k = flags.top_k;
    config.threshold.reset();
  }
  if (flags.threshold) {
    config.threshold = flags.threshold;
    config.top_k.reset();
  }
  std::optional<dscreen::Pipeline> made;
  try {
    made.emplace(std::move(config), flags.force);
  } catch (const std::exception& e) {
    throw dscreen::StageError("config", e.what());
  }
  dscreen::Pipeline pipeline = std::move(*made);
  if (!flags.quiet) {
    pipeline.set_logger([](const std::string& m) { std::cerr << m << '\n'; });
  }
  return pipeline;
}

void PrintReports(const std::vector<dscreen::CompressionReport>& reports) {
  dscreen::WriteReportTable(std::cout, reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dictionary screening for text-classification compression"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::vector<std::size_t> sweep_ks;
  dscreen::SyntheticSpec synth_spec;
  std::string synth_out;

  auto* ingest = app.add_subcommand("ingest", "Build dictionary and encode");
  AddCommonFlags(ingest, flags, false);
  auto* train = app.add_subcommand("train", "Train the benchmark model");
  AddCommonFlags(train, flags, false);
  auto* score = app.add_subcommand("score", "Score every keyword");
  AddCommonFlags(score, flags, false);
  auto* screen = app.add_subcommand("screen", "Select the screened dictionary");
  AddCommonFlags(screen, flags, true);
  auto* retrain = app.add_subcommand("retrain", "Retrain on the screened corpus");
  AddCommonFlags(retrain, flags, true);
  auto* report = app.add_subcommand("report", "Evaluate and write the report");
  AddCommonFlags(report, flags, true);
  auto* run_all = app.add_subcommand("run-all", "Run every stage");
  AddCommonFlags(run_all, flags, true);
  auto* sweep = app.add_subcommand("sweep", "Report for several K values");
  AddCommonFlags(sweep, flags, false);
  sweep->add_option("--k", sweep_ks, "Comma-separated K values")
      ->required()
      ->delimiter(',');

  auto* synth = app.add_subcommand("synth", "Write a planted-keyword dataset");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_spec.seed, "Generator seed");
  synth->add_option("--classes", synth_spec.num_classes, "Number of classes");
  synth->add_option("--docs-per-class", synth_spec.docs_per_class,
                    "Training documents per class");
  synth->add_option("--test-docs-per-class", synth_spec.test_docs_per_class,
                    "Test documents per class");
  synth->add_option("--vocab", synth_spec.vocab_size, "Vocabulary size");
  synth->add_option("--planted", synth_spec.planted_per_class,
                    "Planted keywords per class");
  synth->add_option("--length", synth_spec.doc_length, "Tokens per document");
  synth->add_option("--noise", synth_spec.noise_rate, "Noise token rate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      try {
        dscreen::WriteSynthetic(dscreen::MakeSynthetic(synth_spec), synth_out);
      } catch (const std::exception& e) {
        throw dscreen::StageError("synth", e.what());
      }
      std::cerr << "wrote train.csv, test.csv, planted.tsv to " << synth_out
                << '\n';
      return 0;
    }
    auto pipeline = MakePipeline(flags);
    const auto& config = pipeline.config();
    if (ingest->parsed()) {
      pipeline.Ingest();
    } else if (train->parsed()) {
      pipeline.TrainBenchmark();
    } else if (score->parsed()) {
      pipeline.Score();
    } else if (screen->parsed()) {
      auto kept = pipeline.Screen(dscreen::Selection::FromConfig(config));
      std::cout << kept.size() - 1 << " keywords kept\n";
    } else if (retrain->parsed()) {
      pipeline.Retrain(dscreen::Selection::FromConfig(config));
    } else if (report->parsed()) {
      PrintReports({pipeline.Report(dscreen::Selection::FromConfig(config))});
    } else if (run_all->parsed()) {
      PrintReports({pipeline.RunAll()});
    } else if (sweep->parsed()) {
      PrintReports(pipeline.Sweep(sweep_ks));
    }
  } catch (const dscreen::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
