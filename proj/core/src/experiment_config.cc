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

#include "dscreen/experiment_config.h"

#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace dscreen {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::size_t ToSize(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size() || v < 0) throw std::invalid_argument("");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected a non-negative integer, got '" +
                                value + "'");
  }
}

double ToDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": expected a number, got '" + value +
                                "'");
  }
}

std::filesystem::path ToPath(const std::string& value,
                             const std::filesystem::path& base_dir) {
  std::filesystem::path p(value);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p;
}

std::string Number(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

}  // namespace

void ExperimentConfig::Set(const std::string& key, const std::string& value,
                           const std::filesystem::path& base_dir) {
  if (key == "dataset.name") {
    dataset_name = value;
  } else if (key == "dataset.train") {
    train_path = ToPath(value, base_dir);
  } else if (key == "dataset.test") {
    test_path = ToPath(value, base_dir);
  } else if (key == "dataset.format") {
    if (value != "csv") {
      throw std::invalid_argument("dataset.format: only 'csv' is supported");
    }
  } else if (key == "dataset.tokenizer") {
    if (value == "whitespace") {
      tokenizer.kind = TokenizerKind::kWhitespace;
    } else if (value == "pretokenized") {
      tokenizer.kind = TokenizerKind::kPretokenized;
    } else {
      throw std::invalid_argument(
          "dataset.tokenizer: expected whitespace or pretokenized");
    }
  } else if (key == "dataset.separator") {
    if (value == "space") {
      tokenizer.separator = ' ';
    } else if (value == "tab") {
      tokenizer.separator = '\t';
    } else if (value.size() == 1) {
      tokenizer.separator = value[0];
    } else {
      throw std::invalid_argument(
          "dataset.separator: expected space, tab or one character");
    }
  } else if (key == "dictionary.min_count") {
    min_count = ToSize(key, value);
  } else if (key == "dictionary.max_size") {
    max_dictionary_size = ToSize(key, value);
  } else if (key == "model.kind") {
    model.kind = ParseModelKind(value);
  } else if (key == "model.d1") {
    model.embedding_dim = ToSize(key, value);
  } else if (key == "model.d2") {
    model.hidden_dim = ToSize(key, value);
  } else if (key == "model.num_classes") {
    model.num_classes = ToSize(key, value);
  } else if (key == "model.sequence_length") {
    model.sequence_length = ToSize(key, value);
  } else if (key == "model.kernel_sizes") {
    model.kernel_sizes.clear();
    std::istringstream parts(value);
    std::string part;
    while (std::getline(parts, part, ',')) {
      model.kernel_sizes.push_back(ToSize(key, Trim(part)));
    }
  } else if (key == "model.filters") {
    model.filters_per_kernel = ToSize(key, value);
  } else if (key == "train.batch_size") {
    train.batch_size = ToSize(key, value);
  } else if (key == "train.rho") {
    train.rho = ToDouble(key, value);
  } else if (key == "train.epsilon") {
    train.epsilon = ToDouble(key, value);
  } else if (key == "train.weight_decay") {
    train.weight_decay = ToDouble(key, value);
  } else if (key == "train.dropout") {
    train.dropout_rate = ToDouble(key, value);
  } else if (key == "train.max_epochs") {
    train.max_epochs = ToSize(key, value);
  } else if (key == "train.patience") {
    train.patience = ToSize(key, value);
  } else if (key == "train.val_fraction") {
    train.val_fraction = ToDouble(key, value);
  } else if (key == "scorer") {
    scorer = ParseScorer(value);
  } else if (key == "select.top_k") {
    top_k = ToSize(key, value);
  } else if (key == "select.threshold") {
    threshold = ToDouble(key, value);
  } else if (key == "score.split") {
    if (value == "train") {
      score_split = ScoreSplit::kTrain;
    } else if (value == "validation") {
      score_split = ScoreSplit::kValidation;
    } else {
      throw std::invalid_argument("score.split: expected train or validation");
    }
  } else if (key == "trr.split") {
    if (value == "train") {
      trr_split = TrrSplit::kTrain;
    } else if (value == "test") {
      trr_split = TrrSplit::kTest;
    } else {
      throw std::invalid_argument("trr.split: expected train or test");
    }
  } else if (key == "seed") {
    seed = ToSize(key, value);
  } else if (key == "threads") {
    threads = ToSize(key, value);
  } else if (key == "output_dir") {
    output_dir = ToPath(value, base_dir);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

ExperimentConfig ExperimentConfig::Parse(std::istream& in,
                                         const std::filesystem::path& base_dir) {
  ExperimentConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key = value");
    }
    try {
      config.Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)), base_dir);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
  }
  return config;
}

ExperimentConfig ExperimentConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  return Parse(in, path.parent_path());
}

void ExperimentConfig::Validate() const {
  if (top_k.has_value() == threshold.has_value()) {
    throw std::invalid_argument(
        "exactly one of select.top_k and select.threshold must be set");
  }
  if (train_path.empty()) throw std::invalid_argument("dataset.train is not set");
  if (test_path.empty()) throw std::invalid_argument("dataset.test is not set");
  if (min_count < 1) throw std::invalid_argument("dictionary.min_count must be >= 1");
  train.Validate();
}

std::string ExperimentConfig::Serialize() const {
  std::ostringstream out;
  out << "dataset.name = " << dataset_name << '\n'
      << "dataset.train = " << train_path.string() << '\n'
      << "dataset.test = " << test_path.string() << '\n'
      << "dataset.format = csv\n"
      << "dataset.tokenizer = "
      << (tokenizer.kind == TokenizerKind::kWhitespace ? "whitespace"
                                                       : "pretokenized")
      << '\n';
  if (tokenizer.separator == ' ') {
    out << "dataset.separator = space\n";
  } else if (tokenizer.separator == '\t') {
    out << "dataset.separator = tab\n";
  } else {
    out << "dataset.separator = " << tokenizer.separator << '\n';
  }
  out << "dictionary.min_count = " << min_count << '\n';
  if (max_dictionary_size) {
    out << "dictionary.max_size = " << *max_dictionary_size << '\n';
  }
  out << "model.kind = " << ModelKindName(model.kind) << '\n'
      << "model.d1 = " << model.embedding_dim << '\n'
      << "model.d2 = " << model.hidden_dim << '\n'
      << "model.num_classes = " << model.num_classes << '\n'
      << "model.sequence_length = " << model.sequence_length << '\n'
      << "model.kernel_sizes = ";
  for (std::size_t i = 0; i < model.kernel_sizes.size(); ++i) {
    out << (i ? "," : "") << model.kernel_sizes[i];
  }
  out << '\n'
      << "model.filters = " << model.filters_per_kernel << '\n'
      << "train.batch_size = " << train.batch_size << '\n'
      << "train.rho = " << Number(train.rho) << '\n'
      << "train.epsilon = " << Number(train.epsilon) << '\n'
      << "train.weight_decay = " << Number(train.weight_decay) << '\n'
      << "train.dropout = " << Number(train.dropout_rate) << '\n'
      << "train.max_epochs = " << train.max_epochs << '\n'
      << "train.patience = " << train.patience << '\n'
      << "train.val_fraction = " << Number(train.val_fraction) << '\n'
      << "scorer = " << ScorerName(scorer) << '\n';
  if (top_k) out << "select.top_k = " << *top_k << '\n';
  if (threshold) out << "select.threshold = " << Number(*threshold) << '\n';
  out << "score.split = "
      << (score_split == ScoreSplit::kTrain ? "train" : "validation") << '\n'
      << "trr.split = " << (trr_split == TrrSplit::kTrain ? "train" : "test")
      << '\n'
      << "seed = " << seed << '\n'
      << "threads = " << threads << '\n'
      << "output_dir = " << output_dir.string() << '\n';
  return out.str();
}

}  // namespace dscreen
