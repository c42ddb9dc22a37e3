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

#include "dscreen/training.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace dscreen {

void TrainSpec::Validate() const {
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must be in (0, 1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(weight_decay >= 0.0)) {
    throw std::invalid_argument("weight decay must be >= 0");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw std::invalid_argument("dropout rate must be in [0, 1)");
  }
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("validation fraction must be in [0, 1)");
  }
}

double CrossEntropy(std::span<const float> probs, ClassId label) {
  if (label < 1 || label > probs.size()) {
    throw std::invalid_argument("label " + std::to_string(label) +
                                " outside 1.." + std::to_string(probs.size()));
  }
  return -std::log(std::max(static_cast<double>(probs[label - 1]), 1e-12));
}

double MeanCrossEntropy(const Model& model,
                        std::span<const EncodedDocument> docs) {
  if (docs.empty()) throw std::invalid_argument("no documents");
  double total = 0.0;
  for (const auto& doc : docs) {
    total += CrossEntropy(model.PredictProba(doc).data(), doc.label());
  }
  return total / static_cast<double>(docs.size());
}

namespace {

void Shuffle(std::vector<std::size_t>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[UniformIndex(rng, i)]);
  }
}

}  // namespace

DataSplit StratifiedSplit(std::span<const EncodedDocument> docs,
                          double val_fraction, std::uint64_t seed) {
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("validation fraction must be in [0, 1)");
  }
  std::map<ClassId, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    by_label[docs[i].label()].push_back(i);
  }
  Rng rng(seed);
  DataSplit split;
  for (auto& [label, members] : by_label) {
    Shuffle(members, rng);
    std::size_t n_val = static_cast<std::size_t>(
        std::llround(val_fraction * static_cast<double>(members.size())));
    n_val = std::min(n_val, members.size() - 1);
    split.validation.insert(split.validation.end(), members.begin(),
                            members.begin() + n_val);
    split.train.insert(split.train.end(), members.begin() + n_val,
                       members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.validation.begin(), split.validation.end());
  return split;
}

ClassId PredictLabel(std::span<const float> probs) {
  auto it = std::max_element(probs.begin(), probs.end());
  return static_cast<ClassId>(it - probs.begin()) + 1;
}

double EvaluateAccuracy(const Model& model,
                        std::span<const EncodedDocument> docs) {
  if (docs.empty()) {
    throw std::invalid_argument("accuracy of an empty document set");
  }
  std::size_t correct = 0;
  for (const auto& doc : docs) {
    correct += PredictLabel(model.PredictProba(doc).data()) == doc.label();
  }
  return static_cast<double>(correct) / static_cast<double>(docs.size());
}

TrainResult Train(Model model, std::span<const EncodedDocument> docs,
                  const TrainSpec& spec,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  spec.Validate();
  if (docs.empty()) throw std::invalid_argument("training corpus is empty");
  const std::size_t num_classes = model.config().num_classes;
  for (const auto& doc : docs) {
    if (doc.label() < 1 || doc.label() > num_classes) {
      throw std::invalid_argument("label " + std::to_string(doc.label()) +
                                  " outside 1.." +
                                  std::to_string(num_classes));
    }
  }

  TrainResult result{model, {}, 0};
  if (spec.max_epochs == 0) return result;

  DataSplit split = StratifiedSplit(docs, spec.val_fraction, spec.seed);
  std::vector<std::size_t> per_class(num_classes + 1, 0);
  for (std::size_t i : split.train) ++per_class[docs[i].label()];
  for (std::size_t k = 1; k <= num_classes; ++k) {
    if (per_class[k] == 0) {
      throw std::invalid_argument("class " + std::to_string(k) +
                                  " is absent from the training split");
    }
  }
  std::vector<EncodedDocument> selection_docs;
  for (std::size_t i : split.validation.empty() ? split.train
                                                : split.validation) {
    selection_docs.push_back(docs[i]);
  }

  Rng shuffle_rng(spec.seed ^ 0x5eed5eed5eed5eedULL);
  Rng dropout_rng(spec.seed ^ 0xd0d0d0d0d0d0d0d0ULL);
  AdaDelta optimizer(spec.rho, spec.epsilon, spec.weight_decay);
  std::vector<std::size_t> order = split.train;
  double best_acc = -1.0;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= spec.max_epochs; ++epoch) {
    Shuffle(order, shuffle_rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += spec.batch_size) {
      const std::size_t end = std::min(order.size(), start + spec.batch_size);
      const float scale = 1.0f / static_cast<float>(end - start);
      model.ZeroGrad();
      for (std::size_t b = start; b < end; ++b) {
        loss_sum += model.AccumulateGradient(docs[order[b]], scale,
                                             &dropout_rng, spec.dropout_rate);
      }
      optimizer.Step(model.params());
    }
    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(order.size());
    record.val_acc = EvaluateAccuracy(model, selection_docs);
    if (record.val_acc > best_acc) {
      best_acc = record.val_acc;
      record.best = true;
      result.model = model;
      result.best_epoch = epoch;
      since_best = 0;
    } else {
      ++since_best;
    }
    result.log.push_back(record);
    if (on_epoch) on_epoch(record);
    if (since_best >= spec.patience) break;
  }
  for (auto& p : result.model.params()) p.grad.Fill(0.0f);
  return result;
}

void WriteTrainingLog(std::ostream& out, const std::vector<EpochRecord>& log) {
  char buffer[128];
  for (const auto& r : log) {
    std::snprintf(buffer, sizeof(buffer), "%zu\t%.17g\t%.17g\t%d\n", r.epoch,
                  r.train_loss, r.val_acc, r.best ? 1 : 0);
    out << buffer;
  }
}

std::vector<EpochRecord> ReadTrainingLog(std::istream& in) {
  std::vector<EpochRecord> log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    EpochRecord r;
    int best = 0;
    fields >> r.epoch >> r.train_loss >> r.val_acc >> best;
    if (!fields) throw std::runtime_error("malformed training log line: " + line);
    r.best = best != 0;
    log.push_back(r);
  }
  return log;
}

}  // namespace dscreen
