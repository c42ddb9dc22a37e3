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

#ifndef DSCREEN_TRAINING_H_
#define DSCREEN_TRAINING_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dscreen/corpus.h"
#include "dscreen/model.h"
#include "dscreen/tensor.h"

namespace dscreen {

struct TrainSpec {
  std::size_t batch_size = 128;
  double rho = 0.95;
  double epsilon = 1e-5;
  double weight_decay = 5e-4;
  // Applied to the representation feeding the dense layer.
  double dropout_rate = 0.5;
  std::size_t max_epochs = 200;
  std::size_t patience = 10;
  double val_fraction = 0.1;
  std::uint64_t seed = 0;

  void Validate() const;
};

// -log(p[label]) with p[label] clamped below at 1e-12. Labels are 1-based.
double CrossEntropy(std::span<const float> probs, ClassId label);

// Mean eval-mode cross-entropy over `docs`.
double MeanCrossEntropy(const Model& model,
                        std::span<const EncodedDocument> docs);

// AdaDelta with an additive L2 weight-decay term:
//   g   = grad + weight_decay * x          (decayed parameters only)
//   Eg2 = rho * Eg2 + (1 - rho) * g^2
//   dx  = -sqrt(Edx2 + eps) / sqrt(Eg2 + eps) * g
//   Edx2 = rho * Edx2 + (1 - rho) * dx^2
//   x  += dx
// Frozen leading rows are skipped entirely.
template <typename S>
class BasicAdaDelta {
 public:
  BasicAdaDelta(double rho, double epsilon, double weight_decay)
      : rho_(rho), epsilon_(epsilon), weight_decay_(weight_decay) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must be in (0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (!(weight_decay >= 0.0)) {
      throw std::invalid_argument("weight decay must be >= 0");
    }
  }

  // Throws std::runtime_error naming the parameter if any gradient entry is
  // non-finite; nothing is updated in that case.
  void Step(std::vector<BasicParamTensor<S>>& params) {
    for (const auto& p : params) {
      for (S g : p.grad.data()) {
        if (!std::isfinite(g)) {
          throw std::runtime_error("non-finite gradient in parameter " +
                                   p.name);
        }
      }
    }
    if (sq_grad_.empty()) {
      for (const auto& p : params) {
        sq_grad_.emplace_back(p.value.size(), S{0});
        sq_update_.emplace_back(p.value.size(), S{0});
      }
    }
    if (sq_grad_.size() != params.size()) {
      throw std::invalid_argument("optimizer state does not match parameters");
    }
    const S rho = static_cast<S>(rho_);
    const S one_minus_rho = static_cast<S>(1.0 - rho_);
    const S eps = static_cast<S>(epsilon_);
    const S decay = static_cast<S>(weight_decay_);
    for (std::size_t p = 0; p < params.size(); ++p) {
      auto& param = params[p];
      auto x = param.value.data();
      auto grad = param.grad.data();
      auto& eg2 = sq_grad_[p];
      auto& edx2 = sq_update_[p];
      const std::size_t begin =
          param.frozen_rows * (x.size() / param.value.dim(0));
      const bool decayed = param.decayed && weight_decay_ != 0.0;
      for (std::size_t i = begin; i < x.size(); ++i) {
        S g = grad[i];
        if (decayed) g += decay * x[i];
        eg2[i] = rho * eg2[i] + one_minus_rho * g * g;
        const S dx = -std::sqrt(edx2[i] + eps) / std::sqrt(eg2[i] + eps) * g;
        edx2[i] = rho * edx2[i] + one_minus_rho * dx * dx;
        x[i] += dx;
      }
    }
  }

  const std::vector<std::vector<S>>& sq_grad() const { return sq_grad_; }
  const std::vector<std::vector<S>>& sq_update() const { return sq_update_; }

 private:
  double rho_;
  double epsilon_;
  double weight_decay_;
  std::vector<std::vector<S>> sq_grad_;
  std::vector<std::vector<S>> sq_update_;
};

using AdaDelta = BasicAdaDelta<float>;

struct DataSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

// Per-label seeded split; each label contributes round(val_fraction * n)
// documents to validation while keeping at least one for training. Both
// index lists are sorted ascending.
DataSplit StratifiedSplit(std::span<const EncodedDocument> docs,
                          double val_fraction, std::uint64_t seed);

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_acc = 0.0;
  bool best = false;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainResult {
  Model model;
  std::vector<EpochRecord> log;
  // 0 when no epoch ran.
  std::size_t best_epoch = 0;
};

// Mini-batch AdaDelta on the training part of a stratified split, dropout in
// train mode, validation accuracy after every epoch. Returns the parameters
// of the best validation epoch (earliest on ties) and stops after
// `patience` epochs without improvement. With val_fraction == 0 the
// training split's accuracy drives model selection instead.
TrainResult Train(Model model, std::span<const EncodedDocument> docs,
                  const TrainSpec& spec,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

// Smallest class id among the maxima.
ClassId PredictLabel(std::span<const float> probs);

// Fraction of documents whose predicted label matches. Throws on empty input.
double EvaluateAccuracy(const Model& model,
                        std::span<const EncodedDocument> docs);

// One line per epoch: epoch <TAB> train_loss <TAB> val_acc <TAB> best_flag.
void WriteTrainingLog(std::ostream& out, const std::vector<EpochRecord>& log);
std::vector<EpochRecord> ReadTrainingLog(std::istream& in);

}  // namespace dscreen

#endif  // DSCREEN_TRAINING_H_
