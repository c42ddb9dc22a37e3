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

#ifndef DSCREEN_MODEL_H_
#define DSCREEN_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dscreen/corpus.h"
#include "dscreen/layers.h"
#include "dscreen/tensor.h"

namespace dscreen {

enum class ModelKind { kTextCnn, kSimpleRnn, kMeanPool };

std::string_view ModelKindName(ModelKind kind);
// Accepts "textcnn", "simplernn" and "meanpool".
ModelKind ParseModelKind(std::string_view name);

struct ModelConfig {
  ModelKind kind = ModelKind::kMeanPool;
  // Number of keywords D, excluding w0. The embedding has D + 1 rows.
  std::size_t dictionary_size = 1;
  std::size_t embedding_dim = 128;
  // Recurrent hidden size; ignored by the other kinds.
  std::size_t hidden_dim = 64;
  std::size_t num_classes = 2;
  std::size_t sequence_length = 60;
  // TextCNN only.
  std::vector<std::size_t> kernel_sizes{3, 4, 5};
  std::size_t filters_per_kernel = 128;

  // Throws std::invalid_argument describing the first violated constraint.
  void Validate() const;

  std::size_t num_ids() const { return dictionary_size + 1; }
  // Width of the vector fed to the dense softmax layer.
  std::size_t representation_dim() const;

  // One-line, stable, human-readable description.
  std::string Describe() const;

  // Fields a kind ignores (d2 outside SimpleRNN, kernels and filters outside
  // TextCNN) do not take part in the comparison.
  friend bool operator==(const ModelConfig& a, const ModelConfig& b);
};

// Parameter count. Bias-excluded counts use D * d1 for the embedding so that
// the numbers line up with the usual back-of-envelope arithmetic.
std::uint64_t CountParams(const ModelConfig& config, bool include_bias);

// TextCNN, SimpleRNN or MeanPool classifier:
//   embedding -> {conv+maxpool per kernel, tanh RNN, masked mean} ->
//   dropout -> dense -> softmax.
template <typename S>
class BasicModel {
 public:
  // All parameters zero.
  explicit BasicModel(ModelConfig config);

  // Seeded initialization: embeddings U(-0.05, 0.05) with the w0 row at
  // zero, weights U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
  static BasicModel Initialized(ModelConfig config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  std::vector<BasicParamTensor<S>>& params() { return params_; }
  const std::vector<BasicParamTensor<S>>& params() const { return params_; }
  BasicParamTensor<S>& param(std::string_view name);
  const BasicParamTensor<S>& param(std::string_view name) const;

  // Class probabilities in eval mode.
  BasicTensor<S> PredictProba(std::span<const KeywordId> ids) const;
  // Also checks the document against the configured T and D.
  BasicTensor<S> PredictProba(const EncodedDocument& doc) const;

  // Cross-entropy of one document in eval mode.
  double Loss(const EncodedDocument& doc) const;

  // Forward + backward for one document. Adds `scale` * dLoss/dtheta to the
  // gradient buffers and returns the document loss. Dropout is applied when
  // `dropout_rng` is non-null.
  double AccumulateGradient(const EncodedDocument& doc, S scale,
                            Rng* dropout_rng, double dropout_rate);

  void ZeroGrad();

  std::uint64_t num_parameters() const;

 private:
  void CheckDocument(const EncodedDocument& doc) const;
  BasicTensor<S> Represent(std::span<const KeywordId> ids,
                           const BasicTensor<S>& embedded) const;

  ModelConfig config_;
  std::vector<BasicParamTensor<S>> params_;
};

using Model = BasicModel<float>;

template <typename To, typename From>
BasicModel<To> ConvertModel(const BasicModel<From>& model) {
  BasicModel<To> out(model.config());
  for (std::size_t p = 0; p < model.params().size(); ++p) {
    auto src = model.params()[p].value.data();
    auto dst = out.params()[p].value.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = static_cast<To>(src[i]);
    }
  }
  return out;
}

extern template class BasicModel<float>;
extern template class BasicModel<double>;

}  // namespace dscreen

#endif  // DSCREEN_MODEL_H_
