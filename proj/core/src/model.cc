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

#include "dscreen/model.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dscreen {

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kTextCnn:
      return "textcnn";
    case ModelKind::kSimpleRnn:
      return "simplernn";
    case ModelKind::kMeanPool:
      return "meanpool";
  }
  return "unknown";
}

ModelKind ParseModelKind(std::string_view name) {
  if (name == "textcnn") return ModelKind::kTextCnn;
  if (name == "simplernn") return ModelKind::kSimpleRnn;
  if (name == "meanpool") return ModelKind::kMeanPool;
  throw std::invalid_argument("unknown model kind '" + std::string(name) +
                              "' (expected textcnn, simplernn or meanpool)");
}

void ModelConfig::Validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("invalid model config: " + what);
  };
  if (dictionary_size < 1) fail("D must be >= 1");
  if (num_classes < 2) fail("K must be >= 2");
  if (embedding_dim < 1) fail("d1 must be >= 1");
  if (sequence_length < 1) fail("T must be >= 1");
  if (kind == ModelKind::kSimpleRnn && hidden_dim < 1) fail("d2 must be >= 1");
  if (kind == ModelKind::kTextCnn) {
    if (kernel_sizes.empty()) fail("textcnn needs at least one kernel size");
    if (filters_per_kernel < 1) fail("filters per kernel must be >= 1");
    std::vector<std::size_t> sorted = kernel_sizes;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 1) fail("kernel sizes must be >= 1");
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      fail("kernel sizes must be distinct");
    }
    if (sequence_length < sorted.back()) {
      fail("T=" + std::to_string(sequence_length) +
           " is shorter than kernel size " + std::to_string(sorted.back()));
    }
  }
}

std::size_t ModelConfig::representation_dim() const {
  switch (kind) {
    case ModelKind::kTextCnn:
      return kernel_sizes.size() * filters_per_kernel;
    case ModelKind::kSimpleRnn:
      return hidden_dim;
    case ModelKind::kMeanPool:
      return embedding_dim;
  }
  return 0;
}

bool operator==(const ModelConfig& a, const ModelConfig& b) {
  if (a.kind != b.kind || a.dictionary_size != b.dictionary_size ||
      a.embedding_dim != b.embedding_dim || a.num_classes != b.num_classes ||
      a.sequence_length != b.sequence_length) {
    return false;
  }
  switch (a.kind) {
    case ModelKind::kSimpleRnn:
      return a.hidden_dim == b.hidden_dim;
    case ModelKind::kTextCnn:
      return a.kernel_sizes == b.kernel_sizes &&
             a.filters_per_kernel == b.filters_per_kernel;
    case ModelKind::kMeanPool:
      return true;
  }
  return false;
}

std::string ModelConfig::Describe() const {
  std::ostringstream out;
  out << "kind=" << ModelKindName(kind) << " D=" << dictionary_size
      << " d1=" << embedding_dim;
  if (kind == ModelKind::kSimpleRnn) out << " d2=" << hidden_dim;
  if (kind == ModelKind::kTextCnn) {
    out << " kernels=";
    for (std::size_t i = 0; i < kernel_sizes.size(); ++i) {
      out << (i ? "," : "") << kernel_sizes[i];
    }
    out << " filters=" << filters_per_kernel;
  }
  out << " K=" << num_classes << " T=" << sequence_length;
  return out.str();
}

std::uint64_t CountParams(const ModelConfig& config, bool include_bias) {
  config.Validate();
  const std::uint64_t d = config.dictionary_size;
  const std::uint64_t d1 = config.embedding_dim;
  const std::uint64_t k = config.num_classes;
  std::uint64_t total = d * d1;
  switch (config.kind) {
    case ModelKind::kSimpleRnn: {
      const std::uint64_t d2 = config.hidden_dim;
      total += d2 * d1 + d2 * d2 + d2 * k;
      if (include_bias) total += d2 + k;
      break;
    }
    case ModelKind::kTextCnn: {
      const std::uint64_t f = config.filters_per_kernel;
      for (std::size_t width : config.kernel_sizes) total += width * d1 * f;
      total += config.kernel_sizes.size() * f * k;
      if (include_bias) total += config.kernel_sizes.size() * f + k;
      break;
    }
    case ModelKind::kMeanPool:
      total += d1 * k;
      if (include_bias) total += k;
      break;
  }
  return total;
}

namespace {

std::string ConvName(std::size_t width, const char* suffix) {
  return "conv" + std::to_string(width) + "." + suffix;
}

}  // namespace

template <typename S>
BasicModel<S>::BasicModel(ModelConfig config) : config_(std::move(config)) {
  config_.Validate();
  const std::size_t d1 = config_.embedding_dim;
  params_.emplace_back("embedding",
                       std::vector<std::size_t>{config_.num_ids(), d1},
                       /*decay=*/true, /*frozen=*/1);
  switch (config_.kind) {
    case ModelKind::kTextCnn:
      for (std::size_t width : config_.kernel_sizes) {
        params_.emplace_back(
            ConvName(width, "weight"),
            std::vector<std::size_t>{width, d1, config_.filters_per_kernel});
        params_.emplace_back(
            ConvName(width, "bias"),
            std::vector<std::size_t>{config_.filters_per_kernel}, false);
      }
      break;
    case ModelKind::kSimpleRnn:
      params_.emplace_back("rnn.w_xh",
                           std::vector<std::size_t>{d1, config_.hidden_dim});
      params_.emplace_back("rnn.w_hh", std::vector<std::size_t>{
                                           config_.hidden_dim,
                                           config_.hidden_dim});
      params_.emplace_back("rnn.bias",
                           std::vector<std::size_t>{config_.hidden_dim}, false);
      break;
    case ModelKind::kMeanPool:
      break;
  }
  params_.emplace_back("dense.weight",
                       std::vector<std::size_t>{config_.representation_dim(),
                                                config_.num_classes});
  params_.emplace_back("dense.bias",
                       std::vector<std::size_t>{config_.num_classes}, false);
}

template <typename S>
BasicModel<S> BasicModel<S>::Initialized(ModelConfig config,
                                         std::uint64_t seed) {
  BasicModel model(std::move(config));
  Rng rng(seed);
  auto uniform = [&rng](double bound) {
    return static_cast<S>((2.0 * UniformUnit(rng) - 1.0) * bound);
  };
  for (auto& p : model.params_) {
    if (!p.decayed) continue;  // biases start at zero
    auto values = p.value.data();
    if (p.name == "embedding") {
      const std::size_t width = p.value.dim(1);
      for (std::size_t i = width; i < values.size(); ++i) {
        values[i] = uniform(0.05);
      }
      continue;
    }
    // Fan-in: every axis but the last (the output axis).
    std::size_t fan_in = p.value.size() / p.value.shape().back();
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (auto& v : values) v = uniform(bound);
  }
  return model;
}

template <typename S>
BasicParamTensor<S>& BasicModel<S>::param(std::string_view name) {
  for (auto& p : params_) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("no parameter named " + std::string(name));
}

template <typename S>
const BasicParamTensor<S>& BasicModel<S>::param(std::string_view name) const {
  return const_cast<BasicModel*>(this)->param(name);
}

template <typename S>
void BasicModel<S>::CheckDocument(const EncodedDocument& doc) const {
  if (doc.length() != config_.sequence_length) {
    throw std::invalid_argument(
        "document length " + std::to_string(doc.length()) +
        " does not match model T=" + std::to_string(config_.sequence_length));
  }
  for (KeywordId id : doc.ids()) {
    if (id >= config_.num_ids()) {
      throw std::invalid_argument(
          "document id " + std::to_string(id) +
          " outside model dictionary of D=" +
          std::to_string(config_.dictionary_size));
    }
  }
}

template <typename S>
BasicTensor<S> BasicModel<S>::Represent(std::span<const KeywordId> ids,
                                        const BasicTensor<S>& embedded) const {
  switch (config_.kind) {
    case ModelKind::kTextCnn: {
      const std::size_t f = config_.filters_per_kernel;
      BasicTensor<S> rep({config_.representation_dim()});
      // params_: embedding, then (weight, bias) per kernel size.
      for (std::size_t i = 0; i < config_.kernel_sizes.size(); ++i) {
        auto pooled = Conv1dMaxPoolForward(embedded, params_[1 + 2 * i].value,
                                           params_[2 + 2 * i].value);
        std::copy(pooled.data().begin(), pooled.data().end(),
                  rep.data().begin() + i * f);
      }
      return rep;
    }
    case ModelKind::kSimpleRnn:
      return RnnForward(embedded, params_[1].value, params_[2].value,
                        params_[3].value);
    case ModelKind::kMeanPool:
      return MeanPoolForward(embedded, ids);
  }
  throw std::logic_error("unreachable model kind");
}

template <typename S>
BasicTensor<S> BasicModel<S>::PredictProba(
    std::span<const KeywordId> ids) const {
  auto embedded = EmbeddingForward(ids, params_.front().value);
  auto rep = Represent(ids, embedded);
  const auto& w = params_[params_.size() - 2].value;
  const auto& b = params_.back().value;
  return DenseSoftmax(rep, w, b);
}

template <typename S>
BasicTensor<S> BasicModel<S>::PredictProba(const EncodedDocument& doc) const {
  CheckDocument(doc);
  return PredictProba(doc.ids());
}

template <typename S>
double BasicModel<S>::Loss(const EncodedDocument& doc) const {
  auto probs = PredictProba(doc);
  if (doc.label() < 1 || doc.label() > config_.num_classes) {
    throw std::invalid_argument("label outside 1..K");
  }
  const double p = static_cast<double>(probs[doc.label() - 1]);
  return -std::log(std::max(p, 1e-12));
}

template <typename S>
double BasicModel<S>::AccumulateGradient(const EncodedDocument& doc, S scale,
                                         Rng* dropout_rng,
                                         double dropout_rate) {
  CheckDocument(doc);
  if (doc.label() < 1 || doc.label() > config_.num_classes) {
    throw std::invalid_argument("label " + std::to_string(doc.label()) +
                                " outside 1.." +
                                std::to_string(config_.num_classes));
  }
  const auto ids = doc.ids();
  auto& embedding = params_.front();
  auto& dense_w = params_[params_.size() - 2];
  auto& dense_b = params_.back();

  // Forward with caches.
  auto embedded = EmbeddingForward(ids, embedding.value);
  const std::size_t n_kernels = config_.kernel_sizes.size();
  std::vector<ConvMaxPoolCache> conv_caches;
  RnnCache<S> rnn_cache;
  BasicTensor<S> rep({config_.representation_dim()});
  switch (config_.kind) {
    case ModelKind::kTextCnn: {
      conv_caches.resize(n_kernels);
      const std::size_t f = config_.filters_per_kernel;
      for (std::size_t i = 0; i < n_kernels; ++i) {
        auto pooled =
            Conv1dMaxPoolForward(embedded, params_[1 + 2 * i].value,
                                 params_[2 + 2 * i].value, &conv_caches[i]);
        std::copy(pooled.data().begin(), pooled.data().end(),
                  rep.data().begin() + i * f);
      }
      break;
    }
    case ModelKind::kSimpleRnn:
      rep = RnnForward(embedded, params_[1].value, params_[2].value,
                       params_[3].value, &rnn_cache);
      break;
    case ModelKind::kMeanPool:
      rep = MeanPoolForward(embedded, ids);
      break;
  }
  std::vector<S> mask;
  BasicTensor<S> dropped =
      dropout_rng ? Dropout(rep, dropout_rate, Mode::kTrain, *dropout_rng, &mask)
                  : rep;
  auto probs = DenseSoftmax(dropped, dense_w.value, dense_b.value);
  const std::size_t y = doc.label() - 1;
  const double loss =
      -std::log(std::max(static_cast<double>(probs[y]), 1e-12));

  // Backward. dL/dlogits = p - onehot(y).
  BasicTensor<S> d_logits = probs;
  d_logits[y] -= S{1};
  for (auto& v : d_logits.data()) v *= scale;
  BasicTensor<S> d_rep({rep.size()});
  DenseBackward(dropped, dense_w.value, d_logits, &d_rep, dense_w.grad,
                dense_b.grad);
  if (dropout_rng) {
    for (std::size_t i = 0; i < d_rep.size(); ++i) d_rep[i] *= mask[i];
  }
  BasicTensor<S> d_embedded(embedded.shape());
  switch (config_.kind) {
    case ModelKind::kTextCnn: {
      const std::size_t f = config_.filters_per_kernel;
      for (std::size_t i = 0; i < n_kernels; ++i) {
        BasicTensor<S> d_pooled({f});
        std::copy_n(d_rep.data().begin() + i * f, f, d_pooled.data().begin());
        auto& w = params_[1 + 2 * i];
        auto& b = params_[2 + 2 * i];
        Conv1dMaxPoolBackward(embedded, w.value, conv_caches[i], d_pooled,
                              &d_embedded, w.grad, b.grad);
      }
      break;
    }
    case ModelKind::kSimpleRnn:
      RnnBackward(embedded, params_[1].value, params_[2].value, rnn_cache,
                  d_rep, &d_embedded, params_[1].grad, params_[2].grad,
                  params_[3].grad);
      break;
    case ModelKind::kMeanPool:
      MeanPoolBackward(ids, d_rep, d_embedded);
      break;
  }
  EmbeddingBackward(ids, d_embedded, embedding.grad);
  return loss;
}

template <typename S>
void BasicModel<S>::ZeroGrad() {
  for (auto& p : params_) p.grad.Fill(S{0});
}

template <typename S>
std::uint64_t BasicModel<S>::num_parameters() const {
  std::uint64_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

template class BasicModel<float>;
template class BasicModel<double>;

}  // namespace dscreen
