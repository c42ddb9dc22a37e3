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

#ifndef DSCREEN_LAYERS_H_
#define DSCREEN_LAYERS_H_

// Forward and backward passes for the layers the classifiers are built from.
// Backward functions accumulate (+=) into parameter gradients and write
// input gradients when an output pointer is supplied.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dscreen/dictionary.h"
#include "dscreen/tensor.h"

namespace dscreen {

using Rng = std::mt19937_64;

// Uniform draw in [0, 1) from the top 53 bits of one engine output.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection sampling; n must be >= 1.
inline std::uint64_t UniformIndex(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % n;
}

// ---------------------------------------------------------------- embedding

// Row t of the result is table[ids[t]]; w0 rows are always zero.
template <typename S>
BasicTensor<S> EmbeddingForward(std::span<const KeywordId> ids,
                                const BasicTensor<S>& table) {
  const std::size_t rows = table.dim(0);
  const std::size_t width = table.dim(1);
  BasicTensor<S> out({ids.size(), width});
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] >= rows) {
      throw std::out_of_range("embedding id " + std::to_string(ids[t]) +
                              " >= " + std::to_string(rows) + " rows");
    }
    if (ids[t] == Dictionary::kPadId) continue;
    std::copy_n(table.row(ids[t]).begin(), width, out.row(t).begin());
  }
  return out;
}

template <typename S>
void EmbeddingBackward(std::span<const KeywordId> ids,
                       const BasicTensor<S>& d_out,
                       BasicTensor<S>& table_grad) {
  const std::size_t width = table_grad.dim(1);
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] == Dictionary::kPadId) continue;
    auto src = d_out.row(t);
    auto dst = table_grad.row(ids[t]);
    for (std::size_t c = 0; c < width; ++c) dst[c] += src[c];
  }
}

// ------------------------------------------------- convolution + max-pooling

struct ConvMaxPoolCache {
  // Frame holding the maximum pre-activation, per filter.
  std::vector<std::size_t> argmax;
  // Whether the ReLU passed the maximum through, per filter.
  std::vector<bool> active;
};

// Valid 1-D convolution over time with kernel W[k x d1 x F], ReLU, then the
// maximum over the T-k+1 frames for each filter. Result has F entries.
template <typename S>
BasicTensor<S> Conv1dMaxPoolForward(const BasicTensor<S>& x,
                                    const BasicTensor<S>& weight,
                                    const BasicTensor<S>& bias,
                                    ConvMaxPoolCache* cache = nullptr) {
  const std::size_t steps = x.dim(0);
  const std::size_t width = x.dim(1);
  const std::size_t kernel = weight.dim(0);
  const std::size_t filters = weight.dim(2);
  if (weight.dim(1) != width || bias.size() != filters) {
    throw std::invalid_argument("convolution shape mismatch");
  }
  if (steps < kernel) {
    throw std::invalid_argument(
        "convolution needs T >= k, got T=" + std::to_string(steps) +
        " and k=" + std::to_string(kernel));
  }
  const std::size_t frames = steps - kernel + 1;
  const auto w = weight.data();
  std::vector<S> best(filters, -std::numeric_limits<S>::infinity());
  std::vector<std::size_t> best_frame(filters, 0);
  std::vector<S> z(filters);
  for (std::size_t s = 0; s < frames; ++s) {
    std::copy(bias.data().begin(), bias.data().end(), z.begin());
    for (std::size_t j = 0; j < kernel; ++j) {
      auto xs = x.row(s + j);
      for (std::size_t c = 0; c < width; ++c) {
        const S xv = xs[c];
        if (xv == S{0}) continue;
        const S* wrow = &w[(j * width + c) * filters];
        for (std::size_t f = 0; f < filters; ++f) z[f] += xv * wrow[f];
      }
    }
    for (std::size_t f = 0; f < filters; ++f) {
      if (z[f] > best[f]) {
        best[f] = z[f];
        best_frame[f] = s;
      }
    }
  }
  BasicTensor<S> out({filters});
  if (cache) {
    cache->argmax = best_frame;
    cache->active.assign(filters, false);
  }
  for (std::size_t f = 0; f < filters; ++f) {
    const bool on = best[f] > S{0};
    out[f] = on ? best[f] : S{0};
    if (cache) cache->active[f] = on;
  }
  return out;
}

template <typename S>
void Conv1dMaxPoolBackward(const BasicTensor<S>& x,
                           const BasicTensor<S>& weight,
                           const ConvMaxPoolCache& cache,
                           const BasicTensor<S>& d_out,
                           BasicTensor<S>* d_x, BasicTensor<S>& d_weight,
                           BasicTensor<S>& d_bias) {
  const std::size_t width = x.dim(1);
  const std::size_t kernel = weight.dim(0);
  const std::size_t filters = weight.dim(2);
  const auto w = weight.data();
  auto dw = d_weight.data();
  for (std::size_t f = 0; f < filters; ++f) {
    if (!cache.active[f]) continue;
    const S g = d_out[f];
    d_bias[f] += g;
    const std::size_t s = cache.argmax[f];
    for (std::size_t j = 0; j < kernel; ++j) {
      auto xs = x.row(s + j);
      for (std::size_t c = 0; c < width; ++c) {
        const std::size_t wi = (j * width + c) * filters + f;
        dw[wi] += g * xs[c];
        if (d_x) d_x->at(s + j, c) += g * w[wi];
      }
    }
  }
}

// ------------------------------------------------------- simple recurrence

template <typename S>
struct RnnCache {
  // Hidden states h_0..h_T, one row each; h_0 = 0.
  BasicTensor<S> hidden;
};

// h_t = tanh(x_t Wxh + h_{t-1} Whh + b), h_0 = 0. Returns h_T.
template <typename S>
BasicTensor<S> RnnForward(const BasicTensor<S>& x, const BasicTensor<S>& w_xh,
                          const BasicTensor<S>& w_hh,
                          const BasicTensor<S>& bias,
                          RnnCache<S>* cache = nullptr) {
  const std::size_t steps = x.dim(0);
  const std::size_t in = x.dim(1);
  const std::size_t hid = w_hh.dim(0);
  if (w_xh.dim(0) != in || w_xh.dim(1) != hid || w_hh.dim(1) != hid ||
      bias.size() != hid) {
    throw std::invalid_argument("recurrent layer shape mismatch");
  }
  BasicTensor<S> hidden({steps + 1, hid});
  std::vector<S> a(hid);
  for (std::size_t t = 0; t < steps; ++t) {
    std::copy(bias.data().begin(), bias.data().end(), a.begin());
    auto xt = x.row(t);
    for (std::size_t i = 0; i < in; ++i) {
      const S xv = xt[i];
      if (xv == S{0}) continue;
      auto wr = w_xh.row(i);
      for (std::size_t j = 0; j < hid; ++j) a[j] += xv * wr[j];
    }
    auto prev = hidden.row(t);
    for (std::size_t i = 0; i < hid; ++i) {
      const S hv = prev[i];
      if (hv == S{0}) continue;
      auto wr = w_hh.row(i);
      for (std::size_t j = 0; j < hid; ++j) a[j] += hv * wr[j];
    }
    auto next = hidden.row(t + 1);
    for (std::size_t j = 0; j < hid; ++j) next[j] = std::tanh(a[j]);
  }
  BasicTensor<S> out({hid});
  std::copy_n(hidden.row(steps).begin(), hid, out.data().begin());
  if (cache) cache->hidden = std::move(hidden);
  return out;
}

// Backpropagation through time from dL/dh_T.
template <typename S>
void RnnBackward(const BasicTensor<S>& x, const BasicTensor<S>& w_xh,
                 const BasicTensor<S>& w_hh, const RnnCache<S>& cache,
                 const BasicTensor<S>& d_last, BasicTensor<S>* d_x,
                 BasicTensor<S>& d_w_xh, BasicTensor<S>& d_w_hh,
                 BasicTensor<S>& d_bias) {
  const std::size_t steps = x.dim(0);
  const std::size_t in = x.dim(1);
  const std::size_t hid = w_hh.dim(0);
  std::vector<S> dh(d_last.data().begin(), d_last.data().end());
  std::vector<S> da(hid);
  for (std::size_t t = steps; t-- > 0;) {
    auto ht = cache.hidden.row(t + 1);
    auto prev = cache.hidden.row(t);
    for (std::size_t j = 0; j < hid; ++j) {
      da[j] = dh[j] * (S{1} - ht[j] * ht[j]);
      d_bias[j] += da[j];
    }
    auto xt = x.row(t);
    for (std::size_t i = 0; i < in; ++i) {
      auto dwr = d_w_xh.row(i);
      auto wr = w_xh.row(i);
      S acc{0};
      for (std::size_t j = 0; j < hid; ++j) {
        dwr[j] += xt[i] * da[j];
        acc += wr[j] * da[j];
      }
      if (d_x) d_x->at(t, i) += acc;
    }
    for (std::size_t i = 0; i < hid; ++i) {
      auto dwr = d_w_hh.row(i);
      auto wr = w_hh.row(i);
      S acc{0};
      for (std::size_t j = 0; j < hid; ++j) {
        dwr[j] += prev[i] * da[j];
        acc += wr[j] * da[j];
      }
      dh[i] = acc;
    }
  }
}

// ----------------------------------------------------------- mean pooling

// Mean of the rows whose id is not w0; zero vector when all rows are pad.
template <typename S>
BasicTensor<S> MeanPoolForward(const BasicTensor<S>& x,
                               std::span<const KeywordId> ids) {
  const std::size_t width = x.dim(1);
  BasicTensor<S> out({width});
  std::size_t count = 0;
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] == Dictionary::kPadId) continue;
    ++count;
    auto xt = x.row(t);
    for (std::size_t c = 0; c < width; ++c) out[c] += xt[c];
  }
  if (count > 0) {
    const S inv = S{1} / static_cast<S>(count);
    for (auto& v : out.data()) v *= inv;
  }
  return out;
}

template <typename S>
void MeanPoolBackward(std::span<const KeywordId> ids,
                      const BasicTensor<S>& d_out, BasicTensor<S>& d_x) {
  const std::size_t width = d_x.dim(1);
  std::size_t count = 0;
  for (KeywordId id : ids) count += id != Dictionary::kPadId;
  if (count == 0) return;
  const S inv = S{1} / static_cast<S>(count);
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] == Dictionary::kPadId) continue;
    auto dx = d_x.row(t);
    for (std::size_t c = 0; c < width; ++c) dx[c] += d_out[c] * inv;
  }
}

// ------------------------------------------------------- dense + softmax

template <typename S>
BasicTensor<S> DenseForward(const BasicTensor<S>& h,
                            const BasicTensor<S>& weight,
                            const BasicTensor<S>& bias) {
  const std::size_t in = weight.dim(0);
  const std::size_t out_dim = weight.dim(1);
  if (h.size() != in || bias.size() != out_dim) {
    throw std::invalid_argument("dense layer shape mismatch");
  }
  BasicTensor<S> out({out_dim});
  std::copy(bias.data().begin(), bias.data().end(), out.data().begin());
  for (std::size_t m = 0; m < in; ++m) {
    const S hv = h[m];
    if (hv == S{0}) continue;
    auto wr = weight.row(m);
    for (std::size_t k = 0; k < out_dim; ++k) out[k] += hv * wr[k];
  }
  return out;
}

template <typename S>
void DenseBackward(const BasicTensor<S>& h, const BasicTensor<S>& weight,
                   const BasicTensor<S>& d_out, BasicTensor<S>* d_h,
                   BasicTensor<S>& d_weight, BasicTensor<S>& d_bias) {
  const std::size_t in = weight.dim(0);
  const std::size_t out_dim = weight.dim(1);
  for (std::size_t k = 0; k < out_dim; ++k) d_bias[k] += d_out[k];
  for (std::size_t m = 0; m < in; ++m) {
    auto wr = weight.row(m);
    auto dwr = d_weight.row(m);
    S acc{0};
    for (std::size_t k = 0; k < out_dim; ++k) {
      dwr[k] += h[m] * d_out[k];
      acc += wr[k] * d_out[k];
    }
    if (d_h) (*d_h)[m] += acc;
  }
}

// Numerically stable softmax (max subtraction).
template <typename S>
BasicTensor<S> Softmax(const BasicTensor<S>& logits) {
  BasicTensor<S> out = logits;
  auto v = out.data();
  const S top = *std::max_element(v.begin(), v.end());
  S total{0};
  for (auto& x : v) {
    x = std::exp(x - top);
    total += x;
  }
  for (auto& x : v) x /= total;
  return out;
}

template <typename S>
BasicTensor<S> DenseSoftmax(const BasicTensor<S>& h,
                            const BasicTensor<S>& weight,
                            const BasicTensor<S>& bias) {
  return Softmax(DenseForward(h, weight, bias));
}

// ---------------------------------------------------------------- dropout

enum class Mode { kTrain, kEval };

// Inverted dropout. In train mode each entry is zeroed with probability
// `rate` and survivors are scaled by 1/(1-rate); `scale` (when given)
// receives the per-entry multiplier for the backward pass. Eval mode is the
// identity and draws nothing from `rng`.
template <typename S>
BasicTensor<S> Dropout(const BasicTensor<S>& x, double rate, Mode mode,
                       Rng& rng, std::vector<S>* scale = nullptr) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw std::invalid_argument("dropout rate must be in [0, 1), got " +
                                std::to_string(rate));
  }
  if (mode == Mode::kEval || rate == 0.0) {
    if (scale) scale->assign(x.size(), S{1});
    return x;
  }
  const S keep_scale = static_cast<S>(1.0 / (1.0 - rate));
  BasicTensor<S> out = x;
  if (scale) scale->resize(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const S m = UniformUnit(rng) < rate ? S{0} : keep_scale;
    out[i] *= m;
    if (scale) (*scale)[i] = m;
  }
  return out;
}

}  // namespace dscreen

#endif  // DSCREEN_LAYERS_H_
