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


#include <benchmark/benchmark.h>

#include "dscreen/model.h"
#include "fixture.h"

namespace dscreen {
namespace {

EncodedDocument BenchDocument(std::size_t length, std::size_t dictionary_size) {
  std::vector<KeywordId> ids(length);
  for (std::size_t t = 0; t < length; ++t) {
    ids[t] = static_cast<KeywordId>(1 + (t * 7919) % dictionary_size);
  }
  return EncodedDocument(std::move(ids), 1);
}

void BM_PredictProba(benchmark::State& state) {
  const auto kind = static_cast<ModelKind>(state.range(0));
  const auto length = static_cast<std::size_t>(state.range(1));
  const auto model = Model::Initialized(bench::BenchConfig(kind, 5000, length), 1);
  const auto doc = BenchDocument(length, 5000);
  for (auto _ : state) benchmark::DoNotOptimize(model.PredictProba(doc));
  state.SetLabel(std::string(ModelKindName(kind)));
}
BENCHMARK(BM_PredictProba)
    ->ArgsProduct({{static_cast<int>(ModelKind::kMeanPool),
                    static_cast<int>(ModelKind::kTextCnn),
                    static_cast<int>(ModelKind::kSimpleRnn)},
                   {30, 60}});

void BM_AccumulateGradient(benchmark::State& state) {
  const auto kind = static_cast<ModelKind>(state.range(0));
  auto model = Model::Initialized(bench::BenchConfig(kind, 5000, 60), 1);
  const auto doc = BenchDocument(60, 5000);
  for (auto _ : state) {
    model.ZeroGrad();
    benchmark::DoNotOptimize(model.AccumulateGradient(doc, 1.0f, nullptr, 0.0));
  }
  state.SetLabel(std::string(ModelKindName(kind)));
}
BENCHMARK(BM_AccumulateGradient)
    ->Arg(static_cast<int>(ModelKind::kMeanPool))
    ->Arg(static_cast<int>(ModelKind::kTextCnn))
    ->Arg(static_cast<int>(ModelKind::kSimpleRnn));

}  // namespace
}  // namespace dscreen
