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

#include "dscreen/screening.h"
#include "fixture.h"

namespace dscreen {
namespace {

void BM_CpeScores(benchmark::State& state) {
  const auto kind = static_cast<ModelKind>(state.range(0));
  const auto corpus = bench::PlantedCorpus(static_cast<std::size_t>(state.range(1)), 30);
  const auto model = Model::Initialized(
      bench::BenchConfig(kind, corpus.dictionary().size(), 30), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(CpeScores(model, corpus));
  }
  state.SetLabel(std::string(ModelKindName(kind)));
  state.counters["docs"] = static_cast<double>(corpus.size());
}
BENCHMARK(BM_CpeScores)
    ->ArgsProduct({{static_cast<int>(ModelKind::kMeanPool),
                    static_cast<int>(ModelKind::kTextCnn),
                    static_cast<int>(ModelKind::kSimpleRnn)},
                   {50, 200}})
    ->Unit(benchmark::kMillisecond);

void BM_TfidfScores(benchmark::State& state) {
  const auto corpus = bench::PlantedCorpus(static_cast<std::size_t>(state.range(0)), 30);
  for (auto _ : state) benchmark::DoNotOptimize(TfidfScores(corpus));
}
BENCHMARK(BM_TfidfScores)->Arg(200)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_InvertedIndex(benchmark::State& state) {
  const auto corpus = bench::PlantedCorpus(static_cast<std::size_t>(state.range(0)), 30);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        BuildInvertedIndex(corpus.docs(), corpus.dictionary().num_ids()));
  }
}
BENCHMARK(BM_InvertedIndex)->Arg(1000)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace dscreen
