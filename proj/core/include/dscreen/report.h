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

#ifndef DSCREEN_REPORT_H_
#define DSCREEN_REPORT_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dscreen/corpus.h"
#include "dscreen/model.h"

namespace dscreen {

// 1 - CountParams(reduced) / CountParams(full), bias excluded. The configs
// must agree on everything except the dictionary size.
double ParameterReductionRatio(const ModelConfig& full,
                               const ModelConfig& reduced);

// 1 - reduced / full, both counting non-w0 keywords.
double DictionaryReductionRatio(std::size_t full, std::size_t reduced);

// 1 - mean effective length after / before.
double SequenceReductionRatio(std::span<const EncodedDocument> before,
                              std::span<const EncodedDocument> after);

// Outcome of training one model and scoring it on the held-out test set.
struct RunSummary {
  ModelConfig config;
  double test_accuracy = 0.0;
  std::size_t test_docs = 0;
  // Digest of the test labels; two runs are comparable only if it matches.
  std::uint64_t test_digest = 0;
  // Mean effective length of the split Trr is measured on.
  double mean_length = 0.0;
};

struct CompressionReport {
  std::string model;
  std::string dataset;
  double benchmark_acc = 0.0;
  double reduced_acc = 0.0;
  double delta_acc = 0.0;
  double prr = 0.0;
  double drr = 0.0;
  double trr = 0.0;
  std::string scorer;
  std::size_t k_kept = 0;
  std::string config_digest;

  friend bool operator==(const CompressionReport&,
                         const CompressionReport&) = default;
};

CompressionReport BuildReport(const std::string& dataset,
                              const std::string& scorer, std::size_t k_kept,
                              const RunSummary& benchmark,
                              const RunSummary& reduced);

// Machine-readable report. An optional "#config=<description>" line precedes
// the header row; columns are exactly
//   model dataset benchmark_acc reduced_acc delta_acc prr drr trr scorer K
// with fractions written at full precision.
void WriteReportTsv(std::ostream& out,
                    const std::vector<CompressionReport>& reports);
std::vector<CompressionReport> ReadReportTsv(std::istream& in);

// Aligned plain-text table with percentages at two decimals.
void WriteReportTable(std::ostream& out,
                      const std::vector<CompressionReport>& reports);

// "95.24"-style rendering of a fraction.
std::string FormatPercent(double fraction);

}  // namespace dscreen

#endif  // DSCREEN_REPORT_H_
