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

#include "dscreen/report.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dscreen {

double ParameterReductionRatio(const ModelConfig& full,
                               const ModelConfig& reduced) {
  ModelConfig same_d = reduced;
  same_d.dictionary_size = full.dictionary_size;
  if (!(same_d == full)) {
    throw std::invalid_argument(
        "Prr needs configs that differ only in D: " + full.Describe() +
        " vs " + reduced.Describe());
  }
  const double before = static_cast<double>(CountParams(full, false));
  const double after = static_cast<double>(CountParams(reduced, false));
  return 1.0 - after / before;
}

double DictionaryReductionRatio(std::size_t full, std::size_t reduced) {
  if (full == 0) throw std::invalid_argument("Drr of an empty dictionary");
  if (reduced > full) {
    throw std::invalid_argument("reduced dictionary larger than full");
  }
  return 1.0 - static_cast<double>(reduced) / static_cast<double>(full);
}

double SequenceReductionRatio(std::span<const EncodedDocument> before,
                              std::span<const EncodedDocument> after) {
  if (before.size() != after.size()) {
    throw std::invalid_argument("Trr needs the same documents before and after");
  }
  const double mean_before = MeanTrueLength(before);
  if (mean_before == 0.0) {
    throw std::invalid_argument("Trr undefined: mean length before is zero");
  }
  return 1.0 - MeanTrueLength(after) / mean_before;
}

CompressionReport BuildReport(const std::string& dataset,
                              const std::string& scorer, std::size_t k_kept,
                              const RunSummary& benchmark,
                              const RunSummary& reduced) {
  if (benchmark.test_docs != reduced.test_docs ||
      benchmark.test_digest != reduced.test_digest) {
    throw std::invalid_argument(
        "benchmark and reduced runs were evaluated on different test sets");
  }
  if (benchmark.mean_length == 0.0) {
    throw std::invalid_argument("Trr undefined: mean length before is zero");
  }
  CompressionReport report;
  report.model = std::string(ModelKindName(benchmark.config.kind));
  report.dataset = dataset;
  report.benchmark_acc = benchmark.test_accuracy;
  report.reduced_acc = reduced.test_accuracy;
  report.delta_acc = benchmark.test_accuracy - reduced.test_accuracy;
  report.prr = ParameterReductionRatio(benchmark.config, reduced.config);
  report.drr = DictionaryReductionRatio(benchmark.config.dictionary_size,
                                        reduced.config.dictionary_size);
  report.trr = 1.0 - reduced.mean_length / benchmark.mean_length;
  report.scorer = scorer;
  report.k_kept = k_kept;
  report.config_digest = benchmark.config.Describe();
  return report;
}

namespace {

constexpr const char* kColumns[] = {"model",       "dataset",   "benchmark_acc",
                                    "reduced_acc", "delta_acc", "prr",
                                    "drr",         "trr",       "scorer",
                                    "K"};

std::string Full(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    auto end = line.find('\t', begin);
    out.push_back(line.substr(begin, end - begin));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return out;
}

}  // namespace

std::string FormatPercent(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", fraction * 100.0);
  std::string s = buffer;
  if (s == "-0.00") s = "0.00";
  return s;
}

void WriteReportTsv(std::ostream& out,
                    const std::vector<CompressionReport>& reports) {
  if (!reports.empty() && !reports.front().config_digest.empty()) {
    out << "#config=" << reports.front().config_digest << '\n';
  }
  for (std::size_t c = 0; c < std::size(kColumns); ++c) {
    out << (c ? "\t" : "") << kColumns[c];
  }
  out << '\n';
  for (const auto& r : reports) {
    out << r.model << '\t' << r.dataset << '\t' << Full(r.benchmark_acc)
        << '\t' << Full(r.reduced_acc) << '\t' << Full(r.delta_acc) << '\t'
        << Full(r.prr) << '\t' << Full(r.drr) << '\t' << Full(r.trr) << '\t'
        << r.scorer << '\t' << r.k_kept << '\n';
  }
}

std::vector<CompressionReport> ReadReportTsv(std::istream& in) {
  std::vector<CompressionReport> reports;
  std::string line;
  std::string digest;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.starts_with("#config=")) {
      digest = line.substr(8);
      continue;
    }
    auto fields = SplitTabs(line);
    if (!header_seen) {
      if (fields.size() != std::size(kColumns) ||
          !std::equal(fields.begin(), fields.end(), std::begin(kColumns))) {
        throw std::runtime_error("unexpected report header: " + line);
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != std::size(kColumns)) {
      throw std::runtime_error("malformed report row: " + line);
    }
    CompressionReport r;
    r.model = fields[0];
    r.dataset = fields[1];
    r.benchmark_acc = std::strtod(fields[2].c_str(), nullptr);
    r.reduced_acc = std::strtod(fields[3].c_str(), nullptr);
    r.delta_acc = std::strtod(fields[4].c_str(), nullptr);
    r.prr = std::strtod(fields[5].c_str(), nullptr);
    r.drr = std::strtod(fields[6].c_str(), nullptr);
    r.trr = std::strtod(fields[7].c_str(), nullptr);
    r.scorer = fields[8];
    r.k_kept = std::stoull(fields[9]);
    r.config_digest = digest;
    reports.push_back(std::move(r));
  }
  if (!header_seen) throw std::runtime_error("report has no header row");
  return reports;
}

void WriteReportTable(std::ostream& out,
                      const std::vector<CompressionReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Model", "Dataset", "Benchmark Acc", "Reduced Acc", "ΔAcc",
                  "Prr", "Drr", "Trr", "Scorer", "K"});
  for (const auto& r : reports) {
    rows.push_back({r.model, r.dataset, FormatPercent(r.benchmark_acc),
                    FormatPercent(r.reduced_acc), FormatPercent(r.delta_acc),
                    FormatPercent(r.prr), FormatPercent(r.drr),
                    FormatPercent(r.trr), r.scorer, std::to_string(r.k_kept)});
  }
  // Display width: count UTF-8 lead bytes only.
  auto width = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) w += (c & 0xC0) != 0x80;
    return w;
  };
  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], width(row[c]));
    }
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::size_t pad = widths[c] - width(row[c]);
      // Text columns left-aligned, numbers right-aligned.
      const bool left = c < 2 || c == 8;
      if (c) out << "  ";
      if (left) {
        out << row[c] << std::string(c + 1 == row.size() ? 0 : pad, ' ');
      } else {
        out << std::string(pad, ' ') << row[c];
      }
    }
    out << '\n';
  }
}

}  // namespace dscreen
