// Copyright 2026 The IfP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Classification metrics, closure-aware temporal awareness, bootstrap
// intervals and calibration. Labels are dense indices into a label list.

#ifndef IFP_EVAL_H_
#define IFP_EVAL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ifp/algebra.h"
#include "ifp/corpus.h"
#include "ifp/decoder.h"

namespace ifp {

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Label = std::size_t;

double Accuracy(std::span<const Label> pred, std::span<const Label> gold);

struct LabelF1 {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // gold occurrences
  std::size_t predicted = 0;  // predicted occurrences
};

// One entry per label of `labels`; every gold label must index into it.
std::vector<LabelF1> PerLabelF1(std::span<const Label> pred,
                                std::span<const Label> gold,
                                std::span<const std::string> labels);

// Unweighted mean of PerLabelF1. Labels never predicted nor observed count
// as zero.
double MacroF1(std::span<const Label> pred, std::span<const Label> gold,
               std::span<const std::string> labels);

std::vector<std::string> LabelNames(std::span<const PointRelation> labels);
std::vector<std::string> LabelNames(std::span<const AllenRelation> labels);
std::vector<Label> ToLabels(std::span<const PointRelation> values);
// Positions in `label_set`; throws std::invalid_argument for a value outside.
std::vector<Label> ToLabels(std::span<const AllenRelation> values,
                            std::span<const AllenRelation> label_set);

// ---------------------------------------------------------------------------
// Temporal awareness.

struct DocumentLinks {
  std::string doc_id;
  std::vector<IntervalLink> gold;
  std::vector<IntervalLink> pred;
};

struct AwarenessCounts {
  std::size_t precision_hits = 0;   // reduced pred links entailed by gold
  std::size_t precision_total = 0;  // reduced pred links
  std::size_t recall_hits = 0;      // reduced gold links entailed by pred
  std::size_t recall_total = 0;     // reduced gold links
  // Sides scored from their unclosed link sets.
  bool gold_inconsistent = false;
  bool pred_inconsistent = false;

  AwarenessCounts& operator+=(const AwarenessCounts& o);
};

struct AwarenessScore {
  double precision = 0.0;
  double recall = 0.0;
  double f_a = 0.0;
  AwarenessCounts counts;
  std::size_t inconsistent_gold_documents = 0;
  std::size_t inconsistent_pred_documents = 0;
};

// Counts for one document. A side whose links admit no timeline is reduced
// to itself and entails only its own links (up to orientation).
AwarenessCounts DocumentAwareness(std::span<const IntervalLink> gold,
                                  std::span<const IntervalLink> pred,
                                  const ClosureOptions& options = {});

// Micro-aggregated over documents.
AwarenessScore TemporalAwareness(std::span<const DocumentLinks> docs,
                                 const ClosureOptions& options = {},
                                 unsigned workers = 1);

AwarenessScore ScoreFromCounts(const AwarenessCounts& counts);

// ---------------------------------------------------------------------------
// Bootstrap.

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
};

// Metric evaluated on a resample, given as indices into the paired data.
using ResampleMetric = std::function<double(std::span<const std::size_t>)>;

// Percentile interval of `metric` over `resamples` draws of n indices with
// replacement. Percentiles interpolate linearly between order statistics.
ConfidenceInterval BootstrapCI(const ResampleMetric& metric, std::size_t n,
                               std::size_t resamples = 1000,
                               double level = 0.95, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Calibration.

struct CalibrationBin {
  double mean_confidence = 0.0;
  double positive_fraction = 0.0;
  std::size_t count = 0;
};

struct LabelCalibration {
  std::string label;
  std::vector<CalibrationBin> bins;
  double ece = 0.0;
  std::size_t support = 0;
};

struct CalibrationReport {
  std::vector<LabelCalibration> labels;
  double ece = 0.0;  // per-label ECE weighted by support
  std::size_t bins = 0;
};

// One-vs-rest curves over equal-count bins of the predicted confidence.
// Every row of `probabilities` has one entry per label and sums to 1 within
// 1e-6. With fewer examples than bins the bin count drops to the number of
// examples; no examples throws InsufficientData.
CalibrationReport Calibrate(std::span<const std::vector<double>> probabilities,
                            std::span<const Label> gold,
                            std::span<const std::string> labels,
                            std::size_t bins = 20);

// label,bin,mean_confidence,positive_fraction,count
std::string CalibrationCsv(const CalibrationReport& report);
std::string CalibrationSvg(const CalibrationReport& report);

// ---------------------------------------------------------------------------
// Reports.

struct EvalReport {
  std::map<std::string, std::string> config;
  std::size_t examples = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::vector<LabelF1> per_label;
  // Per-label tables for subsets of the examples, such as one per pair key.
  std::vector<std::pair<std::string, std::vector<LabelF1>>> breakdowns;
  std::optional<AwarenessScore> awareness;
  std::map<std::string, ConfidenceInterval> bootstrap;
  std::optional<CalibrationReport> calibration;
};

struct EvalOptions {
  std::size_t resamples = 1000;
  double level = 0.95;
  std::uint64_t bootstrap_seed = 0;
  std::size_t calibration_bins = 20;
  ClosureOptions closure;
  unsigned workers = 1;
};

class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scores interval predictions against the gold links of `docs`. Each gold
// link needs exactly one prediction for the same (doc, source, target).
EvalReport EvaluateIntervals(std::span<const Document> docs,
                             std::span<const PairPrediction> predictions,
                             std::span<const AllenRelation> label_set,
                             const EvalOptions& options = {});

// Point-level accuracy and F1 over <, =, > with a per-pair-key breakdown.
EvalReport EvaluatePoints(std::span<const PointExample> gold,
                          std::span<const PointRelation> pred,
                          const EvalOptions& options = {});

// Key-value text with nested per-label tables.
std::string FormatReport(const EvalReport& report);

// Writes `<stem>.txt` and `<stem>.jsonl`.
void WriteReport(const std::filesystem::path& stem, const EvalReport& report);

}  // namespace ifp

#endif  // IFP_EVAL_H_
