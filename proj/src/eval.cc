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

#include "ifp/eval.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "jsonl.h"
#include "parallel.h"

namespace ifp {
namespace {

void CheckPaired(std::size_t pred, std::size_t gold) {
  if (pred != gold) {
    throw LengthMismatch(fmt::format("{} predictions for {} gold labels", pred,
                                     gold));
  }
  if (gold == 0) throw InsufficientData("no examples to score");
}

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double Harmonic(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

// A link set prepared for awareness scoring.
struct ScoredSide {
  std::optional<PointOrder> order;  // empty when the links are inconsistent
  std::set<IntervalLink> raw;       // canonical orientation
  std::vector<IntervalLink> reduced;

  bool Entails(const IntervalLink& link) const {
    if (order) return ifp::Entails(*order, link);
    return raw.contains(Canonicalize(link));
  }
};

ScoredSide Prepare(std::span<const IntervalLink> links,
                   const ClosureOptions& options) {
  ScoredSide side;
  for (const IntervalLink& l : links) side.raw.insert(Canonicalize(l));
  try {
    side.order.emplace(LinksToPointGraph(links, options));
    side.reduced = TransitiveReduction(links, options);
  } catch (const InconsistencyError&) {
    side.order.reset();
    side.reduced.assign(side.raw.begin(), side.raw.end());
  }
  return side;
}

// Labels, one per resample index.
double SubsetAccuracy(std::span<const Label> pred, std::span<const Label> gold,
                      std::span<const std::size_t> idx) {
  std::size_t hits = 0;
  for (std::size_t i : idx) hits += pred[i] == gold[i];
  return Ratio(hits, idx.size());
}

double SubsetMacroF1(std::span<const Label> pred, std::span<const Label> gold,
                     std::size_t num_labels, std::span<const std::size_t> idx) {
  std::vector<std::size_t> tp(num_labels), np(num_labels), ng(num_labels);
  for (std::size_t i : idx) {
    ++np[pred[i]];
    ++ng[gold[i]];
    if (pred[i] == gold[i]) ++tp[pred[i]];
  }
  double total = 0.0;
  for (std::size_t l = 0; l < num_labels; ++l) {
    total += Harmonic(Ratio(tp[l], np[l]), Ratio(tp[l], ng[l]));
  }
  return num_labels == 0 ? 0.0 : total / static_cast<double>(num_labels);
}

void AddBootstrap(EvalReport& report, std::span<const Label> pred,
                  std::span<const Label> gold, std::size_t num_labels,
                  const EvalOptions& options) {
  if (options.resamples == 0) return;
  report.bootstrap["accuracy"] = BootstrapCI(
      [&](std::span<const std::size_t> idx) {
        return SubsetAccuracy(pred, gold, idx);
      },
      gold.size(), options.resamples, options.level, options.bootstrap_seed);
  report.bootstrap["macro_f1"] = BootstrapCI(
      [&](std::span<const std::size_t> idx) {
        return SubsetMacroF1(pred, gold, num_labels, idx);
      },
      gold.size(), options.resamples, options.level, options.bootstrap_seed);
}

void FillConfig(EvalReport& report, const EvalOptions& options) {
  report.config.emplace("bootstrap_resamples",
                        std::to_string(options.resamples));
  report.config.emplace("bootstrap_level", fmt::format("{}", options.level));
  report.config.emplace("bootstrap_seed",
                        std::to_string(options.bootstrap_seed));
  report.config.emplace("calibration_bins",
                        std::to_string(options.calibration_bins));
  report.config.emplace("strict_intervals",
                        options.closure.strict_intervals ? "true" : "false");
}

std::string Percent(double v) { return fmt::format("{:.4f}", v); }

}  // namespace

double Accuracy(std::span<const Label> pred, std::span<const Label> gold) {
  CheckPaired(pred.size(), gold.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += pred[i] == gold[i];
  return Ratio(hits, gold.size());
}

std::vector<LabelF1> PerLabelF1(std::span<const Label> pred,
                                std::span<const Label> gold,
                                std::span<const std::string> labels) {
  CheckPaired(pred.size(), gold.size());
  const std::size_t n = labels.size();
  std::vector<std::size_t> tp(n), np(n), ng(n);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= n || pred[i] >= n) {
      throw std::invalid_argument("label index outside the label set");
    }
    ++np[pred[i]];
    ++ng[gold[i]];
    if (pred[i] == gold[i]) ++tp[pred[i]];
  }
  std::vector<LabelF1> out;
  out.reserve(n);
  for (std::size_t l = 0; l < n; ++l) {
    LabelF1 row;
    row.label = labels[l];
    row.precision = Ratio(tp[l], np[l]);
    row.recall = Ratio(tp[l], ng[l]);
    row.f1 = Harmonic(row.precision, row.recall);
    row.support = ng[l];
    row.predicted = np[l];
    out.push_back(std::move(row));
  }
  return out;
}

double MacroF1(std::span<const Label> pred, std::span<const Label> gold,
               std::span<const std::string> labels) {
  const std::vector<LabelF1> rows = PerLabelF1(pred, gold, labels);
  if (rows.empty()) return 0.0;
  double total = 0.0;
  for (const LabelF1& r : rows) total += r.f1;
  return total / static_cast<double>(rows.size());
}

std::vector<std::string> LabelNames(std::span<const PointRelation> labels) {
  std::vector<std::string> out;
  for (PointRelation r : labels) out.emplace_back(ToString(r));
  return out;
}

std::vector<std::string> LabelNames(std::span<const AllenRelation> labels) {
  std::vector<std::string> out;
  for (AllenRelation r : labels) out.emplace_back(ToString(r));
  return out;
}

std::vector<Label> ToLabels(std::span<const PointRelation> values) {
  std::vector<Label> out;
  out.reserve(values.size());
  for (PointRelation r : values) out.push_back(static_cast<Label>(r));
  return out;
}

std::vector<Label> ToLabels(std::span<const AllenRelation> values,
                            std::span<const AllenRelation> label_set) {
  std::vector<Label> out;
  out.reserve(values.size());
  for (AllenRelation r : values) {
    const auto it = std::find(label_set.begin(), label_set.end(), r);
    if (it == label_set.end()) {
      throw std::invalid_argument(fmt::format(
          "relation {} is outside the label set", ToString(r)));
    }
    out.push_back(static_cast<Label>(it - label_set.begin()));
  }
  return out;
}

// ---------------------------------------------------------------------------

AwarenessCounts& AwarenessCounts::operator+=(const AwarenessCounts& o) {
  precision_hits += o.precision_hits;
  precision_total += o.precision_total;
  recall_hits += o.recall_hits;
  recall_total += o.recall_total;
  gold_inconsistent = gold_inconsistent || o.gold_inconsistent;
  pred_inconsistent = pred_inconsistent || o.pred_inconsistent;
  return *this;
}

AwarenessCounts DocumentAwareness(std::span<const IntervalLink> gold,
                                  std::span<const IntervalLink> pred,
                                  const ClosureOptions& options) {
  const ScoredSide g = Prepare(gold, options);
  const ScoredSide p = Prepare(pred, options);
  AwarenessCounts counts;
  counts.gold_inconsistent = !g.order.has_value();
  counts.pred_inconsistent = !p.order.has_value();
  counts.precision_total = p.reduced.size();
  for (const IntervalLink& l : p.reduced) counts.precision_hits += g.Entails(l);
  counts.recall_total = g.reduced.size();
  for (const IntervalLink& l : g.reduced) counts.recall_hits += p.Entails(l);
  return counts;
}

AwarenessScore ScoreFromCounts(const AwarenessCounts& counts) {
  AwarenessScore score;
  score.counts = counts;
  score.precision = Ratio(counts.precision_hits, counts.precision_total);
  score.recall = Ratio(counts.recall_hits, counts.recall_total);
  score.f_a = Harmonic(score.precision, score.recall);
  return score;
}

AwarenessScore TemporalAwareness(std::span<const DocumentLinks> docs,
                                 const ClosureOptions& options,
                                 unsigned workers) {
  std::vector<AwarenessCounts> per_doc(docs.size());
  internal::ParallelFor(docs.size(), workers, [&](std::size_t i) {
    per_doc[i] = DocumentAwareness(docs[i].gold, docs[i].pred, options);
  });
  AwarenessCounts total;
  std::size_t bad_gold = 0;
  std::size_t bad_pred = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const AwarenessCounts& c = per_doc[i];
    if (c.gold_inconsistent) {
      ++bad_gold;
      spdlog::warn("gold links of {} are inconsistent; scoring them unclosed",
                   docs[i].doc_id);
    }
    if (c.pred_inconsistent) {
      ++bad_pred;
      spdlog::warn(
          "predicted links of {} are inconsistent; scoring them unclosed",
          docs[i].doc_id);
    }
    total += c;
  }
  AwarenessScore score = ScoreFromCounts(total);
  score.inconsistent_gold_documents = bad_gold;
  score.inconsistent_pred_documents = bad_pred;
  return score;
}

// ---------------------------------------------------------------------------

ConfidenceInterval BootstrapCI(const ResampleMetric& metric, std::size_t n,
                               std::size_t resamples, double level,
                               std::uint64_t seed) {
  if (n == 0) throw InsufficientData("bootstrap needs data");
  if (resamples == 0) throw std::invalid_argument("bootstrap needs resamples");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(n);
  std::vector<double> values;
  values.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    for (std::size_t& i : idx) i = rng() % n;
    values.push_back(metric(idx));
  }
  std::sort(values.begin(), values.end());
  auto percentile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + (values[hi] - values[lo]) * frac;
  };
  const double tail = (1.0 - level) / 2.0;
  return {percentile(tail), percentile(1.0 - tail)};
}

// ---------------------------------------------------------------------------

CalibrationReport Calibrate(std::span<const std::vector<double>> probabilities,
                            std::span<const Label> gold,
                            std::span<const std::string> labels,
                            std::size_t bins) {
  if (probabilities.size() != gold.size()) {
    throw LengthMismatch(fmt::format("{} distributions for {} gold labels",
                                     probabilities.size(), gold.size()));
  }
  const std::size_t n = gold.size();
  if (n == 0) throw InsufficientData("calibration needs at least one example");
  if (bins == 0) throw std::invalid_argument("calibration needs bins");
  if (n < bins) {
    spdlog::warn("{} examples for {} calibration bins; using {} bins", n, bins,
                 n);
    bins = n;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double>& row = probabilities[i];
    if (row.size() != labels.size()) {
      throw std::invalid_argument(
          fmt::format("distribution {} has {} entries for {} labels", i,
                      row.size(), labels.size()));
    }
    double sum = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) {
        throw std::invalid_argument(
            fmt::format("distribution {} has a negative entry", i));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw std::invalid_argument(
          fmt::format("distribution {} sums to {}", i, sum));
    }
    if (gold[i] >= labels.size()) {
      throw std::invalid_argument("gold label outside the label set");
    }
  }

  CalibrationReport report;
  report.bins = bins;
  std::size_t total_support = 0;
  double weighted = 0.0;
  std::vector<std::size_t> order(n);
  for (std::size_t l = 0; l < labels.size(); ++l) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return probabilities[a][l] < probabilities[b][l];
                     });
    LabelCalibration curve;
    curve.label = labels[l];
    for (std::size_t i = 0; i < n; ++i) curve.support += gold[i] == l;
    // Sum over bins of |positives - confidence mass|, divided by n.
    double gap = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
      const std::size_t begin = b * n / bins;
      const std::size_t end = (b + 1) * n / bins;
      CalibrationBin bin;
      bin.count = end - begin;
      double conf = 0.0;
      std::size_t positives = 0;
      for (std::size_t k = begin; k < end; ++k) {
        conf += probabilities[order[k]][l];
        positives += gold[order[k]] == l;
      }
      bin.mean_confidence = conf / static_cast<double>(bin.count);
      bin.positive_fraction = Ratio(positives, bin.count);
      gap += std::abs(static_cast<double>(positives) - conf);
      curve.bins.push_back(bin);
    }
    curve.ece = gap / static_cast<double>(n);
    total_support += curve.support;
    weighted += curve.ece * static_cast<double>(curve.support);
    report.labels.push_back(std::move(curve));
  }
  report.ece = total_support == 0
                   ? 0.0
                   : weighted / static_cast<double>(total_support);
  return report;
}

std::string CalibrationCsv(const CalibrationReport& report) {
  std::string out = "label,bin,mean_confidence,positive_fraction,count\n";
  for (const LabelCalibration& curve : report.labels) {
    for (std::size_t b = 0; b < curve.bins.size(); ++b) {
      const CalibrationBin& bin = curve.bins[b];
      out += fmt::format("{},{},{:.17g},{:.17g},{}\n", curve.label, b,
                         bin.mean_confidence, bin.positive_fraction,
                         bin.count);
    }
  }
  return out;
}

std::string CalibrationSvg(const CalibrationReport& report) {
  constexpr int kSize = 400;
  constexpr int kMargin = 40;
  constexpr int kPlot = kSize - 2 * kMargin;
  constexpr std::array<std::string_view, 6> kColors = {
      "#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"};
  auto x = [](double v) { return kMargin + v * kPlot; };
  auto y = [](double v) { return kMargin + (1.0 - v) * kPlot; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" "
      "height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n",
      kSize);
  out += fmt::format(
      "<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{1}\" fill=\"none\" "
      "stroke=\"#000\"/>\n",
      kMargin, kPlot);
  out += fmt::format(
      "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999\" "
      "stroke-dasharray=\"4 4\"/>\n",
      x(0), y(0), x(1), y(1));
  out += fmt::format(
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">mean "
      "predicted confidence</text>\n",
      kSize / 2, kSize - 10);
  out += fmt::format(
      "<text x=\"12\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\" "
      "transform=\"rotate(-90 12 {})\">fraction of positives</text>\n",
      kSize / 2, kSize / 2);
  for (std::size_t l = 0; l < report.labels.size(); ++l) {
    const LabelCalibration& curve = report.labels[l];
    const std::string_view color = kColors[l % kColors.size()];
    std::string points;
    for (const CalibrationBin& bin : curve.bins) {
      if (!points.empty()) points += ' ';
      points += fmt::format("{:.2f},{:.2f}", x(bin.mean_confidence),
                            y(bin.positive_fraction));
    }
    out += fmt::format(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" "
        "stroke-width=\"1.5\"/>\n",
        points, color);
    std::string name;
    for (char c : curve.label) {
      if (c == '<') name += "&lt;";
      else if (c == '>') name += "&gt;";
      else if (c == '&') name += "&amp;";
      else name += c;
    }
    out += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{}\">{} (ECE "
        "{:.4f})</text>\n",
        kMargin + 8, kMargin + 16 + 14 * static_cast<int>(l), color, name,
        curve.ece);
  }
  out += "</svg>\n";
  return out;
}

// ---------------------------------------------------------------------------

EvalReport EvaluateIntervals(std::span<const Document> docs,
                             std::span<const PairPrediction> predictions,
                             std::span<const AllenRelation> label_set,
                             const EvalOptions& options) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, const PairPrediction*> by_pair;
  for (const PairPrediction& p : predictions) {
    if (!by_pair.emplace(Key{p.doc_id, p.source, p.target}, &p).second) {
      throw CoverageError(fmt::format("duplicate prediction for {}:{}:{}",
                                      p.doc_id, p.source, p.target));
    }
  }

  std::vector<AllenRelation> gold_rel;
  std::vector<AllenRelation> pred_rel;
  std::vector<const PairPrediction*> matched;
  std::vector<DocumentLinks> links;
  for (const Document& doc : docs) {
    DocumentLinks dl{doc.id, doc.links(), {}};
    for (const TLink& link : doc.tlinks) {
      const auto it = by_pair.find(Key{doc.id, link.source, link.target});
      if (it == by_pair.end()) {
        throw CoverageError(fmt::format("no prediction for gold pair {}:{}:{}",
                                        doc.id, link.source, link.target));
      }
      gold_rel.push_back(link.relation);
      pred_rel.push_back(it->second->prediction.relation);
      matched.push_back(it->second);
      dl.pred.push_back({link.source, link.target,
                         it->second->prediction.relation});
      by_pair.erase(it);
    }
    links.push_back(std::move(dl));
  }
  if (!by_pair.empty()) {
    const Key& k = by_pair.begin()->first;
    throw CoverageError(fmt::format(
        "{} predictions match no gold pair, e.g. {}:{}:{}", by_pair.size(),
        std::get<0>(k), std::get<1>(k), std::get<2>(k)));
  }

  EvalReport report;
  FillConfig(report, options);
  report.config.emplace("level", "interval");
  const std::vector<std::string> names = LabelNames(label_set);
  const std::vector<Label> gold = ToLabels(gold_rel, label_set);
  const std::vector<Label> pred = ToLabels(pred_rel, label_set);
  report.examples = gold.size();
  report.accuracy = Accuracy(pred, gold);
  report.per_label = PerLabelF1(pred, gold, names);
  report.macro_f1 = MacroF1(pred, gold, names);
  report.awareness = TemporalAwareness(links, options.closure, options.workers);
  AddBootstrap(report, pred, gold, names.size(), options);

  // Calibration over normalized scores, when every prediction scores exactly
  // the label set.
  std::vector<std::vector<double>> probs;
  for (const PairPrediction* p : matched) {
    const auto& scores = p->prediction.scores;
    if (scores.size() != label_set.size()) break;
    std::vector<double> row(label_set.size());
    double sum = 0.0;
    bool aligned = true;
    for (std::size_t l = 0; l < label_set.size(); ++l) {
      const auto it =
          std::find_if(scores.begin(), scores.end(), [&](const auto& s) {
            return s.relation == label_set[l];
          });
      if (it == scores.end() || !std::isfinite(it->score) || it->score < 0) {
        aligned = false;
        break;
      }
      row[l] = it->score;
      sum += it->score;
    }
    if (!aligned || !(sum > 0.0)) break;
    for (double& v : row) v /= sum;
    probs.push_back(std::move(row));
  }
  if (probs.size() == gold.size()) {
    report.calibration =
        Calibrate(probs, gold, names, options.calibration_bins);
  }
  return report;
}

EvalReport EvaluatePoints(std::span<const PointExample> gold_examples,
                          std::span<const PointRelation> pred_rel,
                          const EvalOptions& options) {
  CheckPaired(pred_rel.size(), gold_examples.size());
  std::vector<PointRelation> gold_rel;
  gold_rel.reserve(gold_examples.size());
  for (const PointExample& e : gold_examples) gold_rel.push_back(e.relation);

  EvalReport report;
  FillConfig(report, options);
  report.config.emplace("level", "point");
  const std::vector<std::string> names = LabelNames(kPointRelations);
  const std::vector<Label> gold = ToLabels(gold_rel);
  const std::vector<Label> pred = ToLabels(pred_rel);
  report.examples = gold.size();
  report.accuracy = Accuracy(pred, gold);
  report.per_label = PerLabelF1(pred, gold, names);
  report.macro_f1 = MacroF1(pred, gold, names);
  for (EndpointPair key : kEndpointPairs) {
    std::vector<Label> g;
    std::vector<Label> p;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      if (gold_examples[i].pair_key() != key) continue;
      g.push_back(gold[i]);
      p.push_back(pred[i]);
    }
    if (g.empty()) continue;
    report.breakdowns.emplace_back(std::string(ToString(key)),
                                   PerLabelF1(p, g, names));
  }
  AddBootstrap(report, pred, gold, names.size(), options);
  return report;
}

std::string FormatReport(const EvalReport& report) {
  std::ostringstream out;
  out << "[config]\n";
  for (const auto& [k, v] : report.config) out << k << " = " << v << "\n";
  out << "\n[metrics]\n";
  out << "examples = " << report.examples << "\n";
  out << "accuracy = " << Percent(report.accuracy) << "\n";
  out << "macro_f1 = " << Percent(report.macro_f1) << "\n";
  if (report.awareness) {
    const AwarenessScore& a = *report.awareness;
    out << "fa_precision = " << Percent(a.precision) << "\n";
    out << "fa_recall = " << Percent(a.recall) << "\n";
    out << "fa = " << Percent(a.f_a) << "\n";
    out << "fa_counts = " << a.counts.precision_hits << "/"
        << a.counts.precision_total << " " << a.counts.recall_hits << "/"
        << a.counts.recall_total << "\n";
    out << "fa_inconsistent_gold_documents = " << a.inconsistent_gold_documents
        << "\n";
    out << "fa_inconsistent_pred_documents = " << a.inconsistent_pred_documents
        << "\n";
  }
  for (const auto& [name, ci] : report.bootstrap) {
    out << name << "_ci = [" << Percent(ci.low) << ", " << Percent(ci.high)
        << "]\n";
  }

  auto table = [&out](std::string_view title, const std::vector<LabelF1>& rows) {
    out << "\n[" << title << "]\n";
    out << fmt::format("{:<16}{:>10}{:>10}{:>10}{:>10}{:>10}\n", "label",
                       "precision", "recall", "f1", "support", "predicted");
    for (const LabelF1& r : rows) {
      out << fmt::format("{:<16}{:>10.4f}{:>10.4f}{:>10.4f}{:>10}{:>10}\n",
                         r.label, r.precision, r.recall, r.f1, r.support,
                         r.predicted);
    }
  };
  table("per_label", report.per_label);
  for (const auto& [name, rows] : report.breakdowns) {
    table("per_label." + name, rows);
  }
  if (report.calibration) {
    out << "\n[calibration]\n";
    out << "bins = " << report.calibration->bins << "\n";
    out << "ece = " << Percent(report.calibration->ece) << "\n";
    for (const LabelCalibration& c : report.calibration->labels) {
      out << "ece." << c.label << " = " << Percent(c.ece)
          << " (support " << c.support << ")\n";
    }
  }
  return out.str();
}

void WriteReport(const std::filesystem::path& stem, const EvalReport& report) {
  std::filesystem::path text_path = stem;
  text_path += ".txt";
  std::filesystem::path jsonl_path = stem;
  jsonl_path += ".jsonl";
  jsonl::WriteText(text_path, FormatReport(report));

  jsonl::Writer writer(jsonl_path);
  jsonl::Record config = jsonl::Record::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  writer.Write({{"kind", "config"}, {"config", config}});
  auto metric = [&writer](std::string_view name, double value) {
    writer.Write({{"kind", "metric"}, {"name", name}, {"value", value}});
  };
  writer.Write({{"kind", "metric"}, {"name", "examples"},
                {"value", report.examples}});
  metric("accuracy", report.accuracy);
  metric("macro_f1", report.macro_f1);
  if (report.awareness) {
    metric("fa_precision", report.awareness->precision);
    metric("fa_recall", report.awareness->recall);
    metric("fa", report.awareness->f_a);
  }
  for (const auto& [name, ci] : report.bootstrap) {
    writer.Write({{"kind", "bootstrap"},
                  {"name", name},
                  {"low", ci.low},
                  {"high", ci.high}});
  }
  auto label_rows = [&writer](std::string_view group,
                              const std::vector<LabelF1>& rows) {
    for (const LabelF1& r : rows) {
      writer.Write({{"kind", "label"},
                    {"group", group},
                    {"label", r.label},
                    {"precision", r.precision},
                    {"recall", r.recall},
                    {"f1", r.f1},
                    {"support", r.support},
                    {"predicted", r.predicted}});
    }
  };
  label_rows("all", report.per_label);
  for (const auto& [name, rows] : report.breakdowns) label_rows(name, rows);
  if (report.calibration) {
    metric("ece", report.calibration->ece);
    for (const LabelCalibration& c : report.calibration->labels) {
      writer.Write({{"kind", "calibration"},
                    {"label", c.label},
                    {"ece", c.ece},
                    {"support", c.support}});
    }
  }
  writer.Close();
}

}  // namespace ifp
