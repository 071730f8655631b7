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

#include "ifp/cli.h"

#include <algorithm>
#include <functional>
#include <iostream>
#include <ostream>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "ifp/dataset.h"
#include "ifp/encoding.h"
#include "ifp/eval.h"
#include "jsonl.h"

namespace ifp::cli {
namespace {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::string_view kIntervalRandom = "interval-random";
constexpr std::string_view kIntervalMajority = "interval-majority";

std::vector<Document> Load(const RunConfig& config, Split split) {
  if (config.root.empty()) throw UsageError("--root is required");
  LoadOptions options;
  options.seed = config.split_seed;
  options.manifest = config.manifest;
  LoadedCorpus corpus = LoadCorpus(config.root, split, options);
  if (!corpus.errors.empty()) {
    for (const std::string& e : corpus.errors) spdlog::error("{}", e);
    if (!config.skip_bad) {
      throw DataError(fmt::format("{} corpus files rejected, {} accepted",
                                  corpus.errors.size(),
                                  corpus.documents.size()));
    }
  }
  if (corpus.documents.empty()) {
    throw DataError(fmt::format("no {} documents under {}", ToString(split),
                                config.root.string()));
  }
  return std::move(corpus.documents);
}

ClosureOptions Closure(const RunConfig& config) {
  return {.strict_intervals = config.strict_intervals};
}

void WriteConfig(const RunConfig& config, std::string_view verb) {
  jsonl::Record record = jsonl::Record::object();
  for (const auto& [k, v] : config.Resolved()) record[k] = v;
  record["verb"] = verb;
  jsonl::WriteText(config.out / (std::string(verb) + ".config.json"),
                   record.dump(2) + "\n");
}

std::map<std::string, std::string> WithVerb(const RunConfig& config,
                                            std::string_view verb) {
  auto resolved = config.Resolved();
  resolved["verb"] = verb;
  return resolved;
}

std::string_view LevelPrefix(Level level) {
  return level == Level::kPoint ? "points" : "intervals";
}

PointRelation MajorityPoint(const PointDataset& train) {
  std::array<std::size_t, 3> counts{};
  for (const PointExample& e : train) {
    ++counts[static_cast<std::size_t>(e.relation)];
  }
  const auto it = std::max_element(counts.begin(), counts.end());
  return kPointRelations[static_cast<std::size_t>(it - counts.begin())];
}

AllenRelation MajorityInterval(std::span<const Document> train) {
  std::array<std::size_t, kNumAllenRelations> counts{};
  for (const Document& doc : train) {
    for (const TLink& link : doc.tlinks) {
      ++counts[static_cast<std::size_t>(link.relation)];
    }
  }
  const auto it = std::max_element(counts.begin(), counts.end());
  return kAllenRelations[static_cast<std::size_t>(it - counts.begin())];
}

double ParseNoise(std::string_view spec) {
  constexpr std::string_view kPrefix = "oracle:noise=";
  if (spec == "oracle") return 0.0;
  if (!spec.starts_with(kPrefix)) {
    throw UsageError("bad oracle spec " + std::string(spec));
  }
  const std::string value(spec.substr(kPrefix.size()));
  try {
    std::size_t used = 0;
    const double noise = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return noise;
  } catch (const std::exception&) {
    throw UsageError("bad oracle noise '" + value + "'");
  }
}

}  // namespace

std::map<std::string, std::string> RunConfig::Resolved() const {
  return {
      {"root", root.string()},
      {"split", std::string(ToString(split))},
      {"train_split", std::string(ToString(train_split))},
      {"split_seed", std::to_string(split_seed)},
      {"rebalance_seed", std::to_string(rebalance_seed)},
      {"predictor_seed", std::to_string(predictor_seed)},
      {"bootstrap_seed", std::to_string(bootstrap_seed)},
      {"resamples", std::to_string(resamples)},
      {"bins", std::to_string(bins)},
      {"relations", std::string(ToString(relations))},
      {"predictor", predictor},
      {"level", level == Level::kPoint ? "point" : "interval"},
      {"workers", std::to_string(workers)},
      {"strict_intervals", strict_intervals ? "true" : "false"},
      {"skip_bad", skip_bad ? "true" : "false"},
      {"manifest", manifest ? manifest->string() : ""},
      {"input", input.string()},
      {"strategy", strategy},
      {"max_chars", std::to_string(max_chars)},
      {"predictions", predictions.string()},
      {"queries", queries.string()},
      {"probabilities", probabilities.string()},
  };
}

std::unique_ptr<Predictor> MakePredictor(const RunConfig& config) {
  const std::string& spec = config.predictor;
  if (spec == "random") {
    return std::make_unique<RandomPredictor>(config.predictor_seed);
  }
  if (spec == "majority" || spec == "prior") {
    const std::vector<Document> train = Load(config, config.train_split);
    const PointDataset points = IntervalsToPoints(train);
    if (spec == "majority") {
      return std::make_unique<ConstantPredictor>(
          PointDistribution::OneHot(MajorityPoint(points)));
    }
    const PointStats stats = ComputeStats(points);
    std::array<PointDistribution, 4> by_key;
    for (EndpointPair key : kEndpointPairs) {
      PointDistribution d{
          static_cast<double>(stats.at(key, PointRelation::kBefore)),
          static_cast<double>(stats.at(key, PointRelation::kEqual)),
          static_cast<double>(stats.at(key, PointRelation::kAfter))};
      if (d.sum() == 0.0) d = {1.0, 1.0, 1.0};
      by_key[static_cast<std::size_t>(key)] = d.Normalized();
    }
    return std::make_unique<PriorPredictor>(by_key);
  }
  if (spec.starts_with("oracle")) {
    const std::vector<Document> gold = Load(config, config.split);
    return std::make_unique<OraclePredictor>(gold, ParseNoise(spec),
                                             config.predictor_seed);
  }
  if (spec.starts_with("file:")) {
    return std::make_unique<FilePredictor>(spec.substr(5));
  }
  throw UsageError("unknown point predictor '" + spec + "'");
}

int Convert(const RunConfig& config, std::ostream& log) {
  const std::vector<Document> docs = Load(config, config.split);
  const PointDataset points = IntervalsToPoints(docs);
  const IntervalDataset intervals = IntervalsToExamples(docs);
  const auto resolved = WithVerb(config, "convert");
  const auto point_path = config.out / "points.raw.jsonl";
  const auto interval_path = config.out / "intervals.raw.jsonl";
  WritePointDataset(point_path, points);
  WriteStats(StatsPath(point_path), ComputeStats(points), resolved);
  WriteIntervalDataset(interval_path, intervals);
  WriteStats(StatsPath(interval_path), ComputeStats(intervals), resolved);
  WriteConfig(config, "convert");
  log << fmt::format("{} documents, {} links, {} point examples\n", docs.size(),
                     intervals.size(), points.size());
  log << FormatStats(ComputeStats(points));
  return kExitOk;
}

int Augment(const RunConfig& config, std::ostream& log) {
  if (config.input.empty()) throw UsageError("--input is required");
  const bool inverse = config.strategy == "inverse" || config.strategy == "both";
  const bool closure = config.strategy == "closure" || config.strategy == "both";
  if (!inverse && !closure) {
    throw UsageError("--strategy must be inverse, closure or both");
  }
  const auto resolved = WithVerb(config, "augment");
  const std::string prefix(LevelPrefix(config.level));
  auto path = [&](std::string_view name) {
    return config.out / fmt::format("{}.{}.jsonl", prefix, name);
  };
  ClosureStats closure_stats;

  if (config.level == Level::kPoint) {
    const PointDataset raw = ReadPointDataset(config.input);
    auto emit = [&](std::string_view name, const PointDataset& data) {
      WritePointDataset(path(name), data);
      WriteStats(StatsPath(path(name)), ComputeStats(data), resolved);
      log << name << ": " << data.size() << " examples\n"
          << FormatStats(ComputeStats(data));
    };
    if (inverse) emit("inverse", AugmentInverse(raw));
    if (closure) {
      const PointDataset c = RebalanceLtGt(
          AugmentClosure(raw, Closure(config), &closure_stats),
          config.rebalance_seed);
      emit("closure", c);
      if (inverse) emit("inverse_closure", AugmentInverse(c));
    }
  } else {
    const IntervalDataset raw = ReadIntervalDataset(config.input);
    auto emit = [&](std::string_view name, const IntervalDataset& data) {
      WriteIntervalDataset(path(name), data);
      WriteStats(StatsPath(path(name)), ComputeStats(data), resolved);
      log << name << ": " << data.size() << " examples\n"
          << FormatStats(ComputeStats(data));
    };
    if (inverse) emit("inverse", AugmentInverse(raw));
    if (closure) {
      const IntervalDataset c =
          AugmentClosure(raw, Closure(config), &closure_stats);
      emit("closure", c);
      if (inverse) emit("inverse_closure", AugmentInverse(c));
    }
  }
  if (closure) {
    log << fmt::format("closure: {} documents, {} inconsistent, {} derived\n",
                       closure_stats.documents,
                       closure_stats.inconsistent_documents,
                       closure_stats.derived);
  }
  WriteConfig(config, "augment");
  return kExitOk;
}

int Stats(const RunConfig& config, std::ostream& log) {
  if (config.input.empty()) throw UsageError("--input is required");
  if (config.level == Level::kPoint) {
    log << FormatStats(ComputeStats(ReadPointDataset(config.input)));
  } else {
    log << FormatStats(ComputeStats(ReadIntervalDataset(config.input)));
  }
  return kExitOk;
}

int Encode(const RunConfig& config, std::ostream& log) {
  const std::vector<Document> docs = Load(config, config.split);
  std::vector<TaggedQuery> points;
  std::vector<IntervalQuery> intervals;
  for (const Document& doc : docs) {
    for (const TLink& link : doc.tlinks) {
      for (TaggedQuery& q : PointQueriesForPair(doc, link.source, link.target)) {
        if (config.max_chars > 0) {
          q.text = TruncateAroundTags(q.text, config.max_chars);
        }
        points.push_back(std::move(q));
      }
      IntervalQuery q = TagIntervalPair(doc, link.source, link.target);
      if (config.max_chars > 0) {
        q.text = TruncateAroundTags(q.text, config.max_chars);
      }
      intervals.push_back(std::move(q));
    }
  }
  WritePointQueries(config.out / "queries.point.jsonl", points);
  WriteIntervalQueries(config.out / "queries.interval.jsonl", intervals);
  WriteConfig(config, "encode");
  log << fmt::format("{} point queries, {} interval queries\n", points.size(),
                     intervals.size());
  return kExitOk;
}

int DecodeCmd(const RunConfig& config, std::ostream& log) {
  const std::vector<AllenRelation> relations = RelationSet(config.relations);
  std::vector<PairPrediction> predictions;
  if (config.predictor == kIntervalRandom) {
    const std::vector<Document> docs = Load(config, config.split);
    predictions =
        RandomIntervalBaseline(docs, config.predictor_seed, relations);
  } else if (config.predictor == kIntervalMajority) {
    const AllenRelation majority =
        MajorityInterval(Load(config, config.train_split));
    const std::vector<Document> docs = Load(config, config.split);
    predictions = ConstantIntervalBaseline(docs, majority, relations);
  } else {
    const std::unique_ptr<Predictor> predictor = MakePredictor(config);
    const std::vector<Document> docs = Load(config, config.split);
    predictions = ClassifyCorpus(docs, *predictor, relations, config.workers);
  }
  WritePredictions(config.out / "predictions.jsonl", predictions);
  WriteConfig(config, "decode");
  log << fmt::format("{} predictions\n", predictions.size());
  return kExitOk;
}

int Evaluate(const RunConfig& config, std::ostream& log) {
  EvalOptions options;
  options.resamples = config.resamples;
  options.bootstrap_seed = config.bootstrap_seed;
  options.calibration_bins = config.bins;
  options.closure = Closure(config);
  options.workers = config.workers;

  EvalReport report;
  if (config.level == Level::kPoint) {
    const std::unique_ptr<Predictor> predictor = MakePredictor(config);
    const std::vector<Document> docs = Load(config, config.split);
    const PointDataset gold = IntervalsToPoints(docs);
    const std::vector<PointRelation> pred =
        PredictPoints(docs, gold, *predictor);
    report = EvaluatePoints(gold, pred, options);
  } else {
    if (config.predictions.empty()) {
      throw UsageError("--predictions is required");
    }
    const std::vector<Document> docs = Load(config, config.split);
    const std::vector<PairPrediction> predictions =
        ReadPredictions(config.predictions);
    report = EvaluateIntervals(docs, predictions, RelationSet(config.relations),
                               options);
  }
  for (const auto& [k, v] : WithVerb(config, "evaluate")) {
    report.config.insert_or_assign(k, v);
  }
  WriteReport(config.out / "report", report);
  WriteConfig(config, "evaluate");
  log << FormatReport(report);
  return kExitOk;
}

int Calibrate(const RunConfig& config, std::ostream& log) {
  if (config.queries.empty() || config.probabilities.empty()) {
    throw UsageError("--queries and --probabilities are required");
  }
  const std::vector<Document> docs = Load(config, config.split);
  const OraclePredictor gold_labels(docs, 0.0, 0);
  const FilePredictor model(config.probabilities);
  const std::vector<TaggedQuery> queries = ReadPointQueries(config.queries);

  std::vector<std::vector<double>> probs;
  std::vector<Label> gold;
  for (const TaggedQuery& q : queries) {
    const PointDistribution d = model.Predict(q).Normalized();
    probs.push_back({d.p_before, d.p_equal, d.p_after});
    gold.push_back(static_cast<Label>(gold_labels.Predict(q).Argmax()));
  }
  const std::vector<std::string> labels = LabelNames(kPointRelations);
  const CalibrationReport report =
      ::ifp::Calibrate(probs, gold, labels, config.bins);

  jsonl::WriteText(config.out / "calibration.csv", CalibrationCsv(report));
  jsonl::WriteText(config.out / "calibration.svg", CalibrationSvg(report));
  std::string text = "[config]\n";
  for (const auto& [k, v] : WithVerb(config, "calibrate")) {
    text += k + " = " + v + "\n";
  }
  text += fmt::format("\n[calibration]\nexamples = {}\nbins = {}\nece = {:.6f}\n",
                      queries.size(), report.bins, report.ece);
  for (const LabelCalibration& c : report.labels) {
    text += fmt::format("ece.{} = {:.6f} (support {})\n", c.label, c.ece,
                        c.support);
  }
  jsonl::WriteText(config.out / "calibration.txt", text);
  WriteConfig(config, "calibrate");
  log << text;
  return kExitOk;
}

int Main(int argc, char** argv) {
  std::shared_ptr<spdlog::logger> logger = spdlog::get("ifp");
  if (!logger) logger = spdlog::stderr_logger_st("ifp");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%l: %v");

  CLI::App app{"Interval relations from point relations over TimeML corpora"};
  app.require_subcommand(1);
  RunConfig config;
  std::string split = "test";
  std::string train_split = "train-full";
  std::string relations = "full";
  std::string level;
  std::string manifest;

  using Runner = std::function<int(const RunConfig&, std::ostream&)>;
  std::vector<std::pair<CLI::App*, Runner>> verbs;
  auto add = [&](std::string name, std::string help, Runner run,
                 std::string default_level) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--root", config.root, "TempEval-3 corpus root");
    sub->add_option("--split", split, "train, validation, test or train-full")
        ->capture_default_str();
    sub->add_option("--train-split", train_split,
                    "split that trains majority and prior predictors")
        ->capture_default_str();
    sub->add_option("--split-seed", config.split_seed)->capture_default_str();
    sub->add_option("--manifest", manifest,
                    "validation document ids, one per line");
    sub->add_option("--rebalance-seed", config.rebalance_seed)
        ->capture_default_str();
    sub->add_option("--predictor-seed", config.predictor_seed)
        ->capture_default_str();
    sub->add_option("--bootstrap-seed", config.bootstrap_seed)
        ->capture_default_str();
    sub->add_option("--resamples", config.resamples)->capture_default_str();
    sub->add_option("--bins", config.bins)->capture_default_str();
    sub->add_option("--relations", relations, "full or observed")
        ->capture_default_str();
    sub->add_option("--predictor", config.predictor)->capture_default_str();
    sub->add_option("--level", level, "point or interval");
    sub->add_option("--out", config.out, "output directory")
        ->capture_default_str();
    sub->add_option("--workers", config.workers)->capture_default_str();
    sub->add_flag("!--relaxed-intervals", config.strict_intervals,
                  "do not assume start < end inside an entity");
    sub->add_flag("--skip-bad", config.skip_bad,
                  "continue past unparsable corpus files");
    sub->add_option("--input", config.input, "dataset file");
    sub->add_option("--strategy", config.strategy, "inverse, closure or both")
        ->capture_default_str();
    sub->add_option("--max-chars", config.max_chars,
                    "truncate queries around the tags; 0 keeps everything")
        ->capture_default_str();
    sub->add_option("--predictions", config.predictions);
    sub->add_option("--queries", config.queries);
    sub->add_option("--probabilities", config.probabilities);
    verbs.emplace_back(sub, std::move(run));
    sub->callback([&level, default_level] {
      if (level.empty()) level = default_level;
    });
  };
  add("convert", "write point and interval datasets of a split", Convert,
      "interval");
  add("augment", "inverse and closure augmentation of a dataset", Augment,
      "point");
  add("stats", "count table of a dataset", Stats, "point");
  add("encode", "write tagged query files", Encode, "interval");
  add("decode", "predict interval relations for the gold pairs", DecodeCmd,
      "interval");
  add("evaluate", "score predictions", Evaluate, "interval");
  add("calibrate", "calibration curves of point probabilities", Calibrate,
      "point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto parsed_split = ParseSplit(split);
    const auto parsed_train = ParseSplit(train_split);
    const auto parsed_relations = ParseRelationSetMode(relations);
    if (!parsed_split || !parsed_train) throw UsageError("unknown split");
    if (!parsed_relations) throw UsageError("--relations must be full or observed");
    if (level != "point" && level != "interval") {
      throw UsageError("--level must be point or interval");
    }
    config.split = *parsed_split;
    config.train_split = *parsed_train;
    config.relations = *parsed_relations;
    config.level = level == "point" ? Level::kPoint : Level::kInterval;
    if (!manifest.empty()) config.manifest = manifest;

    for (const auto& [sub, run] : verbs) {
      if (sub->parsed()) return run(config, std::cout);
    }
    return kExitUsage;
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const InconsistencyError& e) {
    spdlog::error("inconsistent relations: {}", e.what());
    return kExitInconsistent;
  } catch (const DegenerateScores& e) {
    spdlog::error("{}", e.what());
    return kExitInconsistent;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  }
}

}  // namespace ifp::cli
