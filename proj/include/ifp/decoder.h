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

// Interval-from-point decoding. Four endpoint-pair distributions, each the
// product of a forward and a reversed swapped prediction, score every Allen
// relation by the product of the probabilities of its point relations; the
// argmax wins.

#ifndef IFP_DECODER_H_
#define IFP_DECODER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ifp/algebra.h"
#include "ifp/corpus.h"
#include "ifp/dataset.h"
#include "ifp/encoding.h"

namespace ifp {

// Probabilities never drop below this before they are multiplied.
inline constexpr double kProbabilityFloor = 1e-9;

struct PointDistribution {
  double p_before = 0.0;
  double p_equal = 0.0;
  double p_after = 0.0;

  double at(PointRelation r) const;
  double sum() const { return p_before + p_equal + p_after; }
  // (p_after, p_equal, p_before).
  PointDistribution Reversed() const { return {p_after, p_equal, p_before}; }
  PointDistribution Floored(double floor = kProbabilityFloor) const;
  PointDistribution Normalized() const;
  // Highest entry; ties go to <, then =.
  PointRelation Argmax() const;

  static PointDistribution OneHot(PointRelation r);

  bool operator==(const PointDistribution&) const = default;
};

// Indexed by EndpointPair.
using QuadDistribution = std::array<PointDistribution, 4>;

QuadDistribution OneHotQuad(AllenRelation r);

// forward ⊙ reverse(swapped), unnormalized.
PointDistribution CombineSymmetric(const PointDistribution& forward,
                                   const PointDistribution& swapped);

enum class RelationSetMode : std::uint8_t { kFull, kObserved };

std::string_view ToString(RelationSetMode mode);  // "full", "observed"
std::optional<RelationSetMode> ParseRelationSetMode(std::string_view s);

// Canonical order. 13 relations, or the 11 that TimeML labels reach.
std::vector<AllenRelation> RelationSet(RelationSetMode mode);

struct RelationScore {
  AllenRelation relation;
  double score;

  bool operator==(const RelationScore&) const = default;
};

// One raw product per relation of `relation_set`, in canonical order.
std::vector<RelationScore> ScoreIntervals(
    const QuadDistribution& q, std::span<const AllenRelation> relation_set);

class DegenerateScores : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecodedPrediction {
  AllenRelation relation = AllenRelation::kBefore;
  std::vector<RelationScore> scores;
  QuadDistribution quad{};
};

// Argmax of ScoreIntervals; equal scores resolve to the earlier relation in
// canonical order. Throws DegenerateScores when no score is positive.
DecodedPrediction Decode(const QuadDistribution& q,
                         std::span<const AllenRelation> relation_set);

// ---------------------------------------------------------------------------
// Point predictors. A predictor answers for the tagged pair read as
// (x-endpoint REL y-endpoint).

class PredictorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingPrediction : public PredictorError {
 public:
  using PredictorError::PredictorError;
};

class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual PointDistribution Predict(const TaggedQuery& query) const = 0;
  virtual std::vector<PointDistribution> PredictBatch(
      std::span<const TaggedQuery> queries) const;

  // Whether Predict may be called from several threads at once.
  virtual bool concurrent_safe() const { return true; }
  // Whether PredictBatch is cheaper than repeated Predict.
  virtual bool batched() const { return false; }
  virtual std::string name() const = 0;
};

// Seeded 64-bit mix of a seed and a key; stable across platforms.
std::uint64_t HashSeed(std::uint64_t seed, std::string_view key);

// One-hot on a relation drawn uniformly per query id.
class RandomPredictor : public Predictor {
 public:
  explicit RandomPredictor(std::uint64_t seed) : seed_(seed) {}
  PointDistribution Predict(const TaggedQuery& query) const override;
  std::string name() const override;

 private:
  std::uint64_t seed_;
};

// The same distribution for every query.
class ConstantPredictor : public Predictor {
 public:
  explicit ConstantPredictor(PointDistribution d) : d_(d) {}
  PointDistribution Predict(const TaggedQuery&) const override { return d_; }
  std::string name() const override;

 private:
  PointDistribution d_;
};

// Per tagged pair key, the label frequencies of a training set.
class PriorPredictor : public Predictor {
 public:
  explicit PriorPredictor(const std::array<PointDistribution, 4>& by_key)
      : by_key_(by_key) {}
  PointDistribution Predict(const TaggedQuery& query) const override;
  std::string name() const override { return "prior"; }

  const std::array<PointDistribution, 4>& by_key() const { return by_key_; }

 private:
  std::array<PointDistribution, 4> by_key_;
};

// One-hot on the gold point relation of the tagged endpoints. With
// probability `noise` the label is replaced by one of the other two, chosen
// uniformly; draws are seeded per query id.
class OraclePredictor : public Predictor {
 public:
  OraclePredictor(std::span<const Document> docs, double noise,
                  std::uint64_t seed);
  PointDistribution Predict(const TaggedQuery& query) const override;
  std::string name() const override;

 private:
  // doc id -> "source\ttarget" -> relation, both orientations stored.
  std::unordered_map<std::string, std::unordered_map<std::string, AllenRelation>>
      gold_;
  double noise_;
  std::uint64_t seed_;
};

// Probabilities read from line-delimited {query_id, p_before, p_equal,
// p_after} records. Each must be non-negative and sum to 1 within 1e-6.
class FilePredictor : public Predictor {
 public:
  explicit FilePredictor(const std::filesystem::path& path);
  PointDistribution Predict(const TaggedQuery& query) const override;
  std::string name() const override { return "file:" + path_; }
  std::size_t size() const { return table_.size(); }

 private:
  std::string path_;
  std::unordered_map<std::string, PointDistribution> table_;
};

void WriteProbabilities(
    const std::filesystem::path& path,
    std::span<const std::pair<std::string, PointDistribution>> rows);

// Tagged pair key of a query: the sides of its x- and y-tagged endpoints.
EndpointPair TaggedPairKey(const TaggedQuery& query);

// Eight queries, each answer floored, combined per key and decoded.
DecodedPrediction ClassifyPair(const Document& doc, std::string_view x,
                               std::string_view y, const Predictor& predictor,
                               std::span<const AllenRelation> relation_set);

struct PairPrediction {
  std::string doc_id;
  std::string source;
  std::string target;
  DecodedPrediction prediction;
};

// ClassifyPair over every gold link, in document then link order. Uses up
// to `workers` threads when the predictor is concurrent-safe.
std::vector<PairPrediction> ClassifyCorpus(
    std::span<const Document> docs, const Predictor& predictor,
    std::span<const AllenRelation> relation_set, unsigned workers = 1);

// Interval-level baselines over every gold link. Scores are one-hot.
std::vector<PairPrediction> ConstantIntervalBaseline(
    std::span<const Document> docs, AllenRelation relation,
    std::span<const AllenRelation> relation_set);
std::vector<PairPrediction> RandomIntervalBaseline(
    std::span<const Document> docs, std::uint64_t seed,
    std::span<const AllenRelation> relation_set);

// Forward-query label for each point example (argmax of the prediction).
std::vector<PointRelation> PredictPoints(
    std::span<const Document> docs, std::span<const PointExample> examples,
    const Predictor& predictor);

void WritePredictions(const std::filesystem::path& path,
                      std::span<const PairPrediction> predictions);
std::vector<PairPrediction> ReadPredictions(const std::filesystem::path& path);

}  // namespace ifp

#endif  // IFP_DECODER_H_
