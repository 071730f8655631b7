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

#include "ifp/decoder.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "jsonl.h"
#include "parallel.h"

namespace ifp {
namespace {

// Uniform double in [0, 1) from the top 53 bits.
double UnitInterval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string PairKeyString(std::string_view a, std::string_view b) {
  std::string key(a);
  key += '\t';
  key += b;
  return key;
}

std::string FormatDouble(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

PairPrediction OneHotPrediction(const Document& doc, const TLink& link,
                                AllenRelation relation,
                                std::span<const AllenRelation> relation_set) {
  PairPrediction p{doc.id, link.source, link.target, {}};
  p.prediction.relation = relation;
  for (AllenRelation r : relation_set) {
    p.prediction.scores.push_back({r, r == relation ? 1.0 : 0.0});
  }
  return p;
}

}  // namespace

double PointDistribution::at(PointRelation r) const {
  switch (r) {
    case PointRelation::kBefore:
      return p_before;
    case PointRelation::kEqual:
      return p_equal;
    case PointRelation::kAfter:
      return p_after;
  }
  return 0.0;
}

PointDistribution PointDistribution::Floored(double floor) const {
  return {std::max(p_before, floor), std::max(p_equal, floor),
          std::max(p_after, floor)};
}

PointDistribution PointDistribution::Normalized() const {
  const double total = sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DegenerateScores("cannot normalize a distribution summing to " +
                           FormatDouble(total));
  }
  return {p_before / total, p_equal / total, p_after / total};
}

PointRelation PointDistribution::Argmax() const {
  PointRelation best = PointRelation::kBefore;
  for (PointRelation r : kPointRelations) {
    if (at(r) > at(best)) best = r;
  }
  return best;
}

PointDistribution PointDistribution::OneHot(PointRelation r) {
  PointDistribution d;
  switch (r) {
    case PointRelation::kBefore:
      d.p_before = 1.0;
      break;
    case PointRelation::kEqual:
      d.p_equal = 1.0;
      break;
    case PointRelation::kAfter:
      d.p_after = 1.0;
      break;
  }
  return d;
}

QuadDistribution OneHotQuad(AllenRelation r) {
  const PointQuad points = IntervalToPoints(r);
  QuadDistribution q;
  for (std::size_t k = 0; k < 4; ++k) q[k] = PointDistribution::OneHot(points[k]);
  return q;
}

PointDistribution CombineSymmetric(const PointDistribution& forward,
                                   const PointDistribution& swapped) {
  const PointDistribution reversed = swapped.Reversed();
  return {forward.p_before * reversed.p_before,
          forward.p_equal * reversed.p_equal,
          forward.p_after * reversed.p_after};
}

std::string_view ToString(RelationSetMode mode) {
  return mode == RelationSetMode::kFull ? "full" : "observed";
}

std::optional<RelationSetMode> ParseRelationSetMode(std::string_view s) {
  if (s == "full") return RelationSetMode::kFull;
  if (s == "observed") return RelationSetMode::kObserved;
  return std::nullopt;
}

std::vector<AllenRelation> RelationSet(RelationSetMode mode) {
  if (mode == RelationSetMode::kObserved) return ObservedAllenRelations();
  return {kAllenRelations.begin(), kAllenRelations.end()};
}

std::vector<RelationScore> ScoreIntervals(
    const QuadDistribution& q, std::span<const AllenRelation> relation_set) {
  if (relation_set.empty()) {
    throw std::invalid_argument("relation set is empty");
  }
  std::vector<AllenRelation> ordered(relation_set.begin(), relation_set.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  std::vector<RelationScore> scores;
  scores.reserve(ordered.size());
  for (AllenRelation r : ordered) {
    const PointQuad points = IntervalToPoints(r);
    double score = 1.0;
    for (std::size_t k = 0; k < 4; ++k) score *= q[k].at(points[k]);
    scores.push_back({r, score});
  }
  return scores;
}

DecodedPrediction Decode(const QuadDistribution& q,
                         std::span<const AllenRelation> relation_set) {
  DecodedPrediction result;
  result.quad = q;
  result.scores = ScoreIntervals(q, relation_set);
  const RelationScore* best = nullptr;
  for (const RelationScore& s : result.scores) {
    if (!std::isfinite(s.score)) continue;
    if (best == nullptr || s.score > best->score) best = &s;
  }
  if (best == nullptr || !(best->score > 0.0)) {
    throw DegenerateScores("every interval relation scores zero");
  }
  result.relation = best->relation;
  return result;
}

// ---------------------------------------------------------------------------

std::vector<PointDistribution> Predictor::PredictBatch(
    std::span<const TaggedQuery> queries) const {
  std::vector<PointDistribution> out;
  out.reserve(queries.size());
  for (const TaggedQuery& q : queries) out.push_back(Predict(q));
  return out;
}

std::uint64_t HashSeed(std::uint64_t seed, std::string_view key) {
  // FNV-1a over the little-endian seed bytes and the key.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : key) mix(static_cast<unsigned char>(c));
  return h;
}

PointDistribution RandomPredictor::Predict(const TaggedQuery& query) const {
  std::mt19937_64 rng(HashSeed(seed_, query.id));
  return PointDistribution::OneHot(kPointRelations[rng() % 3]);
}

std::string RandomPredictor::name() const {
  return "random:seed=" + std::to_string(seed_);
}

std::string ConstantPredictor::name() const {
  return "constant:" + FormatDouble(d_.p_before) + "," +
         FormatDouble(d_.p_equal) + "," + FormatDouble(d_.p_after);
}

EndpointPair TaggedPairKey(const TaggedQuery& query) {
  return PairKey(query.tagged_x().side, query.tagged_y().side);
}

PointDistribution PriorPredictor::Predict(const TaggedQuery& query) const {
  return by_key_[static_cast<std::size_t>(TaggedPairKey(query))];
}

OraclePredictor::OraclePredictor(std::span<const Document> docs, double noise,
                                 std::uint64_t seed)
    : noise_(noise), seed_(seed) {
  if (!(noise >= 0.0 && noise <= 1.0)) {
    throw std::invalid_argument("oracle noise must lie in [0, 1]");
  }
  for (const Document& doc : docs) {
    auto& table = gold_[doc.id];
    for (const TLink& link : doc.tlinks) {
      table.emplace(PairKeyString(link.source, link.target), link.relation);
      table.emplace(PairKeyString(link.target, link.source),
                    Invert(link.relation));
    }
  }
}

PointDistribution OraclePredictor::Predict(const TaggedQuery& query) const {
  const PointEndpoint& x = query.tagged_x();
  const PointEndpoint& y = query.tagged_y();
  const auto doc = gold_.find(query.doc_id);
  if (doc == gold_.end()) {
    throw MissingPrediction("oracle has no document " + query.doc_id);
  }
  const auto link = doc->second.find(PairKeyString(x.entity, y.entity));
  if (link == doc->second.end()) {
    throw MissingPrediction("oracle has no gold link for query " + query.id);
  }
  PointRelation label =
      IntervalToPoints(link->second)[static_cast<std::size_t>(
          PairKey(x.side, y.side))];
  if (noise_ > 0.0) {
    std::mt19937_64 rng(HashSeed(seed_, query.id));
    if (UnitInterval(rng) < noise_) {
      const std::size_t shift = 1 + rng() % 2;
      label = kPointRelations[(static_cast<std::size_t>(label) + shift) % 3];
    }
  }
  return PointDistribution::OneHot(label);
}

std::string OraclePredictor::name() const {
  return "oracle:noise=" + FormatDouble(noise_) +
         ":seed=" + std::to_string(seed_);
}

FilePredictor::FilePredictor(const std::filesystem::path& path)
    : path_(path.string()) {
  jsonl::ForEach(path, [&](const nlohmann::json& j) {
    const std::string id = j.at("query_id").get<std::string>();
    const PointDistribution d{j.at("p_before").get<double>(),
                              j.at("p_equal").get<double>(),
                              j.at("p_after").get<double>()};
    if (!(d.p_before >= 0.0 && d.p_equal >= 0.0 && d.p_after >= 0.0) ||
        std::abs(d.sum() - 1.0) > 1e-6) {
      throw std::invalid_argument("query " + id +
                                  " is not a probability distribution");
    }
    if (!table_.emplace(id, d).second) {
      throw std::invalid_argument("duplicate query id " + id);
    }
  });
}

PointDistribution FilePredictor::Predict(const TaggedQuery& query) const {
  const auto it = table_.find(query.id);
  if (it == table_.end()) {
    throw MissingPrediction(path_ + " has no prediction for query " +
                            query.id);
  }
  return it->second;
}

void WriteProbabilities(
    const std::filesystem::path& path,
    std::span<const std::pair<std::string, PointDistribution>> rows) {
  jsonl::Writer writer(path);
  for (const auto& [id, d] : rows) {
    jsonl::Record record;
    record["query_id"] = id;
    record["p_before"] = d.p_before;
    record["p_equal"] = d.p_equal;
    record["p_after"] = d.p_after;
    writer.Write(record);
  }
  writer.Close();
}

DecodedPrediction ClassifyPair(const Document& doc, std::string_view x,
                               std::string_view y, const Predictor& predictor,
                               std::span<const AllenRelation> relation_set) {
  const std::vector<TaggedQuery> queries = PointQueriesForPair(doc, x, y);
  std::vector<PointDistribution> answers;
  if (predictor.batched()) {
    try {
      answers = predictor.PredictBatch(queries);
    } catch (const PredictorError&) {
      throw;
    } catch (const std::exception& e) {
      throw PredictorError("batch for " + queries.front().id + ": " +
                           e.what());
    }
    if (answers.size() != queries.size()) {
      throw PredictorError("predictor returned " +
                           std::to_string(answers.size()) + " answers for " +
                           std::to_string(queries.size()) + " queries");
    }
  } else {
    answers.reserve(queries.size());
    for (const TaggedQuery& q : queries) {
      try {
        answers.push_back(predictor.Predict(q));
      } catch (const PredictorError&) {
        throw;
      } catch (const std::exception& e) {
        throw PredictorError("query " + q.id + ": " + e.what());
      }
    }
  }

  // Queries come in (forward, swapped) pairs in SS, SE, ES, EE order.
  QuadDistribution quad;
  for (std::size_t k = 0; k < 4; ++k) {
    quad[k] = CombineSymmetric(answers[2 * k].Floored(),
                               answers[2 * k + 1].Floored());
  }
  return Decode(quad, relation_set);
}

std::vector<PairPrediction> ClassifyCorpus(
    std::span<const Document> docs, const Predictor& predictor,
    std::span<const AllenRelation> relation_set, unsigned workers) {
  struct Job {
    const Document* doc;
    const TLink* link;
  };
  std::vector<Job> jobs;
  for (const Document& doc : docs) {
    for (const TLink& link : doc.tlinks) jobs.push_back({&doc, &link});
  }
  std::vector<PairPrediction> out(jobs.size());
  auto run = [&](std::size_t i) {
    const Job& job = jobs[i];
    out[i] = {job.doc->id, job.link->source, job.link->target,
              ClassifyPair(*job.doc, job.link->source, job.link->target,
                           predictor, relation_set)};
  };

  internal::ParallelFor(jobs.size(),
                        predictor.concurrent_safe() ? workers : 1, run);
  return out;
}

std::vector<PairPrediction> ConstantIntervalBaseline(
    std::span<const Document> docs, AllenRelation relation,
    std::span<const AllenRelation> relation_set) {
  std::vector<PairPrediction> out;
  for (const Document& doc : docs) {
    for (const TLink& link : doc.tlinks) {
      out.push_back(OneHotPrediction(doc, link, relation, relation_set));
    }
  }
  return out;
}

std::vector<PairPrediction> RandomIntervalBaseline(
    std::span<const Document> docs, std::uint64_t seed,
    std::span<const AllenRelation> relation_set) {
  if (relation_set.empty()) {
    throw std::invalid_argument("relation set is empty");
  }
  std::vector<PairPrediction> out;
  for (const Document& doc : docs) {
    for (const TLink& link : doc.tlinks) {
      std::mt19937_64 rng(
          HashSeed(seed, IntervalQueryId(doc.id, link.source, link.target)));
      const AllenRelation r = relation_set[rng() % relation_set.size()];
      out.push_back(OneHotPrediction(doc, link, r, relation_set));
    }
  }
  return out;
}

std::vector<PointRelation> PredictPoints(
    std::span<const Document> docs, std::span<const PointExample> examples,
    const Predictor& predictor) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const Document& doc : docs) by_id.emplace(doc.id, &doc);
  std::vector<PointRelation> out;
  out.reserve(examples.size());
  for (const PointExample& e : examples) {
    const auto doc = by_id.find(e.doc_id);
    if (doc == by_id.end()) {
      throw MissingPrediction("no document " + e.doc_id);
    }
    const TaggedQuery q =
        TagPointPair(*doc->second, e.source, e.target, Direction::kForward);
    out.push_back(predictor.Predict(q).Argmax());
  }
  return out;
}

void WritePredictions(const std::filesystem::path& path,
                      std::span<const PairPrediction> predictions) {
  jsonl::Writer writer(path);
  for (const PairPrediction& p : predictions) {
    jsonl::Record record;
    record["doc_id"] = p.doc_id;
    record["source"] = p.source;
    record["target"] = p.target;
    record["predicted_relation"] = ToString(p.prediction.relation);
    jsonl::Record scores = jsonl::Record::object();
    for (const RelationScore& s : p.prediction.scores) {
      scores[std::string(ToString(s.relation))] = s.score;
    }
    record["score_per_relation"] = std::move(scores);
    writer.Write(record);
  }
  writer.Close();
}

std::vector<PairPrediction> ReadPredictions(const std::filesystem::path& path) {
  std::vector<PairPrediction> out;
  jsonl::ForEach(path, [&](const nlohmann::json& j) {
    PairPrediction p;
    p.doc_id = j.at("doc_id").get<std::string>();
    p.source = j.at("source").get<std::string>();
    p.target = j.at("target").get<std::string>();
    const auto relation =
        ParseAllenRelation(j.at("predicted_relation").get<std::string>());
    if (!relation) throw std::invalid_argument("unknown predicted_relation");
    p.prediction.relation = *relation;
    if (j.contains("score_per_relation")) {
      for (const auto& [name, value] : j.at("score_per_relation").items()) {
        const auto r = ParseAllenRelation(name);
        if (!r) throw std::invalid_argument("unknown relation " + name);
        p.prediction.scores.push_back({*r, value.get<double>()});
      }
      std::sort(p.prediction.scores.begin(), p.prediction.scores.end(),
                [](const RelationScore& a, const RelationScore& b) {
                  return a.relation < b.relation;
                });
    }
    out.push_back(std::move(p));
  });
  return out;
}

}  // namespace ifp
