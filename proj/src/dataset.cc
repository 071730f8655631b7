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

#include "ifp/dataset.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "jsonl.h"

namespace ifp {

namespace {

using jsonl::Record;

std::string ToStringForLog(const PointEndpoint& p) { return ToString(p); }
std::string ToStringForLog(const std::string& s) { return s; }

using DirectedPointKey =
    std::tuple<std::string, PointEndpoint, PointEndpoint, PointRelation>;
using PointPairKey = std::tuple<std::string, PointEndpoint, PointEndpoint>;
using DirectedIntervalKey =
    std::tuple<std::string, std::string, std::string, AllenRelation>;
using IntervalPairKey = std::tuple<std::string, std::string, std::string>;

DirectedPointKey KeyOf(const PointExample& e) {
  return {e.doc_id, e.source, e.target, e.relation};
}

DirectedIntervalKey KeyOf(const IntervalExample& e) {
  return {e.doc_id, e.source, e.target, e.relation};
}

// Unordered pair plus the relation read from the smaller endpoint.
std::pair<PointPairKey, PointRelation> FactOf(const PointExample& e) {
  if (e.source < e.target) return {{e.doc_id, e.source, e.target}, e.relation};
  return {{e.doc_id, e.target, e.source}, Invert(e.relation)};
}

std::pair<IntervalPairKey, AllenRelation> FactOf(const IntervalExample& e) {
  if (e.source < e.target) return {{e.doc_id, e.source, e.target}, e.relation};
  return {{e.doc_id, e.target, e.source}, Invert(e.relation)};
}

// Adds `example` unless an identical or a contradicting example was seen.
template <typename Example, typename DirectedKey, typename PairKey,
          typename Relation>
void AddChecked(Example example, std::set<DirectedKey>& seen,
                std::map<PairKey, Relation>& facts, std::vector<Example>& out) {
  if (seen.contains(KeyOf(example))) return;
  auto [pair, relation] = FactOf(example);
  auto [it, inserted] = facts.emplace(pair, relation);
  if (!inserted && it->second != relation) {
    spdlog::warn("{}: dropping {} {} {}, which contradicts an earlier fact",
                 example.doc_id, ToStringForLog(example.source),
                 ToString(example.relation), ToStringForLog(example.target));
    return;
  }
  seen.insert(KeyOf(example));
  out.push_back(std::move(example));
}

// Groups example indices by document, in order of first appearance.
template <typename Example>
std::vector<std::pair<std::string, std::vector<std::size_t>>> GroupByDocument(
    std::span<const Example> examples) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    auto [it, inserted] = position.emplace(examples[i].doc_id, groups.size());
    if (inserted) groups.push_back({examples[i].doc_id, {}});
    groups[it->second].second.push_back(i);
  }
  return groups;
}

template <typename Example>
std::vector<Example> AugmentInverseImpl(std::span<const Example> examples) {
  std::vector<Example> out;
  out.reserve(2 * examples.size());
  std::set<decltype(KeyOf(examples[0]))> seen;
  for (const Example& e : examples) {
    if (seen.insert(KeyOf(e)).second) out.push_back(e);
  }
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    Example inverse = out[i].Inverted();
    if (seen.insert(KeyOf(inverse)).second) out.push_back(std::move(inverse));
  }
  return out;
}

std::string Side2(Side s) { return std::string(ToString(s)); }

Record PointRecord(const PointExample& e) {
  Record r;
  r["doc_id"] = e.doc_id;
  r["source_entity"] = e.source.entity;
  r["source_side"] = Side2(e.source.side);
  r["target_entity"] = e.target.entity;
  r["target_side"] = Side2(e.target.side);
  r["relation"] = std::string(ToString(e.relation));
  r["provenance"] = std::string(ToString(e.provenance));
  return r;
}

Record IntervalRecord(const IntervalExample& e) {
  Record r;
  r["doc_id"] = e.doc_id;
  r["source_entity"] = e.source;
  r["target_entity"] = e.target;
  r["relation"] = std::string(ToString(e.relation));
  r["provenance"] = std::string(ToString(e.provenance));
  return r;
}

template <typename T>
T Require(std::optional<T> value, const std::string& field,
          const std::string& raw) {
  if (!value) throw std::invalid_argument("bad " + field + " '" + raw + "'");
  return *value;
}

Record ConfigRecord(const std::map<std::string, std::string>& config) {
  Record r = Record::object();
  for (const auto& [k, v] : config) r[k] = v;
  return r;
}

}  // namespace

std::string_view ToString(Provenance p) {
  switch (p) {
    case Provenance::kAnnotated: return "annotated";
    case Provenance::kInverse: return "inverse";
    case Provenance::kClosure: return "closure";
  }
  return "?";
}

std::optional<Provenance> ParseProvenance(std::string_view s) {
  for (Provenance p :
       {Provenance::kAnnotated, Provenance::kInverse, Provenance::kClosure}) {
    if (ToString(p) == s) return p;
  }
  return std::nullopt;
}

PointExample PointExample::Inverted() const {
  return {doc_id, target, source, Invert(relation), Provenance::kInverse};
}

IntervalExample IntervalExample::Inverted() const {
  return {doc_id, target, source, Invert(relation), Provenance::kInverse};
}

PointDataset IntervalsToPoints(std::span<const Document> docs) {
  PointDataset out;
  std::set<DirectedPointKey> seen;
  std::map<PointPairKey, PointRelation> facts;
  for (const Document& doc : docs) {
    for (const TLink& link : doc.tlinks) {
      const PointQuad quad = IntervalToPoints(link.relation);
      for (EndpointPair key : kEndpointPairs) {
        AddChecked(PointExample{doc.id,
                                {link.source, SourceSide(key)},
                                {link.target, TargetSide(key)},
                                quad[static_cast<std::size_t>(key)],
                                Provenance::kAnnotated},
                   seen, facts, out);
      }
    }
  }
  return out;
}

IntervalDataset IntervalsToExamples(std::span<const Document> docs) {
  IntervalDataset out;
  std::set<DirectedIntervalKey> seen;
  std::map<IntervalPairKey, AllenRelation> facts;
  for (const Document& doc : docs) {
    for (const TLink& link : doc.tlinks) {
      AddChecked(IntervalExample{doc.id, link.source, link.target,
                                 link.relation, Provenance::kAnnotated},
                 seen, facts, out);
    }
  }
  return out;
}

PointDataset AugmentInverse(std::span<const PointExample> examples) {
  return AugmentInverseImpl(examples);
}

IntervalDataset AugmentInverse(std::span<const IntervalExample> examples) {
  return AugmentInverseImpl(examples);
}

PointDataset AugmentClosure(std::span<const PointExample> examples,
                            const ClosureOptions& options,
                            ClosureStats* stats) {
  PointDataset out(examples.begin(), examples.end());
  ClosureStats local;
  for (const auto& [doc_id, indices] : GroupByDocument(examples)) {
    ++local.documents;
    PointGraph graph;
    std::set<std::string> entities;
    std::set<std::pair<PointEndpoint, PointEndpoint>> stated;
    try {
      for (std::size_t i : indices) {
        const PointExample& e = examples[i];
        graph.AddEdge(e.source, e.relation, e.target);
        entities.insert(e.source.entity);
        entities.insert(e.target.entity);
        stated.insert(std::minmax(e.source, e.target));
      }
      if (options.strict_intervals) {
        for (const std::string& entity : entities) {
          graph.AddEdge({entity, Side::kStart}, PointRelation::kBefore,
                        {entity, Side::kEnd});
        }
      }
      PointOrder order(graph);
      const std::vector<PointEndpoint>& points = order.points();
      for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
          const PointEndpoint& a = points[i];
          const PointEndpoint& b = points[j];
          if (a.entity == b.entity || stated.contains({a, b})) continue;
          auto r = order.Relation(a, b);
          if (!r) continue;
          PointExample derived{doc_id, a, b, *r, Provenance::kClosure};
          if (*r == PointRelation::kAfter) derived = {doc_id, b, a,
                                                      PointRelation::kBefore,
                                                      Provenance::kClosure};
          out.push_back(std::move(derived));
          ++local.derived;
        }
      }
    } catch (const InconsistencyError& e) {
      ++local.inconsistent_documents;
      spdlog::warn("{}: closure skipped, {}", doc_id, e.what());
    }
  }
  if (stats) *stats = local;
  return out;
}

IntervalDataset AugmentClosure(std::span<const IntervalExample> examples,
                               const ClosureOptions& options,
                               ClosureStats* stats) {
  IntervalDataset out(examples.begin(), examples.end());
  ClosureStats local;
  for (const auto& [doc_id, indices] : GroupByDocument(examples)) {
    ++local.documents;
    std::vector<IntervalLink> links;
    std::set<std::pair<std::string, std::string>> stated;
    for (std::size_t i : indices) {
      const IntervalExample& e = examples[i];
      links.push_back({e.source, e.target, e.relation});
      stated.insert(std::minmax(e.source, e.target));
    }
    try {
      for (const IntervalLink& link : IntervalClosure(links, options)) {
        if (stated.contains({link.source, link.target})) continue;
        out.push_back({doc_id, link.source, link.target, link.relation,
                       Provenance::kClosure});
        ++local.derived;
      }
    } catch (const InconsistencyError& e) {
      ++local.inconsistent_documents;
      spdlog::warn("{}: interval closure skipped, {}", doc_id, e.what());
    }
  }
  if (stats) *stats = local;
  return out;
}

PointDataset RebalanceLtGt(std::span<const PointExample> examples,
                           std::uint64_t seed) {
  PointDataset out(examples.begin(), examples.end());
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].provenance == Provenance::kClosure &&
        out[i].relation == PointRelation::kBefore) {
      candidates.push_back(i);
    }
  }
  // Partial Fisher-Yates: the first half of `candidates` is a uniform sample.
  const std::size_t flips = candidates.size() / 2;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < flips; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
    PointExample& e = out[candidates[i]];
    e = e.Inverted();
    e.provenance = Provenance::kClosure;
  }
  return out;
}

TrainingSets BuildTrainingSets(std::span<const Document> docs,
                               std::uint64_t rebalance_seed,
                               const ClosureOptions& options) {
  TrainingSets sets;
  sets.point_raw = IntervalsToPoints(docs);
  sets.point_inverse = AugmentInverse(sets.point_raw);
  sets.point_closure =
      RebalanceLtGt(AugmentClosure(sets.point_raw, options), rebalance_seed);
  sets.point_inverse_closure = AugmentInverse(sets.point_closure);

  sets.interval_raw = IntervalsToExamples(docs);
  sets.interval_inverse = AugmentInverse(sets.interval_raw);
  sets.interval_closure = AugmentClosure(sets.interval_raw, options);
  sets.interval_inverse_closure = AugmentInverse(sets.interval_closure);
  return sets;
}

std::size_t PointStats::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (std::size_t c : row) n += c;
  }
  return n;
}

std::size_t IntervalStats::total() const {
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  return n;
}

PointStats ComputeStats(std::span<const PointExample> examples) {
  PointStats stats;
  for (const PointExample& e : examples) ++stats.at(e.pair_key(), e.relation);
  return stats;
}

IntervalStats ComputeStats(std::span<const IntervalExample> examples) {
  IntervalStats stats;
  for (const IntervalExample& e : examples) {
    ++stats.counts[static_cast<std::size_t>(e.relation)];
  }
  return stats;
}

std::string FormatStats(const PointStats& stats) {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-4s %10s %10s %10s %10s\n", "rel", "SS",
                "SE", "ES", "EE");
  out << line;
  for (PointRelation r : {PointRelation::kBefore, PointRelation::kAfter,
                          PointRelation::kEqual}) {
    std::snprintf(line, sizeof(line), "%-4s %10zu %10zu %10zu %10zu\n",
                  std::string(ToString(r)).c_str(),
                  stats.at(EndpointPair::kSS, r), stats.at(EndpointPair::kSE, r),
                  stats.at(EndpointPair::kES, r), stats.at(EndpointPair::kEE, r));
    out << line;
  }
  out << "total " << stats.total() << '\n';
  return out.str();
}

std::string FormatStats(const IntervalStats& stats) {
  std::ostringstream out;
  char line[128];
  for (AllenRelation r : kAllenRelations) {
    std::snprintf(line, sizeof(line), "%-14s %10zu\n",
                  std::string(ToString(r)).c_str(), stats.at(r));
    out << line;
  }
  out << "total " << stats.total() << '\n';
  return out.str();
}

void WritePointDataset(const std::filesystem::path& path,
                       std::span<const PointExample> examples) {
  jsonl::Writer writer(path);
  for (const PointExample& e : examples) writer.Write(PointRecord(e));
  writer.Close();
}

void WriteIntervalDataset(const std::filesystem::path& path,
                          std::span<const IntervalExample> examples) {
  jsonl::Writer writer(path);
  for (const IntervalExample& e : examples) writer.Write(IntervalRecord(e));
  writer.Close();
}

PointDataset ReadPointDataset(const std::filesystem::path& path) {
  PointDataset out;
  jsonl::ForEach(path, [&](const nlohmann::json& j) {
    PointExample e;
    e.doc_id = j.at("doc_id").get<std::string>();
    e.source.entity = j.at("source_entity").get<std::string>();
    const auto src_side = j.at("source_side").get<std::string>();
    e.source.side = Require(ParseSide(src_side), "source_side", src_side);
    e.target.entity = j.at("target_entity").get<std::string>();
    const auto tgt_side = j.at("target_side").get<std::string>();
    e.target.side = Require(ParseSide(tgt_side), "target_side", tgt_side);
    const auto rel = j.at("relation").get<std::string>();
    e.relation = Require(ParsePointRelation(rel), "relation", rel);
    const auto prov = j.at("provenance").get<std::string>();
    e.provenance = Require(ParseProvenance(prov), "provenance", prov);
    out.push_back(std::move(e));
  });
  return out;
}

IntervalDataset ReadIntervalDataset(const std::filesystem::path& path) {
  IntervalDataset out;
  jsonl::ForEach(path, [&](const nlohmann::json& j) {
    IntervalExample e;
    e.doc_id = j.at("doc_id").get<std::string>();
    e.source = j.at("source_entity").get<std::string>();
    e.target = j.at("target_entity").get<std::string>();
    const auto rel = j.at("relation").get<std::string>();
    e.relation = Require(ParseAllenRelation(rel), "relation", rel);
    const auto prov = j.at("provenance").get<std::string>();
    e.provenance = Require(ParseProvenance(prov), "provenance", prov);
    out.push_back(std::move(e));
  });
  return out;
}

std::filesystem::path StatsPath(const std::filesystem::path& dataset) {
  std::filesystem::path p = dataset;
  p += ".stats.json";
  return p;
}

void WriteStats(const std::filesystem::path& path, const PointStats& stats,
                const std::map<std::string, std::string>& config) {
  Record root;
  root["config"] = ConfigRecord(config);
  root["total"] = stats.total();
  Record counts;
  for (EndpointPair key : kEndpointPairs) {
    Record row;
    for (PointRelation r : kPointRelations) {
      row[std::string(ToString(r))] = stats.at(key, r);
    }
    counts[std::string(ToString(key))] = row;
  }
  root["counts"] = counts;
  jsonl::WriteText(path, root.dump(2) + "\n");
}

void WriteStats(const std::filesystem::path& path, const IntervalStats& stats,
                const std::map<std::string, std::string>& config) {
  Record root;
  root["config"] = ConfigRecord(config);
  root["total"] = stats.total();
  Record counts;
  for (AllenRelation r : kAllenRelations) {
    counts[std::string(ToString(r))] = stats.at(r);
  }
  root["counts"] = counts;
  jsonl::WriteText(path, root.dump(2) + "\n");
}

}  // namespace ifp
