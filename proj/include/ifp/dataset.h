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

// Point- and interval-level training sets: conversion from annotated
// documents, inverse and closure augmentation, and count statistics.

#ifndef IFP_DATASET_H_
#define IFP_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ifp/algebra.h"
#include "ifp/corpus.h"

namespace ifp {

enum class Provenance : std::uint8_t { kAnnotated, kInverse, kClosure };

std::string_view ToString(Provenance p);
std::optional<Provenance> ParseProvenance(std::string_view s);

struct PointExample {
  std::string doc_id;
  PointEndpoint source;
  PointEndpoint target;
  PointRelation relation = PointRelation::kBefore;
  Provenance provenance = Provenance::kAnnotated;

  // Derived from the sides of source (entity x) and target (entity y).
  EndpointPair pair_key() const { return PairKey(source.side, target.side); }
  PointExample Inverted() const;

  bool operator==(const PointExample&) const = default;
};

struct IntervalExample {
  std::string doc_id;
  std::string source;
  std::string target;
  AllenRelation relation = AllenRelation::kBefore;
  Provenance provenance = Provenance::kAnnotated;

  IntervalExample Inverted() const;

  bool operator==(const IntervalExample&) const = default;
};

using PointDataset = std::vector<PointExample>;
using IntervalDataset = std::vector<IntervalExample>;

// Four point examples per TLink. Exact directed duplicates are removed; a
// fact contradicting an earlier fact on the same endpoint pair is dropped
// with a warning.
PointDataset IntervalsToPoints(std::span<const Document> docs);

// One interval example per TLink, deduplicated the same way.
IntervalDataset IntervalsToExamples(std::span<const Document> docs);

// Input followed by the swapped, inverted copy of every example that is not
// already present. Idempotent.
PointDataset AugmentInverse(std::span<const PointExample> examples);
IntervalDataset AugmentInverse(std::span<const IntervalExample> examples);

struct ClosureStats {
  std::size_t documents = 0;
  std::size_t inconsistent_documents = 0;
  std::size_t derived = 0;
};

// Input followed, per document, by every definite relation entailed between
// endpoints of distinct entities that the document does not already state.
// Derived facts are emitted as < or =, oriented so that the relation reads
// forward (for = the smaller endpoint is the source). Documents whose facts
// are inconsistent contribute only their input examples.
PointDataset AugmentClosure(std::span<const PointExample> examples,
                            const ClosureOptions& options = {},
                            ClosureStats* stats = nullptr);

// Interval counterpart built on IntervalClosure; derived links are oriented
// from the smaller entity id.
IntervalDataset AugmentClosure(std::span<const IntervalExample> examples,
                               const ClosureOptions& options = {},
                               ClosureStats* stats = nullptr);

// Flips floor(k/2) of the k closure-derived < examples, chosen uniformly by
// `seed`, into their swapped > form. Positions are preserved.
PointDataset RebalanceLtGt(std::span<const PointExample> examples,
                           std::uint64_t seed);

struct TrainingSets {
  PointDataset point_raw;
  PointDataset point_inverse;
  PointDataset point_closure;
  PointDataset point_inverse_closure;
  IntervalDataset interval_raw;
  IntervalDataset interval_inverse;
  IntervalDataset interval_closure;
  IntervalDataset interval_inverse_closure;
};

// R, I = inverse(R), C = rebalance(closure(R)), IC = inverse(C), at both
// levels (no rebalancing at the interval level).
TrainingSets BuildTrainingSets(std::span<const Document> docs,
                               std::uint64_t rebalance_seed,
                               const ClosureOptions& options = {});

// Occurrence counts per (pair key, relation).
struct PointStats {
  std::array<std::array<std::size_t, 3>, 4> counts{};  // [pair][relation]

  std::size_t& at(EndpointPair key, PointRelation r) {
    return counts[static_cast<std::size_t>(key)][static_cast<std::size_t>(r)];
  }
  std::size_t at(EndpointPair key, PointRelation r) const {
    return counts[static_cast<std::size_t>(key)][static_cast<std::size_t>(r)];
  }
  std::size_t total() const;

  bool operator==(const PointStats&) const = default;
};

struct IntervalStats {
  std::array<std::size_t, kNumAllenRelations> counts{};

  std::size_t at(AllenRelation r) const {
    return counts[static_cast<std::size_t>(r)];
  }
  std::size_t total() const;

  bool operator==(const IntervalStats&) const = default;
};

PointStats ComputeStats(std::span<const PointExample> examples);
IntervalStats ComputeStats(std::span<const IntervalExample> examples);

// Human-readable count tables.
std::string FormatStats(const PointStats& stats);
std::string FormatStats(const IntervalStats& stats);

// ---------------------------------------------------------------------------
// Line-delimited JSON files.

void WritePointDataset(const std::filesystem::path& path,
                       std::span<const PointExample> examples);
void WriteIntervalDataset(const std::filesystem::path& path,
                          std::span<const IntervalExample> examples);
PointDataset ReadPointDataset(const std::filesystem::path& path);
IntervalDataset ReadIntervalDataset(const std::filesystem::path& path);

// `<path>.stats.json`, next to the dataset. `config` is embedded verbatim.
std::filesystem::path StatsPath(const std::filesystem::path& dataset);
void WriteStats(const std::filesystem::path& path, const PointStats& stats,
                const std::map<std::string, std::string>& config);
void WriteStats(const std::filesystem::path& path, const IntervalStats& stats,
                const std::map<std::string, std::string>& config);

}  // namespace ifp

#endif  // IFP_DATASET_H_
