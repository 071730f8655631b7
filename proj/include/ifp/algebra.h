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

#ifndef IFP_ALGEBRA_H_
#define IFP_ALGEBRA_H_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ifp {

// Relation between two time points.
enum class PointRelation : std::uint8_t { kBefore = 0, kEqual = 1, kAfter = 2 };

inline constexpr std::array<PointRelation, 3> kPointRelations = {
    PointRelation::kBefore, PointRelation::kEqual, PointRelation::kAfter};

// The 13 Allen relations, declared in canonical order. The canonical order is
// also the tie-break order used by the decoder.
enum class AllenRelation : std::uint8_t {
  kBefore = 0,
  kAfter,
  kMeets,
  kMetBy,
  kOverlaps,
  kOverlappedBy,
  kStarts,
  kStartedBy,
  kFinishes,
  kFinishedBy,
  kContains,
  kDuring,
  kEquals,
};

inline constexpr std::size_t kNumAllenRelations = 13;

inline constexpr std::array<AllenRelation, kNumAllenRelations> kAllenRelations =
    {AllenRelation::kBefore,       AllenRelation::kAfter,
     AllenRelation::kMeets,        AllenRelation::kMetBy,
     AllenRelation::kOverlaps,     AllenRelation::kOverlappedBy,
     AllenRelation::kStarts,       AllenRelation::kStartedBy,
     AllenRelation::kFinishes,     AllenRelation::kFinishedBy,
     AllenRelation::kContains,     AllenRelation::kDuring,
     AllenRelation::kEquals};

// Endpoint pair between a source entity x and a target entity y.
// kSE is (x start, y end), kES is (x end, y start).
enum class EndpointPair : std::uint8_t { kSS = 0, kSE = 1, kES = 2, kEE = 3 };

inline constexpr std::array<EndpointPair, 4> kEndpointPairs = {
    EndpointPair::kSS, EndpointPair::kSE, EndpointPair::kES, EndpointPair::kEE};

enum class Side : std::uint8_t { kStart = 0, kEnd = 1 };

// Point relations indexed by EndpointPair.
using PointQuad = std::array<PointRelation, 4>;

struct PointEndpoint {
  std::string entity;
  Side side = Side::kStart;

  auto operator<=>(const PointEndpoint&) const = default;
};

struct PointStatement {
  PointEndpoint source;
  PointRelation relation = PointRelation::kBefore;
  PointEndpoint target;

  auto operator<=>(const PointStatement&) const = default;
};

// An interval relation between two entities of one document.
struct IntervalLink {
  std::string source;
  std::string target;
  AllenRelation relation = AllenRelation::kBefore;

  auto operator<=>(const IntervalLink&) const = default;
};

// Raised when a set of relations admits no timeline. Carries one pair of
// endpoints whose relation was derived in two contradictory ways.
class InconsistencyError : public std::runtime_error {
 public:
  InconsistencyError(PointEndpoint first, PointEndpoint second,
                     const std::string& detail);

  const PointEndpoint& first() const { return first_; }
  const PointEndpoint& second() const { return second_; }

 private:
  PointEndpoint first_;
  PointEndpoint second_;
};

// ---------------------------------------------------------------------------
// Label helpers.

PointRelation Invert(PointRelation r);
AllenRelation Invert(AllenRelation r);
EndpointPair Mirror(EndpointPair key);
EndpointPair PairKey(Side source, Side target);
Side SourceSide(EndpointPair key);
Side TargetSide(EndpointPair key);

std::string_view ToString(PointRelation r);     // "<", "=", ">"
std::string_view ToString(AllenRelation r);     // "before", "met-by", ...
std::string_view ToString(EndpointPair key);    // "SS", "SE", "ES", "EE"
std::string_view ToString(Side side);           // "start", "end"
std::string ToString(const PointEndpoint& p);   // "e1:start"

std::optional<PointRelation> ParsePointRelation(std::string_view s);
std::optional<AllenRelation> ParseAllenRelation(std::string_view s);
std::optional<EndpointPair> ParseEndpointPair(std::string_view s);
std::optional<Side> ParseSide(std::string_view s);

// ---------------------------------------------------------------------------
// Interval <-> point decomposition.

// The four endpoint relations that define `r`.
PointQuad IntervalToPoints(AllenRelation r);

// The relation whose decomposition is `quad`, if any. Quads that violate
// start < end for either entity map to nothing.
std::optional<AllenRelation> PointsToInterval(const PointQuad& quad);

// Composition of point relations; empty when the result is indeterminate.
std::optional<PointRelation> ComposePoints(PointRelation first,
                                           PointRelation second);

// ---------------------------------------------------------------------------
// Point graphs.

// A set of definite point relations. Each unordered pair of endpoints is
// stored once, oriented from the smaller to the larger endpoint; the reverse
// direction is answered through Invert().
class PointGraph {
 public:
  void AddPoint(const PointEndpoint& p);

  // Adds (a r b). Throws InconsistencyError if the pair already holds a
  // different relation, or if a == b and r is not kEqual.
  void AddEdge(const PointEndpoint& a, PointRelation r, const PointEndpoint& b);
  void AddEdge(const PointStatement& s) { AddEdge(s.source, s.relation, s.target); }

  std::optional<PointRelation> Relation(const PointEndpoint& a,
                                        const PointEndpoint& b) const;

  const std::set<PointEndpoint>& points() const { return points_; }

  // Canonical statements, sorted, one per stored pair.
  std::vector<PointStatement> Edges() const;
  std::size_t num_edges() const { return edges_.size(); }

  bool operator==(const PointGraph&) const = default;

 private:
  std::set<PointEndpoint> points_;
  std::map<std::pair<PointEndpoint, PointEndpoint>, PointRelation> edges_;
};

// Closed view of a point graph. Construction computes equality classes and
// strict-order reachability once; Relation() then answers in constant time.
class PointOrder {
 public:
  // Throws InconsistencyError when the graph admits no assignment.
  explicit PointOrder(const PointGraph& graph);

  // The relation entailed between a and b, or empty when undetermined or
  // when either endpoint is unknown.
  std::optional<PointRelation> Relation(const PointEndpoint& a,
                                        const PointEndpoint& b) const;

  bool Contains(const PointEndpoint& p) const { return index_.contains(p); }
  const std::vector<PointEndpoint>& points() const { return points_; }

 private:
  std::optional<PointRelation> RelationByIndex(std::size_t a,
                                               std::size_t b) const;

  std::vector<PointEndpoint> points_;
  std::map<PointEndpoint, std::size_t> index_;
  std::vector<std::size_t> class_of_;      // point -> equality class
  std::vector<std::vector<std::uint64_t>> reach_;  // class -> later classes

  friend PointGraph PointClosure(const PointGraph& graph);
};

// Every definite relation entailed by `graph`, as a graph. Input edges are
// preserved. Throws InconsistencyError.
PointGraph PointClosure(const PointGraph& graph);

// ---------------------------------------------------------------------------
// Interval level, derived through the point level.

struct ClosureOptions {
  // Inject x_start < x_end for every entity. When false no constraint is
  // added between an entity's own endpoints.
  bool strict_intervals = true;
};

// Point graph of a link set: four statements per link plus the
// entity-internal constraints requested by `options`.
PointGraph LinksToPointGraph(std::span<const IntervalLink> links,
                             const ClosureOptions& options = {});

// Every fully determined interval relation between entities of `links`,
// oriented from the lexicographically smaller entity id, sorted.
std::vector<IntervalLink> IntervalClosure(std::span<const IntervalLink> links,
                                          const ClosureOptions& options = {});

// True when the four endpoint relations of `link` are entailed by `order`.
bool Entails(const PointOrder& order, const IntervalLink& link);

// A minimal subset of `links` with the same interval closure. Candidates are
// tried for removal in (source, target, relation) order; the result keeps the
// orientation of the input links and is sorted the same way.
std::vector<IntervalLink> TransitiveReduction(
    std::span<const IntervalLink> links, const ClosureOptions& options = {});

// Same link up to orientation: (a r b) is (b r^-1 a).
IntervalLink Canonicalize(const IntervalLink& link);

}  // namespace ifp

#endif  // IFP_ALGEBRA_H_
