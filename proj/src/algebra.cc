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

#include "ifp/algebra.h"

#include <algorithm>
#include <numeric>

namespace ifp {

namespace {

constexpr PointRelation kLt = PointRelation::kBefore;
constexpr PointRelation kEq = PointRelation::kEqual;
constexpr PointRelation kGt = PointRelation::kAfter;

// Decomposition rows, in canonical relation order. Columns are SS, SE, ES, EE.
constexpr std::array<PointQuad, kNumAllenRelations> kDecomposition = {{
    {kLt, kLt, kLt, kLt},  // before
    {kGt, kGt, kGt, kGt},  // after
    {kLt, kLt, kEq, kLt},  // meets
    {kGt, kEq, kGt, kGt},  // met-by
    {kLt, kLt, kGt, kLt},  // overlaps
    {kGt, kLt, kGt, kGt},  // overlapped-by
    {kEq, kLt, kGt, kLt},  // starts
    {kEq, kLt, kGt, kGt},  // started-by
    {kGt, kLt, kGt, kEq},  // finishes
    {kLt, kLt, kGt, kEq},  // finished-by
    {kLt, kLt, kGt, kGt},  // contains
    {kGt, kLt, kGt, kLt},  // during
    {kEq, kLt, kGt, kEq},  // equals
}};

constexpr std::array<std::string_view, kNumAllenRelations> kAllenNames = {
    "before",   "after",       "meets",    "met-by",   "overlaps",
    "overlapped-by", "starts", "started-by", "finishes", "finished-by",
    "contains", "during",      "equals"};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root wins so that class numbering is order-independent.
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

bool TestBit(const std::vector<std::uint64_t>& bits, std::size_t i) {
  return (bits[i / 64] >> (i % 64)) & 1U;
}

void SetBit(std::vector<std::uint64_t>& bits, std::size_t i) {
  bits[i / 64] |= std::uint64_t{1} << (i % 64);
}

PointEndpoint Start(const std::string& entity) { return {entity, Side::kStart}; }
PointEndpoint End(const std::string& entity) { return {entity, Side::kEnd}; }

PointEndpoint SourceEndpoint(const IntervalLink& link, EndpointPair key) {
  return {link.source, SourceSide(key)};
}

PointEndpoint TargetEndpoint(const IntervalLink& link, EndpointPair key) {
  return {link.target, TargetSide(key)};
}

}  // namespace

InconsistencyError::InconsistencyError(PointEndpoint first,
                                       PointEndpoint second,
                                       const std::string& detail)
    : std::runtime_error("inconsistent relations between " + ToString(first) +
                         " and " + ToString(second) + ": " + detail),
      first_(std::move(first)),
      second_(std::move(second)) {}

PointRelation Invert(PointRelation r) {
  switch (r) {
    case PointRelation::kBefore: return PointRelation::kAfter;
    case PointRelation::kAfter: return PointRelation::kBefore;
    case PointRelation::kEqual: return PointRelation::kEqual;
  }
  return r;
}

AllenRelation Invert(AllenRelation r) {
  switch (r) {
    case AllenRelation::kBefore: return AllenRelation::kAfter;
    case AllenRelation::kAfter: return AllenRelation::kBefore;
    case AllenRelation::kMeets: return AllenRelation::kMetBy;
    case AllenRelation::kMetBy: return AllenRelation::kMeets;
    case AllenRelation::kOverlaps: return AllenRelation::kOverlappedBy;
    case AllenRelation::kOverlappedBy: return AllenRelation::kOverlaps;
    case AllenRelation::kStarts: return AllenRelation::kStartedBy;
    case AllenRelation::kStartedBy: return AllenRelation::kStarts;
    case AllenRelation::kFinishes: return AllenRelation::kFinishedBy;
    case AllenRelation::kFinishedBy: return AllenRelation::kFinishes;
    case AllenRelation::kContains: return AllenRelation::kDuring;
    case AllenRelation::kDuring: return AllenRelation::kContains;
    case AllenRelation::kEquals: return AllenRelation::kEquals;
  }
  return r;
}

EndpointPair Mirror(EndpointPair key) {
  switch (key) {
    case EndpointPair::kSE: return EndpointPair::kES;
    case EndpointPair::kES: return EndpointPair::kSE;
    default: return key;
  }
}

EndpointPair PairKey(Side source, Side target) {
  return static_cast<EndpointPair>(2 * static_cast<int>(source) +
                                   static_cast<int>(target));
}

Side SourceSide(EndpointPair key) {
  return static_cast<Side>(static_cast<int>(key) / 2);
}

Side TargetSide(EndpointPair key) {
  return static_cast<Side>(static_cast<int>(key) % 2);
}

std::string_view ToString(PointRelation r) {
  switch (r) {
    case PointRelation::kBefore: return "<";
    case PointRelation::kEqual: return "=";
    case PointRelation::kAfter: return ">";
  }
  return "?";
}

std::string_view ToString(AllenRelation r) {
  return kAllenNames[static_cast<std::size_t>(r)];
}

std::string_view ToString(EndpointPair key) {
  static constexpr std::array<std::string_view, 4> kNames = {"SS", "SE", "ES",
                                                             "EE"};
  return kNames[static_cast<std::size_t>(key)];
}

std::string_view ToString(Side side) {
  return side == Side::kStart ? "start" : "end";
}

std::string ToString(const PointEndpoint& p) {
  return p.entity + ":" + std::string(ToString(p.side));
}

std::optional<PointRelation> ParsePointRelation(std::string_view s) {
  if (s == "<") return PointRelation::kBefore;
  if (s == "=") return PointRelation::kEqual;
  if (s == ">") return PointRelation::kAfter;
  return std::nullopt;
}

std::optional<AllenRelation> ParseAllenRelation(std::string_view s) {
  for (AllenRelation r : kAllenRelations) {
    if (ToString(r) == s) return r;
  }
  return std::nullopt;
}

std::optional<EndpointPair> ParseEndpointPair(std::string_view s) {
  for (EndpointPair key : kEndpointPairs) {
    if (ToString(key) == s) return key;
  }
  return std::nullopt;
}

std::optional<Side> ParseSide(std::string_view s) {
  if (s == "start") return Side::kStart;
  if (s == "end") return Side::kEnd;
  return std::nullopt;
}

PointQuad IntervalToPoints(AllenRelation r) {
  return kDecomposition[static_cast<std::size_t>(r)];
}

std::optional<AllenRelation> PointsToInterval(const PointQuad& quad) {
  for (std::size_t i = 0; i < kNumAllenRelations; ++i) {
    if (kDecomposition[i] == quad) return kAllenRelations[i];
  }
  return std::nullopt;
}

std::optional<PointRelation> ComposePoints(PointRelation first,
                                           PointRelation second) {
  if (first == PointRelation::kEqual) return second;
  if (second == PointRelation::kEqual) return first;
  if (first == second) return first;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

void PointGraph::AddPoint(const PointEndpoint& p) { points_.insert(p); }

void PointGraph::AddEdge(const PointEndpoint& a, PointRelation r,
                         const PointEndpoint& b) {
  if (a.entity.empty() || b.entity.empty()) {
    throw std::invalid_argument("point endpoint with empty entity id");
  }
  if (a == b) {
    if (r != PointRelation::kEqual) {
      throw InconsistencyError(a, b, "strict relation of a point to itself");
    }
    points_.insert(a);
    return;
  }
  points_.insert(a);
  points_.insert(b);
  auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  PointRelation stored = a < b ? r : Invert(r);
  auto [it, inserted] = edges_.emplace(std::move(key), stored);
  if (!inserted && it->second != stored) {
    throw InconsistencyError(
        it->first.first, it->first.second,
        "both " + std::string(ToString(it->second)) + " and " +
            std::string(ToString(stored)) + " asserted");
  }
}

std::optional<PointRelation> PointGraph::Relation(
    const PointEndpoint& a, const PointEndpoint& b) const {
  if (a == b) {
    if (points_.contains(a)) return PointRelation::kEqual;
    return std::nullopt;
  }
  if (a < b) {
    auto it = edges_.find({a, b});
    if (it == edges_.end()) return std::nullopt;
    return it->second;
  }
  auto it = edges_.find({b, a});
  if (it == edges_.end()) return std::nullopt;
  return Invert(it->second);
}

std::vector<PointStatement> PointGraph::Edges() const {
  std::vector<PointStatement> out;
  out.reserve(edges_.size());
  for (const auto& [key, r] : edges_) {
    out.push_back({key.first, r, key.second});
  }
  return out;
}

// ---------------------------------------------------------------------------

PointOrder::PointOrder(const PointGraph& graph)
    : points_(graph.points().begin(), graph.points().end()) {
  for (std::size_t i = 0; i < points_.size(); ++i) index_.emplace(points_[i], i);

  const std::vector<PointStatement> edges = graph.Edges();
  DisjointSets sets(points_.size());
  for (const PointStatement& e : edges) {
    if (e.relation == PointRelation::kEqual) {
      sets.Union(index_.at(e.source), index_.at(e.target));
    }
  }

  // Number equality classes by their smallest member.
  std::vector<std::size_t> class_id(points_.size(), SIZE_MAX);
  class_of_.resize(points_.size());
  std::size_t num_classes = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    std::size_t root = sets.Find(i);
    if (class_id[root] == SIZE_MAX) class_id[root] = num_classes++;
    class_of_[i] = class_id[root];
  }

  struct ClassEdge {
    std::size_t to;
    std::size_t from_point;
    std::size_t to_point;
  };
  std::vector<std::vector<ClassEdge>> successors(num_classes);
  std::vector<std::vector<ClassEdge>> predecessors(num_classes);
  std::vector<std::size_t> in_degree(num_classes, 0);
  for (const PointStatement& e : edges) {
    if (e.relation == PointRelation::kEqual) continue;
    std::size_t lo = index_.at(e.source);
    std::size_t hi = index_.at(e.target);
    if (e.relation == PointRelation::kAfter) std::swap(lo, hi);
    std::size_t clo = class_of_[lo];
    std::size_t chi = class_of_[hi];
    if (clo == chi) {
      throw InconsistencyError(points_[lo], points_[hi],
                               "strictly ordered points are also equal");
    }
    successors[clo].push_back({chi, lo, hi});
    predecessors[chi].push_back({clo, lo, hi});
    ++in_degree[chi];
  }

  std::vector<std::size_t> topo;
  topo.reserve(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (in_degree[c] == 0) topo.push_back(c);
  }
  for (std::size_t head = 0; head < topo.size(); ++head) {
    for (const ClassEdge& e : successors[topo[head]]) {
      if (--in_degree[e.to] == 0) topo.push_back(e.to);
    }
  }

  if (topo.size() != num_classes) {
    // Every class left over has a predecessor that is also left over; walking
    // backwards must therefore revisit a class, closing a strict cycle.
    std::vector<int> visited(num_classes, 0);
    std::size_t c = 0;
    while (in_degree[c] == 0) ++c;
    const ClassEdge* last = nullptr;
    while (!visited[c]) {
      visited[c] = 1;
      for (const ClassEdge& e : predecessors[c]) {
        if (in_degree[e.to] != 0) {
          last = &e;
          c = e.to;
          break;
        }
      }
    }
    throw InconsistencyError(points_[last->from_point], points_[last->to_point],
                             "strict ordering cycle");
  }

  const std::size_t words = (num_classes + 63) / 64;
  reach_.assign(num_classes, std::vector<std::uint64_t>(words, 0));
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    auto& bits = reach_[*it];
    for (const ClassEdge& e : successors[*it]) {
      SetBit(bits, e.to);
      const auto& next = reach_[e.to];
      for (std::size_t w = 0; w < words; ++w) bits[w] |= next[w];
    }
  }
}

std::optional<PointRelation> PointOrder::RelationByIndex(std::size_t a,
                                                         std::size_t b) const {
  std::size_t ca = class_of_[a];
  std::size_t cb = class_of_[b];
  if (ca == cb) return PointRelation::kEqual;
  if (TestBit(reach_[ca], cb)) return PointRelation::kBefore;
  if (TestBit(reach_[cb], ca)) return PointRelation::kAfter;
  return std::nullopt;
}

std::optional<PointRelation> PointOrder::Relation(
    const PointEndpoint& a, const PointEndpoint& b) const {
  auto ia = index_.find(a);
  auto ib = index_.find(b);
  if (ia == index_.end() || ib == index_.end()) return std::nullopt;
  return RelationByIndex(ia->second, ib->second);
}

PointGraph PointClosure(const PointGraph& graph) {
  PointOrder order(graph);
  PointGraph closed;
  for (const PointEndpoint& p : order.points_) closed.AddPoint(p);
  for (std::size_t i = 0; i < order.points_.size(); ++i) {
    for (std::size_t j = i + 1; j < order.points_.size(); ++j) {
      if (auto r = order.RelationByIndex(i, j)) {
        closed.AddEdge(order.points_[i], *r, order.points_[j]);
      }
    }
  }
  return closed;
}

// ---------------------------------------------------------------------------

PointGraph LinksToPointGraph(std::span<const IntervalLink> links,
                             const ClosureOptions& options) {
  PointGraph graph;
  std::set<std::string> entities;
  for (const IntervalLink& link : links) {
    entities.insert(link.source);
    entities.insert(link.target);
  }
  for (const std::string& e : entities) {
    graph.AddPoint(Start(e));
    graph.AddPoint(End(e));
    if (options.strict_intervals) {
      graph.AddEdge(Start(e), PointRelation::kBefore, End(e));
    }
  }
  for (const IntervalLink& link : links) {
    const PointQuad quad = IntervalToPoints(link.relation);
    for (EndpointPair key : kEndpointPairs) {
      graph.AddEdge(SourceEndpoint(link, key),
                    quad[static_cast<std::size_t>(key)],
                    TargetEndpoint(link, key));
    }
  }
  return graph;
}

bool Entails(const PointOrder& order, const IntervalLink& link) {
  const PointQuad quad = IntervalToPoints(link.relation);
  for (EndpointPair key : kEndpointPairs) {
    auto r = order.Relation(SourceEndpoint(link, key), TargetEndpoint(link, key));
    if (!r || *r != quad[static_cast<std::size_t>(key)]) return false;
  }
  return true;
}

std::vector<IntervalLink> IntervalClosure(std::span<const IntervalLink> links,
                                          const ClosureOptions& options) {
  PointOrder order(LinksToPointGraph(links, options));
  std::set<std::string> entity_set;
  for (const IntervalLink& link : links) {
    entity_set.insert(link.source);
    entity_set.insert(link.target);
  }
  const std::vector<std::string> entities(entity_set.begin(), entity_set.end());

  std::vector<IntervalLink> out;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    for (std::size_t j = i + 1; j < entities.size(); ++j) {
      PointQuad quad{};
      bool complete = true;
      for (EndpointPair key : kEndpointPairs) {
        auto r = order.Relation({entities[i], SourceSide(key)},
                                {entities[j], TargetSide(key)});
        if (!r) {
          complete = false;
          break;
        }
        quad[static_cast<std::size_t>(key)] = *r;
      }
      if (!complete) continue;
      if (auto rel = PointsToInterval(quad)) {
        out.push_back({entities[i], entities[j], *rel});
      }
    }
  }
  return out;
}

std::vector<IntervalLink> TransitiveReduction(
    std::span<const IntervalLink> links, const ClosureOptions& options) {
  std::vector<IntervalLink> sorted(links.begin(), links.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  // Validates the whole set up front.
  [[maybe_unused]] const PointOrder full(LinksToPointGraph(sorted, options));

  std::vector<bool> kept(sorted.size(), true);
  std::vector<IntervalLink> rest;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    rest.clear();
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      if (j != i && kept[j]) rest.push_back(sorted[j]);
    }
    PointOrder order(LinksToPointGraph(rest, options));
    if (Entails(order, sorted[i])) kept[i] = false;
  }

  std::vector<IntervalLink> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (kept[i]) out.push_back(sorted[i]);
  }
  return out;
}

IntervalLink Canonicalize(const IntervalLink& link) {
  if (link.target < link.source) {
    return {link.target, link.source, Invert(link.relation)};
  }
  return link;
}

}  // namespace ifp
