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

#include <fstream>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "support/synthetic.h"

namespace ifp {
namespace {

PointEndpoint S(const std::string& e) { return {e, Side::kStart}; }
PointEndpoint E(const std::string& e) { return {e, Side::kEnd}; }

Document Doc(const std::string& id, std::vector<TLink> links) {
  Document doc;
  doc.id = id;
  doc.tlinks = std::move(links);
  return doc;
}

TLink Link(const std::string& a, AllenRelation r, const std::string& b) {
  return {a, b, r, TimeMLRelation::kBefore};
}

struct SyntheticDocs {
  std::vector<Document> docs;
  std::map<std::string, testing::Timeline> timelines;
};

SyntheticDocs MakeSynthetic(int n, std::uint64_t seed) {
  SyntheticDocs out;
  std::mt19937_64 rng(seed);
  testing::SyntheticOptions options;
  options.links = 10;
  for (int i = 0; i < n; ++i) {
    const std::string id = "s" + std::to_string(i);
    testing::Timeline timeline;
    out.docs.push_back(
        ParseTimeML(testing::SyntheticTimeML(id, rng, options, &timeline), id));
    out.timelines[id] = timeline;
  }
  return out;
}

int Value(const testing::Timeline& t, const PointEndpoint& p) {
  const auto& [start, end] = t.intervals.at(p.entity);
  return p.side == Side::kStart ? start : end;
}

PointRelation Truth(const testing::Timeline& t, const PointExample& e) {
  const int a = Value(t, e.source);
  const int b = Value(t, e.target);
  return a < b ? PointRelation::kBefore
               : a == b ? PointRelation::kEqual : PointRelation::kAfter;
}

TEST(IntervalsToPoints, FourExamplesPerLink) {
  const std::vector<Document> docs = {
      Doc("d", {Link("e1", AllenRelation::kOverlaps, "t1")})};
  const PointDataset points = IntervalsToPoints(docs);
  const PointDataset expected = {
      {"d", S("e1"), S("t1"), PointRelation::kBefore, Provenance::kAnnotated},
      {"d", S("e1"), E("t1"), PointRelation::kBefore, Provenance::kAnnotated},
      {"d", E("e1"), S("t1"), PointRelation::kAfter, Provenance::kAnnotated},
      {"d", E("e1"), E("t1"), PointRelation::kBefore, Provenance::kAnnotated},
  };
  EXPECT_EQ(points, expected);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(points[i].pair_key(), kEndpointPairs[i]);
  }
}

TEST(IntervalsToPoints, ReadsFixtureDocument) {
  const std::vector<Document> docs = {
      ReadTimeMLFile(std::filesystem::path(IFP_TEST_FIXTURES) / "sample.tml")};
  const PointDataset points = IntervalsToPoints(docs);
  ASSERT_EQ(points.size(), 16u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(points[i].relation, PointRelation::kAfter);  // e1 after t1
  }
}

TEST(IntervalsToPoints, DropsDuplicatesAndContradictions) {
  // Meets and before agree on SS, SE and EE; ES differs.
  const std::vector<Document> docs = {
      Doc("d", {Link("a", AllenRelation::kBefore, "b"),
                Link("a", AllenRelation::kBefore, "b"),
                Link("a", AllenRelation::kMeets, "b")}),
      Doc("f", {Link("a", AllenRelation::kBefore, "b")})};
  const PointDataset points = IntervalsToPoints(docs);
  EXPECT_EQ(points.size(), 8u);
  for (const PointExample& e : points) {
    if (e.source == E("a") && e.target == S("b")) {
      EXPECT_EQ(e.relation, PointRelation::kBefore);
    }
  }
}

TEST(IntervalsToPoints, ReverseStatementIsNotADuplicate) {
  const std::vector<Document> docs = {
      Doc("d", {Link("a", AllenRelation::kBefore, "b"),
                Link("b", AllenRelation::kAfter, "a")})};
  EXPECT_EQ(IntervalsToPoints(docs).size(), 8u);
  EXPECT_EQ(AugmentInverse(IntervalsToPoints(docs)).size(), 8u);
}

TEST(AugmentInverse, DoublesAndIsIdempotent) {
  const SyntheticDocs s = MakeSynthetic(10, 3);
  const PointDataset raw = IntervalsToPoints(s.docs);
  const PointDataset inverse = AugmentInverse(raw);
  ASSERT_EQ(inverse.size(), 2 * raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    EXPECT_EQ(inverse[i], raw[i]);
    const PointExample& inv = inverse[raw.size() + i];
    EXPECT_EQ(inv.source, raw[i].target);
    EXPECT_EQ(inv.target, raw[i].source);
    EXPECT_EQ(inv.relation, Invert(raw[i].relation));
    EXPECT_EQ(inv.pair_key(), Mirror(raw[i].pair_key()));
    EXPECT_EQ(inv.provenance, Provenance::kInverse);
  }
  EXPECT_EQ(AugmentInverse(inverse), inverse);

  const IntervalDataset intervals = IntervalsToExamples(s.docs);
  const IntervalDataset interval_inverse = AugmentInverse(intervals);
  EXPECT_EQ(interval_inverse.size(), 2 * intervals.size());
  EXPECT_EQ(AugmentInverse(interval_inverse), interval_inverse);
}

TEST(AugmentClosure, DerivesChain) {
  const std::vector<Document> docs = {
      Doc("d", {Link("a", AllenRelation::kBefore, "b"),
                Link("b", AllenRelation::kMeets, "c")})};
  const PointDataset raw = IntervalsToPoints(docs);
  ClosureStats stats;
  const PointDataset closed = AugmentClosure(raw, {}, &stats);
  EXPECT_EQ(stats.documents, 1u);
  EXPECT_EQ(stats.inconsistent_documents, 0u);
  // a-c gets all four pairs; nothing else is new.
  EXPECT_EQ(stats.derived, 4u);
  ASSERT_EQ(closed.size(), raw.size() + 4);
  for (std::size_t i = raw.size(); i < closed.size(); ++i) {
    EXPECT_EQ(closed[i].relation, PointRelation::kBefore);
    EXPECT_EQ(closed[i].source.entity, "a");
    EXPECT_EQ(closed[i].target.entity, "c");
    EXPECT_EQ(closed[i].provenance, Provenance::kClosure);
  }
}

TEST(AugmentClosure, RelaxedDerivesSubsetOfStrict) {
  const SyntheticDocs s = MakeSynthetic(20, 17);
  const PointDataset raw = IntervalsToPoints(s.docs);
  ClosureOptions relaxed;
  relaxed.strict_intervals = false;
  const PointDataset strict_closed = AugmentClosure(raw);
  const PointDataset relaxed_closed = AugmentClosure(raw, relaxed);
  const std::set<std::tuple<std::string, PointEndpoint, PointEndpoint,
                            PointRelation>>
      strict_facts = [&] {
        std::set<std::tuple<std::string, PointEndpoint, PointEndpoint,
                            PointRelation>>
            out;
        for (const PointExample& e : strict_closed) {
          out.insert({e.doc_id, e.source, e.target, e.relation});
        }
        return out;
      }();
  for (const PointExample& e : relaxed_closed) {
    EXPECT_TRUE(strict_facts.contains({e.doc_id, e.source, e.target, e.relation}));
  }
}

TEST(AugmentClosure, InconsistentDocumentKeepsInputOnly) {
  const std::vector<Document> docs = {
      Doc("bad", {Link("a", AllenRelation::kBefore, "b"),
                  Link("b", AllenRelation::kBefore, "c"),
                  Link("c", AllenRelation::kBefore, "a")}),
      Doc("ok", {Link("a", AllenRelation::kBefore, "b"),
                 Link("b", AllenRelation::kBefore, "c")})};
  const PointDataset raw = IntervalsToPoints(docs);
  ClosureStats stats;
  const PointDataset closed = AugmentClosure(raw, {}, &stats);
  EXPECT_EQ(stats.documents, 2u);
  EXPECT_EQ(stats.inconsistent_documents, 1u);
  for (std::size_t i = raw.size(); i < closed.size(); ++i) {
    EXPECT_EQ(closed[i].doc_id, "ok");
  }
}

// Every derived fact holds on the timeline the document was drawn from, is
// oriented forward, relates distinct entities and restates nothing.
TEST(AugmentClosure, SoundOnSyntheticTimelines) {
  const SyntheticDocs s = MakeSynthetic(40, 5);
  const PointDataset raw = IntervalsToPoints(s.docs);
  std::set<std::tuple<std::string, PointEndpoint, PointEndpoint>> stated;
  for (const PointExample& e : raw) {
    stated.insert({e.doc_id, e.source, e.target});
    stated.insert({e.doc_id, e.target, e.source});
  }
  ClosureStats stats;
  const PointDataset closed = AugmentClosure(raw, {}, &stats);
  EXPECT_EQ(stats.inconsistent_documents, 0u);
  EXPECT_GT(stats.derived, 0u);
  std::set<std::tuple<std::string, PointEndpoint, PointEndpoint>> derived;
  for (std::size_t i = raw.size(); i < closed.size(); ++i) {
    const PointExample& e = closed[i];
    EXPECT_EQ(e.relation, Truth(s.timelines.at(e.doc_id), e));
    EXPECT_NE(e.relation, PointRelation::kAfter);
    EXPECT_NE(e.source.entity, e.target.entity);
    EXPECT_FALSE(stated.contains({e.doc_id, e.source, e.target}));
    EXPECT_TRUE(derived.insert({e.doc_id, std::min(e.source, e.target),
                                std::max(e.source, e.target)})
                    .second);
  }
  for (const PointExample& e : raw) {
    EXPECT_EQ(e.relation, Truth(s.timelines.at(e.doc_id), e));
  }
}

TEST(AugmentClosure, IntervalLevelIsSound) {
  const SyntheticDocs s = MakeSynthetic(30, 9);
  const IntervalDataset raw = IntervalsToExamples(s.docs);
  ClosureStats stats;
  const IntervalDataset closed = AugmentClosure(raw, {}, &stats);
  EXPECT_GT(stats.derived, 0u);
  for (std::size_t i = raw.size(); i < closed.size(); ++i) {
    const IntervalExample& e = closed[i];
    const auto& t = s.timelines.at(e.doc_id);
    EXPECT_LT(e.source, e.target);
    EXPECT_EQ(e.relation, testing::RelationOf(t.intervals.at(e.source),
                                              t.intervals.at(e.target)));
  }
}

TEST(RebalanceLtGt, FlipsHalfOfDerivedBefore) {
  const SyntheticDocs s = MakeSynthetic(20, 13);
  const PointDataset closed = AugmentClosure(IntervalsToPoints(s.docs));
  std::size_t k = 0;
  for (const PointExample& e : closed) {
    k += e.provenance == Provenance::kClosure &&
         e.relation == PointRelation::kBefore;
  }
  ASSERT_GT(k, 10u);
  const PointDataset balanced = RebalanceLtGt(closed, 1);
  ASSERT_EQ(balanced.size(), closed.size());
  std::size_t flipped = 0;
  for (std::size_t i = 0; i < closed.size(); ++i) {
    if (balanced[i] == closed[i]) continue;
    ++flipped;
    EXPECT_EQ(closed[i].provenance, Provenance::kClosure);
    EXPECT_EQ(balanced[i].relation, PointRelation::kAfter);
    EXPECT_EQ(balanced[i].source, closed[i].target);
    EXPECT_EQ(balanced[i].target, closed[i].source);
    EXPECT_EQ(balanced[i].provenance, Provenance::kClosure);
  }
  EXPECT_EQ(flipped, k / 2);
  EXPECT_EQ(RebalanceLtGt(closed, 1), balanced);
  EXPECT_NE(RebalanceLtGt(closed, 2), balanced);
}

TEST(RebalanceLtGt, FlipIsAnInvolution) {
  const SyntheticDocs s = MakeSynthetic(10, 15);
  const PointDataset closed = AugmentClosure(IntervalsToPoints(s.docs));
  const PointDataset balanced = RebalanceLtGt(closed, 6);
  for (std::size_t i = 0; i < closed.size(); ++i) {
    if (balanced[i] == closed[i]) continue;
    PointExample back = balanced[i].Inverted();
    back.provenance = Provenance::kClosure;
    EXPECT_EQ(back, closed[i]);
  }
}

TEST(RebalanceLtGt, TenDerivedGiveFive) {
  PointDataset examples;
  for (int i = 0; i < 10; ++i) {
    examples.push_back({"d", S("a" + std::to_string(i)), S("b"),
                        PointRelation::kBefore, Provenance::kClosure});
  }
  examples.push_back({"d", S("a"), S("b"), PointRelation::kBefore,
                      Provenance::kAnnotated});
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const PointDataset out = RebalanceLtGt(examples, seed);
    std::size_t after = 0;
    for (const PointExample& e : out) after += e.relation == PointRelation::kAfter;
    EXPECT_EQ(after, 5u);
    EXPECT_EQ(out.back(), examples.back());
  }
  EXPECT_TRUE(RebalanceLtGt(PointDataset{}, 0).empty());
}

TEST(AugmentClosure, ClosedSetGainsNothing) {
  const SyntheticDocs s = MakeSynthetic(10, 19);
  PointDataset closed = AugmentClosure(IntervalsToPoints(s.docs));
  for (PointExample& e : closed) e.provenance = Provenance::kAnnotated;
  ClosureStats stats;
  EXPECT_EQ(AugmentClosure(closed, {}, &stats).size(), closed.size());
  EXPECT_EQ(stats.derived, 0u);
}

// count(key, <) after inversion = count(key, <) + count(mirror(key), >).
TEST(Stats, InverseCountIdentity) {
  const SyntheticDocs s = MakeSynthetic(25, 23);
  const PointDataset raw = IntervalsToPoints(s.docs);
  const PointStats before = ComputeStats(raw);
  const PointStats after = ComputeStats(AugmentInverse(raw));
  for (EndpointPair key : kEndpointPairs) {
    for (PointRelation r : kPointRelations) {
      EXPECT_EQ(after.at(key, r),
                before.at(key, r) + before.at(Mirror(key), Invert(r)))
          << ToString(key) << " " << ToString(r);
    }
  }
  EXPECT_EQ(ComputeStats(PointDataset{}).total(), 0u);
}

TEST(BuildTrainingSets, FourVariantsAtBothLevels) {
  const SyntheticDocs s = MakeSynthetic(15, 21);
  const TrainingSets sets = BuildTrainingSets(s.docs, 4);
  EXPECT_EQ(sets.point_inverse.size(), 2 * sets.point_raw.size());
  EXPECT_GT(sets.point_closure.size(), sets.point_raw.size());
  EXPECT_EQ(sets.point_closure,
            RebalanceLtGt(AugmentClosure(sets.point_raw), 4));
  EXPECT_EQ(sets.point_inverse_closure, AugmentInverse(sets.point_closure));
  EXPECT_EQ(sets.interval_raw.size(), [&] {
    std::size_t n = 0;
    for (const Document& d : s.docs) n += d.tlinks.size();
    return n;
  }());
  EXPECT_EQ(sets.interval_inverse.size(), 2 * sets.interval_raw.size());
  EXPECT_EQ(sets.interval_closure, AugmentClosure(sets.interval_raw));
  EXPECT_EQ(sets.interval_inverse_closure,
            AugmentInverse(sets.interval_closure));
}

TEST(Stats, CountsByPairAndRelation) {
  const std::vector<Document> docs = {
      Doc("d", {Link("a", AllenRelation::kOverlaps, "b"),
                Link("b", AllenRelation::kEquals, "c")})};
  const PointStats stats = ComputeStats(IntervalsToPoints(docs));
  EXPECT_EQ(stats.total(), 8u);
  EXPECT_EQ(stats.at(EndpointPair::kSS, PointRelation::kBefore), 1u);
  EXPECT_EQ(stats.at(EndpointPair::kSS, PointRelation::kEqual), 1u);
  EXPECT_EQ(stats.at(EndpointPair::kES, PointRelation::kAfter), 2u);
  EXPECT_EQ(stats.at(EndpointPair::kSE, PointRelation::kBefore), 2u);
  EXPECT_EQ(stats.at(EndpointPair::kEE, PointRelation::kEqual), 1u);

  const IntervalStats istats = ComputeStats(IntervalsToExamples(docs));
  EXPECT_EQ(istats.total(), 2u);
  EXPECT_EQ(istats.at(AllenRelation::kEquals), 1u);
  EXPECT_NE(FormatStats(stats).find("total 8"), std::string::npos);
  EXPECT_NE(FormatStats(istats).find("overlaps"), std::string::npos);
}

TEST(DatasetFiles, RoundTrip) {
  const auto dir = testing::TempDir("ifp_dataset_files");
  const SyntheticDocs s = MakeSynthetic(5, 2);
  const TrainingSets sets = BuildTrainingSets(s.docs, 0);
  WritePointDataset(dir / "p.jsonl", sets.point_inverse_closure);
  WriteIntervalDataset(dir / "i.jsonl", sets.interval_inverse_closure);
  EXPECT_EQ(ReadPointDataset(dir / "p.jsonl"), sets.point_inverse_closure);
  EXPECT_EQ(ReadIntervalDataset(dir / "i.jsonl"),
            sets.interval_inverse_closure);

  EXPECT_EQ(StatsPath(dir / "p.jsonl"), dir / "p.jsonl.stats.json");
  WriteStats(StatsPath(dir / "p.jsonl"),
             ComputeStats(sets.point_inverse_closure), {{"seed", "0"}});
  EXPECT_TRUE(std::filesystem::exists(dir / "p.jsonl.stats.json"));

  std::ofstream(dir / "bad.jsonl") << "{\"doc_id\":\"d\"}\n";
  EXPECT_ANY_THROW(ReadPointDataset(dir / "bad.jsonl"));
}

}  // namespace
}  // namespace ifp
