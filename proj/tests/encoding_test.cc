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

#include "ifp/encoding.h"

#include <random>

#include <gtest/gtest.h>

#include "support/synthetic.h"

namespace ifp {
namespace {

Document Arrival() {
  return ParseTimeML(
      "<TimeML><DCT><TIMEX3 tid=\"t0\" functionInDocument=\"CREATION_TIME\">"
      "1998-02-27</TIMEX3></DCT><TEXT>John <EVENT eid=\"e1\">arrived</EVENT> "
      "in Boston after <TIMEX3 tid=\"t1\">10 p.m.</TIMEX3></TEXT></TimeML>",
      "arrival");
}

PointEndpoint S(const std::string& e) { return {e, Side::kStart}; }
PointEndpoint E(const std::string& e) { return {e, Side::kEnd}; }

TEST(PointQuery, ForwardTagsSourceAsX) {
  const TaggedQuery q =
      TagPointPair(Arrival(), S("e1"), E("t1"), Direction::kForward);
  EXPECT_EQ(q.text,
            "Document creation time: <dct> John <xs> arrived </xs> in Boston "
            "after <ye> 10 p.m. </ye>");
  EXPECT_EQ(q.id, "arrival:e1:t1:SE:F");
  EXPECT_EQ(q.pair_key(), EndpointPair::kSE);
}

TEST(PointQuery, SwappedTagsTargetAsX) {
  const TaggedQuery q =
      TagPointPair(Arrival(), S("e1"), E("t1"), Direction::kSwapped);
  EXPECT_EQ(q.text,
            "Document creation time: <dct> John <ys> arrived </ys> in Boston "
            "after <xe> 10 p.m. </xe>");
  EXPECT_EQ(q.id, "arrival:e1:t1:SE:S");
  EXPECT_EQ(q.tagged_x(), E("t1"));
  EXPECT_EQ(q.tagged_y(), S("e1"));
  EXPECT_EQ(q.pair_key(), EndpointPair::kSE);
}

TEST(PointQuery, CreationTimeIsTaggedInPreamble) {
  const TaggedQuery q =
      TagPointPair(Arrival(), E("t0"), S("e1"), Direction::kForward);
  EXPECT_EQ(q.text,
            "Document creation time: <xe> <dct> </xe> John <ys> arrived </ys> "
            "in Boston after 10 p.m.");
}

TEST(PointQuery, EightQueriesPerPair) {
  const std::vector<TaggedQuery> qs = PointQueriesForPair(Arrival(), "e1", "t1");
  ASSERT_EQ(qs.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(qs[i].pair_key(), kEndpointPairs[i / 2]);
    EXPECT_EQ(qs[i].direction,
              i % 2 == 0 ? Direction::kForward : Direction::kSwapped);
    EXPECT_EQ(qs[i].source.entity, "e1");
    EXPECT_EQ(qs[i].target.entity, "t1");
  }
  EXPECT_NE(qs[2].text.find("<xs> arrived </xs>"), std::string::npos);
  EXPECT_NE(qs[2].text.find("<ye> 10 p.m. </ye>"), std::string::npos);
  EXPECT_NE(qs[3].text.find("<ys> arrived </ys>"), std::string::npos);
  EXPECT_NE(qs[3].text.find("<xe> 10 p.m. </xe>"), std::string::npos);
}

TEST(IntervalQuery, UsesPlainTags) {
  const IntervalQuery q = TagIntervalPair(Arrival(), "t1", "e1");
  EXPECT_EQ(q.text,
            "Document creation time: <dct> John <y> arrived </y> in Boston "
            "after <x> 10 p.m. </x>");
  EXPECT_EQ(q.id, "arrival:t1:e1");
}

TEST(Queries, Errors) {
  const Document doc = Arrival();
  EXPECT_THROW(TagPointPair(doc, S("e1"), S("e9"), Direction::kForward),
               UnknownEntityError);
  EXPECT_THROW(TagPointPair(doc, S("e1"), E("e1"), Direction::kForward),
               EncodingError);
  EXPECT_THROW(TagIntervalPair(doc, "e1", "e1"), EncodingError);

  Document overlapping = doc;
  overlapping.entities.push_back({"t2", EntityKind::kTimex, Span{8, 14},
                                  std::nullopt, ""});
  EXPECT_THROW(TagIntervalPair(overlapping, "e1", "t2"), OverlappingSpansError);
}

TEST(Queries, EmptySpanIsTagged) {
  Document doc = Arrival();
  doc.entities.push_back({"t2", EntityKind::kTimex, Span{4, 4}, std::nullopt,
                          ""});
  const IntervalQuery q = TagIntervalPair(doc, "t2", "e1");
  EXPECT_NE(q.text.find("John<x>  </x> <y> arrived"), std::string::npos);
  EXPECT_EQ(StripTags(q.text), PreambledText(doc));
}

// Removing the tags gives back the preambled document for every query.
TEST(StripTags, InvertsTagging) {
  std::mt19937_64 rng(8);
  for (int d = 0; d < 10; ++d) {
    const Document doc =
        ParseTimeML(testing::SyntheticTimeML("s" + std::to_string(d), rng, {}));
    const std::string plain = PreambledText(doc);
    for (const TLink& l : doc.tlinks) {
      for (const TaggedQuery& q : PointQueriesForPair(doc, l.source, l.target)) {
        EXPECT_EQ(StripTags(q.text), plain) << q.id;
      }
      EXPECT_EQ(StripTags(TagIntervalPair(doc, l.source, l.target).text),
                plain);
    }
  }
}

TEST(StripTags, KeepsOrdinaryMarkup) {
  EXPECT_EQ(StripTags("a <b> c </i> <xs> d </xs>"), "a <b> c </i> d");
}

std::string LongDocument(std::string filler) {
  std::string text;
  for (int i = 0; i < 40; ++i) text += filler;
  return text;
}

TEST(Truncate, KeepsPreambleAndTags) {
  Document doc;
  doc.id = "long";
  doc.text = LongDocument("lorem ipsum ") + "alpha" + LongDocument(" dolor sit") +
             " beta" + LongDocument(" amet");
  doc.entities = {{"t0", EntityKind::kDocumentCreationTime, std::nullopt,
                   std::nullopt, ""},
                  {"e1", EntityKind::kEvent, Span{480, 485}, "alpha", ""},
                  {"e2", EntityKind::kEvent, Span{886, 890}, "beta", ""}};
  ASSERT_EQ(doc.text.substr(886, 4), "beta");
  const std::string full =
      TagPointPair(doc, E("e1"), S("e2"), Direction::kForward).text;
  for (std::size_t limit : {600u, 520u, 470u}) {
    const std::string cut = TruncateAroundTags(full, limit);
    EXPECT_LE(cut.size(), limit);
    EXPECT_GE(cut.size() + 1, limit);
    EXPECT_TRUE(cut.starts_with("Document creation time: <dct> "));
    EXPECT_NE(cut.find("<xe> alpha </xe>"), std::string::npos);
    EXPECT_NE(cut.find("<ys> beta </ys>"), std::string::npos);
    EXPECT_NE(full.find(cut.substr(30)), std::string::npos);
  }
  EXPECT_EQ(TruncateAroundTags(full, full.size()), full);
  EXPECT_THROW(TruncateAroundTags(full, 100), EncodingError);
}

TEST(Truncate, NeverSplitsCharacters) {
  Document doc;
  doc.id = "utf8";
  const std::string word = "\xc3\xa9t\xc3\xa9 ";  // "été "
  doc.text = LongDocument(word) + "x" + LongDocument(word);
  const std::size_t at = LongDocument(word).size();
  doc.entities = {{"t0", EntityKind::kDocumentCreationTime, std::nullopt,
                   std::nullopt, ""},
                  {"e1", EntityKind::kEvent, Span{at, at + 1}, "x", ""}};
  const std::string full =
      TagPointPair(doc, S("t0"), S("e1"), Direction::kForward).text;
  for (std::size_t limit = 60; limit < 90; ++limit) {
    const std::string cut = TruncateAroundTags(full, limit);
    EXPECT_LE(cut.size(), limit);
    const std::string body = cut.substr(cut.find("</xs> ") + 6);
    ASSERT_FALSE(body.empty());
    EXPECT_NE(static_cast<unsigned char>(body.front()) & 0xC0, 0x80u);
    const unsigned char last = static_cast<unsigned char>(cut.back());
    EXPECT_TRUE(last < 0x80 || (last & 0xC0) == 0x80) << limit;
  }
}

TEST(QueryFiles, RoundTrip) {
  const auto dir = testing::TempDir("ifp_encoding_files");
  const std::vector<TaggedQuery> qs = PointQueriesForPair(Arrival(), "e1", "t0");
  WritePointQueries(dir / "q.jsonl", qs);
  const std::vector<TaggedQuery> back = ReadPointQueries(dir / "q.jsonl");
  ASSERT_EQ(back.size(), qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    EXPECT_EQ(back[i].id, qs[i].id);
    EXPECT_EQ(back[i].text, qs[i].text);
    EXPECT_EQ(back[i].direction, qs[i].direction);
    EXPECT_EQ(back[i].source, qs[i].source);
    EXPECT_EQ(back[i].target, qs[i].target);
  }
}

}  // namespace
}  // namespace ifp
