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

#include <algorithm>
#include <array>

#include "jsonl.h"

namespace ifp {
namespace {

constexpr std::string_view kPreambleLead = "Document creation time: ";

// Opening tags are followed by one space and closing tags preceded by one.
constexpr std::array<std::string_view, 6> kTagNames = {"xs", "xe", "ys",
                                                       "ye", "x",  "y"};

struct Placement {
  Span span;  // in preambled text
  std::string open;
  std::string close;
};

std::string TagName(char family, std::optional<Side> side) {
  std::string name(1, family);
  if (side) name += *side == Side::kStart ? 's' : 'e';
  return name;
}

Span LocateEntity(const Document& doc, std::string_view id) {
  const TemporalEntity* entity = doc.FindEntity(id);
  if (entity == nullptr) {
    throw UnknownEntityError("document " + doc.id + " has no entity '" +
                             std::string(id) + "'");
  }
  if (entity->kind == EntityKind::kDocumentCreationTime) {
    return {kPreambleLead.size(), kPreambleLead.size() + kDctAnchor.size()};
  }
  if (!entity->span || entity->span->end > doc.text.size() ||
      entity->span->begin > entity->span->end) {
    throw EncodingError("entity '" + entity->id + "' of " + doc.id +
                        " has no usable span");
  }
  const std::size_t base = kDctPreamble.size() + 1;
  return {base + entity->span->begin, base + entity->span->end};
}

std::string Insert(const Document& doc, Placement a, Placement b) {
  if (a.span.begin > b.span.begin) std::swap(a, b);
  if (a.span.end > b.span.begin) {
    throw OverlappingSpansError("spans of the tagged entities overlap in " +
                                doc.id);
  }
  const std::string text = PreambledText(doc);
  std::string out;
  out.reserve(text.size() + 32);
  out.append(text, 0, a.span.begin);
  out.append("<" + a.open + "> ");
  out.append(text, a.span.begin, a.span.end - a.span.begin);
  out.append(" </" + a.close + ">");
  out.append(text, a.span.end, b.span.begin - a.span.end);
  out.append("<" + b.open + "> ");
  out.append(text, b.span.begin, b.span.end - b.span.begin);
  out.append(" </" + b.close + ">");
  out.append(text, b.span.end, std::string::npos);
  return out;
}

// Length of the tag token (with its adjoining space) starting at `pos`, or 0.
std::size_t TagTokenAt(std::string_view text, std::size_t pos) {
  const std::string_view rest = text.substr(pos);
  for (std::string_view name : kTagNames) {
    const std::string open = "<" + std::string(name) + "> ";
    const std::string close = " </" + std::string(name) + ">";
    if (rest.starts_with(open)) return open.size();
    if (rest.starts_with(close)) return close.size();
  }
  return 0;
}

bool IsContinuationByte(char c) {
  return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

}  // namespace

std::string_view ToString(Direction d) {
  return d == Direction::kForward ? "forward" : "swapped";
}

std::optional<Direction> ParseDirection(std::string_view s) {
  if (s == "forward") return Direction::kForward;
  if (s == "swapped") return Direction::kSwapped;
  return std::nullopt;
}

std::string PreambledText(const Document& doc) {
  std::string text(kDctPreamble);
  text += ' ';
  text += doc.text;
  return text;
}

std::string PointQueryId(std::string_view doc_id, std::string_view source,
                         std::string_view target, EndpointPair key,
                         Direction direction) {
  std::string id;
  id.append(doc_id).append(":").append(source).append(":").append(target);
  id.append(":").append(ToString(key));
  id.append(direction == Direction::kForward ? ":F" : ":S");
  return id;
}

std::string IntervalQueryId(std::string_view doc_id, std::string_view source,
                            std::string_view target) {
  std::string id;
  id.append(doc_id).append(":").append(source).append(":").append(target);
  return id;
}

TaggedQuery TagPointPair(const Document& doc, const PointEndpoint& source,
                         const PointEndpoint& target, Direction direction) {
  if (source.entity == target.entity) {
    throw EncodingError("cannot tag entity '" + source.entity +
                        "' against itself");
  }
  TaggedQuery query;
  query.doc_id = doc.id;
  query.direction = direction;
  query.source = source;
  query.target = target;
  query.id = PointQueryId(doc.id, source.entity, target.entity,
                          query.pair_key(), direction);
  const PointEndpoint& x = query.tagged_x();
  const PointEndpoint& y = query.tagged_y();
  const std::string xt = TagName('x', x.side);
  const std::string yt = TagName('y', y.side);
  query.text = Insert(doc, {LocateEntity(doc, x.entity), xt, xt},
                      {LocateEntity(doc, y.entity), yt, yt});
  return query;
}

IntervalQuery TagIntervalPair(const Document& doc, std::string_view source,
                              std::string_view target) {
  if (source == target) {
    throw EncodingError("cannot tag entity '" + std::string(source) +
                        "' against itself");
  }
  IntervalQuery query;
  query.id = IntervalQueryId(doc.id, source, target);
  query.doc_id = doc.id;
  query.source = source;
  query.target = target;
  query.text = Insert(doc, {LocateEntity(doc, source), "x", "x"},
                      {LocateEntity(doc, target), "y", "y"});
  return query;
}

std::vector<TaggedQuery> PointQueriesForPair(const Document& doc,
                                             std::string_view source,
                                             std::string_view target) {
  std::vector<TaggedQuery> queries;
  queries.reserve(8);
  for (EndpointPair key : kEndpointPairs) {
    const PointEndpoint x{std::string(source), SourceSide(key)};
    const PointEndpoint y{std::string(target), TargetSide(key)};
    queries.push_back(TagPointPair(doc, x, y, Direction::kForward));
    queries.push_back(TagPointPair(doc, x, y, Direction::kSwapped));
  }
  return queries;
}

std::string StripTags(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '<' || text[i] == ' ') {
      if (const std::size_t n = TagTokenAt(text, i); n > 0) {
        i += n;
        continue;
      }
    }
    out.push_back(text[i++]);
  }
  return out;
}

std::string TruncateAroundTags(std::string_view text, std::size_t max_chars) {
  if (text.size() <= max_chars) return std::string(text);

  // The preamble runs through the anchor, any tag closing around it, and the
  // separating space.
  std::size_t preamble_end = text.find(kDctAnchor);
  if (preamble_end == std::string_view::npos) {
    throw EncodingError("query lacks the creation-time preamble");
  }
  preamble_end += kDctAnchor.size();
  preamble_end += TagTokenAt(text, preamble_end);
  if (preamble_end < text.size() && text[preamble_end] == ' ') ++preamble_end;

  // Tagged region of the body: first tag start to last tag end.
  std::size_t first = std::string_view::npos;
  std::size_t last = 0;
  for (std::size_t i = preamble_end; i < text.size(); ++i) {
    if (const std::size_t n = TagTokenAt(text, i); n > 0) {
      first = std::min(first, i);
      last = i + n;
      i += n - 1;
    }
  }
  if (first == std::string_view::npos) {
    first = last = preamble_end;
  }

  const std::size_t fixed = preamble_end + (last - first);
  if (fixed > max_chars) {
    throw EncodingError("tagged region needs " + std::to_string(fixed) +
                        " bytes, limit is " + std::to_string(max_chars));
  }
  std::size_t budget = max_chars - fixed;
  std::size_t left = std::min(budget / 2, first - preamble_end);
  std::size_t right = std::min(budget - left, text.size() - last);
  left = std::min(budget - right, first - preamble_end);

  std::size_t begin = first - left;
  std::size_t end = last + right;
  while (begin < first && IsContinuationByte(text[begin])) ++begin;
  while (end > last && end < text.size() && IsContinuationByte(text[end])) {
    --end;
  }

  std::string out(text.substr(0, preamble_end));
  out.append(text.substr(begin, end - begin));
  return out;
}

void WritePointQueries(const std::filesystem::path& path,
                       std::span<const TaggedQuery> queries) {
  jsonl::Writer writer(path);
  for (const TaggedQuery& q : queries) {
    jsonl::Record record;
    record["query_id"] = q.id;
    record["doc_id"] = q.doc_id;
    record["direction"] = ToString(q.direction);
    record["source_entity"] = q.source.entity;
    record["source_side"] = ToString(q.source.side);
    record["target_entity"] = q.target.entity;
    record["target_side"] = ToString(q.target.side);
    record["text"] = q.text;
    writer.Write(record);
  }
  writer.Close();
}

void WriteIntervalQueries(const std::filesystem::path& path,
                          std::span<const IntervalQuery> queries) {
  jsonl::Writer writer(path);
  for (const IntervalQuery& q : queries) {
    jsonl::Record record;
    record["query_id"] = q.id;
    record["doc_id"] = q.doc_id;
    record["source_entity"] = q.source;
    record["target_entity"] = q.target;
    record["text"] = q.text;
    writer.Write(record);
  }
  writer.Close();
}

std::vector<TaggedQuery> ReadPointQueries(const std::filesystem::path& path) {
  std::vector<TaggedQuery> queries;
  jsonl::ForEach(path, [&](const nlohmann::json& j) {
    TaggedQuery q;
    q.id = j.at("query_id").get<std::string>();
    q.doc_id = j.at("doc_id").get<std::string>();
    const auto direction = ParseDirection(j.at("direction").get<std::string>());
    const auto source_side = ParseSide(j.at("source_side").get<std::string>());
    const auto target_side = ParseSide(j.at("target_side").get<std::string>());
    if (!direction || !source_side || !target_side) {
      throw std::invalid_argument("bad direction or side in query " + q.id);
    }
    q.direction = *direction;
    q.source = {j.at("source_entity").get<std::string>(), *source_side};
    q.target = {j.at("target_entity").get<std::string>(), *target_side};
    q.text = j.at("text").get<std::string>();
    queries.push_back(std::move(q));
  });
  return queries;
}

}  // namespace ifp
