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

// Tagged model inputs. A point query marks the two queried endpoints with
// <xs>/<xe> and <ys>/<ye>; an interval query uses <x> and <y>. Every query
// starts with the creation-time preamble whose <dct> anchor stands for the
// DCT entity.

#ifndef IFP_ENCODING_H_
#define IFP_ENCODING_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ifp/algebra.h"
#include "ifp/corpus.h"

namespace ifp {

inline constexpr std::string_view kDctAnchor = "<dct>";
inline constexpr std::string_view kDctPreamble = "Document creation time: <dct>";

enum class Direction : std::uint8_t { kForward, kSwapped };

std::string_view ToString(Direction d);  // "forward", "swapped"
std::optional<Direction> ParseDirection(std::string_view s);

class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownEntityError : public EncodingError {
 public:
  using EncodingError::EncodingError;
};

class OverlappingSpansError : public EncodingError {
 public:
  using EncodingError::EncodingError;
};

struct TaggedQuery {
  std::string id;
  std::string doc_id;
  std::string text;
  Direction direction = Direction::kForward;
  // The queried pair (x_i, y_j) as asked, independent of direction.
  PointEndpoint source;
  PointEndpoint target;

  // Endpoints carrying the x and y tags. A forward query reads
  // (source REL target); a swapped one reads (target REL source).
  const PointEndpoint& tagged_x() const {
    return direction == Direction::kForward ? source : target;
  }
  const PointEndpoint& tagged_y() const {
    return direction == Direction::kForward ? target : source;
  }
  EndpointPair pair_key() const { return PairKey(source.side, target.side); }
};

struct IntervalQuery {
  std::string id;
  std::string doc_id;
  std::string text;
  std::string source;
  std::string target;
};

// "Document creation time: <dct> " followed by the document text.
std::string PreambledText(const Document& doc);

// Identifier of one point query: doc:x:y:KEY:F or doc:x:y:KEY:S.
std::string PointQueryId(std::string_view doc_id, std::string_view source,
                         std::string_view target, EndpointPair key,
                         Direction direction);
std::string IntervalQueryId(std::string_view doc_id, std::string_view source,
                            std::string_view target);

TaggedQuery TagPointPair(const Document& doc, const PointEndpoint& source,
                         const PointEndpoint& target, Direction direction);

IntervalQuery TagIntervalPair(const Document& doc, std::string_view source,
                              std::string_view target);

// The eight queries for an entity pair: SS, SE, ES, EE, each forward then
// swapped.
std::vector<TaggedQuery> PointQueriesForPair(const Document& doc,
                                             std::string_view source,
                                             std::string_view target);

// Removes every endpoint and interval tag together with the single space
// inserted next to it. The <dct> anchor is kept.
std::string StripTags(std::string_view text);

// Shortens a query to at most `max_chars` bytes. The preamble is kept and
// the rest is a window centred on the tagged region, which is never cut.
std::string TruncateAroundTags(std::string_view text, std::size_t max_chars);

void WritePointQueries(const std::filesystem::path& path,
                       std::span<const TaggedQuery> queries);
void WriteIntervalQueries(const std::filesystem::path& path,
                          std::span<const IntervalQuery> queries);
std::vector<TaggedQuery> ReadPointQueries(const std::filesystem::path& path);

}  // namespace ifp

#endif  // IFP_ENCODING_H_
