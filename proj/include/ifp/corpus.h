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

// TimeML document model and reader.

#ifndef IFP_CORPUS_H_
#define IFP_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ifp/algebra.h"

namespace ifp {

enum class EntityKind : std::uint8_t { kEvent, kTimex, kDocumentCreationTime };

// Byte offsets [begin, end) into Document::text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
};

struct TemporalEntity {
  std::string id;
  EntityKind kind = EntityKind::kEvent;
  std::optional<Span> span;        // absent for the DCT, may be empty
  std::optional<std::string> surface;
  std::string value;               // TIMEX3 value attribute, opaque

  bool operator==(const TemporalEntity&) const = default;
};

// The 14 TimeML 1.2.1 TLINK relation types.
enum class TimeMLRelation : std::uint8_t {
  kBefore,
  kAfter,
  kIBefore,
  kIAfter,
  kBegins,
  kBegunBy,
  kEnds,
  kEndedBy,
  kIncludes,
  kIsIncluded,
  kDuring,
  kDuringInv,
  kSimultaneous,
  kIdentity,
};

inline constexpr std::array<TimeMLRelation, 14> kTimeMLRelations = {
    TimeMLRelation::kBefore,       TimeMLRelation::kAfter,
    TimeMLRelation::kIBefore,      TimeMLRelation::kIAfter,
    TimeMLRelation::kBegins,       TimeMLRelation::kBegunBy,
    TimeMLRelation::kEnds,         TimeMLRelation::kEndedBy,
    TimeMLRelation::kIncludes,     TimeMLRelation::kIsIncluded,
    TimeMLRelation::kDuring,       TimeMLRelation::kDuringInv,
    TimeMLRelation::kSimultaneous, TimeMLRelation::kIdentity};

std::string_view ToString(TimeMLRelation r);
std::optional<TimeMLRelation> ParseTimeMLRelation(std::string_view s);

// Label normalization used by the TempEval-3 scorer: DURING, DURING_INV,
// SIMULTANEOUS and IDENTITY all collapse to equals.
AllenRelation MapTimeMLToAllen(TimeMLRelation r);

// The 11 Allen relations reachable from TimeML labels.
std::vector<AllenRelation> ObservedAllenRelations();

struct TLink {
  std::string source;
  std::string target;
  AllenRelation relation = AllenRelation::kBefore;
  TimeMLRelation original_label = TimeMLRelation::kBefore;

  IntervalLink link() const { return {source, target, relation}; }
  bool operator==(const TLink&) const = default;
};

struct Document {
  std::string id;
  std::string text;
  std::vector<TemporalEntity> entities;  // the DCT comes first
  std::vector<TLink> tlinks;

  const TemporalEntity& dct() const;
  const TemporalEntity* FindEntity(std::string_view id) const;
  std::vector<IntervalLink> links() const;

  bool operator==(const Document&) const = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t line, std::size_t column,
             const std::string& message);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses one TimeML document. `name` is used as the document id when given
// (TempEval-3 tooling identifies documents by file stem) and otherwise the
// DOCID element is used. Throws ParseError.
Document ParseTimeML(std::string_view content, std::string_view name = {});

Document ReadTimeMLFile(const std::filesystem::path& path);

enum class Split : std::uint8_t { kTrain, kValidation, kTest, kTrainFull };

std::string_view ToString(Split split);
std::optional<Split> ParseSplit(std::string_view s);

inline constexpr std::uint64_t kDefaultSplitSeed = 20130614;

struct LoadOptions {
  std::uint64_t seed = kDefaultSplitSeed;
  // Abort on the first unparsable file instead of collecting errors.
  bool strict = false;
  // One validation document id per line; replaces the seeded split.
  std::optional<std::filesystem::path> manifest;
};

struct LoadedCorpus {
  std::vector<Document> documents;   // sorted by id
  std::vector<std::string> errors;   // one message per rejected file
};

// Directory holding the training documents of a TempEval-3 tree
// (TBAQ-cleaned, train or training). Throws IoError when none exists.
std::filesystem::path TrainingDirectory(const std::filesystem::path& root);
// Directory holding the platinum test documents (te3-platinum, test or
// platinum). Throws IoError when none exists.
std::filesystem::path TestDirectory(const std::filesystem::path& root);

// Loads one split. Train and Validation partition the training documents
// 80/20 by a seeded shuffle of their sorted ids; TrainFull is their union.
LoadedCorpus LoadCorpus(const std::filesystem::path& root, Split split,
                        const LoadOptions& options = {});

// The validation ids chosen for a list of training ids.
std::vector<std::string> ValidationIds(std::vector<std::string> ids,
                                       std::uint64_t seed);

}  // namespace ifp

#endif  // IFP_CORPUS_H_
