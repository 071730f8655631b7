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

#include "ifp/corpus.h"

#include <expat.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>

namespace ifp {

namespace {

constexpr std::array<std::string_view, 14> kTimeMLNames = {
    "BEFORE",   "AFTER",       "IBEFORE",     "IAFTER",     "BEGINS",
    "BEGUN_BY", "ENDS",        "ENDED_BY",    "INCLUDES",   "IS_INCLUDED",
    "DURING",   "DURING_INV",  "SIMULTANEOUS", "IDENTITY"};

std::string Trim(std::string_view s) {
  const char* ws = " \t\r\n";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

struct RawLink {
  std::string lid;
  std::string rel_type;
  std::string source;
  std::string target;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct OpenEntity {
  std::string id;
  EntityKind kind;
  std::size_t begin;
  std::string value;
  bool is_dct;
};

// SAX state for one document. Character data inside <TEXT> is concatenated
// verbatim so that entity spans index the markup-free text.
class TimeMLReader {
 public:
  explicit TimeMLReader(std::string file) : file_(std::move(file)) {}

  Document Parse(std::string_view content, std::string_view name) {
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate(nullptr), &XML_ParserFree);
    parser_ = parser.get();
    XML_SetUserData(parser_, this);
    XML_SetElementHandler(parser_, &TimeMLReader::OnStart, &TimeMLReader::OnEnd);
    XML_SetCharacterDataHandler(parser_, &TimeMLReader::OnText);

    if (XML_Parse(parser_, content.data(), static_cast<int>(content.size()),
                  XML_TRUE) == XML_STATUS_ERROR) {
      if (pending_) std::rethrow_exception(pending_);
      throw Error(XML_ErrorString(XML_GetErrorCode(parser_)));
    }
    if (pending_) std::rethrow_exception(pending_);
    return Finish(name);
  }

 private:
  static void XMLCALL OnStart(void* data, const XML_Char* name,
                              const XML_Char** attrs) {
    auto* self = static_cast<TimeMLReader*>(data);
    try {
      std::map<std::string, std::string> attributes;
      for (int i = 0; attrs[i] != nullptr; i += 2) {
        attributes.emplace(attrs[i], attrs[i + 1]);
      }
      self->Start(name, attributes);
    } catch (...) {
      self->Abort();
    }
  }

  static void XMLCALL OnEnd(void* data, const XML_Char* name) {
    auto* self = static_cast<TimeMLReader*>(data);
    try {
      self->End(name);
    } catch (...) {
      self->Abort();
    }
  }

  static void XMLCALL OnText(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<TimeMLReader*>(data);
    if (self->text_depth_ > 0) self->text_.append(s, static_cast<std::size_t>(len));
    if (self->in_docid_) self->docid_.append(s, static_cast<std::size_t>(len));
  }

  void Abort() {
    pending_ = std::current_exception();
    XML_StopParser(parser_, XML_FALSE);
  }

  ParseError Error(const std::string& message) const {
    return ParseError(file_, XML_GetCurrentLineNumber(parser_),
                      XML_GetCurrentColumnNumber(parser_) + 1, message);
  }

  static std::string Get(const std::map<std::string, std::string>& attrs,
                         const char* key) {
    auto it = attrs.find(key);
    return it == attrs.end() ? std::string() : it->second;
  }

  void Start(const std::string& name,
             const std::map<std::string, std::string>& attrs) {
    if (name == "TEXT") {
      ++text_depth_;
      return;
    }
    if (name == "DOCID") {
      in_docid_ = true;
      return;
    }
    if (name == "DCT") {
      ++dct_depth_;
      return;
    }
    if (name == "EVENT" || name == "TIMEX3") {
      const bool is_event = name == "EVENT";
      std::string id = Get(attrs, is_event ? "eid" : "tid");
      if (id.empty()) throw Error(name + " without an id");
      const bool is_dct =
          !is_event && (dct_depth_ > 0 ||
                        Get(attrs, "functionInDocument") == "CREATION_TIME");
      open_.push_back({std::move(id),
                       is_event ? EntityKind::kEvent : EntityKind::kTimex,
                       text_.size(), Get(attrs, "value"), is_dct});
      return;
    }
    if (name == "MAKEINSTANCE") {
      std::string eiid = Get(attrs, "eiid");
      std::string eid = Get(attrs, "eventID");
      if (eiid.empty() || eid.empty()) {
        throw Error("MAKEINSTANCE without eiid or eventID");
      }
      instances_.emplace(std::move(eiid), std::move(eid));
      return;
    }
    if (name == "TLINK") {
      RawLink link;
      link.lid = Get(attrs, "lid");
      link.rel_type = Get(attrs, "relType");
      link.source = Get(attrs, "eventInstanceID");
      if (link.source.empty()) link.source = Get(attrs, "timeID");
      link.target = Get(attrs, "relatedToEventInstance");
      if (link.target.empty()) link.target = Get(attrs, "relatedToTime");
      link.line = XML_GetCurrentLineNumber(parser_);
      link.column = XML_GetCurrentColumnNumber(parser_) + 1;
      if (link.source.empty() || link.target.empty()) {
        throw Error("TLINK " + link.lid + " lacks a source or target");
      }
      raw_links_.push_back(std::move(link));
    }
  }

  void End(const std::string& name) {
    if (name == "TEXT") {
      --text_depth_;
    } else if (name == "DOCID") {
      in_docid_ = false;
    } else if (name == "DCT") {
      --dct_depth_;
    } else if (name == "EVENT" || name == "TIMEX3") {
      OpenEntity open = std::move(open_.back());
      open_.pop_back();
      if (!seen_ids_.insert(open.id).second) {
        throw Error("duplicate entity id " + open.id);
      }
      if (open.is_dct) {
        if (dct_) throw Error("more than one document creation time");
        dct_ = TemporalEntity{open.id, EntityKind::kDocumentCreationTime,
                              std::nullopt, std::nullopt, open.value};
        return;
      }
      if (text_depth_ == 0) {
        throw Error(name + " " + open.id + " outside TEXT");
      }
      if (open.begin == text_.size()) {
        if (open.kind == EntityKind::kEvent) {
          throw Error(name + " " + open.id + " covers no text");
        }
        spdlog::warn("{}: non-consuming TIMEX3 {} kept with an empty span",
                     file_, open.id);
      }
      Span span{open.begin, text_.size()};
      entities_.push_back({open.id, open.kind, span,
                           text_.substr(span.begin, span.end - span.begin),
                           open.value});
    }
  }

  std::string Resolve(const std::string& ref) const {
    if (auto it = instances_.find(ref); it != instances_.end()) return it->second;
    return ref;
  }

  Document Finish(std::string_view name) {
    Document doc;
    doc.id = name.empty() ? Trim(docid_) : std::string(name);
    if (doc.id.empty()) throw ParseError(file_, 0, 0, "document has no id");
    if (!dct_) throw ParseError(file_, 0, 0, "missing document creation time");
    doc.text = std::move(text_);
    doc.entities.push_back(std::move(*dct_));
    for (TemporalEntity& e : entities_) doc.entities.push_back(std::move(e));

    std::set<std::string> known;
    for (const TemporalEntity& e : doc.entities) known.insert(e.id);

    std::set<std::pair<std::string, std::string>> pairs;
    for (const RawLink& raw : raw_links_) {
      auto label = ParseTimeMLRelation(raw.rel_type);
      if (!label) {
        throw ParseError(file_, raw.line, raw.column,
                         "unknown relType '" + raw.rel_type + "' on TLINK " +
                             raw.lid);
      }
      std::string source = Resolve(raw.source);
      std::string target = Resolve(raw.target);
      for (const std::string* id : {&source, &target}) {
        if (!known.contains(*id)) {
          throw ParseError(file_, raw.line, raw.column,
                           "TLINK " + raw.lid + " references unknown entity " +
                               *id);
        }
      }
      if (source == target) {
        spdlog::warn("{}: TLINK {} relates {} to itself; skipped", file_,
                     raw.lid, source);
        continue;
      }
      if (!pairs.emplace(source, target).second) {
        spdlog::warn("{}: TLINK {} repeats the pair ({}, {}); kept the first",
                     file_, raw.lid, source, target);
        continue;
      }
      doc.tlinks.push_back(
          {std::move(source), std::move(target), MapTimeMLToAllen(*label), *label});
    }
    return doc;
  }

  std::string file_;
  XML_Parser parser_ = nullptr;
  std::exception_ptr pending_;

  int text_depth_ = 0;
  int dct_depth_ = 0;
  bool in_docid_ = false;
  std::string text_;
  std::string docid_;
  std::vector<OpenEntity> open_;
  std::vector<TemporalEntity> entities_;
  std::optional<TemporalEntity> dct_;
  std::set<std::string> seen_ids_;
  std::map<std::string, std::string> instances_;
  std::vector<RawLink> raw_links_;
};

std::vector<std::filesystem::path> TimeMLFiles(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tml") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::filesystem::path FirstExisting(const std::filesystem::path& root,
                                    std::initializer_list<const char*> names,
                                    const char* what) {
  for (const char* name : names) {
    std::filesystem::path p = root / name;
    if (std::filesystem::is_directory(p)) return p;
  }
  std::string tried;
  for (const char* name : names) {
    if (!tried.empty()) tried += ", ";
    tried += name;
  }
  throw IoError("no " + std::string(what) + " directory under " +
                root.string() + " (looked for " + tried + ")");
}

std::vector<std::string> ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open split manifest " + path.string());
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    std::string id = Trim(line);
    if (id.empty() || id.front() == '#') continue;
    ids.push_back(std::move(id));
  }
  return ids;
}

}  // namespace

ParseError::ParseError(std::string file, std::size_t line, std::size_t column,
                       const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + message),
      file_(std::move(file)),
      line_(line),
      column_(column) {}

std::string_view ToString(TimeMLRelation r) {
  return kTimeMLNames[static_cast<std::size_t>(r)];
}

std::optional<TimeMLRelation> ParseTimeMLRelation(std::string_view s) {
  for (TimeMLRelation r : kTimeMLRelations) {
    if (ToString(r) == s) return r;
  }
  return std::nullopt;
}

AllenRelation MapTimeMLToAllen(TimeMLRelation r) {
  switch (r) {
    case TimeMLRelation::kBefore: return AllenRelation::kBefore;
    case TimeMLRelation::kAfter: return AllenRelation::kAfter;
    case TimeMLRelation::kIBefore: return AllenRelation::kMeets;
    case TimeMLRelation::kIAfter: return AllenRelation::kMetBy;
    case TimeMLRelation::kBegins: return AllenRelation::kStarts;
    case TimeMLRelation::kBegunBy: return AllenRelation::kStartedBy;
    case TimeMLRelation::kEnds: return AllenRelation::kFinishes;
    case TimeMLRelation::kEndedBy: return AllenRelation::kFinishedBy;
    case TimeMLRelation::kIncludes: return AllenRelation::kContains;
    case TimeMLRelation::kIsIncluded: return AllenRelation::kDuring;
    case TimeMLRelation::kDuring:
    case TimeMLRelation::kDuringInv:
    case TimeMLRelation::kSimultaneous:
    case TimeMLRelation::kIdentity: return AllenRelation::kEquals;
  }
  return AllenRelation::kEquals;
}

std::vector<AllenRelation> ObservedAllenRelations() {
  std::vector<AllenRelation> out;
  for (AllenRelation r : kAllenRelations) {
    if (r != AllenRelation::kOverlaps && r != AllenRelation::kOverlappedBy) {
      out.push_back(r);
    }
  }
  return out;
}

const TemporalEntity& Document::dct() const {
  for (const TemporalEntity& e : entities) {
    if (e.kind == EntityKind::kDocumentCreationTime) return e;
  }
  throw std::logic_error("document " + id + " has no creation time");
}

const TemporalEntity* Document::FindEntity(std::string_view entity_id) const {
  for (const TemporalEntity& e : entities) {
    if (e.id == entity_id) return &e;
  }
  return nullptr;
}

std::vector<IntervalLink> Document::links() const {
  std::vector<IntervalLink> out;
  out.reserve(tlinks.size());
  for (const TLink& t : tlinks) out.push_back(t.link());
  return out;
}

Document ParseTimeML(std::string_view content, std::string_view name) {
  TimeMLReader reader(name.empty() ? std::string("<input>") : std::string(name));
  return reader.Parse(content, name);
}

Document ReadTimeMLFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  TimeMLReader reader(path.string());
  return reader.Parse(content, path.stem().string());
}

std::string_view ToString(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
    case Split::kTrainFull: return "train-full";
  }
  return "?";
}

std::optional<Split> ParseSplit(std::string_view s) {
  for (Split split :
       {Split::kTrain, Split::kValidation, Split::kTest, Split::kTrainFull}) {
    if (ToString(split) == s) return split;
  }
  return std::nullopt;
}

std::filesystem::path TrainingDirectory(const std::filesystem::path& root) {
  return FirstExisting(root, {"TBAQ-cleaned", "train", "training"}, "training");
}

std::filesystem::path TestDirectory(const std::filesystem::path& root) {
  return FirstExisting(root, {"te3-platinum", "test", "platinum"}, "test");
}

std::vector<std::string> ValidationIds(std::vector<std::string> ids,
                                       std::uint64_t seed) {
  std::sort(ids.begin(), ids.end());
  // Explicit Fisher-Yates over raw engine output: std::shuffle and the
  // standard distributions are not specified bit-for-bit across libraries.
  std::mt19937_64 rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(ids[i - 1], ids[j]);
  }
  const auto n_val = static_cast<std::size_t>(
      std::llround(0.2 * static_cast<double>(ids.size())));
  ids.resize(n_val);
  std::sort(ids.begin(), ids.end());
  return ids;
}

LoadedCorpus LoadCorpus(const std::filesystem::path& root, Split split,
                        const LoadOptions& options) {
  const std::filesystem::path dir =
      split == Split::kTest ? TestDirectory(root) : TrainingDirectory(root);
  const std::vector<std::filesystem::path> files = TimeMLFiles(dir);
  if (files.empty()) throw IoError("no .tml files under " + dir.string());

  LoadedCorpus loaded;
  for (const auto& file : files) {
    try {
      loaded.documents.push_back(ReadTimeMLFile(file));
    } catch (const ParseError& e) {
      if (options.strict) throw;
      spdlog::warn("skipping {}", e.what());
      loaded.errors.emplace_back(e.what());
    }
  }
  std::sort(loaded.documents.begin(), loaded.documents.end(),
            [](const Document& a, const Document& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < loaded.documents.size(); ++i) {
    if (loaded.documents[i].id == loaded.documents[i - 1].id) {
      throw IoError("duplicate document id " + loaded.documents[i].id);
    }
  }
  if (split == Split::kTest || split == Split::kTrainFull) return loaded;

  std::vector<std::string> ids;
  for (const Document& d : loaded.documents) ids.push_back(d.id);
  std::vector<std::string> validation;
  if (options.manifest) {
    validation = ReadManifest(*options.manifest);
    std::sort(validation.begin(), validation.end());
    for (const std::string& id : validation) {
      if (!std::binary_search(ids.begin(), ids.end(), id)) {
        throw IoError("split manifest names unknown document " + id);
      }
    }
  } else {
    validation = ValidationIds(ids, options.seed);
  }
  const bool want_validation = split == Split::kValidation;
  std::erase_if(loaded.documents, [&](const Document& d) {
    bool in_validation =
        std::binary_search(validation.begin(), validation.end(), d.id);
    return in_validation != want_validation;
  });
  return loaded;
}

}  // namespace ifp
