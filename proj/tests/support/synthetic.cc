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

#include "support/synthetic.h"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace ifp::testing {
namespace {

std::string TimeMLLabel(AllenRelation r, std::mt19937_64& rng) {
  switch (r) {
    case AllenRelation::kBefore: return "BEFORE";
    case AllenRelation::kAfter: return "AFTER";
    case AllenRelation::kMeets: return "IBEFORE";
    case AllenRelation::kMetBy: return "IAFTER";
    case AllenRelation::kStarts: return "BEGINS";
    case AllenRelation::kStartedBy: return "BEGUN_BY";
    case AllenRelation::kFinishes: return "ENDS";
    case AllenRelation::kFinishedBy: return "ENDED_BY";
    case AllenRelation::kContains: return "INCLUDES";
    case AllenRelation::kDuring: return "IS_INCLUDED";
    case AllenRelation::kEquals: {
      static const char* kEqualLabels[] = {"SIMULTANEOUS", "SIMULTANEOUS",
                                           "IDENTITY", "DURING"};
      return kEqualLabels[rng() % 4];
    }
    default: return "";
  }
}

const char* kWords[] = {"the",  "report", "said", "on",    "a",
                        "city", "after",  "with", "council", "and"};

}  // namespace

AllenRelation RelationOf(std::pair<int, int> x, std::pair<int, int> y) {
  const auto [xs, xe] = x;
  const auto [ys, ye] = y;
  if (xe < ys) return AllenRelation::kBefore;
  if (ye < xs) return AllenRelation::kAfter;
  if (xe == ys) return AllenRelation::kMeets;
  if (ye == xs) return AllenRelation::kMetBy;
  if (xs == ys && xe == ye) return AllenRelation::kEquals;
  if (xs == ys) return xe < ye ? AllenRelation::kStarts : AllenRelation::kStartedBy;
  if (xe == ye) return xs > ys ? AllenRelation::kFinishes : AllenRelation::kFinishedBy;
  if (xs < ys && xe > ye) return AllenRelation::kContains;
  if (xs > ys && xe < ye) return AllenRelation::kDuring;
  return xs < ys ? AllenRelation::kOverlaps : AllenRelation::kOverlappedBy;
}

std::string SyntheticTimeML(const std::string& doc_id, std::mt19937_64& rng,
                            const SyntheticOptions& options,
                            Timeline* timeline) {
  Timeline local;
  Timeline& t = timeline != nullptr ? *timeline : local;
  t.intervals.clear();
  auto draw = [&] {
    const int a = static_cast<int>(rng() % (options.horizon - 1));
    const int b = a + 1 + static_cast<int>(rng() % (options.horizon - 1 - a));
    return std::make_pair(a, b);
  };
  std::vector<std::string> ids = {"t0"};
  t.intervals["t0"] = draw();
  for (int i = 1; i <= options.events; ++i) {
    ids.push_back("e" + std::to_string(i));
    t.intervals[ids.back()] = draw();
  }
  for (int i = 1; i <= options.timexes; ++i) {
    ids.push_back("t" + std::to_string(i));
    t.intervals[ids.back()] = draw();
  }

  // Text: entities in shuffled order separated by filler words.
  std::vector<std::string> order(ids.begin() + 1, ids.end());
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng() % i]);
  }
  std::ostringstream text;
  for (const std::string& id : order) {
    for (int k = 0, n = 1 + static_cast<int>(rng() % 3); k < n; ++k) {
      text << kWords[rng() % 10] << ' ';
    }
    if (id[0] == 'e') {
      text << "<EVENT eid=\"" << id << "\" class=\"OCCURRENCE\">happened"
           << id.substr(1) << "</EVENT> ";
    } else {
      text << "<TIMEX3 tid=\"" << id << "\" type=\"DATE\" value=\"2013-0"
           << id.substr(1) << "\">day " << id.substr(1) << "</TIMEX3> ";
    }
  }
  text << "end.";

  std::ostringstream doc;
  doc << "<?xml version=\"1.0\" ?>\n<TimeML>\n<DOCID>" << doc_id
      << "</DOCID>\n<DCT><TIMEX3 tid=\"t0\" type=\"DATE\" value=\"2013-01-01\" "
         "temporalFunction=\"false\" functionInDocument=\"CREATION_TIME\">"
         "2013-01-01</TIMEX3></DCT>\n<TEXT>"
      << text.str() << "</TEXT>\n";
  for (int i = 1; i <= options.events; ++i) {
    doc << "<MAKEINSTANCE eventID=\"e" << i << "\" eiid=\"ei" << i
        << "\" tense=\"PAST\" aspect=\"NONE\" polarity=\"POS\" pos=\"VERB\"/>\n";
  }

  std::set<std::pair<std::string, std::string>> used;
  int lid = 0;
  for (int attempt = 0; attempt < options.links * 8 && lid < options.links;
       ++attempt) {
    const std::string& a = ids[rng() % ids.size()];
    const std::string& b = ids[rng() % ids.size()];
    if (a == b || used.contains({a, b}) || used.contains({b, a})) continue;
    const AllenRelation r = RelationOf(t.intervals[a], t.intervals[b]);
    const std::string label = TimeMLLabel(r, rng);
    if (label.empty()) continue;
    used.insert({a, b});
    doc << "<TLINK lid=\"l" << ++lid << "\" relType=\"" << label << "\" ";
    if (a[0] == 'e') {
      doc << "eventInstanceID=\"ei" << a.substr(1) << "\" ";
    } else {
      doc << "timeID=\"" << a << "\" ";
    }
    if (b[0] == 'e') {
      doc << "relatedToEventInstance=\"ei" << b.substr(1) << "\"/>\n";
    } else {
      doc << "relatedToTime=\"" << b << "\"/>\n";
    }
  }
  doc << "</TimeML>\n";
  return doc.str();
}

void WriteSyntheticCorpus(const std::filesystem::path& root, int train,
                          int test, std::uint64_t seed,
                          const SyntheticOptions& options) {
  std::mt19937_64 rng(seed);
  auto write = [&](const std::filesystem::path& dir, const std::string& prefix,
                   int n) {
    std::filesystem::create_directories(dir);
    for (int i = 0; i < n; ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "%s%03d", prefix.c_str(), i);
      std::ofstream(dir / (std::string(name) + ".tml"))
          << SyntheticTimeML(name, rng, options);
    }
  };
  write(root / "TBAQ-cleaned", "train", train);
  write(root / "te3-platinum", "test", test);
}

std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("ifp_test_" + name + "_" +
                    std::to_string(static_cast<unsigned long>(::getpid())));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace ifp::testing
