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

// Batch front end. Each verb reads a corpus or dataset, writes its outputs
// under the output directory together with `<verb>.config.json`, and
// returns a process exit code.

#ifndef IFP_CLI_H_
#define IFP_CLI_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ifp/corpus.h"
#include "ifp/decoder.h"

namespace ifp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInconsistent = 3;

enum class Level : std::uint8_t { kPoint, kInterval };

struct RunConfig {
  std::filesystem::path root;
  Split split = Split::kTest;
  // Split whose documents train the majority and prior predictors.
  Split train_split = Split::kTrainFull;
  std::uint64_t split_seed = kDefaultSplitSeed;
  std::uint64_t rebalance_seed = 0;
  std::uint64_t predictor_seed = 0;
  std::uint64_t bootstrap_seed = 0;
  std::size_t resamples = 1000;
  std::size_t bins = 20;
  RelationSetMode relations = RelationSetMode::kFull;
  // Point predictors decoded through the endpoint pairs: random, majority,
  // prior, oracle:noise=F, file:PATH. Interval baselines that label pairs
  // directly: interval-random, interval-majority.
  std::string predictor = "oracle:noise=0";
  Level level = Level::kInterval;
  std::filesystem::path out = ".";
  unsigned workers = 1;
  bool strict_intervals = true;
  // Continue past unparsable corpus files instead of failing.
  bool skip_bad = false;
  std::optional<std::filesystem::path> manifest;

  // augment
  std::filesystem::path input;
  std::string strategy = "both";  // inverse | closure | both
  // encode
  std::size_t max_chars = 0;  // 0 keeps whole documents
  // evaluate / calibrate
  std::filesystem::path predictions;
  std::filesystem::path queries;
  std::filesystem::path probabilities;

  // Every field as text, for embedding in outputs.
  std::map<std::string, std::string> Resolved() const;
};

// Builds the point predictor named by `config.predictor`. Majority and prior
// predictors are estimated from the documents of `config.train_split`.
std::unique_ptr<Predictor> MakePredictor(const RunConfig& config);

int Convert(const RunConfig& config, std::ostream& log);
int Augment(const RunConfig& config, std::ostream& log);
int Stats(const RunConfig& config, std::ostream& log);
int Encode(const RunConfig& config, std::ostream& log);
int DecodeCmd(const RunConfig& config, std::ostream& log);
int Evaluate(const RunConfig& config, std::ostream& log);
int Calibrate(const RunConfig& config, std::ostream& log);

// Parses argv and dispatches; never throws.
int Main(int argc, char** argv);

}  // namespace ifp::cli

#endif  // IFP_CLI_H_
