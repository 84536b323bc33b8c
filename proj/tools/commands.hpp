// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace rrg::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

struct GenDataArgs {
  std::size_t count = 64;
  std::uint64_t seed = 1;
  std::string out_path;
  double high_risk_fraction = 0.5;
};

struct TrainArgs {
  std::string config_path;
};

struct GenerateArgs {
  std::string checkpoint_path;
  std::string input_path;  // one JSON sample or a JSONL batch
  std::size_t beam_width = 5;
  std::size_t max_len = 0;  // 0: use checkpoint default
};

struct EvaluateArgs {
  std::string candidates_path;
  std::string references_path;
  std::size_t jobs = 1;
};

struct AblateArgs {
  std::string config_path;
  std::string sweep;  // alpha | modality | weight-mode
};

int cmd_gen_data(const GenDataArgs& args);
int cmd_train(const TrainArgs& args);
int cmd_generate(const GenerateArgs& args);
int cmd_evaluate(const EvaluateArgs& args);
int cmd_ablate(const AblateArgs& args);
int cmd_gradcheck();

}  // namespace rrg::cli
