// SPDX-License-Identifier: Apache-2.0
#include "commands.hpp"

#include <cstdio>

namespace rrg::cli {

int cmd_gen_data(const GenDataArgs&) {
  std::fprintf(stderr, "gen-data: not implemented yet\n");
  return kExitRuntime;
}

int cmd_train(const TrainArgs&) {
  std::fprintf(stderr, "train: not implemented yet\n");
  return kExitRuntime;
}

int cmd_generate(const GenerateArgs&) {
  std::fprintf(stderr, "generate: not implemented yet\n");
  return kExitRuntime;
}

int cmd_evaluate(const EvaluateArgs&) {
  std::fprintf(stderr, "evaluate: not implemented yet\n");
  return kExitRuntime;
}

int cmd_ablate(const AblateArgs&) {
  std::fprintf(stderr, "ablate: not implemented yet\n");
  return kExitRuntime;
}

int cmd_gradcheck() {
  std::fprintf(stderr, "gradcheck: not implemented yet\n");
  return kExitRuntime;
}

}  // namespace rrg::cli
