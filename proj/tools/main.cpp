// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "commands.hpp"
#include "rrg/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Glaucoma report generation: dataset synthesis, training, "
               "decoding, and evaluation"};
  app.require_subcommand(1);

  rrg::cli::GenDataArgs gen_args;
  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset");
  gen->add_option("-n,--count", gen_args.count, "Number of samples");
  gen->add_option("--seed", gen_args.seed, "Generator seed");
  gen->add_option("-o,--out", gen_args.out_path, "Output JSONL path")->required();
  gen->add_option("--high-risk-fraction", gen_args.high_risk_fraction,
                  "Fraction of high-risk samples");

  rrg::cli::TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train a model from a config file");
  train->add_option("-c,--config", train_args.config_path, "Config path")
      ->required();

  rrg::cli::GenerateArgs generate_args;
  auto* generate = app.add_subcommand("generate", "Generate reports");
  generate->add_option("--checkpoint", generate_args.checkpoint_path,
                       "Checkpoint path")->required();
  generate->add_option("-i,--input", generate_args.input_path,
                       "Sample or JSONL batch")->required();
  generate->add_option("--beam-width", generate_args.beam_width, "Beam width");
  generate->add_option("--max-len", generate_args.max_len,
                       "Max report length (0: checkpoint default)");

  rrg::cli::EvaluateArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "Score candidates vs references");
  evaluate->add_option("--candidates", eval_args.candidates_path,
                       "Candidate file, one report per line")->required();
  evaluate->add_option("--references", eval_args.references_path,
                       "Reference file, one report per line")->required();
  evaluate->add_option("-j,--jobs", eval_args.jobs, "Parallel scoring workers");

  rrg::cli::AblateArgs ablate_args;
  auto* ablate = app.add_subcommand("ablate", "Run an ablation sweep");
  ablate->add_option("-c,--config", ablate_args.config_path, "Config path")
      ->required();
  ablate->add_option("--sweep", ablate_args.sweep,
                     "alpha | modality | weight-mode")->required();

  auto* gradcheck = app.add_subcommand(
      "gradcheck", "Finite-difference check of every model block");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return rrg::cli::cmd_gen_data(gen_args);
    if (train->parsed()) return rrg::cli::cmd_train(train_args);
    if (generate->parsed()) return rrg::cli::cmd_generate(generate_args);
    if (evaluate->parsed()) return rrg::cli::cmd_evaluate(eval_args);
    if (ablate->parsed()) return rrg::cli::cmd_ablate(ablate_args);
    if (gradcheck->parsed()) return rrg::cli::cmd_gradcheck();
  } catch (const rrg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return rrg::cli::kExitValidation;
  } catch (const rrg::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rrg::cli::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rrg::cli::kExitRuntime;
  }
  return rrg::cli::kExitValidation;
}
