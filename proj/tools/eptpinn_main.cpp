/* Copyright (c) 2026 The eptpinn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "eptpinn/pipeline.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int axis_of(const std::string& name) {
  if (name == "x") return 0;
  if (name == "y") return 1;
  if (name == "z") return 2;
  throw std::invalid_argument("--axis must be x, y or z");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics-informed reconstruction of electrical properties "
               "from noisy B1+ field maps"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate",
                                 "Synthesize a phantom dataset (forward "
                                 "solve + noise + mask)");
  std::string gen_config, gen_out;
  std::uint64_t gen_seed = 0;
  bool gen_seed_set = false;
  gen->add_option("--config", gen_config, "generation config JSON")->required();
  gen->add_option("--out", gen_out, "output dataset path")->required();
  gen->add_option("--seed", gen_seed, "override the noise seed")
      ->each([&](const std::string&) { gen_seed_set = true; });

  auto* tr = app.add_subcommand("train", "Train the field and permittivity "
                                         "networks on a dataset");
  std::string tr_data, tr_config, tr_out, tr_log, tr_ckpt;
  tr->add_option("--data", tr_data, "input dataset")->required();
  tr->add_option("--config", tr_config, "training config JSON")->required();
  tr->add_option("--out", tr_out, "output model path")->required();
  tr->add_option("--log", tr_log, "loss log CSV path");
  tr->add_option("--checkpoint-prefix", tr_ckpt,
                 "write intermediate checkpoints with this path prefix");

  auto* ev = app.add_subcommand("evaluate",
                                "PNAE metrics of a trained model against a "
                                "dataset");
  std::string ev_data, ev_model, ev_report;
  std::vector<int> ev_grid;
  bool ev_timestamp = false;
  ev->add_option("--data", ev_data, "input dataset")->required();
  ev->add_option("--model", ev_model, "trained model")->required();
  ev->add_option("--grid", ev_grid, "evaluation grid NX,NY,NZ")
      ->delimiter(',')
      ->expected(3);
  ev->add_option("--report", ev_report, "output report JSON")->required();
  ev->add_flag("--timestamp", ev_timestamp, "include a timestamp in the report");

  auto* ex = app.add_subcommand("export", "Export a map slice as CSV");
  std::string ex_model, ex_map, ex_component = "mag", ex_axis, ex_out;
  int ex_index = 0;
  ex->add_option("--model", ex_model, "trained model")->required();
  ex->add_option("--map", ex_map, "b1, eps or sigma")->required();
  ex->add_option("--component", ex_component,
                 "complex component for b1: mag, re, im or phase");
  ex->add_option("--axis", ex_axis, "slice axis: x, y or z")->required();
  ex->add_option("--index", ex_index, "slice index")->required();
  ex->add_option("--out", ex_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
    if (gen->parsed()) {
      eptpinn::pipeline::generate_to_file(slurp(gen_config), gen_out,
                                 gen_seed_set
                                     ? std::optional<std::uint64_t>(gen_seed)
                                     : std::nullopt);
      std::cout << "wrote dataset " << gen_out << "\n";
    } else if (tr->parsed()) {
      const auto summary = eptpinn::pipeline::train_to_file(tr_data, slurp(tr_config),
                                                   tr_out, tr_log, tr_ckpt);
      std::cout << "trained " << summary.iterations << " iterations; final "
                << "loss " << summary.final_total << " (data "
                << summary.final_data << ", residual "
                << summary.final_residual << ")\n"
                << "wrote model " << tr_out << "\n";
    } else if (ev->parsed()) {
      std::optional<Eigen::Vector3i> dims;
      if (!ev_grid.empty()) {
        dims = Eigen::Vector3i(ev_grid[0], ev_grid[1], ev_grid[2]);
      }
      const auto report =
          eptpinn::pipeline::evaluate_report(ev_data, ev_model, dims, ev_timestamp);
      std::ofstream out(ev_report, std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open report " + ev_report);
      out << report.dump(2) << "\n";
      std::cout << report.dump(2) << "\n";
    } else if (ex->parsed()) {
      eptpinn::pipeline::export_slice_file(ex_model, ex_map, ex_component,
                                  axis_of(ex_axis), ex_index, ex_out);
      std::cout << "wrote slice " << ex_out << "\n";
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
