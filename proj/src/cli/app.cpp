/* Copyright 2026 The SCS Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "scs/cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "scs/cli/commands.hpp"
#include "scs/cli/gradcheck_suite.hpp"
#include "scs/errors.hpp"
#include "scs/numerics/kernels.hpp"

namespace scs::cli {
namespace {

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--dim", f.dim, "Model width D")->capture_default_str();
  cmd->add_option("--heads", f.heads, "Attention heads H")->capture_default_str();
  cmd->add_option("--dilations", f.dilations, "MoG dilation rates, one per granularity")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--sce-blocks", f.sce_blocks, "Scale-comprehensive encoder blocks")->capture_default_str();
  cmd->add_option("--scd-blocks", f.scd_blocks, "Scale-comprehensive decoder blocks")->capture_default_str();
  cmd->add_option("--ssd-blocks", f.ssd_blocks, "Scale-sensitive decoder blocks")->capture_default_str();
  cmd->add_option("--queries", f.queries, "Object queries Q")->capture_default_str();
  cmd->add_option("--image-size", f.image_size, "Square raster side in pixels")->capture_default_str();
  cmd->add_option("--patch", f.patch_size, "Patch side in pixels")->capture_default_str();
  cmd->add_option("--ffn-mult", f.ffn_mult, "FFN hidden width as a multiple of D")->capture_default_str();
}

bool any_model_flag_set(const CLI::App* cmd) {
  for (const char* name : {"--dim", "--heads", "--dilations", "--sce-blocks", "--scd-blocks", "--ssd-blocks",
                           "--queries", "--image-size", "--patch", "--ffn-mult"}) {
    if (cmd->count(name) > 0) return true;
  }
  return false;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scale-comprehensive and sensitive referring detection toolkit"};
  app.require_subcommand(1);
  std::string kernels;
  app.add_option("--kernels", kernels, "Force a kernel variant (scalar, avx2, neon)");

  GradcheckOptions gc;
  std::filesystem::path gc_out;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of every differentiable op");
  gradcheck->add_option("--seed", gc.seed)->capture_default_str();
  gradcheck->add_option("--step", gc.step, "Central-difference step h")->capture_default_str();
  gradcheck->add_option("--tolerance", gc.tolerance, "Maximum relative error")->capture_default_str();
  gradcheck->add_option("--inject-fault", gc.inject_fault, "Flip the sign of this op's backward pass");
  gradcheck->add_option("--only", gc.only, "Check only these ops")->delimiter(',');
  gradcheck->add_option("--output-dir", gc_out);

  TrainToyOptions tr;
  bool full_schedule = false;
  auto* train = app.add_subcommand("train-toy", "Train on synthetic scenes (or an annotation file)");
  train->add_option("--seed", tr.seed)->capture_default_str();
  train->add_option("--scenes", tr.scenes, "Synthetic training scenes")->capture_default_str();
  train->add_option("--annotations", tr.annotations, "Train on this annotation file instead");
  add_model_flags(train, tr.model);
  train->add_option("--steps", tr.steps)->capture_default_str();
  train->add_option("--epochs", tr.epochs, "Overrides --steps when > 0")->capture_default_str();
  train->add_option("--batch-size", tr.batch_size)->capture_default_str();
  train->add_option("--lr", tr.lr)->capture_default_str();
  train->add_option("--projector-lr", tr.projector_lr, "Projector learning rate (0: same as --lr)")->capture_default_str();
  train->add_option("--freeze-projector-epochs", tr.freeze_projector_epochs)->capture_default_str();
  train->add_option("--clip-norm", tr.clip_norm, "Global gradient-norm clip (0: off)")->capture_default_str();
  train->add_option("--eval-every", tr.eval_every, "Steps between training-set P@0.5 checks")->capture_default_str();
  train->add_flag("!--no-early-stop", tr.stop_when_perfect, "Keep training after P@0.5 reaches 1.0");
  train->add_flag("--full-schedule", full_schedule,
                  "lr 1e-4, projector lr 1e-5, projector frozen 10 epochs, 90 epochs");
  train->add_option("--tag", tr.tag, "Output file prefix")->capture_default_str();
  train->add_option("--output-dir", tr.output_dir);

  EvalOptions ev;
  ModelFlags ev_model;
  auto* eval = app.add_subcommand("eval", "Precision at IoU thresholds and mP over an annotation file");
  eval->add_option("--checkpoint", ev.checkpoint);
  eval->add_option("--annotations", ev.annotations)->required();
  eval->add_option("--predictor", ev.predictor, "model, oracle or center")->capture_default_str();
  eval->add_option("--thresholds", ev.thresholds)->delimiter(',')->capture_default_str();
  add_model_flags(eval, ev_model);
  eval->add_option("--tag", ev.tag)->capture_default_str();
  eval->add_option("--output-dir", ev.output_dir);

  SweepOptions sw;
  auto* sweep = app.add_subcommand("sweep-granularity", "Train and evaluate G = 1..G_max granularities");
  sweep->add_option("--g-max", sw.g_max)->capture_default_str();
  sweep->add_option("--seed", sw.seed)->capture_default_str();
  sweep->add_option("--train-scenes", sw.train_scenes)->capture_default_str();
  sweep->add_option("--eval-scenes", sw.eval_scenes)->capture_default_str();
  sweep->add_option("--steps", sw.steps)->capture_default_str();
  sweep->add_option("--batch-size", sw.batch_size)->capture_default_str();
  sweep->add_option("--lr", sw.lr)->capture_default_str();
  sweep->add_option("--jobs", sw.jobs, "Worker threads")->capture_default_str();
  sweep->add_option("--thresholds", sw.thresholds)->delimiter(',')->capture_default_str();
  add_model_flags(sweep, sw.model);
  sweep->add_option("--output-dir", sw.output_dir);

  StatsOptions st;
  std::string st_category;
  auto* stats = app.add_subcommand("stats", "Dataset statistics of an annotation file");
  stats->add_option("--annotations", st.annotations)->required();
  stats->add_option("--category", st_category, "Keep only records of this category");
  stats->add_option("--tag", st.tag)->capture_default_str();
  stats->add_option("--output-dir", st.output_dir);

  GenerateOptions gen;
  bool no_images = false;
  auto* generate = app.add_subcommand("generate", "Write synthetic scenes as annotations plus PPM rasters");
  generate->add_option("--count", gen.count)->capture_default_str();
  generate->add_option("--seed", gen.seed)->capture_default_str();
  generate->add_option("--grid", gen.grid_size)->capture_default_str();
  generate->add_option("--distractors", gen.distractors)->capture_default_str();
  generate->add_option("--prefix", gen.prefix)->capture_default_str();
  generate->add_flag("--no-images", no_images, "Skip the PPM dumps");
  generate->add_option("--output-dir", gen.output_dir);

  app.footer("Outputs go to --output-dir, else $" + std::string(kOutputDirEnv) +
             ", else the working directory.\nExit codes: 0 ok, 2 usage, 3 validation, 4 numerical, 5 I/O.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    for (auto* sub : app.get_subcommands()) err << sub->help();
    return kExitUsage;
  }

  try {
    if (!kernels.empty() && !kernels::select(kernels)) {
      err << "error: kernel variant '" << kernels << "' is not available on this machine\n";
      return kExitUsage;
    }
    if (*gradcheck) {
      gc.only.erase(std::remove(gc.only.begin(), gc.only.end(), std::string()), gc.only.end());
      const GradcheckReport report = run_gradcheck(gc);
      const auto path = resolve_output_dir(gc_out) / "gradcheck.json";
      write_json_artifact(path, "gradcheck", {{"seed", gc.seed}, {"step", gc.step}, {"tolerance", gc.tolerance},
                                              {"inject_fault", gc.inject_fault}, {"only", gc.only}},
                          {{"report", to_json(report)}});
      for (const auto& e : report.entries) {
        out << (e.passed ? "PASS " : "FAIL ") << e.op << " worst_rel_err=" << e.worst_relative_error << "\n";
      }
      out << "report: " << path.string() << "\n";
      if (!report.passed) {
        err << "gradcheck failed for:";
        for (const auto& op : report.failed_ops()) err << " " << op;
        err << "\n";
        return kExitNumerical;
      }
    } else if (*train) {
      if (full_schedule) tr.apply_full_schedule();
      const auto t0 = std::chrono::steady_clock::now();
      const TrainToyOutcome o = cmd_train_toy(tr, [&](const model::StepRecord& r) {
        if (r.step % 100 == 0) out << "step " << r.step << " loss " << r.loss << "\n";
      });
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out << "steps_run " << o.result.steps_run << " train_P@0.5 " << o.result.train_p50 << " seconds " << secs
          << "\nloss log: " << o.loss_csv.string() << "\ncheckpoint: " << o.checkpoint.string() << "\n";
    } else if (*eval) {
      if (any_model_flag_set(eval)) ev.model = ev_model;
      const EvalOutcome o = cmd_eval(ev);
      out << metrics::csv_header(ev.thresholds) << "\n" << metrics::csv_row(o.result) << "\n"
          << "results: " << o.json.string() << "\n";
    } else if (*sweep) {
      const SweepOutcome o = cmd_sweep_granularity(sw);
      std::ifstream in(o.csv);
      out << in.rdbuf();
    } else if (*stats) {
      if (!st_category.empty()) st.category = st_category;
      const StatsOutcome o = cmd_stats(st);
      out << metrics::stats_csv(o.stats) << "results: " << o.json.string() << "\n";
    } else if (*generate) {
      gen.dump_images = !no_images;
      const GenerateOutcome o = cmd_generate(gen);
      out << "annotations: " << o.annotations.string() << " (" << gen.count << " scenes)\n";
    }
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DegenerateRowError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DimensionError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

}  // namespace scs::cli
