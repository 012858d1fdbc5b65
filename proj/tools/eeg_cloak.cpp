// eeg-cloak: pipeline orchestrator for the EEG identity-disguising toolkit.
//
// Subcommands: fixtures, ingest, split, preprocess, dummies, train-cls,
// train-gan, disguise, eval, ablate, export-png. Exit codes: 0 success,
// 2 unknown command / bad usage, 3 invalid config, 4 stage failure.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "eegcloak/config.hpp"
#include "eegcloak/fixtures.hpp"
#include "eegcloak/pipeline.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitStage = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eeg-cloak: EEG band-power imaging, dummy identities, and "
               "identity-disguising translation"};
  app.require_subcommand(0, 1);

  std::string config_path;
  int threads = 1;
  app.add_option("--config", config_path, "JSON run configuration (strict schema)");
  app.add_option("--threads", threads, "worker threads; 1 = deterministic mode")
      ->check(CLI::PositiveNumber);

  // fixtures
  auto* c_fix = app.add_subcommand("fixtures", "generate a synthetic corpus");
  std::string fix_out = "fixtures";
  int fix_subjects = 5, fix_trials = 6;
  std::uint64_t fix_seed = 7;
  c_fix->add_option("--out", fix_out, "output corpus root");
  c_fix->add_option("--subjects-per-class", fix_subjects, "subjects per class");
  c_fix->add_option("--trials-per-condition", fix_trials, "trials per condition");
  c_fix->add_option("--seed", fix_seed, "generator seed");

  auto* c_ingest = app.add_subcommand("ingest", "scan the corpus into a manifest");
  auto* c_split = app.add_subcommand("split", "70/20/10 within-subject split");
  auto* c_pre = app.add_subcommand("preprocess", "band features, normalizer, images");
  auto* c_dum = app.add_subcommand("dummies", "grand-average dummy identities");

  auto* c_cls = app.add_subcommand("train-cls", "train a classifier");
  std::string cls_task, cls_joint;
  c_cls->add_option("--task", cls_task, "identity|alcoholism|stimulus (overrides config)");
  c_cls->add_option("--joint", cls_joint, "true|false joint dummy training (overrides config)");

  auto* c_gan = app.add_subcommand("train-gan", "train a disguising translator");
  std::string gan_constraints;
  c_gan->add_option("--constraints", gan_constraints,
                    "none|alc|sti|both (overrides config)");

  auto* c_dis = app.add_subcommand("disguise", "translate real images through a model");
  std::string dis_model, dis_in, dis_out;
  c_dis->add_option("--model", dis_model, "disguiser checkpoint")->required();
  c_dis->add_option("--in", dis_in, "input .eimg directory")->required();
  c_dis->add_option("--out", dis_out, "output directory")->required();

  auto* c_eval = app.add_subcommand("eval", "evaluate a classifier on an image set");
  std::string ev_model, ev_images, ev_name = "images", ev_out;
  c_eval->add_option("--model", ev_model, "classifier checkpoint")->required();
  c_eval->add_option("--images", ev_images, ".eimg directory")->required();
  c_eval->add_option("--name", ev_name, "dataset label in the report");
  c_eval->add_option("--out", ev_out, "report JSON output path");

  auto* c_abl = app.add_subcommand("ablate", "four-regime ablation grid");
  std::string abl_split = "validation";
  c_abl->add_option("--split", abl_split, "evaluation split (train|validation|test)");

  auto* c_png = app.add_subcommand("export-png", "render .eimg files to PNG");
  std::string png_in, png_out;
  c_png->add_option("--in", png_in, "input .eimg directory")->required();
  c_png->add_option("--out", png_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (app.get_subcommands().empty()) {
    std::fprintf(stderr, "%s\n", app.help().c_str());
    std::fprintf(stderr, "error: a subcommand is required\n");
    return kExitUsage;
  }

  using namespace eegcloak;
  try {
    RunConfig cfg;
    try {
      cfg = config_path.empty() ? config_from_json(nlohmann::json::object())
                                : load_config(config_path);
    } catch (const ConfigInvalid&) {
      throw;
    } catch (const Error& e) {
      throw ConfigInvalid(std::string("cannot load config: ") + e.what());
    }

    if (c_fix->parsed()) {
      FixtureOptions opt;
      opt.subjects_per_class = fix_subjects;
      opt.trials_per_condition = fix_trials;
      opt.seed = fix_seed;
      generate_fixture_corpus(fix_out, opt);
      std::printf("fixtures: wrote synthetic corpus to %s\n", fix_out.c_str());
    } else if (c_ingest->parsed()) {
      const auto m = pipeline::run_ingest(cfg);
      std::printf("ingest: %zu trials, %zu subjects -> %s\n", m.trials.size(),
                  m.subjects.size(), pipeline::manifest_path(cfg).string().c_str());
    } else if (c_split->parsed()) {
      const auto s = pipeline::run_split(cfg);
      std::printf("split: %zu trials assigned -> %s\n", s.by_trial.size(),
                  pipeline::split_path(cfg).string().c_str());
    } else if (c_pre->parsed()) {
      pipeline::run_preprocess(cfg);
      std::printf("preprocess: images and normalizer under %s\n",
                  cfg.workdir().string().c_str());
    } else if (c_dum->parsed()) {
      const auto set = pipeline::run_dummies(cfg);
      std::printf("dummies: %zu exemplars (k=%d, m=%d) -> %s\n", set.images.size(), set.k,
                  set.m, pipeline::dummies_dir(cfg).string().c_str());
    } else if (c_cls->parsed()) {
      if (!cls_task.empty()) {
        task_from_name(cls_task);  // validate before mutating config
        cfg.cls_task = cls_task;
      }
      if (!cls_joint.empty()) {
        if (cls_joint != "true" && cls_joint != "false")
          throw ConfigInvalid("--joint must be true or false");
        cfg.cls_joint = cls_joint == "true";
      }
      cfg.echo["classifier"]["task"] = cfg.cls_task;
      cfg.echo["classifier"]["joint"] = cfg.cls_joint;
      const auto path = pipeline::run_train_cls(cfg);
      std::printf("train-cls: %s\n", path.string().c_str());
    } else if (c_gan->parsed()) {
      if (!gan_constraints.empty()) {
        ConstraintSet::from_name(gan_constraints);
        cfg.constraints = gan_constraints;
      }
      cfg.echo["gan"]["constraints"] = cfg.constraints;
      const auto path = pipeline::run_train_gan(cfg);
      std::printf("train-gan: %s\n", path.string().c_str());
    } else if (c_dis->parsed()) {
      pipeline::run_disguise(cfg, dis_model, dis_in, dis_out);
      std::printf("disguise: %s -> %s\n", dis_in.c_str(), dis_out.c_str());
    } else if (c_eval->parsed()) {
      const auto report = pipeline::run_eval(cfg, ev_model, ev_images, ev_name,
                                             ev_out.empty() ? std::filesystem::path{}
                                                            : std::filesystem::path(ev_out));
      std::printf("%s\n", report.dump(2).c_str());
    } else if (c_abl->parsed()) {
      const auto report = pipeline::run_ablate(cfg, abl_split);
      std::printf("%s\n", ablation_text(report).c_str());
    } else if (c_png->parsed()) {
      const int n = pipeline::run_export_png(png_in, png_out);
      std::printf("export-png: wrote %d files to %s\n", n, png_out.c_str());
    }
    return 0;
  } catch (const ConfigInvalid& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitStage;
  }
}
