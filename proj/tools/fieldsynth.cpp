// fieldsynth: generate, validate, inspect and score synthetic pitch datasets.
//
// Exit codes: 0 success, 1 validation violations, 2 usage or config error,
// 3 I/O error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fieldsynth/fieldsynth.hpp"

namespace fs = fieldsynth;
namespace stdfs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct GenerateArgs {
  std::string config;
  std::optional<std::string> variant;
  std::optional<int> count;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  unsigned jobs = 0;
};

fs::DatasetConfig resolve_config(const GenerateArgs& a) {
  fs::DatasetConfig cfg = a.config.empty() ? fs::DatasetConfig{} : fs::load_config(a.config);
  if (a.variant) {
    const auto v = fs::parse_variant(*a.variant);
    if (!v) throw fs::ConfigError("unknown variant '" + *a.variant + "'");
    cfg.variant = *v;
  }
  if (a.count) cfg.sample_count = *a.count;
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.out) cfg.output_root = *a.out;
  cfg.validate();
  return cfg;
}

int run_generate(const GenerateArgs& a) {
  const auto cfg = resolve_config(a);
  const auto t0 = std::chrono::steady_clock::now();
  const auto manifest = fs::generate_dataset(cfg, a.jobs);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "wrote " << manifest.records.size() << " samples (" << fs::kVariantNames[static_cast<int>(cfg.variant)]
            << ") to " << cfg.output_root.string() << " in " << secs << " s\n";
  return kExitOk;
}

int run_validate(const std::string& root, double fraction) {
  const auto report = fs::validate_dataset(root, fraction);
  for (const auto& v : report.violations) {
    if (v.index >= 0)
      std::cout << "sample " << v.index << ": " << v.kind << ": " << v.detail << "\n";
    else
      std::cout << "dataset: " << v.kind << ": " << v.detail << "\n";
  }
  std::printf("%zu samples, reprojection %zu/%zu points (%.4f) over %zu samples, %zu violation(s)\n", report.samples,
              report.reprojection_hits, report.reprojection_points, report.reprojection_fraction(),
              report.reprojection_samples, report.violations.size());
  return report.ok() ? kExitOk : kExitViolations;
}

int run_stats(const std::string& root, bool as_json) {
  const auto st = fs::dataset_stats(root);
  if (as_json) {
    std::cout << fs::stats_to_json(st).dump(2) << "\n";
    return kExitOk;
  }
  std::printf("frames: %zu, mean classes per frame: %.2f\n\n", st.frames, st.mean_classes_per_frame);
  std::printf("%-36s %10s %12s\n", "class", "visible", "mean points");
  for (std::size_t i = 0; i < fs::kLineClassCount; ++i)
    std::printf("%-36s %9.1f%% %12.1f\n", std::string(fs::kLineClassNames[i]).c_str(), 100.0 * st.visibility[i],
                st.mean_points[i]);
  std::printf("\ngrass colours (%zu distinct):\n", st.grass_colors.size());
  for (const auto& [hex, n] : st.grass_colors) std::printf("  %s %zu\n", hex.c_str(), n);
  std::printf("\ncamera%s:\n", st.camera_fixed() ? " (fixed)" : "");
  for (const auto& [k, s] : st.camera)
    std::printf("  %-9s min %10.4f max %10.4f mean %10.4f sd %8.4f\n", k.c_str(), s.min, s.max, s.mean, s.stddev);
  std::printf("\nfake lines per frame:\n");
  for (const auto& [n, c] : st.fake_line_counts) std::printf("  %d: %zu\n", n, c);
  return kExitOk;
}

int run_preview(const GenerateArgs& a, std::size_t index, const std::string& out) {
  const auto cfg = resolve_config(a);
  const auto sample = fs::build_sample(cfg, index);
  fs::write_png(out, sample.image);
  const stdfs::path p(out);
  const auto stem = p.parent_path() / p.stem();
  fs::write_png(stem.string() + "_mask.png", sample.masks.training);
  std::FILE* f = std::fopen((stem.string() + ".json").c_str(), "wb");
  if (!f) throw fs::IoError(stem.string() + ".json", "cannot open for writing");
  const std::string doc = fs::emit_annotation(sample.annotation);
  std::fwrite(doc.data(), 1, doc.size(), f);
  std::fclose(f);
  std::cout << "sample " << index << " camera " << fs::camera_digest(sample.scene.camera) << " -> " << out << "\n";
  return kExitOk;
}

std::vector<stdfs::path> png_files(const stdfs::path& dir) {
  if (!stdfs::is_directory(dir)) throw fs::IoError(dir.string(), "not a directory");
  std::vector<stdfs::path> out;
  for (const auto& e : stdfs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".png") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

int run_score(const std::string& pred_dir, const std::string& gt_dir, const std::string& report_path) {
  fs::ConfusionTally tally;
  std::size_t frames = 0;
  for (const auto& gt_path : png_files(gt_dir)) {
    const auto pred_path = stdfs::path(pred_dir) / gt_path.filename();
    if (!stdfs::exists(pred_path)) throw fs::IoError(pred_path.string(), "no prediction for ground-truth mask");
    fs::accumulate(tally, fs::read_mask_png(pred_path.string()), fs::read_mask_png(gt_path.string()));
    ++frames;
  }
  if (frames == 0) throw fs::EmptyTally("no ground-truth masks in " + gt_dir);

  nlohmann::ordered_json metrics;
  metrics["frames"] = frames;
  metrics["pixels"] = tally.total();
  metrics["pixel_accuracy"] = fs::pixel_accuracy(tally);
  metrics["mean_iou"] = fs::mean_iou(tally, false);
  metrics["mean_iou_with_background"] = fs::mean_iou(tally, true);
  auto& per_class = metrics["class_iou"] = nlohmann::ordered_json::object();

  std::string table = "| class | IoU |\n|---|---|\n";
  for (std::size_t c = 0; c < fs::kEvalClasses; ++c) {
    const std::string name = c == 0 ? "Background" : std::string(fs::kLineClassNames[c - 1]);
    const auto iou = fs::class_iou(tally, c);
    per_class[name] = iou ? nlohmann::ordered_json(*iou) : nlohmann::ordered_json(nullptr);
    char cell[32];
    if (iou)
      std::snprintf(cell, sizeof cell, "%.4f", *iou);
    else
      std::snprintf(cell, sizeof cell, "n/a");
    table += "| " + name + " | " + cell + " |\n";
  }
  char summary[160];
  std::snprintf(summary, sizeof summary, "pixel accuracy %.4f, mIoU %.4f (with background %.4f) over %zu frames\n",
                metrics["pixel_accuracy"].get<double>(), metrics["mean_iou"].get<double>(),
                metrics["mean_iou_with_background"].get<double>(), frames);

  const std::string text = "# Segmentation score\n\n" + std::string(summary) + "\n" + table + "\n```json\n" +
                           metrics.dump(2) + "\n```\n";
  fs::write_text(report_path, text);
  std::cout << summary;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic soccer pitch dataset generator"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto add_config_opts = [&](CLI::App* sub) {
    sub->add_option("--config", gen.config, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--variant", gen.variant, "dataset variant, e.g. SOCCERSYNTH_FIELD");
    sub->add_option("--seed", gen.seed, "master seed");
  };

  auto* generate = app.add_subcommand("generate", "render a dataset");
  add_config_opts(generate);
  generate->add_option("--count", gen.count, "number of samples");
  generate->add_option("--out", gen.out, "output root");
  generate->add_option("--jobs", gen.jobs, "worker threads (0 = all cores)");

  std::string root;
  double fraction = 0.05;
  auto* validate = app.add_subcommand("validate", "check a dataset for structural and annotation defects");
  validate->add_option("--root", root, "dataset root")->required();
  validate->add_option("--fraction", fraction, "share of samples checked for reprojection")->check(CLI::Range(0.0, 1.0));

  bool stats_json = false;
  auto* stats = app.add_subcommand("stats", "summarise a dataset");
  stats->add_option("--root", root, "dataset root")->required();
  stats->add_flag("--json", stats_json, "print JSON");

  std::size_t index = 0;
  std::string out;
  auto* preview = app.add_subcommand("preview", "render one sample without writing a dataset");
  add_config_opts(preview);
  preview->add_option("--index", index, "sample index")->required();
  preview->add_option("--out", out, "output PNG")->required();

  std::string pred_dir, gt_dir, report;
  auto* score = app.add_subcommand("score", "compare predicted masks against ground truth");
  score->add_option("--pred", pred_dir, "directory of predicted masks")->required();
  score->add_option("--gt", gt_dir, "directory of ground-truth masks")->required();
  score->add_option("--report", report, "markdown report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*validate) return run_validate(root, fraction);
    if (*stats) return run_stats(root, stats_json);
    if (*preview) return run_preview(gen, index, out);
    if (*score) return run_score(pred_dir, gt_dir, report);
  } catch (const fs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::MissingManifest& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolations;
  }
  return kExitUsage;
}
