#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "fieldsynth/annotation.hpp"
#include "fieldsynth/config.hpp"
#include "fieldsynth/png_io.hpp"
#include "fieldsynth/randomization.hpp"
#include "fieldsynth/renderer.hpp"
#include "fieldsynth/rng.hpp"
#include "fieldsynth/scene_io.hpp"

namespace fieldsynth {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr std::string_view kManifestName = "manifest.jsonl";

/// Everything produced for one frame, in memory.
struct Sample {
  std::size_t index = 0;
  SceneSpec scene;
  Image image;
  RenderedMasks masks;
  AnnotationDocument annotation;
};

/// Set of class ids present in a mask, indexed by id (0..26).
inline std::array<bool, kLineClassCount + 1> classes_in_mask(const Mask& mask) {
  std::array<bool, kLineClassCount + 1> present{};
  for (std::uint8_t l : mask.labels)
    if (l >= 1 && l <= kLineClassCount) present[l] = true;
  return present;
}

inline std::array<bool, kLineClassCount + 1> classes_in_document(const AnnotationDocument& doc) {
  std::array<bool, kLineClassCount + 1> present{};
  for (const auto& [c, pts] : doc.lines) present[class_id(c)] = true;
  return present;
}

/// Document from the real-line strokes of a frame. Runs of one class stay in
/// trace order and are concatenated.
inline AnnotationDocument annotation_from_strokes(const std::vector<LineStroke>& strokes, const Resolution& res) {
  AnnotationDocument doc;
  for (const auto& s : strokes) {
    const auto c = class_from_id(s.id);
    if (!c) continue;
    auto& pts = doc.lines[*c];
    const auto run_pts = normalize_runs(std::span(&s.run, 1), res);
    pts.insert(pts.end(), run_pts.begin(), run_pts.end());
  }
  return doc;
}

/// Samples, renders and annotates frame `index`. A pure function of
/// (config, index): the scene stream is seeded with sample_seed(master, index).
inline Sample build_sample(const DatasetConfig& config, const FieldModel& field, const RandomizationConfig& rcfg,
                           std::size_t index) {
  Sample s;
  s.index = index;
  s.scene = sample_scene(Rng(sample_seed(config.master_seed, index)), rcfg, field, config.resolution);
  const auto strokes = layout_strokes(s.scene, field, s.scene.camera);
  s.masks = render_masks_from(strokes, config.resolution);
  s.image = render_image_from(s.scene, field, s.scene.camera, strokes);
  s.annotation = annotation_from_strokes(strokes, config.resolution);
  // A class counts as visible when it owns at least one ground-truth pixel.
  restrict_to_classes(s.annotation, classes_in_mask(s.masks.training));
  return s;
}

inline Sample build_sample(const DatasetConfig& config, std::size_t index) {
  return build_sample(config, build_field_model(config.field), config.randomization(), index);
}

struct SampleRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string image, mask, annotation, scene, diagnostic_mask;
  std::string camera_digest;
};

struct DatasetManifest {
  nlohmann::ordered_json header;
  std::vector<SampleRecord> records;
};

inline std::string sample_basename(std::size_t index, int sample_count) {
  int digits = 5;
  for (long long n = sample_count - 1; n >= 100000; n /= 10) ++digits;
  std::string s = std::to_string(index);
  return std::string(static_cast<std::size_t>(std::max(0, digits - static_cast<int>(s.size()))), '0') + s;
}

inline SampleRecord record_for(const DatasetConfig& config, std::size_t index, const SceneSpec& scene) {
  const std::string base = sample_basename(index, config.sample_count);
  SampleRecord r;
  r.index = index;
  r.seed = sample_seed(config.master_seed, index);
  r.image = "images/" + base + ".png";
  r.mask = "masks/" + base + ".png";
  r.annotation = "annotations/" + base + ".json";
  r.scene = "scenes/" + base + ".json";
  if (config.emit_diagnostic_mask) r.diagnostic_mask = "masks_diag/" + base + ".png";
  r.camera_digest = camera_digest(scene.camera);
  return r;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SampleRecord write_sample(const DatasetConfig& config, const Sample& s) {
  const SampleRecord r = record_for(config, s.index, s.scene);
  const auto& root = config.output_root;
  write_png((root / r.image).string(), s.image);
  write_png((root / r.mask).string(), s.masks.training);
  if (config.emit_diagnostic_mask) write_png((root / r.diagnostic_mask).string(), s.masks.diagnostic);
  write_text(root / r.annotation, emit_annotation(s.annotation));
  write_text(root / r.scene, emit_scene(s.scene));
  return r;
}

inline void prepare_output_dirs(const DatasetConfig& config) {
  std::error_code ec;
  for (const char* sub : {"images", "masks", "annotations", "scenes"}) {
    std::filesystem::create_directories(config.output_root / sub, ec);
    if (ec) throw IoError((config.output_root / sub).string(), ec.message());
  }
  if (config.emit_diagnostic_mask) {
    std::filesystem::create_directories(config.output_root / "masks_diag", ec);
    if (ec) throw IoError((config.output_root / "masks_diag").string(), ec.message());
  }
}

inline nlohmann::ordered_json record_to_json(const SampleRecord& r) {
  nlohmann::ordered_json j = {{"type", "sample"}, {"index", r.index},      {"seed", r.seed},
                              {"image", r.image}, {"mask", r.mask},        {"annotation", r.annotation},
                              {"scene", r.scene}, {"camera_digest", r.camera_digest}};
  if (!r.diagnostic_mask.empty()) j["diagnostic_mask"] = r.diagnostic_mask;
  return j;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Runs fn(i) for i in [0, n) on `jobs` threads (0 = hardware concurrency).
/// The first exception thrown by any task is rethrown after all threads stop.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

/// Writes images/, masks/, annotations/, scenes/ (and masks_diag/ when
/// enabled), then manifest.jsonl last via a temporary file and rename. A tree
/// without a manifest is an interrupted run.
inline DatasetManifest generate_dataset(const DatasetConfig& config, unsigned jobs = 0) {
  config.validate();
  prepare_output_dirs(config);
  const FieldModel field = build_field_model(config.field);
  const RandomizationConfig rcfg = config.randomization();
  DatasetManifest manifest;
  manifest.records.resize(static_cast<std::size_t>(config.sample_count));
  parallel_for(manifest.records.size(), jobs, [&](std::size_t i) {
    manifest.records[i] = write_sample(config, build_sample(config, field, rcfg, i));
  });
  manifest.header = {{"type", "header"},
                     {"tool", "fieldsynth"},
                     {"tool_version", std::string(kToolVersion)},
                     {"created", utc_timestamp()},
                     {"seed_mix", std::string(kSeedMixDescription)},
                     {"config", config_to_json(config)}};
  std::string text = manifest.header.dump() + "\n";
  for (const auto& r : manifest.records) text += record_to_json(r).dump() + "\n";
  const auto final_path = config.output_root / kManifestName;
  const auto tmp_path = config.output_root / (std::string(kManifestName) + ".tmp");
  write_text(tmp_path, text);
  std::error_code ec;
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) throw IoError(final_path.string(), ec.message());
  return manifest;
}

struct LoadedManifest {
  DatasetConfig config;
  nlohmann::json header;
  std::vector<nlohmann::json> records;
};

inline LoadedManifest load_manifest(const std::filesystem::path& root) {
  const auto path = root / kManifestName;
  if (!std::filesystem::exists(path)) throw MissingManifest(root.string());
  std::istringstream in(read_text(path));
  LoadedManifest out;
  std::string line;
  bool first = true;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = nlohmann::json::parse(line);
      if (first) {
        if (j.value("type", "") != "header") throw Error("manifest does not start with a header record");
        out.config = config_from_json(j.at("config"));
        out.config.output_root = root;
        out.header = std::move(j);
        first = false;
      } else {
        out.records.push_back(std::move(j));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("manifest " + path.string() + ": " + e.what());
  }
  if (first) throw Error("manifest " + path.string() + " is empty");
  return out;
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  long long index = -1;  // -1 for dataset-level findings
  std::string kind;
  std::string detail;
};

struct ValidationReport {
  std::size_t samples = 0;
  std::size_t reprojection_samples = 0;
  std::size_t reprojection_points = 0;
  std::size_t reprojection_hits = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  double reprojection_fraction() const {
    return reprojection_points == 0 ? 1.0 : static_cast<double>(reprojection_hits) / reprojection_points;
  }
};

/// Minimum share of annotation points that must sit on painted line pixels.
inline constexpr double kReprojectionThreshold = 0.99;

/// True when a pixel whose square lies within `radius` px of (u, v) is a
/// stroke pixel.
inline bool near_stroke_pixel(const Image& img, double u, double v, double threshold, double radius = 1.0) {
  const int i0 = std::max(0, static_cast<int>(std::floor(u - radius)));
  const int i1 = std::min(img.width - 1, static_cast<int>(std::floor(u + radius)));
  const int j0 = std::max(0, static_cast<int>(std::floor(v - radius)));
  const int j1 = std::min(img.height - 1, static_cast<int>(std::floor(v + radius)));
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      const double dx = std::max({0.0, i - u, u - (i + 1)});
      const double dy = std::max({0.0, j - v, v - (j + 1)});
      if (dx * dx + dy * dy <= radius * radius && is_stroke_pixel(img, i, j, threshold)) return true;
    }
  return false;
}

/// (points within 1 px of a stroke pixel, total points) for one frame.
inline std::pair<std::size_t, std::size_t> reprojection_hits(const Image& img, const AnnotationDocument& doc,
                                                             const SceneSpec& scene) {
  const double threshold = stroke_threshold(scene);
  std::size_t hits = 0, total = 0;
  for (const auto& [c, pts] : doc.lines)
    for (const auto& p : pts) {
      ++total;
      if (near_stroke_pixel(img, p.x * img.width, p.y * img.height, threshold)) ++hits;
    }
  return {hits, total};
}

/// Whether sample i falls in the reprojection subset for `fraction`.
/// Deterministic and evenly spread, starting at sample 0: i is chosen when
/// ceil((i+1)f) > ceil(i f).
inline bool in_check_subset(std::size_t i, double fraction) {
  if (fraction >= 1.0) return true;
  if (fraction <= 0.0) return false;
  return std::ceil((i + 1) * fraction) > std::ceil(i * fraction);
}

inline ValidationReport validate_dataset(const std::filesystem::path& root, double reprojection_fraction = 0.05) {
  const LoadedManifest m = load_manifest(root);
  ValidationReport report;
  report.samples = m.records.size();
  const auto& cfg = m.config;
  const auto add = [&](long long i, std::string kind, std::string detail) {
    report.violations.push_back({i, std::move(kind), std::move(detail)});
  };
  if (m.records.size() != static_cast<std::size_t>(cfg.sample_count))
    add(-1, "record-count",
        std::to_string(m.records.size()) + " records, header says " + std::to_string(cfg.sample_count));

  for (std::size_t k = 0; k < m.records.size(); ++k) {
    const auto& rec = m.records[k];
    long long idx = static_cast<long long>(k);
    try {
      idx = rec.at("index").get<long long>();
      if (rec.at("seed").get<std::uint64_t>() != sample_seed(cfg.master_seed, static_cast<std::uint64_t>(idx)))
        add(idx, "seed", "per-sample seed does not match the documented mix");
      bool missing = false;
      std::vector<std::string> keys = {"image", "mask", "annotation", "scene"};
      if (rec.contains("diagnostic_mask")) keys.push_back("diagnostic_mask");
      for (const auto& key : keys) {
        const auto rel = rec.at(key).get<std::string>();
        if (!std::filesystem::exists(root / rel)) {
          add(idx, "missing-file", rel);
          missing = true;
        }
      }
      if (missing) continue;

      const Image img = read_image_png((root / rec.at("image").get<std::string>()).string());
      const Mask mask = read_mask_png((root / rec.at("mask").get<std::string>()).string());
      bool dims_ok = true;
      if (img.width != cfg.resolution.width || img.height != cfg.resolution.height) {
        add(idx, "image-dimensions", std::to_string(img.width) + "x" + std::to_string(img.height));
        dims_ok = false;
      }
      if (mask.width != img.width || mask.height != img.height) {
        add(idx, "mask-dimensions", std::to_string(mask.width) + "x" + std::to_string(mask.height));
        dims_ok = false;
      }
      std::size_t bad = 0;
      std::uint8_t worst = 0;
      for (auto l : mask.labels)
        if (l > kLineClassCount) ++bad, worst = std::max(worst, l);
      if (bad) add(idx, "label-range", std::to_string(bad) + " pixel(s) above 26, max " + std::to_string(worst));
      if (rec.contains("diagnostic_mask")) {
        const Mask diag = read_mask_png((root / rec.at("diagnostic_mask").get<std::string>()).string());
        if (std::any_of(diag.labels.begin(), diag.labels.end(), [](auto l) { return l > kFakeLineId; }))
          add(idx, "label-range", "diagnostic mask label above 27");
      }

      AnnotationDocument doc;
      try {
        doc = parse_annotation(read_text(root / rec.at("annotation").get<std::string>()));
      } catch (const Error& e) {
        add(idx, "annotation", e.what());
        continue;
      }
      // a mask of the wrong size says nothing about which classes are visible
      const auto in_mask = classes_in_mask(mask);
      const auto in_doc = classes_in_document(doc);
      if (dims_ok && in_mask != in_doc) {
        std::string diff;
        for (std::size_t id = 1; id <= kLineClassCount; ++id)
          if (in_mask[id] != in_doc[id])
            diff += std::string(diff.empty() ? "" : ", ") + std::string(kLineClassNames[id - 1]) +
                    (in_mask[id] ? " (mask only)" : " (annotation only)");
        add(idx, "class-set", diff);
      }
      if (dims_ok && in_check_subset(k, reprojection_fraction)) {
        const SceneSpec scene = parse_scene(read_text(root / rec.at("scene").get<std::string>()));
        const auto [hits, total] = reprojection_hits(img, doc, scene);
        report.reprojection_hits += hits;
        report.reprojection_points += total;
        ++report.reprojection_samples;
      }
    } catch (const nlohmann::json::exception& e) {
      add(idx, "manifest-record", e.what());
    } catch (const Error& e) {
      add(idx, "unreadable", e.what());
    }
  }
  if (report.reprojection_fraction() < kReprojectionThreshold)
    add(-1, "reprojection",
        std::to_string(report.reprojection_hits) + "/" + std::to_string(report.reprojection_points) +
            " annotation points near a painted line pixel");
  return report;
}

// ---------------------------------------------------------------------------
// Statistics

struct RangeStat {
  double min = 0, max = 0, mean = 0, stddev = 0;
  double spread() const { return max - min; }
};

inline RangeStat range_stat(const std::vector<double>& v) {
  RangeStat s;
  if (v.empty()) return s;
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double sum = 0;
  for (double x : v) sum += x;
  s.mean = sum / v.size();
  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / v.size());
  return s;
}

struct StatsReport {
  std::size_t frames = 0;
  std::array<double, kLineClassCount> visibility{};   // fraction of frames showing each class
  std::array<double, kLineClassCount> mean_points{};  // over frames where visible
  double mean_classes_per_frame = 0;
  std::map<std::string, std::size_t> grass_colors;  // display hex -> frames
  std::map<std::string, RangeStat> camera;          // x, y, z, pan, tilt, roll, focal_px
  std::map<int, std::size_t> fake_line_counts;

  bool camera_fixed() const {
    for (const auto& [k, s] : camera)
      if (s.spread() != 0.0) return false;
    return true;
  }
};

inline std::string display_hex(const Rgb& c) {
  const auto& enc = GammaEncoder::instance();
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", enc(c.r), enc(c.g), enc(c.b));
  return buf;
}

inline StatsReport dataset_stats(const std::filesystem::path& root) {
  const LoadedManifest m = load_manifest(root);
  StatsReport st;
  std::array<std::size_t, kLineClassCount> seen{}, points{};
  std::size_t class_total = 0;
  std::map<std::string, std::vector<double>> cam;
  for (const auto& rec : m.records) {
    const auto doc = parse_annotation(read_text(root / rec.at("annotation").get<std::string>()));
    const auto scene = parse_scene(read_text(root / rec.at("scene").get<std::string>()));
    ++st.frames;
    for (const auto& [c, pts] : doc.lines) {
      ++seen[index_of(c)];
      points[index_of(c)] += pts.size();
      ++class_total;
    }
    ++st.grass_colors[display_hex(scene.base_grass_color)];
    ++st.fake_line_counts[static_cast<int>(scene.fake_lines.size())];
    const auto& c = scene.camera;
    cam["x"].push_back(c.position.x());
    cam["y"].push_back(c.position.y());
    cam["z"].push_back(c.position.z());
    cam["pan"].push_back(c.pan);
    cam["tilt"].push_back(c.tilt);
    cam["roll"].push_back(c.roll);
    cam["focal_px"].push_back(c.focal_px);
  }
  for (std::size_t i = 0; i < kLineClassCount; ++i) {
    st.visibility[i] = st.frames ? static_cast<double>(seen[i]) / st.frames : 0.0;
    st.mean_points[i] = seen[i] ? static_cast<double>(points[i]) / seen[i] : 0.0;
  }
  st.mean_classes_per_frame = st.frames ? static_cast<double>(class_total) / st.frames : 0.0;
  for (const auto& [k, v] : cam) st.camera[k] = range_stat(v);
  return st;
}

inline nlohmann::ordered_json stats_to_json(const StatsReport& st) {
  nlohmann::ordered_json j;
  j["frames"] = st.frames;
  j["mean_classes_per_frame"] = st.mean_classes_per_frame;
  auto& classes = j["classes"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < kLineClassCount; ++i)
    classes[std::string(kLineClassNames[i])] = {{"visibility", st.visibility[i]}, {"mean_points", st.mean_points[i]}};
  j["grass_colors"] = st.grass_colors;
  auto& camera = j["camera"] = nlohmann::ordered_json::object();
  for (const auto& [k, s] : st.camera)
    camera[k] = {{"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"stddev", s.stddev}};
  j["camera_fixed"] = st.camera_fixed();
  auto& fake = j["fake_line_counts"] = nlohmann::ordered_json::object();
  for (const auto& [n, count] : st.fake_line_counts) fake[std::to_string(n)] = count;
  return j;
}

}  // namespace fieldsynth
