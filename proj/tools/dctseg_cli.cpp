// Copyright 2026 The dctseg Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end. Exit codes: 0 on success, 1 when any input file
// failed (others still processed), 2 on configuration errors.

#include <glob.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dctseg/codec.hpp"
#include "dctseg/corpus.hpp"
#include "dctseg/eval.hpp"
#include "dctseg/pgm.hpp"
#include "dctseg/profile.hpp"
#include "dctseg/segmenter.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFileFailures = 1;
constexpr int kExitConfig = 2;

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

// Expands shell-style patterns that reached us quoted. Plain paths pass
// through untouched; a pattern with no matches is reported by the caller.
std::vector<std::string> expand_inputs(const std::vector<std::string>& args,
                                       std::vector<std::string>& missing) {
  std::vector<std::string> files;
  for (const std::string& arg : args) {
    if (arg.find_first_of("*?[") == std::string::npos) {
      files.push_back(arg);
      continue;
    }
    glob_t results{};
    const int rc = ::glob(arg.c_str(), 0, nullptr, &results);
    if (rc == 0) {
      for (std::size_t i = 0; i < results.gl_pathc; ++i) {
        files.emplace_back(results.gl_pathv[i]);
      }
    } else {
      missing.push_back(arg);
    }
    ::globfree(&results);
  }
  return files;
}

dctseg::Strategy strategy_from_name(const std::string& name) {
  if (name == "partial") return dctseg::Strategy::PartialDecompression;
  if (name == "ac") return dctseg::Strategy::AcCoefficients;
  if (name == "pixel") return dctseg::Strategy::PixelBaseline;
  throw CLI::ValidationError("--strategy", "unknown strategy " + name);
}

json lines_to_json(const dctseg::SegmentationResult& result) {
  json lines = json::array();
  for (const dctseg::TextLine& line : result.lines) {
    lines.push_back({{"top_px", line.top_px},
                     {"bottom_px", line.bottom_px},
                     {"precision", dctseg::to_string(line.precision)}});
  }
  return lines;
}

void write_overlay(const std::string& out_dir, const std::string& input,
                   const dctseg::CoefficientImage& image,
                   const dctseg::SegmentationResult& result) {
  dctseg::PixelImage pixels = dctseg::decode_pixels(image);
  for (const dctseg::TextLine& line : result.lines) {
    for (int y : {line.top_px, line.bottom_px}) {
      if (y < 0 || y >= pixels.height_px) continue;
      for (int x = 0; x < pixels.width_px; ++x) pixels.at(x, y) = 0;
    }
  }
  fs::create_directories(out_dir);
  const fs::path out = fs::path(out_dir) /
                       (fs::path(input).stem().string() + ".pgm");
  dctseg::write_pgm(out.string(), pixels);
}

// ---- segment --------------------------------------------------------------

struct SegmentArgs {
  std::vector<std::string> inputs;
  std::string strategy = "partial";
  double theta = dctseg::kDefaultTheta;
  double split_ratio = dctseg::kDefaultSplitRatio;
  std::string out_path;
  std::string overlay_dir;
};

int run_segment(const SegmentArgs& args) {
  const dctseg::Strategy strategy = strategy_from_name(args.strategy);
  dctseg::SegmentParams params;
  params.theta = args.theta;
  params.split_ratio = args.split_ratio;

  std::ofstream out_file;
  if (!args.out_path.empty()) {
    out_file.open(args.out_path);
    if (!out_file) {
      std::cerr << args.out_path << ": cannot write\n";
      return kExitConfig;
    }
  }
  std::ostream& out = args.out_path.empty() ? std::cout : out_file;

  std::vector<std::string> failed;
  std::vector<std::string> files = expand_inputs(args.inputs, failed);
  for (const std::string& pattern : failed) {
    std::cerr << pattern << ": no matches\n";
  }

  for (const std::string& file : files) {
    try {
      const auto start = std::chrono::steady_clock::now();
      const std::vector<std::uint8_t> bytes = read_bytes(file);
      const dctseg::CoefficientImage image = dctseg::parse_jpeg(bytes);
      const dctseg::SegmentationResult result =
          dctseg::segment(image, strategy, params);
      const auto end_to_end =
          std::chrono::duration_cast<std::chrono::nanoseconds>(
              std::chrono::steady_clock::now() - start)
              .count();

      json record = {
          {"file", file},
          {"strategy", dctseg::to_string(result.strategy)},
          {"width_px", result.width_px},
          {"height_px", result.height_px},
          {"lines", lines_to_json(result)},
          {"timing_ns",
           {{"stage", result.stage_ns}, {"end_to_end", end_to_end}}},
          {"idct_blocks", result.idct_blocks},
      };
      out << record.dump() << "\n";

      if (!args.overlay_dir.empty()) {
        write_overlay(args.overlay_dir, file, image, result);
      }
    } catch (const std::exception& e) {
      std::cerr << file << ": " << e.what() << "\n";
      failed.push_back(file);
    }
  }
  return failed.empty() ? kExitOk : kExitFileFailures;
}

// ---- profile ---------------------------------------------------------------

struct ProfileArgs {
  std::vector<std::string> inputs;
  std::string out_path;
};

int run_profile(const ProfileArgs& args) {
  std::ofstream out_file;
  if (!args.out_path.empty()) {
    out_file.open(args.out_path);
    if (!out_file) {
      std::cerr << args.out_path << ": cannot write\n";
      return kExitConfig;
    }
  }
  std::ostream& out = args.out_path.empty() ? std::cout : out_file;

  std::vector<std::string> failed;
  std::vector<std::string> files = expand_inputs(args.inputs, failed);
  for (const std::string& pattern : failed) {
    std::cerr << pattern << ": no matches\n";
  }

  out << "file,block_row,value\n";
  for (const std::string& file : files) {
    try {
      const dctseg::CoefficientImage image =
          dctseg::parse_jpeg(read_bytes(file));
      const dctseg::DcProfile profile = dctseg::build_dc_profile(image);
      for (std::size_t r = 0; r < profile.values.size(); ++r) {
        out << file << "," << r << "," << profile.values[r] << "\n";
      }
    } catch (const std::exception& e) {
      std::cerr << file << ": " << e.what() << "\n";
      failed.push_back(file);
    }
  }
  return failed.empty() ? kExitOk : kExitFileFailures;
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  dctseg::CorpusConfig config;
  bool dump_pgm = false;
};

int run_gen(const GenArgs& args) {
  const auto manifest = dctseg::generate_corpus(args.config);

  if (args.dump_pgm) {
    // Re-plan deterministically and dump the pristine renderings next to
    // the compressed pages.
    std::size_t index = 0;
    for (int tier : args.config.tiers) {
      for (const dctseg::DocumentSpec& spec :
           dctseg::plan_documents(args.config, tier)) {
        const auto [page, gt] = dctseg::render_document(spec);
        const fs::path jpeg = manifest.at(index++).jpeg_path;
        fs::path pgm = jpeg;
        pgm.replace_extension(".pgm");
        dctseg::write_pgm(pgm.string(), page);
      }
    }
  }

  std::cout << (fs::path(args.config.out_dir) / "manifest.txt").string()
            << "\n";
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string manifest_path;
  std::string strategy = "all";
  double tau = dctseg::kDefaultIouTau;
  std::string summary_path;
};

int run_eval(const EvalArgs& args) {
  std::vector<dctseg::Strategy> strategies;
  if (args.strategy == "all") {
    strategies = {dctseg::Strategy::PartialDecompression,
                  dctseg::Strategy::AcCoefficients,
                  dctseg::Strategy::PixelBaseline};
  } else {
    strategies = {strategy_from_name(args.strategy)};
  }

  const auto entries = dctseg::read_manifest(args.manifest_path);

  struct Tally {
    int matched = 0;
    int predicted = 0;
    int ground_truth = 0;
  };
  std::map<int, std::map<dctseg::Strategy, Tally>> tallies;
  std::vector<std::string> failed;

  std::cout << "file,strategy,precision,recall,f_measure\n";
  for (const dctseg::ManifestEntry& entry : entries) {
    try {
      const dctseg::CoefficientImage image =
          dctseg::parse_jpeg(read_bytes(entry.jpeg_path));
      const dctseg::GroundTruth gt =
          dctseg::read_ground_truth(entry.gt_path);
      for (dctseg::Strategy strategy : strategies) {
        const dctseg::SegmentationResult result =
            dctseg::segment(image, strategy);
        const dctseg::Metrics m =
            dctseg::score_document(result, gt, args.tau);
        std::cout << entry.jpeg_path << "," << dctseg::to_string(strategy)
                  << "," << m.precision << "," << m.recall << ","
                  << m.f_measure << "\n";
        Tally& tally = tallies[entry.tier][strategy];
        tally.matched += m.matched;
        tally.predicted += m.predicted;
        tally.ground_truth += m.ground_truth;
      }
    } catch (const std::exception& e) {
      std::cerr << entry.jpeg_path << ": " << e.what() << "\n";
      failed.push_back(entry.jpeg_path);
    }
  }

  if (!args.summary_path.empty()) {
    json tiers = json::array();
    for (const auto& [tier, by_strategy] : tallies) {
      json rows = json::array();
      for (const auto& [strategy, tally] : by_strategy) {
        const dctseg::Metrics m = dctseg::compute_metrics(
            tally.matched, tally.predicted, tally.ground_truth);
        rows.push_back({{"strategy", dctseg::to_string(strategy)},
                        {"precision", m.precision},
                        {"recall", m.recall},
                        {"f_measure", m.f_measure},
                        {"matched", m.matched},
                        {"predicted", m.predicted},
                        {"ground_truth", m.ground_truth}});
      }
      tiers.push_back({{"tier", tier}, {"strategies", rows}});
    }
    const json summary = {{"tau", args.tau},
                          {"documents", entries.size()},
                          {"failures", failed},
                          {"tiers", tiers}};
    std::ofstream out(args.summary_path);
    if (!out) {
      std::cerr << args.summary_path << ": cannot write\n";
      return kExitConfig;
    }
    out << summary.dump(2) << "\n";
  }
  return failed.empty() ? kExitOk : kExitFileFailures;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string manifest_path;
  int repetitions = 5;
  std::string out_path;
};

int run_bench(const BenchArgs& args) {
  const auto entries = dctseg::read_manifest(args.manifest_path);
  const dctseg::BenchReport report = dctseg::bench(entries, args.repetitions);

  json tiers = json::array();
  for (const dctseg::TierBench& tier : report.tiers) {
    json rows = json::array();
    for (const dctseg::ApproachTiming& timing : tier.approaches) {
      rows.push_back(
          {{"strategy", dctseg::to_string(timing.strategy)},
           {"stage_median_ns", timing.stage.median_ns},
           {"stage_mean_ns", timing.stage.mean_ns},
           {"end_to_end_median_ns", timing.end_to_end.median_ns},
           {"end_to_end_mean_ns", timing.end_to_end.mean_ns},
           {"improvement_stage_pct", timing.improvement_stage_pct},
           {"improvement_end_to_end_pct", timing.improvement_end_to_end_pct},
           {"runs", timing.runs}});
    }
    tiers.push_back({{"tier", tier.tier}, {"approaches", rows}});
  }
  const json doc = {{"repetitions", report.repetitions},
                    {"failures", report.failures},
                    {"tiers", tiers}};

  if (args.out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(args.out_path);
    if (!out) {
      std::cerr << args.out_path << ": cannot write\n";
      return kExitConfig;
    }
    out << doc.dump(2) << "\n";
  }

  for (const std::string& failure : report.failures) {
    std::cerr << failure << "\n";
  }
  return report.failures.empty() ? kExitOk : kExitFileFailures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text line segmentation for baseline JPEG documents"};
  app.require_subcommand(1);

  SegmentArgs segment_args;
  CLI::App* seg = app.add_subcommand(
      "segment", "Segment pages and print one JSON record per file");
  seg->add_option("inputs", segment_args.inputs, "JPEG files or patterns")
      ->required();
  seg->add_option("--strategy", segment_args.strategy,
                  "partial | ac | pixel")
      ->check(CLI::IsMember({"partial", "ac", "pixel"}));
  seg->add_option("--theta", segment_args.theta,
                  "profile threshold as a fraction of the peak")
      ->check(CLI::Range(0.0, 1.0));
  seg->add_option("--split-ratio", segment_args.split_ratio,
                  "valley depth ratio that splits fused regions")
      ->check(CLI::Range(0.0, 1.0));
  seg->add_option("--out", segment_args.out_path,
                  "write JSON lines here instead of stdout");
  seg->add_option("--overlay-dir", segment_args.overlay_dir,
                  "write PGM overlays with boundary rows marked");

  ProfileArgs profile_args;
  CLI::App* prof = app.add_subcommand(
      "profile", "Print per-block-row projection values as CSV");
  prof->add_option("inputs", profile_args.inputs, "JPEG files or patterns")
      ->required();
  prof->add_option("--out", profile_args.out_path,
                   "write CSV here instead of stdout");

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand(
      "gen", "Generate a synthetic corpus with ground truth");
  gen->add_option("--out", gen_args.config.out_dir, "output directory")
      ->required();
  gen->add_option("--docs", gen_args.config.docs_per_tier,
                  "documents per tier")
      ->check(CLI::PositiveNumber);
  gen->add_option("--tiers", gen_args.config.tiers,
                  "scale tiers, e.g. --tiers 1 2 3")
      ->check(CLI::Range(1, 8));
  gen->add_option("--width", gen_args.config.base_width_px,
                  "tier-1 page width in pixels")
      ->check(CLI::PositiveNumber);
  gen->add_option("--height", gen_args.config.base_height_px,
                  "tier-1 page height in pixels")
      ->check(CLI::PositiveNumber);
  gen->add_option("--gaps", gen_args.config.gap_choices_px,
                  "inter-line gap choices in tier-1 pixels");
  gen->add_option("--min-lines", gen_args.config.min_lines, "minimum lines")
      ->check(CLI::PositiveNumber);
  gen->add_option("--max-lines", gen_args.config.max_lines, "maximum lines")
      ->check(CLI::PositiveNumber);
  gen->add_option("--quality", gen_args.config.quality,
                  "JPEG quality 1..100")
      ->check(CLI::Range(1, 100));
  gen->add_option("--seed", gen_args.config.seed, "corpus seed");
  gen->add_flag("--force-zero-gap", gen_args.config.force_zero_gap,
                "force one touching line pair per document");
  gen->add_flag("--dump-pgm", gen_args.dump_pgm,
                "also write the uncompressed renderings");

  EvalArgs eval_args;
  CLI::App* ev = app.add_subcommand(
      "eval", "Score segmentation against ground truth, CSV per document");
  ev->add_option("--manifest", eval_args.manifest_path,
                 "manifest.txt from gen")
      ->required();
  ev->add_option("--strategy", eval_args.strategy,
                 "partial | ac | pixel | all")
      ->check(CLI::IsMember({"partial", "ac", "pixel", "all"}));
  ev->add_option("--tau", eval_args.tau, "IoU match threshold")
      ->check(CLI::Range(0.0, 1.0));
  ev->add_option("--summary", eval_args.summary_path,
                 "write a per-tier JSON summary here");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "bench", "Time all strategies over a corpus and report medians");
  bench->add_option("--manifest", bench_args.manifest_path,
                    "manifest.txt from gen")
      ->required();
  bench->add_option("--reps", bench_args.repetitions,
                    "timed repetitions per document (min 3)")
      ->check(CLI::Range(3, 1000));
  bench->add_option("--out", bench_args.out_path,
                    "write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (seg->parsed()) return run_segment(segment_args);
    if (prof->parsed()) return run_profile(profile_args);
    if (gen->parsed()) return run_gen(gen_args);
    if (ev->parsed()) return run_eval(eval_args);
    if (bench->parsed()) return run_bench(bench_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitFileFailures;
  }
  return kExitConfig;
}
