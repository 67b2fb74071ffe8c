// Command-line front end: score, benchmark, distort, atlas.
//
// Exit codes: 0 success, 1 internal failure, 2 usage or input error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "summer/dataset.hpp"
#include "summer/distortion.hpp"
#include "summer/error.hpp"
#include "summer/metric.hpp"
#include "summer/raster.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct ScoreArgs {
  std::string ref;
  std::string cmp;
  std::string metric = "summer";
};

struct BenchmarkArgs {
  std::string manifest;
  std::vector<std::string> metrics = {"summer"};
  std::string out;
  std::string format = "json";
  std::size_t threads = 1;
  std::string name;
  bool dmos = false;
  std::string cache;
  bool timing = false;
  std::string logistic = "standard";
};

struct DistortArgs {
  std::string input;
  std::string kind;
  int level = 1;
  std::uint64_t seed = 0;
  std::string out;
};

struct AtlasArgs {
  std::vector<std::string> refs;
  std::string kind;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string channel = "gray";
};

int run_score(const ScoreArgs& args) {
  const summer::MetricDefinition metric = summer::builtin_metric(args.metric);
  const auto ref = summer::load_image(args.ref);
  const auto cmp = summer::load_image(args.cmp);
  const double value = metric.score(ref, cmp);
  std::cout << "metric=" << metric.id << " score=" << summer::format_fixed6(value) << "\n";
  return kExitOk;
}

void print_table(const summer::BenchmarkReport& report) {
  std::cout << "dataset=" << report.dataset_name << " records=" << report.record_count
            << " skipped=" << report.skipped.size() << "\n";
  std::cout << "metric      PLCC      SRCC      KRCC      RMSE      OR\n";
  for (const auto& m : report.metrics) {
    std::string id = m.id;
    id.resize(std::max<std::size_t>(id.size(), 10), ' ');
    std::cout << id;
    for (double v : {m.overall.plcc, m.overall.srcc, m.overall.krcc, m.overall.rmse,
                     m.overall.outlier_ratio}) {
      std::cout << "  " << summer::format_fixed6(v);
    }
    std::cout << "\n";
  }
}

int run_benchmark(const BenchmarkArgs& args, int verbosity) {
  const auto format = summer::parse_report_format(args.format);
  std::vector<summer::MetricDefinition> metrics;
  for (const auto& id : args.metrics) metrics.push_back(summer::builtin_metric(id));

  const auto load = summer::load_manifest(args.manifest);
  for (const auto& w : load.warnings) std::cerr << "warning: " << w << "\n";
  if (!load.missing.empty()) {
    std::cerr << "warning: " << load.missing.size() << " image file(s) missing, records dropped\n";
    if (verbosity > 0) {
      for (const auto& m : load.missing) std::cerr << "  missing: " << m << "\n";
    }
  }

  summer::BenchmarkOptions options;
  options.dataset_name = args.name.empty() ? fs::path(args.manifest).stem().string() : args.name;
  options.threads = args.threads;
  options.subjective_higher_is_better = !args.dmos;
  options.logistic_form = args.logistic == "as-printed" ? summer::LogisticForm::kAsPrinted
                                                        : summer::LogisticForm::kStandard;
  if (!args.cache.empty()) options.cache_path = args.cache;

  const auto report = summer::run_benchmark(load.records, metrics, options);
  for (const auto& s : report.skipped) {
    std::cerr << "skipped: " << s.distorted << ": " << s.reason << "\n";
  }
  if (!args.out.empty()) summer::emit_report(report, args.out, format, args.timing);
  print_table(report);
  if (args.timing) {
    for (const auto& m : report.metrics) {
      std::cout << "runtime " << m.id << " mean_s=" << summer::format_fixed6(m.mean_runtime_s)
                << "\n";
    }
  }
  return kExitOk;
}

int run_distort(const DistortArgs& args) {
  summer::DistortionSpec spec;
  spec.kind = summer::parse_distortion_kind(args.kind);
  spec.level = args.level;
  spec.seed = args.seed;
  const auto img = summer::load_image(args.input);
  summer::save_ppm(summer::apply_distortion(img, spec), args.out);
  return kExitOk;
}

int run_atlas(const AtlasArgs& args) {
  const auto kind = summer::parse_distortion_kind(args.kind);
  const auto channel = summer::parse_atlas_channel(args.channel);
  std::map<int, std::vector<summer::ImagePair>> pairs;
  for (std::size_t k = 0; k < args.refs.size(); ++k) {
    const auto ref = summer::load_image(args.refs[k]);
    for (int level = summer::kMinDistortionLevel; level <= summer::kMaxDistortionLevel; ++level) {
      const summer::DistortionSpec spec{kind, level, args.seed + k};
      pairs[level].emplace_back(ref, summer::apply_distortion(ref, spec));
    }
  }
  const auto entries = summer::average_error_spectrum(pairs, channel);
  fs::create_directories(args.out_dir);
  std::ofstream csv(fs::path(args.out_dir) / "relative_means.csv", std::ios::trunc);
  if (!csv) throw summer::IoError("cannot write " + (fs::path(args.out_dir) / "relative_means.csv").string());
  csv << "level,relative_mean\n";
  for (const auto& e : entries) {
    summer::save_plane_map(e.mean_spectrum,
                           fs::path(args.out_dir) / ("level_" + std::to_string(e.level) + ".pgm"),
                           true);
    csv << e.level << "," << summer::format_fixed6(e.relative_mean) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-reference image quality assessment with multi-scale spectral error analysis",
               "summer"};
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "Increase diagnostic output");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score a compared image against a reference");
  score_cmd->add_option("ref", score.ref, "Reference image (PPM P6 or PNG)")->required();
  score_cmd->add_option("cmp", score.cmp, "Compared image (PPM P6 or PNG)")->required();
  score_cmd->add_option("--metric", score.metric, "Metric: summer, baseline or psnr")
      ->capture_default_str();

  BenchmarkArgs bench;
  auto* bench_cmd = app.add_subcommand("benchmark", "Evaluate metrics against subjective scores");
  bench_cmd->add_option("manifest", bench.manifest,
                        "Manifest CSV, or a TID2013 directory / mos_with_names.txt")
      ->required();
  bench_cmd->add_option("--metrics", bench.metrics, "Comma-separated metrics (summer,baseline,psnr)")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Report output path");
  bench_cmd->add_option("--format", bench.format, "Report format: json or csv")
      ->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "Worker threads for scoring")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--name", bench.name, "Dataset name recorded in the report");
  bench_cmd->add_flag("--dmos", bench.dmos, "Subjective scores are DMOS (lower is better)");
  bench_cmd->add_option("--cache", bench.cache, "Score cache sidecar file");
  bench_cmd->add_flag("--timing", bench.timing, "Include per-image runtime in output and report");
  bench_cmd->add_option("--logistic", bench.logistic, "Regression form: standard or as-printed")
      ->check(CLI::IsMember({"standard", "as-printed"}))
      ->capture_default_str();

  DistortArgs distort;
  auto* distort_cmd = app.add_subcommand("distort", "Apply a synthetic distortion to an image");
  distort_cmd->add_option("input", distort.input, "Input image")->required();
  distort_cmd->add_option("--kind", distort.kind,
                          "gaussian_blur, additive_gaussian_noise, correlated_noise, quantization")
      ->required();
  distort_cmd->add_option("--level", distort.level, "Severity level 1..5")->capture_default_str();
  distort_cmd->add_option("--seed", distort.seed, "Seed for stochastic kinds")
      ->capture_default_str();
  distort_cmd->add_option("--out", distort.out, "Output PPM path")->required();

  AtlasArgs atlas;
  auto* atlas_cmd =
      app.add_subcommand("atlas", "Average error spectra over a five-level distortion ladder");
  atlas_cmd->add_option("refs", atlas.refs, "Reference images")->required();
  atlas_cmd->add_option("--kind", atlas.kind,
                        "gaussian_blur, additive_gaussian_noise, correlated_noise, quantization")
      ->required();
  atlas_cmd->add_option("--out-dir", atlas.out_dir, "Directory for level_N.pgm and relative_means.csv")
      ->required();
  atlas_cmd->add_option("--seed", atlas.seed, "Base seed (reference k uses seed + k)")
      ->capture_default_str();
  atlas_cmd->add_option("--channel", atlas.channel, "Plane analysed: gray, r, g or b")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*score_cmd) return run_score(score);
    if (*bench_cmd) return run_benchmark(bench, verbosity);
    if (*distort_cmd) return run_distort(distort);
    if (*atlas_cmd) return run_atlas(atlas);
  } catch (const summer::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
