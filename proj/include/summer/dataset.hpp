#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "summer/evaluation.hpp"
#include "summer/raster.hpp"

namespace summer {

enum class Category { kCompression, kNoise, kCommunication, kBlur, kColor, kGlobal, kLocal };

std::string_view to_string(Category c);
// Case-insensitive; empty optional for unknown names.
std::optional<Category> parse_category(std::string_view name);

struct SubjectiveRecord {
  std::string reference_id;
  std::filesystem::path reference_path;
  std::filesystem::path distorted_path;
  std::string distortion_type;
  std::optional<int> distortion_level;
  double mos = 0.0;
  std::optional<double> mos_std;
  std::optional<int> vote_count;
  std::optional<Category> category;
};

struct ManifestLoad {
  std::vector<SubjectiveRecord> records;
  // Records dropped because an image file does not exist.
  std::vector<std::string> missing;
  std::vector<std::string> warnings;
};

// Dispatches on the path: a directory or a file named mos_with_names.txt is
// read as a TID2013 layout, anything else as a manifest CSV.
ManifestLoad load_manifest(const std::filesystem::path& path);

// Header row required: ref,dist,type,level,mos,mos_std,votes,category (any
// order; only ref, dist and mos are mandatory). Relative image paths resolve
// against the manifest's directory. Malformed rows throw ParseError.
ManifestLoad load_csv_manifest(const std::filesystem::path& path);

// TID2013 layout: mos_with_names.txt ("<mos> <name>" per line), optional
// mos_std.txt (same order), distorted_images/ and reference_images/. Images
// are looked up by stem, preferring .png then .ppm over the original .bmp.
ManifestLoad load_tid13(const std::filesystem::path& dir);

// Splits one CSV line, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_number);

struct Tid13Name {
  std::string reference_id;  // e.g. "i02"
  int type = 0;              // 1..24
  int level = 0;             // 1..5
};

// Parses "iRR_TT_L.ext" (case-insensitive). Throws ParseError.
Tid13Name parse_tid13_name(std::string_view file_name, std::size_t line_number = 0);
std::string_view tid13_type_name(int type);
Category tid13_category(int type);

// ---------------------------------------------------------------------------

struct MetricDefinition {
  std::string id;
  bool higher_is_better = true;
  std::function<double(const RasterImage&, const RasterImage&)> score;
};

// summer, baseline, psnr. Throws ParameterError for anything else.
MetricDefinition builtin_metric(std::string_view id);

struct BenchmarkOptions {
  std::string dataset_name = "dataset";
  std::size_t threads = 1;
  // false for DMOS-style subjective scales.
  bool subjective_higher_is_better = true;
  LogisticForm logistic_form = LogisticForm::kStandard;
  // Sidecar score cache; disabled when empty.
  std::optional<std::filesystem::path> cache_path;
};

struct HistogramDistances {
  double emd = 0.0;
  double kl = 0.0;
  double js = 0.0;
  double hi = 0.0;
  double l2 = 0.0;
};

struct MetricReport {
  std::string id;
  bool higher_is_better = true;
  RegressionModel regression;
  MetricBundle overall;
  std::map<std::string, MetricBundle> categories;
  HistogramDistances histogram;
  ClassificationResult classification;
  // Seconds per score call, measured around the call only. Not part of the
  // deterministic report body.
  double mean_runtime_s = 0.0;
  std::size_t timed_calls = 0;
};

struct SkippedRecord {
  std::string distorted;
  std::string reason;
};

struct BenchmarkReport {
  std::string dataset_name;
  std::size_t record_count = 0;
  bool subjective_higher_is_better = true;
  std::vector<SkippedRecord> skipped;
  std::vector<MetricReport> metrics;
  // [i][j]: Fisher-z verdict of metric j against metric i.
  std::vector<std::vector<int>> significance_plcc;
  std::vector<std::vector<int>> significance_srcc;
};

// Minimum usable records, and per category.
inline constexpr std::size_t kMinBenchmarkRecords = 6;

// Scores every record with every metric (concurrently, deterministic
// aggregation) and evaluates the scores. Unloadable records are skipped and
// listed; fewer than 6 usable records throw BenchmarkError.
BenchmarkReport run_benchmark(const std::vector<SubjectiveRecord>& records,
                              const std::vector<MetricDefinition>& metrics,
                              const BenchmarkOptions& options = {});

// Evaluation step on already computed scores (same order as records).
MetricReport evaluate_metric(const MetricDefinition& metric,
                             const std::vector<SubjectiveRecord>& records,
                             std::span<const double> scores, const BenchmarkOptions& options);

// +1 when the metric and the subjective scale agree in direction, else -1.
double polarity_sign(bool metric_higher_is_better, bool subjective_higher_is_better);

// ---------------------------------------------------------------------------

enum class ReportFormat { kJson, kCsv };
ReportFormat parse_report_format(std::string_view name);

// Stable key order, fixed 6-decimal numbers, NaN as null.
std::string report_to_json(const BenchmarkReport& report, bool include_timing = false);
// One row per metric (category "all") plus one per category bundle.
std::string report_to_csv(const BenchmarkReport& report);
BenchmarkReport report_from_json(std::string_view json);

void emit_report(const BenchmarkReport& report, const std::filesystem::path& path,
                 ReportFormat format, bool include_timing = false);

// Locale-independent fixed formatting with 6 decimals.
std::string format_fixed6(double v);

}  // namespace summer
