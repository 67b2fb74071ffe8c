#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "summer/dataset.hpp"
#include "summer/error.hpp"
#include "summer/metric.hpp"

namespace summer {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kCacheHeader = "summer-score-cache\tv1";

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// FNV-1a, 64 bit.
class ContentHash {
 public:
  void update(std::span<const unsigned char> bytes) {
    for (unsigned char b : bytes) {
      state_ ^= b;
      state_ *= 0x100000001b3ULL;
    }
  }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(state_));
    return buf;
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

// Key-value sidecar: "<metric>\t<content hash>\t<hex float>" per line.
class ScoreCache {
 public:
  explicit ScoreCache(std::optional<fs::path> path) : path_(std::move(path)) {
    if (!path_) return;
    std::ifstream in(*path_);
    if (!in) return;
    std::string line;
    if (!std::getline(in, line) || line != kCacheHeader) return;  // unknown version: start over
    while (std::getline(in, line)) {
      const auto a = line.find('\t');
      const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
      if (b == std::string::npos) continue;
      double v = 0.0;
      const char* first = line.data() + b + 1;
      const char* last = line.data() + line.size();
      const auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::hex);
      if (ec == std::errc() && ptr == last) entries_[line.substr(0, b)] = v;
    }
  }

  bool enabled() const { return path_.has_value(); }

  std::optional<double> get(const std::string& key) const {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& key, double value) {
    std::lock_guard lock(mutex_);
    entries_[key] = value;
    dirty_ = true;
  }

  void save() const {
    if (!path_ || !dirty_) return;
    const fs::path tmp = fs::path(path_->string() + ".tmp");
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw IoError("cannot write score cache " + tmp.string());
      out << kCacheHeader << '\n';
      char buf[64];
      for (const auto& [key, value] : entries_) {
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::hex);
        out << key << '\t' << std::string_view(buf, static_cast<std::size_t>(ptr - buf)) << '\n';
      }
    }
    fs::rename(tmp, *path_);
  }

 private:
  std::optional<fs::path> path_;
  mutable std::mutex mutex_;
  std::map<std::string, double> entries_;
  bool dirty_ = false;
};

class ReferenceStore {
 public:
  std::shared_ptr<const RasterImage> get(const fs::path& path,
                                         std::span<const unsigned char> bytes) {
    {
      std::lock_guard lock(mutex_);
      const auto it = images_.find(path);
      if (it != images_.end()) return it->second;
    }
    auto img = std::make_shared<const RasterImage>(decode_image(bytes));
    std::lock_guard lock(mutex_);
    return images_.try_emplace(path, std::move(img)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<fs::path, std::shared_ptr<const RasterImage>> images_;
};

struct RecordScores {
  std::optional<std::string> failure;
  std::vector<double> scores;
  std::vector<std::optional<double>> seconds;
};

RecordScores score_record(const SubjectiveRecord& rec, const std::vector<MetricDefinition>& metrics,
                          ScoreCache& cache, ReferenceStore& refs) {
  RecordScores out;
  out.scores.assign(metrics.size(), 0.0);
  out.seconds.assign(metrics.size(), std::nullopt);
  try {
    const auto ref_bytes = read_bytes(rec.reference_path);
    const auto dist_bytes = read_bytes(rec.distorted_path);
    std::string content_key;
    if (cache.enabled()) {
      ContentHash h;
      h.update(ref_bytes);
      const unsigned char sep = 0;
      h.update({&sep, 1});
      h.update(dist_bytes);
      content_key = h.hex();
    }
    std::shared_ptr<const RasterImage> ref;
    std::optional<RasterImage> dist;
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      const std::string key = metrics[m].id + "\t" + content_key;
      if (cache.enabled()) {
        if (const auto hit = cache.get(key)) {
          out.scores[m] = *hit;
          continue;
        }
      }
      if (!ref) {
        ref = refs.get(rec.reference_path, ref_bytes);
        dist = decode_image(dist_bytes);
      }
      const auto start = std::chrono::steady_clock::now();
      const double score = metrics[m].score(*ref, *dist);
      const auto stop = std::chrono::steady_clock::now();
      out.seconds[m] = std::chrono::duration<double>(stop - start).count();
      if (!std::isfinite(score)) {
        throw Error("metric " + metrics[m].id + " produced a non-finite score");
      }
      out.scores[m] = score;
      if (cache.enabled()) cache.put(key, score);
    }
  } catch (const std::exception& e) {
    out.failure = e.what();
  }
  return out;
}

double safe_statistic(double (*fn)(std::span<const double>, std::span<const double>),
                      std::span<const double> x, std::span<const double> y) {
  try {
    return fn(x, y);
  } catch (const UndefinedError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

MetricBundle make_bundle(const std::vector<std::size_t>& idx, std::span<const double> pred,
                         std::span<const double> oriented, std::span<const double> mos,
                         const std::vector<SubjectiveRecord>& records) {
  std::vector<double> p;
  std::vector<double> o;
  std::vector<double> m;
  std::vector<double> s;
  bool all_std = true;
  for (std::size_t i : idx) {
    p.push_back(pred[i]);
    o.push_back(oriented[i]);
    m.push_back(mos[i]);
    if (records[i].mos_std) {
      s.push_back(*records[i].mos_std);
    } else {
      all_std = false;
    }
  }
  MetricBundle b;
  b.count = idx.size();
  b.plcc = safe_statistic(plcc, p, m);
  b.srcc = safe_statistic(srcc, o, m);
  b.krcc = safe_statistic(krcc, o, m);
  b.rmse = rmse(p, m);
  b.outlier_ratio = all_std ? outlier_ratio(p, m, std::span<const double>(s))
                            : outlier_ratio(p, m);
  return b;
}

int verdict(double r1, double r2, std::size_t n) {
  if (!std::isfinite(r1) || !std::isfinite(r2) || n < 4) return 0;
  return fisher_z_significance(r1, n, r2, n).value;
}

}  // namespace

double polarity_sign(bool metric_higher_is_better, bool subjective_higher_is_better) {
  return metric_higher_is_better == subjective_higher_is_better ? 1.0 : -1.0;
}

MetricDefinition builtin_metric(std::string_view id) {
  if (id == "summer") {
    return {"summer", true,
            [](const RasterImage& a, const RasterImage& b) { return summer_score(a, b).value; }};
  }
  if (id == "baseline") return {"baseline", false, baseline_spectral_score};
  if (id == "psnr") return {"psnr", true, psnr_capped};
  throw ParameterError("unknown metric '" + std::string(id) + "' (summer, baseline, psnr)");
}

MetricReport evaluate_metric(const MetricDefinition& metric,
                             const std::vector<SubjectiveRecord>& records,
                             std::span<const double> scores, const BenchmarkOptions& options) {
  const std::size_t n = records.size();
  if (scores.size() != n) throw ParameterError("score count does not match record count");
  const double sign = polarity_sign(metric.higher_is_better, options.subjective_higher_is_better);

  std::vector<double> mos(n);
  std::vector<double> oriented(n);
  for (std::size_t i = 0; i < n; ++i) {
    mos[i] = records[i].mos;
    oriented[i] = sign * scores[i];
  }

  MetricReport report;
  report.id = metric.id;
  report.higher_is_better = metric.higher_is_better;
  RegressionOptions reg;
  reg.form = options.logistic_form;
  report.regression = fit_regression(scores, mos, reg);
  const std::vector<double> pred = report.regression.apply(scores);

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  report.overall = make_bundle(all, pred, oriented, mos, records);

  std::map<std::string, std::vector<std::size_t>> by_category;
  for (std::size_t i = 0; i < n; ++i) {
    if (records[i].category) by_category[std::string(to_string(*records[i].category))].push_back(i);
  }
  for (const auto& [name, idx] : by_category) {
    if (idx.size() >= kMinBenchmarkRecords) {
      report.categories[name] = make_bundle(idx, pred, oriented, mos, records);
    }
  }

  const auto h_mos = normalized_histogram(mos);
  const auto h_pred = normalized_histogram(pred);
  report.histogram.emd = histogram_distance(h_mos, h_pred, HistogramMetric::kEmd);
  report.histogram.kl = histogram_distance(h_mos, h_pred, HistogramMetric::kKl);
  report.histogram.js = histogram_distance(h_mos, h_pred, HistogramMetric::kJs);
  report.histogram.hi = histogram_distance(h_mos, h_pred, HistogramMetric::kHi);
  report.histogram.l2 = histogram_distance(h_mos, h_pred, HistogramMetric::kL2);

  const double mos_sign = options.subjective_higher_is_better ? 1.0 : -1.0;
  std::vector<ClassificationItem> items(n);
  for (std::size_t i = 0; i < n; ++i) {
    items[i].objective = sign * mos_sign * scores[i];
    items[i].mos = mos_sign * records[i].mos;
    items[i].mos_std = records[i].mos_std;
    if (records[i].vote_count) items[i].vote_count = static_cast<double>(*records[i].vote_count);
  }
  report.classification = classification_analysis(items);
  return report;
}

BenchmarkReport run_benchmark(const std::vector<SubjectiveRecord>& records,
                              const std::vector<MetricDefinition>& metrics,
                              const BenchmarkOptions& options) {
  if (metrics.empty()) throw BenchmarkError("no metrics selected");
  ScoreCache cache(options.cache_path);
  ReferenceStore refs;
  std::vector<RecordScores> results(records.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      results[i] = score_record(records[i], metrics, cache, refs);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, 256);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  cache.save();

  BenchmarkReport report;
  report.dataset_name = options.dataset_name;
  report.subjective_higher_is_better = options.subjective_higher_is_better;
  std::vector<SubjectiveRecord> usable;
  std::vector<std::vector<double>> scores(metrics.size());
  std::vector<double> seconds(metrics.size(), 0.0);
  std::vector<std::size_t> timed(metrics.size(), 0);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (results[i].failure) {
      report.skipped.push_back({records[i].distorted_path.string(), *results[i].failure});
      continue;
    }
    usable.push_back(records[i]);
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      scores[m].push_back(results[i].scores[m]);
      if (results[i].seconds[m]) {
        seconds[m] += *results[i].seconds[m];
        ++timed[m];
      }
    }
  }
  if (usable.size() < kMinBenchmarkRecords) {
    throw BenchmarkError("only " + std::to_string(usable.size()) +
                         " usable records; at least 6 are required");
  }
  report.record_count = usable.size();

  for (std::size_t m = 0; m < metrics.size(); ++m) {
    MetricReport mr = evaluate_metric(metrics[m], usable, scores[m], options);
    mr.timed_calls = timed[m];
    mr.mean_runtime_s = timed[m] == 0 ? 0.0 : seconds[m] / static_cast<double>(timed[m]);
    report.metrics.push_back(std::move(mr));
  }

  const std::size_t k = report.metrics.size();
  report.significance_plcc.assign(k, std::vector<int>(k, 0));
  report.significance_srcc.assign(k, std::vector<int>(k, 0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      const auto& ra = report.metrics[a].overall;
      const auto& rb = report.metrics[b].overall;
      report.significance_plcc[a][b] = verdict(ra.plcc, rb.plcc, report.record_count);
      report.significance_srcc[a][b] = verdict(ra.srcc, rb.srcc, report.record_count);
    }
  }
  return report;
}

}  // namespace summer
