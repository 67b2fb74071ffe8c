#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "summer/dataset.hpp"
#include "summer/error.hpp"

namespace summer {

namespace {

using ojson = nlohmann::ordered_json;

ojson number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ojson optional_number(const std::optional<double>& v) {
  return v ? number(*v) : ojson(nullptr);
}

ojson bundle_json(const MetricBundle& b) {
  ojson j;
  j["count"] = b.count;
  j["plcc"] = number(b.plcc);
  j["srcc"] = number(b.srcc);
  j["krcc"] = number(b.krcc);
  j["rmse"] = number(b.rmse);
  j["outlier_ratio"] = number(b.outlier_ratio);
  return j;
}

ojson matrix_json(const std::vector<std::vector<int>>& m) {
  ojson rows = ojson::array();
  for (const auto& row : m) rows.push_back(row);
  return rows;
}

// nlohmann's own dump prints shortest round-trip doubles; the report wants
// fixed 6-decimal text, so floats are written here.
void dump(const ojson& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + ojson(key).dump() + ": ";
        dump(value, out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const ojson& e) {
        return e.is_object() || e.is_array();
      });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += inner;
        dump(value, out, indent + 1);
      }
      out += flat ? "]" : "\n" + pad + "]";
      return;
    }
    case ojson::value_t::number_float:
      out += format_fixed6(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

double read_number(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

std::optional<double> read_optional(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

MetricBundle read_bundle(const nlohmann::json& j) {
  MetricBundle b;
  b.count = j.at("count").get<std::size_t>();
  b.plcc = read_number(j.at("plcc"));
  b.srcc = read_number(j.at("srcc"));
  b.krcc = read_number(j.at("krcc"));
  b.rmse = read_number(j.at("rmse"));
  b.outlier_ratio = read_number(j.at("outlier_ratio"));
  return b;
}

std::string csv_row(const std::string& metric, const std::string& category, const MetricBundle& b) {
  auto cell = [](double v) { return std::isfinite(v) ? format_fixed6(v) : std::string(); };
  return metric + "," + category + "," + std::to_string(b.count) + "," + cell(b.plcc) + "," +
         cell(b.srcc) + "," + cell(b.krcc) + "," + cell(b.rmse) + "," + cell(b.outlier_ratio) +
         "\n";
}

}  // namespace

std::string format_fixed6(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
  std::string s(buf, ptr);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw ParameterError("unknown report format '" + std::string(name) + "' (json, csv)");
}

std::string report_to_json(const BenchmarkReport& report, bool include_timing) {
  ojson root;
  root["schema"] = "summer-benchmark-report/1";
  root["dataset"] = report.dataset_name;
  root["record_count"] = report.record_count;
  root["subjective_higher_is_better"] = report.subjective_higher_is_better;
  ojson skipped = ojson::array();
  for (const auto& s : report.skipped) {
    skipped.push_back(ojson{{"distorted", s.distorted}, {"reason", s.reason}});
  }
  root["skipped"] = skipped;

  ojson metrics = ojson::array();
  for (const auto& m : report.metrics) {
    ojson jm;
    jm["id"] = m.id;
    jm["higher_is_better"] = m.higher_is_better;
    ojson reg;
    ojson beta = ojson::array();
    for (double b : m.regression.beta) beta.push_back(number(b));
    reg["form"] = m.regression.form == LogisticForm::kStandard ? "standard" : "as_printed";
    reg["beta"] = beta;
    reg["converged"] = m.regression.converged;
    reg["iterations"] = m.regression.iterations;
    reg["residual_rmse"] = number(m.regression.residual_rmse);
    jm["regression"] = reg;
    jm["overall"] = bundle_json(m.overall);
    ojson cats = ojson::object();
    for (const auto& [name, b] : m.categories) cats[name] = bundle_json(b);
    jm["categories"] = cats;
    jm["histogram"] = ojson{{"emd", number(m.histogram.emd)},
                            {"kl", number(m.histogram.kl)},
                            {"js", number(m.histogram.js)},
                            {"hi", number(m.histogram.hi)},
                            {"l2", number(m.histogram.l2)}};
    const auto& c = m.classification;
    jm["classification"] = ojson{{"auc_different_similar", optional_number(c.auc_different_similar)},
                                 {"auc_better_worse", optional_number(c.auc_better_worse)},
                                 {"c0", optional_number(c.c0)},
                                 {"different_pairs", c.different_pairs},
                                 {"similar_pairs", c.similar_pairs},
                                 {"excluded", c.excluded}};
    if (include_timing) {
      jm["timing"] = ojson{{"mean_runtime_s", number(m.mean_runtime_s)},
                           {"timed_calls", m.timed_calls}};
    }
    metrics.push_back(jm);
  }
  root["metrics"] = metrics;
  ojson order = ojson::array();
  for (const auto& m : report.metrics) order.push_back(m.id);
  root["significance"] = ojson{{"metric_order", order},
                               {"plcc", matrix_json(report.significance_plcc)},
                               {"srcc", matrix_json(report.significance_srcc)}};
  std::string out;
  dump(root, out, 0);
  out += "\n";
  return out;
}

BenchmarkReport report_from_json(std::string_view text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    BenchmarkReport r;
    r.dataset_name = root.at("dataset").get<std::string>();
    r.record_count = root.at("record_count").get<std::size_t>();
    r.subjective_higher_is_better = root.at("subjective_higher_is_better").get<bool>();
    for (const auto& s : root.at("skipped")) {
      r.skipped.push_back({s.at("distorted").get<std::string>(), s.at("reason").get<std::string>()});
    }
    for (const auto& jm : root.at("metrics")) {
      MetricReport m;
      m.id = jm.at("id").get<std::string>();
      m.higher_is_better = jm.at("higher_is_better").get<bool>();
      const auto& reg = jm.at("regression");
      m.regression.form = reg.at("form").get<std::string>() == "standard" ? LogisticForm::kStandard
                                                                          : LogisticForm::kAsPrinted;
      for (std::size_t k = 0; k < 5; ++k) m.regression.beta[k] = read_number(reg.at("beta").at(k));
      m.regression.converged = reg.at("converged").get<bool>();
      m.regression.iterations = reg.at("iterations").get<std::size_t>();
      m.regression.residual_rmse = read_number(reg.at("residual_rmse"));
      m.overall = read_bundle(jm.at("overall"));
      for (const auto& [name, b] : jm.at("categories").items()) m.categories[name] = read_bundle(b);
      const auto& h = jm.at("histogram");
      m.histogram = {read_number(h.at("emd")), read_number(h.at("kl")), read_number(h.at("js")),
                     read_number(h.at("hi")), read_number(h.at("l2"))};
      const auto& c = jm.at("classification");
      m.classification.auc_different_similar = read_optional(c.at("auc_different_similar"));
      m.classification.auc_better_worse = read_optional(c.at("auc_better_worse"));
      m.classification.c0 = read_optional(c.at("c0"));
      m.classification.different_pairs = c.at("different_pairs").get<std::size_t>();
      m.classification.similar_pairs = c.at("similar_pairs").get<std::size_t>();
      m.classification.excluded = c.at("excluded").get<std::size_t>();
      if (jm.contains("timing")) {
        m.mean_runtime_s = read_number(jm["timing"].at("mean_runtime_s"));
        m.timed_calls = jm["timing"].at("timed_calls").get<std::size_t>();
      }
      r.metrics.push_back(std::move(m));
    }
    const auto& sig = root.at("significance");
    r.significance_plcc = sig.at("plcc").get<std::vector<std::vector<int>>>();
    r.significance_srcc = sig.at("srcc").get<std::vector<std::vector<int>>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report JSON does not match the schema: ") + e.what());
  }
}

std::string report_to_csv(const BenchmarkReport& report) {
  std::string out = "metric,category,count,plcc,srcc,krcc,rmse,outlier_ratio\n";
  for (const auto& m : report.metrics) {
    out += csv_row(m.id, "all", m.overall);
    for (const auto& [name, b] : m.categories) out += csv_row(m.id, name, b);
  }
  return out;
}

void emit_report(const BenchmarkReport& report, const std::filesystem::path& path,
                 ReportFormat format, bool include_timing) {
  const std::string text =
      format == ReportFormat::kJson ? report_to_json(report, include_timing) : report_to_csv(report);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace summer
