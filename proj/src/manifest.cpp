#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "summer/dataset.hpp"
#include "summer/error.hpp"

namespace summer {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

struct Tid13Type {
  std::string_view name;
  Category category;
};

// Published TID2013 type order. Lossy compression of noisy images (21) is
// listed under both Compression and Noise in the category definitions; a
// record carries one category, so it is filed under Compression.
constexpr std::array<Tid13Type, 24> kTid13Types = {{
    {"additive_gaussian_noise", Category::kNoise},
    {"additive_noise_color_components", Category::kNoise},
    {"spatially_correlated_noise", Category::kNoise},
    {"masked_noise", Category::kNoise},
    {"high_frequency_noise", Category::kNoise},
    {"impulse_noise", Category::kNoise},
    {"quantization_noise", Category::kNoise},
    {"gaussian_blur", Category::kBlur},
    {"image_denoising", Category::kNoise},
    {"jpeg_compression", Category::kCompression},
    {"jpeg2000_compression", Category::kCompression},
    {"jpeg_transmission_errors", Category::kCommunication},
    {"jpeg2000_transmission_errors", Category::kCommunication},
    {"non_eccentricity_pattern_noise", Category::kLocal},
    {"local_blockwise_distortions", Category::kLocal},
    {"mean_shift", Category::kGlobal},
    {"contrast_change", Category::kGlobal},
    {"color_saturation_change", Category::kColor},
    {"multiplicative_gaussian_noise", Category::kNoise},
    {"comfort_noise", Category::kNoise},
    {"lossy_compression_noisy_images", Category::kCompression},
    {"color_quantization_dither", Category::kColor},
    {"chromatic_aberrations", Category::kColor},
    {"sparse_sampling_reconstruction", Category::kBlur},
}};

const Tid13Type& tid13_type(int type) {
  if (type < 1 || type > static_cast<int>(kTid13Types.size())) {
    throw ParameterError("TID2013 distortion type " + std::to_string(type) + " outside 1..24");
  }
  return kTid13Types[static_cast<std::size_t>(type - 1)];
}

// Finds `stem` in dir (case-insensitive), preferring decodable formats.
std::optional<fs::path> resolve_image(const fs::path& dir, std::string_view stem) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return std::nullopt;
  const std::string want = lower(stem);
  std::optional<fs::path> best;
  int best_rank = 100;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (lower(p.stem().string()) != want) continue;
    const std::string ext = lower(p.extension().string());
    const int rank = ext == ".png" ? 0 : ext == ".ppm" ? 1 : 2;
    if (rank < best_rank || (rank == best_rank && best && p < *best)) {
      best = p;
      best_rank = rank;
    }
  }
  return best;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (!lines.empty() && lines.front().starts_with("\xEF\xBB\xBF")) lines.front().erase(0, 3);
  return lines;
}

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::kCompression: return "Compression";
    case Category::kNoise: return "Noise";
    case Category::kCommunication: return "Communication";
    case Category::kBlur: return "Blur";
    case Category::kColor: return "Color";
    case Category::kGlobal: return "Global";
    case Category::kLocal: return "Local";
  }
  return "Unknown";
}

std::optional<Category> parse_category(std::string_view name) {
  const std::string want = lower(trim(name));
  for (auto c : {Category::kCompression, Category::kNoise, Category::kCommunication,
                 Category::kBlur, Category::kColor, Category::kGlobal, Category::kLocal}) {
    if (lower(to_string(c)) == want) return c;
  }
  return std::nullopt;
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_number) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!trim(field).empty()) throw ParseError("stray quote inside unquoted field", line_number);
      field.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else if (was_quoted) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        throw ParseError("text after closing quote", line_number);
      }
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_number);
  fields.push_back(was_quoted ? field : std::string(trim(field)));
  return fields;
}

Tid13Name parse_tid13_name(std::string_view file_name, std::size_t line_number) {
  const std::string name = lower(trim(file_name));
  const std::string stem = fs::path(name).stem().string();
  // iRR_TT_L
  const auto first = stem.find('_');
  const auto second = first == std::string::npos ? first : stem.find('_', first + 1);
  if (stem.size() < 2 || stem[0] != 'i' || second == std::string::npos) {
    throw ParseError("not a TID2013 image name: '" + std::string(file_name) + "'", line_number);
  }
  Tid13Name out;
  out.reference_id = stem.substr(0, first);
  const auto type = parse_number<int>(std::string_view(stem).substr(first + 1, second - first - 1));
  const auto level = parse_number<int>(std::string_view(stem).substr(second + 1));
  if (!type || !level || *type < 1 || *type > 24 || *level < 1 || *level > 5 ||
      !parse_number<int>(std::string_view(out.reference_id).substr(1))) {
    throw ParseError("not a TID2013 image name: '" + std::string(file_name) + "'", line_number);
  }
  out.type = *type;
  out.level = *level;
  return out;
}

std::string_view tid13_type_name(int type) { return tid13_type(type).name; }
Category tid13_category(int type) { return tid13_type(type).category; }

ManifestLoad load_csv_manifest(const fs::path& path) {
  const auto lines = read_lines(path);
  ManifestLoad out;
  const fs::path base = path.parent_path();

  std::size_t header_line = 0;
  while (header_line < lines.size() && trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) {
    out.warnings.push_back("manifest " + path.string() + " is empty");
    return out;
  }
  const auto header = split_csv_line(lines[header_line], header_line + 1);
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[lower(header[i])] = i;
  for (const char* required : {"ref", "dist", "mos"}) {
    if (!column.contains(required)) {
      throw ParseError(std::string("manifest header lacks column '") + required + "'",
                       header_line + 1);
    }
  }
  auto field = [&column](const std::vector<std::string>& row, const char* name) -> std::string {
    const auto it = column.find(name);
    if (it == column.end() || it->second >= row.size()) return {};
    return row[it->second];
  };

  for (std::size_t i = header_line + 1; i < lines.size(); ++i) {
    const std::size_t line_number = i + 1;
    if (trim(lines[i]).empty()) continue;
    const auto row = split_csv_line(lines[i], line_number);
    if (row.size() > header.size()) {
      throw ParseError("row has " + std::to_string(row.size()) + " fields, header has " +
                           std::to_string(header.size()),
                       line_number);
    }
    SubjectiveRecord rec;
    rec.reference_id = field(row, "ref");
    const std::string dist = field(row, "dist");
    if (rec.reference_id.empty() || dist.empty()) {
      throw ParseError("ref and dist must be non-empty", line_number);
    }
    rec.reference_path = base / fs::path(rec.reference_id);
    rec.distorted_path = base / fs::path(dist);
    rec.distortion_type = field(row, "type");

    const auto mos = parse_number<double>(field(row, "mos"));
    if (!mos || !std::isfinite(*mos)) throw ParseError("mos is not a finite number", line_number);
    rec.mos = *mos;

    if (const std::string s = field(row, "level"); !trim(s).empty()) {
      rec.distortion_level = parse_number<int>(s);
      if (!rec.distortion_level) throw ParseError("level is not an integer", line_number);
    }
    if (const std::string s = field(row, "mos_std"); !trim(s).empty()) {
      rec.mos_std = parse_number<double>(s);
      if (!rec.mos_std || !std::isfinite(*rec.mos_std) || *rec.mos_std < 0.0) {
        throw ParseError("mos_std is not a non-negative number", line_number);
      }
    }
    if (const std::string s = field(row, "votes"); !trim(s).empty()) {
      rec.vote_count = parse_number<int>(s);
      if (!rec.vote_count || *rec.vote_count < 1) {
        throw ParseError("votes must be an integer >= 1", line_number);
      }
    }
    if (const std::string s = field(row, "category"); !trim(s).empty()) {
      rec.category = parse_category(s);
      if (!rec.category) throw ParseError("unknown category '" + s + "'", line_number);
    }

    std::error_code ec;
    bool missing = false;
    for (const auto& p : {rec.reference_path, rec.distorted_path}) {
      if (!fs::exists(p, ec)) {
        out.missing.push_back(p.string());
        missing = true;
      }
    }
    if (!missing) out.records.push_back(std::move(rec));
  }
  if (out.records.empty() && out.missing.empty()) {
    out.warnings.push_back("manifest " + path.string() + " has no records");
  }
  return out;
}

ManifestLoad load_tid13(const fs::path& dir) {
  const auto lines = read_lines(dir / "mos_with_names.txt");
  std::vector<std::string> std_lines;
  std::error_code ec;
  if (fs::exists(dir / "mos_std.txt", ec)) std_lines = read_lines(dir / "mos_std.txt");
  std::erase_if(std_lines, [](const std::string& l) { return trim(l).empty(); });

  ManifestLoad out;
  std::map<std::string, std::optional<fs::path>> reference_cache;
  std::size_t row = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_number = i + 1;
    const std::string_view line = trim(lines[i]);
    if (line.empty()) continue;
    const auto space = line.find_first_of(" \t");
    if (space == std::string_view::npos) {
      throw ParseError("expected '<mos> <image name>'", line_number);
    }
    const auto mos = parse_number<double>(line.substr(0, space));
    if (!mos) throw ParseError("mos is not a number", line_number);
    const std::string_view name = trim(line.substr(space + 1));
    const Tid13Name parsed = parse_tid13_name(name, line_number);

    SubjectiveRecord rec;
    rec.reference_id = parsed.reference_id;
    rec.distortion_type = std::string(tid13_type_name(parsed.type));
    rec.distortion_level = parsed.level;
    rec.category = tid13_category(parsed.type);
    rec.mos = *mos;
    if (row < std_lines.size()) {
      rec.mos_std = parse_number<double>(std_lines[row]);
      if (!rec.mos_std) throw ParseError("mos_std.txt value is not a number", row + 1);
    }
    ++row;

    const auto dist = resolve_image(dir / "distorted_images", fs::path(name).stem().string());
    auto [it, inserted] = reference_cache.try_emplace(parsed.reference_id);
    if (inserted) it->second = resolve_image(dir / "reference_images", parsed.reference_id);
    if (!dist) out.missing.push_back((dir / "distorted_images" / name).string());
    if (inserted && !it->second) {
      out.missing.push_back((dir / "reference_images" / parsed.reference_id).string());
    }
    if (!dist || !it->second) continue;
    rec.distorted_path = *dist;
    rec.reference_path = *it->second;
    out.records.push_back(std::move(rec));
  }
  if (!std_lines.empty() && std_lines.size() < row) {
    out.warnings.push_back("mos_std.txt has fewer rows than mos_with_names.txt");
  }
  if (lines.empty()) out.warnings.push_back("TID2013 listing is empty");
  return out;
}

ManifestLoad load_manifest(const fs::path& path) {
  std::error_code ec;
  if (fs::is_directory(path, ec)) return load_tid13(path);
  if (!fs::exists(path, ec)) throw IoError("manifest not found: " + path.string());
  if (lower(path.filename().string()) == "mos_with_names.txt") return load_tid13(path.parent_path());
  return load_csv_manifest(path);
}

}  // namespace summer
