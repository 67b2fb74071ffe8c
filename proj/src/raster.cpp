#include "summer/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "summer/error.hpp"

namespace summer {

RasterImage::RasterImage(std::array<Plane, 3> planes) : planes_(std::move(planes)) {
  if (!planes_[0].same_shape(planes_[1]) || !planes_[0].same_shape(planes_[2])) {
    throw ShapeError("RasterImage planes must share dimensions");
  }
}

namespace {

constexpr double kInv255 = 1.0 / 255.0;

std::string printable_header(std::span<const unsigned char> bytes) {
  std::string out;
  for (std::size_t i = 0; i < bytes.size() && i < 16; ++i) {
    const unsigned char c = bytes[i];
    if (std::isprint(c)) {
      out += static_cast<char>(c);
    } else {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\x%02x", c);
      out += buf;
    }
  }
  return out;
}

// Parses the whitespace/comment separated integer fields of a netpbm header.
class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  long next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw FormatError("malformed PPM header: '" + printable_header(bytes_) + "'");
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000'000) throw FormatError("PPM header value out of range");
      ++pos_;
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw FormatError("malformed PPM header: '" + printable_header(bytes_) + "'");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 2;
};

RasterImage decode_ppm(std::span<const unsigned char> bytes) {
  PnmHeaderReader reader(bytes);
  const long width = reader.next_int();
  const long height = reader.next_int();
  const long maxval = reader.next_int();
  const std::size_t offset = reader.raster_offset();
  if (maxval != 255) {
    throw FormatError("unsupported PPM maxval " + std::to_string(maxval) + " in header '" +
                      printable_header(bytes) + "' (only 255 is supported)");
  }
  if (width <= 0 || height <= 0) {
    throw FormatError("PPM with empty raster: '" + printable_header(bytes) + "'");
  }
  const std::size_t w = static_cast<std::size_t>(width);
  const std::size_t h = static_cast<std::size_t>(height);
  if (bytes.size() - offset < w * h * 3) {
    throw FormatError("truncated PPM raster: expected " + std::to_string(w * h * 3) +
                      " bytes, found " + std::to_string(bytes.size() - offset));
  }
  RasterImage img(w, h);
  const unsigned char* src = bytes.data() + offset;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      for (std::size_t ch = 0; ch < 3; ++ch) {
        img.plane(ch).at(r, c) = *src++ * kInv255;
      }
    }
  }
  return img;
}

struct PngMemoryReader {
  std::span<const unsigned char> bytes;
  std::size_t pos = 0;
};

struct PngErrorState {
  std::jmp_buf jump;
  char message[256] = {};
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
  auto* reader = static_cast<PngMemoryReader*>(png_get_io_ptr(png));
  if (reader->bytes.size() - reader->pos < count) {
    png_error(png, "truncated PNG stream");
  }
  std::memcpy(out, reader->bytes.data() + reader->pos, count);
  reader->pos += count;
}

void png_error_to_jump(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof(state->message), "%s", msg);
  std::longjmp(state->jump, 1);
}

void png_ignore_warning(png_structp, png_const_charp) {}

struct PngDecode {
  PngErrorState err;
  PngMemoryReader reader;
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  std::string unsupported;
};

// Every piece of state touched after setjmp lives behind `d`, so nothing is
// left in a stale register when libpng longjmps back.
bool run_png_decode(PngDecode* d) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &d->err, png_error_to_jump,
                                           png_ignore_warning);
  if (png == nullptr) {
    std::snprintf(d->err.message, sizeof(d->err.message), "libpng initialization failed");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (setjmp(d->err.jump)) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  if (info == nullptr) png_error(png, "info allocation failed");
  png_set_read_fn(png, &d->reader, png_read_from_memory);
  png_read_info(png, info);
  int bit_depth = 0;
  int color_type = 0;
  png_get_IHDR(png, info, &d->width, &d->height, &bit_depth, &color_type, nullptr, nullptr,
               nullptr);
  const bool palette = color_type == PNG_COLOR_TYPE_PALETTE;
  if (bit_depth != 8 && !palette) {
    d->unsupported = "unsupported PNG bit depth " + std::to_string(bit_depth) +
                     " (IHDR color type " + std::to_string(color_type) +
                     "); only 8-bit is supported";
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
  }
  if (palette) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  // Alpha is dropped, never composited.
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  if (stride != static_cast<std::size_t>(d->width) * 3) {
    png_error(png, "unexpected row layout after conversion");
  }
  d->pixels.resize(stride * d->height);
  d->rows.resize(d->height);
  for (png_uint_32 r = 0; r < d->height; ++r) d->rows[r] = d->pixels.data() + r * stride;
  png_read_image(png, d->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

RasterImage decode_png(std::span<const unsigned char> bytes) {
  auto d = std::make_unique<PngDecode>();
  d->reader = PngMemoryReader{bytes, 0};
  if (!run_png_decode(d.get())) {
    throw FormatError(std::string("PNG decode failed: ") + d->err.message);
  }
  if (!d->unsupported.empty()) throw FormatError(d->unsupported);

  RasterImage img(d->width, d->height);
  const unsigned char* src = d->pixels.data();
  for (std::size_t r = 0; r < d->height; ++r) {
    for (std::size_t c = 0; c < d->width; ++c) {
      for (std::size_t ch = 0; ch < 3; ++ch) {
        img.plane(ch).at(r, c) = *src++ * kInv255;
      }
    }
  }
  return img;
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::string& header,
                const std::vector<unsigned char>& payload) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

unsigned char to_byte(double v) {
  const double scaled = std::clamp(v, 0.0, 1.0) * 255.0;
  return static_cast<unsigned char>(std::lround(scaled));
}

}  // namespace

RasterImage decode_image(std::span<const unsigned char> bytes) {
  static constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(bytes.begin(), bytes.begin() + 8, kPngSignature)) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return decode_ppm(bytes);
  }
  throw FormatError("unsupported image format, header '" + printable_header(bytes) +
                    "' (expected binary PPM P6 or PNG)");
}

RasterImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_ppm(const RasterImage& img, const std::filesystem::path& path) {
  std::vector<unsigned char> payload;
  payload.reserve(img.width() * img.height() * 3);
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      for (std::size_t ch = 0; ch < 3; ++ch) payload.push_back(to_byte(img.plane(ch).at(r, c)));
    }
  }
  write_file(path,
             "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n",
             payload);
}

Plane to_grayscale(const RasterImage& img) {
  Plane out(img.width(), img.height());
  const auto r = img.plane(Channel::kRed).samples();
  const auto g = img.plane(Channel::kGreen).samples();
  const auto b = img.plane(Channel::kBlue).samples();
  auto dst = out.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  }
  return out;
}

std::vector<unsigned char> plane_map_bytes(const Plane& p, bool normalize) {
  std::vector<unsigned char> bytes(p.size(), 0);
  const auto s = p.samples();
  if (!normalize) {
    std::transform(s.begin(), s.end(), bytes.begin(), to_byte);
    return bytes;
  }
  if (s.empty()) return bytes;
  const auto [lo_it, hi_it] = std::minmax_element(s.begin(), s.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return bytes;
  const double scale = 255.0 / (hi - lo);
  for (std::size_t i = 0; i < s.size(); ++i) {
    // std::lround rounds half away from zero.
    bytes[i] = static_cast<unsigned char>(std::clamp(std::lround((s[i] - lo) * scale), 0L, 255L));
  }
  return bytes;
}

void save_plane_map(const Plane& p, const std::filesystem::path& path, bool normalize) {
  write_file(path,
             "P5\n" + std::to_string(p.width()) + " " + std::to_string(p.height()) + "\n255\n",
             plane_map_bytes(p, normalize));
}

}  // namespace summer
