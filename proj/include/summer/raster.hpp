#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace summer {

// Row-major grid of real samples. Error maps and spectra live here, so the
// range is unbounded.
class Plane {
 public:
  Plane() = default;
  Plane(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), data_(width * height, fill) {}

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
  double at(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * width_, width_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * width_, width_}; }

  std::span<double> samples() { return data_; }
  std::span<const double> samples() const { return data_; }

  bool same_shape(const Plane& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const Plane&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

enum class Channel { kRed = 0, kGreen = 1, kBlue = 2 };

// Three equally sized planes (R, G, B) with samples in [0,1].
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(std::size_t width, std::size_t height, double fill = 0.0)
      : planes_{Plane(width, height, fill), Plane(width, height, fill),
                Plane(width, height, fill)} {}
  // Throws ShapeError when the planes disagree in size.
  explicit RasterImage(std::array<Plane, 3> planes);

  std::size_t width() const { return planes_[0].width(); }
  std::size_t height() const { return planes_[0].height(); }

  Plane& plane(std::size_t c) { return planes_[c]; }
  const Plane& plane(std::size_t c) const { return planes_[c]; }
  Plane& plane(Channel c) { return planes_[static_cast<std::size_t>(c)]; }
  const Plane& plane(Channel c) const { return planes_[static_cast<std::size_t>(c)]; }

  const std::array<Plane, 3>& planes() const { return planes_; }

  bool operator==(const RasterImage&) const = default;

 private:
  std::array<Plane, 3> planes_;
};

// Reads binary PPM (P6, maxval 255) or 8-bit PNG. Samples are raw / 255.
// Throws IoError or FormatError.
RasterImage load_image(const std::filesystem::path& path);

// Same as load_image, for an in-memory file.
RasterImage decode_image(std::span<const unsigned char> bytes);

// Writes binary PPM (P6). Samples are clamped to [0,1] and rounded to 8 bits.
void save_ppm(const RasterImage& img, const std::filesystem::path& path);

// BT.601 luma: 0.299 R + 0.587 G + 0.114 B.
Plane to_grayscale(const RasterImage& img);

// Writes an 8-bit binary PGM (P5). With normalize, [min,max] maps affinely
// onto [0,255] (round half away from zero); a constant plane becomes all
// zero. Without normalize, samples are clamped to [0,1] and scaled by 255.
void save_plane_map(const Plane& p, const std::filesystem::path& path, bool normalize);

// The byte payload save_plane_map would write for p (without the header).
std::vector<unsigned char> plane_map_bytes(const Plane& p, bool normalize);

}  // namespace summer
