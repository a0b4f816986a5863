#include "sgmsup/raster.hpp"

#include <cmath>
#include <cstring>

#include "sgmsup/error.hpp"

namespace sgmsup {

GrayImage::GrayImage(int w, int h, float fill)
    : width(w), height(h),
      samples(static_cast<std::size_t>(w > 0 ? w : 0) * (h > 0 ? h : 0), fill) {}

void GrayImage::validate() const {
  if (width < 1 || height < 1) {
    throw InvalidArgument("gray image must be at least 1x1");
  }
  if (samples.size() != static_cast<std::size_t>(width) * height) {
    throw InvalidArgument("gray image sample count does not match dimensions");
  }
  for (float v : samples) {
    if (!std::isfinite(v) || v < 0.0f) {
      throw InvalidArgument("gray image samples must be finite and >= 0");
    }
  }
}

FloatRaster::FloatRaster(int w, int h, float fill)
    : width(w), height(h),
      samples(static_cast<std::size_t>(w > 0 ? w : 0) * (h > 0 ? h : 0), fill),
      valid(samples.size(), 1) {}

std::size_t FloatRaster::valid_count() const {
  std::size_t n = 0;
  for (auto v : valid) n += v != 0;
  return n;
}

void FloatRaster::validate() const {
  if (width < 1 || height < 1) {
    throw InvalidArgument("raster must be at least 1x1");
  }
  const auto n = static_cast<std::size_t>(width) * height;
  if (samples.size() != n || valid.size() != n) {
    throw InvalidArgument("raster sample count does not match dimensions");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (valid[i] && !std::isfinite(samples[i])) {
      throw InvalidArgument("raster has a non-finite sample flagged valid");
    }
  }
}

bool identical(const FloatRaster& a, const FloatRaster& b) {
  if (!same_shape(a, b) || a.samples.size() != b.samples.size() ||
      a.valid != b.valid) {
    return false;
  }
  return a.samples.empty() ||
         std::memcmp(a.samples.data(), b.samples.data(),
                     a.samples.size() * sizeof(float)) == 0;
}

ConfidenceMask::ConfidenceMask(int w, int h, bool fill, MaskKind k)
    : width(w), height(h),
      bits(static_cast<std::size_t>(w > 0 ? w : 0) * (h > 0 ? h : 0),
           fill ? 1 : 0),
      kind(k) {}

}  // namespace sgmsup
