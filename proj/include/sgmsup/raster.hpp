#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace sgmsup {

/// Single-band intensity image, row-major. Samples are finite and >= 0.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<float> samples;

  GrayImage() = default;
  GrayImage(int w, int h, float fill = 0.0f);

  std::size_t size() const { return samples.size(); }
  float at(int x, int y) const { return samples[index(x, y)]; }
  float& at(int x, int y) { return samples[index(x, y)]; }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }

  /// Throws InvalidArgument when the invariants do not hold.
  void validate() const;

  bool operator==(const GrayImage&) const = default;
};

/// Real-valued raster with a per-pixel validity flag.
///
/// Invalid pixels hold a quiet NaN in `samples` so that they are encoded
/// as NaN when written to PFM; `valid` is the authoritative in-memory flag.
struct FloatRaster {
  int width = 0;
  int height = 0;
  std::vector<float> samples;
  std::vector<std::uint8_t> valid;

  static constexpr float kInvalid = std::numeric_limits<float>::quiet_NaN();

  FloatRaster() = default;
  FloatRaster(int w, int h, float fill = 0.0f);

  std::size_t size() const { return samples.size(); }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }
  float at(int x, int y) const { return samples[index(x, y)]; }
  bool is_valid(std::size_t i) const { return valid[i] != 0; }
  bool is_valid(int x, int y) const { return valid[index(x, y)] != 0; }

  void set(std::size_t i, float v) {
    samples[i] = v;
    valid[i] = 1;
  }
  void set(int x, int y, float v) { set(index(x, y), v); }
  void invalidate(std::size_t i) {
    samples[i] = kInvalid;
    valid[i] = 0;
  }
  void invalidate(int x, int y) { invalidate(index(x, y)); }

  std::size_t valid_count() const;

  /// Throws InvalidArgument when the invariants do not hold.
  void validate() const;
};

/// Bitwise equality of samples and validity (NaN payloads compared as bits).
bool identical(const FloatRaster& a, const FloatRaster& b);

enum class MaskKind { kEnergy, kEdge, kValidity };

/// Boolean raster selecting pixels for supervision.
struct ConfidenceMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;
  MaskKind kind = MaskKind::kValidity;

  ConfidenceMask() = default;
  ConfidenceMask(int w, int h, bool fill, MaskKind k);

  std::size_t size() const { return bits.size(); }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }
  bool test(std::size_t i) const { return bits[i] != 0; }
  bool test(int x, int y) const { return bits[index(x, y)] != 0; }
  void assign(int x, int y, bool v) { bits[index(x, y)] = v ? 1 : 0; }

  bool same_bits(const ConfidenceMask& o) const {
    return width == o.width && height == o.height && bits == o.bits;
  }
};

template <typename A, typename B>
bool same_shape(const A& a, const B& b) {
  return a.width == b.width && a.height == b.height;
}

/// Throws InvalidArgument naming `what` when the shapes differ.
template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what);

}  // namespace sgmsup

#include "sgmsup/raster_inl.hpp"
