#pragma once

#include <cstdint>
#include <vector>

#include "sgmsup/raster.hpp"

namespace sgmsup {

/// Per-pixel census descriptors. Bit k of a descriptor is set iff the k-th
/// window neighbour (row-major over the window, centre skipped) is strictly
/// darker than the centre pixel.
struct CensusImage {
  int width = 0;
  int height = 0;
  int window_w = 0;
  int window_h = 0;
  std::vector<std::uint64_t> descriptors;

  int bit_length() const { return window_w * window_h - 1; }
  std::uint64_t at(int x, int y) const {
    return descriptors[static_cast<std::size_t>(y) * width + x];
  }
};

/// Matching cost C(x, d) stored as [y][x][d - d_min].
struct CostVolume {
  int width = 0;
  int height = 0;
  int d_min = 0;
  int d_max = 0;
  /// Upper bound of every entry; out-of-range disparities are assigned it.
  int max_cost = 0;
  std::vector<std::uint8_t> costs;

  CostVolume() = default;
  CostVolume(int w, int h, int dmin, int dmax, int max_c);

  int disparities() const { return d_max - d_min + 1; }
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * disparities();
  }
  std::uint8_t at(int x, int y, int d) const {
    return costs[offset(x, y) + (d - d_min)];
  }
  std::uint8_t& at(int x, int y, int d) { return costs[offset(x, y) + (d - d_min)]; }

  bool operator==(const CostVolume&) const = default;
};

struct CensusWindow {
  int width = 9;
  int height = 7;
};

/// Census transform with edge-replicated borders.
/// Throws InvalidArgument for even windows, windows above 64 bits, or
/// windows larger than the image.
CensusImage census_transform(const GrayImage& img, CensusWindow window = {});

/// Which image the disparity is measured from.
enum class Reference {
  /// C(x, d) = H(left(x), right(x - d)).
  kLeft,
  /// C(x, d) = H(right(x), left(x + d)).
  kRight,
};

/// Hamming-distance cost volume. Disparities whose match falls outside the
/// other image receive the descriptor bit length.
CostVolume build_cost_volume(const CensusImage& left, const CensusImage& right,
                             int d_min, int d_max,
                             Reference reference = Reference::kLeft);

namespace reference {

/// Serial implementations of the kernels above, kept as the baseline for
/// equivalence tests and benchmarks.
CensusImage census_transform(const GrayImage& img, CensusWindow window = {});
CostVolume build_cost_volume(const CensusImage& left, const CensusImage& right,
                             int d_min, int d_max,
                             Reference reference = Reference::kLeft);

}  // namespace reference

namespace detail {
void check_census_args(const GrayImage& img, CensusWindow window);
void check_cost_args(const CensusImage& left, const CensusImage& right,
                     int d_min, int d_max);
}  // namespace detail

}  // namespace sgmsup
