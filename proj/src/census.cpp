#include "sgmsup/census.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "sgmsup/error.hpp"

namespace sgmsup {

CostVolume::CostVolume(int w, int h, int dmin, int dmax, int max_c)
    : width(w), height(h), d_min(dmin), d_max(dmax), max_cost(max_c),
      costs(static_cast<std::size_t>(w) * h * (dmax - dmin + 1), 0) {}

namespace detail {

void check_census_args(const GrayImage& img, CensusWindow window) {
  img.validate();
  if (window.width < 1 || window.height < 1 || window.width % 2 == 0 ||
      window.height % 2 == 0) {
    throw InvalidArgument("census window dimensions must be odd and positive");
  }
  if (window.width * window.height - 1 > 64) {
    throw InvalidArgument("census window " + std::to_string(window.width) + "x" +
                          std::to_string(window.height) +
                          " does not fit a 64-bit descriptor");
  }
  if (window.width > img.width || window.height > img.height) {
    throw InvalidArgument("census window larger than the image");
  }
}

void check_cost_args(const CensusImage& left, const CensusImage& right,
                     int d_min, int d_max) {
  if (left.width != right.width || left.height != right.height) {
    throw InvalidArgument("cost volume: census image dimension mismatch");
  }
  if (left.window_w != right.window_w || left.window_h != right.window_h) {
    throw InvalidArgument("cost volume: census window mismatch");
  }
  if (d_min > d_max) throw InvalidArgument("cost volume: empty disparity range");
}

}  // namespace detail

CensusImage census_transform(const GrayImage& img, CensusWindow window) {
  detail::check_census_args(img, window);
  const int rx = window.width / 2;
  const int ry = window.height / 2;
  const int w = img.width;
  const int h = img.height;

  // Edge-replicated padding so the inner loop needs no clamping.
  const int pw = w + 2 * rx;
  const int ph = h + 2 * ry;
  std::vector<float> padded(static_cast<std::size_t>(pw) * ph);
#pragma omp parallel for schedule(static)
  for (int py = 0; py < ph; ++py) {
    const int sy = std::clamp(py - ry, 0, h - 1);
    for (int px = 0; px < pw; ++px) {
      const int sx = std::clamp(px - rx, 0, w - 1);
      padded[static_cast<std::size_t>(py) * pw + px] =
          img.samples[static_cast<std::size_t>(sy) * w + sx];
    }
  }

  CensusImage out{w, h, window.width, window.height,
                  std::vector<std::uint64_t>(img.size(), 0)};
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float centre = padded[static_cast<std::size_t>(y + ry) * pw + x + rx];
      std::uint64_t desc = 0;
      int bit = 0;
      for (int j = 0; j < window.height; ++j) {
        const float* row = &padded[static_cast<std::size_t>(y + j) * pw + x];
        for (int i = 0; i < window.width; ++i) {
          if (j == ry && i == rx) continue;
          if (row[i] < centre) desc |= std::uint64_t{1} << bit;
          ++bit;
        }
      }
      out.descriptors[static_cast<std::size_t>(y) * w + x] = desc;
    }
  }
  return out;
}

CostVolume build_cost_volume(const CensusImage& left, const CensusImage& right,
                             int d_min, int d_max, Reference reference) {
  detail::check_cost_args(left, right, d_min, d_max);
  const int bits = left.bit_length();
  CostVolume vol(left.width, left.height, d_min, d_max, bits);
  const int w = left.width;
  const int nd = vol.disparities();
  const CensusImage& base = reference == Reference::kLeft ? left : right;
  const CensusImage& other = reference == Reference::kLeft ? right : left;
  const int sign = reference == Reference::kLeft ? -1 : 1;

#pragma omp parallel for schedule(static)
  for (int y = 0; y < left.height; ++y) {
    const std::uint64_t* brow = &base.descriptors[static_cast<std::size_t>(y) * w];
    const std::uint64_t* orow = &other.descriptors[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) {
      std::uint8_t* cell = &vol.costs[vol.offset(x, y)];
      const std::uint64_t d0 = brow[x];
      for (int k = 0; k < nd; ++k) {
        const int xo = x + sign * (d_min + k);
        cell[k] = (xo < 0 || xo >= w)
                      ? static_cast<std::uint8_t>(bits)
                      : static_cast<std::uint8_t>(std::popcount(d0 ^ orow[xo]));
      }
    }
  }
  return vol;
}

}  // namespace sgmsup
