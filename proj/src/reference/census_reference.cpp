#include <algorithm>
#include <bit>

#include "sgmsup/census.hpp"

namespace sgmsup::reference {

CensusImage census_transform(const GrayImage& img, CensusWindow window) {
  detail::check_census_args(img, window);
  const int rx = window.width / 2;
  const int ry = window.height / 2;
  CensusImage out{img.width, img.height, window.width, window.height,
                  std::vector<std::uint64_t>(img.size(), 0)};
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const float centre = img.at(x, y);
      std::uint64_t desc = 0;
      int bit = 0;
      for (int dy = -ry; dy <= ry; ++dy) {
        for (int dx = -rx; dx <= rx; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int sx = std::clamp(x + dx, 0, img.width - 1);
          const int sy = std::clamp(y + dy, 0, img.height - 1);
          if (img.at(sx, sy) < centre) desc |= std::uint64_t{1} << bit;
          ++bit;
        }
      }
      out.descriptors[img.index(x, y)] = desc;
    }
  }
  return out;
}

CostVolume build_cost_volume(const CensusImage& left, const CensusImage& right,
                             int d_min, int d_max, Reference reference) {
  detail::check_cost_args(left, right, d_min, d_max);
  const int bits = left.bit_length();
  CostVolume vol(left.width, left.height, d_min, d_max, bits);
  for (int y = 0; y < left.height; ++y) {
    for (int x = 0; x < left.width; ++x) {
      for (int d = d_min; d <= d_max; ++d) {
        const int xo = reference == Reference::kLeft ? x - d : x + d;
        if (xo < 0 || xo >= left.width) {
          vol.at(x, y, d) = static_cast<std::uint8_t>(bits);
          continue;
        }
        const std::uint64_t a =
            reference == Reference::kLeft ? left.at(x, y) : right.at(x, y);
        const std::uint64_t b =
            reference == Reference::kLeft ? right.at(xo, y) : left.at(xo, y);
        vol.at(x, y, d) = static_cast<std::uint8_t>(std::popcount(a ^ b));
      }
    }
  }
  return vol;
}

}  // namespace sgmsup::reference
