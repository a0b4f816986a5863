#include "sgmsup/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sgmsup/error.hpp"

namespace sgmsup {

void EdgeParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("edge sigma must be > 0");
  }
  if (!(low_threshold >= 0.0) || !(high_threshold >= low_threshold)) {
    throw InvalidArgument("edge thresholds must satisfy high >= low >= 0");
  }
  if (dilation_radius < 0) throw InvalidArgument("dilation radius must be >= 0");
}

ConfidenceMask energy_mask(const FloatRaster& energy, double threshold) {
  ConfidenceMask mask(energy.width, energy.height, false, MaskKind::kEnergy);
  for (std::size_t i = 0; i < energy.size(); ++i) {
    mask.bits[i] = energy.is_valid(i) && energy.samples[i] < threshold ? 1 : 0;
  }
  return mask;
}

int gaussian_radius(double sigma) {
  return std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
}

namespace {

using Plane = std::vector<double>;

// Sobel responses with replicated borders. Integer-valued inputs give exact
// results, so constant offsets cancel exactly.
void sobel(const GrayImage& img, Plane& gx, Plane& gy) {
  const int w = img.width;
  const int h = img.height;
  gx.assign(img.size(), 0.0);
  gy.assign(img.size(), 0.0);
  const auto px = [&](int x, int y) -> double {
    return img.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
  };
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double right = px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1);
      const double left = px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1);
      const double down = px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1);
      const double up = px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1);
      gx[img.index(x, y)] = right - left;
      gy[img.index(x, y)] = down - up;
    }
  }
}

// Separable Gaussian. Taps at +k and -k are added before weighting so that
// mirror-symmetric inputs produce bit-identical mirrored outputs.
void smooth(Plane& p, int w, int h, const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size()) - 1;
  Plane tmp(p.size());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const double* row = &p[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) {
      double acc = taps[0] * row[x];
      for (int k = 1; k <= r; ++k) {
        acc += taps[k] * (row[std::max(x - k, 0)] + row[std::min(x + k, w - 1)]);
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = taps[0] * tmp[static_cast<std::size_t>(y) * w + x];
      for (int k = 1; k <= r; ++k) {
        const int ya = std::max(y - k, 0);
        const int yb = std::min(y + k, h - 1);
        acc += taps[k] * (tmp[static_cast<std::size_t>(ya) * w + x] +
                          tmp[static_cast<std::size_t>(yb) * w + x]);
      }
      p[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
}

std::vector<double> gaussian_taps(double sigma) {
  const int r = gaussian_radius(sigma);
  std::vector<double> taps(r + 1);
  double sum = 0.0;
  for (int k = 0; k <= r; ++k) {
    taps[k] = std::exp(-0.5 * k * k / (sigma * sigma));
    sum += k == 0 ? taps[k] : 2.0 * taps[k];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

}  // namespace

ConfidenceMask canny_edges(const GrayImage& img, const EdgeParams& params) {
  img.validate();
  params.validate();
  if (img.width < 3 || img.height < 3) {
    throw InvalidArgument("canny_edges: image must be at least 3x3");
  }
  const int r = gaussian_radius(params.sigma);
  if (img.width < 2 * r + 1 || img.height < 2 * r + 1) {
    throw InvalidArgument("canny_edges: image smaller than the " +
                          std::to_string(2 * r + 1) + "-pixel smoothing kernel");
  }
  const int w = img.width;
  const int h = img.height;

  Plane gx, gy;
  sobel(img, gx, gy);
  const auto taps = gaussian_taps(params.sigma);
  smooth(gx, w, h, taps);
  smooth(gy, w, h, taps);

  Plane mag(img.size());
  double max_mag = 0.0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    mag[i] = std::hypot(gx[i], gy[i]);
    max_mag = std::max(max_mag, mag[i]);
  }

  ConfidenceMask edges(w, h, false, MaskKind::kEdge);
  if (max_mag == 0.0) return edges;

  const double low = params.relative_thresholds ? params.low_threshold * max_mag
                                                : params.low_threshold;
  const double high = params.relative_thresholds ? params.high_threshold * max_mag
                                                 : params.high_threshold;

  const auto m_at = [&](int x, int y) -> double {
    if (x < 0 || x >= w || y < 0 || y >= h) return 0.0;
    return mag[static_cast<std::size_t>(y) * w + x];
  };
  // tan(22.5 deg) and tan(67.5 deg)
  constexpr double kTanLow = 0.41421356237309503;
  constexpr double kTanHigh = 2.414213562373095;

  // 0 = suppressed, 1 = weak, 2 = strong
  std::vector<std::uint8_t> cls(img.size(), 0);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const double m = mag[i];
      if (m <= 0.0 || m < low) continue;
      const double ax = std::abs(gx[i]);
      const double ay = std::abs(gy[i]);
      int nx, ny;
      if (ay <= kTanLow * ax) {
        nx = 1, ny = 0;
      } else if (ay >= kTanHigh * ax) {
        nx = 0, ny = 1;
      } else if ((gx[i] > 0) == (gy[i] > 0)) {
        nx = 1, ny = 1;
      } else {
        nx = 1, ny = -1;
      }
      // A plateau of two equal maxima keeps only its forward pixel.
      if (m >= m_at(x - nx, y - ny) && m > m_at(x + nx, y + ny)) {
        cls[i] = m >= high ? 2 : 1;
      }
    }
  }

  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (cls[i] == 2) {
      edges.bits[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(i % w);
    const int y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int qx = x + dx;
        const int qy = y + dy;
        if (qx < 0 || qx >= w || qy < 0 || qy >= h) continue;
        const std::size_t q = static_cast<std::size_t>(qy) * w + qx;
        if (cls[q] == 1 && !edges.bits[q]) {
          edges.bits[q] = 1;
          stack.push_back(q);
        }
      }
    }
  }
  return params.dilation_radius > 0 ? dilate(edges, params.dilation_radius) : edges;
}

ConfidenceMask dilate(const ConfidenceMask& mask, int radius) {
  if (radius < 0) throw InvalidArgument("dilation radius must be >= 0");
  if (radius == 0) return mask;
  const int w = mask.width;
  const int h = mask.height;
  // Separable: a square structuring element is a row max then a column max.
  std::vector<std::uint8_t> rows(mask.size(), 0);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint8_t v = 0;
      for (int k = std::max(0, x - radius); k <= std::min(w - 1, x + radius) && !v; ++k) {
        v = mask.bits[static_cast<std::size_t>(y) * w + k];
      }
      rows[static_cast<std::size_t>(y) * w + x] = v;
    }
  }
  ConfidenceMask out(w, h, false, mask.kind);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint8_t v = 0;
      for (int k = std::max(0, y - radius); k <= std::min(h - 1, y + radius) && !v; ++k) {
        v = rows[static_cast<std::size_t>(k) * w + x];
      }
      out.bits[static_cast<std::size_t>(y) * w + x] = v;
    }
  }
  return out;
}

void exclude_invalid(ConfidenceMask& mask, const FloatRaster& disparity) {
  require_same_shape(mask, disparity, "exclude_invalid");
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!disparity.is_valid(i)) mask.bits[i] = 0;
  }
}

MaskStats mask_stats(const ConfidenceMask& mask) {
  MaskStats s;
  s.total = mask.size();
  for (auto b : mask.bits) s.count += b != 0;
  s.fraction = s.total ? static_cast<double>(s.count) / static_cast<double>(s.total) : 0.0;
  return s;
}

}  // namespace sgmsup
