#pragma once

#include <cstddef>

#include "sgmsup/raster.hpp"

namespace sgmsup {

/// Energy threshold below which a pixel is trusted.
inline constexpr double kDefaultEnergyThreshold = 2500.0;

/// Canny settings. With `relative_thresholds` the hysteresis thresholds are
/// fractions of the largest smoothed gradient magnitude in the image, which
/// makes the detector independent of the intensity scale.
struct EdgeParams {
  double sigma = 1.4;
  double low_threshold = 0.1;
  double high_threshold = 0.3;
  bool relative_thresholds = true;
  int dilation_radius = 1;

  void validate() const;
};

/// bit(x) = energy(x) < threshold; invalid pixels are excluded.
ConfidenceMask energy_mask(const FloatRaster& energy, double threshold);

/// Canny edges (Gaussian-smoothed Sobel gradients, non-maximum suppression
/// over four quantised directions, double-threshold hysteresis) dilated by
/// a square of radius `dilation_radius`.
ConfidenceMask canny_edges(const GrayImage& img, const EdgeParams& params = {});

/// Radius of the Gaussian kernel used by canny_edges.
int gaussian_radius(double sigma);

/// Binary dilation with a (2r+1) x (2r+1) square.
ConfidenceMask dilate(const ConfidenceMask& mask, int radius);

/// Clears every mask bit whose pixel is invalid in `disparity`.
void exclude_invalid(ConfidenceMask& mask, const FloatRaster& disparity);

struct MaskStats {
  std::size_t count = 0;
  std::size_t total = 0;
  double fraction = 0.0;
};

MaskStats mask_stats(const ConfidenceMask& mask);

}  // namespace sgmsup
