#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "sgmsup/census.hpp"
#include "sgmsup/raster.hpp"

namespace sgmsup {

/// Scanline step r = (dx, dy); the predecessor of pixel x is x - r.
struct Offset {
  int dx = 0;
  int dy = 0;
  auto operator<=>(const Offset&) const = default;
};

std::vector<Offset> four_directions();
std::vector<Offset> eight_directions();

struct SgmParams {
  int p1 = 10;
  int p2 = 120;
  std::vector<Offset> directions = eight_directions();
  bool subpixel = true;
  /// Left-right check tolerance in disparity units; nullopt disables it.
  std::optional<double> lr_tolerance = 1.0;

  /// Requires p2 >= p1 >= 0 and a non-empty, duplicate-free subset of the
  /// 8-neighbourhood.
  void validate() const;
};

/// Per-pixel, per-disparity accumulated cost laid out like CostVolume.
/// Holds either one path L_r or the sum S over all paths.
struct AggregatedVolume {
  int width = 0;
  int height = 0;
  int d_min = 0;
  int d_max = 0;
  std::vector<std::uint32_t> values;

  AggregatedVolume() = default;
  AggregatedVolume(int w, int h, int dmin, int dmax);

  int disparities() const { return d_max - d_min + 1; }
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width + x) * disparities();
  }
  std::uint32_t at(int x, int y, int d) const {
    return values[offset(x, y) + (d - d_min)];
  }
  bool operator==(const AggregatedVolume&) const = default;
};

/// Largest value an aggregated entry may reach. Entries of one path are
/// bounded by max_cost + p2, so the sum over R paths is bounded by
/// R * (max_cost + p2); aggregation refuses parameters that could exceed
/// 2^24, which keeps every sum exact in the uint32 accumulator and in the
/// float energy map.
inline constexpr std::uint64_t kMaxAggregatedValue = std::uint64_t{1} << 24;

/// Throws InvalidArgument when R * (max_cost + p2) exceeds kMaxAggregatedValue.
void check_accumulator_bound(const CostVolume& cost, const SgmParams& params);

/// Single-path recurrence L_r(x, d). Pixels whose predecessor x - r lies
/// outside the image start the path with L_r = C.
AggregatedVolume aggregate_path(const CostVolume& cost, Offset direction,
                                int p1, int p2);

/// S(x, d) = sum over the configured directions of L_r(x, d).
AggregatedVolume aggregate(const CostVolume& cost, const SgmParams& params);

struct WtaResult {
  FloatRaster disparity;
  /// min_d S(x, d), i.e. S at the integer winner.
  FloatRaster energy;
};

/// Winner-take-all with ties resolved toward the smaller disparity. With
/// `params.subpixel`, interior winners are refined by a parabola through
/// the three neighbouring sums.
WtaResult wta_disparity(const AggregatedVolume& agg, const SgmParams& params);

/// Integer per-pixel argmin of the raw matching cost (no aggregation).
FloatRaster wta_cost(const CostVolume& cost);

/// Vertex offset of the parabola through (-1, a), (0, b), (1, c).
double parabola_offset(double a, double b, double c);

/// Validity mask of a left-right check: x is kept iff both disparities are
/// valid, x - round(d_L(x)) lies inside the image and
/// |d_L(x) - d_R(x - round(d_L(x)))| <= tolerance.
ConfidenceMask lr_consistency(const FloatRaster& left_disp,
                              const FloatRaster& right_disp, double tolerance);

/// Invalidates every pixel of `raster` whose mask bit is clear.
void apply_validity(FloatRaster& raster, const ConfidenceMask& validity);

/// Smoothness energy of a labelling over the 8-neighbourhood, each unordered
/// pair counted once: sum C(x, D(x)) + P1 [|D(x) - D(q)| = 1] +
/// P2 [|D(x) - D(q)| > 1]. Disparities are rounded to integers; invalid
/// pixels and pairs touching them are skipped.
std::int64_t global_energy(const FloatRaster& disp, const CostVolume& cost,
                           const SgmParams& params);

namespace reference {

AggregatedVolume aggregate_path(const CostVolume& cost, Offset direction,
                                int p1, int p2);
AggregatedVolume aggregate(const CostVolume& cost, const SgmParams& params);

}  // namespace reference

}  // namespace sgmsup
