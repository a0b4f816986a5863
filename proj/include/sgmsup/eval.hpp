#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgmsup/raster.hpp"

namespace sgmsup {

struct RmseResult {
  double rmse = 0.0;
  std::size_t pixels = 0;
  /// Pixels dropped because either raster is invalid there (mask-excluded
  /// pixels are not counted).
  std::size_t excluded = 0;
};

/// Root mean square of candidate - truth over mutually valid pixels,
/// optionally restricted to `mask`. Throws EmptyMaskError if nothing is left.
RmseResult rmse(const FloatRaster& candidate, const FloatRaster& truth,
                const ConfidenceMask* mask = nullptr);

/// after - before; negative means the error dropped.
double delta(double before, double after);

/// Moves the raster content by an integer offset: out(x, y) = in(x - dx, y - dy).
/// Pixels with no source become invalid.
FloatRaster shift(const FloatRaster& raster, int dx, int dy);

struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
};

/// `samples` bilinear samples at evenly spaced stations from p0 to p1
/// (pixel-centre coordinates). A sample touching an invalid pixel with
/// non-zero weight is NaN.
std::vector<double> profile(const FloatRaster& raster, PixelPoint p0, PixelPoint p1,
                            int samples);

/// height = gain * disparity + offset; invalid pixels stay invalid.
FloatRaster disp_to_height(const FloatRaster& disp, double gain, double offset);

struct MethodPair {
  std::string before;
  std::string after;
};

struct SiteRow {
  std::string site;
  /// (method, RMSE) in column order.
  std::vector<std::pair<std::string, double>> rmse;
  /// Optional valid-pixel counts, same order as `rmse`.
  std::vector<std::size_t> valid_pixels;
};

struct EvalReport {
  std::vector<std::string> methods;
  std::vector<MethodPair> comparisons;

  struct Row {
    std::string site;
    std::vector<double> rmse;    // per method
    std::vector<double> deltas;  // per comparison
    std::vector<std::size_t> valid_pixels;
  };
  std::vector<Row> rows;
  /// Column means over the site rows (the delta entries are means of the
  /// per-site deltas).
  Row average;
};

/// Builds the RMSE table with one delta column per comparison and an
/// average row. All rows must list the same methods in the same order.
EvalReport build_table(const std::vector<SiteRow>& rows,
                       const std::vector<MethodPair>& comparisons);

nlohmann::ordered_json to_json(const EvalReport& report);

/// Long-format CSV with header "site,method,rmse,delta". The delta column is
/// filled on the "after" method of each comparison.
std::string to_csv(const EvalReport& report);

/// "station,value" CSV; NaN samples are written as "nan".
std::string profile_csv(const std::vector<double>& values);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

}  // namespace sgmsup
