#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgmsup/raster.hpp"

namespace sgmsup {

/// 0.5 r^2 for |r| <= delta, delta (|r| - 0.5 delta) beyond.
double huber(double residual, double delta);

struct MaskedLoss {
  double mean = 0.0;
  std::size_t pixels = 0;
};

/// Mean Huber loss of pred - reference over pixels valid in both rasters.
/// Throws EmptyMaskError when no pixel contributes.
MaskedLoss masked_huber_loss(const FloatRaster& pred, const FloatRaster& reference,
                             double delta);
/// Same, restricted to the pixels selected by `mask`.
MaskedLoss masked_huber_loss(const FloatRaster& pred, const FloatRaster& reference,
                             const ConfidenceMask& mask, double delta);

struct LossWeights {
  double w1 = 0.1;
  double w2 = 0.45;
  double w3 = 0.45;
  double huber_delta = 1.0;

  void validate() const;
};

struct LossReport {
  double loss1 = 0.0;  // all mutually valid pixels
  double loss2 = 0.0;  // energy mask
  double loss3 = 0.0;  // edge mask
  double target_loss = 0.0;
  std::size_t pixels1 = 0;
  std::size_t pixels2 = 0;
  std::size_t pixels3 = 0;
  double energy_coverage = 0.0;
  double edge_coverage = 0.0;
  LossWeights weights;
};

/// The three masked Huber terms and their weighted sum
/// w1 * loss1 + w2 * loss2 + w3 * loss3.
LossReport target_loss(const FloatRaster& pred, const FloatRaster& census_disp,
                       const ConfidenceMask& energy_mask,
                       const ConfidenceMask& edge_mask, const LossWeights& weights);

/// Weighted sum of already computed terms, evaluated left to right.
double weighted_target(double loss1, double loss2, double loss3,
                       const LossWeights& weights);

/// Source-domain loss (computed by the trainer) plus the target loss.
double total_loss(double source_loss, double target_loss);

nlohmann::ordered_json to_json(const LossReport& report);

// ---- patch sets ------------------------------------------------------------

struct PatchOptions {
  int patch_width = 1248;
  int patch_height = 384;
  /// 0 selects the patch size (non-overlapping tiling).
  int stride_x = 0;
  int stride_y = 0;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;

  int effective_stride_x() const { return stride_x > 0 ? stride_x : patch_width; }
  int effective_stride_y() const { return stride_y > 0 ? stride_y : patch_height; }
  void validate() const;
};

enum class Split { kTrain, kTest };

struct PatchFiles {
  std::string left, right, disparity, energy, energy_mask, edge_mask;
};

struct PatchEntry {
  std::size_t index = 0;
  std::string tile;
  int x = 0;
  int y = 0;
  Split split = Split::kTrain;
  PatchFiles files;
};

struct PatchSet {
  PatchOptions options;
  std::vector<PatchEntry> entries;

  std::size_t count(Split s) const;
};

struct TileExtent {
  std::string id;
  int width = 0;
  int height = 0;
};

/// Tiles every extent row-major at the configured stride and assigns splits
/// with a seeded Fisher-Yates shuffle: round(train_fraction * n) patches go
/// to training. Deterministic for a given seed.
PatchSet plan_patches(std::span<const TileExtent> tiles, const PatchOptions& options);

/// Co-registered layers of one source tile.
struct RasterBundle {
  std::string tile_id = "tile";
  GrayImage left;
  GrayImage right;
  FloatRaster disparity;
  FloatRaster energy;
  ConfidenceMask energy_mask;
  ConfidenceMask edge_mask;

  /// Throws InvalidArgument when the six layers are not the same size.
  void validate() const;
};

GrayImage crop(const GrayImage& img, int x, int y, int w, int h);
FloatRaster crop(const FloatRaster& r, int x, int y, int w, int h);
ConfidenceMask crop(const ConfidenceMask& m, int x, int y, int w, int h);

/// Plans the patches, writes the six cropped layers of each patch into
/// `out_dir` and a `manifest.json` listing them. `provenance` is stored
/// under the "config" key of the manifest.
PatchSet emit_patches(std::span<const RasterBundle> bundles,
                      const PatchOptions& options,
                      const std::filesystem::path& out_dir,
                      const nlohmann::ordered_json& provenance = {});

nlohmann::ordered_json manifest_json(const PatchSet& set);

}  // namespace sgmsup
