#pragma once

#include <cstdint>
#include <filesystem>

#include <json.hpp>

#include "sgmsup/confidence.hpp"
#include "sgmsup/pipeline.hpp"
#include "sgmsup/supervision.hpp"

namespace sgmsup {

/// Every tunable of the pipeline. Defaults come from the owning modules.
/// Serialised as a flat JSON object with the member names as keys.
struct RunConfig {
  int census_width = 9;
  int census_height = 7;
  int d_min = 0;
  int d_max = 64;
  int p1 = 10;
  int p2 = 120;
  int directions = 8;  // 4 or 8
  bool subpixel = true;
  double lr_tolerance = 1.0;  // negative disables the check
  double energy_threshold = kDefaultEnergyThreshold;
  double edge_sigma = 1.4;
  double edge_low = 0.1;
  double edge_high = 0.3;
  bool edge_relative = true;
  int dilation_radius = 1;
  double w1 = 0.1;
  double w2 = 0.45;
  double w3 = 0.45;
  double huber_delta = 1.0;
  int patch_width = 1248;
  int patch_height = 384;
  int stride_x = 0;
  int stride_y = 0;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = OpenMP default

  /// Checks every field against its module's preconditions.
  void validate() const;

  MatchConfig match() const;
  EdgeParams edges() const;
  LossWeights weights() const;
  PatchOptions patches() const;
};

/// Overlays the keys present in `j` onto `cfg`. Unknown keys and wrongly
/// typed values throw InvalidArgument.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

RunConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const RunConfig& cfg);

}  // namespace sgmsup
