#pragma once

#include <optional>

#include "sgmsup/census.hpp"
#include "sgmsup/raster.hpp"
#include "sgmsup/sgm.hpp"

namespace sgmsup {

struct MatchConfig {
  CensusWindow window;
  int d_min = 0;
  int d_max = 64;
  SgmParams sgm;

  void validate() const;
};

struct MatchResult {
  /// Left-referenced disparity; pixels failing the left-right check are invalid.
  FloatRaster disparity;
  FloatRaster energy;
  /// Present when the left-right check ran.
  std::optional<ConfidenceMask> lr_valid;
};

/// census -> Hamming cost -> SGM -> winner-take-all, plus an optional
/// left-right check against the right-referenced run.
MatchResult match_stereo(const GrayImage& left, const GrayImage& right,
                         const MatchConfig& config = {});

}  // namespace sgmsup
