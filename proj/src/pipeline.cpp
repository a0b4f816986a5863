#include "sgmsup/pipeline.hpp"

#include "sgmsup/error.hpp"

namespace sgmsup {

void MatchConfig::validate() const {
  sgm.validate();
  if (d_min > d_max) throw InvalidArgument("disparity range is empty");
  if (window.width % 2 == 0 || window.height % 2 == 0 || window.width < 1 ||
      window.height < 1 || window.width * window.height - 1 > 64) {
    throw InvalidArgument("census window must be odd-sized and fit 64 bits");
  }
}

MatchResult match_stereo(const GrayImage& left, const GrayImage& right,
                         const MatchConfig& config) {
  config.validate();
  require_same_shape(left, right, "match_stereo");
  const CensusImage cl = census_transform(left, config.window);
  const CensusImage cr = census_transform(right, config.window);

  const CostVolume cost = build_cost_volume(cl, cr, config.d_min, config.d_max);
  WtaResult wta = wta_disparity(aggregate(cost, config.sgm), config.sgm);
  MatchResult out{std::move(wta.disparity), std::move(wta.energy), std::nullopt};

  if (config.sgm.lr_tolerance) {
    const CostVolume cost_r =
        build_cost_volume(cl, cr, config.d_min, config.d_max, Reference::kRight);
    const WtaResult right_wta = wta_disparity(aggregate(cost_r, config.sgm), config.sgm);
    ConfidenceMask valid =
        lr_consistency(out.disparity, right_wta.disparity, *config.sgm.lr_tolerance);
    apply_validity(out.disparity, valid);
    out.lr_valid = std::move(valid);
  }
  return out;
}

}  // namespace sgmsup
