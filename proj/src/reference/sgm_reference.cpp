#include <algorithm>

#include "sgmsup/error.hpp"
#include "sgmsup/sgm.hpp"

namespace sgmsup::reference {

AggregatedVolume aggregate_path(const CostVolume& cost, Offset r, int p1, int p2) {
  SgmParams p;
  p.p1 = p1;
  p.p2 = p2;
  p.directions = {r};
  p.validate();
  check_accumulator_bound(cost, p);

  AggregatedVolume out(cost.width, cost.height, cost.d_min, cost.d_max);
  const int w = cost.width;
  const int h = cost.height;
  const int nd = cost.disparities();
  // Visiting rows and columns in the direction of travel guarantees the
  // predecessor x - r has been computed.
  for (int j = 0; j < h; ++j) {
    const int y = r.dy >= 0 ? j : h - 1 - j;
    for (int i = 0; i < w; ++i) {
      const int x = r.dx >= 0 ? i : w - 1 - i;
      const int px = x - r.dx;
      const int py = y - r.dy;
      std::uint32_t* l = &out.values[out.offset(x, y)];
      const std::uint8_t* c = &cost.costs[cost.offset(x, y)];
      if (px < 0 || px >= w || py < 0 || py >= h) {
        for (int d = 0; d < nd; ++d) l[d] = c[d];
        continue;
      }
      const std::uint32_t* prev = &out.values[out.offset(px, py)];
      const std::uint32_t m = *std::min_element(prev, prev + nd);
      for (int d = 0; d < nd; ++d) {
        std::uint32_t best = prev[d];
        if (d > 0) best = std::min<std::uint32_t>(best, prev[d - 1] + p1);
        if (d + 1 < nd) best = std::min<std::uint32_t>(best, prev[d + 1] + p1);
        best = std::min<std::uint32_t>(best, m + p2);
        l[d] = c[d] + best - m;
      }
    }
  }
  return out;
}

AggregatedVolume aggregate(const CostVolume& cost, const SgmParams& params) {
  params.validate();
  check_accumulator_bound(cost, params);
  AggregatedVolume out(cost.width, cost.height, cost.d_min, cost.d_max);
  for (const Offset& r : params.directions) {
    const AggregatedVolume l = reference::aggregate_path(cost, r, params.p1, params.p2);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += l.values[i];
  }
  return out;
}

}  // namespace sgmsup::reference
