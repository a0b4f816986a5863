#include "sgmsup/sgm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "sgmsup/error.hpp"

namespace sgmsup {

std::vector<Offset> four_directions() {
  return {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
}

std::vector<Offset> eight_directions() {
  return {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
}

void SgmParams::validate() const {
  if (p1 < 0 || p2 < p1) {
    throw InvalidArgument("SGM penalties must satisfy p2 >= p1 >= 0 (got p1=" +
                          std::to_string(p1) + ", p2=" + std::to_string(p2) + ")");
  }
  if (directions.empty()) throw InvalidArgument("SGM needs at least one direction");
  std::set<Offset> seen;
  for (const Offset& r : directions) {
    if (r.dx < -1 || r.dx > 1 || r.dy < -1 || r.dy > 1 || (r.dx == 0 && r.dy == 0)) {
      throw InvalidArgument("SGM direction (" + std::to_string(r.dx) + "," +
                            std::to_string(r.dy) +
                            ") is not in the 8-neighbourhood");
    }
    if (!seen.insert(r).second) throw InvalidArgument("duplicate SGM direction");
  }
  if (lr_tolerance && !(*lr_tolerance >= 0.0)) {
    throw InvalidArgument("left-right tolerance must be >= 0");
  }
}

AggregatedVolume::AggregatedVolume(int w, int h, int dmin, int dmax)
    : width(w), height(h), d_min(dmin), d_max(dmax),
      values(static_cast<std::size_t>(w) * h * (dmax - dmin + 1), 0) {}

void check_accumulator_bound(const CostVolume& cost, const SgmParams& params) {
  const std::uint64_t bound =
      static_cast<std::uint64_t>(params.directions.size()) *
      (static_cast<std::uint64_t>(cost.max_cost) + static_cast<std::uint64_t>(params.p2));
  if (bound > kMaxAggregatedValue) {
    throw InvalidArgument("SGM accumulator bound " + std::to_string(bound) +
                          " exceeds " + std::to_string(kMaxAggregatedValue) +
                          "; lower p2 or the number of directions");
  }
}

namespace {

// One step of the path recurrence for a pixel with predecessor costs `prev`.
inline void step(const std::uint8_t* c, const std::uint32_t* prev, int nd,
                 std::uint32_t p1, std::uint32_t p2, std::uint32_t* out) {
  std::uint32_t m = prev[0];
  for (int d = 1; d < nd; ++d) m = std::min(m, prev[d]);
  const std::uint32_t jump = m + p2;
  for (int d = 0; d < nd; ++d) {
    std::uint32_t best = std::min(prev[d], jump);
    if (d > 0) best = std::min(best, prev[d - 1] + p1);
    if (d + 1 < nd) best = std::min(best, prev[d + 1] + p1);
    out[d] = c[d] + best - m;
  }
}

inline void start(const std::uint8_t* c, int nd, std::uint32_t* out) {
  for (int d = 0; d < nd; ++d) out[d] = c[d];
}

// Runs one direction and hands each pixel's L_r vector to `sink(x, y, L)`.
// Horizontal paths are independent per row; for every other direction the
// predecessor lies in the previous row, so rows are visited in path order
// and the pixels within a row are processed in parallel. `sink` is called
// at most once per pixel and must only touch that pixel's storage.
template <typename Sink>
void run_path(const CostVolume& cost, Offset r, int p1, int p2, Sink&& sink) {
  const int w = cost.width;
  const int h = cost.height;
  const int nd = cost.disparities();
  const auto up1 = static_cast<std::uint32_t>(p1);
  const auto up2 = static_cast<std::uint32_t>(p2);

  if (r.dy == 0) {
#pragma omp parallel
    {
      std::vector<std::uint32_t> a(nd), b(nd);
#pragma omp for schedule(static)
      for (int y = 0; y < h; ++y) {
        std::uint32_t* prev = a.data();
        std::uint32_t* cur = b.data();
        const int x0 = r.dx > 0 ? 0 : w - 1;
        for (int i = 0; i < w; ++i) {
          const int x = x0 + i * r.dx;
          const std::uint8_t* c = &cost.costs[cost.offset(x, y)];
          if (i == 0) {
            start(c, nd, cur);
          } else {
            step(c, prev, nd, up1, up2, cur);
          }
          sink(x, y, static_cast<const std::uint32_t*>(cur));
          std::swap(prev, cur);
        }
      }
    }
    return;
  }

  const std::size_t row_len = static_cast<std::size_t>(w) * nd;
  std::vector<std::uint32_t> prev_row(row_len), cur_row(row_len);
  const int y0 = r.dy > 0 ? 0 : h - 1;
  for (int j = 0; j < h; ++j) {
    const int y = y0 + j * r.dy;
    const bool first = j == 0;
#pragma omp parallel for schedule(static)
    for (int x = 0; x < w; ++x) {
      const std::uint8_t* c = &cost.costs[cost.offset(x, y)];
      std::uint32_t* out = &cur_row[static_cast<std::size_t>(x) * nd];
      const int px = x - r.dx;
      if (first || px < 0 || px >= w) {
        start(c, nd, out);
      } else {
        step(c, &prev_row[static_cast<std::size_t>(px) * nd], nd, up1, up2, out);
      }
      sink(x, y, static_cast<const std::uint32_t*>(out));
    }
    std::swap(prev_row, cur_row);
  }
}

void check_path_args(const CostVolume& cost, Offset r, int p1, int p2) {
  SgmParams p;
  p.p1 = p1;
  p.p2 = p2;
  p.directions = {r};
  p.validate();
  check_accumulator_bound(cost, p);
}

}  // namespace

AggregatedVolume aggregate_path(const CostVolume& cost, Offset direction,
                                int p1, int p2) {
  check_path_args(cost, direction, p1, p2);
  AggregatedVolume out(cost.width, cost.height, cost.d_min, cost.d_max);
  const int nd = cost.disparities();
  run_path(cost, direction, p1, p2, [&](int x, int y, const std::uint32_t* l) {
    std::copy(l, l + nd, &out.values[out.offset(x, y)]);
  });
  return out;
}

AggregatedVolume aggregate(const CostVolume& cost, const SgmParams& params) {
  params.validate();
  check_accumulator_bound(cost, params);
  AggregatedVolume out(cost.width, cost.height, cost.d_min, cost.d_max);
  const int nd = cost.disparities();
  // Directions run one after another; integer sums make the result
  // independent of thread count.
  for (const Offset& r : params.directions) {
    run_path(cost, r, params.p1, params.p2,
             [&](int x, int y, const std::uint32_t* l) {
               std::uint32_t* s = &out.values[out.offset(x, y)];
               for (int d = 0; d < nd; ++d) s[d] += l[d];
             });
  }
  return out;
}

double parabola_offset(double a, double b, double c) {
  const double denom = 2.0 * (a - 2.0 * b + c);
  if (denom == 0.0) return 0.0;
  return (a - c) / denom;
}

WtaResult wta_disparity(const AggregatedVolume& agg, const SgmParams& params) {
  WtaResult res{FloatRaster(agg.width, agg.height), FloatRaster(agg.width, agg.height)};
  const int nd = agg.disparities();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < agg.height; ++y) {
    for (int x = 0; x < agg.width; ++x) {
      const std::uint32_t* s = &agg.values[agg.offset(x, y)];
      int best = 0;
      for (int k = 1; k < nd; ++k) {
        if (s[k] < s[best]) best = k;
      }
      double disp = agg.d_min + best;
      if (params.subpixel && best > 0 && best + 1 < nd) {
        disp += parabola_offset(s[best - 1], s[best], s[best + 1]);
      }
      const std::size_t i = res.disparity.index(x, y);
      res.disparity.set(i, static_cast<float>(disp));
      res.energy.set(i, static_cast<float>(s[best]));
    }
  }
  return res;
}

FloatRaster wta_cost(const CostVolume& cost) {
  FloatRaster out(cost.width, cost.height);
  const int nd = cost.disparities();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < cost.height; ++y) {
    for (int x = 0; x < cost.width; ++x) {
      const std::uint8_t* c = &cost.costs[cost.offset(x, y)];
      int best = 0;
      for (int k = 1; k < nd; ++k) {
        if (c[k] < c[best]) best = k;
      }
      out.set(x, y, static_cast<float>(cost.d_min + best));
    }
  }
  return out;
}

ConfidenceMask lr_consistency(const FloatRaster& left_disp,
                              const FloatRaster& right_disp, double tolerance) {
  require_same_shape(left_disp, right_disp, "lr_consistency");
  ConfidenceMask mask(left_disp.width, left_disp.height, false, MaskKind::kValidity);
  const int w = left_disp.width;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < left_disp.height; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!left_disp.is_valid(x, y)) continue;
      const float dl = left_disp.at(x, y);
      const long xr = x - std::lround(dl);
      if (xr < 0 || xr >= w) continue;
      const int xi = static_cast<int>(xr);
      if (!right_disp.is_valid(xi, y)) continue;
      const double diff = std::abs(static_cast<double>(dl) - right_disp.at(xi, y));
      mask.assign(x, y, diff <= tolerance);
    }
  }
  return mask;
}

void apply_validity(FloatRaster& raster, const ConfidenceMask& validity) {
  require_same_shape(raster, validity, "apply_validity");
  for (std::size_t i = 0; i < raster.size(); ++i) {
    if (!validity.test(i)) raster.invalidate(i);
  }
}

std::int64_t global_energy(const FloatRaster& disp, const CostVolume& cost,
                           const SgmParams& params) {
  require_same_shape(disp, cost, "global_energy");
  const int w = disp.width;
  const int h = disp.height;
  std::vector<int> label(disp.size(), std::numeric_limits<int>::min());
  for (std::size_t i = 0; i < disp.size(); ++i) {
    if (!disp.is_valid(i)) continue;
    const long d = std::lround(disp.samples[i]);
    if (d < cost.d_min || d > cost.d_max) {
      throw InvalidArgument("global_energy: disparity " + std::to_string(d) +
                            " outside [" + std::to_string(cost.d_min) + ", " +
                            std::to_string(cost.d_max) + "]");
    }
    label[i] = static_cast<int>(d);
  }
  const auto valid = [&](int x, int y) {
    return label[static_cast<std::size_t>(y) * w + x] != std::numeric_limits<int>::min();
  };
  // Forward half of the 8-neighbourhood so each unordered pair appears once.
  constexpr Offset kHalf[] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  std::int64_t e = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!valid(x, y)) continue;
      const int d = label[static_cast<std::size_t>(y) * w + x];
      e += cost.at(x, y, d);
      for (const Offset& n : kHalf) {
        const int qx = x + n.dx;
        const int qy = y + n.dy;
        if (qx < 0 || qx >= w || qy >= h || !valid(qx, qy)) continue;
        const int jump = std::abs(d - label[static_cast<std::size_t>(qy) * w + qx]);
        if (jump == 1) {
          e += params.p1;
        } else if (jump > 1) {
          e += params.p2;
        }
      }
    }
  }
  return e;
}

}  // namespace sgmsup
