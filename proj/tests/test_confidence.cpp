#include <gtest/gtest.h>

#include <random>

#include "sgmsup/confidence.hpp"
#include "sgmsup/error.hpp"
#include "synthetic.hpp"

using namespace sgmsup;
namespace syn = sgmsup::testing;

namespace {

GrayImage vertical_step(int w, int h, int column, float lo, float hi) {
  GrayImage img(w, h, lo);
  for (int y = 0; y < h; ++y)
    for (int x = column; x < w; ++x) img.at(x, y) = hi;
  return img;
}

// Rectangle of value `hi` on `lo`, used as a shape with edges in all
// orientations.
GrayImage blocks(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GrayImage img(w, h, 40.0f);
  for (int n = 0; n < 4; ++n) {
    const int x0 = static_cast<int>(rng() % (w - 8));
    const int y0 = static_cast<int>(rng() % (h - 8));
    const int bw = 4 + static_cast<int>(rng() % 10);
    const int bh = 4 + static_cast<int>(rng() % 10);
    const float v = static_cast<float>(rng() % 200);
    for (int y = y0; y < std::min(h, y0 + bh); ++y)
      for (int x = x0; x < std::min(w, x0 + bw); ++x) img.at(x, y) = v;
  }
  return img;
}

bool subset(const ConfidenceMask& a, const ConfidenceMask& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.test(i) && !b.test(i)) return false;
  return true;
}

}  // namespace

TEST(EnergyMask, StrictThreshold) {
  FloatRaster e(3, 1);
  e.set(0, 0, 2499.0f);
  e.set(1, 0, 2500.0f);
  e.set(2, 0, 2501.0f);
  const ConfidenceMask m = energy_mask(e, kDefaultEnergyThreshold);
  EXPECT_TRUE(m.test(0, 0));
  EXPECT_FALSE(m.test(1, 0));
  EXPECT_FALSE(m.test(2, 0));
  EXPECT_EQ(m.kind, MaskKind::kEnergy);
}

TEST(EnergyMask, ZeroEnergyAndZeroThreshold) {
  const FloatRaster zeros(5, 4, 0.0f);
  EXPECT_EQ(mask_stats(energy_mask(zeros, 2500.0)).count, 20u);
  EXPECT_EQ(mask_stats(energy_mask(zeros, 0.0)).count, 0u);
}

TEST(EnergyMask, ExcludesInvalidPixels) {
  FloatRaster e(4, 1, 1.0f);
  e.invalidate(2, 0);
  const ConfidenceMask m = energy_mask(e, 10.0);
  EXPECT_FALSE(m.test(2, 0));
  EXPECT_EQ(mask_stats(m).count, 3u);
}

TEST(EnergyMask, AntitoneInThreshold) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FloatRaster e = syn::random_raster(16, 12, seed, 0.1);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e.is_valid(i)) e.samples[i] = std::abs(e.samples[i]) * 300.0f;
    std::mt19937_64 rng(seed);
    const double t1 = static_cast<double>(rng() % 3000);
    const double t2 = t1 + static_cast<double>(rng() % 3000);
    EXPECT_TRUE(subset(energy_mask(e, t1), energy_mask(e, t2)));
  }
}

TEST(Canny, ConstantImageHasNoEdges) {
  EXPECT_EQ(mask_stats(canny_edges(GrayImage(32, 24, 90.0f))).count, 0u);
}

TEST(Canny, VerticalStepGivesOneColumn) {
  EdgeParams p;
  p.dilation_radius = 0;
  const ConfidenceMask m = canny_edges(vertical_step(32, 20, 16, 10.0f, 200.0f), p);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 32; ++x) EXPECT_EQ(m.test(x, y), x == 16) << x << "," << y;

  const ConfidenceMask d = canny_edges(vertical_step(32, 20, 16, 10.0f, 200.0f));
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 32; ++x) EXPECT_EQ(d.test(x, y), x >= 15 && x <= 17) << x << "," << y;
}

TEST(Canny, DilationIsSuperset) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GrayImage img = blocks(48, 40, seed);
    EdgeParams raw;
    raw.dilation_radius = 0;
    const ConfidenceMask e = canny_edges(img, raw);
    const ConfidenceMask d = canny_edges(img);
    EXPECT_TRUE(subset(e, d));
    EXPECT_TRUE(dilate(e, 1).same_bits(d));
  }
}

TEST(Canny, InvariantToScaleAndOffset) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const GrayImage img = blocks(40, 32, seed);
    GrayImage scaled = img;
    GrayImage offset = img;
    for (auto& v : scaled.samples) v *= 4.0f;
    for (auto& v : offset.samples) v += 1000.0f;
    const ConfidenceMask base = canny_edges(img);
    EXPECT_TRUE(base.same_bits(canny_edges(scaled))) << seed;
    EXPECT_TRUE(base.same_bits(canny_edges(offset))) << seed;
  }
}

TEST(Canny, Errors) {
  EXPECT_THROW(canny_edges(GrayImage(2, 5, 0.0f)), InvalidArgument);
  EXPECT_THROW(canny_edges(GrayImage(8, 40, 0.0f)), InvalidArgument);  // kernel is 11 wide
  EXPECT_NO_THROW(canny_edges(GrayImage(11, 11, 0.0f)));
  EdgeParams p;
  p.low_threshold = 0.5;
  p.high_threshold = 0.2;
  EXPECT_THROW(canny_edges(GrayImage(16, 16, 0.0f), p), InvalidArgument);
  p = {};
  p.sigma = 0.0;
  EXPECT_THROW(canny_edges(GrayImage(16, 16, 0.0f), p), InvalidArgument);
  EXPECT_EQ(gaussian_radius(1.4), 5);
}

TEST(Masks, DilateAndExclude) {
  ConfidenceMask m(5, 5, false, MaskKind::kEdge);
  m.assign(0, 0, true);
  const ConfidenceMask d = dilate(m, 1);
  EXPECT_EQ(mask_stats(d).count, 4u);
  EXPECT_EQ(mask_stats(dilate(m, 0)).count, 1u);
  m.assign(2, 2, true);
  EXPECT_EQ(mask_stats(dilate(m, 1)).count, 4u + 9u - 1u);

  FloatRaster disp(5, 5, 1.0f);
  disp.invalidate(2, 2);
  exclude_invalid(m, disp);
  EXPECT_FALSE(m.test(2, 2));
  EXPECT_TRUE(m.test(0, 0));
}

TEST(Masks, Stats) {
  ConfidenceMask all(4, 3, true, MaskKind::kEnergy);
  EXPECT_EQ(mask_stats(all).count, 12u);
  EXPECT_EQ(mask_stats(all).fraction, 1.0);
  ConfidenceMask none(4, 3, false, MaskKind::kEnergy);
  EXPECT_EQ(mask_stats(none).fraction, 0.0);
  ConfidenceMask checker(4, 4, false, MaskKind::kEdge);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) checker.assign(x, y, (x + y) % 2 == 0);
  const MaskStats s = mask_stats(checker);
  EXPECT_EQ(s.count, 8u);
  EXPECT_EQ(s.total, 16u);
  EXPECT_EQ(s.fraction, 0.5);
}
