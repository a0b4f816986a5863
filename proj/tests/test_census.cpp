#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sgmsup/census.hpp"
#include "sgmsup/error.hpp"
#include "synthetic.hpp"

using namespace sgmsup;
namespace syn = sgmsup::testing;

namespace {

GrayImage from_rows(const std::vector<std::vector<float>>& rows) {
  GrayImage img(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) img.at(x, y) = rows[y][x];
  return img;
}

// Descriptor of one pixel by direct enumeration, clamping coordinates.
std::uint64_t census_by_hand(const GrayImage& img, int x, int y, CensusWindow w) {
  std::uint64_t bits = 0;
  int k = 0;
  for (int dy = -w.height / 2; dy <= w.height / 2; ++dy) {
    for (int dx = -w.width / 2; dx <= w.width / 2; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const int qx = std::clamp(x + dx, 0, img.width - 1);
      const int qy = std::clamp(y + dy, 0, img.height - 1);
      if (img.at(qx, qy) < img.at(x, y)) bits |= std::uint64_t{1} << k;
      ++k;
    }
  }
  return bits;
}

}  // namespace

TEST(Census, ConstantImageHasEmptyDescriptors) {
  const CensusImage c = census_transform(GrayImage(20, 11, 77.0f));
  for (auto d : c.descriptors) EXPECT_EQ(d, 0u);
  EXPECT_EQ(c.bit_length(), 62);
}

TEST(Census, ThreeByThreeCentre) {
  const GrayImage img = from_rows({{1, 2, 3}, {4, 9, 6}, {7, 8, 5}});
  const CensusImage c = census_transform(img, {3, 3});
  EXPECT_EQ(c.at(1, 1), 0xFFu);
  // Corner (0,0) = 1: nothing is darker.
  EXPECT_EQ(c.at(0, 0), 0u);
  // Pixel (2,2) = 5: neighbours in order 9,6,6,8,5,8,5,5 after clamping.
  EXPECT_EQ(c.at(2, 2), 0u);
  // Pixel (1,2) = 8: neighbours 4,9,6,7,5,7,8,5.
  EXPECT_EQ(c.at(1, 2), 0b10111101u);
}

TEST(Census, MatchesHandEnumerationOnRandomImages) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GrayImage img = syn::random_gray(17, 12, seed, 6);
    for (CensusWindow w : {CensusWindow{3, 3}, CensusWindow{5, 7}, CensusWindow{9, 7}}) {
      const CensusImage c = census_transform(img, w);
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
          ASSERT_EQ(c.at(x, y), census_by_hand(img, x, y, w)) << x << "," << y;
    }
  }
}

TEST(Census, InvariantUnderStrictlyIncreasingMap) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const GrayImage img = syn::random_gray(24, 16, seed);
    GrayImage mapped = img;
    for (auto& v : mapped.samples) v = 3.0f * v * v + 2.0f * v + 11.0f;
    EXPECT_EQ(census_transform(img).descriptors, census_transform(mapped).descriptors);
  }
}

TEST(Census, ArgumentErrors) {
  const GrayImage img(16, 16, 0.0f);
  EXPECT_THROW(census_transform(img, {4, 3}), InvalidArgument);
  EXPECT_THROW(census_transform(img, {3, 0}), InvalidArgument);
  EXPECT_THROW(census_transform(img, {9, 9}), InvalidArgument);  // 80 bits
  EXPECT_THROW(census_transform(GrayImage(8, 4, 0.0f), {9, 7}), InvalidArgument);
  EXPECT_NO_THROW(census_transform(img, {13, 3}));
}

TEST(CostVolume, SelfMatchIsZeroAtZeroDisparity) {
  const GrayImage img = syn::random_gray(30, 10, 5);
  const CensusImage c = census_transform(img);
  const CostVolume v = build_cost_volume(c, c, 0, 4);
  for (int y = 0; y < v.height; ++y)
    for (int x = 0; x < v.width; ++x) EXPECT_EQ(v.at(x, y, 0), 0);
  // Out-of-range matches cost the full bit length.
  EXPECT_EQ(v.at(0, 0, 1), 62);
  EXPECT_EQ(v.at(3, 5, 4), 62);
}

TEST(CostVolume, ShiftedPairIsZeroAtTheShift) {
  constexpr int k = 5;
  const GrayImage left = syn::random_gray(40, 12, 9);
  GrayImage right(40, 12);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 40; ++x) right.at(x, y) = left.at(std::min(x + k, 39), y);
  const CostVolume v =
      build_cost_volume(census_transform(left), census_transform(right), 0, 8);
  // Away from the replicated borders the descriptors coincide exactly.
  for (int y = 0; y < 12; ++y)
    for (int x = k + 4; x < 40 - 4 - k; ++x) EXPECT_EQ(v.at(x, y, k), 0) << x << "," << y;
}

TEST(CostVolume, EntriesAreHammingDistances) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CensusWindow w{5, 5};
    const CensusImage l = census_transform(syn::random_gray(8, 8, seed), w);
    const CensusImage r = census_transform(syn::random_gray(8, 8, seed + 100), w);
    const CostVolume v = build_cost_volume(l, r, -2, 3);
    const CostVolume vr = build_cost_volume(l, r, -2, 3, Reference::kRight);
    for (int y = 0; y < 8; ++y) {
      for (int x = 0; x < 8; ++x) {
        for (int d = -2; d <= 3; ++d) {
          const int xl = x - d;
          const int expect = xl >= 0 && xl < 8 ? syn::hamming_oracle(l.at(x, y), r.at(xl, y)) : 24;
          ASSERT_EQ(v.at(x, y, d), expect);
          ASSERT_LE(v.at(x, y, d), v.max_cost);
          const int xr = x + d;
          const int expect_r =
              xr >= 0 && xr < 8 ? syn::hamming_oracle(r.at(x, y), l.at(xr, y)) : 24;
          ASSERT_EQ(vr.at(x, y, d), expect_r);
        }
      }
    }
  }
}

TEST(CostVolume, ArgumentErrors) {
  const CensusImage a = census_transform(GrayImage(16, 8, 0.0f));
  const CensusImage b = census_transform(GrayImage(17, 8, 0.0f));
  const CensusImage c = census_transform(GrayImage(16, 8, 0.0f), {3, 3});
  EXPECT_THROW(build_cost_volume(a, b, 0, 4), InvalidArgument);
  EXPECT_THROW(build_cost_volume(a, c, 0, 4), InvalidArgument);
  EXPECT_THROW(build_cost_volume(a, a, 5, 4), InvalidArgument);
}

TEST(Census, ParallelMatchesReference) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const GrayImage l = syn::random_gray(53, 29, seed);
    const GrayImage r = syn::random_gray(53, 29, seed + 1);
    const CensusImage cl = census_transform(l);
    const CensusImage cr = census_transform(r);
    EXPECT_EQ(cl.descriptors, reference::census_transform(l).descriptors);
    for (Reference ref : {Reference::kLeft, Reference::kRight}) {
      EXPECT_EQ(build_cost_volume(cl, cr, -3, 12, ref),
                reference::build_cost_volume(cl, cr, -3, 12, ref));
    }
  }
}
