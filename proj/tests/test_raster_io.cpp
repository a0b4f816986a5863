#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "sgmsup/error.hpp"
#include "sgmsup/raster_io.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using namespace sgmsup;

namespace {

class RasterIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sgmsup_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path file(const std::string& name) const { return dir_ / name; }

  void write_bytes(const fs::path& p, const std::string& bytes) const {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
  }

  std::string read_bytes(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  fs::path dir_;
};

std::string le_float(float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  std::string s(4, '\0');
  for (int k = 0; k < 4; ++k) s[k] = static_cast<char>((bits >> (8 * k)) & 0xFF);
  return s;
}

std::string be_float(float v) {
  std::string s = le_float(v);
  return {s.rbegin(), s.rend()};
}

}  // namespace

TEST_F(RasterIoTest, PfmRoundTripIsBitExactIncludingInvalidPixels) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937 rng(static_cast<unsigned>(seed));
    const int w = 1 + static_cast<int>(rng() % 17);
    const int h = 1 + static_cast<int>(rng() % 13);
    const FloatRaster r = sgmsup::testing::random_raster(w, h, seed, 0.2);
    write_pfm(r, file("r.pfm"));
    const FloatRaster back = read_pfm(file("r.pfm"));
    EXPECT_TRUE(identical(r, back)) << "seed " << seed;
  }
}

TEST_F(RasterIoTest, SinglePixelZero) {
  FloatRaster r(1, 1, 0.0f);
  write_pfm(r, file("z.pfm"));
  const FloatRaster back = read_pfm(file("z.pfm"));
  ASSERT_EQ(back.width, 1);
  ASSERT_EQ(back.height, 1);
  EXPECT_EQ(back.samples[0], 0.0f);
  EXPECT_TRUE(back.is_valid(0));
}

TEST_F(RasterIoTest, WriterEmitsLittleEndianBottomUp) {
  FloatRaster zeros(2, 2, 0.0f);
  write_pfm(zeros, file("zeros.pfm"));
  const std::string bytes = read_bytes(file("zeros.pfm"));
  const std::string header = "Pf\n2 2\n-1.0\n";
  ASSERT_EQ(bytes.substr(0, header.size()), header);
  EXPECT_EQ(bytes.substr(header.size()), std::string(16, '\0'));

  FloatRaster r(1, 2);
  r.set(0, 0, 1.0f);  // top row
  r.set(0, 1, 2.0f);  // bottom row, stored first
  write_pfm(r, file("order.pfm"));
  const std::string b = read_bytes(file("order.pfm"));
  const std::string h2 = "Pf\n1 2\n-1.0\n";
  EXPECT_EQ(b.substr(h2.size()), le_float(2.0f) + le_float(1.0f));
}

TEST_F(RasterIoTest, ReadsBigEndianPfm) {
  write_bytes(file("be.pfm"), "Pf\n2 1\n1.0\n" + be_float(3.5f) + be_float(-7.25f));
  const FloatRaster r = read_pfm(file("be.pfm"));
  EXPECT_EQ(r.at(0, 0), 3.5f);
  EXPECT_EQ(r.at(1, 0), -7.25f);
}

TEST_F(RasterIoTest, NanSamplesBecomeInvalid) {
  write_bytes(file("nan.pfm"),
              "Pf\n2 1\n-1.0\n" + le_float(std::nanf("")) + le_float(4.0f));
  const FloatRaster r = read_pfm(file("nan.pfm"));
  EXPECT_FALSE(r.is_valid(0, 0));
  EXPECT_TRUE(r.is_valid(1, 0));
  EXPECT_EQ(r.valid_count(), 1u);
}

TEST_F(RasterIoTest, PfmErrors) {
  std::string payload15;
  for (int i = 0; i < 15; ++i) payload15 += le_float(1.0f);
  write_bytes(file("short.pfm"), "Pf\n4 4\n-1.0\n" + payload15);
  EXPECT_THROW(read_pfm(file("short.pfm")), FormatError);

  write_bytes(file("color.pfm"), "PF\n1 1\n-1.0\n" + std::string(12, '\0'));
  EXPECT_THROW(read_pfm(file("color.pfm")), FormatError);

  write_bytes(file("garbage.pfm"), "P5\n1 1\n255\n\x01");
  EXPECT_THROW(read_pfm(file("garbage.pfm")), FormatError);

  write_bytes(file("dims.pfm"), "Pf\nx 1\n-1.0\n" + le_float(0.0f));
  EXPECT_THROW(read_pfm(file("dims.pfm")), FormatError);

  write_bytes(file("inf.pfm"), "Pf\n1 1\n-1.0\n" + le_float(INFINITY));
  EXPECT_THROW(read_pfm(file("inf.pfm")), FormatError);

  EXPECT_THROW(read_pfm(file("missing.pfm")), IoError);
  EXPECT_THROW(write_pfm(FloatRaster(1, 1), fs::path{}), IoError);
  EXPECT_THROW(write_pfm(FloatRaster(1, 1), dir_ / "no" / "such" / "dir.pfm"), IoError);
}

TEST_F(RasterIoTest, PgmKeepsRawIntensities) {
  write_bytes(file("a.pgm"), std::string("P5\n# comment\n2 1\n255\n") + '\xC8' + '\x07');
  const GrayImage g = read_gray(file("a.pgm"));
  EXPECT_EQ(g.at(0, 0), 200.0f);
  EXPECT_EQ(g.at(1, 0), 7.0f);

  // 16-bit PGM is big-endian.
  write_bytes(file("b.pgm"), std::string("P5\n1 1\n65535\n") + '\x12' + '\x34');
  EXPECT_EQ(read_gray(file("b.pgm")).at(0, 0), 4660.0f);
}

TEST_F(RasterIoTest, GrayRoundTripPngAndPgm) {
  for (int levels : {256, 65536}) {
    const GrayImage img = sgmsup::testing::random_gray(13, 7, static_cast<std::uint64_t>(levels), levels);
    for (const char* name : {"g.png", "g.pgm"}) {
      write_gray(img, file(name));
      EXPECT_EQ(read_gray(file(name)), img) << name << " levels " << levels;
    }
  }
}

TEST_F(RasterIoTest, MaskRoundTrip) {
  std::mt19937 rng(3);
  ConfidenceMask m(9, 5, false, MaskKind::kEdge);
  for (auto& b : m.bits) b = rng() & 1u;
  write_mask(m, file("m.png"));
  const ConfidenceMask back = read_mask(file("m.png"));
  EXPECT_TRUE(back.same_bits(m));
  // Stored as 0 / 255.
  const GrayImage raw = read_gray(file("m.png"));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    EXPECT_EQ(raw.samples[i], m.bits[i] ? 255.0f : 0.0f);
  }
}

TEST_F(RasterIoTest, RejectsMultiBandAndUnknownMagic) {
  write_bytes(file("rgb.ppm"), "P6\n1 1\n255\n\x01\x02\x03");
  EXPECT_THROW(read_gray(file("rgb.ppm")), FormatError);

  write_bytes(file("junk.bin"), "JUNKJUNK");
  EXPECT_THROW(read_gray(file("junk.bin")), FormatError);

  // A real RGB PNG: 1x1, colour type 2.
  const unsigned char rgb_png[] = {
      0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A, 0x00, 0x00, 0x00, 0x0D, 0x49, 0x48,
      0x44, 0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x02, 0x00, 0x00,
      0x00, 0x90, 0x77, 0x53, 0xDE, 0x00, 0x00, 0x00, 0x0C, 0x49, 0x44, 0x41, 0x54, 0x08,
      0xD7, 0x63, 0xF8, 0xCF, 0xC0, 0x00, 0x00, 0x03, 0x01, 0x01, 0x00, 0x18, 0xDD, 0x8D,
      0xB0, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4E, 0x44, 0xAE, 0x42, 0x60, 0x82};
  write_bytes(file("rgb.png"), std::string(reinterpret_cast<const char*>(rgb_png), sizeof rgb_png));
  try {
    read_gray(file("rgb.png"));
    FAIL() << "RGB PNG accepted";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("band"), std::string::npos) << e.what();
  }
}

TEST_F(RasterIoTest, WriteGrayRejectsNonIntegral) {
  GrayImage g(1, 1, 1.5f);
  EXPECT_THROW(write_gray(g, file("x.pgm")), InvalidArgument);
}
