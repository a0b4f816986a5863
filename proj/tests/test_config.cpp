#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sgmsup/config.hpp"
#include "sgmsup/error.hpp"

using namespace sgmsup;
namespace fs = std::filesystem;

TEST(Config, Defaults) {
  const RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.energy_threshold, 2500.0);
  EXPECT_EQ(c.w1, 0.1);
  EXPECT_EQ(c.w2, 0.45);
  EXPECT_EQ(c.w3, 0.45);
  EXPECT_EQ(c.train_fraction, 0.8);

  const MatchConfig m = c.match();
  EXPECT_EQ(m.window.width, 9);
  EXPECT_EQ(m.window.height, 7);
  EXPECT_EQ(m.sgm.directions.size(), 8u);
  EXPECT_EQ(m.sgm.lr_tolerance, 1.0);
  EXPECT_EQ(c.patches().effective_stride_x(), 1248);
  EXPECT_EQ(c.edges().sigma, 1.4);
}

TEST(Config, JsonOverlayAndRoundTrip) {
  RunConfig c;
  apply_json(c, nlohmann::json::parse(R"({"p1": 5, "directions": 4, "lr_tolerance": -1,
                                          "edge_relative": false, "seed": 99})"));
  EXPECT_EQ(c.p1, 5);
  EXPECT_EQ(c.p2, 120);
  EXPECT_EQ(c.match().sgm.directions.size(), 4u);
  EXPECT_FALSE(c.match().sgm.lr_tolerance.has_value());
  EXPECT_FALSE(c.edges().relative_thresholds);
  EXPECT_EQ(c.patches().seed, 99u);

  RunConfig back;
  apply_json(back, nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, Errors) {
  RunConfig c;
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"p3": 1})")), InvalidArgument);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"p1": "ten"})")), InvalidArgument);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse("[1]")), InvalidArgument);

  c = {};
  c.directions = 6;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.p2 = 1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = {};
  c.train_fraction = 0.0;
  EXPECT_THROW(c.validate(), InvalidArgument);

  const fs::path p = fs::temp_directory_path() / "sgmsup_bad_config.json";
  std::ofstream(p) << "{ not json";
  EXPECT_THROW(load_config(p), FormatError);
  fs::remove(p);
  EXPECT_THROW(load_config(fs::temp_directory_path() / "sgmsup_missing.json"), IoError);
}
