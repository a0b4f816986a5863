#include "sgmsup/config.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "sgmsup/error.hpp"

namespace sgmsup {

// X-macro over (member) so JSON keys and members cannot drift apart.
#define SGMSUP_CONFIG_FIELDS(X) \
  X(census_width)               \
  X(census_height)              \
  X(d_min)                      \
  X(d_max)                      \
  X(p1)                         \
  X(p2)                         \
  X(directions)                 \
  X(subpixel)                   \
  X(lr_tolerance)               \
  X(energy_threshold)           \
  X(edge_sigma)                 \
  X(edge_low)                   \
  X(edge_high)                  \
  X(edge_relative)              \
  X(dilation_radius)            \
  X(w1)                         \
  X(w2)                         \
  X(w3)                         \
  X(huber_delta)                \
  X(patch_width)                \
  X(patch_height)               \
  X(stride_x)                   \
  X(stride_y)                   \
  X(train_fraction)             \
  X(seed)                       \
  X(threads)

void RunConfig::validate() const {
  match().validate();
  edges().validate();
  weights().validate();
  patches().validate();
  if (directions != 4 && directions != 8) {
    throw InvalidArgument("directions must be 4 or 8");
  }
  if (!std::isfinite(energy_threshold)) {
    throw InvalidArgument("energy threshold must be finite");
  }
  if (threads < 0) throw InvalidArgument("threads must be >= 0");
}

MatchConfig RunConfig::match() const {
  MatchConfig m;
  m.window = {census_width, census_height};
  m.d_min = d_min;
  m.d_max = d_max;
  m.sgm.p1 = p1;
  m.sgm.p2 = p2;
  m.sgm.directions = directions == 4 ? four_directions() : eight_directions();
  m.sgm.subpixel = subpixel;
  if (lr_tolerance >= 0.0) {
    m.sgm.lr_tolerance = lr_tolerance;
  } else {
    m.sgm.lr_tolerance.reset();
  }
  return m;
}

EdgeParams RunConfig::edges() const {
  return {edge_sigma, edge_low, edge_high, edge_relative, dilation_radius};
}

LossWeights RunConfig::weights() const { return {w1, w2, w3, huber_delta}; }

PatchOptions RunConfig::patches() const {
  return {patch_width, patch_height, stride_x, stride_y, train_fraction, seed};
}

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    try {
#define SGMSUP_READ(name)                                   \
  if (key == #name) {                                       \
    cfg.name = it.value().get<decltype(cfg.name)>();        \
    continue;                                               \
  }
      SGMSUP_CONFIG_FIELDS(SGMSUP_READ)
#undef SGMSUP_READ
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("config key '" + key + "': " + e.what());
    }
    throw InvalidArgument("unknown config key '" + key + "'");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("config '" + path.string() + "': " + e.what());
  }
  RunConfig cfg;
  apply_json(cfg, j);
  return cfg;
}

nlohmann::ordered_json to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
#define SGMSUP_WRITE(name) j[#name] = cfg.name;
  SGMSUP_CONFIG_FIELDS(SGMSUP_WRITE)
#undef SGMSUP_WRITE
  return j;
}

}  // namespace sgmsup
