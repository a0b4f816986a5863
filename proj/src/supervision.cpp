#include "sgmsup/supervision.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <string>

#include "sgmsup/error.hpp"
#include "sgmsup/raster_io.hpp"

namespace sgmsup {

double huber(double residual, double delta) {
  if (!std::isfinite(residual)) throw InvalidArgument("huber: non-finite residual");
  if (!(delta > 0.0)) throw InvalidArgument("huber: delta must be > 0");
  const double a = std::abs(residual);
  return a <= delta ? 0.5 * residual * residual : delta * (a - 0.5 * delta);
}

namespace {

template <typename Select>
MaskedLoss reduce_huber(const FloatRaster& pred, const FloatRaster& ref,
                        double delta, Select&& selected, const char* what) {
  require_same_shape(pred, ref, what);
  if (!(delta > 0.0)) throw InvalidArgument("huber: delta must be > 0");
  MaskedLoss out;
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!selected(i) || !pred.is_valid(i) || !ref.is_valid(i)) continue;
    sum += huber(static_cast<double>(pred.samples[i]) - ref.samples[i], delta);
    ++out.pixels;
  }
  if (out.pixels == 0) {
    throw EmptyMaskError(std::string(what) + ": no valid pixel selected by the mask");
  }
  out.mean = sum / static_cast<double>(out.pixels);
  return out;
}

}  // namespace

MaskedLoss masked_huber_loss(const FloatRaster& pred, const FloatRaster& reference,
                             double delta) {
  return reduce_huber(pred, reference, delta, [](std::size_t) { return true; },
                      "masked_huber_loss");
}

MaskedLoss masked_huber_loss(const FloatRaster& pred, const FloatRaster& reference,
                             const ConfidenceMask& mask, double delta) {
  require_same_shape(pred, mask, "masked_huber_loss");
  return reduce_huber(pred, reference, delta,
                      [&](std::size_t i) { return mask.test(i); },
                      "masked_huber_loss");
}

void LossWeights::validate() const {
  if (!(w1 >= 0.0) || !(w2 >= 0.0) || !(w3 >= 0.0) || !std::isfinite(w1) ||
      !std::isfinite(w2) || !std::isfinite(w3)) {
    throw InvalidArgument("loss weights must be finite and >= 0");
  }
  if (!(huber_delta > 0.0) || !std::isfinite(huber_delta)) {
    throw InvalidArgument("huber delta must be > 0");
  }
}

double weighted_target(double loss1, double loss2, double loss3,
                       const LossWeights& weights) {
  return weights.w1 * loss1 + weights.w2 * loss2 + weights.w3 * loss3;
}

LossReport target_loss(const FloatRaster& pred, const FloatRaster& census_disp,
                       const ConfidenceMask& energy_mask,
                       const ConfidenceMask& edge_mask, const LossWeights& weights) {
  weights.validate();
  require_same_shape(pred, census_disp, "target_loss");
  require_same_shape(pred, energy_mask, "target_loss (energy mask)");
  require_same_shape(pred, edge_mask, "target_loss (edge mask)");

  LossReport r;
  r.weights = weights;
  const auto all = masked_huber_loss(pred, census_disp, weights.huber_delta);
  const auto energy = masked_huber_loss(pred, census_disp, energy_mask, weights.huber_delta);
  const auto edge = masked_huber_loss(pred, census_disp, edge_mask, weights.huber_delta);
  r.loss1 = all.mean;
  r.pixels1 = all.pixels;
  r.loss2 = energy.mean;
  r.pixels2 = energy.pixels;
  r.loss3 = edge.mean;
  r.pixels3 = edge.pixels;
  r.target_loss = weighted_target(r.loss1, r.loss2, r.loss3, weights);
  const auto frac = [](const ConfidenceMask& m) {
    std::size_t n = 0;
    for (auto b : m.bits) n += b != 0;
    return m.size() ? static_cast<double>(n) / static_cast<double>(m.size()) : 0.0;
  };
  r.energy_coverage = frac(energy_mask);
  r.edge_coverage = frac(edge_mask);
  return r;
}

double total_loss(double source_loss, double target_loss) {
  if (!std::isfinite(source_loss) || !std::isfinite(target_loss)) {
    throw InvalidArgument("total_loss: non-finite input");
  }
  if (source_loss < 0.0 || target_loss < 0.0) {
    throw InvalidArgument("total_loss: losses must be non-negative");
  }
  return source_loss + target_loss;
}

nlohmann::ordered_json to_json(const LossReport& r) {
  nlohmann::ordered_json j;
  j["loss1"] = r.loss1;
  j["loss2"] = r.loss2;
  j["loss3"] = r.loss3;
  j["target_loss"] = r.target_loss;
  j["pixels_used"] = {{"loss1", r.pixels1}, {"loss2", r.pixels2}, {"loss3", r.pixels3}};
  j["coverage"] = {{"energy_mask", r.energy_coverage}, {"edge_mask", r.edge_coverage}};
  j["params"] = {{"w1", r.weights.w1},
                 {"w2", r.weights.w2},
                 {"w3", r.weights.w3},
                 {"huber_delta", r.weights.huber_delta}};
  return j;
}

// ---- patches ---------------------------------------------------------------

void PatchOptions::validate() const {
  if (patch_width < 1 || patch_height < 1) {
    throw InvalidArgument("patch dimensions must be positive");
  }
  if (stride_x < 0 || stride_y < 0) throw InvalidArgument("patch stride must be >= 0");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("train fraction must lie strictly between 0 and 1");
  }
}

std::size_t PatchSet::count(Split s) const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.split == s;
  return n;
}

PatchSet plan_patches(std::span<const TileExtent> tiles, const PatchOptions& options) {
  options.validate();
  PatchSet set;
  set.options = options;
  const int sx = options.effective_stride_x();
  const int sy = options.effective_stride_y();
  for (const TileExtent& t : tiles) {
    if (options.patch_width > t.width || options.patch_height > t.height) {
      throw InvalidArgument("patch " + std::to_string(options.patch_width) + "x" +
                            std::to_string(options.patch_height) +
                            " larger than tile '" + t.id + "' (" +
                            std::to_string(t.width) + "x" + std::to_string(t.height) + ")");
    }
    for (int y = 0; y + options.patch_height <= t.height; y += sy) {
      for (int x = 0; x + options.patch_width <= t.width; x += sx) {
        PatchEntry e;
        e.index = set.entries.size();
        e.tile = t.id;
        e.x = x;
        e.y = y;
        set.entries.push_back(std::move(e));
      }
    }
  }
  if (set.entries.empty()) throw InvalidArgument("patch tiling is empty");

  const std::size_t n = set.entries.size();
  const auto n_train =
      static_cast<std::size_t>(std::llround(options.train_fraction * static_cast<double>(n)));
  // Explicit Fisher-Yates on raw engine output: std::shuffle and the
  // standard distributions are not portable across library implementations.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(options.seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }
  for (std::size_t k = 0; k < n; ++k) {
    set.entries[order[k]].split = k < n_train ? Split::kTrain : Split::kTest;
  }
  return set;
}

void RasterBundle::validate() const {
  left.validate();
  right.validate();
  require_same_shape(left, right, "bundle (right)");
  require_same_shape(left, disparity, "bundle (disparity)");
  require_same_shape(left, energy, "bundle (energy)");
  require_same_shape(left, energy_mask, "bundle (energy mask)");
  require_same_shape(left, edge_mask, "bundle (edge mask)");
}

namespace {

void check_crop(int W, int H, int x, int y, int w, int h) {
  if (x < 0 || y < 0 || w < 1 || h < 1 || x + w > W || y + h > H) {
    throw InvalidArgument("crop window outside the raster");
  }
}

}  // namespace

GrayImage crop(const GrayImage& img, int x, int y, int w, int h) {
  check_crop(img.width, img.height, x, y, w, h);
  GrayImage out(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) out.at(i, j) = img.at(x + i, y + j);
  }
  return out;
}

FloatRaster crop(const FloatRaster& r, int x, int y, int w, int h) {
  check_crop(r.width, r.height, x, y, w, h);
  FloatRaster out(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const std::size_t s = r.index(x + i, y + j);
      if (r.is_valid(s)) {
        out.set(i, j, r.samples[s]);
      } else {
        out.invalidate(i, j);
      }
    }
  }
  return out;
}

ConfidenceMask crop(const ConfidenceMask& m, int x, int y, int w, int h) {
  check_crop(m.width, m.height, x, y, w, h);
  ConfidenceMask out(w, h, false, m.kind);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) out.assign(i, j, m.test(x + i, y + j));
  }
  return out;
}

namespace {

PatchFiles patch_file_names(const PatchEntry& e) {
  char stem[64];
  std::snprintf(stem, sizeof stem, "_%05zu_", e.index);
  const std::string base = e.tile + stem;
  return {base + "left.pgm",         base + "right.pgm",
          base + "disp.pfm",         base + "energy.pfm",
          base + "energy_mask.png",  base + "edge_mask.png"};
}

const char* split_name(Split s) { return s == Split::kTrain ? "train" : "test"; }

}  // namespace

nlohmann::ordered_json manifest_json(const PatchSet& set) {
  nlohmann::ordered_json j;
  j["format"] = "sgmsup-patches/1";
  j["patch_width"] = set.options.patch_width;
  j["patch_height"] = set.options.patch_height;
  j["stride_x"] = set.options.effective_stride_x();
  j["stride_y"] = set.options.effective_stride_y();
  j["train_fraction"] = set.options.train_fraction;
  j["seed"] = set.options.seed;
  j["intensity_normalization"] = "none";
  j["counts"] = {{"train", set.count(Split::kTrain)}, {"test", set.count(Split::kTest)}};
  auto& entries = j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : set.entries) {
    nlohmann::ordered_json je;
    je["index"] = e.index;
    je["tile"] = e.tile;
    je["x"] = e.x;
    je["y"] = e.y;
    je["split"] = split_name(e.split);
    je["files"] = {{"left", e.files.left},
                   {"right", e.files.right},
                   {"disparity", e.files.disparity},
                   {"energy", e.files.energy},
                   {"energy_mask", e.files.energy_mask},
                   {"edge_mask", e.files.edge_mask}};
    entries.push_back(std::move(je));
  }
  return j;
}

PatchSet emit_patches(std::span<const RasterBundle> bundles, const PatchOptions& options,
                      const std::filesystem::path& out_dir,
                      const nlohmann::ordered_json& provenance) {
  std::vector<TileExtent> tiles;
  for (const auto& b : bundles) {
    b.validate();
    for (const auto& t : tiles) {
      if (t.id == b.tile_id) throw InvalidArgument("duplicate tile id '" + b.tile_id + "'");
    }
    tiles.push_back({b.tile_id, b.left.width, b.left.height});
  }
  PatchSet set = plan_patches(tiles, options);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  const int pw = options.patch_width;
  const int ph = options.patch_height;
  for (auto& e : set.entries) {
    const RasterBundle* src = nullptr;
    for (const auto& b : bundles) {
      if (b.tile_id == e.tile) {
        src = &b;
        break;
      }
    }
    e.files = patch_file_names(e);
    write_gray(crop(src->left, e.x, e.y, pw, ph), out_dir / e.files.left);
    write_gray(crop(src->right, e.x, e.y, pw, ph), out_dir / e.files.right);
    write_pfm(crop(src->disparity, e.x, e.y, pw, ph), out_dir / e.files.disparity);
    write_pfm(crop(src->energy, e.x, e.y, pw, ph), out_dir / e.files.energy);
    write_mask(crop(src->energy_mask, e.x, e.y, pw, ph), out_dir / e.files.energy_mask);
    write_mask(crop(src->edge_mask, e.x, e.y, pw, ph), out_dir / e.files.edge_mask);
  }

  auto manifest = manifest_json(set);
  if (!provenance.is_null()) manifest["config"] = provenance;
  const auto path = out_dir / "manifest.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("write failure on '" + path.string() + "'");
  return set;
}

}  // namespace sgmsup
