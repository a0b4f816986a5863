#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "sgmsup/config.hpp"
#include "sgmsup/confidence.hpp"
#include "sgmsup/error.hpp"
#include "sgmsup/eval.hpp"
#include "sgmsup/pipeline.hpp"
#include "sgmsup/raster_io.hpp"
#include "sgmsup/supervision.hpp"

namespace sgmsup::cli {

namespace {

using Json = nlohmann::ordered_json;

// Binds config flags to a scratch RunConfig and remembers which were given,
// so that flags override the config file, which overrides the defaults.
class Tunables {
 public:
  explicit Tunables(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "Flat JSON config file");
  }

  template <typename T>
  void option(const std::string& flag, T RunConfig::*member, const std::string& help) {
    CLI::Option* opt = app_->add_option(flag, scratch_.*member, help);
    bind(opt, member);
  }

  void toggle(const std::string& flags, bool RunConfig::*member, const std::string& help) {
    CLI::Option* opt = app_->add_flag(flags, scratch_.*member, help);
    bind(opt, member);
  }

  RunConfig resolve() const {
    RunConfig cfg = config_path_.empty() ? RunConfig{} : load_config(config_path_);
    for (const auto& [opt, apply] : appliers_) {
      if (opt->count() > 0) apply(cfg);
    }
    cfg.validate();
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    return cfg;
  }

 private:
  template <typename T>
  void bind(CLI::Option* opt, T RunConfig::*member) {
    appliers_.emplace_back(opt, [this, member](RunConfig& c) { c.*member = scratch_.*member; });
  }

  CLI::App* app_;
  RunConfig scratch_;
  std::string config_path_;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> appliers_;
};

void add_threads(Tunables& t) {
  t.option("--threads", &RunConfig::threads, "Worker threads (0 = OpenMP default)");
}

void add_match_tunables(Tunables& t) {
  t.option("--census-w", &RunConfig::census_width, "Census window width (odd)");
  t.option("--census-h", &RunConfig::census_height, "Census window height (odd)");
  t.option("--dmin", &RunConfig::d_min, "Smallest disparity");
  t.option("--dmax", &RunConfig::d_max, "Largest disparity");
  t.option("--p1", &RunConfig::p1, "Penalty for 1-px disparity changes");
  t.option("--p2", &RunConfig::p2, "Penalty for larger disparity changes");
  t.option("--directions", &RunConfig::directions, "Aggregation paths: 4 or 8");
  t.toggle("--subpixel,!--no-subpixel", &RunConfig::subpixel, "Parabola refinement");
  t.option("--lr-tolerance", &RunConfig::lr_tolerance,
           "Left-right tolerance in pixels (negative disables)");
  add_threads(t);
}

void add_mask_tunables(Tunables& t) {
  t.option("--threshold", &RunConfig::energy_threshold, "Energy threshold (strict <)");
  t.option("--sigma", &RunConfig::edge_sigma, "Gaussian sigma for Canny");
  t.option("--low", &RunConfig::edge_low, "Low hysteresis threshold");
  t.option("--high", &RunConfig::edge_high, "High hysteresis threshold");
  t.toggle("--relative,!--absolute", &RunConfig::edge_relative,
           "Thresholds relative to the maximum gradient magnitude");
  t.option("--dilate", &RunConfig::dilation_radius, "Edge dilation radius");
  add_threads(t);
}

void add_loss_tunables(Tunables& t) {
  t.option("--w1", &RunConfig::w1, "Weight of the all-pixel term");
  t.option("--w2", &RunConfig::w2, "Weight of the energy-mask term");
  t.option("--w3", &RunConfig::w3, "Weight of the edge-mask term");
  t.option("--delta", &RunConfig::huber_delta, "Huber transition");
  t.option("--threshold", &RunConfig::energy_threshold, "Energy threshold (echoed)");
}

void add_patch_tunables(Tunables& t) {
  t.option("--patch-w", &RunConfig::patch_width, "Patch width");
  t.option("--patch-h", &RunConfig::patch_height, "Patch height");
  t.option("--stride-x", &RunConfig::stride_x, "Horizontal stride (0 = patch width)");
  t.option("--stride-y", &RunConfig::stride_y, "Vertical stride (0 = patch height)");
  t.option("--train-fraction", &RunConfig::train_fraction, "Share of training patches");
  t.option("--seed", &RunConfig::seed, "Split shuffle seed");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw IoError("write failure on '" + path + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::pair<std::string, std::string> key_value(const std::string& s, char sep,
                                              const char* what) {
  const auto pos = s.find(sep);
  if (pos == std::string::npos || pos == 0 || pos + 1 == s.size()) {
    throw InvalidArgument(std::string(what) + " '" + s + "' is not of the form A" + sep + "B");
  }
  return {s.substr(0, pos), s.substr(pos + 1)};
}

std::vector<MethodPair> parse_comparisons(const std::vector<std::string>& specs) {
  std::vector<MethodPair> out;
  for (const auto& s : specs) {
    auto [before, after] = key_value(s, ':', "comparison");
    out.push_back({before, after});
  }
  return out;
}

// Long-format "site,method,rmse" CSV into table rows.
std::vector<SiteRow> read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open table '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty table");
  std::vector<SiteRow> rows;
  std::map<std::string, std::size_t> index;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 3) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": expected site,method,rmse");
    }
    double v;
    try {
      std::size_t used = 0;
      v = std::stod(f[2], &used);
      if (used != f[2].size()) throw std::invalid_argument(f[2]);
    } catch (const std::exception&) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": bad rmse '" + f[2] + "'");
    }
    auto [it, fresh] = index.emplace(f[0], rows.size());
    if (fresh) rows.push_back({f[0], {}, {}});
    rows[it->second].rmse.emplace_back(f[1], v);
  }
  return rows;
}

struct MatchArgs {
  std::string left, right, out_disp, out_energy, out_lr_mask, report;
};

struct MaskArgs {
  std::string energy, left, disparity, out_energy_mask, out_edge_mask, report;
};

struct LossArgs {
  std::string pred, census, energy_mask, edge_mask, out;
  double source_loss = -1.0;
};

struct PatchArgs {
  std::string left, right, disparity, energy, energy_mask, edge_mask, out_dir;
  std::string tile_id = "tile";
};

struct EvalArgs {
  std::string table, truth, site = "site", mask, out_json, out_csv;
  std::vector<std::string> candidates, compare;
  bool from_disparity = false;
  double gain = 1.0, offset = 0.0;
  int align_dx = 0, align_dy = 0;
};

struct ProfileArgs {
  std::string raster, out;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  int samples = 2;
};

void emit_report(const Json& j, const std::string& path, bool print, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (!path.empty()) write_text(path, text);
  if (print) out << text;
}

void run_match(const MatchArgs& a, const RunConfig& cfg, bool print, std::ostream& out) {
  const GrayImage left = read_gray(a.left);
  const GrayImage right = read_gray(a.right);
  const MatchResult r = match_stereo(left, right, cfg.match());
  write_pfm(r.disparity, a.out_disp);
  write_pfm(r.energy, a.out_energy);
  if (!a.out_lr_mask.empty() && r.lr_valid) write_mask(*r.lr_valid, a.out_lr_mask);

  Json j;
  j["width"] = r.disparity.width;
  j["height"] = r.disparity.height;
  j["valid_pixels"] = r.disparity.valid_count();
  j["valid_fraction"] =
      static_cast<double>(r.disparity.valid_count()) / static_cast<double>(r.disparity.size());
  j["config"] = to_json(cfg);
  emit_report(j, a.report, print, out);
}

void run_mask(const MaskArgs& a, const RunConfig& cfg, bool print, std::ostream& out) {
  if (a.out_energy_mask.empty() && a.out_edge_mask.empty()) {
    throw InvalidArgument("mask: nothing to do (give --out-energy-mask and/or --out-edge-mask)");
  }
  FloatRaster disparity;
  const bool have_disp = !a.disparity.empty();
  if (have_disp) disparity = read_pfm(a.disparity);

  Json j;
  if (!a.out_energy_mask.empty()) {
    if (a.energy.empty()) throw InvalidArgument("mask: --out-energy-mask needs --energy");
    ConfidenceMask m = energy_mask(read_pfm(a.energy), cfg.energy_threshold);
    if (have_disp) exclude_invalid(m, disparity);
    write_mask(m, a.out_energy_mask);
    const auto s = mask_stats(m);
    j["energy_mask"] = {{"count", s.count}, {"coverage", s.fraction}};
  }
  if (!a.out_edge_mask.empty()) {
    if (a.left.empty()) throw InvalidArgument("mask: --out-edge-mask needs --left");
    ConfidenceMask m = canny_edges(read_gray(a.left), cfg.edges());
    if (have_disp) exclude_invalid(m, disparity);
    write_mask(m, a.out_edge_mask);
    const auto s = mask_stats(m);
    j["edge_mask"] = {{"count", s.count}, {"coverage", s.fraction}};
  }
  j["config"] = to_json(cfg);
  emit_report(j, a.report, print, out);
}

void run_loss(const LossArgs& a, const RunConfig& cfg, bool print, std::ostream& out) {
  const FloatRaster pred = read_pfm(a.pred);
  const FloatRaster census = read_pfm(a.census);
  const ConfidenceMask em = read_mask(a.energy_mask, MaskKind::kEnergy);
  const ConfidenceMask gm = read_mask(a.edge_mask, MaskKind::kEdge);
  const LossReport r = target_loss(pred, census, em, gm, cfg.weights());
  Json j = to_json(r);
  j["params"]["energy_threshold"] = cfg.energy_threshold;
  if (a.source_loss >= 0.0) {
    j["source_loss"] = a.source_loss;
    j["total_loss"] = total_loss(a.source_loss, r.target_loss);
  }
  j["config"] = to_json(cfg);
  emit_report(j, a.out, print, out);
}

void run_patches(const PatchArgs& a, const RunConfig& cfg, bool print, std::ostream& out) {
  RasterBundle b;
  b.tile_id = a.tile_id;
  b.left = read_gray(a.left);
  b.right = read_gray(a.right);
  b.disparity = read_pfm(a.disparity);
  b.energy = read_pfm(a.energy);
  b.energy_mask = read_mask(a.energy_mask, MaskKind::kEnergy);
  b.edge_mask = read_mask(a.edge_mask, MaskKind::kEdge);
  const RasterBundle bundles[] = {std::move(b)};
  const PatchSet set = emit_patches(bundles, cfg.patches(), a.out_dir, to_json(cfg));
  if (print) out << manifest_json(set).dump(2) << "\n";
}

void run_eval(const EvalArgs& a, const RunConfig& cfg, bool print, std::ostream& out) {
  const auto comparisons = parse_comparisons(a.compare);
  std::vector<SiteRow> rows;
  if (!a.table.empty()) {
    if (!a.truth.empty()) throw InvalidArgument("eval: give either --table or --truth");
    rows = read_table_csv(a.table);
  } else {
    if (a.truth.empty() || a.candidates.empty()) {
      throw InvalidArgument("eval: need --table, or --truth with at least one --candidate");
    }
    const FloatRaster truth = read_pfm(a.truth);
    ConfidenceMask mask;
    if (!a.mask.empty()) mask = read_mask(a.mask);
    SiteRow row{a.site, {}, {}};
    for (const auto& c : a.candidates) {
      auto [name, path] = key_value(c, '=', "candidate");
      FloatRaster cand = read_pfm(path);
      if (a.from_disparity) cand = disp_to_height(cand, a.gain, a.offset);
      if (a.align_dx != 0 || a.align_dy != 0) cand = shift(cand, a.align_dx, a.align_dy);
      const RmseResult r = rmse(cand, truth, a.mask.empty() ? nullptr : &mask);
      row.rmse.emplace_back(name, r.rmse);
      row.valid_pixels.push_back(r.pixels);
    }
    rows.push_back(std::move(row));
  }
  const EvalReport rep = build_table(rows, comparisons);
  Json j = to_json(rep);
  j["config"] = to_json(cfg);
  emit_report(j, a.out_json, print, out);
  if (!a.out_csv.empty()) write_text(a.out_csv, to_csv(rep));
}

void run_profile(const ProfileArgs& a, bool print, std::ostream& out) {
  const FloatRaster r = read_pfm(a.raster);
  const auto values = profile(r, {a.x0, a.y0}, {a.x1, a.y1}, a.samples);
  const std::string csv = profile_csv(values);
  if (!a.out.empty()) write_text(a.out, csv);
  if (print) out << csv;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Census-SGM pseudo-labels, confidence masks and supervision losses", "sgmsup"};
  app.require_subcommand(1);
  bool print = false;
  app.add_flag("--print-report", print, "Also print the JSON/CSV report on stdout");

  MatchArgs ma;
  auto* match = app.add_subcommand("match", "Census -> SGM disparity and energy maps");
  Tunables mt(match);
  add_match_tunables(mt);
  match->add_option("--left", ma.left, "Left image (PNG/PGM)")->required();
  match->add_option("--right", ma.right, "Right image (PNG/PGM)")->required();
  match->add_option("--out-disp", ma.out_disp, "Disparity PFM")->required();
  match->add_option("--out-energy", ma.out_energy, "Energy PFM")->required();
  match->add_option("--out-lr-mask", ma.out_lr_mask, "Left-right validity PNG");
  match->add_option("--report", ma.report, "JSON summary");

  MaskArgs ka;
  auto* mask = app.add_subcommand("mask", "Energy and edge confidence masks");
  Tunables kt(mask);
  add_mask_tunables(kt);
  mask->add_option("--energy", ka.energy, "Energy PFM");
  mask->add_option("--left", ka.left, "Left image for edges");
  mask->add_option("--disparity", ka.disparity, "Disparity PFM; invalid pixels are excluded");
  mask->add_option("--out-energy-mask", ka.out_energy_mask, "Energy mask PNG");
  mask->add_option("--out-edge-mask", ka.out_edge_mask, "Edge mask PNG");
  mask->add_option("--report", ka.report, "JSON coverage report");

  LossArgs la;
  auto* loss = app.add_subcommand("loss", "Masked Huber pseudo-supervision losses");
  Tunables lt(loss);
  add_loss_tunables(lt);
  loss->add_option("--pred", la.pred, "Predicted disparity PFM")->required();
  loss->add_option("--census", la.census, "Census-SGM disparity PFM")->required();
  loss->add_option("--energy-mask", la.energy_mask, "Energy mask PNG")->required();
  loss->add_option("--edge-mask", la.edge_mask, "Edge mask PNG")->required();
  loss->add_option("--source-loss", la.source_loss, "Source-domain loss to add");
  loss->add_option("--out", la.out, "LossReport JSON");

  PatchArgs pa;
  auto* patches = app.add_subcommand("patches", "Crop co-registered layers into a patch set");
  Tunables pt(patches);
  add_patch_tunables(pt);
  patches->add_option("--left", pa.left, "Left image")->required();
  patches->add_option("--right", pa.right, "Right image")->required();
  patches->add_option("--disparity", pa.disparity, "Census disparity PFM")->required();
  patches->add_option("--energy", pa.energy, "Energy PFM")->required();
  patches->add_option("--energy-mask", pa.energy_mask, "Energy mask PNG")->required();
  patches->add_option("--edge-mask", pa.edge_mask, "Edge mask PNG")->required();
  patches->add_option("--tile-id", pa.tile_id, "Identifier used in patch names");
  patches->add_option("--out-dir", pa.out_dir, "Output directory")->required();

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "RMSE table with before/after deltas");
  Tunables et(eval);
  eval->add_option("--table", ea.table, "CSV with columns site,method,rmse");
  eval->add_option("--truth", ea.truth, "Ground-truth height PFM");
  eval->add_option("--site", ea.site, "Site name for raster mode");
  eval->add_option("--candidate", ea.candidates, "NAME=PATH candidate raster (repeatable)");
  eval->add_option("--compare", ea.compare, "BEFORE:AFTER method pair (repeatable)");
  eval->add_flag("--from-disparity", ea.from_disparity, "Candidates are disparities");
  eval->add_option("--gain", ea.gain, "Metres per disparity unit");
  eval->add_option("--offset", ea.offset, "Height offset in metres");
  eval->add_option("--align-dx", ea.align_dx, "Integer column offset applied to candidates");
  eval->add_option("--align-dy", ea.align_dy, "Integer row offset applied to candidates");
  eval->add_option("--mask", ea.mask, "Optional evaluation mask PNG");
  eval->add_option("--out-json", ea.out_json, "EvalReport JSON");
  eval->add_option("--out-csv", ea.out_csv, "EvalReport CSV");

  ProfileArgs fa;
  auto* prof = app.add_subcommand("profile", "Bilinear line profile through a raster");
  prof->add_option("--raster", fa.raster, "Input PFM")->required();
  prof->add_option("--x0", fa.x0)->required();
  prof->add_option("--y0", fa.y0)->required();
  prof->add_option("--x1", fa.x1)->required();
  prof->add_option("--y1", fa.y1)->required();
  prof->add_option("--samples", fa.samples, "Number of stations (>= 2)")->required();
  prof->add_option("--out", fa.out, "Profile CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code != 0) err << app.help();
    return code == 0 ? 0 : 2;
  }

  try {
    if (match->parsed()) run_match(ma, mt.resolve(), print, out);
    if (mask->parsed()) run_mask(ka, kt.resolve(), print, out);
    if (loss->parsed()) run_loss(la, lt.resolve(), print, out);
    if (patches->parsed()) run_patches(pa, pt.resolve(), print, out);
    if (eval->parsed()) run_eval(ea, et.resolve(), print, out);
    if (prof->parsed()) run_profile(fa, print, out);
  } catch (const Error& e) {
    err << "sgmsup " << app.get_subcommands().front()->get_name() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace sgmsup::cli
