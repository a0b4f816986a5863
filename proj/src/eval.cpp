#include "sgmsup/eval.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "sgmsup/error.hpp"

namespace sgmsup {

RmseResult rmse(const FloatRaster& candidate, const FloatRaster& truth,
                const ConfidenceMask* mask) {
  require_same_shape(candidate, truth, "rmse");
  if (mask) require_same_shape(candidate, *mask, "rmse (mask)");
  RmseResult r;
  double sum = 0.0;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (mask && !mask->test(i)) continue;
    if (!candidate.is_valid(i) || !truth.is_valid(i)) {
      ++r.excluded;
      continue;
    }
    const double e = static_cast<double>(candidate.samples[i]) - truth.samples[i];
    sum += e * e;
    ++r.pixels;
  }
  if (r.pixels == 0) throw EmptyMaskError("rmse: no mutually valid pixels");
  r.rmse = std::sqrt(sum / static_cast<double>(r.pixels));
  return r;
}

double delta(double before, double after) { return after - before; }

FloatRaster shift(const FloatRaster& raster, int dx, int dy) {
  FloatRaster out(raster.width, raster.height);
  for (int y = 0; y < raster.height; ++y) {
    for (int x = 0; x < raster.width; ++x) {
      const int sx = x - dx;
      const int sy = y - dy;
      if (sx < 0 || sx >= raster.width || sy < 0 || sy >= raster.height ||
          !raster.is_valid(sx, sy)) {
        out.invalidate(x, y);
      } else {
        out.set(x, y, raster.at(sx, sy));
      }
    }
  }
  return out;
}

namespace {

bool inside(const FloatRaster& r, PixelPoint p) {
  return p.x >= 0.0 && p.y >= 0.0 && p.x <= r.width - 1 && p.y <= r.height - 1;
}

double bilinear(const FloatRaster& r, double x, double y) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const double fx = x - x0;
  const double fy = y - y0;
  const int x1 = std::min(x0 + 1, r.width - 1);
  const int y1 = std::min(y0 + 1, r.height - 1);
  const struct {
    int x, y;
    double w;
  } taps[] = {{x0, y0, (1.0 - fx) * (1.0 - fy)},
              {x1, y0, fx * (1.0 - fy)},
              {x0, y1, (1.0 - fx) * fy},
              {x1, y1, fx * fy}};
  double v = 0.0;
  for (const auto& t : taps) {
    if (t.w == 0.0) continue;
    if (!r.is_valid(t.x, t.y)) return std::numeric_limits<double>::quiet_NaN();
    v += t.w * r.at(t.x, t.y);
  }
  return v;
}

}  // namespace

std::vector<double> profile(const FloatRaster& raster, PixelPoint p0, PixelPoint p1,
                            int samples) {
  if (samples < 2) throw InvalidArgument("profile needs at least 2 samples");
  if (!inside(raster, p0) || !inside(raster, p1)) {
    throw InvalidArgument("profile endpoint outside the raster");
  }
  std::vector<double> out(samples);
  const double span = samples - 1;
  for (int k = 0; k < samples; ++k) {
    const PixelPoint p = k == samples - 1
                             ? p1
                             : PixelPoint{p0.x + (p1.x - p0.x) * k / span,
                                          p0.y + (p1.y - p0.y) * k / span};
    out[k] = bilinear(raster, p.x, p.y);
  }
  return out;
}

FloatRaster disp_to_height(const FloatRaster& disp, double gain, double offset) {
  if (!std::isfinite(gain) || !std::isfinite(offset)) {
    throw InvalidArgument("disp_to_height: gain and offset must be finite");
  }
  FloatRaster out(disp.width, disp.height);
  for (std::size_t i = 0; i < disp.size(); ++i) {
    if (disp.is_valid(i)) {
      out.set(i, static_cast<float>(gain * disp.samples[i] + offset));
    } else {
      out.invalidate(i);
    }
  }
  return out;
}

EvalReport build_table(const std::vector<SiteRow>& rows,
                       const std::vector<MethodPair>& comparisons) {
  if (rows.empty()) throw InvalidArgument("build_table: no rows");
  EvalReport rep;
  for (const auto& [m, v] : rows.front().rmse) rep.methods.push_back(m);
  const auto column = [&](const std::string& m) -> std::size_t {
    for (std::size_t i = 0; i < rep.methods.size(); ++i) {
      if (rep.methods[i] == m) return i;
    }
    throw InvalidArgument("build_table: unknown method '" + m + "'");
  };
  std::vector<std::pair<std::size_t, std::size_t>> cols;
  for (const auto& c : comparisons) cols.emplace_back(column(c.before), column(c.after));
  rep.comparisons = comparisons;

  const std::size_t nm = rep.methods.size();
  const bool with_counts = !rows.front().valid_pixels.empty();
  rep.average.site = "average";
  rep.average.rmse.assign(nm, 0.0);
  rep.average.deltas.assign(cols.size(), 0.0);
  for (const auto& in : rows) {
    if (in.rmse.size() != nm) {
      throw InvalidArgument("build_table: inconsistent columns in row '" + in.site + "'");
    }
    EvalReport::Row row;
    row.site = in.site;
    for (std::size_t i = 0; i < nm; ++i) {
      if (in.rmse[i].first != rep.methods[i]) {
        throw InvalidArgument("build_table: inconsistent columns in row '" + in.site + "'");
      }
      row.rmse.push_back(in.rmse[i].second);
      rep.average.rmse[i] += in.rmse[i].second;
    }
    for (std::size_t k = 0; k < cols.size(); ++k) {
      row.deltas.push_back(delta(row.rmse[cols[k].first], row.rmse[cols[k].second]));
      rep.average.deltas[k] += row.deltas.back();
    }
    if (with_counts) {
      if (in.valid_pixels.size() != nm) {
        throw InvalidArgument("build_table: inconsistent pixel counts in row '" + in.site + "'");
      }
      row.valid_pixels = in.valid_pixels;
    }
    rep.rows.push_back(std::move(row));
  }
  const double n = static_cast<double>(rows.size());
  for (double& v : rep.average.rmse) v /= n;
  for (double& v : rep.average.deltas) v /= n;
  return rep;
}

namespace {

nlohmann::ordered_json row_json(const EvalReport& rep, const EvalReport::Row& row) {
  nlohmann::ordered_json j;
  j["site"] = row.site;
  auto& r = j["rmse"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < rep.methods.size(); ++i) r[rep.methods[i]] = row.rmse[i];
  auto& d = j["delta"] = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < rep.comparisons.size(); ++k) {
    d[rep.comparisons[k].after + " - " + rep.comparisons[k].before] = row.deltas[k];
  }
  if (!row.valid_pixels.empty()) {
    auto& c = j["valid_pixels"] = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < rep.methods.size(); ++i) c[rep.methods[i]] = row.valid_pixels[i];
  }
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const EvalReport& rep) {
  nlohmann::ordered_json j;
  j["methods"] = rep.methods;
  auto& comps = j["comparisons"] = nlohmann::ordered_json::array();
  for (const auto& c : rep.comparisons) comps.push_back({{"before", c.before}, {"after", c.after}});
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rep.rows) rows.push_back(row_json(rep, r));
  j["average"] = row_json(rep, rep.average);
  return j;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string to_csv(const EvalReport& rep) {
  std::string out = "site,method,rmse,delta\n";
  const auto emit = [&](const EvalReport::Row& row) {
    for (std::size_t i = 0; i < rep.methods.size(); ++i) {
      out += row.site + "," + rep.methods[i] + "," + format_number(row.rmse[i]) + ",";
      for (std::size_t k = 0; k < rep.comparisons.size(); ++k) {
        if (rep.comparisons[k].after == rep.methods[i]) {
          out += format_number(row.deltas[k]);
          break;
        }
      }
      out += "\n";
    }
  };
  for (const auto& r : rep.rows) emit(r);
  emit(rep.average);
  return out;
}

std::string profile_csv(const std::vector<double>& values) {
  std::string out = "station,value\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    out += std::to_string(k) + "," + format_number(values[k]) + "\n";
  }
  return out;
}

}  // namespace sgmsup
