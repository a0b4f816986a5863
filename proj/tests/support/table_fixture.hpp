#pragma once

// Reference per-site DSM RMSE table (metres), transcribed verbatim,
// including the printed delta columns and the printed average row.

#include <array>
#include <string>
#include <vector>

#include "sgmsup/eval.hpp"

namespace sgmsup::testing {

inline const std::vector<std::string>& table_methods() {
  static const std::vector<std::string> m{"Census-SGM", "GCNet",     "GCNet-finetuned",
                                          "PSMNet",     "PSMNet-finetuned", "LEAStereo",
                                          "LEAStereo-finetuned"};
  return m;
}

inline const std::vector<MethodPair>& table_comparisons() {
  static const std::vector<MethodPair> c{{"GCNet", "GCNet-finetuned"},
                                         {"PSMNet", "PSMNet-finetuned"},
                                         {"LEAStereo", "LEAStereo-finetuned"}};
  return c;
}

struct PrintedRow {
  const char* site;
  std::array<double, 7> rmse;
  std::array<double, 3> delta;
};

inline const std::vector<PrintedRow>& printed_rows() {
  static const std::vector<PrintedRow> rows{
      {"Argentina I", {5.86, 5.40, 5.22, 5.17, 4.99, 4.70, 4.37}, {-0.18, -0.18, -0.33}},
      {"Argentina II", {6.53, 3.87, 3.44, 4.99, 4.46, 4.57, 3.24}, {-0.43, -0.53, -1.33}},
      {"Argentina III", {4.23, 3.78, 3.51, 4.02, 3.66, 3.64, 3.53}, {-0.27, -0.36, -0.11}},
      {"Omaha I", {3.86, 4.11, 3.60, 2.63, 3.29, 3.05, 3.84}, {-0.51, 0.66, 0.79}},
      {"Omaha II", {5.16, 6.69, 6.74, 4.90, 4.15, 4.49, 4.75}, {0.05, -0.75, 0.26}},
      {"Omaha III", {3.23, 3.18, 3.94, 2.84, 2.24, 2.69, 2.80}, {0.76, -0.60, 0.11}},
      {"Jacksonville I", {5.02, 5.03, 4.84, 4.34, 4.95, 5.46, 6.06}, {-0.19, 0.61, 0.60}},
      {"Jacksonville II", {4.38, 3.38, 3.16, 3.08, 2.91, 3.19, 3.60}, {-0.22, -0.17, 0.41}},
      {"Jacksonville III", {3.79, 2.82, 2.60, 3.00, 2.93, 2.68, 3.15}, {-0.22, -0.07, 0.47}},
      {"London I", {9.03, 13.77, 9.74, 14.13, 8.82, 9.61, 8.91}, {-4.03, -5.30, -0.70}},
      {"London II", {6.93, 8.48, 6.34, 5.91, 5.67, 6.14, 5.28}, {-2.14, -0.25, -0.87}},
      {"London III", {5.93, 5.74, 4.75, 5.02, 4.67, 5.06, 4.78}, {-0.99, -0.36, -0.28}},
  };
  return rows;
}

/// Printed average row: the seven RMSE columns then the three deltas.
inline const PrintedRow& printed_average() {
  static const PrintedRow avg{
      "average", {5.33, 5.52, 4.82, 5.00, 4.40, 4.61, 4.53}, {-0.70, -0.61, -0.08}};
  return avg;
}

inline std::vector<SiteRow> table_site_rows() {
  std::vector<SiteRow> out;
  for (const auto& r : printed_rows()) {
    SiteRow s;
    s.site = r.site;
    for (std::size_t i = 0; i < r.rmse.size(); ++i) s.rmse.emplace_back(table_methods()[i], r.rmse[i]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sgmsup::testing
