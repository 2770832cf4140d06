#pragma once

// Aligned plain-text tables for evaluation output.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "zonerec/evaluation.hpp"

namespace zonerec {

namespace detail {

inline std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string p_value_text(const TTestResult& t) {
  char buf[48];
  if (t.degenerate_variance) {
    std::snprintf(buf, sizeof buf, "%.4g (degenerate)", t.p_value);
  } else {
    std::snprintf(buf, sizeof buf, "%.4g", t.p_value);
  }
  return buf;
}

// UTF-8 aware enough for our labels: counts code points, not bytes.
inline std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = display_width(header[c]);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], display_width(r[c]));
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    std::string text;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      text += cells[c];
      if (c + 1 < cells.size()) text += std::string(width[c] - display_width(cells[c]) + 2, ' ');
    }
    out << text << '\n';
  };
  line(header);
  std::size_t total = 0;
  for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c + 1 < width.size() ? 2 : 0);
  out << std::string(total, '-') << '\n';
  for (const auto& r : rows) line(r);
  return out.str();
}

inline std::vector<std::string> metric_header(const std::string& first, std::size_t k) {
  const std::string ks = std::to_string(k);
  return {first, "Hit@" + ks, "MAP@" + ks, "NDCG@" + ks};
}

}  // namespace detail

inline std::string format_metrics_table(const std::vector<MetricsReport>& rows) {
  const std::size_t k = rows.empty() ? kDefaultTopK : rows.front().options.k;
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({r.label, detail::fixed3(r.mean_hit), detail::fixed3(r.mean_map),
                     detail::fixed3(r.mean_ndcg)});
  }
  return detail::render_table(detail::metric_header("Algorithm", k), cells);
}

inline std::string format_t_tests(const std::string& a, const std::string& b, const MetricTTests& t) {
  std::ostringstream out;
  out << a << " vs " << b << ": p(Hit)=" << detail::p_value_text(t.hit)
      << "  p(MAP)=" << detail::p_value_text(t.map) << "  p(NDCG)=" << detail::p_value_text(t.ndcg)
      << '\n';
  return out.str();
}

inline std::string format_evaluation(const EvaluationReport& r) {
  std::ostringstream out;
  out << format_metrics_table({r.model, r.baseline});
  out << '\n' << format_t_tests(r.model.label, r.baseline.label, r.versus_baseline);
  out << "folds: " << r.model.folds.size() << (r.model.stratified ? " (stratified by zone)" : " (shuffled)")
      << '\n';
  return out.str();
}

inline std::string format_comparison(const ComparisonReport& r) {
  std::ostringstream out;
  out << format_metrics_table(r.rows) << '\n';
  for (const auto& p : r.pairs) out << format_t_tests(r.rows[p.a].label, r.rows[p.b].label, p.tests);
  return out.str();
}

inline std::string format_ablation(const AblationReport& r) {
  const std::size_t k = r.rows.empty() ? kDefaultTopK : r.rows.front().options.k;
  const std::string ks = std::to_string(k);
  std::vector<std::vector<std::string>> cells;
  auto flag = [](bool b) { return std::string(b ? "Yes" : "-"); };
  for (const auto& row : r.rows) {
    cells.push_back({flag(row.mask.use_name), flag(row.mask.use_description), flag(row.mask.use_categories),
                     detail::fixed3(row.mean_hit), detail::fixed3(row.mean_map), detail::fixed3(row.mean_ndcg)});
  }
  return detail::render_table(
      {"Use Name", "Use Description", "Use Categories", "Hit@" + ks, "MAP@" + ks, "NDCG@" + ks}, cells);
}

}  // namespace zonerec
