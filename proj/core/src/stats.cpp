#include "suf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "suf/error.hpp"

namespace suf::stats {
namespace {

std::string num(double v, int precision = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

}  // namespace

SummaryStats describe(std::span<const double> column) {
  if (column.size() < 2) fail(ErrorCode::TooFewValues, "describe needs at least 2 values");
  SummaryStats s;
  s.count = column.size();
  s.min = column[0];
  s.max = column[0];
  // Welford's update keeps the variance accurate for large counter values.
  double mean = 0.0, m2 = 0.0;
  std::size_t n = 0;
  for (double x : column) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = std::clamp(mean, s.min, s.max);
  s.var = std::max(0.0, m2 / static_cast<double>(n - 1));
  s.std = std::sqrt(s.var);
  return s;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) fail(ErrorCode::TooFewValues, "quantile of empty data");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

FiveNumberSummary five_number(std::span<const double> column) {
  if (column.size() < 4) fail(ErrorCode::TooFewValues, "five_number needs at least 4 values");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());

  FiveNumberSummary s;
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;

  s.lower_whisker = s.q1;
  s.upper_whisker = s.q3;
  bool have_lower = false;
  for (double x : sorted) {
    if (x < lo_fence || x > hi_fence) {
      s.outliers.push_back(x);
      continue;
    }
    if (!have_lower) {
      s.lower_whisker = x;
      have_lower = true;
    }
    s.upper_whisker = x;
  }
  return s;
}

ComparisonReport compare(const dataset::LabeledTable& table_a, const dataset::LabeledTable& table_b,
                         std::string label_a, std::string label_b) {
  if (table_a.feature_names != table_b.feature_names) {
    fail(ErrorCode::FeatureMismatch, "compared tables have different feature names");
  }
  ComparisonReport report;
  report.label_a = std::move(label_a);
  report.label_b = std::move(label_b);
  for (std::size_t f = 0; f < table_a.width(); ++f) {
    const auto col_a = table_a.column(f);
    const auto col_b = table_b.column(f);
    report.features.push_back({table_a.feature_names[f], describe(col_a), describe(col_b)});
  }
  return report;
}

std::string render_csv(const ComparisonReport& r) {
  std::ostringstream out;
  const auto& a = r.label_a;
  const auto& b = r.label_b;
  out << "Feature,Min (" << a << "),Min (" << b << "),Max (" << a << "),Max (" << b << "),Std (" << a
      << "),Std (" << b << "),Mean (" << a << "),Mean (" << b << ")\n";
  for (const auto& f : r.features) {
    out << f.feature << ',' << num(f.a.min) << ',' << num(f.b.min) << ',' << num(f.a.max) << ','
        << num(f.b.max) << ',' << num(f.a.std) << ',' << num(f.b.std) << ',' << num(f.a.mean) << ','
        << num(f.b.mean) << '\n';
  }
  return out.str();
}

std::string render_text(const ComparisonReport& r) {
  std::vector<std::vector<std::string>> cells;
  const auto& a = r.label_a;
  const auto& b = r.label_b;
  cells.push_back({"Feature", "Min (" + a + ")", "Min (" + b + ")", "Max (" + a + ")",
                   "Max (" + b + ")", "Std (" + a + ")", "Std (" + b + ")", "Mean (" + a + ")",
                   "Mean (" + b + ")"});
  for (const auto& f : r.features) {
    cells.push_back({f.feature, num(f.a.min), num(f.b.min), num(f.a.max), num(f.b.max),
                     num(f.a.std), num(f.b.std), num(f.a.mean), num(f.b.mean)});
  }
  std::vector<std::size_t> widths(cells.front().size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << row[c] << std::string(widths[c] - row[c].size(), ' ');
      } else {
        out << "  " << std::string(widths[c] - row[c].size(), ' ') << row[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::vector<FeatureBoxPlot> box_plots(const dataset::LabeledTable& table) {
  std::vector<FeatureBoxPlot> plots;
  for (std::size_t f = 0; f < table.width(); ++f) {
    const auto col = table.column(f);
    plots.push_back({table.feature_names[f], five_number(col)});
  }
  return plots;
}

std::string render_box_plots_csv(const std::vector<FeatureBoxPlot>& plots) {
  std::ostringstream out;
  out << "Feature,Lower whisker,Q1,Median,Q3,Upper whisker,Outliers\n";
  for (const auto& p : plots) {
    const auto& s = p.summary;
    out << p.feature << ',' << num(s.lower_whisker) << ',' << num(s.q1) << ',' << num(s.median)
        << ',' << num(s.q3) << ',' << num(s.upper_whisker) << ',' << s.outliers.size() << '\n';
  }
  return out.str();
}

}  // namespace suf::stats
