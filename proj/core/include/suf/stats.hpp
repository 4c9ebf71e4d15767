#pragma once

// Descriptive statistics and box-plot numbers for counter tables.

#include <span>
#include <string>
#include <vector>

#include "suf/dataset.hpp"

namespace suf::stats {

/// Sample statistics; `std` and `var` use the n-1 denominator.
struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  double var = 0.0;
  std::size_t count = 0;
};

struct FiveNumberSummary {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double lower_whisker = 0.0;
  double upper_whisker = 0.0;
  std::vector<double> outliers;  // ascending
};

SummaryStats describe(std::span<const double> column);

/// Quartiles by linear interpolation at h = (n-1)p; whiskers are the most
/// extreme points inside the 1.5*IQR fences.
FiveNumberSummary five_number(std::span<const double> column);

/// Linear-interpolation quantile of already sorted data.
double quantile_sorted(std::span<const double> sorted, double p);

struct FeatureComparison {
  std::string feature;
  SummaryStats a;
  SummaryStats b;
};

struct ComparisonReport {
  std::string label_a = "A";
  std::string label_b = "B";
  std::vector<FeatureComparison> features;
};

ComparisonReport compare(const dataset::LabeledTable& table_a, const dataset::LabeledTable& table_b,
                         std::string label_a = "A", std::string label_b = "B");

/// Columns: Feature, Min (A), Min (B), Max (A), Max (B), Std (A), Std (B), Mean (A), Mean (B).
std::string render_csv(const ComparisonReport& report);
std::string render_text(const ComparisonReport& report);

struct FeatureBoxPlot {
  std::string feature;
  FiveNumberSummary summary;
};

std::vector<FeatureBoxPlot> box_plots(const dataset::LabeledTable& table);
std::string render_box_plots_csv(const std::vector<FeatureBoxPlot>& plots);

}  // namespace suf::stats
