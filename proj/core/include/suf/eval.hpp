#pragma once

#include <span>
#include <string>
#include <vector>

#include "suf/dataset.hpp"

namespace suf::eval {

/// K x K counts; entry (i, j) = samples of true class i predicted as j.
struct ConfusionCounts {
  std::size_t num_classes = 0;
  std::vector<long long> counts;  // row-major

  long long at(std::size_t truth, std::size_t predicted) const {
    return counts[truth * num_classes + predicted];
  }
  long long total() const;
  long long row_sum(std::size_t c) const;
  long long col_sum(std::size_t c) const;
  /// Rows divided by their sums; empty rows stay zero.
  std::vector<std::vector<double>> row_normalized() const;
};

ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted, std::size_t k);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long long support = 0;
};

struct MetricsReport {
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  ClassMetrics macro;
  ClassMetrics weighted;
  std::vector<std::vector<double>> normalized;
  ConfusionCounts counts;
};

double f1_score(double precision, double recall);

/// Zero denominators yield 0. Macro = unweighted mean over classes,
/// weighted = support-weighted mean.
MetricsReport metrics_from_confusion(const ConfusionCounts& counts);

/// Aligned text: headline metrics, per-class table, normalized matrix (4 decimals).
std::string render_text(const MetricsReport& report, const dataset::LabelMap& labels);
std::string render_csv(const MetricsReport& report, const dataset::LabelMap& labels);

}  // namespace suf::eval
