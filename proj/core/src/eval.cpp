#include "suf/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "suf/error.hpp"

namespace suf::eval {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string class_name(const dataset::LabelMap& labels, std::size_t c) {
  return c < labels.size() ? labels.name(static_cast<int>(c)) : "class_" + std::to_string(c);
}

}  // namespace

long long ConfusionCounts::total() const {
  long long t = 0;
  for (auto v : counts) t += v;
  return t;
}

long long ConfusionCounts::row_sum(std::size_t c) const {
  long long s = 0;
  for (std::size_t j = 0; j < num_classes; ++j) s += at(c, j);
  return s;
}

long long ConfusionCounts::col_sum(std::size_t c) const {
  long long s = 0;
  for (std::size_t i = 0; i < num_classes; ++i) s += at(i, c);
  return s;
}

std::vector<std::vector<double>> ConfusionCounts::row_normalized() const {
  std::vector<std::vector<double>> out(num_classes, std::vector<double>(num_classes, 0.0));
  for (std::size_t i = 0; i < num_classes; ++i) {
    const long long rs = row_sum(i);
    if (rs == 0) continue;
    for (std::size_t j = 0; j < num_classes; ++j) {
      out[i][j] = static_cast<double>(at(i, j)) / static_cast<double>(rs);
    }
  }
  return out;
}

ConfusionCounts confusion(std::span<const int> truth, std::span<const int> predicted, std::size_t k) {
  if (truth.size() != predicted.size()) {
    fail(ErrorCode::ShapeMismatch, "truth and prediction lengths differ");
  }
  ConfusionCounts cm;
  cm.num_classes = k;
  cm.counts.assign(k * k, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int t = truth[i];
    const int p = predicted[i];
    if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= k || static_cast<std::size_t>(p) >= k) {
      fail(ErrorCode::LabelOutOfRange, "label outside [0, " + std::to_string(k) + ")");
    }
    ++cm.counts[static_cast<std::size_t>(t) * k + static_cast<std::size_t>(p)];
  }
  return cm;
}

double f1_score(double precision, double recall) {
  const double d = precision + recall;
  return d > 0.0 ? 2.0 * precision * recall / d : 0.0;
}

MetricsReport metrics_from_confusion(const ConfusionCounts& counts) {
  const long long total = counts.total();
  if (counts.num_classes == 0 || total == 0) fail(ErrorCode::EmptyMatrix, "confusion matrix is empty");
  MetricsReport r;
  r.counts = counts;
  const std::size_t k = counts.num_classes;
  long long diag = 0;
  for (std::size_t c = 0; c < k; ++c) diag += counts.at(c, c);
  r.accuracy = static_cast<double>(diag) / static_cast<double>(total);

  r.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    auto& m = r.per_class[c];
    const long long tp = counts.at(c, c);
    const long long predicted = counts.col_sum(c);
    m.support = counts.row_sum(c);
    m.precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    m.recall = m.support > 0 ? static_cast<double>(tp) / static_cast<double>(m.support) : 0.0;
    m.f1 = f1_score(m.precision, m.recall);

    r.macro.precision += m.precision / static_cast<double>(k);
    r.macro.recall += m.recall / static_cast<double>(k);
    r.macro.f1 += m.f1 / static_cast<double>(k);
    const double w = static_cast<double>(m.support) / static_cast<double>(total);
    r.weighted.precision += w * m.precision;
    r.weighted.recall += w * m.recall;
    r.weighted.f1 += w * m.f1;
  }
  r.macro.support = r.weighted.support = total;
  r.normalized = counts.row_normalized();
  return r;
}

std::string render_text(const MetricsReport& r, const dataset::LabelMap& labels) {
  const std::size_t k = r.counts.num_classes;
  std::size_t name_w = 12;
  for (std::size_t c = 0; c < k; ++c) name_w = std::max(name_w, class_name(labels, c).size());

  std::ostringstream out;
  out << "samples          " << r.counts.total() << '\n';
  out << "accuracy         " << fixed(r.accuracy, 4) << '\n';
  out << "macro precision  " << fixed(r.macro.precision, 4) << '\n';
  out << "macro recall     " << fixed(r.macro.recall, 4) << '\n';
  out << "macro f1         " << fixed(r.macro.f1, 4) << '\n';
  out << "weighted f1      " << fixed(r.weighted.f1, 4) << "\n\n";

  auto pad = [&](const std::string& s) { return s + std::string(name_w - s.size(), ' '); };
  out << pad("class") << "  precision     recall         f1    support\n";
  for (std::size_t c = 0; c < k; ++c) {
    const auto& m = r.per_class[c];
    char line[128];
    std::snprintf(line, sizeof(line), "  %9.4f  %9.4f  %9.4f  %9lld\n", m.precision, m.recall, m.f1,
                  m.support);
    out << pad(class_name(labels, c)) << line;
  }
  out << "\nnormalized confusion (rows = true, columns = predicted)\n" << pad("");
  for (std::size_t j = 0; j < k; ++j) {
    std::string n = class_name(labels, j).substr(0, 9);
    out << "  " << std::string(9 - n.size(), ' ') << n;
  }
  out << '\n';
  for (std::size_t i = 0; i < k; ++i) {
    out << pad(class_name(labels, i));
    for (std::size_t j = 0; j < k; ++j) {
      char cell[32];
      std::snprintf(cell, sizeof(cell), "  %9.4f", r.normalized[i][j]);
      out << cell;
    }
    out << '\n';
  }
  return out.str();
}

std::string render_csv(const MetricsReport& r, const dataset::LabelMap& labels) {
  const std::size_t k = r.counts.num_classes;
  std::ostringstream out;
  out << "class,precision,recall,f1,support\n";
  for (std::size_t c = 0; c < k; ++c) {
    const auto& m = r.per_class[c];
    out << class_name(labels, c) << ',' << fixed(m.precision, 6) << ',' << fixed(m.recall, 6) << ','
        << fixed(m.f1, 6) << ',' << m.support << '\n';
  }
  out << "macro," << fixed(r.macro.precision, 6) << ',' << fixed(r.macro.recall, 6) << ','
      << fixed(r.macro.f1, 6) << ',' << r.macro.support << '\n';
  out << "weighted," << fixed(r.weighted.precision, 6) << ',' << fixed(r.weighted.recall, 6) << ','
      << fixed(r.weighted.f1, 6) << ',' << r.weighted.support << '\n';
  out << "accuracy," << fixed(r.accuracy, 6) << ",,," << r.counts.total() << '\n';
  out << "\ntrue\\predicted";
  for (std::size_t j = 0; j < k; ++j) out << ',' << class_name(labels, j);
  out << '\n';
  for (std::size_t i = 0; i < k; ++i) {
    out << class_name(labels, i);
    for (std::size_t j = 0; j < k; ++j) out << ',' << fixed(r.normalized[i][j], 4);
    out << '\n';
  }
  return out.str();
}

}  // namespace suf::eval
