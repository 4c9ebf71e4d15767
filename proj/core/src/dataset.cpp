#include "suf/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>

#include "suf/error.hpp"
#include "suf/random.hpp"

namespace suf::dataset {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string format_value(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 9.0e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(',', start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

}  // namespace

LabelMap::LabelMap(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = i + 1; j < names_.size(); ++j) {
      if (names_[i] == names_[j]) fail(ErrorCode::UnknownClass, "duplicate class name " + names_[i]);
    }
  }
}

LabelMap LabelMap::standard() {
  return LabelMap({"Normal", "DoS", "ICMP", "Port_Scan", "Telnet", "TCP_SYN"});
}

int LabelMap::id(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) fail(ErrorCode::UnknownClass, "unknown class '" + std::string(name) + "'");
  return static_cast<int>(it - names_.begin());
}

const std::string& LabelMap::name(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= names_.size()) {
    fail(ErrorCode::LabelOutOfRange, "label " + std::to_string(id) + " outside label map");
  }
  return names_[static_cast<std::size_t>(id)];
}

LabelMap LabelMap::truncated(std::size_t k) const {
  k = std::min(k, names_.size());
  return LabelMap(std::vector<std::string>(names_.begin(), names_.begin() + static_cast<long>(k)));
}

std::vector<double> LabeledTable::column(std::size_t feature) const {
  std::vector<double> col;
  col.reserve(rows.size());
  for (const auto& r : rows) col.push_back(r.at(feature));
  return col;
}

LabeledTable LabeledTable::filter_label(int label) const {
  LabeledTable out;
  out.feature_names = feature_names;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (labels[i] != label) continue;
    out.rows.push_back(rows[i]);
    out.labels.push_back(labels[i]);
    if (i < times.size()) out.times.push_back(times[i]);
  }
  return out;
}

const std::vector<std::string>& perf_event_catalog() {
  static const std::vector<std::string> catalog = {
      "instructions",          "branches",
      "cpu-cycles",            "branch-misses",
      "branch-loads",          "branch-load-misses",
      "stalled-cycles-backend", "stalled-cycles-frontend",
      "cache-references",      "cache-misses",
      "L1-dcache-loads",       "L1-dcache-load-misses",
      "L1-dcache-stores",      "L1-dcache-store-misses",
      "L1-icache-loads",       "L1-icache-load-misses",
      "LLC-loads",             "LLC-load-misses",
      "dTLB-loads",            "dTLB-load-misses",
      "dTLB-store-misses",     "iTLB-loads",
      "iTLB-load-misses",      "bus-cycles",
  };
  return catalog;
}

DeviceProfile device_a() {
  return {"DeviceA",
          {"instructions", "cpu-cycles", "branch-misses", "branch-loads", "branch-load-misses",
           "stalled-cycles-backend", "stalled-cycles-frontend", "cache-references", "cache-misses",
           "L1-dcache-loads", "L1-dcache-load-misses", "L1-icache-loads", "L1-icache-load-misses",
           "LLC-loads", "LLC-load-misses", "dTLB-loads", "dTLB-load-misses", "iTLB-loads",
           "iTLB-load-misses", "bus-cycles"}};
}

DeviceProfile device_b() {
  return {"DeviceB",
          {"instructions", "branches", "cpu-cycles", "branch-misses", "branch-loads",
           "branch-load-misses", "stalled-cycles-backend", "stalled-cycles-frontend",
           "cache-references", "cache-misses", "L1-dcache-loads", "L1-dcache-load-misses",
           "L1-dcache-stores", "L1-dcache-store-misses", "L1-icache-load-misses",
           "dTLB-load-misses", "dTLB-store-misses", "iTLB-load-misses"}};
}

DeviceProfile any_device() {
  const auto& cat = perf_event_catalog();
  return {"Any", std::set<std::string>(cat.begin(), cat.end())};
}

DeviceProfile device_by_name(std::string_view name) {
  const std::string n = lower(name);
  if (n == "a" || n == "devicea" || n == "device-a" || n == "pi" || n == "pi5") return device_a();
  if (n == "b" || n == "deviceb" || n == "device-b" || n == "router" || n == "turris") return device_b();
  if (n == "any") return any_device();
  fail(ErrorCode::UnknownProfile, "unknown device profile '" + std::string(name) + "'");
}

LabeledTable label_and_merge(const std::vector<LabeledTrace>& traces, const LabelMap& map,
                             const DeviceProfile& profile, MissingPolicy policy) {
  LabeledTable out;
  if (traces.empty()) return out;
  out.feature_names = traces.front().trace.header;
  const std::size_t width = out.feature_names.size();

  for (const auto& lt : traces) {
    const int label = map.id(lt.class_name);
    for (const auto& e : lt.trace.header) {
      if (!profile.available_events.contains(e)) {
        fail(ErrorCode::EventNotOnDevice, "event " + e + " is not available on " + profile.device_id);
      }
    }
    // Same event set required; columns are reordered to the first trace.
    if (lt.trace.header.size() != width) {
      fail(ErrorCode::HeaderMismatch, "trace for " + lt.class_name + " has a different event count");
    }
    std::vector<std::size_t> source(width);
    for (std::size_t i = 0; i < width; ++i) {
      auto it = std::find(lt.trace.header.begin(), lt.trace.header.end(), out.feature_names[i]);
      if (it == lt.trace.header.end()) {
        fail(ErrorCode::HeaderMismatch,
             "trace for " + lt.class_name + " lacks event " + out.feature_names[i]);
      }
      source[i] = static_cast<std::size_t>(it - lt.trace.header.begin());
    }

    for (const auto& rec : lt.trace.rows) {
      if (rec.counts.size() != lt.trace.header.size()) {
        fail(ErrorCode::SchemaMismatch, "ragged row at " + rec.timestamp);
      }
      if (rec.has_missing() && policy == MissingPolicy::Drop) continue;
      std::vector<double> row(width);
      for (std::size_t i = 0; i < width; ++i) {
        const auto& c = rec.counts[source[i]];
        row[i] = c ? static_cast<double>(*c) : 0.0;
      }
      out.rows.push_back(std::move(row));
      out.labels.push_back(label);
      out.times.push_back(rec.timestamp);
    }
  }
  return out;
}

std::pair<LabeledTable, LabeledTable> split_train_val(const LabeledTable& table,
                                                      double val_fraction, std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    fail(ErrorCode::UsageError, "val_fraction must lie in (0, 1)");
  }
  int max_label = -1;
  for (int l : table.labels) max_label = std::max(max_label, l);
  if (max_label < 0) fail(ErrorCode::TooFewRows, "empty table");

  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label) + 1);
  for (std::size_t i = 0; i < table.labels.size(); ++i) {
    by_class[static_cast<std::size_t>(table.labels[i])].push_back(i);
  }

  std::vector<bool> to_val(table.size(), false);
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& idx = by_class[c];
    if (idx.empty()) continue;
    if (idx.size() < 2) {
      fail(ErrorCode::TooFewRows, "class " + std::to_string(c) + " has fewer than 2 rows");
    }
    Rng rng(mix_seed(seed, c));
    rng.shuffle(std::span<std::size_t>(idx));
    auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * val_fraction));
    n_val = std::clamp<std::size_t>(n_val, 1, idx.size() - 1);
    for (std::size_t k = 0; k < n_val; ++k) to_val[idx[k]] = true;
  }

  LabeledTable train, val;
  train.feature_names = val.feature_names = table.feature_names;
  for (std::size_t i = 0; i < table.size(); ++i) {
    LabeledTable& dst = to_val[i] ? val : train;
    dst.rows.push_back(table.rows[i]);
    dst.labels.push_back(table.labels[i]);
    if (i < table.times.size()) dst.times.push_back(table.times[i]);
  }
  return {std::move(train), std::move(val)};
}

std::string format_labeled_csv(const LabeledTable& table) {
  std::string out = "time";
  for (const auto& f : table.feature_names) {
    out += ',';
    out += f;
  }
  out += ",label\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.rows[i].size() != table.width()) fail(ErrorCode::SchemaMismatch, "ragged table row");
    out += i < table.times.size() ? table.times[i] : std::to_string(i);
    for (double v : table.rows[i]) {
      out += ',';
      out += format_value(v);
    }
    out += ',';
    out += std::to_string(table.labels[i]);
    out += '\n';
  }
  return out;
}

LabeledTable parse_labeled_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) fail(ErrorCode::SchemaMismatch, "empty CSV document");
  auto head = split_commas(lines[0]);
  if (head.size() < 3 || head.front() != "time" || head.back() != "label") {
    fail(ErrorCode::SchemaMismatch, "labeled CSV header must be time,<events...>,label");
  }
  LabeledTable table;
  for (std::size_t i = 1; i + 1 < head.size(); ++i) table.feature_names.emplace_back(head[i]);
  for (std::size_t n = 1; n < lines.size(); ++n) {
    auto fields = split_commas(lines[n]);
    if (fields.size() != head.size()) {
      fail(ErrorCode::SchemaMismatch, "row " + std::to_string(n + 1) + " has wrong field count");
    }
    std::vector<double> row;
    row.reserve(table.feature_names.size());
    for (std::size_t i = 1; i + 1 < fields.size(); ++i) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
      if (fields[i].empty() || ec != std::errc() || ptr != fields[i].data() + fields[i].size()) {
        fail(ErrorCode::SchemaMismatch, "row " + std::to_string(n + 1) + ": bad value '" +
                                            std::string(fields[i]) + "'");
      }
      row.push_back(v);
    }
    int label = 0;
    auto lf = fields.back();
    auto [ptr, ec] = std::from_chars(lf.data(), lf.data() + lf.size(), label);
    if (lf.empty() || ec != std::errc() || ptr != lf.data() + lf.size() || label < 0) {
      fail(ErrorCode::SchemaMismatch, "row " + std::to_string(n + 1) + ": bad label");
    }
    table.times.emplace_back(fields[0]);
    table.rows.push_back(std::move(row));
    table.labels.push_back(label);
  }
  return table;
}

void write_labeled_csv(const LabeledTable& table, const std::filesystem::path& path) {
  ingest::write_text_file(path, format_labeled_csv(table));
}

LabeledTable read_labeled_csv(const std::filesystem::path& path) {
  return parse_labeled_csv(ingest::read_text_file(path));
}

LabeledTable read_feature_csv(const std::filesystem::path& path, int default_label) {
  const std::string text = ingest::read_text_file(path);
  const auto eol = text.find('\n');
  std::string_view first(text.data(), eol == std::string::npos ? text.size() : eol);
  if (!first.empty() && first.back() == '\r') first.remove_suffix(1);
  if (first.ends_with(",label")) return parse_labeled_csv(text);

  const auto trace = ingest::parse_trace_csv(text);
  LabeledTable table;
  table.feature_names = trace.header;
  for (const auto& rec : trace.rows) {
    if (rec.has_missing()) continue;
    std::vector<double> row;
    row.reserve(rec.counts.size());
    for (const auto& c : rec.counts) row.push_back(static_cast<double>(*c));
    table.rows.push_back(std::move(row));
    table.labels.push_back(default_label);
    table.times.push_back(rec.timestamp);
  }
  return table;
}

}  // namespace suf::dataset
