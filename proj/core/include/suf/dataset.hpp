#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "suf/ingest.hpp"

namespace suf::dataset {

/// Class name to contiguous integer id. The standard map is
/// Normal=0, DoS=1, ICMP=2, Port_Scan=3, Telnet=4, TCP_SYN=5.
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(std::vector<std::string> names);

  static LabelMap standard();

  int id(std::string_view name) const;  // throws UnknownClass
  const std::string& name(int id) const;
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  /// The first `k` names.
  LabelMap truncated(std::size_t k) const;

  bool operator==(const LabelMap&) const = default;

 private:
  std::vector<std::string> names_;
};

struct LabeledTable {
  std::vector<std::string> feature_names;
  std::vector<std::string> times;           // one per row; carried through for CSV output
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;

  std::size_t size() const { return rows.size(); }
  std::size_t width() const { return feature_names.size(); }
  std::vector<double> column(std::size_t feature) const;
  /// Rows whose label equals `label`, same feature set.
  LabeledTable filter_label(int label) const;

  bool operator==(const LabeledTable&) const = default;
};

/// Perf events a device can count.
struct DeviceProfile {
  std::string device_id;
  std::set<std::string> available_events;
};

/// Every generic event name the collection scripts may request.
const std::vector<std::string>& perf_event_catalog();

/// Raspberry Pi 5 (Broadcom BCM2712).
DeviceProfile device_a();
/// Turris Omnia (Marvell Armada 385).
DeviceProfile device_b();
/// No restriction: every catalog event.
DeviceProfile any_device();
/// Lookup by id or alias ("A", "pi", "device-a", "B", "router", "any", ...).
DeviceProfile device_by_name(std::string_view name);

enum class MissingPolicy { Drop, ImputeZero };

struct LabeledTrace {
  ingest::TraceCsv trace;
  std::string class_name;
};

LabeledTable label_and_merge(const std::vector<LabeledTrace>& traces, const LabelMap& map,
                             const DeviceProfile& profile,
                             MissingPolicy policy = MissingPolicy::Drop);

std::pair<LabeledTable, LabeledTable> split_train_val(const LabeledTable& table,
                                                      double val_fraction, std::uint64_t seed);

/// Labeled CSV: the trace schema with a trailing integer `label` column.
std::string format_labeled_csv(const LabeledTable& table);
LabeledTable parse_labeled_csv(std::string_view text);
void write_labeled_csv(const LabeledTable& table, const std::filesystem::path& path);
LabeledTable read_labeled_csv(const std::filesystem::path& path);

/// Reads either a labeled CSV or a plain trace CSV (labels default to
/// `default_label`); rows with missing counts are dropped.
LabeledTable read_feature_csv(const std::filesystem::path& path, int default_label = 0);

}  // namespace suf::dataset
