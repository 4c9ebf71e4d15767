#pragma once

// Synthetic counter traces drawn from per-class marginal statistics
// (mean, std, min, max per feature, counts per 200 ms interval).
//
// Each interval and feature is an independent truncated Gaussian draw:
// redraw until inside [min, max] (at most 100 redraws, then clamp), rounded
// to the nearest integer count. There is no temporal correlation.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "suf/dataset.hpp"
#include "suf/ingest.hpp"

namespace suf::synth {

struct FeatureProfile {
  std::string event;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;

  bool operator==(const FeatureProfile&) const = default;
};

struct ClassProfile {
  std::string name;
  std::vector<FeatureProfile> features;

  const FeatureProfile& feature(std::string_view event) const;
  std::vector<std::string> events() const;
  bool operator==(const ClassProfile&) const = default;
};

enum class Level { Baseline, SlightlyLow, Low, SlightlyHigh, High, Higher };

Level parse_level(std::string_view text);  // throws UnknownLevel
std::string_view to_string(Level level);

/// Mean multiplier per level. These are calibration knobs, not measured data.
struct LevelMultipliers {
  double baseline = 1.0;
  double slightly_low = 0.90;
  double low = 0.60;
  double slightly_high = 1.15;
  double high = 1.50;
  double higher = 1.70;

  double of(Level level) const;
};

/// Qualitative level per event, relative to a baseline class.
using LevelTable = std::map<std::string, Level>;

/// Scales mean and std by the level multiplier and widens [min, max] to cover
/// mean +/- 4 std (clamped at zero). Every baseline feature needs a level
/// (UnknownLevel otherwise); levels for events absent from the baseline are ignored.
ClassProfile derive_profile(const ClassProfile& baseline, const LevelTable& levels,
                            std::string name, const LevelMultipliers& multipliers = {});

ingest::TraceCsv generate_trace(const ClassProfile& profile, std::size_t n_intervals,
                                std::uint64_t seed, double interval_s = 0.2);

/// PI_NORMAL, PI_DOS, ROUTER_NORMAL, ROUTER_DOS from the measured tables, plus
/// PI_/ROUTER_ ICMP, PORT_SCAN, TELNET, TCP_SYN derived via the box-plot levels.
const std::map<std::string, ClassProfile>& builtin_profiles();

/// Box-plot level tables keyed "PI_ICMP", "ROUTER_TELNET", ... (the derived classes).
const std::map<std::string, LevelTable>& builtin_level_tables();

struct ClassSpec {
  ClassProfile profile;
  std::string class_name;  // LabelMap name
};

/// "pi-binary", "pi-multi", "router-binary", "router-multi".
std::vector<ClassSpec> class_set(std::string_view name);
dataset::DeviceProfile class_set_device(std::string_view name);

/// One trace per class (seeded per class), merged into a labeled table.
dataset::LabeledTable generate_dataset(const std::vector<ClassSpec>& classes, std::size_t n_per_class,
                                       std::uint64_t seed, const dataset::LabelMap& map,
                                       const dataset::DeviceProfile& device);

std::string profiles_to_json(const std::vector<ClassProfile>& profiles);
std::vector<ClassProfile> profiles_from_json(std::string_view text);
void save_profiles(const std::vector<ClassProfile>& profiles, const std::filesystem::path& path);
std::vector<ClassProfile> load_profiles(const std::filesystem::path& path);

}  // namespace suf::synth
