#include "suf/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "suf/error.hpp"
#include "suf/random.hpp"

namespace suf::synth {
namespace {

// One row of a Normal-vs-DoS statistics table.
struct TableRow {
  const char* event;
  double min_normal, min_dos, max_normal, max_dos;
  double std_normal, std_dos, mean_normal, mean_dos;
};

// Raspberry Pi 5 (Device A), counts per 200 ms interval.
// L1-icache-loads mean (DoS) is printed as "217,476,95.11" in the source
// table; 217,476,951.1 is the only reading inside that row's [min, max].
constexpr TableRow kPiTable[] = {
    {"L1-dcache-load-misses", 3694179, 1960085, 9931251, 3346366, 197495.79, 89843.13, 4162510.61, 2259924},
    {"L1-dcache-loads", 144430577, 55283572, 564125847, 115208522, 29900102.93, 3828157, 166898311.2, 60546280},
    {"L1-icache-load-misses", 4334868, 11988798, 14935291, 23845377, 476794.17, 542301.83, 7383203.66, 21747695.11},
    {"L1-icache-loads", 153729689, 119887798, 550247352, 238453777, 27168996.52, 542301.83, 181891032.1, 217476951.1},
    {"LLC-load-misses", 2591956, 1935723, 9448360, 3393875, 314625.14, 95823.33, 2940353.55, 2259892},
    {"LLC-loads", 8452497, 5521460, 15392321, 11217462, 362198.20, 4010832, 9327951.78, 6052755},
    {"branch-load-misses", 2308776, 4807422, 5209952, 9389385, 183896.31, 206308.00, 2986880.53, 8347052},
    {"branch-loads", 89497978, 52146008, 344407371, 110217462, 21289043.41, 4010832, 105450715.6, 60527580},
    {"branch-misses", 2507594, 1935723, 5096456, 3393875, 183181.98, 95823.33, 2986123.26, 2259892},
    {"bus-cycles", 416516962, 520860422, 1077054794, 648209507, 50029090.58, 10988368.99, 474301365.2, 557045053.5},
    {"cache-misses", 3753468, 1935723, 10038657, 3393875, 203649.07, 95823.33, 4161924.25, 2259892},
    {"cache-references", 143309657, 52146008, 522535456, 110217462, 30083358.81, 4010832, 166899408.4, 60527580},
    {"cpu-cycles", 422464162, 520860422, 1067247088, 648209507, 49608950.36, 10988368.99, 474358448.8, 557045053.5},
    {"dTLB-load-misses", 1134244, 1619787, 5434899, 6504337, 114798.71, 634449.75, 1334402.997, 2259046},
    {"dTLB-loads", 143718436, 52146008, 518730956, 110217462, 29981673.15, 4010832, 166962703.5, 60527580},
    {"iTLB-load-misses", 129621, 1935723, 3424760, 3393875, 99503.11, 95823.33, 164253.34, 2259892},
    {"iTLB-loads", 142829458, 52146008, 449225254, 110217462, 24923036.38, 4010832, 165321664.4, 60527580},
    {"instructions", 423369339, 168377524, 1581925852, 350625667, 89918209.17, 5984553, 492356210, 191641573.7},
    {"stalled-cycles-backend", 130643312, 372718288, 504411919, 511850597, 13976568.16, 7885738, 145687285.9, 426475802.2},
    {"stalled-cycles-frontend", 128058304, 88138223, 340998483, 143933966, 13496242.76, 4544204, 143269667.3, 115176038.7},
};

// Turris Omnia (Device B).
constexpr TableRow kRouterTable[] = {
    {"branches", 17966181, 15634284, 29049644, 32272266, 1217049.77, 1276968.46, 19289352.21, 19304926.29},
    {"branch-misses", 6026238, 4807422, 9493656, 9389385, 157480.84, 206308.01, 8359985.69, 8347051.75},
    {"cache-misses", 1905018, 1935723, 3294973, 3393875, 89387.24, 95823.33, 2272277.01, 2259892.11},
    {"cache-references", 56549194, 52146008, 90716025, 110217462, 3823844.07, 4010831.51, 60564424.71, 60527581.94},
    {"cpu-cycles", 517061015, 520860422, 646152372, 648209507, 10591683.72, 10988368.99, 556009406.4, 557045053.5},
    {"instructions", 177321599, 168377524, 245462058, 350625667, 5074403.29, 5984552.81, 191179338.1, 191641573.7},
    {"stalled-cycles-backend", 376762721, 372718288, 524937791, 511850597, 7629991.32, 7885738.00, 425839237.6, 426475802.2},
    {"stalled-cycles-frontend", 87446592, 88138223, 141962111, 143933966, 3456586.16, 4544204.32, 115741544.9, 115176038.7},
    {"L1-dcache-load-misses", 1878334, 1960085, 3374429, 3346366, 82635.92, 89843.13, 2272111.18, 2259923.93},
    {"L1-dcache-loads", 56739767, 55283572, 89000662, 115208522, 3588934.18, 3828156.85, 60570155.28, 60546280.35},
    {"L1-dcache-store-misses", 1956609, 1942378, 3339243, 3353678, 83049.47, 89682.62, 2272186.13, 2259914.00},
    {"L1-dcache-stores", 56972961, 54419554, 88811829, 140522484, 3832611.75, 4057428.67, 60571193.08, 60544835.71},
    {"L1-icache-load-misses", 13827766, 11988798, 24108450, 23845377, 370845.55, 542301.83, 21692797.93, 21747695.11},
    {"branch-load-misses", 6722120, 6135233, 9518328, 9422957, 159992.08, 200509.49, 8358113.57, 8350060.70},
    {"branch-loads", 30159233, 28740801, 42451703, 51885196, 1212427.67, 1342774.59, 31495177.82, 31465806.96},
    {"dTLB-load-misses", 1614382, 1619787, 6056816, 6504337, 587344.22, 634449.75, 2152572.12, 2259046.00},
    {"dTLB-store-misses", 1547597, 1624507, 5964164, 6174406, 587151.27, 632784.82, 2151872.26, 2258214.79},
    {"iTLB-load-misses", 443194, 422318, 978109, 1040035, 45928.79, 77770.21, 661489.87, 695236.23},
};

// Box-plot level columns, in order: DoS, ICMP, PortScan, TCPSYN, Telnet.
struct LevelRow {
  const char* event;
  const char* levels[5];
};

constexpr LevelRow kPiLevels[] = {
    {"branch-load-misses", {"Slightly Low", "High", "High", "Slightly Low", "Slightly High"}},
    {"branch-loads", {"Slightly Low", "Slightly Low", "High", "Slightly Low", "Slightly High"}},
    {"branch-misses", {"Slightly Low", "Slightly Low", "High", "Slightly Low", "Slightly High"}},
    {"bus-cycles", {"Slightly Low", "Low", "High", "Slightly Low", "Slightly High"}},
    {"cache-misses", {"Slightly Low", "Low", "High", "Slightly Low", "Slightly High"}},
    {"cache-references", {"Slightly Low", "Low", "High", "Slightly Low", "Slightly High"}},
    {"cpu-cycles", {"Slightly Low", "Low", "High", "Slightly Low", "Slightly High"}},
    {"dTLB-load-misses", {"Slightly Low", "Low", "High", "Slightly Low", "Slightly High"}},
    {"dTLB-loads", {"Slightly Low", "Low", "High", "Slightly Low", "Slightly High"}},
    {"instructions", {"Slightly Low", "Low", "High", "Slightly Low", "Slightly High"}},
    {"iTLB-load-misses", {"Low", "High", "Slightly High", "Low", "Slightly High"}},
    {"iTLB-loads", {"Low", "High", "Slightly High", "Low", "Slightly High"}},
    {"L1-dcache-load-misses", {"Low", "High", "Higher", "Slightly Low", "Slightly High"}},
    {"L1-dcache-loads", {"Low", "High", "Slightly High", "Slightly Low", "Slightly High"}},
    {"L1-icache-load-misses", {"Low", "High", "Slightly High", "Low", "Slightly High"}},
    {"L1-icache-loads", {"Low", "High", "Slightly High", "Low", "Slightly High"}},
    {"LLC-load-misses", {"Low", "High", "Slightly High", "Low", "Slightly High"}},
    {"LLC-loads", {"Low", "High", "Slightly High", "Low", "Slightly High"}},
    {"stalled-cycles-backend", {"Low", "High", "Slightly High", "Low", "Slightly High"}},
    {"stalled-cycles-frontend", {"Low", "High", "Slightly High", "Low", "Slightly High"}},
};

// The router summary has no rows for branch-load-misses, branch-loads and
// dTLB-store-misses; they stay at Baseline. Rows for events the router cannot
// count (L1-icache-loads, LLC-*) are kept and ignored by derive_profile.
constexpr LevelRow kRouterLevels[] = {
    {"branches", {"Slightly Low", "Low", "High", "Slightly Low", "Slightly High"}},
    {"branch-misses", {"Slightly Low", "Low", "High", "Slightly Low", "High"}},
    {"cache-misses", {"Slightly Low", "Low", "High", "Slightly Low", "High"}},
    {"cache-references", {"Slightly Low", "Low", "High", "Slightly Low", "High"}},
    {"cpu-cycles", {"Slightly Low", "Low", "High", "Slightly Low", "High"}},
    {"instructions", {"Slightly Low", "Low", "High", "Slightly Low", "High"}},
    {"stalled-cycles-backend", {"Low", "High", "Slightly High", "Low", "High"}},
    {"stalled-cycles-frontend", {"Low", "High", "Slightly High", "Low", "High"}},
    {"L1-dcache-load-misses", {"Low", "High", "Slightly High", "Low", "High"}},
    {"L1-dcache-loads", {"Low", "High", "Slightly High", "Low", "High"}},
    {"L1-dcache-store-misses", {"Low", "High", "Slightly High", "Low", "High"}},
    {"L1-dcache-stores", {"Low", "High", "Slightly High", "Low", "High"}},
    {"L1-icache-load-misses", {"Low", "High", "Slightly High", "Low", "High"}},
    {"L1-icache-loads", {"Low", "High", "Slightly High", "Low", "High"}},
    {"LLC-load-misses", {"Low", "High", "Slightly High", "Low", "High"}},
    {"LLC-loads", {"Low", "High", "Slightly High", "Low", "High"}},
    {"dTLB-load-misses", {"Slightly Low", "Low", "High", "Slightly Low", "High"}},
    {"iTLB-load-misses", {"Low", "High", "Slightly High", "Low", "High"}},
    {"branch-load-misses", {"Baseline", "Baseline", "Baseline", "Baseline", "Baseline"}},
    {"branch-loads", {"Baseline", "Baseline", "Baseline", "Baseline", "Baseline"}},
    {"dTLB-store-misses", {"Baseline", "Baseline", "Baseline", "Baseline", "Baseline"}},
};

template <std::size_t N>
std::pair<ClassProfile, ClassProfile> from_table(const TableRow (&rows)[N], const std::string& prefix) {
  ClassProfile normal{prefix + "_NORMAL", {}};
  ClassProfile dos{prefix + "_DOS", {}};
  for (const auto& r : rows) {
    normal.features.push_back({r.event, r.mean_normal, r.std_normal, r.min_normal, r.max_normal});
    dos.features.push_back({r.event, r.mean_dos, r.std_dos, r.min_dos, r.max_dos});
  }
  return {normal, dos};
}

template <std::size_t N>
LevelTable level_column(const LevelRow (&rows)[N], std::size_t column) {
  LevelTable t;
  for (const auto& r : rows) t[r.event] = parse_level(r.levels[column]);
  return t;
}

// Derived classes and their level column (DoS comes from measured data).
constexpr std::pair<const char*, std::size_t> kDerived[] = {
    {"ICMP", 1}, {"PORT_SCAN", 2}, {"TCP_SYN", 3}, {"TELNET", 4}};

void check_profile(const ClassProfile& p) {
  for (const auto& f : p.features) {
    if (!(std::isfinite(f.mean) && std::isfinite(f.std) && std::isfinite(f.min) && std::isfinite(f.max)) ||
        f.max < f.min || f.std < 0.0) {
      fail(ErrorCode::DegenerateProfile, "profile " + p.name + ", feature " + f.event +
                                             ": requires finite values, min <= max and std >= 0");
    }
  }
}

std::string normalize_level_text(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == ' ' || c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

const FeatureProfile& ClassProfile::feature(std::string_view event) const {
  for (const auto& f : features) {
    if (f.event == event) return f;
  }
  fail(ErrorCode::FeatureMismatch, "profile " + name + " has no feature " + std::string(event));
}

std::vector<std::string> ClassProfile::events() const {
  std::vector<std::string> out;
  for (const auto& f : features) out.push_back(f.event);
  return out;
}

Level parse_level(std::string_view text) {
  const std::string n = normalize_level_text(text);
  if (n == "baseline") return Level::Baseline;
  if (n == "slightlylow") return Level::SlightlyLow;
  if (n == "low") return Level::Low;
  if (n == "slightlyhigh") return Level::SlightlyHigh;
  if (n == "high") return Level::High;
  if (n == "higher") return Level::Higher;
  fail(ErrorCode::UnknownLevel, "unknown level '" + std::string(text) + "'");
}

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Baseline: return "Baseline";
    case Level::SlightlyLow: return "Slightly Low";
    case Level::Low: return "Low";
    case Level::SlightlyHigh: return "Slightly High";
    case Level::High: return "High";
    case Level::Higher: return "Higher";
  }
  return "Baseline";
}

double LevelMultipliers::of(Level level) const {
  switch (level) {
    case Level::Baseline: return baseline;
    case Level::SlightlyLow: return slightly_low;
    case Level::Low: return low;
    case Level::SlightlyHigh: return slightly_high;
    case Level::High: return high;
    case Level::Higher: return higher;
  }
  return 1.0;
}

ClassProfile derive_profile(const ClassProfile& baseline, const LevelTable& levels, std::string name,
                            const LevelMultipliers& multipliers) {
  check_profile(baseline);
  ClassProfile out{std::move(name), {}};
  for (const auto& f : baseline.features) {
    auto it = levels.find(f.event);
    if (it == levels.end()) {
      fail(ErrorCode::UnknownLevel, "no level assigned to feature " + f.event);
    }
    const double k = multipliers.of(it->second);
    FeatureProfile d = f;
    d.mean = f.mean * k;
    d.std = f.std * k;
    d.min = std::max(0.0, std::min(f.min, d.mean - 4.0 * d.std));
    d.max = std::max(f.max, d.mean + 4.0 * d.std);
    out.features.push_back(d);
  }
  return out;
}

ingest::TraceCsv generate_trace(const ClassProfile& profile, std::size_t n_intervals, std::uint64_t seed,
                                double interval_s) {
  if (n_intervals < 1) fail(ErrorCode::UsageError, "n_intervals must be >= 1");
  check_profile(profile);
  ingest::TraceCsv trace;
  trace.header = profile.events();
  trace.rows.reserve(n_intervals);
  Rng rng(seed);
  for (std::size_t i = 0; i < n_intervals; ++i) {
    ingest::IntervalRecord rec;
    char ts[64];
    std::snprintf(ts, sizeof(ts), "%.9f", static_cast<double>(i + 1) * interval_s);
    rec.timestamp = ts;
    rec.counts.reserve(profile.features.size());
    for (const auto& f : profile.features) {
      double x = f.mean + f.std * rng.normal();
      for (int tries = 0; (x < f.min || x > f.max) && tries < 100; ++tries) {
        x = f.mean + f.std * rng.normal();
      }
      x = std::clamp(x, f.min, f.max);
      double lo = std::max(0.0, std::ceil(f.min));
      double hi = std::floor(f.max);
      double v = std::round(x);
      if (lo <= hi) v = std::clamp(v, lo, hi);
      rec.counts.emplace_back(static_cast<std::uint64_t>(std::max(0.0, v)));
    }
    trace.rows.push_back(std::move(rec));
  }
  return trace;
}

const std::map<std::string, LevelTable>& builtin_level_tables() {
  static const std::map<std::string, LevelTable> tables = [] {
    std::map<std::string, LevelTable> t;
    for (const auto& [suffix, column] : kDerived) {
      t[std::string("PI_") + suffix] = level_column(kPiLevels, column);
      t[std::string("ROUTER_") + suffix] = level_column(kRouterLevels, column);
    }
    return t;
  }();
  return tables;
}

const std::map<std::string, ClassProfile>& builtin_profiles() {
  static const std::map<std::string, ClassProfile> profiles = [] {
    std::map<std::string, ClassProfile> p;
    auto [pi_normal, pi_dos] = from_table(kPiTable, "PI");
    auto [router_normal, router_dos] = from_table(kRouterTable, "ROUTER");
    const auto& levels = builtin_level_tables();
    for (const auto& [suffix, column] : kDerived) {
      const std::string pi = std::string("PI_") + suffix;
      const std::string router = std::string("ROUTER_") + suffix;
      p[pi] = derive_profile(pi_normal, levels.at(pi), pi);
      p[router] = derive_profile(router_normal, levels.at(router), router);
    }
    p["PI_NORMAL"] = pi_normal;
    p["PI_DOS"] = pi_dos;
    p["ROUTER_NORMAL"] = router_normal;
    p["ROUTER_DOS"] = router_dos;
    return p;
  }();
  return profiles;
}

std::vector<ClassSpec> class_set(std::string_view name) {
  std::string prefix;
  bool multi = false;
  if (name == "pi-binary" || name == "pi-multi") prefix = "PI_";
  if (name == "router-binary" || name == "router-multi") prefix = "ROUTER_";
  if (prefix.empty()) fail(ErrorCode::UnknownProfile, "unknown class set '" + std::string(name) + "'");
  multi = name.ends_with("multi");

  const auto& p = builtin_profiles();
  std::vector<ClassSpec> out = {{p.at(prefix + "NORMAL"), "Normal"}, {p.at(prefix + "DOS"), "DoS"}};
  if (multi) {
    out.push_back({p.at(prefix + "ICMP"), "ICMP"});
    out.push_back({p.at(prefix + "PORT_SCAN"), "Port_Scan"});
    out.push_back({p.at(prefix + "TELNET"), "Telnet"});
    out.push_back({p.at(prefix + "TCP_SYN"), "TCP_SYN"});
  }
  return out;
}

dataset::DeviceProfile class_set_device(std::string_view name) {
  if (name.starts_with("pi")) return dataset::device_a();
  if (name.starts_with("router")) return dataset::device_b();
  fail(ErrorCode::UnknownProfile, "unknown class set '" + std::string(name) + "'");
}

dataset::LabeledTable generate_dataset(const std::vector<ClassSpec>& classes, std::size_t n_per_class,
                                       std::uint64_t seed, const dataset::LabelMap& map,
                                       const dataset::DeviceProfile& device) {
  std::vector<dataset::LabeledTrace> traces;
  traces.reserve(classes.size());
  for (const auto& c : classes) {
    const auto id = static_cast<std::uint64_t>(map.id(c.class_name));
    traces.push_back({generate_trace(c.profile, n_per_class, mix_seed(seed, id)), c.class_name});
  }
  return dataset::label_and_merge(traces, map, device);
}

std::string profiles_to_json(const std::vector<ClassProfile>& profiles) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& p : profiles) {
    nlohmann::json feats = nlohmann::json::array();
    for (const auto& f : p.features) {
      feats.push_back({{"event", f.event}, {"mean", f.mean}, {"std", f.std}, {"min", f.min}, {"max", f.max}});
    }
    doc.push_back({{"name", p.name}, {"features", feats}});
  }
  return doc.dump(2) + "\n";
}

std::vector<ClassProfile> profiles_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text.begin(), text.end());
    std::vector<ClassProfile> out;
    for (const auto& p : doc) {
      ClassProfile cp{p.at("name").get<std::string>(), {}};
      for (const auto& f : p.at("features")) {
        cp.features.push_back({f.at("event").get<std::string>(), f.at("mean").get<double>(),
                               f.at("std").get<double>(), f.at("min").get<double>(), f.at("max").get<double>()});
      }
      check_profile(cp);
      out.push_back(std::move(cp));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::CorruptDocument, std::string("profile document: ") + e.what());
  }
}

void save_profiles(const std::vector<ClassProfile>& profiles, const std::filesystem::path& path) {
  ingest::write_text_file(path, profiles_to_json(profiles));
}

std::vector<ClassProfile> load_profiles(const std::filesystem::path& path) {
  return profiles_from_json(ingest::read_text_file(path));
}

}  // namespace suf::synth
