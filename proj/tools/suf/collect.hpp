#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace suf::tools {

struct CollectOptions {
  std::string binary;               // workload executable
  std::vector<std::string> args;    // workload arguments
  std::string name;                 // output is <out_dir>/data_<name>.txt
  std::vector<std::string> events;
  int interval_ms = 200;
  double duration_s = 3600.0;
  bool respawn = false;             // restart the workload whenever it exits
  std::string perf = "perf";
  std::filesystem::path out_dir = ".";
};

/// Runs the workload and `perf stat -e ... -a -I interval` side by side for
/// the duration, then terminates both. Returns the capture path.
std::filesystem::path collect(const CollectOptions& options);

}  // namespace suf::tools
