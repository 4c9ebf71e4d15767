#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "suf/pipeline.hpp"

namespace suf::tools {

using std::filesystem::path;

struct IngestOptions {
  path input;
  path out;
  std::vector<std::string> events;  // empty: discover from the first interval
  std::string device;               // optional: events must be available there
};
void cmd_ingest(const IngestOptions& o);

struct LabelOptions {
  std::vector<std::string> traces;  // CLASS=PATH
  std::string device = "any";
  std::string missing = "drop";
  path out;
};
void cmd_label(const LabelOptions& o);

struct StatsOptions {
  path a;
  path b;
  std::string label_a = "A";
  std::string label_b = "B";
  std::string format = "text";
  path out;
  path boxplot_a;
  path boxplot_b;
};
void cmd_stats(const StatsOptions& o, std::ostream& stdout_stream);

struct SynthOptions {
  std::string classes;                // class set, e.g. pi-binary
  std::vector<std::string> profiles;  // single-profile traces instead of a class set
  path profiles_file;                 // extra profiles (JSON) to look names up in
  std::size_t n = 2000;
  std::uint64_t seed = 0;
  path out;
  path dump_profiles;
};
void cmd_synth(const SynthOptions& o);

struct TrainOptions {
  std::vector<path> inputs;
  path out;
  pipeline::ExperimentConfig experiment;
  path report;
  std::string format = "text";
  bool quiet = false;
};
void cmd_train(const TrainOptions& o, std::ostream& log);

struct EvalOptions {
  path checkpoint;
  path input;
  path out;
  std::string format = "text";
};
void cmd_eval(const EvalOptions& o, std::ostream& stdout_stream);

struct PredictOptions {
  path checkpoint;
  path input;
  path out;
};
void cmd_predict(const PredictOptions& o, std::ostream& stdout_stream);

}  // namespace suf::tools
