#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "collect.hpp"
#include "commands.hpp"
#include "suf/dataset.hpp"
#include "suf/error.hpp"

namespace {

// Newlines would break the one-line error contract.
std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int report_error(std::string_view kind, const std::string& message) {
  std::cerr << "error: " << kind << ": " << one_line(message) << '\n';
  return kind == "UsageError" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace suf::tools;

  CLI::App app{"suf: hardware-counter workload fingerprinting with a character-level GRU"};
  app.set_config("--config", "", "TOML/INI file with option defaults; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  std::uint64_t seed = 0;
  auto add_seed = [&seed](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Random seed (default from SUF_SEED, else 0)")->envname("SUF_SEED");
  };

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Parse a perf stat -I capture into a trace CSV");
  c_ingest->add_option("-i,--input", ingest.input, "perf stat text capture")->required()->check(CLI::ExistingFile);
  c_ingest->add_option("-o,--out", ingest.out, "Output trace CSV")->required();
  c_ingest->add_option("-e,--events", ingest.events, "Expected events (default: those of the first interval)")
      ->delimiter(',');
  c_ingest->add_option("--device", ingest.device, "Reject events the device cannot count (A, B, pi, router, any)");

  LabelOptions label;
  auto* c_label = app.add_subcommand("label", "Attach class labels to trace CSVs and merge them");
  c_label->add_option("-t,--trace", label.traces, "CLASS=PATH, repeatable (classes: Normal, DoS, ICMP, "
                                                  "Port_Scan, Telnet, TCP_SYN)")
      ->required();
  c_label->add_option("--device", label.device, "Device profile the events must belong to")
      ->capture_default_str();
  c_label->add_option("--missing", label.missing, "Rows with missing counts: drop or zero")
      ->check(CLI::IsMember({"drop", "zero"}))
      ->capture_default_str();
  c_label->add_option("-o,--out", label.out, "Output labeled CSV")->required();

  StatsOptions stats;
  auto* c_stats = app.add_subcommand("stats", "Per-feature min/max/std/mean comparison and box-plot numbers");
  c_stats->add_option("-a,--a", stats.a, "First CSV (trace or labeled)")->required()->check(CLI::ExistingFile);
  c_stats->add_option("-b,--b", stats.b, "Second CSV")->check(CLI::ExistingFile);
  c_stats->add_option("--label-a", stats.label_a, "Column label for the first CSV")->capture_default_str();
  c_stats->add_option("--label-b", stats.label_b, "Column label for the second CSV")->capture_default_str();
  c_stats->add_option("--format", stats.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  c_stats->add_option("-o,--out", stats.out, "Comparison output (default: stdout)");
  c_stats->add_option("--boxplot-a", stats.boxplot_a, "Write box-plot CSV for the first input");
  c_stats->add_option("--boxplot-b", stats.boxplot_b, "Write box-plot CSV for the second input");

  SynthOptions synth;
  auto* c_synth = app.add_subcommand("synth", "Generate synthetic traces from calibrated class profiles");
  c_synth->add_option("--classes", synth.classes, "Class set: pi-binary, pi-multi, router-binary, router-multi");
  c_synth->add_option("--profile", synth.profiles, "Single profile name (e.g. PI_NORMAL); writes a trace CSV");
  c_synth->add_option("--profiles-file", synth.profiles_file, "Extra profiles (JSON)")->check(CLI::ExistingFile);
  c_synth->add_option("-n,--n", synth.n, "Intervals per class")->capture_default_str();
  add_seed(c_synth);
  c_synth->add_option("-o,--out", synth.out, "Output CSV");
  c_synth->add_option("--dump-profiles", synth.dump_profiles, "Write all known profiles as JSON");

  TrainOptions train;
  auto& ex = train.experiment;
  auto* c_train = app.add_subcommand("train", "Train a GRU classifier on labeled CSVs");
  c_train->add_option("-i,--input", train.inputs, "Labeled CSV, repeatable")->required()->check(CLI::ExistingFile);
  c_train->add_option("-o,--out", train.out, "Output checkpoint (JSON)")->required();
  c_train->add_option("--hidden", ex.gru.hidden_dim, "Hidden units")->capture_default_str();
  c_train->add_option("--layers", ex.gru.num_layers, "Stacked GRU layers")->capture_default_str();
  c_train->add_option("--dropout", ex.gru.dropout_p, "Dropout before the output layer")->capture_default_str();
  c_train->add_option("--lr", ex.train.learning_rate, "Adam learning rate")->capture_default_str();
  c_train->add_option("--batch", ex.train.batch_size, "Mini-batch size")->capture_default_str();
  c_train->add_option("--epochs", ex.train.max_epochs, "Maximum epochs")->capture_default_str();
  c_train->add_option("--patience", ex.train.patience, "Early-stopping patience")->capture_default_str();
  c_train->add_option("--min-delta", ex.train.min_delta, "Minimum validation-loss improvement")
      ->capture_default_str();
  c_train->add_option("--val-fraction", ex.val_fraction, "Validation share per class")->capture_default_str();
  c_train->add_option("--window", ex.window, "Consecutive intervals per sequence")->capture_default_str();
  add_seed(c_train);
  c_train->add_option("--report", train.report, "Write the validation report here");
  c_train->add_option("--format", train.format, "Report format: text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  c_train->add_flag("-q,--quiet", train.quiet, "No per-epoch log on stderr");

  EvalOptions evaluate;
  auto* c_eval = app.add_subcommand("eval", "Evaluate a checkpoint on a labeled CSV");
  c_eval->add_option("-c,--checkpoint", evaluate.checkpoint, "Checkpoint")->required()->check(CLI::ExistingFile);
  c_eval->add_option("-i,--input", evaluate.input, "Labeled CSV")->required()->check(CLI::ExistingFile);
  c_eval->add_option("-o,--out", evaluate.out, "Report output (default: stdout)");
  c_eval->add_option("--format", evaluate.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();

  PredictOptions predict;
  auto* c_predict = app.add_subcommand("predict", "Predict class labels for every row of a CSV");
  c_predict->add_option("-c,--checkpoint", predict.checkpoint, "Checkpoint")->required()->check(CLI::ExistingFile);
  c_predict->add_option("-i,--input", predict.input, "Trace or labeled CSV")->required()->check(CLI::ExistingFile);
  c_predict->add_option("-o,--out", predict.out, "Output CSV (default: stdout)");

  CollectOptions collect_opts;
  std::string collect_device;
  auto* c_collect = app.add_subcommand("collect", "Run a workload under perf stat -a -I (needs perf privileges)");
  c_collect->add_option("-b,--binary", collect_opts.binary, "Workload executable")->required();
  c_collect->add_option("--name", collect_opts.name, "Capture name: data_<name>.txt (default: binary name)");
  c_collect->add_option("-e,--events", collect_opts.events, "Events to count")->delimiter(',');
  c_collect->add_option("--device", collect_device, "Count every event of this device profile");
  c_collect->add_option("--interval-ms", collect_opts.interval_ms, "Sampling interval")->capture_default_str();
  c_collect->add_option("--duration-s", collect_opts.duration_s, "Collection time")->capture_default_str();
  c_collect->add_flag("--respawn", collect_opts.respawn, "Restart the workload whenever it exits");
  c_collect->add_option("--perf", collect_opts.perf, "perf executable")->capture_default_str();
  c_collect->add_option("--out-dir", collect_opts.out_dir, "Capture directory")->capture_default_str();
  c_collect->add_option("args", collect_opts.args, "Workload arguments (after --)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", e.what());
  }

  try {
    if (c_ingest->parsed()) {
      cmd_ingest(ingest);
    } else if (c_label->parsed()) {
      cmd_label(label);
    } else if (c_stats->parsed()) {
      cmd_stats(stats, std::cout);
    } else if (c_synth->parsed()) {
      synth.seed = seed;
      cmd_synth(synth);
    } else if (c_train->parsed()) {
      ex.seed = seed;
      cmd_train(train, std::cerr);
    } else if (c_eval->parsed()) {
      cmd_eval(evaluate, std::cout);
    } else if (c_predict->parsed()) {
      cmd_predict(predict, std::cout);
    } else if (c_collect->parsed()) {
      if (!collect_device.empty()) {
        if (!collect_opts.events.empty()) {
          return report_error("UsageError", "--events and --device are mutually exclusive");
        }
        const auto device = suf::dataset::device_by_name(collect_device);
        collect_opts.events.assign(device.available_events.begin(), device.available_events.end());
      }
      std::cout << collect(collect_opts).string() << '\n';
    }
  } catch (const suf::Error& e) {
    return report_error(suf::to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return report_error("IoFailure", e.what());
  }
  return 0;
}
