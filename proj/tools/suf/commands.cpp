#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "suf/checkpoint.hpp"
#include "suf/dataset.hpp"
#include "suf/error.hpp"
#include "suf/eval.hpp"
#include "suf/ingest.hpp"
#include "suf/stats.hpp"
#include "suf/synth.hpp"

namespace suf::tools {
namespace {

// Writes to `out` when set, otherwise to the given stream.
void emit(const path& out, const std::string& text, std::ostream& fallback) {
  if (out.empty()) {
    fallback << text;
  } else {
    ingest::write_text_file(out, text);
  }
}

void check_format(const std::string& format) {
  if (format != "text" && format != "csv") fail(ErrorCode::UsageError, "unknown format '" + format + "'");
}

std::string render_report(const eval::MetricsReport& report, const dataset::LabelMap& labels,
                          const std::string& format) {
  return format == "csv" ? eval::render_csv(report, labels) : eval::render_text(report, labels);
}

dataset::LabeledTable concat(const std::vector<path>& inputs) {
  dataset::LabeledTable all;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    auto t = dataset::read_feature_csv(inputs[i]);
    if (i == 0) {
      all = std::move(t);
      continue;
    }
    if (t.feature_names != all.feature_names) {
      fail(ErrorCode::FeatureMismatch, inputs[i].string() + " has a different feature set than " +
                                           inputs[0].string());
    }
    all.times.insert(all.times.end(), t.times.begin(), t.times.end());
    all.rows.insert(all.rows.end(), t.rows.begin(), t.rows.end());
    all.labels.insert(all.labels.end(), t.labels.begin(), t.labels.end());
  }
  return all;
}

}  // namespace

void cmd_ingest(const IngestOptions& o) {
  const auto samples = ingest::parse_perf_stat_text(ingest::read_text_file(o.input));
  auto events = o.events.empty() ? ingest::discover_events(samples) : o.events;
  if (!o.device.empty()) {
    const auto device = dataset::device_by_name(o.device);
    for (const auto& e : events) {
      if (!device.available_events.count(e)) {
        fail(ErrorCode::EventNotOnDevice, e + " is not available on " + device.device_id);
      }
    }
  }
  ingest::write_trace_csv(ingest::assemble_intervals(samples, events), o.out);
}

void cmd_label(const LabelOptions& o) {
  if (o.missing != "drop" && o.missing != "zero") {
    fail(ErrorCode::UsageError, "--missing must be drop or zero");
  }
  std::vector<dataset::LabeledTrace> traces;
  for (const auto& spec : o.traces) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      fail(ErrorCode::UsageError, "--trace expects CLASS=PATH, got '" + spec + "'");
    }
    traces.push_back({ingest::read_trace_csv(spec.substr(eq + 1)), spec.substr(0, eq)});
  }
  const auto policy = o.missing == "zero" ? dataset::MissingPolicy::ImputeZero : dataset::MissingPolicy::Drop;
  const auto table = dataset::label_and_merge(traces, dataset::LabelMap::standard(),
                                              dataset::device_by_name(o.device), policy);
  dataset::write_labeled_csv(table, o.out);
}

void cmd_stats(const StatsOptions& o, std::ostream& stdout_stream) {
  check_format(o.format);
  const auto a = dataset::read_feature_csv(o.a);
  if (!o.boxplot_a.empty()) {
    ingest::write_text_file(o.boxplot_a, stats::render_box_plots_csv(stats::box_plots(a)));
  }
  if (o.b.empty()) {
    if (!o.boxplot_b.empty()) fail(ErrorCode::UsageError, "--boxplot-b needs --b");
    if (o.boxplot_a.empty()) fail(ErrorCode::UsageError, "stats needs --b or --boxplot-a");
    return;
  }
  const auto b = dataset::read_feature_csv(o.b);
  if (!o.boxplot_b.empty()) {
    ingest::write_text_file(o.boxplot_b, stats::render_box_plots_csv(stats::box_plots(b)));
  }
  const auto report = stats::compare(a, b, o.label_a, o.label_b);
  emit(o.out, o.format == "csv" ? stats::render_csv(report) : stats::render_text(report), stdout_stream);
}

void cmd_synth(const SynthOptions& o) {
  std::map<std::string, synth::ClassProfile> known = synth::builtin_profiles();
  if (!o.profiles_file.empty()) {
    for (auto& p : synth::load_profiles(o.profiles_file)) known[p.name] = std::move(p);
  }
  if (!o.dump_profiles.empty()) {
    std::vector<synth::ClassProfile> all;
    for (const auto& [name, p] : known) all.push_back(p);
    synth::save_profiles(all, o.dump_profiles);
  }
  if (o.classes.empty() && o.profiles.empty()) {
    if (o.dump_profiles.empty()) fail(ErrorCode::UsageError, "synth needs --classes or --profile");
    return;
  }
  if (!o.classes.empty() && !o.profiles.empty()) {
    fail(ErrorCode::UsageError, "--classes and --profile are mutually exclusive");
  }
  if (o.out.empty()) fail(ErrorCode::UsageError, "synth needs --out");
  if (o.n < 1) fail(ErrorCode::UsageError, "--n must be >= 1");

  if (!o.classes.empty()) {
    const auto table = synth::generate_dataset(synth::class_set(o.classes), o.n, o.seed,
                                               dataset::LabelMap::standard(), synth::class_set_device(o.classes));
    dataset::write_labeled_csv(table, o.out);
    return;
  }
  if (o.profiles.size() != 1) fail(ErrorCode::UsageError, "--profile takes exactly one name");
  auto it = known.find(o.profiles.front());
  if (it == known.end()) fail(ErrorCode::UnknownProfile, "unknown profile '" + o.profiles.front() + "'");
  ingest::write_trace_csv(synth::generate_trace(it->second, o.n, o.seed), o.out);
}

void cmd_train(const TrainOptions& o, std::ostream& log) {
  check_format(o.format);
  if (o.inputs.empty()) fail(ErrorCode::UsageError, "train needs at least one --input");
  const auto table = concat(o.inputs);

  training::TrainHooks hooks;
  if (!o.quiet) {
    hooks.on_epoch_end = [&log](std::size_t epoch, const model::GruParameters&, const training::EpochRecord& r) {
      char line[160];
      std::snprintf(line, sizeof(line), "epoch %zu  train_loss %.6f  val_loss %.6f  val_acc %.4f\n", epoch + 1,
                    r.train_loss, r.val_loss, r.val_accuracy);
      log << line << std::flush;
    };
  }
  const auto result = pipeline::run_experiment(table, dataset::LabelMap::standard(), o.experiment, hooks);
  checkpoint::save_checkpoint(result.checkpoint, o.out);
  if (!o.report.empty()) {
    ingest::write_text_file(o.report, render_report(result.val_report, result.checkpoint.labels, o.format));
  }
  if (!o.quiet) {
    char line[160];
    std::snprintf(line, sizeof(line), "best epoch %zu  val_acc %.4f  train_acc %.4f\n",
                  result.checkpoint.history.best_epoch + 1, result.val_report.accuracy,
                  result.checkpoint.train_accuracy);
    log << line;
  }
}

void cmd_eval(const EvalOptions& o, std::ostream& stdout_stream) {
  check_format(o.format);
  const auto ckpt = checkpoint::load_checkpoint(o.checkpoint);
  const auto ev = pipeline::evaluate_table(ckpt, dataset::read_feature_csv(o.input));
  emit(o.out, render_report(ev.report, ckpt.labels, o.format), stdout_stream);
}

void cmd_predict(const PredictOptions& o, std::ostream& stdout_stream) {
  const auto ckpt = checkpoint::load_checkpoint(o.checkpoint);
  const auto table = dataset::read_feature_csv(o.input);
  const auto pred = pipeline::predict_table(ckpt, table);
  std::string text = "time,label,class\n";
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const std::size_t row = i + ckpt.window - 1;
    text += table.times[row] + ',' + std::to_string(pred[i]) + ',' + ckpt.labels.name(pred[i]) + '\n';
  }
  emit(o.out, text, stdout_stream);
}

}  // namespace suf::tools
