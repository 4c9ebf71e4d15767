// Acceptance run: prints one PASS/FAIL line per criterion (A1..A11) and exits
// nonzero if any fails. Criteria can be selected by name: suf_acceptance A5 A7.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "suf/checkpoint.hpp"
#include "suf/error.hpp"
#include "suf/eval.hpp"
#include "suf/ingest.hpp"
#include "suf/pipeline.hpp"
#include "suf/preprocess.hpp"
#include "suf/synth.hpp"
#include "suf/training.hpp"

using namespace suf;

namespace {

// Pinned thresholds.
constexpr double kA1MinAccuracy = 0.95;
constexpr std::size_t kA1LossEpochs = 10;
constexpr double kA2MinMacroF1 = 0.85;
constexpr double kA2MinRecall = 0.70;
constexpr double kA3Slack = 0.02;
constexpr double kA4MinAccuracy = 0.55;
constexpr double kGradTolerance = 1e-4;
constexpr double kAdamRelTolerance = 1e-12;
constexpr double kF1Tolerance = 5e-5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

pipeline::ExperimentConfig paper_config(std::size_t layers) {
  pipeline::ExperimentConfig c;
  c.gru.hidden_dim = 128;
  c.gru.num_layers = layers;
  c.train.learning_rate = 0.001;
  c.train.batch_size = 64;
  c.train.patience = 3;
  c.train.max_epochs = 100;
  c.val_fraction = 0.2;
  c.seed = 7;
  return c;
}

dataset::LabeledTable synth_set(const char* name, std::size_t n, std::uint64_t seed) {
  return synth::generate_dataset(synth::class_set(name), n, seed, dataset::LabelMap::standard(),
                                 synth::class_set_device(name));
}

// ---- A1 / A10 ----

struct BinaryRun {
  std::string checkpoint;
  std::string report;
  pipeline::ExperimentResult result;
};

BinaryRun run_a1() {
  const auto table = synth_set("pi-binary", 2000, 7);
  BinaryRun r{{}, {}, pipeline::run_experiment(table, dataset::LabelMap::standard(), paper_config(1))};
  r.checkpoint = checkpoint::to_string(r.result.checkpoint);
  r.report = eval::render_text(r.result.val_report, r.result.checkpoint.labels);
  return r;
}

std::optional<BinaryRun> a1_cache;

const BinaryRun& a1_run() {
  if (!a1_cache) a1_cache = run_a1();
  return *a1_cache;
}

Outcome a1() {
  const auto& r = a1_run();
  const auto& h = r.result.checkpoint.history;
  bool below_ln2 = false;
  for (std::size_t e = 0; e < std::min(kA1LossEpochs, h.epochs.size()); ++e) {
    below_ln2 = below_ln2 || h.epochs[e].train_loss < std::log(2.0);
  }
  const double acc = r.result.val_report.accuracy;
  return {acc >= kA1MinAccuracy && below_ln2,
          fmt("val_accuracy=%.4f (>= 0.95), epochs=%.0f, train loss < ln2 within 10 epochs: ", acc,
              static_cast<double>(h.epochs.size())) +
              (below_ln2 ? "yes" : "no")};
}

Outcome a10() {
  const auto& first = a1_run();
  const auto second = run_a1();
  const bool same_ckpt = first.checkpoint == second.checkpoint;
  const bool same_report = first.report == second.report;
  return {same_ckpt && same_report, std::string("checkpoint ") + (same_ckpt ? "identical" : "differs") +
                                        ", report " + (same_report ? "identical" : "differs")};
}

// ---- A2 / A3 ----

std::optional<pipeline::ExperimentResult> a2_cache;

const pipeline::ExperimentResult& a2_run() {
  if (!a2_cache) {
    a2_cache = pipeline::run_experiment(synth_set("pi-multi", 1000, 7), dataset::LabelMap::standard(),
                                        paper_config(1));
  }
  return *a2_cache;
}

Outcome a2() {
  const auto& r = a2_run();
  const auto& rep = r.val_report;
  double min_recall = 1.0;
  std::string recalls;
  for (std::size_t c = 0; c < rep.per_class.size(); ++c) {
    min_recall = std::min(min_recall, rep.per_class[c].recall);
    recalls += ' ' + r.checkpoint.labels.name(static_cast<int>(c)) + fmt("=%.3f", rep.per_class[c].recall);
  }
  return {rep.macro.f1 >= kA2MinMacroF1 && min_recall >= kA2MinRecall,
          fmt("macro_f1=%.4f (>= 0.85), min recall=%.4f (>= 0.70); recall:", rep.macro.f1, min_recall) +
              recalls};
}

Outcome a3() {
  const double f1_l1 = a2_run().val_report.macro.f1;
  const auto l2 = pipeline::run_experiment(synth_set("pi-multi", 1000, 7), dataset::LabelMap::standard(),
                                           paper_config(2));
  const double f1_l2 = l2.val_report.macro.f1;
  return {f1_l2 >= f1_l1 - kA3Slack, fmt("macro_f1 L=2 %.4f vs L=1 %.4f (slack 0.02)", f1_l2, f1_l1)};
}

// ---- A4 ----

Outcome a4() {
  const auto r = pipeline::run_experiment(synth_set("router-binary", 2000, 7), dataset::LabelMap::standard(),
                                          paper_config(1));
  bool finite = true;
  for (const auto& e : r.checkpoint.history.epochs) {
    finite = finite && std::isfinite(e.train_loss) && std::isfinite(e.val_loss);
  }
  const double acc = r.val_report.accuracy;
  return {acc >= kA4MinAccuracy && finite,
          fmt("val_accuracy=%.4f (>= 0.55), epochs=%.0f, losses ", acc,
              static_cast<double>(r.checkpoint.history.epochs.size())) +
              (finite ? "finite" : "NOT finite")};
}

// ---- A5 ----

Outcome a5() {
  double worst = 0;
  for (std::size_t layers : {1u, 2u}) {
    const auto p = model::init_params(oracle::toy_config(layers), 13);
    const auto batch = oracle::toy_batch();
    const auto g = model::backward(p, batch, oracle::toy_labels());
    const auto check = oracle::finite_difference_check(p, g, batch, oracle::toy_labels(), 1e-5);
    if (check.checked != p.parameter_count()) return {false, "not every parameter was checked"};
    worst = std::max(worst, check.max_rel_error);
  }
  return {worst < kGradTolerance, fmt("max relative error %.3g over L=1 and L=2 (< 1e-4)", worst)};
}

// ---- A6 ----

Outcome a6() {
  auto cfg = oracle::toy_config(1);
  auto params = model::GruParameters::zeros(cfg);
  auto grads = model::GruParameters::zeros(cfg);
  grads.for_each([](const std::string&, std::span<double> s) { std::fill(s.begin(), s.end(), 1.0); });
  auto state = training::AdamState::for_params(params);
  training::TrainConfig tc;
  tc.learning_rate = 0.001;
  training::adam_step(params, grads, state, tc);
  const double expected = -0.001 * (1.0 / (1.0 + 1e-8));
  double worst = 0;
  params.for_each([&](const std::string&, std::span<const double> s) {
    for (double v : s) worst = std::max(worst, std::abs(v - expected) / std::abs(expected));
  });

  auto moving = model::init_params(cfg, 3);
  const auto before = moving;
  auto st2 = training::AdamState::for_params(moving);
  training::adam_step(moving, model::GruParameters::zeros(cfg), st2, tc);
  const bool identity = moving == before;
  return {worst <= kAdamRelTolerance && identity,
          fmt("first-step relative error %.3g (<= 1e-12), zero gradient identity: ", worst) +
              (identity ? "yes" : "no")};
}

// ---- A7 ----

Outcome a7() {
  const double f1 = eval::f1_score(0.9474, 0.9476);
  bool exact = true;
  for (int k : {2, 6}) {
    std::mt19937_64 gen(static_cast<std::uint64_t>(100 + k));
    std::uniform_int_distribution<int> lab(0, k - 1);
    std::vector<int> t(1000), p(1000);
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = lab(gen);
      p[i] = (gen() % 3 == 0) ? lab(gen) : t[i];
    }
    const auto o = oracle::brute_force_metrics(t, p, k);
    const auto c = eval::confusion(t, p, static_cast<std::size_t>(k));
    const auto r = eval::metrics_from_confusion(c);
    exact = exact && r.accuracy == o.accuracy;
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
      exact = exact && r.per_class[i].precision == o.precision[i] && r.per_class[i].recall == o.recall[i];
      for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) exact = exact && c.at(i, j) == o.confusion[i][j];
    }
  }
  return {std::abs(f1 - 0.9475) <= kF1Tolerance && exact,
          fmt("F1(0.9474, 0.9476)=%.6f, ", f1) + "1000-pair oracle " + (exact ? "exact" : "MISMATCH")};
}

// ---- A8 ----

Outcome a8() {
  const auto text = ingest::read_text_file(SUF_TEST_DATA "/perf_fixture.txt");
  const auto golden = ingest::read_text_file(SUF_TEST_DATA "/perf_fixture_golden.csv");
  const auto samples = ingest::parse_perf_stat_text(text);
  const auto csv = ingest::format_trace_csv(ingest::assemble_intervals(samples, ingest::discover_events(samples)));
  const bool golden_ok = csv == golden;
  const bool round_trip = ingest::format_trace_csv(ingest::parse_trace_csv(golden)) == golden;
  return {golden_ok && round_trip, std::string("golden ") + (golden_ok ? "byte-identical" : "DIFFERS") +
                                       ", round trip " + (round_trip ? "identity" : "DIFFERS")};
}

// ---- A9 ----

Outcome a9() {
  const auto table = synth_set("pi-multi", 200, 11);
  const auto [train, val] = dataset::split_train_val(table, 0.2, 11);
  const auto scaler = preprocess::fit_minmax(train);
  const auto scaled = preprocess::transform(scaler, train);
  bool in_range = true;
  for (const auto& row : scaled.rows) {
    for (double v : row) in_range = in_range && v >= 0.0 && v <= 1.0;
  }

  dataset::LabeledTable constant{{"a", "b"}, {"0.2", "0.4", "0.6"}, {{5, 1}, {5, 2}, {5, 3}}, {0, 0, 1}};
  const auto cs = preprocess::transform(preprocess::fit_minmax(constant), constant);
  bool constant_zero = true;
  for (const auto& row : cs.rows) constant_zero = constant_zero && row[0] == 0.0;

  const auto seqs = preprocess::make_sequences(scaled);
  std::vector<std::string> texts;
  for (const auto& s : seqs) texts.push_back(s.text);
  const auto vocab = preprocess::build_vocabulary(texts);
  auto shuffled = texts;
  std::mt19937_64 gen(5);
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  shuffled.insert(shuffled.end(), texts.begin(), texts.begin() + 10);
  const bool order_invariant = preprocess::build_vocabulary(shuffled).chars() == vocab.chars();

  bool identity = true;
  for (const auto& t : texts) identity = identity && preprocess::decode(vocab, preprocess::encode(vocab, t)) == t;

  bool padding = true;
  for (std::size_t layers : {1u, 2u}) {
    const auto p = model::init_params(oracle::toy_config(layers), 5);
    const model::Matrix base = model::forward(p, oracle::toy_batch(7));
    for (std::size_t extra : {1u, 9u}) padding = padding && model::forward(p, oracle::toy_batch(7 + extra)) == base;
  }

  const bool ok = in_range && constant_zero && order_invariant && identity && padding;
  auto yn = [](bool b) { return b ? "yes" : "NO"; };
  return {ok, std::string("train features in [0,1]: ") + yn(in_range) + ", constant->0: " + yn(constant_zero) +
                  ", vocabulary order-invariant: " + yn(order_invariant) + ", encode/decode identity: " +
                  yn(identity) + ", padding invariance: " + yn(padding)};
}

// ---- A11 ----

Outcome a11() {
  const std::vector<double> losses = {1.0, 0.9, 0.91, 0.92, 0.93};
  training::EncodedSet data;
  std::mt19937_64 gen(4);
  for (int i = 0; i < 12; ++i) {
    std::vector<int> s(3 + static_cast<std::size_t>(i % 4));
    for (int& c : s) c = 1 + static_cast<int>(gen() % 5);
    data.sequences.push_back(s);
    data.labels.push_back(i % 3);
  }
  std::vector<model::GruParameters> snapshots;
  training::TrainHooks hooks;
  hooks.validate = [&](const model::GruParameters&, std::size_t epoch) {
    training::EpochRecord r;
    r.val_loss = losses.at(epoch);
    return r;
  };
  hooks.on_epoch_end = [&](std::size_t, const model::GruParameters& p, const training::EpochRecord&) {
    snapshots.push_back(p);
  };
  training::TrainConfig tc;
  tc.patience = 3;
  tc.batch_size = 4;
  tc.max_epochs = 100;
  const auto result = training::train(data, data, oracle::toy_config(1), tc, hooks);
  const std::size_t epochs = result.history.epochs.size();
  const bool restored = snapshots.size() == 5 && result.params == snapshots[1] && !(result.params == snapshots[4]);
  return {epochs == 5 && result.history.best_epoch == 1 && restored,
          fmt("stopped after %.0f epochs, best epoch %.0f (1-based), ", static_cast<double>(epochs),
              static_cast<double>(result.history.best_epoch + 1)) +
              "epoch-2 weights restored: " + (restored ? "yes" : "no")};
}

struct Criterion {
  const char* id;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  // Fast checks first; A10 reuses the A1 run and A3 reuses the A2 run.
  const std::vector<Criterion> criteria = {
      {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A11", a11},
      {"A1", a1}, {"A10", a10}, {"A2", a2}, {"A3", a3}, {"A4", a4},
  };
  std::set<std::string> selected(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%-3s %s  %s  [%.1fs]\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
