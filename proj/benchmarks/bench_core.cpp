#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "suf/ingest.hpp"
#include "suf/model.hpp"

using namespace suf;

namespace {

// Batch of 64 sequences shaped like single-interval renderings (~200 chars).
preprocess::EncodedBatch make_batch(std::size_t vocab, std::size_t len) {
  std::mt19937_64 gen(1);
  std::vector<std::vector<int>> seqs(64, std::vector<int>(len));
  for (auto& s : seqs) {
    for (int& c : s) c = 1 + static_cast<int>(gen() % vocab);
  }
  return preprocess::pad_batch(seqs);
}

void BM_Forward(benchmark::State& state) {
  model::GruConfig cfg;
  cfg.vocab_size = 13;
  cfg.hidden_dim = static_cast<std::size_t>(state.range(0));
  const auto p = model::init_params(cfg, 1);
  const auto batch = make_batch(cfg.vocab_size, 180);
  for (auto _ : state) benchmark::DoNotOptimize(model::forward(p, batch));
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_LossAndGradient(benchmark::State& state) {
  model::GruConfig cfg;
  cfg.vocab_size = 13;
  cfg.hidden_dim = static_cast<std::size_t>(state.range(0));
  const auto p = model::init_params(cfg, 1);
  const auto batch = make_batch(cfg.vocab_size, 180);
  const std::vector<int> labels(64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(model::loss_and_gradient(p, batch, labels));
}
BENCHMARK(BM_LossAndGradient)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ParsePerfStat(benchmark::State& state) {
  std::string text = "#           time             counts unit events\n";
  char line[128];
  for (int i = 1; i <= 1000; ++i) {
    for (const char* ev : {"cpu-cycles", "instructions", "cache-misses", "branch-misses"}) {
      std::snprintf(line, sizeof(line), "%14.9f %18s      %s                    (50.01%%)\n", 0.2 * i,
                    "1,234,567,890", ev);
      text += line;
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(ingest::parse_perf_stat_text(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParsePerfStat);

}  // namespace

BENCHMARK_MAIN();
