#pragma once

// Parsing of `perf stat -I <ms>` interval output and the per-trace CSV layout
// (`time,<event1>,...,<eventN>`).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace suf::ingest {

/// A counter reading; std::nullopt means perf reported `<not counted>` or
/// `<not supported>`.
using Count = std::optional<std::uint64_t>;

struct CounterSample {
  std::string timestamp_text;  // verbatim token, used for grouping
  double timestamp = 0.0;
  std::string event;
  Count count;
  std::optional<double> multiplex_pct;

  bool operator==(const CounterSample&) const = default;
};

/// One sampling interval. `counts` is aligned with the owning trace header.
struct IntervalRecord {
  std::string timestamp;
  std::vector<Count> counts;

  bool has_missing() const;
  bool operator==(const IntervalRecord&) const = default;
};

struct TraceCsv {
  std::vector<std::string> header;  // event names, without the `time` column
  std::vector<IntervalRecord> rows;

  bool operator==(const TraceCsv&) const = default;
};

std::vector<CounterSample> parse_perf_stat_text(std::string_view text);

/// Event names of the first interval, in order of appearance.
std::vector<std::string> discover_events(const std::vector<CounterSample>& samples);

/// Groups samples by verbatim timestamp text; each record is restricted and
/// ordered to `expected_events`.
TraceCsv assemble_intervals(const std::vector<CounterSample>& samples,
                            const std::vector<std::string>& expected_events);

std::string format_trace_csv(const TraceCsv& trace);
TraceCsv parse_trace_csv(std::string_view text);

void write_trace_csv(const TraceCsv& trace, const std::filesystem::path& path);
TraceCsv read_trace_csv(const std::filesystem::path& path);

// Whole-file helpers shared by the other modules.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace suf::ingest
