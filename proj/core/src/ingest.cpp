#include "suf/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "suf/error.hpp"

namespace suf::ingest {
namespace {

constexpr std::array<std::string_view, 5> kUnitTokens = {"msec", "GHz", "M/sec", "K/sec", "/sec"};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename T>
bool parse_full(std::string_view token, T& out) {
  if (token.empty()) return false;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

bool parse_count(std::string_view token, std::uint64_t& out) {
  std::string digits;
  digits.reserve(token.size());
  for (char c : token) {
    if (c != ',') digits.push_back(c);
  }
  if (digits.empty() || digits.front() == '-' || digits.front() == '+') return false;
  if (digits.find('.') == std::string::npos) return parse_full<std::uint64_t>(digits, out);
  // Fractional readings (e.g. task-clock in msec) are rounded to integers.
  double value = 0.0;
  if (!parse_full<double>(digits, value) || !std::isfinite(value) || value < 0.0) return false;
  out = static_cast<std::uint64_t>(std::llround(value));
  return true;
}

std::optional<double> parse_multiplex(std::string_view token) {
  if (token.size() < 4 || token.front() != '(' || token.substr(token.size() - 2) != "%)") {
    return std::nullopt;
  }
  double pct = 0.0;
  if (!parse_full<double>(token.substr(1, token.size() - 3), pct)) return std::nullopt;
  if (pct < 0.0 || pct > 100.0) return std::nullopt;
  return pct;
}

[[noreturn]] void malformed(std::size_t line_no, std::string_view why) {
  fail(ErrorCode::MalformedLine,
       "line " + std::to_string(line_no) + ": " + std::string(why));
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(',', start);
    if (end == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

}  // namespace

bool IntervalRecord::has_missing() const {
  return std::any_of(counts.begin(), counts.end(), [](const Count& c) { return !c.has_value(); });
}

std::vector<CounterSample> parse_perf_stat_text(std::string_view text) {
  std::vector<CounterSample> samples;
  const auto lines = split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::size_t line_no = n + 1;
    auto tokens = split_ws(lines[n]);
    if (tokens.empty() || tokens.front().front() == '#') continue;

    // Inline annotations (`# 1.23 insn per cycle`) run to end of line, except
    // that perf still appends the multiplex coverage after them.
    std::optional<double> trailing_pct;
    auto hash = std::find_if(tokens.begin() + 1, tokens.end(),
                             [](std::string_view t) { return t.front() == '#'; });
    if (hash != tokens.end()) {
      trailing_pct = parse_multiplex(tokens.back());
      tokens.erase(hash, tokens.end());
    }
    if (tokens.size() < 3) malformed(line_no, "expected at least three tokens");

    CounterSample sample;
    sample.timestamp_text = std::string(tokens[0]);
    if (!parse_full<double>(tokens[0], sample.timestamp) || !std::isfinite(sample.timestamp) ||
        sample.timestamp < 0.0) {
      malformed(line_no, "unparsable timestamp '" + std::string(tokens[0]) + "'");
    }

    std::size_t idx = 1;
    if (tokens[1] == "<not" && (tokens[2] == "counted>" || tokens[2] == "supported>")) {
      sample.count = std::nullopt;
      idx = 3;
    } else {
      std::uint64_t value = 0;
      if (!parse_count(tokens[1], value)) {
        malformed(line_no, "unparsable count '" + std::string(tokens[1]) + "'");
      }
      sample.count = value;
      idx = 2;
    }
    if (idx < tokens.size() &&
        std::find(kUnitTokens.begin(), kUnitTokens.end(), tokens[idx]) != kUnitTokens.end()) {
      ++idx;
    }
    if (idx >= tokens.size()) malformed(line_no, "missing event name");
    sample.event = std::string(tokens[idx]);
    for (std::size_t k = idx + 1; k < tokens.size(); ++k) {
      if (auto pct = parse_multiplex(tokens[k])) {
        sample.multiplex_pct = pct;
        break;
      }
    }
    if (!sample.multiplex_pct) sample.multiplex_pct = trailing_pct;
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::vector<std::string> discover_events(const std::vector<CounterSample>& samples) {
  std::vector<std::string> events;
  if (samples.empty()) return events;
  const std::string& first = samples.front().timestamp_text;
  for (const auto& s : samples) {
    if (s.timestamp_text != first) break;
    if (std::find(events.begin(), events.end(), s.event) == events.end()) events.push_back(s.event);
  }
  return events;
}

TraceCsv assemble_intervals(const std::vector<CounterSample>& samples,
                            const std::vector<std::string>& expected_events) {
  std::unordered_map<std::string, std::size_t> event_slot;
  for (std::size_t i = 0; i < expected_events.size(); ++i) event_slot.emplace(expected_events[i], i);

  struct Group {
    std::vector<Count> counts;
    std::vector<bool> seen;
  };
  std::vector<std::string> order;
  std::unordered_map<std::string, Group> groups;

  for (const auto& s : samples) {
    auto [it, inserted] = groups.try_emplace(s.timestamp_text);
    if (inserted) {
      order.push_back(s.timestamp_text);
      it->second.counts.assign(expected_events.size(), std::nullopt);
      it->second.seen.assign(expected_events.size(), false);
    }
    auto slot = event_slot.find(s.event);
    if (slot == event_slot.end()) continue;
    if (it->second.seen[slot->second]) {
      fail(ErrorCode::DuplicateEvent, "timestamp " + s.timestamp_text + ": event " + s.event);
    }
    it->second.seen[slot->second] = true;
    it->second.counts[slot->second] = s.count;
  }

  TraceCsv trace;
  trace.header = expected_events;
  trace.rows.reserve(order.size());
  for (const auto& ts : order) {
    Group& g = groups.at(ts);
    for (std::size_t i = 0; i < expected_events.size(); ++i) {
      if (!g.seen[i]) fail(ErrorCode::MissingEvent, "timestamp " + ts + ": event " + expected_events[i]);
    }
    trace.rows.push_back({ts, std::move(g.counts)});
  }
  return trace;
}

std::string format_trace_csv(const TraceCsv& trace) {
  std::string out = "time";
  for (const auto& e : trace.header) {
    out += ',';
    out += e;
  }
  out += '\n';
  for (const auto& row : trace.rows) {
    if (row.counts.size() != trace.header.size()) {
      fail(ErrorCode::SchemaMismatch, "row " + row.timestamp + " has " +
                                          std::to_string(row.counts.size()) + " values, header has " +
                                          std::to_string(trace.header.size()));
    }
    out += row.timestamp;
    for (const auto& c : row.counts) {
      out += ',';
      if (c) out += std::to_string(*c);
    }
    out += '\n';
  }
  return out;
}

TraceCsv parse_trace_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) fail(ErrorCode::SchemaMismatch, "empty CSV document");
  auto head = split_commas(lines[0]);
  if (head.empty() || head[0] != "time") fail(ErrorCode::SchemaMismatch, "header must start with 'time'");

  TraceCsv trace;
  for (std::size_t i = 1; i < head.size(); ++i) trace.header.emplace_back(head[i]);
  for (std::size_t n = 1; n < lines.size(); ++n) {
    auto fields = split_commas(lines[n]);
    if (fields.size() != head.size()) {
      fail(ErrorCode::SchemaMismatch, "row " + std::to_string(n + 1) + " has " +
                                          std::to_string(fields.size()) + " fields, expected " +
                                          std::to_string(head.size()));
    }
    IntervalRecord rec;
    rec.timestamp = std::string(fields[0]);
    rec.counts.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (fields[i].empty()) {
        rec.counts.emplace_back(std::nullopt);
        continue;
      }
      std::uint64_t value = 0;
      if (!parse_full<std::uint64_t>(fields[i], value)) {
        fail(ErrorCode::SchemaMismatch, "row " + std::to_string(n + 1) + ": non-integer count '" +
                                            std::string(fields[i]) + "'");
      }
      rec.counts.emplace_back(value);
    }
    trace.rows.push_back(std::move(rec));
  }
  return trace;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::IoFailure, "read error on " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::IoFailure, "write error on " + path.string());
}

void write_trace_csv(const TraceCsv& trace, const std::filesystem::path& path) {
  write_text_file(path, format_trace_csv(trace));
}

TraceCsv read_trace_csv(const std::filesystem::path& path) { return parse_trace_csv(read_text_file(path)); }

}  // namespace suf::ingest
