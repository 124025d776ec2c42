#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jugglepac/records.hpp"

namespace jpac {

// Symbolic naming: dataset ordinals are letters (a..z, aa, ab, ...), elements
// are a_0 or a_{12}, subsums a_{0,1}, a_{0:3} or a_{0,1,3,4}.
std::string dataset_letters(std::uint64_t ordinal);
std::optional<std::uint64_t> parse_dataset_letters(const std::string &letters);
std::string element_name(ElementId id);
std::string operand_name(const Operand &operand);
std::optional<ElementId> parse_element_name(const std::string &name);

/// A cycle record flattened to the fields that go to disk.
struct TraceRow {
  Cycle cycle = 0;
  bool valid = false;
  std::string input;
  std::string state;
  std::string in1;
  std::string in2;
  std::string out;
  std::size_t fifo = 0;
  std::vector<CounterSnapshot> counters;
  bool stall = false;
  std::vector<std::uint64_t> emitted;

  friend bool operator==(const TraceRow &, const TraceRow &) = default;
};

TraceRow to_row(const CycleRecord &record);
std::vector<TraceRow> to_rows(std::span<const CycleRecord> records);

/// Fixed-width Cycle | Input | in1 | in2 | out table. Stalled cycles show
/// "Stall" as input; an output that completes a dataset is wrapped in **.
std::string render_schedule(std::span<const TraceRow> rows);
std::string render_schedule(std::span<const CycleRecord> records);

enum class TraceFormat { csv, jsonl };
TraceFormat parse_trace_format(const std::string &text);

inline constexpr const char *kTraceCsvHeader = "cycle,valid,input,state,in1,in2,out,fifo,counters,stall,emitted";

void write_trace(std::ostream &os, std::span<const TraceRow> rows, TraceFormat format);
void write_trace_file(const std::filesystem::path &path, std::span<const TraceRow> rows, TraceFormat format);
std::vector<TraceRow> read_trace_csv(std::istream &is);
std::vector<TraceRow> read_trace_jsonl(std::istream &is);
std::vector<TraceRow> read_trace_file(const std::filesystem::path &path);

struct DatasetLatency {
  std::uint64_t dataset = 0;
  Cycle latency = 0;

  friend bool operator==(const DatasetLatency &, const DatasetLatency &) = default;
};

struct RunStats {
  Cycle total_cycles = 0;
  std::uint64_t issues = 0;
  std::uint64_t state1_issues = 0;
  std::uint64_t state0_issues = 0;
  double utilization = 0.0;
  std::size_t max_fifo = 0;
  unsigned max_counter = 0;
  std::uint64_t stall_cycles = 0;
  /// Drain latency (completion - last input) per dataset, ascending ordinal.
  std::vector<DatasetLatency> drain_latencies;
  /// Dataset ordinals in completion order.
  std::vector<std::uint64_t> output_order;

  Cycle max_drain_latency() const;
  Cycle drain_latency_spread() const;
  bool output_in_order() const;

  friend bool operator==(const RunStats &, const RunStats &) = default;
};

RunStats compute_stats(std::span<const CycleRecord> trace, std::span<const DatasetResult> results);

/// Recomputes the same statistics from a trace read back from disk.
RunStats stats_from_rows(std::span<const TraceRow> rows);

void write_stats_csv(std::ostream &os, const RunStats &stats);

} // namespace jpac
