#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jugglepac/jugglepac_engine.hpp"
#include "jugglepac/oracle.hpp"
#include "jugglepac/records.hpp"
#include "jugglepac/trace.hpp"

namespace jpac {

struct Violation {
  std::string invariant;
  Cycle cycle = 0;
  std::optional<Label> label;
  std::string message;

  std::string describe() const;
};

/// Output order is only promised for small label widths, or at p = 14 when
/// every dataset has at least max(min length, 19) elements.
bool ordering_expected(unsigned adder_latency, unsigned label_width, std::uint64_t shortest_dataset);

struct MonitorOptions {
  bool check_order = false;
  bool check_drain_bound = false;
  bool check_latency_spread = false;
  Cycle max_latency_spread = 4;
};

/// Watches a JugglePAC record stream and the emitted results for the
/// structural promises: throughput 1, no stalls, FIFO depth, counter range,
/// ramp, state-1 pacing, and (optionally) order/drain/latency consistency.
/// Looks only at emitted records and results, never at engine internals.
class InvariantMonitor {
public:
  InvariantMonitor(unsigned adder_latency, MonitorOptions options = {});

  void observe(const CycleRecord &record);

  /// Checks results against the datasets and the result-level promises.
  void finish(std::span<const DatasetResult> results, std::span<const Dataset> datasets);

  bool ok() const { return violations_.empty(); }
  const std::vector<Violation> &violations() const { return violations_; }

  std::size_t max_fifo() const { return max_fifo_; }
  unsigned max_counter() const { return max_counter_; }
  std::optional<Cycle> first_state0_issue() const { return first_state0_issue_; }

private:
  void fail(std::string invariant, Cycle cycle, std::optional<Label> label, std::string message);

  unsigned latency_;
  MonitorOptions options_;
  std::vector<Violation> violations_;
  std::size_t max_fifo_ = 0;
  unsigned max_counter_ = 0;
  std::optional<Cycle> first_state0_issue_;
  std::optional<Cycle> expected_cycle_;
  int state1_run_ = 0;
  bool prev_state1_lone_ = false;
};

} // namespace jpac
