#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jugglepac/invariants.hpp"
#include "jugglepac/jugglepac_engine.hpp"
#include "jugglepac/workload.hpp"

namespace jpac {

/// One independent simulation: engine parameters, a workload and the checks
/// to apply. Cases share nothing, so a batch is a data-parallel loop.
struct CaseSpec {
  EngineConfig engine;
  WorkloadSpec workload;
  MonitorOptions monitor;
};

struct CaseOutcome {
  unsigned adder_latency = 0;
  unsigned label_width = 0;
  std::uint64_t seed = 0;
  std::uint64_t datasets = 0;
  std::uint64_t shortest_dataset = 0;
  std::uint64_t results = 0;
  std::uint64_t verified = 0;
  std::uint64_t valid_cycles = 0;
  std::uint64_t accepted_cycles = 0;
  std::uint64_t stall_cycles = 0;
  std::size_t max_fifo = 0;
  unsigned max_counter = 0;
  Cycle max_drain_latency = 0;
  Cycle drain_latency_spread = 0;
  bool in_order = true;
  std::vector<Violation> violations;
  /// Set when the engine threw (configuration or hard invariant failure).
  std::string error;

  bool ok() const { return error.empty() && violations.empty(); }
  friend bool operator==(const CaseOutcome &a, const CaseOutcome &b);
};

CaseOutcome run_case(const CaseSpec &spec);

/// Reference loop, one case after another.
std::vector<CaseOutcome> run_cases_serial(std::span<const CaseSpec> cases);

/// OpenMP loop over cases; output order matches input order.
std::vector<CaseOutcome> run_cases_parallel(std::span<const CaseSpec> cases);

struct SweepOptions {
  std::uint64_t seed = 1;
  std::uint64_t datasets = 50;
  double gap_probability = 0.0;
  ArithMode mode = ArithMode::exact;
  bool parallel = true;
};

struct SweepRow {
  unsigned adder_latency = 0;
  unsigned label_width = 0;
  std::uint64_t min_length = 0;
  std::size_t fifo_bound = 0;
  std::size_t max_fifo = 0;
  unsigned max_counter = 0;
  Cycle worst_drain_latency = 0;
  Cycle drain_bound = 0;
  bool verified = false;
  std::string error;
};

/// Every (p, L) pair, each simulated on back-to-back minimum-length datasets.
std::vector<SweepRow> sweep(std::span<const unsigned> latencies, std::span<const unsigned> label_widths,
                            const SweepOptions &options);

void write_sweep_csv(std::ostream &os, std::span<const SweepRow> rows);

} // namespace jpac
