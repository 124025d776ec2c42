#include "jugglepac/invariants.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace jpac {

std::string Violation::describe() const {
  if (label) {
    return fmt::format("{} violated at cycle {} (label {}): {}", invariant, cycle, *label, message);
  }
  return fmt::format("{} violated at cycle {}: {}", invariant, cycle, message);
}

bool ordering_expected(unsigned adder_latency, unsigned label_width, std::uint64_t shortest_dataset) {
  if (label_width <= 2) {
    return true;
  }
  return adder_latency == 14 &&
         shortest_dataset >= std::max<std::uint64_t>(min_dataset_length(adder_latency, label_width), 19);
}

InvariantMonitor::InvariantMonitor(unsigned adder_latency, MonitorOptions options)
    : latency_(adder_latency), options_(options) {}

void InvariantMonitor::fail(std::string invariant, Cycle cycle, std::optional<Label> label, std::string message) {
  violations_.push_back({std::move(invariant), cycle, label, std::move(message)});
}

void InvariantMonitor::observe(const CycleRecord &r) {
  if (expected_cycle_ && r.cycle != *expected_cycle_) {
    fail("consecutive cycles", r.cycle, std::nullopt, fmt::format("expected cycle {}", *expected_cycle_));
  }
  expected_cycle_ = r.cycle + 1;

  if (r.valid && !r.accepted_input) {
    fail("throughput-1", r.cycle, std::nullopt, "valid input not accepted");
  }
  if (r.stall) {
    fail("no stalls", r.cycle, std::nullopt, "stall asserted");
  }

  max_fifo_ = std::max(max_fifo_, r.fifo_occupancy);
  const std::size_t fifo_bound = ceil_log2(latency_);
  if (r.fifo_occupancy > fifo_bound) {
    fail("FIFO bound", r.cycle, std::nullopt,
         fmt::format("occupancy {} exceeds ceil(log2 {}) = {}", r.fifo_occupancy, latency_, fifo_bound));
  }
  for (const CounterSnapshot &c : r.counters) {
    max_counter_ = std::max(max_counter_, c.value);
    if (c.value > latency_ + 2) {
      fail("counter bound", r.cycle, c.label, fmt::format("counter {} exceeds p+2 = {}", c.value, latency_ + 2));
    }
  }

  const bool issued = r.in1.has_value();
  if (issued && r.state == StateTag::state0 && !first_state0_issue_) {
    first_state0_issue_ = r.cycle;
    if (r.cycle < ramp_cycles(latency_)) {
      fail("ramp", r.cycle, std::nullopt,
           fmt::format("state-0 issue before ramp_cycles({}) = {}", latency_, ramp_cycles(latency_)));
    }
  }

  if (issued && r.state == StateTag::state1) {
    ++state1_run_;
    if (state1_run_ >= 2 && !prev_state1_lone_) {
      fail("state-1 pacing", r.cycle, std::nullopt, "back-to-back state-1 issues without a parity hold");
    }
    if (state1_run_ >= 3) {
      fail("state-1 pacing", r.cycle, std::nullopt, "three consecutive state-1 issues");
    }
    prev_state1_lone_ = r.in2 && r.in2->is_identity();
  } else {
    state1_run_ = 0;
    prev_state1_lone_ = false;
  }
}

void InvariantMonitor::finish(std::span<const DatasetResult> results, std::span<const Dataset> datasets) {
  std::map<std::uint64_t, const DatasetResult *> by_ordinal;
  for (const DatasetResult &r : results) {
    if (!by_ordinal.emplace(r.dataset_ordinal, &r).second) {
      fail("one result per dataset", r.completion_cycle, r.label,
           fmt::format("dataset {} completed twice", dataset_letters(r.dataset_ordinal)));
    }
  }
  for (const Dataset &d : datasets) {
    auto it = by_ordinal.find(d.ordinal);
    if (it == by_ordinal.end()) {
      fail("one result per dataset", 0, std::nullopt, fmt::format("dataset {} never completed", dataset_letters(d.ordinal)));
      continue;
    }
    const Verdict v = verify_result(*it->second, d);
    if (!v.pass) {
      fail("no mixing", it->second->completion_cycle, it->second->label, v.message);
    }
    if (options_.check_drain_bound && it->second->drain_latency() > drain_bound(latency_)) {
      fail("drain bound", it->second->completion_cycle, it->second->label,
           fmt::format("dataset {} drained in {} cycles, bound {}", dataset_letters(d.ordinal),
                       it->second->drain_latency(), drain_bound(latency_)));
    }
  }
  if (options_.check_order) {
    for (std::size_t i = 1; i < results.size(); ++i) {
      if (results[i].dataset_ordinal < results[i - 1].dataset_ordinal) {
        fail("output order", results[i].completion_cycle, results[i].label,
             fmt::format("dataset {} completed after dataset {}", dataset_letters(results[i - 1].dataset_ordinal),
                         dataset_letters(results[i].dataset_ordinal)));
        break;
      }
    }
  }
  if (options_.check_latency_spread && !results.empty()) {
    const auto [lo, hi] = std::ranges::minmax_element(results, {}, &DatasetResult::drain_latency);
    if (hi->drain_latency() - lo->drain_latency() > options_.max_latency_spread) {
      fail("latency consistency", hi->completion_cycle, hi->label,
           fmt::format("drain latency spread {} (min {} for {}, max {} for {})", hi->drain_latency() - lo->drain_latency(),
                       lo->drain_latency(), dataset_letters(lo->dataset_ordinal), hi->drain_latency(),
                       dataset_letters(hi->dataset_ordinal)));
    }
  }
}

} // namespace jpac
