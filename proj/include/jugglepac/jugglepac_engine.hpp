#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "jugglepac/adder_pipeline.hpp"
#include "jugglepac/records.hpp"
#include "jugglepac/value.hpp"

namespace jpac {

/// ceil(log2(x)) for x >= 1.
unsigned ceil_log2(std::uint64_t x);

/// Shortest dataset that cannot share a label with a still-live dataset:
/// max(ceil(((1 + ceil(log2 p)) * p + 4) / (2^L - 1)), 4).
std::uint64_t min_dataset_length(unsigned adder_latency, unsigned label_width);

/// Cycles from start during which only raw-input additions can issue.
unsigned ramp_cycles(unsigned adder_latency);

/// Hard capacity of the ready-pair FIFO: ceil(log2 p), at least one entry.
std::size_t fifo_capacity_for(unsigned adder_latency);

/// Worst-case cycles from a dataset's last input to its final result.
std::uint64_t drain_bound(unsigned adder_latency);

struct EngineConfig {
  unsigned adder_latency = 14;
  unsigned label_width = 2;
  ArithMode mode = ArithMode::exact;
  bool enforce_min_length = true;
  unsigned extra_input_stages = 0;

  /// Latency seen by the scheduler: adder plus any input staging.
  unsigned effective_latency() const { return adder_latency + extra_input_stages; }
  std::uint64_t label_space() const { return std::uint64_t{1} << label_width; }
  void validate() const;
};

struct Subsum {
  Operand operand;
  Label label = 0;
};

struct ReadyPair {
  Subsum first;
  Subsum second;
  Label label = 0;
};

/// Cycle-stepped model of the two-state pipelined accumulator.
///
/// Each cycle: the adder result due this cycle is routed (output, pair slot or
/// ready-pair FIFO), a valid input is accepted into the input buffer, then one
/// addition issues: raw inputs in state 1, the head ready pair in state 0.
class JugglePacEngine {
public:
  explicit JugglePacEngine(EngineConfig config);

  const EngineConfig &config() const { return config_; }
  Cycle cycle() const { return pipe_.now(); }
  std::size_t fifo_capacity() const { return fifo_capacity_; }
  bool idle() const;

  CycleRecord step(const InputEvent &event);

  /// Steps with gaps until nothing is live. Every record produced is passed to
  /// `sink` when given. Returns the results emitted while draining.
  std::vector<DatasetResult> drain(const std::function<void(const CycleRecord &)> &sink = {});

  /// Results emitted since the previous call.
  std::vector<DatasetResult> take_results() { return std::exchange(results_, {}); }

  const std::vector<Diagnostic> &diagnostics() const { return diagnostics_; }

  /// Value of `label`'s output counter at the end of every cycle so far.
  std::vector<std::pair<Cycle, unsigned>> counter_trace(Label label) const;

private:
  struct BufferedInput {
    Operand operand;
    std::uint64_t dataset = 0;
    bool last = false;
  };

  struct LabelState {
    unsigned counter = 0;
    bool first_issued = false;
    std::deque<std::uint64_t> live; // datasets carrying this label, oldest first
  };

  struct DatasetTrack {
    Label label = 0;
    std::uint64_t accepted = 0;
    std::uint64_t unissued = 0;
    bool closed = false;
    Cycle last_input_cycle = 0;
  };

  Label label_for(std::uint64_t ordinal) const;
  void route_result(const AdderResult &result, CycleRecord &rec);
  void accept(const InputEvent &event, CycleRecord &rec);
  bool issue_raw_inputs(CycleRecord &rec);
  void issue_ready_pair(CycleRecord &rec);
  void issue(Operand in1, Operand in2, Label label, IssueState state, CycleRecord &rec);
  bool label_inputs_done(const LabelState &ls) const;
  void set_counter(Label label, LabelState &ls, unsigned value);
  void report_mixing(Label label, const std::string &message);

  EngineConfig config_;
  std::size_t fifo_capacity_;
  AdderPipeline pipe_;

  bool state1_ = false;
  bool holding_ = false;

  std::deque<BufferedInput> input_buffer_;
  std::map<Label, Subsum> pair_slots_;
  std::deque<ReadyPair> fifo_;
  std::map<Label, LabelState> labels_;
  std::map<std::uint64_t, DatasetTrack> datasets_;

  std::uint64_t next_ordinal_ = 0;
  std::uint64_t next_index_ = 0;
  bool dataset_open_ = false;
  Cycle last_valid_cycle_ = 0;
  bool any_valid_ = false;

  std::vector<DatasetResult> results_;
  std::vector<Diagnostic> diagnostics_;
  std::vector<std::tuple<Cycle, Label, unsigned>> counter_changes_;
};

} // namespace jpac
