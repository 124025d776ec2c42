#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jugglepac/adder_pipeline.hpp"
#include "jugglepac/value.hpp"

namespace jpac {

/// What the upstream source presents in one cycle. An invalid event is a gap.
struct InputEvent {
  bool valid = false;
  Value value;
  bool last_of_dataset = false;

  static InputEvent gap() { return {}; }
  static InputEvent element(Value v, bool last) { return {true, std::move(v), last}; }
};

struct DatasetResult {
  std::uint64_t dataset_ordinal = 0;
  Label label = 0;
  Value value;
  Provenance provenance;
  Cycle completion_cycle = 0;
  Cycle last_input_cycle = 0;

  Cycle drain_latency() const { return completion_cycle - last_input_cycle; }
};

/// Scheduler state reported per cycle. JugglePAC uses state0/state1;
/// SimplePAC reports its phase.
enum class StateTag { idle, state0, state1, fill, feedback, reduce };

std::string to_string(StateTag tag);
StateTag parse_state_tag(const std::string &text);

struct CounterSnapshot {
  Label label = 0;
  unsigned value = 0;

  friend bool operator==(const CounterSnapshot &, const CounterSnapshot &) = default;
};

struct CycleRecord {
  Cycle cycle = 0;
  bool valid = false;
  std::optional<ElementId> accepted_input;
  StateTag state = StateTag::idle;
  std::optional<Operand> in1;
  std::optional<Operand> in2;
  std::optional<Operand> out;
  std::size_t fifo_occupancy = 0;
  /// Non-zero per-label counters, ascending by label.
  std::vector<CounterSnapshot> counters;
  bool stall = false;
  /// Ordinals of datasets whose final result was emitted this cycle.
  std::vector<std::uint64_t> emitted;
};

/// Non-fatal finding recorded when enforcement is off.
struct Diagnostic {
  Cycle cycle = 0;
  Label label = 0;
  std::string message;
};

} // namespace jpac
