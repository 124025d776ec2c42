#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "jugglepac/adder_pipeline.hpp"
#include "jugglepac/records.hpp"
#include "jugglepac/value.hpp"

namespace jpac {

struct SimpleConfig {
  unsigned adder_latency = 14;
  ArithMode mode = ArithMode::exact;
};

/// Baseline feedback accumulator: the first p inputs of a dataset are added
/// to zero, later inputs to the partial emerging from the adder, and after the
/// last input the p partials are reduced oldest-pair-first while new input is
/// stalled.
class SimplePacEngine {
public:
  explicit SimplePacEngine(SimpleConfig config);

  const SimpleConfig &config() const { return config_; }
  Cycle cycle() const { return pipe_.now(); }
  bool idle() const;

  /// When the returned record has `stall` set, the event was refused and the
  /// caller must present it again next cycle.
  CycleRecord step(const InputEvent &event);

  std::vector<DatasetResult> drain(const std::function<void(const CycleRecord &)> &sink = {});
  std::vector<DatasetResult> take_results() { return std::exchange(results_, {}); }

private:
  enum class Phase { accepting, reducing };

  SimpleConfig config_;
  AdderPipeline pipe_;
  Phase phase_ = Phase::accepting;
  std::deque<Operand> ready_;
  std::uint64_t ordinal_ = 0;
  std::uint64_t index_ = 0;
  std::uint64_t live_partials_ = 0;
  struct PendingFinal {
    std::uint64_t ordinal;
    Cycle last_input_cycle;
  };
  std::deque<PendingFinal> finals_in_flight_;
  Cycle last_input_cycle_ = 0;
  std::vector<DatasetResult> results_;
};

} // namespace jpac
