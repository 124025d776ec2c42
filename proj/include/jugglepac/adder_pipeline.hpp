#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "jugglepac/value.hpp"

namespace jpac {

using Cycle = std::uint64_t;
using Label = std::uint32_t;

enum class IssueState { none, state0, state1 };

/// One addition handed to the pipelined adder, plus the control bits that
/// travel alongside it (the label rides the matching shift register).
struct AdderOp {
  Operand in1;
  Operand in2;
  Label label = 0;
  IssueState issue_state = IssueState::none;
  bool first_state1_of_dataset = false;
  bool is_final_of_dataset = false;
  Cycle issue_cycle = 0;
};

struct AdderResult {
  Operand sum;
  AdderOp meta;
};

/// Opaque adder with a fixed latency: an op issued in cycle t produces its
/// result in cycle t + latency, where it may be consumed the same cycle.
///
/// A cycle is driven as: emerging() / issue() / advance(). step() bundles the
/// three for callers that do not need to react to the emerging result.
class AdderPipeline {
public:
  explicit AdderPipeline(unsigned latency);

  unsigned latency() const { return latency_; }
  Cycle now() const { return now_; }
  std::size_t in_flight() const { return slots_.size(); }
  bool empty() const { return slots_.empty(); }

  /// Result whose latency expires in the current cycle, if any.
  const AdderResult *emerging() const;

  /// Throws InvariantError on a second issue within one cycle.
  void issue(AdderOp op);
  bool issued_this_cycle() const { return issued_this_cycle_; }

  void advance();

  std::optional<AdderResult> step(std::optional<AdderOp> op);

private:
  struct Slot {
    AdderResult result;
    Cycle ready_cycle;
  };

  unsigned latency_;
  Cycle now_ = 0;
  bool issued_this_cycle_ = false;
  std::deque<Slot> slots_;
};

} // namespace jpac
