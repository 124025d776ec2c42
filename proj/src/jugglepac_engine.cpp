#include "jugglepac/jugglepac_engine.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace jpac {

unsigned ceil_log2(std::uint64_t x) {
  unsigned bits = 0;
  while ((std::uint64_t{1} << bits) < x) {
    ++bits;
  }
  return bits;
}

std::uint64_t min_dataset_length(unsigned adder_latency, unsigned label_width) {
  if (adder_latency == 0 || label_width == 0 || label_width > 31) {
    throw ConfigError("min_dataset_length needs p >= 1 and 1 <= L <= 31");
  }
  const std::uint64_t p = adder_latency;
  const std::uint64_t numerator = (1 + ceil_log2(p)) * p + 4;
  const std::uint64_t denominator = (std::uint64_t{1} << label_width) - 1;
  const std::uint64_t bound = (numerator + denominator - 1) / denominator;
  return std::max<std::uint64_t>(bound, 4);
}

unsigned ramp_cycles(unsigned adder_latency) {
  return adder_latency + 3 + (1 - (adder_latency % 2));
}

std::uint64_t drain_bound(unsigned adder_latency) {
  const std::uint64_t p = adder_latency;
  return (1 + ceil_log2(p)) * p + 4;
}

std::size_t fifo_capacity_for(unsigned adder_latency) {
  // With p = 1 the ceil(log2 p) FIFO is empty; the FIFO-to-adder register is
  // then the only place a pair formed during a state-1 hold can wait.
  return std::max<std::size_t>(ceil_log2(adder_latency), 1);
}

void EngineConfig::validate() const {
  if (adder_latency == 0) {
    throw ConfigError("adder latency p must be at least 1");
  }
  if (label_width == 0 || label_width > 31) {
    throw ConfigError(fmt::format("label width L={} out of range [1, 31]", label_width));
  }
}

JugglePacEngine::JugglePacEngine(EngineConfig config)
    : config_((config.validate(), config)),
      fifo_capacity_(fifo_capacity_for(config.effective_latency())),
      pipe_(config.effective_latency()) {}

bool JugglePacEngine::idle() const {
  return pipe_.empty() && fifo_.empty() && pair_slots_.empty() && input_buffer_.empty() &&
         datasets_.empty();
}

Label JugglePacEngine::label_for(std::uint64_t ordinal) const {
  return static_cast<Label>(ordinal & (config_.label_space() - 1));
}

void JugglePacEngine::report_mixing(Label label, const std::string &message) {
  if (config_.enforce_min_length) {
    throw MixingError(fmt::format("dataset mixing at cycle {} on label {}: {}", cycle(), label, message));
  }
  diagnostics_.push_back({cycle(), label, "dataset mixing: " + message});
}

void JugglePacEngine::set_counter(Label label, LabelState &ls, unsigned value) {
  if (ls.counter != value) {
    ls.counter = value;
    counter_changes_.emplace_back(cycle(), label, value);
  }
}

bool JugglePacEngine::label_inputs_done(const LabelState &ls) const {
  for (std::uint64_t ordinal : ls.live) {
    const DatasetTrack &d = datasets_.at(ordinal);
    if (!d.closed || d.unissued != 0) {
      return false;
    }
  }
  return true;
}

CycleRecord JugglePacEngine::step(const InputEvent &event) {
  CycleRecord rec;
  rec.cycle = cycle();
  rec.valid = event.valid;
  const bool busy = !idle() || event.valid;
  const bool in_state1 = state1_;

  if (const AdderResult *r = pipe_.emerging()) {
    rec.out = r->sum;
    route_result(*r, rec);
  }
  if (event.valid) {
    accept(event, rec);
  }

  bool lone_last = false;
  if (in_state1) {
    lone_last = issue_raw_inputs(rec);
  } else {
    issue_ready_pair(rec);
  }

  // An odd dataset ends with a lone element; the scheduler spends one more
  // cycle in state 1 so the next dataset's first pair issues immediately.
  if (in_state1 && lone_last && !holding_) {
    holding_ = true;
  } else {
    holding_ = false;
    state1_ = !state1_;
  }

  rec.state = busy ? (in_state1 ? StateTag::state1 : StateTag::state0) : StateTag::idle;
  rec.fifo_occupancy = fifo_.size();
  if (fifo_.size() > fifo_capacity_) {
    throw InvariantError(fmt::format("ready-pair FIFO overflow at cycle {} on label {}: {} entries, capacity {}",
                                     rec.cycle, fifo_.back().label, fifo_.size(), fifo_capacity_));
  }
  for (const auto &[label, ls] : labels_) {
    if (ls.counter != 0) {
      rec.counters.push_back({label, ls.counter});
    }
  }
  pipe_.advance();
  return rec;
}

void JugglePacEngine::route_result(const AdderResult &result, CycleRecord &rec) {
  const Label label = result.meta.label;
  if (result.meta.is_final_of_dataset) {
    LabelState &ls = labels_[label];
    if (ls.live.empty()) {
      throw InvariantError(fmt::format("final result on label {} at cycle {} with no live dataset", label, cycle()));
    }
    const std::uint64_t ordinal = ls.live.front();
    ls.live.pop_front();
    const DatasetTrack track = datasets_.at(ordinal);
    datasets_.erase(ordinal);
    if (ls.live.empty() && ls.counter == 0 && !ls.first_issued) {
      labels_.erase(label);
    }
    results_.push_back({ordinal, label, result.sum.value, result.sum.provenance, cycle(), track.last_input_cycle});
    rec.emitted.push_back(ordinal);
    return;
  }

  Subsum incoming{result.sum, label};
  auto slot = pair_slots_.find(label);
  if (slot == pair_slots_.end()) {
    pair_slots_.emplace(label, std::move(incoming));
    return;
  }
  const auto held_ids = slot->second.operand.provenance.ids();
  const auto new_ids = incoming.operand.provenance.ids();
  if (!held_ids.empty() && !new_ids.empty() && held_ids.front().dataset != new_ids.front().dataset) {
    report_mixing(label, fmt::format("pair slot pairs datasets {} and {}", held_ids.front().dataset,
                                     new_ids.front().dataset));
  }
  fifo_.push_back({std::move(slot->second), std::move(incoming), label});
  pair_slots_.erase(slot);
}

void JugglePacEngine::accept(const InputEvent &event, CycleRecord &rec) {
  if (event.value.mode() != config_.mode) {
    throw ConfigError(fmt::format("input at cycle {} is in {} mode, engine is {}", cycle(),
                                  to_string(event.value.mode()), to_string(config_.mode)));
  }
  if (!dataset_open_) {
    dataset_open_ = true;
    next_index_ = 0;
    const Label label = label_for(next_ordinal_);
    LabelState &ls = labels_[label];
    if (!ls.live.empty()) {
      report_mixing(label, fmt::format("dataset {} starts while dataset {} still holds the label", next_ordinal_,
                                       ls.live.back()));
    }
    ls.live.push_back(next_ordinal_);
    datasets_[next_ordinal_] = DatasetTrack{label};
  }

  const std::uint64_t ordinal = next_ordinal_;
  const ElementId id{ordinal, next_index_++};
  DatasetTrack &track = datasets_.at(ordinal);
  ++track.accepted;
  ++track.unissued;
  track.last_input_cycle = cycle();
  last_valid_cycle_ = cycle();
  any_valid_ = true;
  rec.accepted_input = id;
  input_buffer_.push_back({{event.value, Provenance(id)}, ordinal, event.last_of_dataset});

  if (event.last_of_dataset) {
    track.closed = true;
    dataset_open_ = false;
    ++next_ordinal_;
    if (config_.enforce_min_length) {
      const std::uint64_t min_len = min_dataset_length(config_.adder_latency, config_.label_width);
      if (track.accepted < min_len) {
        throw ConfigError(fmt::format("dataset {} has length {}, below the minimum {} for p={} L={}", ordinal,
                                      track.accepted, min_len, config_.adder_latency, config_.label_width));
      }
    }
  }
}

bool JugglePacEngine::issue_raw_inputs(CycleRecord &rec) {
  if (input_buffer_.empty()) {
    return false;
  }
  BufferedInput first = std::move(input_buffer_.front());
  input_buffer_.pop_front();
  const Label label = label_for(first.dataset);
  DatasetTrack &track = datasets_.at(first.dataset);

  if (!input_buffer_.empty() && input_buffer_.front().dataset == first.dataset) {
    BufferedInput second = std::move(input_buffer_.front());
    input_buffer_.pop_front();
    track.unissued -= 2;
    issue(std::move(first.operand), std::move(second.operand), label, IssueState::state1, rec);
    return false;
  }
  // Lone element: end of an odd dataset, or its partner has not arrived (gap).
  track.unissued -= 1;
  const bool last = first.last;
  issue(std::move(first.operand), Operand::identity(config_.mode), label, IssueState::state1, rec);
  return last;
}

void JugglePacEngine::issue_ready_pair(CycleRecord &rec) {
  // Ramp: only raw-input additions until the pipeline has filled. Without the
  // gate a parity hold during the ramp lets an even p issue a pair at p + 3.
  if (fifo_.empty() || cycle() < ramp_cycles(config_.effective_latency())) {
    return;
  }
  ReadyPair pair = std::move(fifo_.front());
  fifo_.pop_front();
  issue(std::move(pair.first.operand), std::move(pair.second.operand), pair.label, IssueState::state0, rec);
}

void JugglePacEngine::issue(Operand in1, Operand in2, Label label, IssueState state, CycleRecord &rec) {
  LabelState &ls = labels_[label];
  AdderOp op;
  op.label = label;
  op.issue_state = state;
  if (state == IssueState::state1) {
    if (!ls.first_issued) {
      ls.first_issued = true;
      op.first_state1_of_dataset = true;
    } else {
      set_counter(label, ls, ls.counter + 1);
    }
  } else if (ls.counter == 0) {
    report_mixing(label, "state-0 addition with the output counter already at zero");
  } else {
    set_counter(label, ls, ls.counter - 1);
  }

  // The counter tracks live subsums minus one; zero after the last input has
  // issued means this addition produces the dataset's total.
  if (ls.counter == 0 && ls.first_issued && label_inputs_done(ls)) {
    op.is_final_of_dataset = true;
    ls.first_issued = false;
  }

  rec.in1 = in1;
  rec.in2 = in2;
  op.in1 = std::move(in1);
  op.in2 = std::move(in2);
  pipe_.issue(std::move(op));
}

std::vector<DatasetResult> JugglePacEngine::drain(const std::function<void(const CycleRecord &)> &sink) {
  std::vector<DatasetResult> out = take_results();
  if (dataset_open_) {
    throw ConfigError(fmt::format("workload ended inside dataset {} (no last_of_dataset flag)", next_ordinal_));
  }
  const std::uint64_t bound = drain_bound(config_.effective_latency());
  while (!idle()) {
    if (pipe_.empty() && fifo_.empty() && input_buffer_.empty()) {
      // Nothing can make progress: subsums are stranded in the pair slots.
      for (const auto &[label, subsum] : pair_slots_) {
        report_mixing(label, fmt::format("{} element(s) stranded in the pair slot", subsum.operand.provenance.size()));
      }
      pair_slots_.clear();
      datasets_.clear();
      labels_.clear();
      break;
    }
    if (any_valid_ && cycle() > last_valid_cycle_ + bound) {
      throw InvariantError(fmt::format("drain did not finish within {} cycles of the last input (cycle {})", bound,
                                       last_valid_cycle_));
    }
    CycleRecord rec = step(InputEvent::gap());
    if (sink) {
      sink(rec);
    }
    for (DatasetResult &r : take_results()) {
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<std::pair<Cycle, unsigned>> JugglePacEngine::counter_trace(Label label) const {
  if (label >= config_.label_space()) {
    throw ConfigError(fmt::format("label {} outside the {}-bit label space", label, config_.label_width));
  }
  std::vector<std::pair<Cycle, unsigned>> trace;
  trace.reserve(cycle());
  unsigned value = 0;
  auto change = counter_changes_.begin();
  for (Cycle c = 0; c < cycle(); ++c) {
    for (; change != counter_changes_.end() && std::get<0>(*change) == c; ++change) {
      if (std::get<1>(*change) == label) {
        value = std::get<2>(*change);
      }
    }
    trace.emplace_back(c, value);
  }
  return trace;
}

} // namespace jpac
