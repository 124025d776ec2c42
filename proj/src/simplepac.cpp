#include "jugglepac/simplepac.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace jpac {

SimplePacEngine::SimplePacEngine(SimpleConfig config) : config_(config), pipe_(config.adder_latency) {}

bool SimplePacEngine::idle() const {
  return pipe_.empty() && ready_.empty() && phase_ == Phase::accepting && index_ == 0;
}

CycleRecord SimplePacEngine::step(const InputEvent &event) {
  CycleRecord rec;
  rec.cycle = cycle();
  rec.valid = event.valid;
  const bool busy = !idle() || event.valid;

  if (const AdderResult *r = pipe_.emerging()) {
    rec.out = r->sum;
    if (r->meta.is_final_of_dataset) {
      const PendingFinal done = finals_in_flight_.front();
      finals_in_flight_.pop_front();
      results_.push_back({done.ordinal, 0, r->sum.value, r->sum.provenance, cycle(), done.last_input_cycle});
      rec.emitted.push_back(done.ordinal);
    } else {
      ready_.push_back(r->sum);
    }
  }

  auto issue = [&](Operand in1, Operand in2, bool final) {
    rec.in1 = in1;
    rec.in2 = in2;
    AdderOp op{std::move(in1), std::move(in2)};
    op.is_final_of_dataset = final;
    if (final) {
      finals_in_flight_.push_back({ordinal_, last_input_cycle_});
      phase_ = Phase::accepting;
      ready_.clear();
      index_ = 0;
      ++ordinal_;
    }
    pipe_.issue(std::move(op));
  };

  if (phase_ == Phase::reducing) {
    rec.state = StateTag::reduce;
    rec.stall = event.valid;
    if (ready_.size() >= 2) {
      Operand a = std::move(ready_[0]);
      Operand b = std::move(ready_[1]);
      ready_.erase(ready_.begin(), ready_.begin() + 2);
      --live_partials_;
      issue(std::move(a), std::move(b), live_partials_ == 1);
    }
  } else if (event.valid) {
    if (event.value.mode() != config_.mode) {
      throw ConfigError(fmt::format("input at cycle {} is in {} mode, engine is {}", cycle(),
                                    to_string(event.value.mode()), to_string(config_.mode)));
    }
    const ElementId id{ordinal_, index_};
    rec.accepted_input = id;
    last_input_cycle_ = cycle();
    Operand x{event.value, Provenance(id)};
    const bool filling = index_ < config_.adder_latency;
    rec.state = filling ? StateTag::fill : StateTag::feedback;
    Operand partner = Operand::identity(config_.mode);
    if (!filling) {
      if (ready_.empty()) {
        throw InvariantError(fmt::format("SimplePAC has no partial to feed back at cycle {}", cycle()));
      }
      partner = std::move(ready_.front());
      ready_.pop_front();
    }
    ++index_;
    if (event.last_of_dataset) {
      live_partials_ = std::min<std::uint64_t>(index_, config_.adder_latency);
      if (live_partials_ > 1) {
        phase_ = Phase::reducing;
        issue(std::move(x), std::move(partner), false);
      } else {
        issue(std::move(x), std::move(partner), true);
      }
    } else {
      issue(std::move(x), std::move(partner), false);
    }
  } else {
    rec.state = index_ == 0 ? StateTag::idle : (index_ <= config_.adder_latency ? StateTag::fill : StateTag::feedback);
  }
  if (!busy) {
    rec.state = StateTag::idle;
  }
  pipe_.advance();
  return rec;
}

std::vector<DatasetResult> SimplePacEngine::drain(const std::function<void(const CycleRecord &)> &sink) {
  std::vector<DatasetResult> out = take_results();
  if (index_ != 0 && phase_ == Phase::accepting) {
    throw ConfigError(fmt::format("workload ended inside dataset {} (no last_of_dataset flag)", ordinal_));
  }
  while (!idle()) {
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

} // namespace jpac
