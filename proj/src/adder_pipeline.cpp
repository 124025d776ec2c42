#include "jugglepac/adder_pipeline.hpp"

#include <string>

namespace jpac {

AdderPipeline::AdderPipeline(unsigned latency) : latency_(latency) {
  if (latency == 0) {
    throw ConfigError("adder latency must be at least 1 cycle");
  }
}

const AdderResult *AdderPipeline::emerging() const {
  if (!slots_.empty() && slots_.front().ready_cycle == now_) {
    return &slots_.front().result;
  }
  return nullptr;
}

void AdderPipeline::issue(AdderOp op) {
  if (issued_this_cycle_) {
    throw InvariantError("adder issued twice in cycle " + std::to_string(now_));
  }
  issued_this_cycle_ = true;
  op.issue_cycle = now_;
  Operand sum = operand_add(op.in1, op.in2);
  slots_.push_back({{std::move(sum), std::move(op)}, now_ + latency_});
}

void AdderPipeline::advance() {
  if (emerging() != nullptr) {
    slots_.pop_front();
  }
  issued_this_cycle_ = false;
  ++now_;
}

std::optional<AdderResult> AdderPipeline::step(std::optional<AdderOp> op) {
  std::optional<AdderResult> out;
  if (const AdderResult *r = emerging()) {
    out = *r;
  }
  if (op) {
    issue(std::move(*op));
  }
  advance();
  return out;
}

} // namespace jpac
