#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "jugglepac/jugglepac_engine.hpp"
#include "jugglepac/records.hpp"
#include "jugglepac/simplepac.hpp"

namespace jpac {

enum class EngineKind { jugglepac, simplepac };

std::string to_string(EngineKind kind);
EngineKind parse_engine_kind(const std::string &text);

struct RunResult {
  std::vector<CycleRecord> trace;
  std::vector<DatasetResult> results;
  std::vector<Diagnostic> diagnostics;
};

using RecordObserver = std::function<void(const CycleRecord &)>;

struct RunOptions {
  bool keep_trace = true;
  RecordObserver observer;
};

/// Feeds one event per cycle, then drains.
RunResult run_jugglepac(const EngineConfig &config, std::span<const InputEvent> events, const RunOptions &options = {});

/// Feeds events, re-presenting any event refused during a stall, then drains.
RunResult run_simplepac(const SimpleConfig &config, std::span<const InputEvent> events, const RunOptions &options = {});

} // namespace jpac
