#include "jugglepac/simulate.hpp"

namespace jpac {

std::string to_string(EngineKind kind) { return kind == EngineKind::jugglepac ? "jugglepac" : "simplepac"; }

EngineKind parse_engine_kind(const std::string &text) {
  if (text == "jugglepac") {
    return EngineKind::jugglepac;
  }
  if (text == "simplepac") {
    return EngineKind::simplepac;
  }
  throw ConfigError("unknown engine '" + text + "' (expected jugglepac or simplepac)");
}

namespace {

template <typename Engine> class Recorder {
public:
  Recorder(Engine &engine, RunResult &run, const RunOptions &options)
      : engine_(engine), run_(run), options_(options) {}

  void operator()(const CycleRecord &rec) {
    if (options_.observer) {
      options_.observer(rec);
    }
    if (options_.keep_trace) {
      run_.trace.push_back(rec);
    }
  }

  void collect() {
    for (DatasetResult &r : engine_.take_results()) {
      run_.results.push_back(std::move(r));
    }
  }

private:
  Engine &engine_;
  RunResult &run_;
  const RunOptions &options_;
};

} // namespace

RunResult run_jugglepac(const EngineConfig &config, std::span<const InputEvent> events, const RunOptions &options) {
  RunResult run;
  JugglePacEngine engine(config);
  Recorder recorder(engine, run, options);
  for (const InputEvent &event : events) {
    recorder(engine.step(event));
    recorder.collect();
  }
  for (DatasetResult &r : engine.drain([&](const CycleRecord &rec) { recorder(rec); })) {
    run.results.push_back(std::move(r));
  }
  run.diagnostics = engine.diagnostics();
  return run;
}

RunResult run_simplepac(const SimpleConfig &config, std::span<const InputEvent> events, const RunOptions &options) {
  RunResult run;
  SimplePacEngine engine(config);
  Recorder recorder(engine, run, options);
  for (const InputEvent &event : events) {
    for (;;) {
      CycleRecord rec = engine.step(event);
      const bool stalled = rec.stall;
      recorder(rec);
      recorder.collect();
      if (!stalled) {
        break;
      }
    }
  }
  for (DatasetResult &r : engine.drain([&](const CycleRecord &rec) { recorder(rec); })) {
    run.results.push_back(std::move(r));
  }
  return run;
}

} // namespace jpac
