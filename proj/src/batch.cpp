#include "jugglepac/batch.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "jugglepac/simulate.hpp"

namespace jpac {

bool operator==(const CaseOutcome &a, const CaseOutcome &b) {
  auto key = [](const CaseOutcome &o) {
    return std::tie(o.adder_latency, o.label_width, o.seed, o.datasets, o.shortest_dataset, o.results, o.verified,
                    o.valid_cycles, o.accepted_cycles, o.stall_cycles, o.max_fifo, o.max_counter, o.max_drain_latency,
                    o.drain_latency_spread, o.in_order, o.error);
  };
  if (key(a) != key(b) || a.violations.size() != b.violations.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.violations.size(); ++i) {
    if (a.violations[i].describe() != b.violations[i].describe()) {
      return false;
    }
  }
  return true;
}

CaseOutcome run_case(const CaseSpec &spec) {
  CaseOutcome out;
  out.adder_latency = spec.engine.adder_latency;
  out.label_width = spec.engine.label_width;
  out.seed = spec.workload.seed;
  try {
    const LengthRule rule{spec.engine.adder_latency, spec.engine.label_width, spec.engine.enforce_min_length};
    const Workload workload = expand(spec.workload, rule);
    out.datasets = workload.datasets.size();
    out.shortest_dataset = workload.datasets.empty() ? 0 : std::ranges::min(workload.datasets, {}, &Dataset::length).length();

    InvariantMonitor monitor(spec.engine.effective_latency(), spec.monitor);
    RunOptions options;
    options.keep_trace = false;
    options.observer = [&](const CycleRecord &r) {
      monitor.observe(r);
      out.valid_cycles += r.valid ? 1 : 0;
      out.accepted_cycles += r.accepted_input ? 1 : 0;
      out.stall_cycles += r.stall ? 1 : 0;
    };
    const RunResult run = run_jugglepac(spec.engine, workload.events, options);
    monitor.finish(run.results, workload.datasets);

    out.results = run.results.size();
    for (const DatasetResult &r : run.results) {
      if (r.dataset_ordinal < workload.datasets.size() && verify_result(r, workload.datasets[r.dataset_ordinal]).pass) {
        ++out.verified;
      }
    }
    out.max_fifo = monitor.max_fifo();
    out.max_counter = monitor.max_counter();
    if (!run.results.empty()) {
      const auto [lo, hi] = std::ranges::minmax_element(run.results, {}, &DatasetResult::drain_latency);
      out.max_drain_latency = hi->drain_latency();
      out.drain_latency_spread = hi->drain_latency() - lo->drain_latency();
    }
    out.in_order = std::ranges::is_sorted(run.results, {}, &DatasetResult::dataset_ordinal);
    out.violations = monitor.violations();
    for (const Diagnostic &d : run.diagnostics) {
      out.violations.push_back({"no mixing", d.cycle, d.label, d.message});
    }
  } catch (const std::exception &e) {
    out.error = e.what();
  }
  return out;
}

std::vector<CaseOutcome> run_cases_serial(std::span<const CaseSpec> cases) {
  std::vector<CaseOutcome> out;
  out.reserve(cases.size());
  for (const CaseSpec &c : cases) {
    out.push_back(run_case(c));
  }
  return out;
}

std::vector<CaseOutcome> run_cases_parallel(std::span<const CaseSpec> cases) {
  std::vector<CaseOutcome> out(cases.size());
  const auto n = static_cast<std::int64_t>(cases.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = run_case(cases[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<SweepRow> sweep(std::span<const unsigned> latencies, std::span<const unsigned> label_widths,
                            const SweepOptions &options) {
  std::vector<CaseSpec> cases;
  for (unsigned p : latencies) {
    for (unsigned L : label_widths) {
      CaseSpec c;
      c.engine.adder_latency = p;
      c.engine.label_width = L;
      c.engine.mode = options.mode;
      c.workload.seed = options.seed;
      c.workload.mode = options.mode;
      c.workload.length_policy = LengthPolicy::all_minimum;
      c.workload.count = options.datasets;
      c.workload.gaps.probability = options.gap_probability;
      cases.push_back(std::move(c));
    }
  }
  const std::vector<CaseOutcome> outcomes = options.parallel ? run_cases_parallel(cases) : run_cases_serial(cases);

  std::vector<SweepRow> rows;
  for (const CaseOutcome &o : outcomes) {
    SweepRow row;
    row.adder_latency = o.adder_latency;
    row.label_width = o.label_width;
    row.min_length = min_dataset_length(o.adder_latency, o.label_width);
    row.fifo_bound = ceil_log2(o.adder_latency);
    row.max_fifo = o.max_fifo;
    row.max_counter = o.max_counter;
    row.worst_drain_latency = o.max_drain_latency;
    row.drain_bound = drain_bound(o.adder_latency);
    row.verified = o.error.empty() && o.results == o.datasets && o.verified == o.datasets;
    row.error = o.error;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string csv_quote(const std::string &field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') {
      out += '"';
    }
  }
  return out + '"';
}

} // namespace

void write_sweep_csv(std::ostream &os, std::span<const SweepRow> rows) {
  os << "p,L,min_length,fifo_bound,max_fifo,counter_bound,max_counter,drain_bound,worst_drain_latency,verified,error\n";
  for (const SweepRow &r : rows) {
    os << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.adder_latency, r.label_width, r.min_length, r.fifo_bound,
                      r.max_fifo, r.adder_latency + 2, r.max_counter, r.drain_bound, r.worst_drain_latency,
                      r.verified ? 1 : 0, csv_quote(r.error));
  }
}

} // namespace jpac
