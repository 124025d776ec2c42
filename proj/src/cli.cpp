#include "jugglepac/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "jugglepac/batch.hpp"
#include "jugglepac/invariants.hpp"
#include "jugglepac/oracle.hpp"
#include "jugglepac/simulate.hpp"
#include "jugglepac/trace.hpp"
#include "jugglepac/workload.hpp"

namespace jpac {

namespace {

struct Options {
  std::string engine = "jugglepac";
  unsigned p = 14;
  unsigned L = 2;
  std::string mode = "exact";
  bool no_enforce = false;
  unsigned extra_stages = 0;

  std::string workload_file;
  std::vector<std::uint64_t> datasets;
  std::uint64_t seed = 0;
  std::uint64_t count = 0;
  std::uint64_t length_min = 0;
  std::uint64_t length_max = 0;
  bool minimum_length = false;
  std::string values = "uniform";
  double gap_probability = 0.0;
  std::uint64_t gap_between = 0;
  int exponent_spread = 0;

  std::string trace_path;
  std::string trace_format = "csv";
  std::string stats_path;
  std::string results_path;
  bool schedule = false;

  std::string latencies = "14";
  std::string label_widths = "1-4";
  bool serial = false;
  std::string out_path;
};

/// Options registered on the active subcommand, used to tell explicit flags
/// from defaults.
struct Flags {
  std::map<std::string, CLI::Option *> by_name;

  bool given(const std::string &name) const {
    auto it = by_name.find(name);
    return it != by_name.end() && it->second->count() > 0;
  }
};

void add_engine_options(CLI::App &app, Options &o, Flags &f, bool with_engine) {
  if (with_engine) {
    f.by_name["engine"] = app.add_option("--engine", o.engine, "jugglepac or simplepac")
                              ->check(CLI::IsMember({"jugglepac", "simplepac"}));
  }
  f.by_name["p"] = app.add_option("-p,--latency", o.p, "adder latency in cycles");
  f.by_name["L"] = app.add_option("-L,--label-width", o.L, "label width in bits");
  f.by_name["mode"] = app.add_option("--mode", o.mode, "exact or ieee")->check(CLI::IsMember({"exact", "ieee"}));
  f.by_name["no-enforce"] = app.add_flag("--no-enforce", o.no_enforce, "allow datasets below the minimum length");
  f.by_name["extra-stages"] = app.add_option("--extra-stages", o.extra_stages, "input pipeline stages before the adder");
}

void add_workload_options(CLI::App &app, Options &o, Flags &f) {
  f.by_name["workload"] = app.add_option("--workload", o.workload_file, "workload JSON file");
  f.by_name["datasets"] = app.add_option("--datasets", o.datasets, "explicit dataset lengths, e.g. 6,8")->delimiter(',');
  f.by_name["seed"] = app.add_option("--seed", o.seed, "workload seed");
  f.by_name["count"] = app.add_option("--count", o.count, "number of random datasets");
  f.by_name["length-min"] = app.add_option("--length-min", o.length_min, "shortest random dataset");
  f.by_name["length-max"] = app.add_option("--length-max", o.length_max, "longest random dataset");
  f.by_name["minimum-length"] = app.add_flag("--minimum-length", o.minimum_length, "every dataset at the minimum length");
  f.by_name["values"] = app.add_option("--values", o.values, "uniform or indexed")->check(CLI::IsMember({"uniform", "indexed"}));
  f.by_name["gap-prob"] = app.add_option("--gap-prob", o.gap_probability, "gap probability per element");
  f.by_name["gap-between"] = app.add_option("--gap-between", o.gap_between, "gap cycles between datasets");
  f.by_name["exponent-spread"] = app.add_option("--exponent-spread", o.exponent_spread, "ieee exponent spread");
}

void add_output_options(CLI::App &app, Options &o, Flags &f) {
  f.by_name["trace"] = app.add_option("--trace", o.trace_path, "write the cycle trace here");
  f.by_name["trace-format"] =
      app.add_option("--trace-format", o.trace_format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  f.by_name["stats"] = app.add_option("--stats", o.stats_path, "write run statistics (CSV) here");
  f.by_name["results"] = app.add_option("--results", o.results_path, "write per-dataset results (CSV) here");
  f.by_name["schedule"] = app.add_flag("--schedule", o.schedule, "print the cycle schedule table");
}

EngineConfig engine_config(const Options &o) {
  EngineConfig c;
  c.adder_latency = o.p;
  c.label_width = o.L;
  c.mode = parse_arith_mode(o.mode);
  c.enforce_min_length = !o.no_enforce;
  c.extra_input_stages = o.extra_stages;
  c.validate();
  return c;
}

template <typename T>
void override_field(T &field, const T &flag_value, const char *name, bool from_file, std::ostream &err) {
  if (from_file && field != flag_value) {
    err << fmt::format("note: --{} overrides the workload file ({} -> {})\n", name, field, flag_value);
  }
  field = flag_value;
}

WorkloadSpec build_workload(const Options &o, const Flags &f, std::ostream &err) {
  const bool from_file = !o.workload_file.empty();
  WorkloadSpec spec = from_file ? load_workload_file(o.workload_file) : WorkloadSpec{};
  const ArithMode mode = parse_arith_mode(o.mode);
  if (from_file && f.given("mode") && spec.mode != mode) {
    err << fmt::format("note: --mode overrides the workload file ({} -> {})\n", to_string(spec.mode), o.mode);
  }
  if (!from_file || f.given("mode")) {
    spec.mode = mode;
  }
  if (f.given("seed")) {
    override_field(spec.seed, o.seed, "seed", from_file, err);
  }

  const bool explicit_lengths = f.given("datasets");
  const bool random_lengths = f.given("count") || f.given("length-min") || f.given("length-max") || o.minimum_length;
  if (explicit_lengths && random_lengths) {
    throw ConfigError("--datasets cannot be combined with --count/--length-min/--length-max/--minimum-length");
  }
  if (explicit_lengths) {
    if (from_file) {
      err << "note: --datasets replaces the datasets of the workload file\n";
    }
    spec.length_policy = LengthPolicy::explicit_list;
    spec.datasets.clear();
    for (std::uint64_t len : o.datasets) {
      spec.datasets.push_back({len, {}});
    }
  } else if (random_lengths) {
    if (from_file) {
      err << "note: random-length flags replace the datasets of the workload file\n";
    }
    spec.datasets.clear();
    spec.count = o.count;
    if (o.minimum_length) {
      spec.length_policy = LengthPolicy::all_minimum;
    } else {
      spec.length_policy = LengthPolicy::uniform_range;
      const std::uint64_t lo = f.given("length-min") ? o.length_min : min_dataset_length(o.p, o.L);
      spec.length_lo = lo;
      spec.length_hi = f.given("length-max") ? o.length_max : 2 * lo;
    }
  }
  if (f.given("values")) {
    const ValuePolicy policy = o.values == "indexed" ? ValuePolicy::indexed : ValuePolicy::uniform_integer;
    if (from_file && spec.value_policy != policy) {
      err << "note: --values overrides the workload file\n";
    }
    spec.value_policy = policy;
  }
  if (f.given("gap-prob")) {
    override_field(spec.gaps.probability, o.gap_probability, "gap-prob", from_file, err);
  }
  if (f.given("gap-between")) {
    override_field(spec.gaps.inter_dataset, o.gap_between, "gap-between", from_file, err);
  }
  if (f.given("exponent-spread")) {
    override_field(spec.exponent_spread, o.exponent_spread, "exponent-spread", from_file, err);
  }
  return spec;
}

std::vector<unsigned> parse_range_list(const std::string &text, const char *what) {
  std::vector<unsigned> out;
  std::istringstream is(text);
  std::string item;
  try {
    while (std::getline(is, item, ',')) {
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        out.push_back(static_cast<unsigned>(std::stoul(item)));
      } else {
        const auto lo = static_cast<unsigned>(std::stoul(item.substr(0, dash)));
        const auto hi = static_cast<unsigned>(std::stoul(item.substr(dash + 1)));
        for (unsigned v = lo; v <= hi; ++v) {
          out.push_back(v);
        }
      }
    }
  } catch (const std::exception &) {
    throw ConfigError(fmt::format("cannot parse {} list '{}'", what, text));
  }
  if (out.empty()) {
    throw ConfigError(fmt::format("empty {} list", what));
  }
  return out;
}

std::ofstream open_output(const std::string &path) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  return os;
}

void write_metadata(std::ostream &os, const Options &o, const WorkloadSpec &spec) {
  os << "# engine=" << o.engine << " p=" << o.p << " L=" << o.L << " mode=" << o.mode
     << " enforce=" << (o.no_enforce ? 0 : 1) << " seed=" << spec.seed << '\n';
}

void write_results_csv(std::ostream &os, std::span<const DatasetResult> results) {
  os << "dataset,label,value,last_input_cycle,completion_cycle,drain_latency\n";
  for (const DatasetResult &r : results) {
    os << fmt::format("{},{},{},{},{},{}\n", r.dataset_ordinal, r.label, r.value.str(), r.last_input_cycle,
                      r.completion_cycle, r.drain_latency());
  }
}

RunResult simulate(EngineKind kind, const Options &o, const Workload &workload) {
  if (kind == EngineKind::jugglepac) {
    return run_jugglepac(engine_config(o), workload.events);
  }
  SimpleConfig c{o.p, parse_arith_mode(o.mode)};
  return run_simplepac(c, workload.events);
}

std::optional<LengthRule> length_rule(EngineKind kind, const Options &o) {
  if (kind == EngineKind::simplepac) {
    return std::nullopt;
  }
  return LengthRule{o.p, o.L, !o.no_enforce};
}

int cmd_run(const Options &o, const Flags &f, std::ostream &out, std::ostream &err) {
  const EngineKind kind = parse_engine_kind(o.engine);
  const WorkloadSpec spec = build_workload(o, f, err);
  const Workload workload = expand(spec, length_rule(kind, o));
  const RunResult run = simulate(kind, o, workload);
  const std::vector<TraceRow> rows = to_rows(run.trace);
  const RunStats stats = compute_stats(run.trace, run.results);

  if (o.schedule) {
    out << render_schedule(rows);
  }
  if (!o.trace_path.empty()) {
    write_trace_file(o.trace_path, rows, parse_trace_format(o.trace_format));
  }
  if (!o.results_path.empty()) {
    std::ofstream os = open_output(o.results_path);
    write_results_csv(os, run.results);
  }
  if (!o.stats_path.empty()) {
    std::ofstream os = open_output(o.stats_path);
    write_metadata(os, o, spec);
    write_stats_csv(os, stats);
  } else if (!o.schedule) {
    write_metadata(out, o, spec);
    write_stats_csv(out, stats);
  }
  for (const Diagnostic &d : run.diagnostics) {
    err << fmt::format("diagnostic: cycle {} label {}: {}\n", d.cycle, d.label, d.message);
  }
  return kExitOk;
}

int cmd_verify(const Options &o, const Flags &f, std::ostream &out, std::ostream &err) {
  const EngineKind kind = parse_engine_kind(o.engine);
  if (parse_arith_mode(o.mode) != ArithMode::exact) {
    throw ConfigError("verify runs in exact mode only");
  }
  const WorkloadSpec spec = build_workload(o, f, err);
  const Workload workload = expand(spec, length_rule(kind, o));
  const std::uint64_t shortest =
      workload.datasets.empty() ? 0 : std::ranges::min(workload.datasets, {}, &Dataset::length).length();

  std::vector<Violation> violations;
  RunResult run;
  if (kind == EngineKind::jugglepac) {
    MonitorOptions mo;
    mo.check_order = ordering_expected(o.p, o.L, shortest);
    InvariantMonitor monitor(engine_config(o).effective_latency(), mo);
    RunOptions ro;
    ro.keep_trace = false;
    ro.observer = [&](const CycleRecord &r) { monitor.observe(r); };
    run = run_jugglepac(engine_config(o), workload.events, ro);
    monitor.finish(run.results, workload.datasets);
    violations = monitor.violations();
    for (const Diagnostic &d : run.diagnostics) {
      violations.push_back({"no mixing", d.cycle, d.label, d.message});
    }
    out << fmt::format("max FIFO occupancy {} (bound {}), max counter {} (bound {})\n", monitor.max_fifo(),
                       ceil_log2(o.p), monitor.max_counter(), o.p + 2);
    out << fmt::format("ordering {}\n", mo.check_order ? "checked" : "not promised for this configuration");
  } else {
    run = simulate(kind, o, workload);
    InvariantMonitor monitor(o.p);
    monitor.finish(run.results, workload.datasets);
    violations = monitor.violations();
  }

  std::uint64_t passed = 0;
  for (const DatasetResult &r : run.results) {
    if (r.dataset_ordinal < workload.datasets.size() && verify_result(r, workload.datasets[r.dataset_ordinal]).pass) {
      ++passed;
    }
  }
  RunStats stats = compute_stats({}, run.results);
  out << fmt::format("seed {}: verified {}/{} datasets\n", spec.seed, passed, workload.datasets.size());
  out << fmt::format("worst drain latency {} cycles (structural bound {}), spread {}\n", stats.max_drain_latency(),
                     drain_bound(o.p), stats.drain_latency_spread());
  if (violations.empty()) {
    out << "VERIFY PASS\n";
    return kExitOk;
  }
  for (const Violation &v : violations) {
    err << v.describe() << '\n';
  }
  out << "VERIFY FAIL: " << violations.front().describe() << '\n';
  return kExitFailure;
}

int cmd_sweep(const Options &o, const Flags &, std::ostream &out, std::ostream &) {
  SweepOptions so;
  so.seed = o.seed;
  so.datasets = o.count == 0 ? 50 : o.count;
  so.gap_probability = o.gap_probability;
  so.mode = parse_arith_mode(o.mode);
  so.parallel = !o.serial;
  const std::vector<unsigned> ps = parse_range_list(o.latencies, "latency");
  const std::vector<unsigned> ls = parse_range_list(o.label_widths, "label width");
  for (unsigned p : ps) {
    if (p == 0) {
      throw ConfigError("adder latency p must be at least 1");
    }
  }
  for (unsigned L : ls) {
    if (L == 0 || L > 31) {
      throw ConfigError(fmt::format("label width L={} out of range [1, 31]", L));
    }
  }
  const std::vector<SweepRow> rows = sweep(ps, ls, so);
  if (!o.out_path.empty()) {
    std::ofstream os = open_output(o.out_path);
    write_sweep_csv(os, rows);
  } else {
    write_sweep_csv(out, rows);
  }
  const bool all_ok = std::ranges::all_of(rows, [](const SweepRow &r) { return r.verified; });
  return all_ok ? kExitOk : kExitFailure;
}

int cmd_compare(const Options &o, const Flags &f, std::ostream &out, std::ostream &err) {
  const WorkloadSpec spec = build_workload(o, f, err);
  const Workload workload = expand(spec, length_rule(EngineKind::jugglepac, o));
  const RunResult sp = simulate(EngineKind::simplepac, o, workload);
  const RunResult jp = simulate(EngineKind::jugglepac, o, workload);
  const RunStats sps = compute_stats(sp.trace, sp.results);
  const RunStats jps = compute_stats(jp.trace, jp.results);

  auto last_completion = [](const RunResult &r) {
    Cycle c = 0;
    for (const DatasetResult &d : r.results) {
      c = std::max(c, d.completion_cycle);
    }
    return c;
  };
  auto verified = [&](const RunResult &r) {
    std::uint64_t n = 0;
    for (const DatasetResult &d : r.results) {
      n += verify_result(d, workload.datasets.at(d.dataset_ordinal)).pass ? 1 : 0;
    }
    return n;
  };

  Options both = o;
  both.engine = "simplepac+jugglepac";
  write_metadata(out, both, spec);
  out << "metric,simplepac,jugglepac\n";
  out << fmt::format("stall_cycles,{},{}\n", sps.stall_cycles, jps.stall_cycles);
  out << fmt::format("final_completion_cycle,{},{}\n", last_completion(sp), last_completion(jp));
  out << fmt::format("total_cycles,{},{}\n", sps.total_cycles, jps.total_cycles);
  out << fmt::format("utilization,{:.4f},{:.4f}\n", sps.utilization, jps.utilization);
  out << fmt::format("verified,{},{}\n", verified(sp), verified(jp));
  out << "\ndataset,simplepac_completion,jugglepac_completion,simplepac_latency,jugglepac_latency\n";
  std::map<std::uint64_t, const DatasetResult *> sp_by, jp_by;
  for (const DatasetResult &d : sp.results) {
    sp_by[d.dataset_ordinal] = &d;
  }
  for (const DatasetResult &d : jp.results) {
    jp_by[d.dataset_ordinal] = &d;
  }
  for (const Dataset &d : workload.datasets) {
    const DatasetResult *a = sp_by.count(d.ordinal) ? sp_by[d.ordinal] : nullptr;
    const DatasetResult *b = jp_by.count(d.ordinal) ? jp_by[d.ordinal] : nullptr;
    out << fmt::format("{},{},{},{},{}\n", dataset_letters(d.ordinal), a ? std::to_string(a->completion_cycle) : "",
                       b ? std::to_string(b->completion_cycle) : "", a ? std::to_string(a->drain_latency()) : "",
                       b ? std::to_string(b->drain_latency()) : "");
  }
  const bool ok = verified(sp) == workload.datasets.size() && verified(jp) == workload.datasets.size();
  return ok ? kExitOk : kExitFailure;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Cycle-accurate simulator for pipelined floating-point accumulators", "jugglepac"};
  app.require_subcommand(1);
  Options o;
  std::map<std::string, Flags> flags;

  CLI::App *run = app.add_subcommand("run", "simulate a workload, write trace and statistics");
  add_engine_options(*run, o, flags["run"], true);
  add_workload_options(*run, o, flags["run"]);
  add_output_options(*run, o, flags["run"]);

  CLI::App *verify = app.add_subcommand("verify", "check every result against the oracle and all invariants");
  add_engine_options(*verify, o, flags["verify"], true);
  add_workload_options(*verify, o, flags["verify"]);

  CLI::App *sweep_cmd = app.add_subcommand("sweep", "minimum lengths and structural maxima over (p, L)");
  sweep_cmd->add_option("--latencies", o.latencies, "p values, e.g. 1-16 or 3,5,14");
  sweep_cmd->add_option("--label-widths", o.label_widths, "L values, e.g. 1-4");
  sweep_cmd->add_option("--count", o.count, "minimum-length datasets per cell (default 50)");
  sweep_cmd->add_option("--seed", o.seed, "workload seed");
  sweep_cmd->add_option("--gap-prob", o.gap_probability, "gap probability per element");
  sweep_cmd->add_option("--mode", o.mode, "exact or ieee")->check(CLI::IsMember({"exact", "ieee"}));
  sweep_cmd->add_flag("--serial", o.serial, "use the single-threaded reference loop");
  sweep_cmd->add_option("--out", o.out_path, "write CSV here instead of stdout");

  CLI::App *schedule = app.add_subcommand("schedule", "print the cycle schedule (defaults: p=3, datasets 6,8)");
  add_engine_options(*schedule, o, flags["schedule"], true);
  add_workload_options(*schedule, o, flags["schedule"]);

  CLI::App *compare = app.add_subcommand("compare", "SimplePAC and JugglePAC side by side on one workload");
  add_engine_options(*compare, o, flags["compare"], false);
  add_workload_options(*compare, o, flags["compare"]);

  std::vector<const char *> argv;
  argv.reserve(args.size());
  for (const std::string &a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) {
      return cmd_run(o, flags["run"], out, err);
    }
    if (verify->parsed()) {
      return cmd_verify(o, flags["verify"], out, err);
    }
    if (sweep_cmd->parsed()) {
      return cmd_sweep(o, {}, out, err);
    }
    if (schedule->parsed()) {
      Flags &f = flags["schedule"];
      if (!f.given("p")) {
        o.p = 3;
      }
      if (!f.given("workload") && !f.given("datasets") && !f.given("count") && !f.given("minimum-length")) {
        o.datasets = {6, 8};
        f.by_name["datasets"]->add_result(std::vector<std::string>{"6", "8"});
      }
      if (!f.given("values")) {
        o.values = "indexed";
      }
      o.schedule = true;
      return cmd_run(o, f, out, err);
    }
    if (compare->parsed()) {
      return cmd_compare(o, flags["compare"], out, err);
    }
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantError &e) {
    err << "invariant failure: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

} // namespace jpac
