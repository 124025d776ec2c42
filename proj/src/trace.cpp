#include "jugglepac/trace.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace jpac {

namespace {

constexpr int kCycleWidth = 5;
constexpr int kColumnWidth = 13;

std::string index_list(const std::vector<std::uint64_t> &indices) {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i != 0) {
      out += ',';
    }
    out += std::to_string(indices[i]);
  }
  return out;
}

std::string group_name(std::uint64_t dataset, const std::vector<std::uint64_t> &indices) {
  const std::string letters = dataset_letters(dataset);
  if (indices.size() == 1) {
    return element_name({dataset, indices.front()});
  }
  bool contiguous = true;
  for (std::size_t i = 1; i < indices.size(); ++i) {
    contiguous = contiguous && indices[i] == indices[i - 1] + 1;
  }
  if (contiguous && indices.size() >= 3) {
    return fmt::format("{}_{{{}:{}}}", letters, indices.front(), indices.back());
  }
  return fmt::format("{}_{{{}}}", letters, index_list(indices));
}

std::string csv_field(const std::string &field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::vector<std::string> split(const std::string &text, char sep) {
  std::vector<std::string> parts;
  if (text.empty()) {
    return parts;
  }
  std::string part;
  std::istringstream is(text);
  while (std::getline(is, part, sep)) {
    parts.push_back(part);
  }
  return parts;
}

std::string counters_field(const std::vector<CounterSnapshot> &counters) {
  std::string out;
  for (const CounterSnapshot &c : counters) {
    if (!out.empty()) {
      out += ';';
    }
    out += fmt::format("{}:{}", c.label, c.value);
  }
  return out;
}

std::string emitted_field(const std::vector<std::uint64_t> &emitted) {
  std::string out;
  for (std::uint64_t e : emitted) {
    if (!out.empty()) {
      out += ';';
    }
    out += std::to_string(e);
  }
  return out;
}

std::string schedule_line(const std::string &cycle, const std::string &input, const std::string &in1,
                          const std::string &in2, const std::string &out) {
  std::string line = fmt::format("{:>{}} | {:<{}} | {:<{}} | {:<{}} | {}", cycle, kCycleWidth, input, kColumnWidth,
                                 in1, kColumnWidth, in2, kColumnWidth, out);
  while (!line.empty() && line.back() == ' ') {
    line.pop_back();
  }
  return line + '\n';
}

nlohmann::json row_json(const TraceRow &row) {
  nlohmann::json counters = nlohmann::json::array();
  for (const CounterSnapshot &c : row.counters) {
    counters.push_back({{"label", c.label}, {"value", c.value}});
  }
  return {{"cycle", row.cycle}, {"valid", row.valid}, {"input", row.input}, {"state", row.state},
          {"in1", row.in1},     {"in2", row.in2},     {"out", row.out},     {"fifo", row.fifo},
          {"counters", counters}, {"stall", row.stall}, {"emitted", row.emitted}};
}

} // namespace

std::string dataset_letters(std::uint64_t ordinal) {
  std::string out;
  std::uint64_t n = ordinal + 1;
  while (n > 0) {
    --n;
    out.insert(out.begin(), static_cast<char>('a' + n % 26));
    n /= 26;
  }
  return out;
}

std::optional<std::uint64_t> parse_dataset_letters(const std::string &letters) {
  if (letters.empty() || letters.size() > 12) {
    return std::nullopt;
  }
  std::uint64_t n = 0;
  for (char c : letters) {
    if (c < 'a' || c > 'z') {
      return std::nullopt;
    }
    n = n * 26 + static_cast<std::uint64_t>(c - 'a' + 1);
  }
  return n - 1;
}

std::string element_name(ElementId id) {
  if (id.index < 10) {
    return fmt::format("{}_{}", dataset_letters(id.dataset), id.index);
  }
  return fmt::format("{}_{{{}}}", dataset_letters(id.dataset), id.index);
}

std::optional<ElementId> parse_element_name(const std::string &name) {
  const auto underscore = name.find('_');
  if (underscore == std::string::npos) {
    return std::nullopt;
  }
  const auto dataset = parse_dataset_letters(name.substr(0, underscore));
  std::string digits = name.substr(underscore + 1);
  if (digits.size() >= 2 && digits.front() == '{' && digits.back() == '}') {
    digits = digits.substr(1, digits.size() - 2);
  }
  if (!dataset || digits.empty() || !std::ranges::all_of(digits, [](char c) { return c >= '0' && c <= '9'; })) {
    return std::nullopt;
  }
  return ElementId{*dataset, std::stoull(digits)};
}

std::string operand_name(const Operand &operand) {
  if (operand.is_identity()) {
    return "0";
  }
  std::string out;
  std::vector<std::uint64_t> indices;
  std::uint64_t dataset = operand.provenance.ids().front().dataset;
  auto flush = [&] {
    if (!out.empty()) {
      out += '+';
    }
    out += group_name(dataset, indices);
    indices.clear();
  };
  for (const ElementId &id : operand.provenance.ids()) {
    if (id.dataset != dataset) {
      flush();
      dataset = id.dataset;
    }
    indices.push_back(id.index);
  }
  flush();
  return out;
}

std::string to_string(StateTag tag) {
  switch (tag) {
  case StateTag::idle:
    return "idle";
  case StateTag::state0:
    return "0";
  case StateTag::state1:
    return "1";
  case StateTag::fill:
    return "fill";
  case StateTag::feedback:
    return "feedback";
  case StateTag::reduce:
    return "reduce";
  }
  return "idle";
}

StateTag parse_state_tag(const std::string &text) {
  for (StateTag tag : {StateTag::idle, StateTag::state0, StateTag::state1, StateTag::fill, StateTag::feedback,
                       StateTag::reduce}) {
    if (to_string(tag) == text) {
      return tag;
    }
  }
  throw std::runtime_error("unknown state tag '" + text + "'");
}

TraceRow to_row(const CycleRecord &record) {
  TraceRow row;
  row.cycle = record.cycle;
  row.valid = record.valid;
  if (record.accepted_input) {
    row.input = element_name(*record.accepted_input);
  }
  row.state = to_string(record.state);
  if (record.in1) {
    row.in1 = operand_name(*record.in1);
  }
  if (record.in2) {
    row.in2 = operand_name(*record.in2);
  }
  if (record.out) {
    row.out = operand_name(*record.out);
  }
  row.fifo = record.fifo_occupancy;
  row.counters = record.counters;
  row.stall = record.stall;
  row.emitted = record.emitted;
  return row;
}

std::vector<TraceRow> to_rows(std::span<const CycleRecord> records) {
  std::vector<TraceRow> rows;
  rows.reserve(records.size());
  for (const CycleRecord &r : records) {
    rows.push_back(to_row(r));
  }
  return rows;
}

std::string render_schedule(std::span<const TraceRow> rows) {
  std::string out = schedule_line("Cycle", "Input", "in1", "in2", "out");
  out += std::string(kCycleWidth, '-') + "-+-" + std::string(kColumnWidth, '-') + "-+-" +
         std::string(kColumnWidth, '-') + "-+-" + std::string(kColumnWidth, '-') + "-+-" +
         std::string(kColumnWidth, '-') + '\n';
  for (const TraceRow &row : rows) {
    const std::string input = row.stall ? "Stall" : row.input;
    const std::string result = !row.emitted.empty() && !row.out.empty() ? "**" + row.out + "**" : row.out;
    out += schedule_line(std::to_string(row.cycle), input, row.in1, row.in2, result);
  }
  return out;
}

std::string render_schedule(std::span<const CycleRecord> records) {
  const std::vector<TraceRow> rows = to_rows(records);
  return render_schedule(rows);
}

TraceFormat parse_trace_format(const std::string &text) {
  if (text == "csv") {
    return TraceFormat::csv;
  }
  if (text == "jsonl" || text == "json-lines") {
    return TraceFormat::jsonl;
  }
  throw std::runtime_error("unknown trace format '" + text + "' (expected csv or jsonl)");
}

void write_trace(std::ostream &os, std::span<const TraceRow> rows, TraceFormat format) {
  if (format == TraceFormat::jsonl) {
    for (const TraceRow &row : rows) {
      os << row_json(row).dump() << '\n';
    }
    return;
  }
  os << kTraceCsvHeader << '\n';
  for (const TraceRow &row : rows) {
    os << row.cycle << ',' << (row.valid ? 1 : 0) << ',' << csv_field(row.input) << ',' << csv_field(row.state) << ','
       << csv_field(row.in1) << ',' << csv_field(row.in2) << ',' << csv_field(row.out) << ',' << row.fifo << ','
       << counters_field(row.counters) << ',' << (row.stall ? 1 : 0) << ',' << emitted_field(row.emitted) << '\n';
  }
}

void write_trace_file(const std::filesystem::path &path, std::span<const TraceRow> rows, TraceFormat format) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open trace file for writing: " + path.string());
  }
  write_trace(os, rows, format);
  if (!os) {
    throw std::runtime_error("failed writing trace file: " + path.string());
  }
}

std::vector<TraceRow> read_trace_csv(std::istream &is) {
  std::vector<TraceRow> rows;
  std::string line;
  if (!std::getline(is, line) || line != kTraceCsvHeader) {
    throw std::runtime_error("trace CSV header mismatch");
  }
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 11) {
      throw std::runtime_error(fmt::format("trace CSV row has {} fields, expected 11: {}", f.size(), line));
    }
    TraceRow row;
    row.cycle = std::stoull(f[0]);
    row.valid = f[1] == "1";
    row.input = f[2];
    row.state = f[3];
    row.in1 = f[4];
    row.in2 = f[5];
    row.out = f[6];
    row.fifo = std::stoull(f[7]);
    for (const std::string &entry : split(f[8], ';')) {
      const auto colon = entry.find(':');
      row.counters.push_back({static_cast<Label>(std::stoul(entry.substr(0, colon))),
                              static_cast<unsigned>(std::stoul(entry.substr(colon + 1)))});
    }
    row.stall = f[9] == "1";
    for (const std::string &entry : split(f[10], ';')) {
      row.emitted.push_back(std::stoull(entry));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TraceRow> read_trace_jsonl(std::istream &is) {
  std::vector<TraceRow> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) {
      continue;
    }
    const nlohmann::json j = nlohmann::json::parse(line);
    TraceRow row;
    row.cycle = j.at("cycle").get<Cycle>();
    row.valid = j.at("valid").get<bool>();
    row.input = j.at("input").get<std::string>();
    row.state = j.at("state").get<std::string>();
    row.in1 = j.at("in1").get<std::string>();
    row.in2 = j.at("in2").get<std::string>();
    row.out = j.at("out").get<std::string>();
    row.fifo = j.at("fifo").get<std::size_t>();
    for (const auto &c : j.at("counters")) {
      row.counters.push_back({c.at("label").get<Label>(), c.at("value").get<unsigned>()});
    }
    row.stall = j.at("stall").get<bool>();
    row.emitted = j.at("emitted").get<std::vector<std::uint64_t>>();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TraceRow> read_trace_file(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open trace file: " + path.string());
  }
  try {
    return path.extension() == ".jsonl" ? read_trace_jsonl(is) : read_trace_csv(is);
  } catch (const std::exception &e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

Cycle RunStats::max_drain_latency() const {
  Cycle worst = 0;
  for (const DatasetLatency &d : drain_latencies) {
    worst = std::max(worst, d.latency);
  }
  return worst;
}

Cycle RunStats::drain_latency_spread() const {
  if (drain_latencies.empty()) {
    return 0;
  }
  const auto [lo, hi] = std::ranges::minmax_element(drain_latencies, {}, &DatasetLatency::latency);
  return hi->latency - lo->latency;
}

bool RunStats::output_in_order() const { return std::ranges::is_sorted(output_order); }

RunStats compute_stats(std::span<const CycleRecord> trace, std::span<const DatasetResult> results) {
  RunStats s;
  s.total_cycles = trace.size();
  for (const CycleRecord &r : trace) {
    if (r.in1) {
      ++s.issues;
      s.state1_issues += r.state == StateTag::state1 ? 1 : 0;
      s.state0_issues += r.state == StateTag::state0 ? 1 : 0;
    }
    s.max_fifo = std::max(s.max_fifo, r.fifo_occupancy);
    for (const CounterSnapshot &c : r.counters) {
      s.max_counter = std::max(s.max_counter, c.value);
    }
    s.stall_cycles += r.stall ? 1 : 0;
  }
  s.utilization = s.total_cycles == 0 ? 0.0 : static_cast<double>(s.issues) / static_cast<double>(s.total_cycles);
  for (const DatasetResult &r : results) {
    s.drain_latencies.push_back({r.dataset_ordinal, r.drain_latency()});
    s.output_order.push_back(r.dataset_ordinal);
  }
  std::ranges::sort(s.drain_latencies, {}, &DatasetLatency::dataset);
  return s;
}

RunStats stats_from_rows(std::span<const TraceRow> rows) {
  RunStats s;
  s.total_cycles = rows.size();
  std::map<std::uint64_t, Cycle> last_input;
  for (const TraceRow &row : rows) {
    if (!row.in1.empty()) {
      ++s.issues;
      s.state1_issues += row.state == "1" ? 1 : 0;
      s.state0_issues += row.state == "0" ? 1 : 0;
    }
    s.max_fifo = std::max(s.max_fifo, row.fifo);
    for (const CounterSnapshot &c : row.counters) {
      s.max_counter = std::max(s.max_counter, c.value);
    }
    s.stall_cycles += row.stall ? 1 : 0;
    if (const auto id = parse_element_name(row.input)) {
      last_input[id->dataset] = row.cycle;
    }
    for (std::uint64_t ordinal : row.emitted) {
      s.output_order.push_back(ordinal);
      s.drain_latencies.push_back({ordinal, row.cycle - last_input.at(ordinal)});
    }
  }
  s.utilization = s.total_cycles == 0 ? 0.0 : static_cast<double>(s.issues) / static_cast<double>(s.total_cycles);
  std::ranges::sort(s.drain_latencies, {}, &DatasetLatency::dataset);
  return s;
}

void write_stats_csv(std::ostream &os, const RunStats &stats) {
  os << "metric,value\n";
  os << "total_cycles," << stats.total_cycles << '\n';
  os << "issues," << stats.issues << '\n';
  os << "state1_issues," << stats.state1_issues << '\n';
  os << "state0_issues," << stats.state0_issues << '\n';
  os << fmt::format("utilization,{:.6f}\n", stats.utilization);
  os << "max_fifo," << stats.max_fifo << '\n';
  os << "max_counter," << stats.max_counter << '\n';
  os << "stall_cycles," << stats.stall_cycles << '\n';
  os << "max_drain_latency," << stats.max_drain_latency() << '\n';
  os << "drain_latency_spread," << stats.drain_latency_spread() << '\n';
  os << "output_in_order," << (stats.output_in_order() ? 1 : 0) << '\n';
  os << "\ndataset,drain_latency\n";
  for (const DatasetLatency &d : stats.drain_latencies) {
    os << d.dataset << ',' << d.latency << '\n';
  }
}

} // namespace jpac
