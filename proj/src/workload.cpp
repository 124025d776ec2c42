#include "jugglepac/workload.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "jugglepac/jugglepac_engine.hpp"

namespace jpac {

std::int64_t WorkloadRng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    throw ConfigError(fmt::format("empty integer range [{}, {}]", lo, hi));
  }
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == std::numeric_limits<std::uint64_t>::max()) {
    return static_cast<std::int64_t>(next());
  }
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t draw = next();
  while (draw >= limit) {
    draw = next();
  }
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + draw % range);
}

std::uint64_t LengthRule::minimum() const { return min_dataset_length(adder_latency, label_width); }

namespace {

Value make_value(std::int64_t integer, ArithMode mode, int exponent) {
  if (mode == ArithMode::exact) {
    return Value(BigInt(integer));
  }
  return Value(std::ldexp(static_cast<double>(integer), exponent));
}

} // namespace

Workload expand(const WorkloadSpec &spec, const std::optional<LengthRule> &rule) {
  if (spec.gaps.probability < 0.0 || spec.gaps.probability >= 1.0) {
    throw ConfigError(fmt::format("gap probability {} outside [0, 1)", spec.gaps.probability));
  }
  if (spec.exponent_spread < 0 || spec.exponent_spread > 900) {
    throw ConfigError("exponent_spread must be in [0, 900]");
  }

  WorkloadRng rng(spec.seed);
  WorkloadRng gap_rng(spec.seed ^ kGapSeedSalt);

  std::uint64_t count = 0;
  switch (spec.length_policy) {
  case LengthPolicy::explicit_list:
    count = spec.datasets.size();
    break;
  case LengthPolicy::uniform_range:
    if (spec.length_lo == 0 || spec.length_lo > spec.length_hi) {
      throw ConfigError(fmt::format("invalid length range [{}, {}]", spec.length_lo, spec.length_hi));
    }
    count = spec.count;
    break;
  case LengthPolicy::all_minimum:
    if (!rule) {
      throw ConfigError("all-minimum length policy needs the engine's p and L");
    }
    count = spec.count;
    break;
  }

  Workload w;
  for (std::uint64_t k = 0; k < count; ++k) {
    Dataset d;
    d.ordinal = k;
    std::uint64_t length = 0;
    const DatasetSpec *given = spec.length_policy == LengthPolicy::explicit_list ? &spec.datasets[k] : nullptr;
    if (given) {
      length = given->length;
    } else if (spec.length_policy == LengthPolicy::uniform_range) {
      length = static_cast<std::uint64_t>(rng.uniform_int(static_cast<std::int64_t>(spec.length_lo),
                                                          static_cast<std::int64_t>(spec.length_hi)));
    } else {
      length = rule->minimum();
    }
    if (length == 0) {
      throw ConfigError(fmt::format("dataset {} has length 0", k));
    }
    if (rule && rule->enforce && length < rule->minimum()) {
      throw ConfigError(fmt::format("dataset {} has length {}, below the minimum {} for p={} L={}", k, length,
                                    rule->minimum(), rule->adder_latency, rule->label_width));
    }

    if (given && !given->values.empty()) {
      if (given->values.size() != length) {
        throw ConfigError(fmt::format("dataset {} lists {} values for length {}", k, given->values.size(), length));
      }
      for (const Value &v : given->values) {
        if (v.mode() != spec.mode) {
          throw ConfigError(fmt::format("dataset {} has a value not in {} mode", k, to_string(spec.mode)));
        }
      }
      d.elements = given->values;
    } else {
      d.elements.reserve(length);
      for (std::uint64_t i = 0; i < length; ++i) {
        std::int64_t integer = 0;
        if (spec.value_policy == ValuePolicy::indexed) {
          integer = static_cast<std::int64_t>(k * 1'000'000 + i);
        } else {
          integer = rng.uniform_int(spec.value_lo, spec.value_hi);
        }
        int exponent = 0;
        if (spec.mode == ArithMode::ieee && spec.exponent_spread > 0) {
          exponent = static_cast<int>(rng.uniform_int(-spec.exponent_spread, spec.exponent_spread));
        }
        d.elements.push_back(make_value(integer, spec.mode, exponent));
      }
    }

    if (k != 0) {
      for (std::uint64_t g = 0; g < spec.gaps.inter_dataset; ++g) {
        w.events.push_back(InputEvent::gap());
      }
    }
    for (std::uint64_t i = 0; i < length; ++i) {
      if (spec.gaps.probability > 0.0) {
        while (gap_rng.uniform01() < spec.gaps.probability) {
          w.events.push_back(InputEvent::gap());
        }
      }
      w.events.push_back(InputEvent::element(d.elements[i], i + 1 == length));
    }
    w.datasets.push_back(std::move(d));
  }
  return w;
}

namespace {

Value json_value(const nlohmann::json &j, ArithMode mode) {
  if (j.is_number_integer()) {
    return Value::from_integer(j.get<std::int64_t>(), mode);
  }
  if (j.is_number_float()) {
    if (mode == ArithMode::exact) {
      throw ConfigError("exact-mode workload contains a non-integer value");
    }
    return Value(j.get<double>());
  }
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    try {
      return mode == ArithMode::exact ? Value(BigInt(text)) : Value(std::stod(text));
    } catch (const std::exception &) {
      throw ConfigError("unparseable value '" + text + "'");
    }
  }
  throw ConfigError("workload values must be numbers or numeric strings");
}

} // namespace

WorkloadSpec parse_workload_json(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(std::string("workload is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError("workload document must be a JSON object");
  }

  WorkloadSpec spec;
  try {
    spec.seed = doc.value("seed", std::uint64_t{0});
    spec.mode = parse_arith_mode(doc.value("mode", std::string("exact")));
    const std::string values = doc.value("value_policy", std::string("uniform"));
    if (values == "uniform") {
      spec.value_policy = ValuePolicy::uniform_integer;
    } else if (values == "indexed") {
      spec.value_policy = ValuePolicy::indexed;
    } else {
      throw ConfigError("value_policy must be 'uniform' or 'indexed'");
    }
    spec.value_lo = doc.value("value_min", spec.value_lo);
    spec.value_hi = doc.value("value_max", spec.value_hi);
    spec.exponent_spread = doc.value("exponent_spread", 0);

    if (doc.contains("datasets") && doc.contains("random")) {
      throw ConfigError("workload may give 'datasets' or 'random', not both");
    }
    if (doc.contains("datasets")) {
      spec.length_policy = LengthPolicy::explicit_list;
      for (const auto &entry : doc.at("datasets")) {
        DatasetSpec d;
        if (entry.is_number_unsigned()) {
          d.length = entry.get<std::uint64_t>();
        } else {
          d.length = entry.at("length").get<std::uint64_t>();
          if (entry.contains("values")) {
            for (const auto &v : entry.at("values")) {
              d.values.push_back(json_value(v, spec.mode));
            }
          }
        }
        spec.datasets.push_back(std::move(d));
      }
    } else if (doc.contains("random")) {
      const auto &r = doc.at("random");
      spec.count = r.at("count").get<std::uint64_t>();
      if (r.value("minimum_length", false)) {
        spec.length_policy = LengthPolicy::all_minimum;
      } else {
        spec.length_policy = LengthPolicy::uniform_range;
        spec.length_lo = r.at("length_min").get<std::uint64_t>();
        spec.length_hi = r.at("length_max").get<std::uint64_t>();
      }
    }

    if (doc.contains("gaps")) {
      const auto &g = doc.at("gaps");
      spec.gaps.probability = g.value("probability", 0.0);
      spec.gaps.inter_dataset = g.value("inter_dataset", std::uint64_t{0});
    }
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("malformed workload: ") + e.what());
  }
  return spec;
}

WorkloadSpec load_workload_file(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) {
    throw ConfigError("cannot open workload file: " + path.string());
  }
  std::ostringstream buffer;
  buffer << is.rdbuf();
  try {
    return parse_workload_json(buffer.str());
  } catch (const ConfigError &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

} // namespace jpac
