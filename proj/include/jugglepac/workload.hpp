#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jugglepac/oracle.hpp"
#include "jugglepac/records.hpp"
#include "jugglepac/value.hpp"

namespace jpac {

/// Deterministic random source: std::mt19937_64 (bit-exact across standard
/// libraries) with our own range reduction, since the standard distributions
/// are implementation-defined.
class WorkloadRng {
public:
  explicit WorkloadRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi] by rejection sampling.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

/// Gap stream seed is derived from the workload seed so that turning gaps on
/// does not perturb lengths or values.
inline constexpr std::uint64_t kGapSeedSalt = 0x9E3779B97F4A7C15ULL;

enum class LengthPolicy { explicit_list, uniform_range, all_minimum };
enum class ValuePolicy { explicit_values, uniform_integer, indexed };

struct DatasetSpec {
  std::uint64_t length = 0;
  /// Optional explicit values; generated from the seed when empty.
  std::vector<Value> values;
};

struct GapPolicy {
  /// Chance that a gap cycle precedes each element (repeats geometrically).
  double probability = 0.0;
  /// Fixed number of gap cycles between consecutive datasets.
  std::uint64_t inter_dataset = 0;
};

struct WorkloadSpec {
  std::uint64_t seed = 0;
  ArithMode mode = ArithMode::exact;

  LengthPolicy length_policy = LengthPolicy::explicit_list;
  std::vector<DatasetSpec> datasets;   // explicit_list
  std::uint64_t count = 0;             // uniform_range / all_minimum
  std::uint64_t length_lo = 1;
  std::uint64_t length_hi = 1;

  ValuePolicy value_policy = ValuePolicy::uniform_integer;
  std::int64_t value_lo = -(std::int64_t{1} << 31);
  std::int64_t value_hi = (std::int64_t{1} << 31) - 1;
  /// ieee only: each value is scaled by 2^e, e uniform in [-spread, spread].
  int exponent_spread = 0;

  GapPolicy gaps;
};

/// Engine parameters a workload is expanded against. Needed for the
/// all-minimum policy and for minimum-length enforcement.
struct LengthRule {
  unsigned adder_latency = 14;
  unsigned label_width = 2;
  bool enforce = true;

  std::uint64_t minimum() const;
};

struct Workload {
  std::vector<InputEvent> events;
  std::vector<Dataset> datasets;
};

/// Deterministic in its arguments. Throws ConfigError naming the offending
/// dataset when a length is below the enforced minimum.
Workload expand(const WorkloadSpec &spec, const std::optional<LengthRule> &rule = std::nullopt);

/// Workload file: one JSON document, fields documented in the README.
WorkloadSpec parse_workload_json(const std::string &text);
WorkloadSpec load_workload_file(const std::filesystem::path &path);

} // namespace jpac
