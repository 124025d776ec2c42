#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jugglepac/records.hpp"
#include "jugglepac/value.hpp"

namespace jpac {

struct Dataset {
  std::uint64_t ordinal = 0;
  std::vector<Value> elements;

  std::uint64_t length() const { return elements.size(); }
};

/// Naive left fold in arbitrary precision. Requires exact-mode elements.
Value oracle_sum(const Dataset &dataset);

struct Verdict {
  bool pass = true;
  std::vector<ElementId> missing;
  std::vector<ElementId> extra;
  std::vector<ElementId> duplicated;
  bool value_mismatch = false;
  std::string message;
};

/// Checks that a result sums exactly the dataset's elements, each once, and
/// (exact mode) that its value equals the oracle sum.
Verdict verify_result(const DatasetResult &result, const Dataset &dataset);

/// |result - exact| / max(|exact|, DBL_MIN), computed from the exact rational
/// sum of the binary64 elements.
double fp_error(const Value &result, const Dataset &dataset);
double fp_error(const DatasetResult &result, const Dataset &dataset);

/// Left-to-right binary64 fold, the sequential reference for ieee comparisons.
double naive_fold(const Dataset &dataset);

} // namespace jpac
