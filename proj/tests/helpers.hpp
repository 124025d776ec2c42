#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "jugglepac/records.hpp"

namespace jpac::testing {

/// Back-to-back datasets with integer values k*100 + i (dataset k, element i).
inline std::vector<InputEvent> back_to_back(const std::vector<std::uint64_t> &lengths,
                                            ArithMode mode = ArithMode::exact) {
  std::vector<InputEvent> events;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    for (std::uint64_t i = 0; i < lengths[k]; ++i) {
      const auto v = static_cast<std::int64_t>(k * 100 + i);
      events.push_back(InputEvent::element(Value::from_integer(v, mode), i + 1 == lengths[k]));
    }
  }
  return events;
}

inline std::string read_file(const std::string &path) {
  std::ifstream is(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// First `n` lines of a rendered table plus header and rule.
inline std::string head_rows(const std::string &table, std::size_t n) {
  std::istringstream is(table);
  std::string line, out;
  for (std::size_t i = 0; i < n + 2 && std::getline(is, line); ++i) {
    out += line + '\n';
  }
  return out;
}

} // namespace jpac::testing
