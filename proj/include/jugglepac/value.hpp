#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace jpac {

using BigInt = boost::multiprecision::cpp_int;

enum class ArithMode { exact, ieee };

std::string to_string(ArithMode mode);
ArithMode parse_arith_mode(const std::string &text);

/// Raised for invalid configurations or workloads (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when an engine invariant breaks at run time (CLI exit code 1).
class InvariantError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two live datasets collided on one label while enforcement was on.
class MixingError : public InvariantError {
public:
  using InvariantError::InvariantError;
};

/// A number flowing through the adder: an arbitrary-precision integer in
/// exact mode or a binary64 in ieee mode.
class Value {
public:
  Value() : payload_(BigInt(0)) {}
  explicit Value(BigInt v) : payload_(std::move(v)) {}
  explicit Value(double v) : payload_(v) {}

  static Value zero(ArithMode mode);
  static Value from_integer(std::int64_t v, ArithMode mode);

  ArithMode mode() const {
    return std::holds_alternative<BigInt>(payload_) ? ArithMode::exact : ArithMode::ieee;
  }
  const BigInt &exact() const { return std::get<BigInt>(payload_); }
  double ieee() const { return std::get<double>(payload_); }

  bool is_zero() const;
  std::string str() const;

  friend bool operator==(const Value &, const Value &) = default;

private:
  std::variant<BigInt, double> payload_;
};

/// Integer sum in exact mode, round-to-nearest-even sum in ieee mode.
/// Throws ConfigError when the operands disagree on mode.
Value value_add(const Value &a, const Value &b);

struct ElementId {
  std::uint64_t dataset = 0;
  std::uint64_t index = 0;

  friend auto operator<=>(const ElementId &, const ElementId &) = default;
};

/// Sorted multiset of element identities. Shared and immutable once built so
/// that trace records can reference operands without copying.
class Provenance {
public:
  Provenance() = default;
  explicit Provenance(ElementId single);
  explicit Provenance(std::vector<ElementId> sorted_ids);

  static Provenance merge(const Provenance &a, const Provenance &b);

  std::span<const ElementId> ids() const;
  bool empty() const { return ids().empty(); }
  std::size_t size() const { return ids().size(); }

  friend bool operator==(const Provenance &a, const Provenance &b);

private:
  std::shared_ptr<const std::vector<ElementId>> ids_;
};

/// A value together with the elements it sums.
struct Operand {
  Value value;
  Provenance provenance;

  static Operand identity(ArithMode mode) { return {Value::zero(mode), {}}; }
  bool is_identity() const { return provenance.empty(); }
};

Operand operand_add(const Operand &a, const Operand &b);

} // namespace jpac
