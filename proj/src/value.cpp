#include "jugglepac/value.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

namespace jpac {

std::string to_string(ArithMode mode) { return mode == ArithMode::exact ? "exact" : "ieee"; }

ArithMode parse_arith_mode(const std::string &text) {
  if (text == "exact") {
    return ArithMode::exact;
  }
  if (text == "ieee") {
    return ArithMode::ieee;
  }
  throw ConfigError("unknown arithmetic mode '" + text + "' (expected exact or ieee)");
}

Value Value::zero(ArithMode mode) { return mode == ArithMode::exact ? Value(BigInt(0)) : Value(0.0); }

Value Value::from_integer(std::int64_t v, ArithMode mode) {
  return mode == ArithMode::exact ? Value(BigInt(v)) : Value(static_cast<double>(v));
}

bool Value::is_zero() const { return mode() == ArithMode::exact ? exact() == 0 : ieee() == 0.0; }

std::string Value::str() const {
  if (mode() == ArithMode::exact) {
    return exact().str();
  }
  std::ostringstream os;
  os.precision(17);
  os << ieee();
  return os.str();
}

Value value_add(const Value &a, const Value &b) {
  if (a.mode() != b.mode()) {
    throw ConfigError("value_add: operands in different arithmetic modes");
  }
  if (a.mode() == ArithMode::exact) {
    return Value(BigInt(a.exact() + b.exact()));
  }
  return Value(a.ieee() + b.ieee());
}

Provenance::Provenance(ElementId single)
    : ids_(std::make_shared<const std::vector<ElementId>>(1, single)) {}

Provenance::Provenance(std::vector<ElementId> sorted_ids) {
  if (!sorted_ids.empty()) {
    ids_ = std::make_shared<const std::vector<ElementId>>(std::move(sorted_ids));
  }
}

Provenance Provenance::merge(const Provenance &a, const Provenance &b) {
  if (a.empty()) {
    return b;
  }
  if (b.empty()) {
    return a;
  }
  std::vector<ElementId> out;
  out.reserve(a.size() + b.size());
  std::merge(a.ids().begin(), a.ids().end(), b.ids().begin(), b.ids().end(), std::back_inserter(out));
  return Provenance(std::move(out));
}

std::span<const ElementId> Provenance::ids() const {
  if (!ids_) {
    return {};
  }
  return {ids_->data(), ids_->size()};
}

bool operator==(const Provenance &a, const Provenance &b) {
  return std::ranges::equal(a.ids(), b.ids());
}

Operand operand_add(const Operand &a, const Operand &b) {
  return {value_add(a.value, b.value), Provenance::merge(a.provenance, b.provenance)};
}

} // namespace jpac
