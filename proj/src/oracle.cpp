#include "jugglepac/oracle.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>

#include "jugglepac/trace.hpp"

namespace jpac {

namespace {

using Rational = boost::multiprecision::cpp_rational;

Rational exact_rational(double v) {
  int exponent = 0;
  const double mantissa = std::frexp(v, &exponent);
  // 53 significant bits fit in an int64 after scaling.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  Rational r(scaled);
  exponent -= 53;
  if (exponent >= 0) {
    r *= Rational(BigInt(1) << exponent);
  } else {
    r /= Rational(BigInt(1) << -exponent);
  }
  return r;
}

std::string id_list(const std::vector<ElementId> &ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < 8; ++i) {
    out += (i ? " " : "") + element_name(ids[i]);
  }
  if (ids.size() > 8) {
    out += fmt::format(" (+{} more)", ids.size() - 8);
  }
  return out;
}

} // namespace

Value oracle_sum(const Dataset &dataset) {
  BigInt total = 0;
  for (const Value &v : dataset.elements) {
    if (v.mode() != ArithMode::exact) {
      throw ConfigError("oracle_sum requires exact-mode elements");
    }
    total += v.exact();
  }
  return Value(total);
}

Verdict verify_result(const DatasetResult &result, const Dataset &dataset) {
  Verdict v;
  std::map<ElementId, int> seen;
  for (const ElementId &id : result.provenance.ids()) {
    ++seen[id];
  }
  for (std::uint64_t i = 0; i < dataset.length(); ++i) {
    const ElementId id{dataset.ordinal, i};
    auto it = seen.find(id);
    if (it == seen.end()) {
      v.missing.push_back(id);
      continue;
    }
    if (it->second > 1) {
      v.duplicated.push_back(id);
    }
    seen.erase(it);
  }
  for (const auto &[id, count] : seen) {
    v.extra.push_back(id);
  }
  if (result.value.mode() == ArithMode::exact && !dataset.elements.empty() &&
      dataset.elements.front().mode() == ArithMode::exact) {
    v.value_mismatch = !(result.value == oracle_sum(dataset));
  }
  v.pass = v.missing.empty() && v.extra.empty() && v.duplicated.empty() && !v.value_mismatch;
  if (!v.pass) {
    std::vector<std::string> parts;
    if (!v.missing.empty()) {
      parts.push_back("missing " + id_list(v.missing));
    }
    if (!v.extra.empty()) {
      parts.push_back("extra " + id_list(v.extra));
    }
    if (!v.duplicated.empty()) {
      parts.push_back("duplicated " + id_list(v.duplicated));
    }
    if (v.value_mismatch) {
      parts.push_back(fmt::format("value {} != oracle {}", result.value.str(), oracle_sum(dataset).str()));
    }
    v.message = fmt::format("dataset {}: {}", dataset_letters(dataset.ordinal), fmt::join(parts, "; "));
  }
  return v;
}

double fp_error(const Value &result, const Dataset &dataset) {
  if (result.mode() != ArithMode::ieee) {
    throw ConfigError("fp_error requires an ieee-mode result");
  }
  Rational exact = 0;
  for (const Value &e : dataset.elements) {
    exact += exact_rational(e.ieee());
  }
  const Rational diff = abs(exact_rational(result.ieee()) - exact);
  const Rational scale = std::max(Rational(abs(exact)), exact_rational(DBL_MIN));
  return static_cast<double>(Rational(diff / scale));
}

double fp_error(const DatasetResult &result, const Dataset &dataset) { return fp_error(result.value, dataset); }

double naive_fold(const Dataset &dataset) {
  double acc = 0.0;
  for (const Value &e : dataset.elements) {
    acc += e.ieee();
  }
  return acc;
}

} // namespace jpac
