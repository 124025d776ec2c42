#include <doctest.h>

#include "jugglepac/oracle.hpp"

using namespace jpac;

namespace {

Dataset ints(std::uint64_t ordinal, std::vector<std::int64_t> vs) {
  Dataset d{ordinal, {}};
  for (auto v : vs) {
    d.elements.push_back(Value::from_integer(v, ArithMode::exact));
  }
  return d;
}

Dataset doubles(std::vector<double> vs) {
  Dataset d;
  for (double v : vs) {
    d.elements.emplace_back(v);
  }
  return d;
}

Provenance ids(std::uint64_t dataset, std::vector<std::uint64_t> idx) {
  std::vector<ElementId> out;
  for (auto i : idx) {
    out.push_back({dataset, i});
  }
  return Provenance(std::move(out));
}

DatasetResult result(std::uint64_t ordinal, std::int64_t value, Provenance prov) {
  DatasetResult r;
  r.dataset_ordinal = ordinal;
  r.value = Value::from_integer(value, ArithMode::exact);
  r.provenance = std::move(prov);
  return r;
}

} // namespace

TEST_CASE("oracle sum") {
  CHECK(oracle_sum(ints(0, {1, 2, 3, 4, 5})) == Value::from_integer(15, ArithMode::exact));
  CHECK(oracle_sum(ints(0, std::vector<std::int64_t>(40, 0))) == Value::from_integer(0, ArithMode::exact));
  CHECK_THROWS_AS(oracle_sum(doubles({1.0})), ConfigError);
}

TEST_CASE("verify accepts the exact multiset") {
  const Dataset d = ints(2, {1, 2, 3, 4, 5, 6});
  CHECK(verify_result(result(2, 21, ids(2, {0, 1, 2, 3, 4, 5})), d).pass);
}

TEST_CASE("verify rejects mixing, drops and duplicates") {
  const Dataset d = ints(0, {1, 2, 3, 4, 5, 6});

  SUBCASE("foreign element") {
    std::vector<ElementId> v{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 0}};
    const Verdict verdict = verify_result(result(0, 21, Provenance(v)), d);
    CHECK_FALSE(verdict.pass);
    REQUIRE(verdict.extra.size() == 1);
    CHECK(verdict.extra[0] == ElementId{1, 0});
  }
  SUBCASE("missing element") {
    const Verdict verdict = verify_result(result(0, 15, ids(0, {0, 1, 2, 3, 4})), d);
    CHECK_FALSE(verdict.pass);
    REQUIRE(verdict.missing.size() == 1);
    CHECK(verdict.missing[0] == ElementId{0, 5});
  }
  SUBCASE("duplicated element") {
    const Verdict verdict = verify_result(result(0, 22, ids(0, {0, 1, 1, 2, 3, 4, 5})), d);
    CHECK_FALSE(verdict.pass);
    REQUIRE(verdict.duplicated.size() == 1);
    CHECK(verdict.duplicated[0] == ElementId{0, 1});
  }
  SUBCASE("right elements, wrong value") {
    const Verdict verdict = verify_result(result(0, 20, ids(0, {0, 1, 2, 3, 4, 5})), d);
    CHECK_FALSE(verdict.pass);
    CHECK(verdict.value_mismatch);
    CHECK_FALSE(verdict.message.empty());
  }
}

TEST_CASE("relative error against the exact rational sum") {
  // reference values computed with Python fractions
  CHECK(fp_error(Value(1e16), doubles({1e16, 1.0, 1.0})) == doctest::Approx(1.9999999999999997e-16).epsilon(1e-12));
  CHECK(fp_error(Value(0.1 + 0.2 + 0.3), doubles({0.1, 0.2, 0.3})) ==
        doctest::Approx(1.3877787807814457e-16).epsilon(1e-12));
  CHECK(fp_error(Value(2.0), doubles({0.5, 1.5})) == 0.0);
  // exact sum zero: the denominator floors at the smallest normal
  CHECK(fp_error(Value(0.0), doubles({1.0, -1.0})) == 0.0);
  CHECK(fp_error(Value(1e-300), doubles({1.0, -1.0})) == doctest::Approx(44942328.3715579).epsilon(1e-12));
  CHECK_THROWS_AS(fp_error(Value(BigInt(1)), ints(0, {1})), ConfigError);
}

TEST_CASE("naive fold is left to right") {
  CHECK(naive_fold(doubles({1e16, 1.0, 1.0})) == 1e16);
  CHECK(naive_fold(doubles({1.0, 1.0, 1e16})) == 1e16 + 2.0);
}
