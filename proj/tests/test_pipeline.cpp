#include <doctest.h>

#include "jugglepac/adder_pipeline.hpp"

using namespace jpac;

namespace {

Operand elem(std::int64_t v, std::uint64_t idx) {
  return {Value::from_integer(v, ArithMode::exact), Provenance(ElementId{0, idx})};
}

} // namespace

TEST_CASE("zero latency is rejected") { CHECK_THROWS_AS(AdderPipeline(0), ConfigError); }

TEST_CASE("result emerges exactly p cycles after issue") {
  AdderPipeline pipe(3);
  AdderOp op;
  op.in1 = elem(10, 2);
  op.in2 = elem(20, 3);
  op.label = 1;
  CHECK_FALSE(pipe.step(op).has_value()); // cycle 0
  CHECK_FALSE(pipe.step(std::nullopt).has_value());
  CHECK_FALSE(pipe.step(std::nullopt).has_value());
  const auto r = pipe.step(std::nullopt); // cycle 3
  REQUIRE(r.has_value());
  CHECK(r->sum.value == Value::from_integer(30, ArithMode::exact));
  CHECK(r->meta.label == 1);
  CHECK(r->meta.issue_cycle == 0);
  CHECK(pipe.empty());
}

TEST_CASE("a result can be consumed in the cycle it emerges") {
  AdderPipeline pipe(1);
  AdderOp op;
  op.in1 = elem(1, 0);
  op.in2 = elem(2, 1);
  pipe.issue(op);
  pipe.advance();
  const AdderResult *r = pipe.emerging();
  REQUIRE(r != nullptr);
  AdderOp next;
  next.in1 = r->sum;
  next.in2 = elem(4, 2);
  pipe.issue(next);
  pipe.advance();
  REQUIRE(pipe.emerging() != nullptr);
  CHECK(pipe.emerging()->sum.value == Value::from_integer(7, ArithMode::exact));
}

TEST_CASE("at most one issue per cycle") {
  AdderPipeline pipe(4);
  pipe.issue({});
  CHECK(pipe.issued_this_cycle());
  CHECK_THROWS_AS(pipe.issue({}), InvariantError);
  pipe.advance();
  CHECK_NOTHROW(pipe.issue({}));
  CHECK(pipe.in_flight() == 2);
}
