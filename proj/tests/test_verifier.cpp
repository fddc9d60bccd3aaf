#include "doctest.h"

#include "qssep/verifier.hpp"

using namespace qssep;

namespace {

Cycle C(const char* s) { return Cycle::parse(s); }

}  // namespace

TEST_CASE("exchange decomposition recomposes") {
  for (int P = 2; P <= 5; ++P)
    for (const auto& s : all_cycles(P))
      for (int j = 1; j < P; ++j) {
        const Poly q = loop_expectation(s).poly;
        const auto d = exchange_decompose(q, j);
        CHECK(d.recompose(j) == q);
        for (const Poly* part : {&d.A, &d.B, &d.C, &d.D}) {
          CHECK_FALSE(part->depends_on(j));
          CHECK_FALSE(part->depends_on(j + 1));
        }
      }
}

TEST_CASE("move examples") {
  CHECK(check_moves(C("(12345)"), 2).passed());
  CHECK(check_moves(C("(12)"), 1).passed());
  CHECK(check_moves(C("(123)"), 1).passed());
}

TEST_CASE("continuity examples") {
  CHECK(check_continuity(C("(1234)"), 2).passed());
  CHECK(check_continuity(C("(123)"), 1).passed());
  CHECK(check_continuity(C("(12345)"), 2).passed());
}

TEST_CASE("compatibility examples") {
  CHECK(check_compatibility(C("(1234)"), 1).passed());
  for (int j = 1; j <= 3; ++j) CHECK(check_compatibility(C("(12345)"), j).passed());
  CHECK(check_compatibility(C("(123)"), 1).passed());
  CHECK_THROWS_AS(check_compatibility(C("(123)"), 2), std::out_of_range);
}

TEST_CASE("propagation examples") {
  const Report r = check_propagation(C("(1234)"), 3);
  REQUIRE(r.passed());
  CHECK(r.identities.front().lhs == Poly::constant(4, BigInt(5)));
  const Report r2 = check_propagation(C("(123)"), 1);
  REQUIRE(r2.passed());
  CHECK(r2.identities.front().lhs == Poly::constant(3, BigInt(1)) - Poly::variable(3, 3));
}

TEST_CASE("regular pair identities") {
  CHECK(check_regular_pair(5, 2).passed());
  CHECK(check_regular_pair(4, 3).passed());
  CHECK(check_regular_pair(2, 1).passed());
  CHECK_THROWS(check_regular_pair(4, 4));
}

TEST_CASE("boundary and gluing") {
  for (int P = 2; P <= 4; ++P)
    for (const auto& s : all_cycles(P)) {
      CHECK(check_boundary(s).passed());
      for (int j = 1; j < P; ++j) CHECK(check_gluing(s, j).passed());
    }
}

TEST_CASE("a corrupted loop value is caught with a nonzero residual") {
  LoopSolver solver;
  LoopValue bad = loop_expectation(C("(1324)"));
  bad.poly.add_term(var_bit(1) | var_bit(2), BigInt(1));
  solver.insert(bad);
  const Report moves = check_moves(C("(1234)"), 2, solver);
  CHECK_FALSE(moves.passed());
  bool residual_reported = false;
  for (const auto& id : moves.identities) residual_reported |= !id.residual.is_zero();
  CHECK(residual_reported);
  CHECK_FALSE(check_continuity(C("(1234)"), 2, solver).passed());
  CHECK_FALSE(check_boundary(C("(1324)"), solver).passed());  // the extra x1 x2 survives at x4 = 1
}

TEST_CASE("make_identity residual") {
  const Poly a = Poly::variable(2, 1), b = Poly::variable(2, 2);
  const Identity id = make_identity("x", a, b);
  CHECK_FALSE(id.holds());
  CHECK(id.residual == a - b);
  CHECK(make_identity("y", a, a).holds());
}

TEST_CASE("sweep up to five points, serial and threaded") {
  const auto serial = sweep(5, sweep_properties(), 1);
  const auto threaded = sweep(5, sweep_properties(), 3);
  REQUIRE(serial.size() == threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].passed());
    CHECK(serial[i].cycle == threaded[i].cycle);
    CHECK(serial[i].property == threaded[i].property);
    CHECK(serial[i].j == threaded[i].j);
  }
  CHECK_THROWS_AS(sweep(4, {"nonsense"}), std::invalid_argument);
}
