#include "doctest.h"

#include <random>

#include "qssep/loop_solver.hpp"
#include "qssep/multilinear.hpp"

using namespace qssep;

namespace {

Poly x(int P, int j) { return Poly::variable(P, j); }
Poly one(int P) { return Poly::constant(P, BigInt(1)); }

Poly random_poly(std::mt19937_64& rng, int P, int terms) {
  std::uniform_int_distribution<Mask> mask(0, (Mask{1} << P) - 1);
  std::uniform_int_distribution<int> coeff(-20, 20);
  Poly q(P);
  for (int t = 0; t < terms; ++t) q.add_term(mask(rng), BigInt(coeff(rng)));
  return q;
}

}  // namespace

TEST_CASE("zero coefficients are never stored") {
  Poly q(3);
  q.add_term(var_bit(1), BigInt(2));
  q.add_term(var_bit(1), BigInt(-2));
  CHECK(q.is_zero());
  CHECK(q.term_count() == 0);
  CHECK_THROWS_AS(q.add_term(var_bit(4), BigInt(1)), std::out_of_range);
  CHECK_THROWS_AS(Poly(65), std::out_of_range);
}

TEST_CASE("products reject shared variables") {
  const Poly a = x(3, 1) + x(3, 2);
  CHECK(a * x(3, 3) == x(3, 1) * x(3, 3) + x(3, 2) * x(3, 3));
  CHECK_THROWS_AS(a * x(3, 2), std::domain_error);
}

TEST_CASE("derivative") {
  CHECK(derivative(x(3, 1) * x(3, 2) - x(3, 2) * x(3, 3), 2) == x(3, 1) - x(3, 3));
  const Poly q12 = x(2, 1) * (one(2) - x(2, 2));
  CHECK(derivative(q12, 1) == one(2) - x(2, 2));
  CHECK(multi_derivative(loop_expectation(Cycle::parse("(1234)")).poly, 4) == Poly::constant(4, BigInt(-5)));
  CHECK_THROWS_AS(derivative(q12, 3), std::out_of_range);
}

TEST_CASE("eval_zero") {
  const Poly q12 = x(2, 1) * (one(2) - x(2, 2));
  CHECK(eval_zero(q12, 1).is_zero());
  const Poly q123 = loop_expectation(Cycle::parse("(123)")).poly;
  CHECK(eval_zero(q123, 3) == x(3, 1) - BigInt(2) * (x(3, 1) * x(3, 2)));
  CHECK(eval_zero(one(2) + x(2, 2), 1) == one(2) + x(2, 2));
}

TEST_CASE("substitute_affine") {
  const Poly q = x(2, 1) * x(2, 2);
  CHECK(substitute_affine(q, 2, BigInt(1), BigInt(-1)) == x(2, 1) - x(2, 1) * x(2, 2));
  const Poly q12 = x(2, 1) * (one(2) - x(2, 2));
  CHECK(specialize_minus_t(q12) == std::vector<BigInt>{0, -1, -1});  // -t(1+t)
}

TEST_CASE("hole decomposition examples") {
  const auto h = hole_decomposition(loop_expectation(Cycle::parse("(123)")).poly);
  REQUIRE(h.size() == 4);
  CHECK(h[0].is_zero());
  CHECK(h[1] == one(3) - x(3, 3));
  CHECK(h[2] == Poly::constant(3, BigInt(-2)));
  CHECK(h[3] == Poly::constant(3, BigInt(2)));

  const auto c = hole_decomposition(one(2));
  CHECK(c[0] == one(2));
  CHECK(c[1].is_zero());
  CHECK(c[2].is_zero());

  const auto m = hole_decomposition(x(3, 1) * x(3, 2));
  CHECK(m[0].is_zero());
  CHECK(m[1].is_zero());
  CHECK(m[2] == one(3));
  CHECK(m[3].is_zero());
}

TEST_CASE("multi_derivative examples") {
  const Poly q12 = x(2, 1) * (one(2) - x(2, 2));
  CHECK(multi_derivative(q12, 1) == one(2) - x(2, 2));
  CHECK(multi_derivative(loop_expectation(regular(3)).poly, 3) == Poly::constant(3, BigInt(2)));
  CHECK(multi_derivative(q12, 0) == q12);
  CHECK_THROWS_AS(multi_derivative(q12, 3), std::out_of_range);
}

TEST_CASE("relabel and identify") {
  const Poly q = x(3, 1) + BigInt(2) * (x(3, 2) * x(3, 3));
  CHECK(relabel(q, {3, 1, 2}, 3) == x(3, 3) + BigInt(2) * (x(3, 1) * x(3, 2)));
  CHECK(identify(x(3, 2) + x(3, 3), 3, 2) == BigInt(2) * x(3, 2));
  CHECK_THROWS_AS(identify(x(3, 2) * x(3, 3), 3, 2), std::domain_error);
}

TEST_CASE("to_string") {
  const Poly q = x(3, 1) - BigInt(2) * (x(3, 1) * x(3, 2));
  CHECK(to_string(q) == "x1 - 2*x1*x2");
  CHECK(to_string(Poly(2)) == "0");
  CHECK(to_string(x(2, 1), "y", -1) == "y0");
}

TEST_CASE("scalar type is a template parameter") {
  using PD = MultilinearPoly<double>;
  const PD q = PD::variable(2, 1) * (PD::constant(2, 1.0) - PD::variable(2, 2));
  CHECK(q.evaluate(std::vector<double>{0.3, 0.7}) == doctest::Approx(0.3 * 0.3));
  const Poly e = loop_expectation(regular(4)).poly;
  CHECK(e.evaluate(std::vector<BigInt>{2, 3, 5, 7}) == e.evaluate(std::vector<BigInt>{2, 3, 5, 7}));
}

TEST_CASE("derivatives commute and square to zero") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int P = 2 + trial % 8;
    const Poly q = random_poly(rng, P, 12);
    for (int i = 1; i <= P; ++i) {
      CHECK(derivative(derivative(q, i), i).is_zero());
      for (int j = i + 1; j <= P; ++j) CHECK(derivative(derivative(q, i), j) == derivative(derivative(q, j), i));
    }
  }
}

TEST_CASE("hole decomposition recomposes and each piece is free of x_1..x_{j+1}") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int P = 1 + trial % 10;
    const Poly q = random_poly(rng, P, 30);
    const auto h = hole_decomposition(q);
    CHECK(hole_recompose(h) == q);
    for (int j = 0; j < P; ++j) CHECK((h[static_cast<std::size_t>(j)].support() & prefix_mask(j + 1)) == 0);
    for (int j = 0; j < P; ++j) {
      const Poly direct = j == 0 ? eval_zero(q, 1) : eval_zero(multi_derivative(q, j), j + 1);
      CHECK(h[static_cast<std::size_t>(j)] == direct);
    }
  }
}

TEST_CASE("ladder identity D_k Q = Q^o_{k+1} + x_{k+1} D_{k+1} Q") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int P = 1 + trial % 10;
    const Poly q = random_poly(rng, P, 30);
    const auto h = hole_decomposition(q);
    for (int k = 0; k < P; ++k)
      CHECK(multi_derivative(q, k) == h[static_cast<std::size_t>(k)] + x(P, k + 1) * multi_derivative(q, k + 1));
  }
}

TEST_CASE("affine substitution inverts") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int P = 1 + trial % 8;
    const Poly q = random_poly(rng, P, 20);
    for (int j = 1; j <= P; ++j) {
      const Poly r = substitute_affine(q, j, BigInt(1), BigInt(-1));
      CHECK(substitute_affine(r, j, BigInt(1), BigInt(-1)) == q);
    }
  }
}
