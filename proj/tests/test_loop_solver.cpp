#include "doctest.h"

#include <thread>

#include "qssep/loop_solver.hpp"

using namespace qssep;

namespace {

Poly parse_terms(int P, std::initializer_list<std::pair<std::initializer_list<int>, int>> terms) {
  Poly q(P);
  for (const auto& [vars, c] : terms) {
    Mask m = 0;
    for (int v : vars) m |= var_bit(v);
    q.add_term(m, BigInt(c));
  }
  return q;
}

// (-1)^P Q(1 - x_P, ..., 1 - x_1)
Poly reflect(const Poly& q) {
  const int P = q.nvars();
  Poly r = q;
  for (int j = 1; j <= P; ++j) r = substitute_affine(r, j, BigInt(1), BigInt(-1));
  std::vector<int> map(static_cast<std::size_t>(P));
  for (int j = 1; j <= P; ++j) map[static_cast<std::size_t>(j - 1)] = P + 1 - j;
  r = relabel(r, map, P);
  if (P % 2) r *= BigInt(-1);
  return r;
}

}  // namespace

TEST_CASE("golden loop polynomials") {
  CHECK(loop_expectation(Cycle::parse("(12)")).poly == parse_terms(2, {{{1}, 1}, {{1, 2}, -1}}));
  CHECK(loop_expectation(Cycle::parse("(123)")).poly ==
        parse_terms(3, {{{1}, 1}, {{1, 2}, -2}, {{1, 3}, -1}, {{1, 2, 3}, 2}}));
  // x1 (1 - 4x2 - x3 + 5x2x3)(1 - x4)
  CHECK(loop_expectation(Cycle::parse("(1324)")).poly ==
        parse_terms(4, {{{1}, 1}, {{1, 2}, -4}, {{1, 3}, -1}, {{1, 4}, -1}, {{1, 2, 3}, 5}, {{1, 2, 4}, 4}, {{1, 3, 4}, 1},
                        {{1, 2, 3, 4}, -5}}));
  const LoopValue v = loop_expectation(Cycle::parse("(12345)"));
  CHECK(v.degree == 5);
  CHECK(v.poly.term_count() == 16);
  CHECK(v.poly.coeff(var_bit(1) | var_bit(2) | var_bit(3) | var_bit(4)) == -14);
}

TEST_CASE("single point base case") {
  const LoopValue v = loop_expectation(Cycle::parse("(1)"));
  CHECK(v.offset);
  CHECK(v.poly == Poly::variable(1, 1));
  CHECK_FALSE(loop_expectation(Cycle::parse("(12)")).offset);
}

TEST_CASE("hole coefficients") {
  const Poly h = hole_coefficient(Cycle::parse("(1234)"), 2);
  CHECK(h == parse_terms(4, {{{}, -3}, {{4}, 3}}));
  CHECK(hole_coefficient(Cycle::parse("(1324)"), 3) == Poly::constant(4, BigInt(5)));
  CHECK(hole_coefficient(Cycle::parse("(12)"), 1) == Poly::constant(2, BigInt(1)));
  CHECK_THROWS_AS(hole_coefficient(Cycle::parse("(123)"), 3), std::out_of_range);
  CHECK_THROWS_AS(hole_coefficient(Cycle::parse("(123)"), 0), std::out_of_range);
}

TEST_CASE("hole coefficients agree with the hole decomposition") {
  for (int P = 2; P <= 6; ++P)
    for (const auto& s : all_cycles(P)) {
      const auto h = hole_decomposition(loop_expectation(s).poly);
      for (int j = 1; j < P; ++j) CHECK(hole_coefficient(s, j) == h[static_cast<std::size_t>(j)]);
    }
}

TEST_CASE("catalan numbers") {
  CHECK(catalan_numbers(5) == std::vector<BigInt>{1, -1, 2, -5, 14});
  CHECK(catalan_numbers(7).back() == 132);
  CHECK_THROWS(catalan_numbers(0));
}

TEST_CASE("associahedron profiles") {
  CHECK(univariate_to_string(associahedron_profile(3)) == "1 + 2t");
  CHECK(associahedron_profile(4) == std::vector<BigInt>{1, 5, 5});
  CHECK(associahedron_profile(6) == std::vector<BigInt>{1, 14, 56, 84, 42});
  CHECK_THROWS_AS(associahedron_profile(2), std::invalid_argument);
}

TEST_CASE("boundary conditions and top coefficient for every cycle") {
  const auto cat = catalan_numbers(7);
  for (int P = 2; P <= 7; ++P)
    for (const auto& s : all_cycles(P)) {
      const Poly q = loop_expectation(s).poly;
      CHECK(eval_zero(q, 1).is_zero());
      CHECK(eval_one(q, P).is_zero());
      CHECK(multi_derivative(q, P) == Poly::constant(P, cat[static_cast<std::size_t>(P - 1)]));
    }
}

TEST_CASE("reversal symmetry") {
  for (int P = 2; P <= 6; ++P)
    for (const auto& s : all_cycles(P)) CHECK(loop_expectation(s).poly == reflect(loop_expectation(reversed(s)).poly));
}

TEST_CASE("deforming by tau_1 has no effect") {
  for (int P = 2; P <= 6; ++P)
    for (const auto& s : all_cycles(P))
      CHECK(loop_expectation(adjoint_transposition(s, 1)).poly == loop_expectation(s).poly);
}

TEST_CASE("x_j = -t specialization is cycle independent") {
  for (int P = 2; P <= 6; ++P) {
    const auto ref = specialize_minus_t(loop_expectation(regular(P)).poly);
    for (const auto& s : all_cycles(P)) CHECK(specialize_minus_t(loop_expectation(s).poly) == ref);
  }
}

TEST_CASE("memoized and unmemoized solvers agree") {
  LoopSolver plain(false), memo(true);
  for (int P = 1; P <= 6; ++P)
    for (const auto& s : all_cycles(P)) {
      const LoopValue a = plain.loop_expectation(s), b = memo.loop_expectation(s);
      CHECK(a.poly == b.poly);
      CHECK(to_string(a.poly) == to_string(b.poly));
    }
  CHECK(plain.cache_size() == 0);
  CHECK(memo.cache_size() > 0);
}

TEST_CASE("concurrent solving matches the serial result") {
  LoopSolver shared;
  const auto cycles = all_cycles(6);
  std::vector<Poly> out(cycles.size());
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < cycles.size(); i += 4) out[i] = shared.loop_expectation(cycles[i]).poly;
    });
  for (auto& th : pool) th.join();
  LoopSolver serial;
  for (std::size_t i = 0; i < cycles.size(); ++i) CHECK(out[i] == serial.loop_expectation(cycles[i]).poly);
}
