#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "qssep/permutations.hpp"

using namespace qssep;

namespace {

Cycle C(const char* s) { return Cycle::parse(s); }

// (tau sigma)(x) = tau(sigma(x)) as a successor table, any cycle type.
std::vector<int> compose_with_transposition(int j, const std::vector<int>& succ) {
  std::vector<int> out(succ);
  for (auto& y : out) y = y == j ? j + 1 : (y == j + 1 ? j : y);
  return out;
}

std::vector<std::vector<int>> orbits(const std::vector<int>& succ) {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(succ.size() + 1, false);
  for (int x = 1; x <= static_cast<int>(succ.size()); ++x) {
    if (seen[static_cast<std::size_t>(x)]) continue;
    std::vector<int> o;
    for (int y = x; !seen[static_cast<std::size_t>(y)]; y = succ[static_cast<std::size_t>(y - 1)]) {
      seen[static_cast<std::size_t>(y)] = true;
      o.push_back(y);
    }
    std::sort(o.begin(), o.end());
    out.push_back(o);
  }
  return out;
}

}  // namespace

TEST_CASE("parse and print") {
  CHECK(C("(1 3 2 4)").str() == "(1 3 2 4)");
  CHECK(C("(1324)") == C("(1 3 2 4)"));
  CHECK(C("1,3,2,4") == C("(1 3 2 4)"));
  CHECK(C("(3 2 4 1)") == C("(1 3 2 4)"));
  CHECK(C("(1)").size() == 1);
  CHECK(Cycle::from_sequence({1, 10, 2, 3, 4, 5, 6, 7, 8, 9}).key() == "(1,10,2,3,4,5,6,7,8,9)");
  CHECK_THROWS_AS(C("(1 1 2)"), std::invalid_argument);
  CHECK_THROWS_AS(C("(1 3)"), std::invalid_argument);
  CHECK_THROWS_AS(C("(1 a 2)"), std::invalid_argument);
  CHECK_THROWS_AS(Cycle::from_successors({2, 1, 4, 3}), std::invalid_argument);
}

TEST_CASE("regular cycle and inverse") {
  const Cycle w = regular(5);
  CHECK(w.str() == "(1 2 3 4 5)");
  for (int x = 1; x <= 5; ++x) CHECK(w.inverse(w(x)) == x);
}

TEST_CASE("adjoint transposition") {
  CHECK(adjoint_transposition(C("(12345)"), 2) == C("(13245)"));
  CHECK(adjoint_transposition(C("(12)"), 1) == C("(12)"));
  CHECK(adjoint_transposition(C("(1234)"), 3) == C("(1243)"));
  CHECK_THROWS_AS(adjoint_transposition(C("(123)"), 3), std::out_of_range);
}

TEST_CASE("adjoint transposition is an involution and satisfies the braid relation") {
  for (int P = 2; P <= 6; ++P)
    for (const auto& s : all_cycles(P))
      for (int j = 1; j < P; ++j) {
        CHECK(adjoint_transposition(adjoint_transposition(s, j), j) == s);
        if (j + 2 <= P) {
          const Cycle a = adjoint_transposition(adjoint_transposition(adjoint_transposition(s, j), j + 1), j);
          const Cycle b = adjoint_transposition(adjoint_transposition(adjoint_transposition(s, j + 1), j), j + 1);
          CHECK(a == b);
        }
      }
}

TEST_CASE("split examples") {
  auto [m1, p1] = split(C("(123)"), 1);
  CHECK(m1.points == std::vector<int>{1});
  CHECK(p1.points == std::vector<int>{2, 3});
  CHECK(p1.cycle == C("(12)"));

  auto [m2, p2] = split(C("(1234)"), 2);
  CHECK(m2.points == std::vector<int>{2});
  CHECK(p2.points == std::vector<int>{1, 3, 4});
  CHECK(p2.cycle == C("(123)"));  // 3 -> 4 -> 1 relabeled onto 2 -> 3 -> 1

  auto [m3, p3] = split(C("(12)"), 1);
  CHECK(m3.points == std::vector<int>{1});
  CHECK(p3.points == std::vector<int>{2});
}

TEST_CASE("split matches the orbits of tau_j sigma") {
  for (int P = 2; P <= 6; ++P)
    for (const auto& s : all_cycles(P))
      for (int j = 1; j < P; ++j) {
        auto [minus, plus] = split(s, j);
        CHECK(minus.contains(j));
        CHECK(plus.contains(j + 1));
        std::vector<int> all(minus.points);
        all.insert(all.end(), plus.points.begin(), plus.points.end());
        std::sort(all.begin(), all.end());
        std::vector<int> expect(static_cast<std::size_t>(P));
        std::iota(expect.begin(), expect.end(), 1);
        CHECK(all == expect);
        auto o = orbits(compose_with_transposition(j, s.successors()));
        REQUIRE(o.size() == 2);
        CHECK(((o[0] == minus.points && o[1] == plus.points) || (o[1] == minus.points && o[0] == plus.points)));
        // successor order is preserved under relabeling
        for (const SubLoop* sl : {&minus, &plus})
          for (int a = 1; a <= sl->size(); ++a) {
            const int amb = sl->points[static_cast<std::size_t>(a - 1)];
            const int next = compose_with_transposition(j, s.successors())[static_cast<std::size_t>(amb - 1)];
            CHECK(sl->points[static_cast<std::size_t>(sl->cycle(a) - 1)] == next);
          }
      }
}

TEST_CASE("twist chain") {
  CHECK(twist_chain(C("(1234)"), 1, 2) == C("(1324)"));
  CHECK(twist_chain(C("(12345)"), 1, 3) == C("(13425)"));
  for (const auto& s : all_cycles(5))
    for (int j = 1; j < 5; ++j) CHECK(twist_chain(s, j, j) == s);
  CHECK_THROWS(twist_chain(C("(1234)"), 3, 2));
}

TEST_CASE("enumeration counts") {
  CHECK(all_cycles(1).size() == 1);
  CHECK(all_cycles(4).size() == 6);
  CHECK(all_cycles(7).size() == 720);
  const auto c5 = all_cycles(5);
  CHECK(std::is_sorted(c5.begin(), c5.end(), [](const Cycle& a, const Cycle& b) { return a.sequence() < b.sequence(); }));
}

TEST_CASE("profile_of") {
  const Deformation t = profile_of(C("(13245)"));
  CHECK(t.profile == std::vector<int>{2, 1});
  CHECK(t.offset == 2);
  CHECK(profile_of(regular(6)).empty());
  const Deformation d = profile_of(C("(1342)"));
  CHECK(d.minimal());
  CHECK(deformation_apply(d, 4) == C("(1342)"));
}

TEST_CASE("profile_of round-trips and is minimal") {
  for (int P = 1; P <= 6; ++P)
    for (const auto& s : all_cycles(P)) {
      const Deformation d = profile_of(s);
      CHECK(d.minimal());
      CHECK(deformation_apply(d, P) == s);
    }
}

TEST_CASE("check_profile") {
  CHECK_NOTHROW(check_profile({2, 3, 1}));
  CHECK_THROWS_AS(check_profile({2, 2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(check_profile({0, 1}), std::invalid_argument);
}

TEST_CASE("extraction fixtures") {
  const std::vector<int> v{2, 6, 4, 7, 3, 1, 5};
  CHECK(extract(v, 2, 5, ExtractionKind::truncation).varpi == std::vector<int>{2, 6, 5, 7, 4, 1});

  const std::vector<int> vi{2, 5, 7, 6, 4, 1, 3};
  const Extraction head = extract(vi, 0, 4, ExtractionKind::head);
  CHECK(head.varpi == std::vector<int>{3, 5, 7, 6});
  const Extraction tail = extract(vi, 0, 4, ExtractionKind::tail);
  CHECK(tail.domain == std::vector<int>{6, 7});
  CHECK(tail.varpi == std::vector<int>{2, 4});

  const Extraction h1 = extract({2, 1}, 0, 1, ExtractionKind::head);
  CHECK(h1.domain == std::vector<int>{1});
  CHECK(h1.images == std::vector<int>{2});
  CHECK(h1.floating == 1);
  CHECK(extract({2, 1}, 0, 1, ExtractionKind::tail).size() == 0);
}

TEST_CASE("ordered extraction lengths and floating counts add up") {
  for (int n = 2; n <= 5; ++n) {
    std::vector<int> mu(static_cast<std::size_t>(n));
    std::iota(mu.begin(), mu.end(), 1);
    do {
      for (int m = 1; m <= n; ++m)
        for (int M = 1; M <= n; ++M) {
          if (m == M) continue;
          const Extraction a = extract(mu, m, M, ExtractionKind::ordered);
          const Extraction b = extract(mu, m, M, ExtractionKind::ordered_complement);
          CHECK(a.size() + b.size() == n);
          CHECK(a.floating + b.floating == n - M);
          CHECK_THROWS(extract(mu, m, m, ExtractionKind::ordered));
        }
    } while (std::next_permutation(mu.begin(), mu.end()));
  }
}

TEST_CASE("normalize labels") {
  CHECK(normalize_labels({7, 2, 5}) == std::vector<int>{3, 1, 2});
  CHECK(normalize_labels({}).empty());
}
