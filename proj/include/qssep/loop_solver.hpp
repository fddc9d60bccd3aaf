#pragma once

#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

#include "qssep/multilinear.hpp"
#include "qssep/permutations.hpp"

namespace qssep {

/// [sigma](x) with Delta n = 1; `degree` is the homogeneity degree in Delta n.
struct LoopValue {
  Cycle cycle;
  Poly poly;
  int degree = 0;
  /// Only for P = 1: the value is n_a + poly with n_a left symbolic.
  bool offset = false;
};

class LoopSolver {
 public:
  explicit LoopSolver(bool memoize = true) : memoize_(memoize) {}

  LoopValue loop_expectation(const Cycle& sigma);
  /// [sigma]^o_{j+1} for 1 <= j <= P-1.
  Poly hole_coefficient(const Cycle& sigma, int j);

  /// Derivative of a sub-loop polynomial w.r.t. the ambient labels in `derivs`,
  /// expressed in the P ambient variables.
  Poly subloop_derivative(const SubLoop& loop, Mask derivs, int P);
  /// grad over `derivs` of [sigma^-_j][sigma^+_j] (factors differentiated separately).
  Poly split_product_derivative(const Cycle& sigma, int j, Mask derivs);

  std::size_t cache_size() const;
  /// Seeds the cache (e.g. from disk); the value is trusted.
  void insert(const LoopValue& value);

 private:
  bool memoize_;
  mutable std::shared_mutex mutex_;
  std::map<std::vector<int>, std::shared_ptr<const LoopValue>> cache_;
};

/// Process-wide memoizing solver.
LoopSolver& default_solver();
LoopValue loop_expectation(const Cycle& sigma);
Poly hole_coefficient(const Cycle& sigma, int j);

/// C_1..C_{P_max}: C_1 = 1, C_P = -sum_{n=1}^{P-1} C_n C_{P-n}.
std::vector<BigInt> catalan_numbers(int P_max);

/// Univariate coefficients (in t) of Q with every x_j = -t.
std::vector<BigInt> specialize_minus_t(const Poly& q);
/// Phi_{P-1}(t) = [omega_P](-t,...,-t) / (-t(1+t)), coefficients from t^0. Needs P >= 3.
std::vector<BigInt> associahedron_profile(int P);
/// "1 + 14t + 56t^2"
std::string univariate_to_string(const std::vector<BigInt>& coeffs, const std::string& var = "t");

}  // namespace qssep
