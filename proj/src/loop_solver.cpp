#include "qssep/loop_solver.hpp"

#include <mutex>
#include <sstream>

namespace qssep {

LoopValue LoopSolver::loop_expectation(const Cycle& sigma) {
  const auto key = sigma.successors();
  if (memoize_) {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }

  const int P = sigma.size();
  LoopValue out;
  out.cycle = sigma;
  out.degree = P;
  if (P == 1) {
    out.poly = Poly::variable(1, 1);
    out.offset = true;
  } else {
    Poly q(P);
    for (int j = 1; j <= P - 1; ++j) {
      Poly c = hole_coefficient(sigma, j);
      if (j <= P - 2) {
        q += prefix_monomial(P, j) * c;
      } else {
        Poly edge = prefix_monomial(P, P - 1) - prefix_monomial(P, P);  // x1..x_{P-1}(1 - x_P)
        q += edge * c;
      }
    }
    out.poly = std::move(q);
  }

  if (memoize_) {
    std::unique_lock lock(mutex_);
    auto [it, inserted] = cache_.try_emplace(key, std::make_shared<const LoopValue>(out));
    if (!inserted && !(it->second->poly == out.poly)) throw InvariantError("solver cache disagreement for " + sigma.str());
  }
  return out;
}

Poly LoopSolver::subloop_derivative(const SubLoop& loop, Mask derivs, int P) {
  if (loop.size() == 1) {
    // [(1)] = n_a + x: only its derivative (= 1) may ever be consumed.
    if (!(derivs & var_bit(loop.points[0])))
      throw InvariantError("single-point loop used without derivative; n_a would survive");
    return Poly::constant(P, BigInt(1));
  }
  Mask local = 0;
  for (int i = 0; i < loop.size(); ++i)
    if (derivs & var_bit(loop.points[static_cast<std::size_t>(i)])) local |= var_bit(i + 1);
  Poly q = derivative_set(loop_expectation(loop.cycle).poly, local);
  return relabel(q, loop.points, P);
}

Poly LoopSolver::split_product_derivative(const Cycle& sigma, int j, Mask derivs) {
  const int P = sigma.size();
  auto [lo, hi] = split(sigma, j);
  return subloop_derivative(lo, derivs, P) * subloop_derivative(hi, derivs, P);
}

Poly LoopSolver::hole_coefficient(const Cycle& sigma, int j) {
  const int P = sigma.size();
  if (j < 1 || j > P - 1) throw std::out_of_range("hole_coefficient: j out of range");
  Poly total(P);
  const Mask derivs = prefix_mask(j + 1);
  for (int k = 1; k <= j; ++k) total += split_product_derivative(twist_chain(sigma, k, j), k, derivs);
  if (total.support() & derivs) throw InvariantError("hole coefficient depends on a differentiated variable");
  return total;
}

std::size_t LoopSolver::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

void LoopSolver::insert(const LoopValue& value) {
  std::unique_lock lock(mutex_);
  cache_.try_emplace(value.cycle.successors(), std::make_shared<const LoopValue>(value));
}

LoopSolver& default_solver() {
  static LoopSolver solver;
  return solver;
}

LoopValue loop_expectation(const Cycle& sigma) { return default_solver().loop_expectation(sigma); }

Poly hole_coefficient(const Cycle& sigma, int j) { return default_solver().hole_coefficient(sigma, j); }

std::vector<BigInt> catalan_numbers(int P_max) {
  if (P_max < 1) throw std::invalid_argument("catalan_numbers: P_max >= 1");
  std::vector<BigInt> c(static_cast<std::size_t>(P_max) + 1, 0);
  c[1] = 1;
  for (int P = 2; P <= P_max; ++P) {
    BigInt s = 0;
    for (int n = 1; n < P; ++n) s += c[static_cast<std::size_t>(n)] * c[static_cast<std::size_t>(P - n)];
    c[static_cast<std::size_t>(P)] = -s;
  }
  return {c.begin() + 1, c.end()};
}

std::vector<BigInt> specialize_minus_t(const Poly& q) {
  std::vector<BigInt> out(static_cast<std::size_t>(q.nvars()) + 1, 0);
  for (const auto& [m, c] : q.terms()) {
    int d = std::popcount(m);
    out[static_cast<std::size_t>(d)] += (d % 2 ? -c : c);
  }
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

std::vector<BigInt> associahedron_profile(int P) {
  if (P < 3) throw std::invalid_argument("associahedron_profile: P >= 3");
  auto a = specialize_minus_t(loop_expectation(regular(P)).poly);
  // divide by -t - t^2: a = (-t - t^2) * phi
  if (a.size() < 3 || a[0] != 0) throw InvariantError("specialization not divisible by t(1+t)");
  std::vector<BigInt> rem(a.begin() + 1, a.end());  // a / t
  // rem = -(1 + t) phi
  std::vector<BigInt> phi(rem.size() - 1, 0);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    phi[i] = -rem[i];
    rem[i] += phi[i];
    rem[i + 1] += phi[i];
  }
  for (const auto& r : rem)
    if (r != 0) throw InvariantError("specialization not divisible by t(1+t)");
  return phi;
}

std::string univariate_to_string(const std::vector<BigInt>& coeffs, const std::string& var) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t d = 0; d < coeffs.size(); ++d) {
    const BigInt& c = coeffs[d];
    if (c == 0) continue;
    BigInt mag = c < 0 ? BigInt(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (d == 0 || mag != 1) os << mag;
    if (d >= 1) os << var;
    if (d >= 2) os << "^" << d;
  }
  return first ? "0" : os.str();
}

}  // namespace qssep
