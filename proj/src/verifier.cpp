#include "qssep/verifier.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>

namespace qssep {

Poly ExchangeDecomposition::recompose(int j) const {
  const int n = std::max({A.nvars(), B.nvars(), C.nvars(), D.nvars(), j + 1});
  Poly xj = Poly::variable(n, j), xk = Poly::variable(n, j + 1);
  return A + B * xj + C * xk + D * (xj * xk);
}

ExchangeDecomposition exchange_decompose(const Poly& q, int j) {
  ExchangeDecomposition e;
  e.A = eval_zero(eval_zero(q, j), j + 1);
  e.B = eval_zero(derivative(q, j), j + 1);
  e.C = eval_zero(derivative(q, j + 1), j);
  e.D = derivative(derivative(q, j), j + 1);
  return e;
}

Identity make_identity(std::string name, const Poly& lhs, const Poly& rhs) {
  return Identity{std::move(name), lhs, rhs, lhs - rhs};
}

bool Report::passed() const {
  return std::all_of(identities.begin(), identities.end(), [](const Identity& i) { return i.holds(); });
}

namespace {

Report start(const Cycle& sigma, int j, std::string property) {
  Report r;
  r.cycle = sigma;
  r.j = j;
  r.property = std::move(property);
  return r;
}

void check_j(const Cycle& sigma, int j, int hi) {
  if (j < 1 || j > hi) throw std::out_of_range("j out of range for " + sigma.str());
}

Mask pair_bits(int j) { return var_bit(j) | var_bit(j + 1); }

// grad_1..grad_{m-1} Q at x_m = 0.
Poly hole(const Poly& q, int m) { return eval_zero(derivative_set(q, prefix_mask(m - 1)), m); }

}  // namespace

Report check_boundary(const Cycle& sigma, LoopSolver& solver) {
  Report r = start(sigma, 0, "boundary");
  const int P = sigma.size();
  if (P < 2) return r;
  const Poly q = solver.loop_expectation(sigma).poly;
  r.identities.push_back(make_identity("x1=0", eval_zero(q, 1), Poly(P)));
  r.identities.push_back(make_identity("xP=1", eval_one(q, P), Poly(P)));
  return r;
}

Report check_moves(const Cycle& sigma, int j, LoopSolver& solver) {
  const int P = sigma.size();
  check_j(sigma, j, P - 1);
  Report r = start(sigma, j, "moves");
  const Cycle moved = adjoint_transposition(sigma, j);
  auto s = exchange_decompose(solver.loop_expectation(sigma).poly, j);
  auto t = exchange_decompose(solver.loop_expectation(moved).poly, j);
  const Poly split = solver.split_product_derivative(sigma, j, pair_bits(j));
  r.identities.push_back(make_identity("A", t.A, s.A));
  r.identities.push_back(make_identity("B", t.B, s.C + split));
  r.identities.push_back(make_identity("C", t.C, s.B - split));
  r.identities.push_back(make_identity("D", t.D, s.D));
  return r;
}

Report check_continuity(const Cycle& sigma, int j, LoopSolver& solver) {
  const int P = sigma.size();
  check_j(sigma, j, P - 1);
  Report r = start(sigma, j, "continuity");
  // x_j = x_{j+1} = t gives A + (B + C) t + D t^2; compare per power of t.
  auto s = exchange_decompose(solver.loop_expectation(sigma).poly, j);
  auto t = exchange_decompose(solver.loop_expectation(adjoint_transposition(sigma, j)).poly, j);
  r.identities.push_back(make_identity("t^0", s.A, t.A));
  r.identities.push_back(make_identity("t^1", s.B + s.C, t.B + t.C));
  r.identities.push_back(make_identity("t^2", s.D, t.D));
  return r;
}

Report check_gluing(const Cycle& sigma, int j, LoopSolver& solver) {
  const int P = sigma.size();
  check_j(sigma, j, P - 1);
  Report r = start(sigma, j, "gluing");
  const Poly sum = solver.loop_expectation(sigma).poly + solver.loop_expectation(adjoint_transposition(sigma, j)).poly;
  const Poly lhs = identify(derivative(sum, j) - derivative(sum, j + 1), j + 1, j);
  const Poly rhs = solver.split_product_derivative(sigma, j, pair_bits(j)) * BigInt(2);
  r.identities.push_back(make_identity("neumann", lhs, rhs));
  return r;
}

Report check_compatibility(const Cycle& sigma, int j, LoopSolver& solver) {
  const int P = sigma.size();
  check_j(sigma, j, P - 2);
  Report r = start(sigma, j, "compat");
  const Cycle rho = adjoint_transposition(adjoint_transposition(adjoint_transposition(sigma, j), j + 1), j);
  std::vector<int> ren_hi(static_cast<std::size_t>(P)), ren_lo(static_cast<std::size_t>(P));
  for (int i = 0; i < P; ++i) ren_hi[static_cast<std::size_t>(i)] = ren_lo[static_cast<std::size_t>(i)] = i + 1;
  ren_hi[static_cast<std::size_t>(j + 1)] = P + 1;  // x_{j+2} -> y
  ren_lo[static_cast<std::size_t>(j - 1)] = P + 1;  // x_j -> y
  auto side = [&](const Cycle& c) {
    return relabel(solver.split_product_derivative(c, j, pair_bits(j)), ren_hi, P + 1) +
           relabel(solver.split_product_derivative(c, j + 1, pair_bits(j + 1)), ren_lo, P + 1);
  };
  r.identities.push_back(make_identity("braid", side(rho), side(sigma)));
  return r;
}

Report check_propagation(const Cycle& sigma, int j, LoopSolver& solver) {
  const int P = sigma.size();
  check_j(sigma, j, P - 1);
  Report r = start(sigma, j, "propag");
  const Poly lhs = hole(solver.loop_expectation(sigma).poly, j + 1);
  Poly rhs(P);
  for (int k = 1; k <= j; ++k) rhs += solver.split_product_derivative(twist_chain(sigma, k, j), k, prefix_mask(j + 1));
  r.identities.push_back(make_identity("split-sum", lhs, rhs));
  return r;
}

Report check_regular_pair(int P, int n, LoopSolver& solver) {
  if (P < 2 || n < 1 || n > P - 1) throw std::out_of_range("check_regular_pair: need 1 <= n <= P-1");
  const Cycle omega = regular(P);
  Report r = check_moves(omega, n, solver);
  r.property = "regular-pair";
  const Poly q = solver.loop_expectation(omega).poly;
  const Poly t = solver.loop_expectation(adjoint_transposition(omega, n)).poly;

  // grad_1..grad_n [omega_{P-1}], its free variables moved to x_{n+2}..x_P
  std::vector<int> shift(static_cast<std::size_t>(P - 1), 0);
  for (int i = n; i < P - 1; ++i) shift[static_cast<std::size_t>(i)] = i + 2;
  const Poly Dn = relabel(derivative_set(solver.loop_expectation(regular(P - 1)).poly, prefix_mask(n)), shift, P);

  r.identities.push_back(make_identity("Bn", hole(t, n + 1), derivative(hole(q, n), n + 1) + Dn));
  r.identities.push_back(make_identity("Cn", derivative(hole(t, n), n + 1), hole(q, n + 1) - Dn));
  return r;
}

std::vector<Report> sweep(int p_max, const std::vector<std::string>& properties, int threads, int gluing_pmax) {
  for (const auto& p : properties)
    if (std::find(sweep_properties().begin(), sweep_properties().end(), p) == sweep_properties().end())
      throw std::invalid_argument("unknown property: " + p);

  std::vector<std::function<Report()>> tasks;
  auto has = [&](const char* p) { return std::find(properties.begin(), properties.end(), p) != properties.end(); };
  for (int P = 2; P <= p_max; ++P) {
    for (const Cycle& s : all_cycles(P)) {
      if (has("boundary")) tasks.emplace_back([s] { return check_boundary(s); });
      for (int j = 1; j <= P - 1; ++j) {
        if (has("moves")) tasks.emplace_back([s, j] { return check_moves(s, j); });
        if (has("continuity")) tasks.emplace_back([s, j] { return check_continuity(s, j); });
        if (has("gluing") && P <= gluing_pmax) tasks.emplace_back([s, j] { return check_gluing(s, j); });
        if (has("compat") && j <= P - 2) tasks.emplace_back([s, j] { return check_compatibility(s, j); });
        if (has("propag")) tasks.emplace_back([s, j] { return check_propagation(s, j); });
      }
    }
  }

  std::vector<Report> out(tasks.size());
  threads = std::max(1, threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) out[i] = tasks[i]();
    return out;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = static_cast<std::size_t>(t); i < tasks.size(); i += static_cast<std::size_t>(threads))
          out[i] = tasks[i]();
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace qssep
