#pragma once

#include <string>
#include <vector>

#include "qssep/loop_solver.hpp"

namespace qssep {

/// Q = A + B x_j + C x_{j+1} + D x_j x_{j+1}, with A..D free of x_j, x_{j+1}.
struct ExchangeDecomposition {
  Poly A, B, C, D;
  Poly recompose(int j) const;
};
ExchangeDecomposition exchange_decompose(const Poly& q, int j);

/// One polynomial identity lhs == rhs.
struct Identity {
  std::string name;
  Poly lhs, rhs, residual;
  bool holds() const { return residual.is_zero(); }
};
Identity make_identity(std::string name, const Poly& lhs, const Poly& rhs);

struct Report {
  Cycle cycle;
  int j = 0;
  std::string property;
  std::vector<Identity> identities;
  bool passed() const;
};

Report check_boundary(const Cycle& sigma, LoopSolver& solver = default_solver());
/// Local moves (a)-(d) between sigma and tau_j o sigma.
Report check_moves(const Cycle& sigma, int j, LoopSolver& solver = default_solver());
Report check_continuity(const Cycle& sigma, int j, LoopSolver& solver = default_solver());
/// Neumann-like gluing in its original (un-solved) form.
Report check_gluing(const Cycle& sigma, int j, LoopSolver& solver = default_solver());
/// Braid compatibility at (j, j+1, j+2); the book-keeping variable is x_{P+1}.
Report check_compatibility(const Cycle& sigma, int j, LoopSolver& solver = default_solver());
/// grad_1..grad_j [sigma] at x_{j+1} = 0 against the split-product sum.
Report check_propagation(const Cycle& sigma, int j, LoopSolver& solver = default_solver());
/// Moves for (omega_P, tau_n o omega_P) plus the two auxiliary B_n/C_n identities.
Report check_regular_pair(int P, int n, LoopSolver& solver = default_solver());

inline const std::vector<std::string>& sweep_properties() {
  static const std::vector<std::string> p{"boundary", "moves", "continuity", "gluing", "compat", "propag"};
  return p;
}

/// Every single cycle with 2 <= P <= p_max and every admissible j, for each property.
/// "gluing" is restricted to P <= gluing_pmax.
std::vector<Report> sweep(int p_max, const std::vector<std::string>& properties, int threads = 1,
                          int gluing_pmax = 4);

}  // namespace qssep
