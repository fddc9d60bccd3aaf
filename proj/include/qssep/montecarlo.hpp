#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qssep/permutations.hpp"

namespace qssep::mc {

struct NonFiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sites are 0..L-1; edge j couples sites j and j+1. Injection/extraction act on
/// site 0 (alpha0, beta0) and site L-1 (alphaL, betaL).
struct QssepConfig {
  int L = 10;
  double D = 1.0;
  double alpha0 = 1.0, beta0 = 0.0, alphaL = 0.0, betaL = 1.0;
  double dt = 1e-3;
  double t_max = 50.0;
  int n_traj = 10000;
  std::uint64_t seed = 1;
  /// Snapshots per trajectory, evenly spaced over the second half and ending at t_max.
  int snapshots = 1;
  /// "profile": diagonal steady mean profile; "empty": G = 0.
  std::string init = "profile";

  double n_a() const { return alpha0 / (alpha0 + beta0); }
  double n_b() const { return alphaL / (alphaL + betaL); }
  double a() const { return 1.0 / (alpha0 + beta0); }
  double b() const { return 1.0 / (alphaL + betaL); }
  double delta_n() const { return n_b() - n_a(); }
  long steps() const;

  /// Throws std::invalid_argument on an unusable config; returns soft warnings.
  std::vector<std::string> validate() const;
};

using GState = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

/// Independent stream for trajectory `index`.
Rng trajectory_rng(std::uint64_t seed, std::uint64_t index);

/// Steady mean density at site j: (n_a (L-1+b-j) + n_b (j+a)) / (L-1+a+b).
double profile_prediction(const QssepConfig& cfg, int site);

GState initial_state(const QssepConfig& cfg);

/// Exact exp(-i h) for every edge, even edges first then odd ones.
void bulk_step(GState& G, const QssepConfig& cfg, Rng& rng);
/// Euler step of the boundary dissipators.
void boundary_step(GState& G, const QssepConfig& cfg);
/// G <- (G + G^dagger) / 2.
void rehermitize(GState& G);
/// Bulk then boundary; both keep G exactly Hermitian. Throws NonFiniteError.
void step(GState& G, const QssepConfig& cfg, Rng& rng);

struct Ensemble {
  QssepConfig cfg;
  std::vector<std::vector<GState>> snapshots;  // [trajectory][snapshot]
  int n_traj() const { return static_cast<int>(snapshots.size()); }
};

Ensemble run_steady(const QssepConfig& cfg, int threads = 1);

struct CumulantEstimate {
  double value = 0;
  double std_error = 0;
  int n_samples = 0;
  double z_score(double prediction) const;
};

/// P = 1: mean of G_ii. P = 2 (loop (1 2)): E[G_ij G_ji] - E[G_ij] E[G_ji], which is
/// Var(G_ii) for i = j. Standard errors treat trajectories as independent samples.
CumulantEstimate estimate_loop_cumulant(const Ensemble& ens, const std::vector<int>& points, const Cycle& loop);

/// Leading large-L value: profile for P = 1, (Delta n)^2 x (1 - y) / L with x = i/L, y = j/L for P = 2.
double loop_prediction(const QssepConfig& cfg, const std::vector<int>& points);

}  // namespace qssep::mc
