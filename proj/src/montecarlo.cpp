#include "qssep/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <thread>

namespace qssep::mc {

using cd = std::complex<double>;

long QssepConfig::steps() const { return std::lround(t_max / dt); }

std::vector<std::string> QssepConfig::validate() const {
  if (L < 2) throw std::invalid_argument("L must be >= 2");
  if (!(D >= 0)) throw std::invalid_argument("D must be >= 0");
  for (double r : {alpha0, beta0, alphaL, betaL})
    if (!(r >= 0)) throw std::invalid_argument("boundary rates must be >= 0");
  if (alpha0 + beta0 <= 0 || alphaL + betaL <= 0) throw std::invalid_argument("each boundary needs a positive total rate");
  if (!(dt > 0) || !(t_max > 0) || steps() < 2) throw std::invalid_argument("need dt > 0 and t_max >= 2 dt");
  if (n_traj < 2) throw std::invalid_argument("n_traj must be >= 2");
  if (snapshots < 1 || snapshots > steps() / 2 + 1) throw std::invalid_argument("snapshots out of range");
  if (init != "profile" && init != "empty") throw std::invalid_argument("init must be 'profile' or 'empty'");
  std::vector<std::string> warnings;
  if (dt * std::max({alpha0, beta0, alphaL, betaL, D}) > 0.1) warnings.push_back("dt * max(rate) > 0.1");
  return warnings;
}

Rng trajectory_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double profile_prediction(const QssepConfig& cfg, int site) {
  const double Lm = cfg.L - 1;
  return (cfg.n_a() * (Lm + cfg.b() - site) + cfg.n_b() * (site + cfg.a())) / (Lm + cfg.a() + cfg.b());
}

GState initial_state(const QssepConfig& cfg) {
  GState G = GState::Zero(cfg.L, cfg.L);
  if (cfg.init == "profile")
    for (int j = 0; j < cfg.L; ++j) G(j, j) = profile_prediction(cfg, j);
  return G;
}

namespace {

inline cd mul(cd a, cd b) { return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()}; }

// G <- U G U^dagger for U = exp(-i h), h_{j+1,j} = w, h_{j,j+1} = conj(w), so
// U = cos|w| - i sin|w| h/|w|. Rows j, j+1 rotate; columns follow by hermiticity.
void edge_rotate(GState& G, int j, double wr, double wi) {
  const double r = std::hypot(wr, wi);
  if (r == 0) return;
  const double er = wr / r, ei = wi / r;
  const double c = std::cos(r), s = std::sin(r);
  const double u01r = -s * ei, u01i = -s * er;  // -i s conj(e)
  const double u10r = s * ei, u10i = -s * er;   // -i s e
  const int n = static_cast<int>(G.rows());
  const int k1 = j + 1;
  double* g = reinterpret_cast<double*>(G.data());
  for (int k = 0; k < n; ++k) {
    if (k == j || k == k1) continue;
    double* a = g + 2 * (j + k * n);
    double* b = g + 2 * (k1 + k * n);
    const double ar = a[0], ai = a[1], br = b[0], bi = b[1];
    const double nar = c * ar + u01r * br - u01i * bi, nai = c * ai + u01r * bi + u01i * br;
    const double nbr = u10r * ar - u10i * ai + c * br, nbi = u10r * ai + u10i * ar + c * bi;
    a[0] = nar, a[1] = nai, b[0] = nbr, b[1] = nbi;
    double* at = g + 2 * (k + j * n);
    double* bt = g + 2 * (k + k1 * n);
    at[0] = nar, at[1] = -nai, bt[0] = nbr, bt[1] = -nbi;
  }
  const cd u01(u01r, u01i), u10(u10r, u10i);
  const cd p = G(j, j), q = G(j, k1), q2 = G(k1, j), t = G(k1, k1);
  // M = U B
  const cd m00 = c * p + mul(u01, q2), m01 = c * q + mul(u01, t);
  const cd m10 = mul(u10, p) + c * q2, m11 = mul(u10, q) + c * t;
  // M U^dagger with U^dagger = [[c, conj(u10)], [conj(u01), c]]
  G(j, j) = (c * m00 + mul(m01, std::conj(u01))).real();
  G(j, k1) = mul(m00, std::conj(u10)) + c * m01;
  G(k1, j) = std::conj(G(j, k1));
  G(k1, k1) = (mul(m10, std::conj(u10)) + c * m11).real();
}

void boundary_site(GState& G, int j, double alpha, double beta, double dt) {
  const double f = 1 - dt * (alpha + beta) / 2;
  const double d = G(j, j).real();
  const int n = static_cast<int>(G.rows());
  for (int k = 0; k < n; ++k) {
    G(j, k) *= f;
    G(k, j) *= f;
  }
  G(j, j) = d + dt * (alpha * (1.0 - d) - beta * d);
}

}  // namespace

void bulk_step(GState& G, const QssepConfig& cfg, Rng& rng) {
  std::normal_distribution<double> normal;
  const double sigma = std::sqrt(cfg.D * cfg.dt / 2);
  for (int parity = 0; parity < 2; ++parity)
    for (int j = parity; j + 1 < cfg.L; j += 2) {
      const double x = normal(rng), y = normal(rng);
      edge_rotate(G, j, sigma * x, sigma * y);
    }
}

void boundary_step(GState& G, const QssepConfig& cfg) {
  boundary_site(G, 0, cfg.alpha0, cfg.beta0, cfg.dt);
  boundary_site(G, cfg.L - 1, cfg.alphaL, cfg.betaL, cfg.dt);
}

void rehermitize(GState& G) {
  const int n = static_cast<int>(G.rows());
  for (int c = 0; c < n; ++c) {
    G(c, c) = G(c, c).real();
    for (int r = c + 1; r < n; ++r) {
      const cd h = 0.5 * (G(r, c) + std::conj(G(c, r)));
      G(r, c) = h;
      G(c, r) = std::conj(h);
    }
  }
}

void step(GState& G, const QssepConfig& cfg, Rng& rng) {
  // Both substeps write mirrored entries, so G stays Hermitian by construction;
  // a non-finite entry reaches the diagonal within a step.
  bulk_step(G, cfg, rng);
  boundary_step(G, cfg);
  for (int c = 0; c < cfg.L; ++c)
    if (!std::isfinite(G(c, c).real())) throw NonFiniteError("non-finite entry in G");
}

namespace {

std::vector<GState> run_trajectory(const QssepConfig& cfg, std::uint64_t index) {
  Rng rng = trajectory_rng(cfg.seed, index);
  const long n = cfg.steps();
  const long half = n / 2;
  std::vector<long> at;
  for (int s = 0; s < cfg.snapshots; ++s)
    at.push_back(cfg.snapshots == 1 ? n : half + (n - half) * s / (cfg.snapshots - 1));
  std::vector<GState> out;
  GState G = initial_state(cfg);
  std::size_t next = 0;
  for (long t = 1; t <= n; ++t) {
    step(G, cfg, rng);
    while (next < at.size() && at[next] == t) {
      if (!G.allFinite()) throw NonFiniteError("non-finite entry in G");
      out.push_back(G);
      ++next;
    }
  }
  return out;
}

}  // namespace

Ensemble run_steady(const QssepConfig& cfg, int threads) {
  cfg.validate();
  Ensemble ens;
  ens.cfg = cfg;
  ens.snapshots.resize(static_cast<std::size_t>(cfg.n_traj));
  threads = std::clamp(threads, 1, cfg.n_traj);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  auto work = [&](int t) {
    try {
      for (int i = t; i < cfg.n_traj; i += threads)
        ens.snapshots[static_cast<std::size_t>(i)] = run_trajectory(cfg, static_cast<std::uint64_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(t)] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return ens;
}

double CumulantEstimate::z_score(double prediction) const {
  return std_error > 0 ? (value - prediction) / std_error : (value == prediction ? 0.0 : INFINITY);
}

namespace {

CumulantEstimate from_per_trajectory(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1) / n), static_cast<int>(v.size())};
}

}  // namespace

CumulantEstimate estimate_loop_cumulant(const Ensemble& ens, const std::vector<int>& points, const Cycle& loop) {
  const int P = loop.size();
  if (static_cast<int>(points.size()) != P) throw std::invalid_argument("points/loop size mismatch");
  if (P != 1 && P != 2) throw std::invalid_argument("only P = 1 and P = 2 cumulants are supported");
  for (int p : points)
    if (p < 0 || p >= ens.cfg.L) throw std::out_of_range("site out of range");
  if (P == 2 && points[0] > points[1]) throw std::invalid_argument("points must be increasing");
  if (ens.n_traj() < 2) throw std::invalid_argument("need at least two trajectories");

  std::vector<double> per_traj;
  per_traj.reserve(static_cast<std::size_t>(ens.n_traj()));
  if (P == 1) {
    const int i = points[0];
    for (const auto& traj : ens.snapshots) {
      double s = 0;
      for (const auto& G : traj) s += G(i, i).real();
      per_traj.push_back(s / static_cast<double>(traj.size()));
    }
    return from_per_trajectory(per_traj);
  }

  const int i = points[0], j = points[1];
  cd m_ij = 0, m_ji = 0;
  double total = 0;
  for (const auto& traj : ens.snapshots)
    for (const auto& G : traj) {
      m_ij += G(i, j);
      m_ji += G(j, i);
      total += 1;
    }
  m_ij /= total;
  m_ji /= total;
  for (const auto& traj : ens.snapshots) {
    double s = 0;
    for (const auto& G : traj) s += ((G(i, j) - m_ij) * (G(j, i) - m_ji)).real();
    per_traj.push_back(s / static_cast<double>(traj.size()));
  }
  CumulantEstimate e = from_per_trajectory(per_traj);
  e.value *= total / (total - 1);  // centering with the sample mean
  return e;
}

double loop_prediction(const QssepConfig& cfg, const std::vector<int>& points) {
  if (points.size() == 1) return profile_prediction(cfg, points[0]);
  if (points.size() != 2 || points[0] > points[1]) throw std::invalid_argument("loop_prediction: one point or an increasing pair");
  const double L = cfg.L;
  const double x = points[0] / L, y = points[1] / L;
  return cfg.delta_n() * cfg.delta_n() * x * (1 - y) / L;
}

}  // namespace qssep::mc
