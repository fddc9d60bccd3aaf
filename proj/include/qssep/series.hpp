#pragma once

#include <map>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "qssep/loop_solver.hpp"
#include "qssep/multilinear.hpp"

namespace qssep {

/// A coefficient beyond the known truncation order was requested.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Truncated power series in z whose coefficients are multilinear polynomials in the
/// floating variables y_0, y_1, ... (y_l is polynomial variable l+1).
/// Coefficients 0..order() are exact; nothing beyond is ever read.
class SeriesPoly {
 public:
  SeriesPoly() = default;
  /// Exactly zero through `order`.
  explicit SeriesPoly(int order) : coeffs_(static_cast<std::size_t>(order + 1)) {
    if (order < 0) throw TruncationError("series order exhausted");
  }
  static SeriesPoly constant(const Poly& p, int order);

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  int nvars() const;
  /// Index of the first nonzero coefficient, order()+1 when all known ones vanish.
  int valuation() const;

  const Poly& operator[](int n) const {
    if (n < 0) throw std::out_of_range("negative power");
    if (n > order()) throw TruncationError("coefficient z^" + std::to_string(n) + " beyond truncation order");
    return coeffs_[static_cast<std::size_t>(n)];
  }
  Poly& coeff(int n) { return const_cast<Poly&>(std::as_const(*this)[n]); }
  const Poly& at_zero() const { return (*this)[0]; }

  /// Keeps coefficients 0..n (n <= order()).
  SeriesPoly truncated(int n) const;

  SeriesPoly& operator+=(const SeriesPoly& o);
  SeriesPoly& operator-=(const SeriesPoly& o);
  SeriesPoly& operator*=(const Poly& p);

  bool operator==(const SeriesPoly& o) const { return coeffs_ == o.coeffs_; }

 private:
  std::vector<Poly> coeffs_;
};

SeriesPoly operator+(SeriesPoly a, const SeriesPoly& b);
SeriesPoly operator-(SeriesPoly a, const SeriesPoly& b);
SeriesPoly operator*(SeriesPoly a, const Poly& p);
SeriesPoly operator*(const Poly& p, SeriesPoly a);
/// Cauchy product; exact through min(oA + vB, oB + vA).
SeriesPoly operator*(const SeriesPoly& a, const SeriesPoly& b);

/// [z^{-s} A]_+ : drops the first s coefficients.
SeriesPoly shift_down(const SeriesPoly& a, int s);
/// z^s A
SeriesPoly shift_up(const SeriesPoly& a, int s);
/// (A - A(0)) / z
SeriesPoly drop_constant_div_z(const SeriesPoly& a);
/// A / z; throws InvariantError unless A(0) = 0.
SeriesPoly div_z(const SeriesPoly& a);
/// c(z) A with c taken to the same order as A.
SeriesPoly times_catalan(const SeriesPoly& a);
/// Applies `relabel` to every coefficient (map[i-1] = target index of variable i).
SeriesPoly relabel_vars(const SeriesPoly& a, const std::vector<int>& map, int new_nvars);
/// y_var = 0 in every coefficient (var is the polynomial index).
SeriesPoly eval_var_zero(const SeriesPoly& a, int var);

/// c(z) = sum C_{n+1} z^n, the root of z c^2 + c - 1 = 0 with c(0) = 1.
SeriesPoly catalan_series(int order);

/// Polynomial variable index of y_l.
constexpr int yvar(int l) { return l + 1; }

/// C_{k+1} = c C_k + y_k (C_k - C_k(0)) / z.
SeriesPoly ck_step(const SeriesPoly& Ck, int k);

/// Rewrites a polynomial in y_0..y_{k-1} in x_2..x_{k+1} (y_l = x_{k+1-l}); [omega_{k+1}] = x_1 * this.
Poly x_from_y(const Poly& in_y, int k);
/// Inverse map; the argument must not depend on x_1.
Poly y_from_x(const Poly& in_x, int k);

/// C_0..C_{k_max} at a starting order; C_k has order start_order - k.
class RegularTower {
 public:
  RegularTower(int k_max, int start_order);

  int k_max() const { return static_cast<int>(C_.size()) - 1; }
  int start_order() const { return start_order_; }
  const SeriesPoly& C(int k) const;
  /// C_k(z) written in the variable y_var instead of y_0 (only for k = 1).
  SeriesPoly C1_in(int l) const;

  /// [omega_{k+1}] = x_1 C_k(0).
  LoopValue reconstruct(int k) const;
  /// S_{k+2;k} = C_{k+1;k} at z = 0, i.e. C_{k+1}(0)|_{y_k=0} = C_k(0).
  bool stabilization_holds(int k) const;

 private:
  int start_order_;
  std::vector<SeriesPoly> C_;
};

/// D_k^{(q)}, S_k^{(q)} for the deformation tau_q o omega.
class TranspositionTower {
 public:
  explicit TranspositionTower(const RegularTower& reg) : reg_(reg) {}

  const SeriesPoly& D(int q, int k);
  const SeriesPoly& S(int q, int k);
  /// [tau_q o omega_{k+1}] = x_1 D_k^{(q)}(0).
  LoopValue reconstruct(int q, int k);

 private:
  const RegularTower& reg_;
  std::map<std::pair<int, int>, SeriesPoly> D_, S_;
};

/// General deformation pipeline: hat-D / hat-S inside the deformation zone, then the
/// away-from-zone recurrences. Profiles may be empty or non-minimal.
class DeformationEngine {
 public:
  explicit DeformationEngine(const RegularTower& reg) : reg_(reg) {}

  /// hat-D^nu_{k';p'}, floating variables y_0..y_{k'+p'-1}.
  const SeriesPoly& Dhat(const std::vector<int>& nu, int kp, int pp);
  /// hat-S^nu_{k';p'} for 0 <= p' <= |nu|-1.
  const SeriesPoly& Shat(const std::vector<int>& nu, int kp, int pp);

  /// D_K^{(mu;q)} for q >= 1 and K >= q + |mu| - 2.
  const SeriesPoly& D(const std::vector<int>& mu, int q, int K);
  const SeriesPoly& S(const std::vector<int>& mu, int q, int K);

  /// [mu_q o omega_{K+1}] = x_1 D_K^{(mu;q)}(0).
  LoopValue reconstruct(const std::vector<int>& mu, int q, int K);

  std::size_t cache_size() const { return Dhat_.size() + Shat_.size() + D_.size() + S_.size(); }

 private:
  using Key = std::tuple<std::vector<int>, int, int>;
  const RegularTower& reg_;
  std::map<Key, SeriesPoly> Dhat_, Shat_, D_, S_;
};

/// Smallest starting order that reconstructs every P-point loop (any profile): the
/// z^0 coefficient at level P-1 needs P-1 orders, each level consuming one.
int required_order(int P);

/// Evaluator of the stabilized series: value(k) = D-bar(y_0..y_{k-1}, 0, 0, ...).
class StableSeries {
 public:
  /// Regular loop: value(k) = C_k(0).
  static StableSeries regular(int k_max);
  /// Deformed loop mu with location q at level `anchor` (default: the lowest valid level).
  /// Adding y_k sits next to x_1, so the location grows with the level:
  /// value(k) = D_k^{(mu;q_k)}(0) with q_k = q + k - anchor, kept while q_k >= 2.
  static StableSeries deformed(const std::vector<int>& mu, int q, int k_max, int anchor = -1);

  int k_min() const { return k_min_; }
  /// Deformation location at level k (0 for the regular series).
  int location(int k) const { return q_anchor_ == 0 ? 0 : q_anchor_ + k - anchor_; }
  int k_max() const { return k_min_ + static_cast<int>(values_.size()) - 1; }
  const Poly& value(int k) const;
  /// value(k+1)|_{y_k = 0} == value(k) for every stored k.
  bool padding_idempotent() const;

 private:
  int k_min_ = 0;
  int anchor_ = 0;
  int q_anchor_ = 0;
  std::vector<Poly> values_;
};

}  // namespace qssep
