#include "qssep/series.hpp"

#include <algorithm>

namespace qssep {

SeriesPoly SeriesPoly::constant(const Poly& p, int order) {
  SeriesPoly s(order);
  s.coeffs_[0] = p;
  return s;
}

int SeriesPoly::nvars() const {
  int n = 0;
  for (const auto& c : coeffs_) n = std::max(n, c.nvars());
  return n;
}

int SeriesPoly::valuation() const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (!coeffs_[i].is_zero()) return static_cast<int>(i);
  return order() + 1;
}

SeriesPoly SeriesPoly::truncated(int n) const {
  if (n > order()) throw TruncationError("cannot extend a truncated series");
  SeriesPoly s(n);
  std::copy(coeffs_.begin(), coeffs_.begin() + n + 1, s.coeffs_.begin());
  return s;
}

SeriesPoly& SeriesPoly::operator+=(const SeriesPoly& o) {
  if (o.order() < order()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  if (coeffs_.empty()) throw TruncationError("series order exhausted");
  return *this;
}

SeriesPoly& SeriesPoly::operator-=(const SeriesPoly& o) {
  if (o.order() < order()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  if (coeffs_.empty()) throw TruncationError("series order exhausted");
  return *this;
}

SeriesPoly& SeriesPoly::operator*=(const Poly& p) {
  for (auto& c : coeffs_) c = c * p;
  return *this;
}

SeriesPoly operator+(SeriesPoly a, const SeriesPoly& b) { return a += b; }
SeriesPoly operator-(SeriesPoly a, const SeriesPoly& b) { return a -= b; }
SeriesPoly operator*(SeriesPoly a, const Poly& p) { return a *= p; }
SeriesPoly operator*(const Poly& p, SeriesPoly a) { return a *= p; }

SeriesPoly operator*(const SeriesPoly& a, const SeriesPoly& b) {
  const int oa = a.order(), ob = b.order();
  const int va = a.valuation(), vb = b.valuation();
  const int order = std::min(oa + vb, ob + va);
  SeriesPoly out(order);
  for (int n = 0; n <= order; ++n) {
    Poly acc;
    for (int i = std::max(va, n - ob); i <= std::min(oa, n - vb); ++i) acc += a[i] * b[n - i];
    out.coeff(n) = std::move(acc);
  }
  return out;
}

SeriesPoly shift_down(const SeriesPoly& a, int s) {
  if (s < 0) return shift_up(a, -s);
  SeriesPoly out(a.order() - s);
  for (int n = 0; n <= out.order(); ++n) out.coeff(n) = a[n + s];
  return out;
}

SeriesPoly shift_up(const SeriesPoly& a, int s) {
  if (s < 0) return shift_down(a, -s);
  SeriesPoly out(a.order() + s);
  for (int n = 0; n <= a.order(); ++n) out.coeff(n + s) = a[n];
  return out;
}

SeriesPoly drop_constant_div_z(const SeriesPoly& a) { return shift_down(a, 1); }

SeriesPoly div_z(const SeriesPoly& a) {
  if (!a.at_zero().is_zero()) throw InvariantError("div_z: nonzero constant term");
  return shift_down(a, 1);
}

SeriesPoly catalan_series(int order) {
  auto C = catalan_numbers(order + 1);
  SeriesPoly c(order);
  for (int n = 0; n <= order; ++n) c.coeff(n) = Poly::constant(0, C[static_cast<std::size_t>(n)]);
  return c;
}

SeriesPoly times_catalan(const SeriesPoly& a) { return catalan_series(a.order()) * a; }

SeriesPoly relabel_vars(const SeriesPoly& a, const std::vector<int>& map, int new_nvars) {
  SeriesPoly out(a.order());
  for (int n = 0; n <= a.order(); ++n) out.coeff(n) = relabel(a[n], map, new_nvars);
  return out;
}

SeriesPoly eval_var_zero(const SeriesPoly& a, int var) {
  SeriesPoly out(a.order());
  for (int n = 0; n <= a.order(); ++n) out.coeff(n) = eval_zero_set(a[n], var_bit(var));
  return out;
}

SeriesPoly ck_step(const SeriesPoly& Ck, int k) {
  Poly yk = Poly::variable(yvar(k), yvar(k));
  return times_catalan(Ck) + drop_constant_div_z(Ck) * yk;
}

Poly x_from_y(const Poly& in_y, int k) {
  std::vector<int> map(static_cast<std::size_t>(k));
  for (int l = 0; l < k; ++l) map[static_cast<std::size_t>(l)] = k + 1 - l;
  return relabel(in_y, map, k + 1);
}

Poly y_from_x(const Poly& in_x, int k) {
  if (in_x.depends_on(1)) throw std::invalid_argument("y_from_x: x_1 has no y counterpart");
  std::vector<int> map(static_cast<std::size_t>(k + 1), 0);
  for (int j = 2; j <= k + 1; ++j) map[static_cast<std::size_t>(j - 1)] = yvar(k + 1 - j);
  return relabel(in_x, map, k);
}

namespace {

LoopValue make_loop_value(const Cycle& cycle, const Poly& at_zero_y, int K) {
  LoopValue v;
  v.cycle = cycle;
  v.degree = K + 1;
  v.poly = Poly::variable(K + 1, 1) * x_from_y(at_zero_y, K);
  if (K == 0) v.offset = true;
  return v;
}

}  // namespace

RegularTower::RegularTower(int k_max, int start_order) : start_order_(start_order) {
  if (k_max < 0) throw std::invalid_argument("RegularTower: k_max >= 0");
  if (start_order < k_max) throw TruncationError("RegularTower: start order below k_max");
  C_.reserve(static_cast<std::size_t>(k_max) + 1);
  C_.push_back(catalan_series(start_order));
  for (int k = 0; k < k_max; ++k) C_.push_back(ck_step(C_.back(), k));
}

const SeriesPoly& RegularTower::C(int k) const {
  if (k < 0 || k > k_max()) throw TruncationError("RegularTower: level " + std::to_string(k) + " not built");
  return C_[static_cast<std::size_t>(k)];
}

SeriesPoly RegularTower::C1_in(int l) const { return relabel_vars(C(1), {yvar(l)}, yvar(l)); }

LoopValue RegularTower::reconstruct(int k) const { return make_loop_value(regular(k + 1), C(k).at_zero(), k); }

bool RegularTower::stabilization_holds(int k) const {
  return eval_zero_set(C(k + 1).at_zero(), var_bit(yvar(k))) == C(k).at_zero();
}

const SeriesPoly& TranspositionTower::D(int q, int k) {
  if (q == 0) return reg_.C(k);
  auto key = std::make_pair(q, k);
  if (auto it = D_.find(key); it != D_.end()) return it->second;
  if (k < 1) throw std::invalid_argument("transposition tower: D^(q)_k needs k >= 1 for q >= 1");
  Poly y = Poly::variable(yvar(k - 1), yvar(k - 1));
  SeriesPoly d = S(q - 1, k - 1) + drop_constant_div_z(D(q - 1, k - 1)) * y;
  return D_.emplace(key, std::move(d)).first->second;
}

const SeriesPoly& TranspositionTower::S(int q, int k) {
  auto key = std::make_pair(q, k);
  if (auto it = S_.find(key); it != S_.end()) return it->second;
  SeriesPoly s;
  if (q == 0) {
    const SeriesPoly& Ck = reg_.C(k);
    s = times_catalan(Ck - SeriesPoly::constant(Ck.at_zero(), Ck.order())) + Ck;
  } else if (q == 1) {
    if (k < 1) throw std::invalid_argument("transposition tower: S^(1)_k needs k >= 1");
    s = reg_.C1_in(k - 1) * reg_.C(k - 1);
  } else {
    s = times_catalan(D(q, k));
  }
  return S_.emplace(key, std::move(s)).first->second;
}

LoopValue TranspositionTower::reconstruct(int q, int k) {
  if (q < 1 || q > k) throw std::invalid_argument("transposition tower: need 1 <= q <= k");
  Deformation tau{{2, 1}, q};
  return make_loop_value(deformation_apply(tau, k + 1), D(q, k).at_zero(), k);
}

namespace {

// Variable map from a child extraction's floating variables to the parent's.
// Child y_i (i < kc) stays y_i; child y_{kc+t} is the t-th largest floating label j,
// which sits at parent y_{kp+|nu|-j}.
std::vector<int> routing(const Extraction& e, int M, int kc, int kp, int nu_size) {
  std::vector<int> floating;
  for (int v : e.varpi)
    if (v > M) floating.push_back(v);
  std::sort(floating.begin(), floating.end(), std::greater<>());
  std::vector<int> map;
  for (int i = 0; i < kc; ++i) map.push_back(yvar(i));
  for (int j : floating) map.push_back(yvar(kp + nu_size - j));
  return map;
}

}  // namespace

const SeriesPoly& DeformationEngine::Dhat(const std::vector<int>& nu, int kp, int pp) {
  Key key{nu, kp, pp};
  if (auto it = Dhat_.find(key); it != Dhat_.end()) return it->second;
  const int n = static_cast<int>(nu.size());
  if (kp < 0 || pp < 0 || pp > n) throw std::invalid_argument("Dhat: need 0 <= p' <= |nu|, k' >= 0");
  SeriesPoly d;
  if (n == 0) {
    d = shift_up(reg_.C(kp), 1);
  } else if (pp == 0) {
    d = shift_down(reg_.C(kp), n - 1);
  } else {
    Poly y = Poly::variable(yvar(kp + pp - 1), yvar(kp + pp - 1));
    d = Shat(nu, kp, pp - 1) + Dhat(nu, kp, pp - 1) * y;
  }
  return Dhat_.emplace(std::move(key), std::move(d)).first->second;
}

const SeriesPoly& DeformationEngine::Shat(const std::vector<int>& nu, int kp, int pp) {
  Key key{nu, kp, pp};
  if (auto it = Shat_.find(key); it != Shat_.end()) return it->second;
  const int n = static_cast<int>(nu.size());
  if (pp < 0 || pp > n - 1) throw std::invalid_argument("Shat: need 0 <= p' <= |nu| - 1");
  const int M = n - pp;
  const int nv = kp + pp;

  auto head = extract(nu, 0, M, ExtractionKind::head);
  auto tail = extract(nu, 0, M, ExtractionKind::tail);
  if (head.floating + tail.floating != pp) throw InvariantError("Shat: head/tail floating counts do not add up");
  SeriesPoly A = relabel_vars(Dhat(head.normalized(), 0, head.floating), routing(head, M, 0, kp, n), nv);
  SeriesPoly B = relabel_vars(Dhat(tail.normalized(), kp, tail.floating), routing(tail, M, kp, kp, n), nv);
  A.coeff(0) = Poly();
  B.coeff(0) = Poly();
  SeriesPoly s = div_z(A * B);

  for (int m = 1; m <= M - 1; ++m) {
    auto inner = extract(nu, m, M, ExtractionKind::ordered);
    auto outer = extract(nu, m, M, ExtractionKind::ordered_complement);
    if (inner.floating + outer.floating != pp) throw InvariantError("Shat: ordered extraction floating counts do not add up");
    Poly X = relabel(Dhat(inner.normalized(), 0, inner.floating).at_zero(), routing(inner, M, 0, kp, n), nv);
    SeriesPoly Y = relabel_vars(Dhat(outer.normalized(), kp, outer.floating), routing(outer, M, kp, kp, n), nv);
    s += Y * X;
  }
  if (pp == n - 1) s.coeff(0) = Poly();  // normalization at the zone's first point
  return Shat_.emplace(std::move(key), std::move(s)).first->second;
}

const SeriesPoly& DeformationEngine::D(const std::vector<int>& mu, int q, int K) {
  const int n = static_cast<int>(mu.size());
  if (n == 0) return reg_.C(K);
  if (q < 1) throw std::invalid_argument("deformation tower: q >= 1");
  if (K < q + n - 2) throw std::invalid_argument("deformation tower: need K >= q + |mu| - 2");
  Key key{mu, q, K};
  if (auto it = D_.find(key); it != D_.end()) return it->second;
  SeriesPoly d;
  if (q == 1) {
    d = Dhat(mu, K - n + 1, n - 1);
  } else {
    Poly y = Poly::variable(yvar(K - 1), yvar(K - 1));
    d = S(mu, q - 1, K - 1) + drop_constant_div_z(D(mu, q - 1, K - 1)) * y;
  }
  return D_.emplace(std::move(key), std::move(d)).first->second;
}

const SeriesPoly& DeformationEngine::S(const std::vector<int>& mu, int q, int K) {
  const int n = static_cast<int>(mu.size());
  if (q < 1 || n == 0) throw std::invalid_argument("deformation tower: S needs q >= 1 and |mu| >= 1");
  Key key{mu, q, K};
  if (auto it = S_.find(key); it != S_.end()) return it->second;
  SeriesPoly s = q == 1 ? drop_constant_div_z(Shat(mu, K - n + 1, n - 1)) : times_catalan(D(mu, q, K));
  return S_.emplace(std::move(key), std::move(s)).first->second;
}

LoopValue DeformationEngine::reconstruct(const std::vector<int>& mu, int q, int K) {
  check_profile(mu);
  if (mu.empty()) return make_loop_value(regular(K + 1), reg_.C(K).at_zero(), K);
  Deformation d{mu, q};
  return make_loop_value(deformation_apply(d, K + 1), D(mu, q, K).at_zero(), K);
}

int required_order(int P) { return std::max(P - 1, 0); }

StableSeries StableSeries::regular(int k_max) {
  RegularTower reg(k_max, required_order(k_max + 1));
  StableSeries s;
  s.k_min_ = 0;
  for (int k = 0; k <= k_max; ++k) {
    if (k < k_max && !reg.stabilization_holds(k)) throw InvariantError("regular series fails to stabilize");
    s.values_.push_back(reg.C(k).at_zero());
  }
  return s;
}

StableSeries StableSeries::deformed(const std::vector<int>& mu, int q, int k_max, int anchor) {
  check_profile(mu);
  const int n = static_cast<int>(mu.size());
  if (n < 2 || q < 2) throw std::invalid_argument("deformed series: need |mu| >= 2 and q >= 2");
  if (anchor < 0) anchor = std::max(n, q + n - 2);
  if (anchor < std::max(n, q + n - 2) || anchor > k_max) throw std::invalid_argument("deformed series: anchor out of range");
  RegularTower reg(k_max, required_order(k_max + 1));
  DeformationEngine eng(reg);
  StableSeries s;
  s.anchor_ = anchor;
  s.q_anchor_ = q;
  s.k_min_ = anchor - (q - 2);
  for (int k = s.k_min_; k <= k_max; ++k) s.values_.push_back(eng.D(mu, s.location(k), k).at_zero());
  if (!s.padding_idempotent()) throw InvariantError("deformed series fails to stabilize");
  return s;
}

const Poly& StableSeries::value(int k) const {
  if (k < k_min() || k > k_max()) throw std::out_of_range("StableSeries: level not available");
  return values_[static_cast<std::size_t>(k - k_min_)];
}

bool StableSeries::padding_idempotent() const {
  for (int k = k_min(); k < k_max(); ++k)
    if (!(eval_zero_set(value(k + 1), var_bit(yvar(k))) == value(k))) return false;
  return true;
}

}  // namespace qssep
