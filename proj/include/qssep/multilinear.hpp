#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qssep {

using BigInt = boost::multiprecision::cpp_int;
using Mask = std::uint64_t;

inline constexpr int kMaxVars = 64;

constexpr Mask var_bit(int j) { return Mask{1} << (j - 1); }
/// Bits of x_1 ... x_j.
constexpr Mask prefix_mask(int j) { return j >= 64 ? ~Mask{0} : (Mask{1} << j) - 1; }

/// Polynomial of degree <= 1 in each of x_1..x_nvars; terms keyed by variable bitmask.
template <class Scalar = BigInt>
class MultilinearPoly {
 public:
  using scalar_type = Scalar;
  using term_map = std::map<Mask, Scalar>;

  MultilinearPoly() = default;
  explicit MultilinearPoly(int nvars) : nvars_(check_nvars(nvars)) {}

  static MultilinearPoly constant(int nvars, const Scalar& c) { return monomial(nvars, 0, c); }
  static MultilinearPoly variable(int nvars, int j) {
    if (j < 1 || j > nvars) throw std::out_of_range("variable index out of range");
    return monomial(nvars, var_bit(j), Scalar(1));
  }
  static MultilinearPoly monomial(int nvars, Mask m, const Scalar& c) {
    MultilinearPoly p(nvars);
    p.add_term(m, c);
    return p;
  }

  int nvars() const { return nvars_; }
  const term_map& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Scalar coeff(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }
  Scalar constant_term() const { return coeff(0); }

  Mask support() const {
    Mask s = 0;
    for (const auto& [m, c] : terms_) s |= m;
    return s;
  }
  bool depends_on(int j) const { return (support() & var_bit(j)) != 0; }

  void add_term(Mask m, const Scalar& c) {
    if (nvars_ < kMaxVars && (m >> nvars_) != 0) throw std::out_of_range("monomial uses a variable beyond nvars");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Same polynomial in a larger (or equal) ambient variable count.
  MultilinearPoly widened(int n) const {
    if (n < nvars_ && (support() >> n) != 0) throw std::out_of_range("cannot narrow: variable in use");
    MultilinearPoly p(n);
    p.terms_ = terms_;
    return p;
  }

  MultilinearPoly& operator+=(const MultilinearPoly& o) {
    if (o.nvars_ > nvars_) nvars_ = o.nvars_;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MultilinearPoly& operator-=(const MultilinearPoly& o) {
    if (o.nvars_ > nvars_) nvars_ = o.nvars_;
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  MultilinearPoly& operator*=(const Scalar& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  MultilinearPoly operator-() const {
    MultilinearPoly p = *this;
    for (auto& [m, c] : p.terms_) c = -c;
    return p;
  }

  /// Equality of the term maps; the ambient count does not matter.
  bool operator==(const MultilinearPoly& o) const { return terms_ == o.terms_; }

  template <class T>
  T evaluate(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) < nvars_) throw std::invalid_argument("evaluate: too few values");
    T total = T(0);
    for (const auto& [m, c] : terms_) {
      T v = static_cast<T>(c);
      for (Mask r = m; r; r &= r - 1) v *= x[static_cast<std::size_t>(std::countr_zero(r))];
      total += v;
    }
    return total;
  }

 private:
  static int check_nvars(int n) {
    if (n < 0 || n > kMaxVars) throw std::out_of_range("nvars must be in [0, 64]");
    return n;
  }

  int nvars_ = 0;
  term_map terms_;
};

using Poly = MultilinearPoly<BigInt>;

template <class S>
MultilinearPoly<S> operator+(MultilinearPoly<S> a, const MultilinearPoly<S>& b) {
  return a += b;
}
template <class S>
MultilinearPoly<S> operator-(MultilinearPoly<S> a, const MultilinearPoly<S>& b) {
  return a -= b;
}
template <class S>
MultilinearPoly<S> operator*(MultilinearPoly<S> a, const S& s) {
  return a *= s;
}
template <class S>
MultilinearPoly<S> operator*(const S& s, MultilinearPoly<S> a) {
  return a *= s;
}

/// Product; throws std::domain_error when both factors share a variable.
template <class S>
MultilinearPoly<S> operator*(const MultilinearPoly<S>& a, const MultilinearPoly<S>& b) {
  if (a.support() & b.support()) throw std::domain_error("product of multilinear polynomials sharing a variable");
  MultilinearPoly<S> p(std::max(a.nvars(), b.nvars()));
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) p.add_term(ma | mb, ca * cb);
  return p;
}

namespace detail {
template <class S>
void check_index(const MultilinearPoly<S>& q, int j) {
  if (j < 1 || j > q.nvars()) throw std::out_of_range("variable index out of range");
}
}  // namespace detail

/// Coefficient of x_j (the x_j derivative).
template <class S>
MultilinearPoly<S> derivative(const MultilinearPoly<S>& q, int j) {
  detail::check_index(q, j);
  MultilinearPoly<S> p(q.nvars());
  const Mask b = var_bit(j);
  for (const auto& [m, c] : q.terms())
    if (m & b) p.add_term(m & ~b, c);
  return p;
}

/// Q restricted to x_j = 0.
template <class S>
MultilinearPoly<S> eval_zero(const MultilinearPoly<S>& q, int j) {
  detail::check_index(q, j);
  MultilinearPoly<S> p(q.nvars());
  const Mask b = var_bit(j);
  for (const auto& [m, c] : q.terms())
    if (!(m & b)) p.add_term(m, c);
  return p;
}

/// Q restricted to x_j = 1.
template <class S>
MultilinearPoly<S> eval_one(const MultilinearPoly<S>& q, int j) {
  detail::check_index(q, j);
  MultilinearPoly<S> p(q.nvars());
  const Mask b = var_bit(j);
  for (const auto& [m, c] : q.terms()) p.add_term(m & ~b, c);
  return p;
}

/// x_j -> a + b x_j.
template <class S>
MultilinearPoly<S> substitute_affine(const MultilinearPoly<S>& q, int j, const S& a, const S& b) {
  detail::check_index(q, j);
  MultilinearPoly<S> p(q.nvars());
  const Mask bit = var_bit(j);
  for (const auto& [m, c] : q.terms()) {
    if (!(m & bit)) {
      p.add_term(m, c);
    } else {
      p.add_term(m & ~bit, c * a);
      p.add_term(m, c * b);
    }
  }
  return p;
}

/// Renames variables: x_i -> x_{map[i-1]} (0 drops nothing; target indices must be distinct).
template <class S>
MultilinearPoly<S> relabel(const MultilinearPoly<S>& q, const std::vector<int>& map, int new_nvars) {
  MultilinearPoly<S> p(new_nvars);
  for (const auto& [m, c] : q.terms()) {
    Mask out = 0;
    for (Mask r = m; r; r &= r - 1) {
      std::size_t i = static_cast<std::size_t>(std::countr_zero(r));
      if (i >= map.size() || map[i] < 1 || map[i] > new_nvars) throw std::out_of_range("relabel: unmapped variable");
      Mask nb = var_bit(map[i]);
      if (out & nb) throw std::domain_error("relabel: two variables mapped to one");
      out |= nb;
    }
    p.add_term(out, c);
  }
  return p;
}

/// Sets x_a = x_b (x_a disappears). Throws std::domain_error if a monomial holds both.
template <class S>
MultilinearPoly<S> identify(const MultilinearPoly<S>& q, int a, int b) {
  detail::check_index(q, a);
  detail::check_index(q, b);
  MultilinearPoly<S> p(q.nvars());
  const Mask ba = var_bit(a), bb = var_bit(b);
  for (const auto& [m, c] : q.terms()) {
    if ((m & ba) && (m & bb)) throw std::domain_error("identify: monomial contains both variables");
    p.add_term((m & ba) ? ((m & ~ba) | bb) : m, c);
  }
  return p;
}

/// D_k Q = grad_k ... grad_1 Q.
template <class S>
MultilinearPoly<S> multi_derivative(const MultilinearPoly<S>& q, int k) {
  if (k < 0 || k > q.nvars()) throw std::out_of_range("multi_derivative: k out of range");
  const Mask pre = prefix_mask(k);
  MultilinearPoly<S> p(q.nvars());
  for (const auto& [m, c] : q.terms())
    if ((m & pre) == pre) p.add_term(m & ~pre, c);
  return p;
}

/// Derivative with respect to every variable in `vars`.
template <class S>
MultilinearPoly<S> derivative_set(const MultilinearPoly<S>& q, Mask vars) {
  MultilinearPoly<S> p(q.nvars());
  for (const auto& [m, c] : q.terms())
    if ((m & vars) == vars) p.add_term(m & ~vars, c);
  return p;
}

/// Q restricted to x_i = 0 for all i in `vars`.
template <class S>
MultilinearPoly<S> eval_zero_set(const MultilinearPoly<S>& q, Mask vars) {
  MultilinearPoly<S> p(q.nvars());
  for (const auto& [m, c] : q.terms())
    if (!(m & vars)) p.add_term(m, c);
  return p;
}

/// x_1 ... x_j as a polynomial in n variables.
template <class S = BigInt>
MultilinearPoly<S> prefix_monomial(int nvars, int j) {
  return MultilinearPoly<S>::monomial(nvars, prefix_mask(j), S(1));
}

/// (Q^o_1, ..., Q^o_{P+1}) with Q^o_1 = Q|_{x1=0}, Q^o_{j+1} = D_j Q|_{x_{j+1}=0}, Q^o_{P+1} = D_P Q.
template <class S>
std::vector<MultilinearPoly<S>> hole_decomposition(const MultilinearPoly<S>& q) {
  const int P = q.nvars();
  std::vector<MultilinearPoly<S>> out(static_cast<std::size_t>(P) + 1, MultilinearPoly<S>(P));
  for (const auto& [m, c] : q.terms()) {
    int j = std::countr_one(m);  // x_1..x_j present, x_{j+1} absent
    if (j > P) j = P;
    out[static_cast<std::size_t>(j)].add_term(m & ~prefix_mask(j), c);
  }
  return out;
}

/// Inverse of hole_decomposition.
template <class S>
MultilinearPoly<S> hole_recompose(const std::vector<MultilinearPoly<S>>& holes) {
  const int P = static_cast<int>(holes.size()) - 1;
  MultilinearPoly<S> q(P);
  for (int j = 0; j <= P; ++j)
    for (const auto& [m, c] : holes[static_cast<std::size_t>(j)].terms()) q.add_term(m | prefix_mask(j), c);
  return q;
}

/// Expanded text form, e.g. "1 - 2*x2 - x3 + 2*x2*x3". Variable names default to x.
template <class S>
std::string to_string(const MultilinearPoly<S>& q, const std::string& var = "x", int index_offset = 0) {
  if (q.is_zero()) return "0";
  std::vector<std::pair<Mask, S>> terms(q.terms().begin(), q.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    int da = std::popcount(a.first), db = std::popcount(b.first);
    if (da != db) return da < db;
    // lexicographic on increasing variable lists
    Mask x = a.first, y = b.first;
    while (x && y) {
      int ix = std::countr_zero(x), iy = std::countr_zero(y);
      if (ix != iy) return ix < iy;
      x &= x - 1;
      y &= y - 1;
    }
    return false;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms) {
    S mag = c < 0 ? S(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool need_star = false;
    if (m == 0 || mag != 1) {
      os << mag;
      need_star = true;
    }
    for (Mask r = m; r; r &= r - 1) {
      if (need_star) os << "*";
      os << var << (std::countr_zero(r) + 1 + index_offset);
      need_star = true;
    }
  }
  return os.str();
}

extern template class MultilinearPoly<BigInt>;

}  // namespace qssep
