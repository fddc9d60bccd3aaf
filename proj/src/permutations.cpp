#include "qssep/permutations.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace qssep {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// omega^l_M: l -> l+1 -> ... -> M -> l, identity elsewhere.
int omega_shift(int x, int l, int M) {
  if (l > M) return x;
  if (x == M) return l;
  if (x >= l && x < M) return x + 1;
  return x;
}

std::vector<int> inverse_table(const std::vector<int>& mu) {
  std::vector<int> inv(mu.size() + 1, 0);
  for (std::size_t i = 0; i < mu.size(); ++i) inv[static_cast<std::size_t>(mu[i])] = static_cast<int>(i) + 1;
  return inv;
}

}  // namespace

Cycle Cycle::from_successors(std::vector<int> succ) {
  const int P = static_cast<int>(succ.size());
  require(P >= 1, "cycle must have at least one point");
  std::vector<char> seen(static_cast<std::size_t>(P) + 1, 0);
  for (int v : succ) {
    require(v >= 1 && v <= P, "successor out of range");
    require(!seen[static_cast<std::size_t>(v)], "successor map is not a bijection");
    seen[static_cast<std::size_t>(v)] = 1;
  }
  int x = 1, steps = 0;
  do {
    x = succ[static_cast<std::size_t>(x - 1)];
    ++steps;
  } while (x != 1);
  require(steps == P, "permutation is not a single cycle");
  return Cycle(std::move(succ));
}

Cycle Cycle::from_sequence(const std::vector<int>& seq) {
  const int P = static_cast<int>(seq.size());
  require(P >= 1, "cycle must have at least one point");
  std::vector<int> succ(static_cast<std::size_t>(P), 0);
  std::vector<char> seen(static_cast<std::size_t>(P) + 1, 0);
  for (int i = 0; i < P; ++i) {
    int a = seq[static_cast<std::size_t>(i)];
    require(a >= 1 && a <= P, "label out of range");
    require(!seen[static_cast<std::size_t>(a)], "repeated label in cycle");
    seen[static_cast<std::size_t>(a)] = 1;
    succ[static_cast<std::size_t>(a - 1)] = seq[static_cast<std::size_t>((i + 1) % P)];
  }
  return Cycle(std::move(succ));
}

Cycle Cycle::parse(std::string_view text) {
  std::string s(text);
  bool has_sep = s.find_first_of(" ,;\t") != std::string::npos;
  std::vector<int> seq;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) {
      seq.push_back(std::stoi(token));
      token.clear();
    }
  };
  for (char ch : s) {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      if (has_sep) {
        token.push_back(ch);
      } else {
        seq.push_back(ch - '0');
      }
    } else if (ch == '(' || ch == ')' || ch == ' ' || ch == ',' || ch == ';' || ch == '\t') {
      flush();
    } else {
      throw std::invalid_argument("unexpected character in cycle: " + s);
    }
  }
  flush();
  return from_sequence(seq);
}

int Cycle::inverse(int x) const {
  auto it = std::find(succ_.begin(), succ_.end(), x);
  return static_cast<int>(it - succ_.begin()) + 1;
}

std::vector<int> Cycle::sequence() const {
  std::vector<int> seq;
  seq.reserve(succ_.size());
  int x = 1;
  do {
    seq.push_back(x);
    x = (*this)(x);
  } while (x != 1);
  return seq;
}

std::string Cycle::str() const {
  std::ostringstream os;
  os << '(';
  auto seq = sequence();
  for (std::size_t i = 0; i < seq.size(); ++i) os << (i ? " " : "") << seq[i];
  os << ')';
  return os.str();
}

std::string Cycle::key() const {
  std::ostringstream os;
  os << '(';
  auto seq = sequence();
  bool wide = size() >= 10;
  for (std::size_t i = 0; i < seq.size(); ++i) os << (wide && i ? "," : "") << seq[i];
  os << ')';
  return os.str();
}

bool SubLoop::contains(int label) const { return local_index(label) != 0; }

int SubLoop::local_index(int label) const {
  auto it = std::lower_bound(points.begin(), points.end(), label);
  if (it == points.end() || *it != label) return 0;
  return static_cast<int>(it - points.begin()) + 1;
}

Cycle regular(int P) {
  require(P >= 1, "regular loop needs P >= 1");
  std::vector<int> succ(static_cast<std::size_t>(P));
  for (int j = 1; j <= P; ++j) succ[static_cast<std::size_t>(j - 1)] = j % P + 1;
  return Cycle::from_successors(std::move(succ));
}

Cycle conjugate(const Cycle& sigma, const std::vector<int>& perm) {
  auto seq = sigma.sequence();
  for (int& a : seq) a = perm[static_cast<std::size_t>(a - 1)];
  return Cycle::from_sequence(seq);
}

Cycle adjoint_transposition(const Cycle& sigma, int j) {
  const int P = sigma.size();
  if (j < 1 || j > P - 1) throw std::out_of_range("adjoint_transposition: j out of range");
  std::vector<int> tau(static_cast<std::size_t>(P));
  std::iota(tau.begin(), tau.end(), 1);
  std::swap(tau[static_cast<std::size_t>(j - 1)], tau[static_cast<std::size_t>(j)]);
  return conjugate(sigma, tau);
}

Cycle twist_chain(const Cycle& sigma, int k, int j) {
  const int P = sigma.size();
  if (k < 1 || k > j || j > P - 1) throw std::out_of_range("twist_chain: need 1 <= k <= j <= P-1");
  // tau_{k+1}...tau_j is the cyclic permutation (k+1, k+2, ..., j+1).
  std::vector<int> perm(static_cast<std::size_t>(P));
  std::iota(perm.begin(), perm.end(), 1);
  if (k < j) {
    for (int a = k + 1; a <= j; ++a) perm[static_cast<std::size_t>(a - 1)] = a + 1;
    perm[static_cast<std::size_t>(j)] = k + 1;
  }
  return conjugate(sigma, perm);
}

Cycle reversed(const Cycle& sigma) {
  const int P = sigma.size();
  std::vector<int> refl(static_cast<std::size_t>(P));
  for (int a = 1; a <= P; ++a) refl[static_cast<std::size_t>(a - 1)] = P + 1 - a;
  return conjugate(sigma, refl);
}

namespace {

SubLoop make_subloop(std::vector<int> orbit) {
  SubLoop s;
  s.points = orbit;
  std::sort(s.points.begin(), s.points.end());
  std::vector<int> local;
  local.reserve(orbit.size());
  for (int a : orbit) local.push_back(s.local_index(a));
  s.cycle = Cycle::from_sequence(local);
  return s;
}

}  // namespace

std::pair<SubLoop, SubLoop> split(const Cycle& sigma, int j) {
  const int P = sigma.size();
  if (j < 1 || j > P - 1) throw std::out_of_range("split: j out of range");
  auto tau = [j](int x) { return x == j ? j + 1 : (x == j + 1 ? j : x); };
  auto orbit_of = [&](int start) {
    std::vector<int> orb;
    int x = start;
    do {
      orb.push_back(x);
      x = tau(sigma(x));
    } while (x != start);
    return orb;
  };
  auto lo = orbit_of(j);
  auto hi = orbit_of(j + 1);
  if (lo.size() + hi.size() != static_cast<std::size_t>(P))
    throw InvariantError("split: tau_j sigma does not have exactly two orbits");
  return {make_subloop(std::move(lo)), make_subloop(std::move(hi))};
}

std::vector<Cycle> all_cycles(int P) {
  require(P >= 1, "all_cycles needs P >= 1");
  std::vector<int> tail(static_cast<std::size_t>(P - 1));
  std::iota(tail.begin(), tail.end(), 2);
  std::vector<Cycle> out;
  do {
    std::vector<int> seq{1};
    seq.insert(seq.end(), tail.begin(), tail.end());
    out.push_back(Cycle::from_sequence(seq));
  } while (std::next_permutation(tail.begin(), tail.end()));
  return out;
}

void check_profile(const std::vector<int>& profile) {
  std::vector<char> seen(profile.size() + 1, 0);
  for (int v : profile) {
    require(v >= 1 && v <= static_cast<int>(profile.size()), "profile image out of range");
    require(!seen[static_cast<std::size_t>(v)], "profile is not a permutation");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

bool Deformation::minimal() const {
  if (size() < 2) return true;
  return profile.front() != 1 && profile.back() != size();
}

int Deformation::translated(int j) const {
  int i = j - offset + 1;
  if (i >= 1 && i <= size()) return profile[static_cast<std::size_t>(i - 1)] + offset - 1;
  return j;
}

Cycle deformation_apply(const Deformation& mu, int P) {
  check_profile(mu.profile);
  require(mu.offset >= 1, "deformation offset must be >= 1");
  require(mu.offset + mu.size() - 1 <= P, "deformation does not fit in P points");
  std::vector<int> seq(static_cast<std::size_t>(P));
  for (int j = 1; j <= P; ++j) seq[static_cast<std::size_t>(j - 1)] = mu.translated(j);
  return Cycle::from_sequence(seq);
}

Deformation profile_of(const Cycle& sigma) {
  const int P = sigma.size();
  auto seq = sigma.sequence();
  Deformation best;
  int best_len = P + 1;
  for (int r = 0; r < P; ++r) {
    // pi(k) = seq[(k-1+r) mod P] conjugates omega_P into sigma.
    int first = 0, last = 0;
    for (int k = 1; k <= P; ++k) {
      if (seq[static_cast<std::size_t>((k - 1 + r) % P)] != k) {
        if (!first) first = k;
        last = k;
      }
    }
    int len = first ? last - first + 1 : 0;
    if (len < best_len) {
      best_len = len;
      best.profile.clear();
      best.offset = first ? first : 1;
      for (int k = first; first && k <= last; ++k)
        best.profile.push_back(seq[static_cast<std::size_t>((k - 1 + r) % P)] - first + 1);
    }
  }
  return best;
}

std::vector<int> normalize_labels(const std::vector<int>& values) {
  std::vector<int> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> out;
  out.reserve(values.size());
  for (int v : values)
    out.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()) + 1);
  return out;
}

std::vector<int> Extraction::normalized() const { return normalize_labels(varpi); }

Extraction extract(const std::vector<int>& mu, int m, int M, ExtractionKind kind) {
  check_profile(mu);
  const int n = static_cast<int>(mu.size());
  auto in_range = [n](int a) { return a >= 1 && a <= n; };
  if (!in_range(M)) throw std::out_of_range("extract: M out of range");
  const bool pair_kind = kind != ExtractionKind::head && kind != ExtractionKind::tail;
  if (pair_kind) {
    if (!in_range(m)) throw std::out_of_range("extract: m out of range");
    if (m == M) throw std::invalid_argument("extract: m == M");
  }
  auto inv = inverse_table(mu);
  Extraction e;
  e.kind = kind;
  auto add_range = [&](int lo, int hi) {
    for (int i = lo; i <= hi; ++i) e.domain.push_back(i);
  };
  int shift_from = 1;
  switch (kind) {
    case ExtractionKind::head:
      add_range(1, inv[static_cast<std::size_t>(M)] - 1);
      break;
    case ExtractionKind::tail:
      add_range(inv[static_cast<std::size_t>(M)] + 1, n);
      break;
    case ExtractionKind::truncation:
    case ExtractionKind::complement:
    case ExtractionKind::ordered:
    case ExtractionKind::ordered_complement: {
      int a = m, b = M;
      const bool ordered_kind = kind == ExtractionKind::ordered || kind == ExtractionKind::ordered_complement;
      if (inv[static_cast<std::size_t>(a)] > inv[static_cast<std::size_t>(b)]) {
        if (!ordered_kind) throw std::invalid_argument("extract: m and M are not ordered along mu");
        std::swap(a, b);
      }
      int ia = inv[static_cast<std::size_t>(a)], ib = inv[static_cast<std::size_t>(b)];
      if (kind == ExtractionKind::truncation || kind == ExtractionKind::ordered) {
        add_range(ia, ib - 1);
      } else {
        add_range(1, ia - 1);
        add_range(ib, n);
      }
      shift_from = m + 1;
      break;
    }
  }
  for (int i : e.domain) {
    int img = mu[static_cast<std::size_t>(i - 1)];
    e.images.push_back(img);
    int w = omega_shift(img, shift_from, M);
    e.varpi.push_back(w);
    if (w > M) ++e.floating;
  }
  return e;
}

}  // namespace qssep
