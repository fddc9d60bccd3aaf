#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qssep {

/// Thrown when an internal consistency check fails (a bug, not bad input).
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Single-cycle permutation on the labels {1..P}.
class Cycle {
 public:
  Cycle() = default;

  /// Cycle from its point sequence (any rotation). Throws std::invalid_argument.
  static Cycle from_sequence(const std::vector<int>& seq);
  /// Cycle from a successor table, succ[x-1] = sigma(x).
  static Cycle from_successors(std::vector<int> succ);
  /// Parses "(1 3 2 4)", "(1324)" or "1,3,2,4".
  static Cycle parse(std::string_view text);

  int size() const { return static_cast<int>(succ_.size()); }
  int operator()(int x) const { return succ_[static_cast<std::size_t>(x - 1)]; }
  int inverse(int x) const;

  /// (1, sigma(1), sigma^2(1), ...)
  std::vector<int> sequence() const;
  const std::vector<int>& successors() const { return succ_; }

  /// "(1 3 2 4)"
  std::string str() const;
  /// "(1324)"-style compact key; labels >= 10 are comma separated.
  std::string key() const;

  auto operator<=>(const Cycle&) const = default;

 private:
  explicit Cycle(std::vector<int> succ) : succ_(std::move(succ)) {}
  std::vector<int> succ_;
};

/// Loop on a subset of labels, stored relabeled onto {1..|points|}.
struct SubLoop {
  std::vector<int> points;  // strictly increasing ambient labels
  Cycle cycle;              // relabeled, order preserving

  int size() const { return static_cast<int>(points.size()); }
  bool contains(int label) const;
  /// Local index (1-based) of an ambient label, 0 when absent.
  int local_index(int label) const;
};

Cycle regular(int P);
Cycle adjoint_transposition(const Cycle& sigma, int j);
/// tau_j sigma = sigma^-_j . sigma^+_j with j in the first loop and j+1 in the second.
std::pair<SubLoop, SubLoop> split(const Cycle& sigma, int j);
/// tau_{k+1} ... tau_j o sigma
Cycle twist_chain(const Cycle& sigma, int k, int j);
/// sigma^rev(k) = sigma(P+1-k), as a conjugation by the reflection.
Cycle reversed(const Cycle& sigma);
/// Conjugation pi o sigma = pi sigma pi^{-1}; perm is an image table on {1..P}.
Cycle conjugate(const Cycle& sigma, const std::vector<int>& perm);
/// All (P-1)! single cycles on {1..P}, in lexicographic order of their sequence.
std::vector<Cycle> all_cycles(int P);

/// Permutation profile mu (images mu(1..|mu|)) placed at offset n.
struct Deformation {
  std::vector<int> profile;
  int offset = 1;

  int size() const { return static_cast<int>(profile.size()); }
  bool empty() const { return profile.empty(); }
  /// mu(1) != 1 and mu(|mu|) != |mu| (vacuous for |mu| < 2).
  bool minimal() const;
  /// mu_n(j) for an ambient label j.
  int translated(int j) const;
};

/// mu_n o omega_P.
Cycle deformation_apply(const Deformation& mu, int P);
/// Minimal (mu, n) with mu_n o omega_P = sigma; the empty profile for omega_P.
Deformation profile_of(const Cycle& sigma);
/// Validates that profile is a permutation of {1..|mu|}.
void check_profile(const std::vector<int>& profile);

enum class ExtractionKind {
  truncation,   // mu^{(m,M)}
  complement,   // mu^{m)(M}
  head,         // mu^{M]}
  tail,         // mu^{[M}
  ordered,      // mu^{[m,M]}
  ordered_complement  // mu^{m][M}
};

/// Partial map obtained by restricting a profile to a domain of positions.
struct Extraction {
  ExtractionKind kind{};
  std::vector<int> domain;  // increasing positions in {1..|mu|}
  std::vector<int> images;  // raw images mu(domain)
  std::vector<int> varpi;   // images after the omega^l_M shift
  int floating = 0;         // # of varpi images in [M+1, |mu|]

  int size() const { return static_cast<int>(domain.size()); }
  /// varpi relabeled order-preservingly onto {1..size()}, as a profile.
  std::vector<int> normalized() const;
};

/// Extraction of kind `kind` from profile mu. For head/tail only M is used.
Extraction extract(const std::vector<int>& mu, int m, int M, ExtractionKind kind);

/// Order-preserving relabel of distinct values onto {1..n}.
std::vector<int> normalize_labels(const std::vector<int>& values);

}  // namespace qssep
