#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "qssep/loop_solver.hpp"
#include "qssep/montecarlo.hpp"
#include "qssep/series.hpp"
#include "qssep/verifier.hpp"

namespace qssep {

using json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

/// {"nvars": n, "terms": [{"vars": [1, 2], "coeff": "-2"}, ...]}; coefficients are decimal strings.
json poly_to_json(const Poly& q);
Poly poly_from_json(const json& j);

/// x1*(...)*(1 - xP) when the boundary factors divide Q, else the expanded form.
/// Single-point loops print as "n_a + x1".
std::string pretty(const LoopValue& v);

json to_json(const LoopValue& v);
LoopValue loop_value_from_json(const json& j);

/// Polynomials in the floating variables print as y0, y1, ...
std::string y_string(const Poly& q);
json to_json(const SeriesPoly& s, bool as_y = true);

json to_json(const Identity& id);
json to_json(const Report& r);

json to_json(const mc::QssepConfig& c);
/// Missing fields keep their defaults; unknown fields are rejected.
mc::QssepConfig config_from_json(const json& j);
json to_json(const mc::CumulantEstimate& e);

struct RunManifest {
  std::string subcommand;
  json flags = json::object();
  std::vector<std::string> inputs, outputs;
  std::optional<std::uint64_t> seed;
};
json to_json(const RunManifest& m);
/// Library versions this binary was built against.
json artifact_versions();

/// On-disk memo of loop values, one JSON file per cycle.
class LoopCache {
 public:
  explicit LoopCache(std::filesystem::path dir);
  /// Directory from QSSEP_CACHE_DIR, if set and non-empty.
  static std::optional<LoopCache> from_env();

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path file_for(const Cycle& c) const;
  std::optional<LoopValue> load(const Cycle& c) const;
  void store(const LoopValue& v) const;

 private:
  std::filesystem::path dir_;
};

/// Loop value through the cache: a hit seeds the solver, a miss is solved and written.
LoopValue cached_loop_expectation(const Cycle& c, LoopSolver& solver, const LoopCache* cache);

}  // namespace qssep
