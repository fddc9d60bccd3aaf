#include "qssep/serialize.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>
#include <cstdlib>
#include <fstream>

namespace qssep {

json poly_to_json(const Poly& q) {
  json terms = json::array();
  for (const auto& [m, c] : q.terms()) {
    json vars = json::array();
    for (Mask r = m; r; r &= r - 1) vars.push_back(std::countr_zero(r) + 1);
    terms.push_back({{"vars", vars}, {"coeff", c.str()}});
  }
  return {{"nvars", q.nvars()}, {"terms", terms}};
}

Poly poly_from_json(const json& j) {
  Poly q(j.at("nvars").get<int>());
  for (const auto& t : j.at("terms")) {
    Mask m = 0;
    for (int v : t.at("vars")) {
      if (v < 1 || v > q.nvars()) throw std::out_of_range("poly_from_json: variable index out of range");
      m |= var_bit(v);
    }
    const auto& c = t.at("coeff");
    q.add_term(m, c.is_string() ? BigInt(c.get<std::string>()) : BigInt(c.get<long long>()));
  }
  return q;
}

std::string pretty(const LoopValue& v) {
  const Poly& q = v.poly;
  const int P = v.cycle.size();
  if (v.offset) return "n_a + " + to_string(q);
  if (P < 2 || q.is_zero()) return to_string(q);
  const Poly inner = derivative(q, 1);  // Q = x1 * inner when Q|_{x1=0} = 0
  if (!eval_zero(q, 1).is_zero()) return to_string(q);
  const Poly core = eval_zero(inner, P);  // inner = core * (1 - xP) when inner|_{xP=1} = 0
  if (!eval_one(inner, P).is_zero()) return "x1*(" + to_string(inner) + ")";
  const std::string last = "(1 - x" + std::to_string(P) + ")";
  if (core == Poly::constant(P, BigInt(1))) return "x1*" + last;
  return "x1*(" + to_string(core) + ")*" + last;
}

json to_json(const LoopValue& v) {
  return {{"cycle", v.cycle.str()}, {"degree", v.degree}, {"offset", v.offset}, {"poly", poly_to_json(v.poly)},
          {"pretty", pretty(v)}};
}

LoopValue loop_value_from_json(const json& j) {
  LoopValue v;
  v.cycle = Cycle::parse(j.at("cycle").get<std::string>());
  v.degree = j.at("degree").get<int>();
  v.offset = j.value("offset", false);
  v.poly = poly_from_json(j.at("poly"));
  return v;
}

std::string y_string(const Poly& q) { return to_string(q, "y", -1); }

json to_json(const SeriesPoly& s, bool as_y) {
  json coeffs = json::array();
  for (int n = 0; n <= s.order(); ++n) coeffs.push_back(as_y ? json(y_string(s[n])) : poly_to_json(s[n]));
  return {{"order", s.order()}, {"coeffs", coeffs}};
}

json to_json(const Identity& id) {
  return {{"name", id.name}, {"lhs", to_string(id.lhs)}, {"rhs", to_string(id.rhs)},
          {"residual", to_string(id.residual)}, {"holds", id.holds()}};
}

json to_json(const Report& r) {
  json ids = json::array();
  for (const auto& i : r.identities) ids.push_back(to_json(i));
  return {{"cycle", r.cycle.str()}, {"j", r.j}, {"property", r.property}, {"passed", r.passed()}, {"identities", ids}};
}

json to_json(const mc::QssepConfig& c) {
  return {{"L", c.L},           {"D", c.D},         {"alpha0", c.alpha0},       {"beta0", c.beta0},
          {"alphaL", c.alphaL}, {"betaL", c.betaL}, {"dt", c.dt},               {"t_max", c.t_max},
          {"n_traj", c.n_traj}, {"seed", c.seed},   {"snapshots", c.snapshots}, {"init", c.init}};
}

mc::QssepConfig config_from_json(const json& j) {
  mc::QssepConfig c;
  for (const auto& [key, val] : j.items()) {
    if (key == "L") c.L = val.get<int>();
    else if (key == "D") c.D = val.get<double>();
    else if (key == "alpha0") c.alpha0 = val.get<double>();
    else if (key == "beta0") c.beta0 = val.get<double>();
    else if (key == "alphaL") c.alphaL = val.get<double>();
    else if (key == "betaL") c.betaL = val.get<double>();
    else if (key == "dt") c.dt = val.get<double>();
    else if (key == "t_max") c.t_max = val.get<double>();
    else if (key == "n_traj") c.n_traj = val.get<int>();
    else if (key == "seed") c.seed = val.get<std::uint64_t>();
    else if (key == "snapshots") c.snapshots = val.get<int>();
    else if (key == "init") c.init = val.get<std::string>();
    else throw std::invalid_argument("unknown config field: " + key);
  }
  return c;
}

json to_json(const mc::CumulantEstimate& e) {
  return {{"value", e.value}, {"stderr", e.std_error}, {"n_samples", e.n_samples}};
}

json artifact_versions() {
  return {{"qssep", kVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"compiler", __VERSION__}};
}

json to_json(const RunManifest& m) {
  json j = {{"subcommand", m.subcommand}, {"flags", m.flags},   {"inputs", m.inputs},
            {"outputs", m.outputs},       {"versions", artifact_versions()}};
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  return j;
}

LoopCache::LoopCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

std::optional<LoopCache> LoopCache::from_env() {
  const char* d = std::getenv("QSSEP_CACHE_DIR");
  if (!d || !*d) return std::nullopt;
  return LoopCache(d);
}

std::filesystem::path LoopCache::file_for(const Cycle& c) const {
  std::string name;
  for (int x : c.sequence()) name += (name.empty() ? "" : "-") + std::to_string(x);
  return dir_ / (name + ".json");
}

std::optional<LoopValue> LoopCache::load(const Cycle& c) const {
  std::ifstream in(file_for(c));
  if (!in) return std::nullopt;
  LoopValue v = loop_value_from_json(json::parse(in));
  if (!(v.cycle == c)) throw InvariantError("cache file " + file_for(c).string() + " holds " + v.cycle.str());
  return v;
}

void LoopCache::store(const LoopValue& v) const {
  const auto path = file_for(v.cycle);
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << to_json(v).dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
}

LoopValue cached_loop_expectation(const Cycle& c, LoopSolver& solver, const LoopCache* cache) {
  if (cache) {
    if (auto hit = cache->load(c)) {
      solver.insert(*hit);
      return *hit;
    }
  }
  LoopValue v = solver.loop_expectation(c);
  if (cache) cache->store(v);
  return v;
}

}  // namespace qssep
