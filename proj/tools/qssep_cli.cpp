// qssep: command-line entry point.
// Exit codes: 0 ok, 1 a requested check failed, 2 usage error, 3 internal invariant violation.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "qssep/serialize.hpp"

using namespace qssep;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string cur;
  for (char ch : text) {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      cur += ch;
    } else if (!cur.empty()) {
      out.push_back(std::stoi(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::stoi(cur));
  return out;
}

// Human output ends with the manifest as a comment line; JSON output embeds it.
void emit(const RunManifest& m, bool as_json, const json& result, const std::string& human) {
  if (as_json) {
    std::cout << json{{"manifest", to_json(m)}, {"result", result}}.dump(2) << '\n';
  } else {
    std::cout << human;
    if (!human.empty() && human.back() != '\n') std::cout << '\n';
    std::cout << "# manifest " << to_json(m).dump() << '\n';
  }
}

int default_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// ---------------------------------------------------------------- loop-eval
struct LoopEvalArgs {
  std::string cycle;
  bool holes = false;
  std::string at;
  bool json = false;
};

int run_loop_eval(const LoopEvalArgs& a) {
  const Cycle c = Cycle::parse(a.cycle);
  auto cache = LoopCache::from_env();
  const LoopValue v = cached_loop_expectation(c, default_solver(), cache ? &*cache : nullptr);

  RunManifest m{"loop-eval", {{"cycle", a.cycle}, {"holes", a.holes}, {"at", a.at}}, {}, {}, std::nullopt};
  if (cache) m.inputs.push_back(cache->dir().string());
  json result = to_json(v);
  std::ostringstream os;
  os << pretty(v) << '\n';
  if (a.holes) {
    json hs = json::array();
    auto h = hole_decomposition(v.poly);
    for (std::size_t j = 0; j < h.size(); ++j) {
      hs.push_back(poly_to_json(h[j]));
      os << "Q^o_" << j + 1 << " = " << to_string(h[j]) << '\n';
    }
    result["holes"] = hs;
  }
  if (!a.at.empty()) {
    std::vector<double> x;
    std::stringstream ss(a.at);
    for (std::string tok; std::getline(ss, tok, ',');) x.push_back(std::stod(tok));
    if (static_cast<int>(x.size()) != c.size()) throw UsageError("--at needs one value per point");
    const double val = v.poly.evaluate<double>(x);
    result["value_at"] = {{"x", x}, {"value", val}, {"plus_n_a", v.offset}};
    os << "value" << (v.offset ? " - n_a" : "") << " = " << std::setprecision(17) << val << '\n';
  }
  emit(m, a.json, result, os.str());
  return 0;
}

// ---------------------------------------------------------------- verify
struct VerifyArgs {
  int pmax = 6;
  std::string property = "all";
  int gluing_pmax = 4;
  int threads = 1;
  bool regular_pairs = true;
  bool json = false;
};

int run_verify(const VerifyArgs& a) {
  if (a.pmax < 2 || a.pmax > 8) throw UsageError("--pmax must be in [2, 8]");
  std::vector<std::string> props;
  if (a.property == "all") props = sweep_properties();
  else props = {a.property};
  auto reports = sweep(a.pmax, props, a.threads, a.gluing_pmax);
  if (a.regular_pairs)
    for (int P = 2; P <= a.pmax; ++P)
      for (int n = 1; n < P; ++n) reports.push_back(check_regular_pair(P, n));

  std::map<std::string, std::pair<int, int>> tally;
  json failures = json::array();
  std::ostringstream os;
  for (const auto& r : reports) {
    auto& t = tally[r.property];
    (r.passed() ? t.first : t.second)++;
    if (!r.passed()) {
      failures.push_back(to_json(r));
      os << "FAIL " << r.property << " " << r.cycle.str() << " j=" << r.j;
      for (const auto& i : r.identities)
        if (!i.holds()) os << "  [" << i.name << "] residual " << to_string(i.residual);
      os << '\n';
    }
  }
  json summary = json::object();
  for (const auto& [k, v] : tally) {
    summary[k] = {{"passed", v.first}, {"failed", v.second}};
    os << std::left << std::setw(14) << k << " passed " << std::setw(6) << v.first << " failed " << v.second << '\n';
  }
  RunManifest m{"verify",
                {{"pmax", a.pmax}, {"property", a.property}, {"gluing_pmax", a.gluing_pmax}, {"threads", a.threads}},
                {}, {}, std::nullopt};
  emit(m, a.json, {{"summary", summary}, {"failures", failures}}, os.str());
  return failures.empty() ? 0 : 1;
}

// ---------------------------------------------------------------- series
struct SeriesArgs {
  std::string kind = "regular";
  int k = 4;
  int q = 2;
  std::string mu;
  int stable = -1;
  int anchor = -1;
  bool show_series = false;
  bool json = false;
};

int run_series(const SeriesArgs& a) {
  if (a.k < 0) throw UsageError("--k must be >= 0");
  const int P = a.k + 1;
  std::vector<int> mu;
  if (a.kind == "transposition") mu = {2, 1};
  else if (a.kind == "deformed") mu = parse_int_list(a.mu);
  else if (a.kind != "regular") throw UsageError("--kind must be regular, transposition or deformed");
  if (a.kind == "deformed") check_profile(mu);

  RunManifest m{"series",
                {{"kind", a.kind}, {"k", a.k}, {"q", a.q}, {"mu", a.mu}, {"stable", a.stable}, {"anchor", a.anchor}},
                {}, {}, std::nullopt};
  std::ostringstream os;
  json result;
  bool ok = true;

  if (a.stable >= 0) {
    StableSeries s = mu.empty() ? StableSeries::regular(a.stable) : StableSeries::deformed(mu, a.q, a.stable, a.anchor);
    json levels = json::array();
    for (int k = s.k_min(); k <= s.k_max(); ++k) {
      levels.push_back({{"k", k}, {"location", s.location(k)}, {"value", y_string(s.value(k))}});
      os << "k=" << k << (mu.empty() ? "" : " q=" + std::to_string(s.location(k))) << ": " << y_string(s.value(k)) << '\n';
    }
    result = {{"levels", levels}, {"padding_idempotent", s.padding_idempotent()}};
    ok = s.padding_idempotent();
    os << "padding idempotent: " << (ok ? "yes" : "NO") << '\n';
  } else {
    RegularTower reg(a.k, required_order(P));
    LoopValue v;
    SeriesPoly D;
    if (mu.empty()) {
      v = reg.reconstruct(a.k);
      D = reg.C(a.k);
    } else if (a.kind == "transposition") {
      TranspositionTower t(reg);
      v = t.reconstruct(a.q, a.k);
      D = t.D(a.q, a.k);
    } else {
      DeformationEngine e(reg);
      v = e.reconstruct(mu, a.q, a.k);
      D = e.D(mu, a.q, a.k);
    }
    const LoopValue oracle = default_solver().loop_expectation(v.cycle);
    ok = oracle.poly == v.poly;
    result = {{"cycle", v.cycle.str()}, {"D_at_zero", y_string(D.at_zero())}, {"loop", to_json(v)}, {"matches_solver", ok}};
    os << "cycle " << v.cycle.str() << '\n' << "D(0) = " << y_string(D.at_zero()) << '\n' << "loop = " << pretty(v) << '\n';
    if (a.show_series) {
      result["series"] = to_json(D);
      for (int n = 0; n <= D.order(); ++n) os << "[z^" << n << "] " << y_string(D[n]) << '\n';
    }
    os << "matches solver: " << (ok ? "yes" : "NO") << '\n';
  }
  emit(m, a.json, result, os.str());
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- simulate
struct SimulateArgs {
  std::string config;
  std::string out;
  int threads = 0;
  int n_traj = -1;
  long long seed = -1;
  bool json = false;
};

struct Row {
  std::string observable, indices;
  mc::CumulantEstimate est;
  double prediction;
};

std::vector<Row> simulation_rows(const mc::Ensemble& ens) {
  const auto& cfg = ens.cfg;
  std::vector<Row> rows;
  const Cycle one = Cycle::parse("(1)"), two = Cycle::parse("(1 2)");
  for (int i = 0; i < cfg.L; ++i)
    rows.push_back({"density", std::to_string(i), mc::estimate_loop_cumulant(ens, {i}, one), mc::loop_prediction(cfg, {i})});
  for (int i = 0; i < cfg.L; ++i)
    for (int j = i; j < cfg.L; ++j)
      rows.push_back({i == j ? "variance" : "loop2", std::to_string(i) + ";" + std::to_string(j),
                      mc::estimate_loop_cumulant(ens, {i, j}, two), mc::loop_prediction(cfg, {i, j})});
  return rows;
}

int run_simulate(const SimulateArgs& a) {
  mc::QssepConfig cfg;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw UsageError("cannot read config " + a.config);
    cfg = config_from_json(json::parse(in));
  }
  if (a.n_traj > 0) cfg.n_traj = a.n_traj;
  if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
  for (const auto& w : cfg.validate()) std::cerr << "warning: " << w << '\n';

  const int threads = a.threads > 0 ? a.threads : default_threads();
  const auto t0 = std::chrono::steady_clock::now();
  const auto ens = mc::run_steady(cfg, threads);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto rows = simulation_rows(ens);

  std::ostringstream csv;
  csv << "observable,indices,estimate,stderr,prediction,z_score\n" << std::setprecision(10);
  json jrows = json::array();
  for (const auto& r : rows) {
    csv << r.observable << ',' << r.indices << ',' << r.est.value << ',' << r.est.std_error << ',' << r.prediction << ','
        << r.est.z_score(r.prediction) << '\n';
    jrows.push_back({{"observable", r.observable}, {"indices", r.indices}, {"estimate", r.est.value},
                     {"stderr", r.est.std_error}, {"prediction", r.prediction}, {"z_score", r.est.z_score(r.prediction)}});
  }
  RunManifest m{"simulate", {{"config", to_json(cfg)}, {"threads", threads}}, {}, {}, cfg.seed};
  if (!a.config.empty()) m.inputs.push_back(a.config);
  std::string human = csv.str();
  if (!a.out.empty()) {
    std::ofstream(a.out) << csv.str();
    m.outputs.push_back(a.out);
    human = "wrote " + std::to_string(rows.size()) + " rows to " + a.out + "\n";
  }
  std::ostringstream tail;
  tail << "# wall time " << std::fixed << std::setprecision(1) << secs << " s\n";
  emit(m, a.json, {{"rows", jrows}, {"wall_seconds", secs}}, human + tail.str());
  return 0;
}

// ---------------------------------------------------------------- associahedron
struct AssocArgs {
  int n = 5;
  bool check = false;
  bool json = false;
};

int run_associahedron(const AssocArgs& a) {
  if (a.n < 2 || a.n > 7) throw UsageError("--n must be in [2, 7]");
  const auto phi = associahedron_profile(a.n + 1);
  std::vector<std::string> coeffs;
  for (const auto& c : phi) coeffs.push_back(c.str());
  json result = {{"n", a.n}, {"phi", univariate_to_string(phi)}, {"coeffs", coeffs}};
  std::ostringstream os;
  os << univariate_to_string(phi) << '\n';
  bool ok = true;
  if (a.check) {
    const auto ref = specialize_minus_t(loop_expectation(regular(a.n + 1)).poly);
    int bad = 0, total = 0;
    for (const auto& c : all_cycles(a.n + 1)) {
      ++total;
      if (specialize_minus_t(loop_expectation(c).poly) != ref) ++bad;
    }
    ok = bad == 0;
    result["independence"] = {{"cycles", total}, {"mismatches", bad}};
    os << "x_j = -t specialization identical for " << total - bad << "/" << total << " cycles\n";
  }
  RunManifest m{"associahedron", {{"n", a.n}, {"check", a.check}}, {}, {}, std::nullopt};
  emit(m, a.json, result, os.str());
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- compare
struct CompareArgs {
  std::string cycle;
  bool mc = false;
  std::string config;
  int threads = 0;
  bool json = false;
};

int run_compare(const CompareArgs& a) {
  const Cycle c = Cycle::parse(a.cycle);
  const int P = c.size();
  auto cache = LoopCache::from_env();
  const LoopValue solved = cached_loop_expectation(c, default_solver(), cache ? &*cache : nullptr);

  json table = json::array();
  std::ostringstream os;
  bool all_ok = true;
  auto row = [&](const std::string& method, const std::string& value, bool ok, const std::string& note) {
    table.push_back({{"method", method}, {"value", value}, {"agrees", ok}, {"note", note}});
    os << std::left << std::setw(12) << method << (ok ? "ok    " : "FAIL  ") << value << (note.empty() ? "" : "  (" + note + ")") << '\n';
    all_ok = all_ok && ok;
  };
  row("solver", pretty(solved), true, "reference");

  if (P >= 2) {
    const Deformation d = profile_of(c);
    RegularTower reg(P - 1, required_order(P));
    DeformationEngine eng(reg);
    std::string note = d.empty() ? "regular loop" : "profile (";
    if (!d.empty()) {
      for (std::size_t i = 0; i < d.profile.size(); ++i) note += (i ? "," : "") + std::to_string(d.profile[i]);
      note += ") at q=" + std::to_string(d.offset);
    }
    const LoopValue s = eng.reconstruct(d.profile, d.empty() ? 1 : d.offset, P - 1);
    row("series", pretty(s), s.poly == solved.poly && s.cycle == c, note);
  }

  if (a.mc) {
    if (P > 2) throw UsageError("--mc supports loops with at most two points");
    mc::QssepConfig cfg;
    if (!a.config.empty()) {
      std::ifstream in(a.config);
      if (!in) throw UsageError("cannot read config " + a.config);
      cfg = config_from_json(json::parse(in));
    }
    const auto ens = mc::run_steady(cfg, a.threads > 0 ? a.threads : default_threads());
    const std::vector<int> pts = P == 1 ? std::vector<int>{cfg.L / 2} : std::vector<int>{3 * cfg.L / 10, 7 * cfg.L / 10};
    const auto est = mc::estimate_loop_cumulant(ens, pts, c);
    const double pred = mc::loop_prediction(cfg, pts);
    const double tol = std::max(3 * est.std_error, 0.15 * std::abs(pred));
    std::ostringstream v;
    v << std::setprecision(6) << est.value << " +- " << est.std_error << " vs " << pred;
    row("montecarlo", v.str(), std::abs(est.value - pred) <= tol, "tolerance max(3 stderr, 15%)");
  }

  RunManifest m{"compare", {{"cycle", a.cycle}, {"mc", a.mc}, {"config", a.config}}, {}, {}, std::nullopt};
  if (!a.config.empty()) m.inputs.push_back(a.config);
  emit(m, a.json, {{"cycle", c.str()}, {"table", table}, {"all_agree", all_ok}}, os.str());
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact loop expectation values, series pipelines and simulation for the quantum SSEP"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  LoopEvalArgs le;
  auto* c_le = app.add_subcommand("loop-eval", "Loop polynomial of one single cycle");
  c_le->add_option("--cycle", le.cycle, "Cycle, e.g. \"(1 3 2 4)\"")->required();
  c_le->add_flag("--holes", le.holes, "Also print the hole decomposition");
  c_le->add_option("--at", le.at, "Evaluate at comma-separated positions");
  c_le->add_flag("--json", le.json, "JSON output");

  VerifyArgs ve;
  auto* c_ve = app.add_subcommand("verify", "Sweep the stationarity conditions over all single cycles");
  c_ve->add_option("--pmax", ve.pmax, "Largest number of points")->capture_default_str();
  c_ve->add_option("--property", ve.property, "moves|continuity|compat|propag|gluing|boundary|all")
      ->check(CLI::IsMember({"moves", "continuity", "compat", "propag", "gluing", "boundary", "all"}))
      ->capture_default_str();
  c_ve->add_option("--gluing-pmax", ve.gluing_pmax, "Largest P for the un-solved gluing form")->capture_default_str();
  c_ve->add_option("--threads", ve.threads, "Worker threads")->capture_default_str();
  c_ve->add_flag("!--no-regular-pairs", ve.regular_pairs, "Skip the (omega_P, tau_n o omega_P) identities");
  c_ve->add_flag("--json", ve.json, "JSON output");

  SeriesArgs se;
  auto* c_se = app.add_subcommand("series", "Generating-function towers and their reconstructions");
  c_se->add_option("--kind", se.kind, "regular|transposition|deformed")->capture_default_str();
  c_se->add_option("--k", se.k, "Level k (the loop has k+1 points)")->capture_default_str();
  c_se->add_option("--q", se.q, "Deformation location")->capture_default_str();
  c_se->add_option("--mu", se.mu, "Deformation profile, e.g. 2,3,1");
  c_se->add_option("--stable", se.stable, "Print the stabilized series up to this level");
  c_se->add_option("--anchor", se.anchor, "Level at which the location equals --q (stable deformed series)");
  c_se->add_flag("--show-series", se.show_series, "Print every z coefficient");
  c_se->add_flag("--json", se.json, "JSON output");

  SimulateArgs si;
  auto* c_si = app.add_subcommand("simulate", "Monte Carlo of the open chain; CSV of estimates vs predictions");
  c_si->add_option("--config", si.config, "Config JSON (QssepConfig field names)");
  c_si->add_option("--out", si.out, "CSV output path");
  c_si->add_option("--threads", si.threads, "Worker threads (default: all cores)");
  c_si->add_option("--n-traj", si.n_traj, "Override n_traj");
  c_si->add_option("--seed", si.seed, "Override seed");
  c_si->add_flag("--json", si.json, "JSON output");

  AssocArgs as;
  auto* c_as = app.add_subcommand("associahedron", "Face-count polynomial from the x_j = -t specialization");
  c_as->add_option("--n", as.n, "Dimension index n (uses P = n+1 points)")->capture_default_str();
  c_as->add_flag("--check", as.check, "Check the specialization is the same for every cycle");
  c_as->add_flag("--json", as.json, "JSON output");

  CompareArgs co;
  auto* c_co = app.add_subcommand("compare", "Solver vs series (vs Monte Carlo) for one cycle");
  c_co->add_option("--cycle", co.cycle, "Cycle")->required();
  c_co->add_flag("--mc", co.mc, "Also run the simulation (P <= 2)");
  c_co->add_option("--config", co.config, "Config JSON for --mc");
  c_co->add_option("--threads", co.threads, "Worker threads");
  c_co->add_flag("--json", co.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_le->parsed()) return run_loop_eval(le);
    if (c_ve->parsed()) return run_verify(ve);
    if (c_se->parsed()) return run_series(se);
    if (c_si->parsed()) return run_simulate(si);
    if (c_as->parsed()) return run_associahedron(as);
    if (c_co->parsed()) return run_compare(co);
  } catch (const InvariantError& e) {
    std::cerr << "internal invariant violated: " << e.what() << '\n';
    return 3;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
