// specgap: command-line front end.
//
// Exit codes: 0 success, 1 configuration error, 2 hypothesis violation,
// 3 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "specgap/specgap.hpp"

using nlohmann::json;
using namespace specgap;

namespace {

enum Exit { ok = 0, config_error = 1, hypothesis = 2, verification = 3 };

json parse_phi(const std::string& s) {
  if (!s.empty() && s.front() == '{') return json::parse(s);
  const auto colon = s.find(':');
  const std::string type = s.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (type == "power") return {{"type", "power"}, {"gamma", arg.empty() ? 1.0 : std::stod(arg)}};
  if (type == "constant") return {{"type", "constant"}, {"value", arg.empty() ? 1.0 : std::stod(arg)}};
  throw ConfigError("cannot parse --phi '" + s + "' (power:<gamma> | constant:<value> | JSON)");
}

json parse_b(const std::string& s) {
  if (!s.empty() && s.front() == '{') return json::parse(s);
  const auto colon = s.find(':');
  const std::string type = s.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
  if (type == "constant") return {{"type", "constant"}, {"value", arg.empty() ? 1.0 : std::stod(arg)}};
  if (type == "grazing") {
    if (arg.empty()) throw ConfigError("--b grazing needs eps, e.g. grazing:0.1");
    return {{"type", "grazing"}, {"eps", std::stod(arg)}};
  }
  if (type == "linear") return {{"type", "linear"}};
  throw ConfigError("cannot parse --b '" + s + "' (constant:<value> | grazing:<eps> | linear | JSON)");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

/// Defaults per command; explicit flags and --config entries override them.
json default_config(const std::string& command) {
  json c = {{"command", command},
            {"dim", 3},
            {"gamma", 1.0},
            {"phi", nullptr},
            {"b", {{"type", "constant"}, {"value", 1.0}}},
            {"grids", to_json(DissipationGrids{})}};
  if (command == "bounds") {
    c["R"] = nullptr;
  } else if (command == "gap") {
    c["operator"] = "boltzmann";
    c["truncation"] = 8;
    c["normalization"] = "unit-mass";
  } else if (command == "verify") {
    c["suite"] = "theorem1";
    c["n"] = 50;
    c["seed"] = 7;
    c["degree"] = 6;
    c["eps"] = json::array({0.2});
    c["R"] = nullptr;
    c["normalization"] = "paper-raw";
  } else if (command == "grazing") {
    c["phi"] = {{"type", "constant"}, {"value", 1.0}};
    c["h"] = "v1v2";
    c["eps"] = json::array({0.4, 0.2, 0.1, 0.05});
    c["lambda0"] = false;
    c["mollifier"] = {{"type", "bump"}, {"power", 2.0}};
  } else if (command == "dissipation") {
    c["operator"] = "boltzmann";
    c["h"] = "v1v2";
    c["method"] = "quadrature";
    c["samples"] = 1000000;
    c["seed"] = 7;
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return c;
}

KineticKernel phi_of(const json& c) {
  if (c.contains("phi") && !c["phi"].is_null()) return kinetic_from_json(c["phi"]);
  return KineticKernel::power(c.value("gamma", 1.0));
}

AngularKernel b_of(const json& c) { return angular_from_json(c.at("b"), c.value("dim", 3)); }

DissipationGrids grids_of(const json& c) {
  DissipationGrids g;
  const json& j = c.at("grids");
  g.velocity_order = j.value("velocity_order", 0);
  g.radial_order = j.value("radial_order", 0);
  g.sphere_order = j.value("sphere_order", 0);
  g.angle_order = j.value("angle_order", 0);
  g.azimuth_order = j.value("azimuth_order", 0);
  g.embedded = j.value("embedded", false);
  return g;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------- commands

std::string cmd_bounds(const json& c) {
  std::optional<double> R;
  if (!c["R"].is_null()) R = c["R"].get<double>();
  const BoundReport r = bound_report(phi_of(c), b_of(c), c.value("dim", 3), R);
  return to_json(r).dump(2) + "\n";
}

std::string cmd_gap(const json& c) {
  const int T = c.value("truncation", 8);
  const int N = c.value("dim", 3);
  const Normalization norm = parse_normalization(c.value("normalization", "unit-mass"));
  const std::string op = c.value("operator", "boltzmann");
  GalerkinSystem s;
  if (op == "boltzmann") {
    s = assemble_boltzmann(phi_of(c), b_of(c), T, N, norm, grids_of(c));
  } else if (op == "landau") {
    s = assemble_landau(phi_of(c), T, N, norm, grids_of(c));
  } else {
    throw ConfigError("unknown operator '" + op + "' (boltzmann | landau)");
  }
  const GapResult g = spectral_gap(s);
  json table = json::array();
  std::vector<int> degrees;
  for (int t = 2; t <= T; ++t) degrees.push_back(t);
  for (const auto& row : gap_table(s, degrees)) {
    table.push_back({{"truncation", row.truncation}, {"gap", row.gap}, {"multiplicity", row.multiplicity}});
  }
  if (c.contains("system_out") && c["system_out"].is_string()) {
    std::ofstream(c["system_out"].get<std::string>()) << to_json(s).dump() << "\n";
  }
  json out = {{"operator", op},       {"gap", g.gap},      {"multiplicity", g.multiplicity},
              {"truncation", T},      {"table", table},    {"normalization", to_string(norm)},
              {"grid-meta", s.grid_meta}};
  return out.dump(2) + "\n";
}

int verify_exit = ok;

std::string cmd_verify(const json& c) {
  SuiteSpec s;
  s.suite = c.value("suite", "theorem1");
  s.gamma = c.value("gamma", 1.0);
  s.n = c.value("n", 50);
  s.seed = c.value("seed", 7ull);
  s.dim = c.value("dim", 3);
  s.degree = c.value("degree", 6);
  const auto eps = c.at("eps").get<std::vector<double>>();
  if (!eps.empty()) s.eps = eps.front();
  if (!c["R"].is_null()) s.R = c["R"].get<double>();
  s.grids = grids_of(c);
  const AngularKernel b = b_of(c);
  if (s.suite == "lemma3") {
    if (!b.is_constant()) s.b_override = b;
  } else {
    s.b = b;
  }
  const SuiteResult r = run_suite(s);
  std::string out;
  for (const auto& rec : r.records) out += to_json(rec).dump() + "\n";
  json summary = {{"suite", s.suite}, {"gamma", s.gamma}, {"pass", r.pass}, {"fail", r.fail},
                  {"inconclusive", r.inconclusive}, {"escalated", r.escalated}};
  if (s.suite == "cmcv") summary["k_gamma"] = r.k_gamma;
  out += json{{"summary", summary}}.dump() + "\n";
  verify_exit = r.fail > 0 ? verification : ok;
  return out;
}

std::string cmd_grazing(const json& c) {
  const auto eps = c.at("eps").get<std::vector<double>>();
  const Mollifier j = mollifier_from_json(c["mollifier"]);
  std::string out;
  if (c.value("lambda0", false)) {
    const Lambda0Table t = lambda0_sweep(j, eps);
    out = "eps,lambda0,limit,rel_error\n";
    for (const auto& r : t.rows) out += fmt(r.eps) + "," + fmt(r.lambda0) + "," + fmt(r.limit) + "," + fmt(r.rel_error) + "\n";
    out += "# mollifier=" + describe(j) + "\n# fitted_order=" + fmt(t.fitted_order) + "\n";
    return out;
  }
  const TestFunction h = named_function(c.value("h", "v1v2"), c.value("dim", 3));
  const GrazingTable t = grazing_sweep(h, phi_of(c), j, eps, grids_of(c));
  out = "eps,d_boltzmann,c_times_d_landau,rel_error\n";
  for (const auto& r : t.rows) {
    out += fmt(r.eps) + "," + fmt(r.d_boltzmann) + "," + fmt(r.c_times_d_landau) + "," + fmt(r.rel_error) + "\n";
  }
  out += "# mollifier=" + describe(j) + "\n# fitted_order=" + fmt(t.fitted_order) + "\n";
  return out;
}

std::string cmd_dissipation(const json& c) {
  const TestFunction h = named_function(c.value("h", "v1v2"), c.value("dim", 3));
  const std::string op = c.value("operator", "boltzmann");
  const std::string method = c.value("method", "quadrature");
  const DissipationGrids g = grids_of(c);
  IntegralEstimate e;
  std::string used = method;
  if (op == "landau") {
    e = d_landau(h, phi_of(c), g);
    used = "quadrature";
  } else if (op == "boltzmann-omega") {
    e = d_boltzmann_omega(h, phi_of(c), b_of(c), g);
    used = "quadrature";
  } else if (op == "boltzmann") {
    bool mc = method == "monte-carlo";
    if (method == "automatic") {
      const DissipationGrids r = resolve_grids(g, h.degree, nullptr);
      const double nodes = std::pow(r.velocity_order, h.dim) * r.radial_order *
                           sphere_grid(h.dim, r.sphere_order).size() * (2.0 * r.angle_order * r.azimuth_order);
      mc = nodes > 1e7;
    } else if (method != "quadrature" && method != "monte-carlo") {
      throw ConfigError("unknown method '" + method + "'");
    }
    used = mc ? "monte-carlo" : "quadrature";
    e = mc ? d_boltzmann_monte_carlo(h, phi_of(c), b_of(c), c.value("samples", 1000000ull), c.value("seed", 7ull), g)
           : d_boltzmann(h, phi_of(c), b_of(c), g);
  } else {
    throw ConfigError("unknown operator '" + op + "'");
  }
  json out = {{"operator", op}, {"h", h.name}, {"method", used}, {"value", e.value}, {"error", e.error}};
  if (used == "monte-carlo") out["seed"] = c.value("seed", 7ull);
  return out.dump(2) + "\n";
}

std::string run(const json& c) {
  const std::string cmd = c.at("command");
  if (cmd == "bounds") return cmd_bounds(c);
  if (cmd == "gap") return cmd_gap(c);
  if (cmd == "verify") return cmd_verify(c);
  if (cmd == "grazing") return cmd_grazing(c);
  if (cmd == "dissipation") return cmd_dissipation(c);
  throw ConfigError("unknown command '" + cmd + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral-gap laboratory for the linearized Boltzmann and Landau operators"};
  app.require_subcommand(0, 1);

  std::string config_path, out_path, phi, b, eps, normalization, op, suite, h, method, R, system_out, mollifier;
  double gamma = 1.0;
  int dim = 3, truncation = 8, n = 50, degree = 6, threads = 0;
  std::uint64_t seed = 7, samples = 1000000;
  bool lambda0 = false;
  DissipationGrids grids;

  std::vector<CLI::App*> subs;
  for (const char* name : {"bounds", "gap", "verify", "grazing", "dissipation"}) subs.push_back(app.add_subcommand(name));
  subs[0]->description("explicit constants and optimized bounds (JSON)");
  subs[1]->description("Galerkin spectral gap with a truncation table (JSON)");
  subs[2]->description("randomized inequality suite (JSON lines)");
  subs[3]->description("grazing-limit sweep (CSV)");
  subs[4]->description("single dissipation value (JSON)");

  std::vector<std::pair<std::string, CLI::Option*>> given;
  auto opt = [&](CLI::App* a, const std::string& flag, auto& var, const std::string& key, const std::string& help) {
    auto* o = a->add_option(flag, var, help);
    given.emplace_back(key, o);
  };
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "output file (config written to <out>.config.json)");
  app.add_option("--threads", threads, "worker cap (same results at any value)");
  for (CLI::App* a : subs) {
    a->set_help_flag("--help", "print this help and exit");  // -h is not free: --h names the test function
    a->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    a->add_option("--out", out_path, "output file (config written to <out>.config.json)");
    a->add_option("--threads", threads, "worker cap (same results at any value)");
    opt(a, "--phi", phi, "phi", "power:<gamma> | constant:<value> | JSON");
    opt(a, "--b", b, "b", "constant:<value> | grazing:<eps> | linear | JSON");
    opt(a, "--gamma", gamma, "gamma", "power-law exponent");
    opt(a, "--dim", dim, "dim", "velocity dimension N");
    opt(a, "--velocity-order", grids.velocity_order, "grids.velocity_order", "Gauss-Hermite order per axis");
    opt(a, "--radial-order", grids.radial_order, "grids.radial_order", "radial Gauss-Laguerre order");
    opt(a, "--sphere-order", grids.sphere_order, "grids.sphere_order", "sphere rule order");
    opt(a, "--angle-order", grids.angle_order, "grids.angle_order", "deviation-angle rule order");
    opt(a, "--azimuth-order", grids.azimuth_order, "grids.azimuth_order", "azimuth rule order");
  }
  opt(subs[0], "--R", R, "R", "velocity threshold R");
  opt(subs[1], "--truncation", truncation, "truncation", "maximal degree 2n + l");
  opt(subs[1], "--normalization", normalization, "normalization", "unit-mass | paper-raw");
  opt(subs[1], "--operator", op, "operator", "boltzmann | landau");
  opt(subs[1], "--system-out", system_out, "system_out", "write the Galerkin system bundle (JSON)");
  opt(subs[2], "--suite", suite, "suite", "theorem1 | theorem2 | lemma1 | lemma2 | lemma3 | cmcv");
  opt(subs[2], "--n", n, "n", "number of random test functions");
  opt(subs[2], "--seed", seed, "seed", "RNG seed");
  opt(subs[2], "--degree", degree, "degree", "maximal degree of random test functions");
  opt(subs[2], "--eps", eps, "eps", "grazing eps for lemma3");
  opt(subs[2], "--R", R, "R", "velocity threshold R");
  opt(subs[3], "--eps", eps, "eps", "comma-separated decreasing eps list");
  opt(subs[3], "--h", h, "h", "test function name");
  opt(subs[3], "--mollifier", mollifier, "mollifier", "bump power p of j ~ (1 - (2x/pi)^2)^p");
  given.emplace_back("lambda0", subs[3]->add_flag("--lambda0", lambda0, "sweep |lambda_0(b_eps)| instead"));
  opt(subs[4], "--operator", op, "operator", "boltzmann | boltzmann-omega | landau");
  opt(subs[4], "--h", h, "h", "test function name");
  opt(subs[4], "--method", method, "method", "quadrature | monte-carlo | automatic");
  opt(subs[4], "--samples", samples, "samples", "Monte Carlo samples");
  opt(subs[4], "--seed", seed, "seed", "Monte Carlo seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : config_error;
  }

  try {
    json file_cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      file_cfg = json::parse(in);
    }
    std::string command;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) command = subs[i]->get_name();
    }
    if (command.empty()) command = file_cfg.value("command", "");
    if (command.empty()) throw ConfigError("no command given (bounds | gap | verify | grazing | dissipation)");

    json cfg = default_config(command);
    for (auto it = file_cfg.begin(); it != file_cfg.end(); ++it) {
      if (it.key() == "grids") {
        for (auto g = it->begin(); g != it->end(); ++g) cfg["grids"][g.key()] = *g;
      } else {
        cfg[it.key()] = *it;
      }
    }
    for (const auto& [key, o] : given) {
      if (o->count() == 0) continue;
      if (key == "phi") cfg["phi"] = parse_phi(phi);
      else if (key == "b") cfg["b"] = parse_b(b);
      else if (key == "gamma") cfg["gamma"] = gamma;
      else if (key == "dim") cfg["dim"] = dim;
      else if (key == "R") cfg["R"] = std::stod(R);
      else if (key == "truncation") cfg["truncation"] = truncation;
      else if (key == "normalization") cfg["normalization"] = to_string(parse_normalization(normalization));
      else if (key == "operator") cfg["operator"] = op;
      else if (key == "system_out") cfg["system_out"] = system_out;
      else if (key == "suite") cfg["suite"] = suite;
      else if (key == "n") cfg["n"] = n;
      else if (key == "seed") cfg["seed"] = seed;
      else if (key == "degree") cfg["degree"] = degree;
      else if (key == "eps") cfg["eps"] = parse_list(eps);
      else if (key == "h") cfg["h"] = h;
      else if (key == "mollifier") cfg["mollifier"] = {{"type", "bump"}, {"power", std::stod(mollifier)}};
      else if (key == "lambda0") cfg["lambda0"] = lambda0;
      else if (key == "method") cfg["method"] = method;
      else if (key == "samples") cfg["samples"] = samples;
      else if (key.rfind("grids.", 0) == 0) {
        const std::string k = key.substr(6);
        const int v = k == "velocity_order" ? grids.velocity_order
                      : k == "radial_order" ? grids.radial_order
                      : k == "sphere_order" ? grids.sphere_order
                      : k == "angle_order"  ? grids.angle_order
                                            : grids.azimuth_order;
        cfg["grids"][k] = v;
      }
    }
    cfg["command"] = command;
    if (threads > 0) set_thread_count(threads);

    const std::string output = run(cfg);
    const std::string cfg_text = cfg.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << output;
      std::cerr << cfg_text;
    } else {
      std::ofstream(out_path, std::ios::binary) << output;
      std::ofstream(out_path + ".config.json", std::ios::binary) << cfg_text;
    }
    return verify_exit;
  } catch (const HypothesisViolation& e) {
    std::cerr << "hypothesis violation: " << e.what() << "\n";
    return hypothesis;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << "\n";
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return config_error;
  }
}
