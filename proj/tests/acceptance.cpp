// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "specgap/specgap.hpp"

using namespace specgap;

namespace {

// Pinned tolerances.
constexpr double lambda0_tol = 1e-12;
constexpr double maxwell_gap_rel_tol = 0.01;
constexpr double table_slack = 1e-12;  // relative roundoff allowance between truncations
constexpr double landau_budget = 1e-9;
constexpr double inconclusive_rate_max = 0.05;
constexpr double optimizer_tol = 1e-6;
constexpr double ratio_tol = 1e-12;
constexpr double min_order = 0.8;
constexpr double invariant_tol = 1e-8;
constexpr int invariant_order = 8;

int failures = 0;

void report(int id, const std::string& name, const std::function<std::string(bool&)>& body) {
  bool ok = false;
  std::string detail;
  try {
    detail = body(ok);
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  if (!ok) ++failures;
  std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(SPECGAP_CLI) + " " + args + " 2>/dev/null";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

}  // namespace

int main() {
  const auto one_b = AngularKernel::constant(1.0);
  const auto one_phi = KineticKernel::constant(1.0);

  report(1, "bobylev lambda0, b = 1, N = 3", [&](bool& ok) {
    const double l = bobylev_lambda0(one_b);
    const double err = std::abs(l - 4.0 * pi / 3.0);
    ok = err <= lambda0_tol;
    return "lambda0=" + fmt(l) + " |err|=" + fmt(err);
  });

  report(2, "Galerkin Boltzmann gap, B = 1, N = 3, T = 8, unit mass", [&](bool& ok) {
    const auto s = assemble_boltzmann(one_phi, one_b, 8);
    const auto g = spectral_gap(s);
    const double rel = std::abs(g.gap / (4.0 * pi / 3.0) - 1.0);
    const auto rows = gap_table(s, {2, 3, 4, 5, 6, 7, 8});
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i) monotone &= rows[i].gap <= rows[i - 1].gap * (1.0 + table_slack);
    ok = rel <= maxwell_gap_rel_tol && monotone;
    return "gap=" + fmt(g.gap) + " rel=" + fmt(rel) + " multiplicity=" + std::to_string(g.multiplicity) +
           " non-increasing=" + (monotone ? "yes" : "no");
  });

  report(3, "Landau gap, Phi = 1, T = 8, against 2 pi", [&](bool& ok) {
    const auto g = spectral_gap(assemble_landau(one_phi, 8));
    ok = g.gap >= 2.0 * pi - landau_budget;
    return "gap=" + fmt(g.gap) + " bound=" + fmt(2.0 * pi) + " budget=" + fmt(landau_budget);
  });

  report(4, "inequality suites, 50 functions, gamma in {0.5, 1, 2}", [&](bool& ok) {
    int fail = 0, left = 0, total = 0;
    double worst_rate = 0.0;
    for (const char* suite : {"theorem1", "theorem2", "lemma1", "lemma2", "lemma3", "cmcv"}) {
      for (double gamma : {0.5, 1.0, 2.0}) {
        SuiteSpec s;
        s.suite = suite;
        s.gamma = gamma;
        s.n = 50;
        const auto r = run_suite(s);
        fail += r.fail;
        left += r.inconclusive;
        total += s.n;
        worst_rate = std::max(worst_rate, static_cast<double>(r.escalated) / s.n);
      }
    }
    ok = fail == 0 && worst_rate < inconclusive_rate_max && left == 0;
    return "records=" + std::to_string(total) + " fail=" + std::to_string(fail) +
           " worst-inconclusive-rate=" + fmt(worst_rate) + " after-doubling=" + std::to_string(left);
  });

  report(5, "optimizer against closed forms", [&](bool& ok) {
    double worst = 0.0, worst_ratio = 0.0;
    for (double gamma : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const auto bo = s_gamma_bo(gamma), la = s_gamma_la(gamma);
      for (double rel : {bo.R_star / r_star_closed(gamma), la.R_star / r_star_closed(gamma),
                         bo.bound / s_gamma_bo_closed(gamma), la.bound / s_gamma_la_closed(gamma)}) {
        worst = std::max(worst, std::abs(rel - 1.0));
      }
      worst_ratio = std::max(worst_ratio, std::abs(la.bound / bo.bound - 6.0));
    }
    ok = worst <= optimizer_tol && worst_ratio <= ratio_tol;
    return "max-rel-dev=" + fmt(worst) + " max|ratio-6|=" + fmt(worst_ratio);
  });

  report(6, "grazing sweep, h = v1 v2, Phi = 1, eps in {0.4, 0.2, 0.1, 0.05}", [&](bool& ok) {
    const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
    const auto t = grazing_sweep(named_function("v1v2", 3), one_phi, Mollifier::bump(), eps);
    const auto l = lambda0_sweep(Mollifier::bump(), eps);
    bool dec = true, ldec = true;
    for (std::size_t i = 1; i < eps.size(); ++i) {
      dec &= t.rows[i].rel_error < t.rows[i - 1].rel_error;
      ldec &= l.rows[i].rel_error < l.rows[i - 1].rel_error;
    }
    ok = dec && t.fitted_order >= min_order && ldec && l.fitted_order >= min_order;
    return "order=" + fmt(t.fitted_order) + " decreasing=" + (dec ? "yes" : "no") +
           " lambda0-order=" + fmt(l.fitted_order) + " lambda0-decreasing=" + (ldec ? "yes" : "no");
  });

  report(7, "dissipation of collision invariants, gamma in {0, 1, 2}", [&](bool& ok) {
    DissipationGrids g;
    g.velocity_order = invariant_order;
    double worst = 0.0;
    for (double gamma : {0.0, 1.0, 2.0}) {
      const auto phi = KineticKernel::power(gamma);
      for (const char* h : {"one", "v1", "v2", "v3", "energy"}) {
        const auto f = named_function(h, 3);
        worst = std::max(worst, std::abs(d_boltzmann(f, phi, one_b, g).value));
        worst = std::max(worst, std::abs(d_landau(f, phi, g).value));
      }
    }
    ok = worst <= invariant_tol;
    return "max|D|=" + fmt(worst) + " order=" + std::to_string(invariant_order);
  });

  report(8, "CLI re-run from emitted config is bit-exact across thread counts", [&](bool& ok) {
    const auto dir = std::filesystem::temp_directory_path() / "specgap_acceptance";
    std::filesystem::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> runs{
        {"grazing", "grazing --h v1v2 --phi constant:1"},
        {"mc", "dissipation --h v1v2 --method monte-carlo --samples 200000 --seed 11"},
        {"verify", "verify --suite theorem1 --gamma 1 --n 3"},
        {"gap", "gap --truncation 4 --gamma 1"},
    };
    int same = 0;
    std::string bad;
    for (const auto& [name, args] : runs) {
      const auto first = dir / (name + ".out");
      bool all = cli(args + " --threads 1 --out " + first.string()) == 0;
      const std::string ref = slurp(first);
      for (int threads : {2, 4, 8}) {
        const auto again = dir / (name + "." + std::to_string(threads) + ".out");
        all &= cli("--config " + first.string() + ".config.json --threads " + std::to_string(threads) + " --out " +
                   again.string()) == 0;
        all &= !ref.empty() && slurp(again) == ref;
      }
      if (all) {
        ++same;
      } else {
        bad += " " + name;
      }
    }
    ok = same == static_cast<int>(runs.size());
    return "identical=" + std::to_string(same) + "/" + std::to_string(runs.size()) + (bad.empty() ? "" : " differs:" + bad);
  });

  return failures == 0 ? 0 : 1;
}
