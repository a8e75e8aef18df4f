// Experiment runner: config-driven front end over the fracheat library.
// Each subcommand writes CSV curves plus one JSON summary embedding the
// fully resolved config. Exit codes: 0 ok, 2 invalid config, 3 numerical
// failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracheat/fractional.hpp"
#include "fracheat/functional.hpp"
#include "fracheat/heatkernel.hpp"
#include "fracheat/nonlocal_form.hpp"
#include "fracheat/riesz.hpp"
#include "fracheat/spectral.hpp"
#include "fracheat/stablemc.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace fracheat;

namespace {

constexpr int kSchemaVersion = 1;

struct Cfg {
  int d = 1;
  double R = 100.0;
  int n = 1001;
  double alpha = 0.5;
  std::string variant = "power";
  double beta = std::numeric_limits<double>::quiet_NaN();  // must be set
  double delta = 2.0;
  double c1 = 1.0;
  double c3 = 1.0;
  long k_eigs = 0;  // 0 = full
  double tol = 1e-10;
  long mc_paths = 20000;
  double mc_ds = 1e-3;
  double mc_s_end = 500.0;
  std::vector<double> mc_t{0.5};
  int mc_cells = 20;
  std::uint64_t seed = 12345;
  int workers = 1;
  std::string out = "out";
};

// fixed 12-significant-digit serialization for reproducible summaries
double fixed12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json fixed12(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(fixed12(x));
  return a;
}

json config_json(const Cfg& c) {
  json j;
  j["grid"] = {{"d", c.d}, {"R", c.R}, {"n", c.n}};
  j["frac"] = {{"alpha", c.alpha}};
  j["weight"] = {{"variant", c.variant}, {"beta", c.beta}, {"delta", c.delta},
                 {"c1", c.c1},          {"c3", c.c3}};
  j["solver"] = {{"k_eigs", c.k_eigs}, {"tol", c.tol}};
  j["mc"] = {{"n_paths", c.mc_paths}, {"ds", c.mc_ds},
             {"s_end", c.mc_s_end},   {"t_points", fixed12(c.mc_t)},
             {"cells", c.mc_cells}};
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["out"] = c.out;
  return j;
}

WeightSpec make_weight(const Cfg& c) {
  if (c.variant == "power") return WeightSpec{PowerWeight{c.beta}};
  if (c.variant == "stretched")
    return WeightSpec{StretchedExpWeight{c.beta, c.delta, c.alpha, c.c1, c.c3}};
  throw std::invalid_argument("weight.variant must be power or stretched");
}

void validate(const Cfg& c, const std::string& experiment) {
  auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
  if (std::isnan(c.beta)) fail("missing key weight.beta");
  if (c.d != 1 && c.d != 2) fail("grid.d must be 1 or 2");
  if (!(c.R > 0)) fail("grid.R must be positive");
  if (c.n < 3 || c.n % 2 == 0) fail("grid.n must be odd and >= 3");
  if (!(c.alpha > 0 && c.alpha < 2)) fail("frac.alpha must lie in (0,2)");
  if (!(c.d > c.alpha)) fail("transience requires grid.d > frac.alpha");
  make_weight(c).validate();
  const bool needs_growth = experiment == "spectrum" || experiment == "groundstate" ||
                            experiment == "heatkernel" || experiment == "inequalities" ||
                            experiment == "mc-compare" || experiment == "report-all";
  if (needs_growth && !(c.beta > c.alpha))
    fail("weight.beta must exceed frac.alpha for experiment " + experiment);
  if (c.workers < 1) fail("workers must be >= 1");
}

double num1(const std::vector<std::string>& v, const std::string& key) {
  if (v.size() != 1)
    throw std::invalid_argument("config key " + key + " expects one value");
  size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v[0], &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v[0].size())
    throw std::invalid_argument("config key " + key + ": bad number '" + v[0] + "'");
  return x;
}

std::string str1(const std::vector<std::string>& v, const std::string& key) {
  if (v.size() != 1)
    throw std::invalid_argument("config key " + key + " expects one value");
  return v[0];
}

// INI loader. CLI11's config machinery maps dotted keys onto subcommand
// trees, which does not fit the flat section.key options used here, so the
// file is applied to Cfg directly; command-line flags still override.
void apply_config(Cfg& c, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config file " + path);
  CLI::ConfigINI ini;
  const std::vector<CLI::ConfigItem> items = ini.from_config(f);
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--") continue;  // section markers
    std::string key;
    for (const auto& p : it.parents) key += p + ".";
    key += it.name;
    const auto& v = it.inputs;
    if (key == "grid.d") c.d = int(num1(v, key));
    else if (key == "grid.R") c.R = num1(v, key);
    else if (key == "grid.n") c.n = int(num1(v, key));
    else if (key == "frac.alpha") c.alpha = num1(v, key);
    else if (key == "weight.variant") c.variant = str1(v, key);
    else if (key == "weight.beta") c.beta = num1(v, key);
    else if (key == "weight.delta") c.delta = num1(v, key);
    else if (key == "weight.c1") c.c1 = num1(v, key);
    else if (key == "weight.c3") c.c3 = num1(v, key);
    else if (key == "solver.k_eigs") c.k_eigs = long(num1(v, key));
    else if (key == "solver.tol") c.tol = num1(v, key);
    else if (key == "mc.n_paths") c.mc_paths = long(num1(v, key));
    else if (key == "mc.ds") c.mc_ds = num1(v, key);
    else if (key == "mc.s_end") c.mc_s_end = num1(v, key);
    else if (key == "mc.cells") c.mc_cells = int(num1(v, key));
    else if (key == "mc.t_points") {
      c.mc_t.clear();
      for (const std::string& s : v)
        for (const std::string& tok : CLI::detail::split(s, ','))
          if (!tok.empty()) c.mc_t.push_back(num1({tok}, key));
    } else if (key == "seed") c.seed = std::uint64_t(num1(v, key));
    else if (key == "workers") c.workers = int(num1(v, key));
    else if (key == "out") c.out = str1(v, key);
    else throw std::invalid_argument("unknown config key " + key);
  }
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream f(p);
  f << j.dump(2) << "\n";
}

void write_csv(const fs::path& p, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream f(p);
  f << header << "\n";
  for (const auto& r : rows) {
    for (size_t k = 0; k < r.size(); ++k)
      f << (k ? "," : "") << fixed12(r[k]);
    f << "\n";
  }
}

json summary_skeleton(const Cfg& c, const std::string& experiment) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["experiment"] = experiment;
  j["config"] = config_json(c);
  return j;
}

std::vector<double> geomspace(double a, double b, int m) {
  std::vector<double> v;
  for (int i = 0; i < m; ++i) v.push_back(a * std::pow(b / a, double(i) / (m - 1)));
  return v;
}

struct Lab {
  Cfg cfg;
  fs::path out;

  Grid grid() const { return build_grid({cfg.d, cfg.R, cfg.n}); }

  DiscreteOperator op() const {
    return assemble_form(grid(), FracParams(cfg.alpha, cfg.d), make_weight(cfg));
  }

  json spectrum() const {
    const DiscreteOperator o = op();
    const long k = cfg.k_eigs > 0 ? cfg.k_eigs : o.size();
    const Spectrum sp = solve_spectrum(o, k);
    std::vector<std::vector<double>> rows;
    for (long m = 0; m < sp.count(); ++m)
      rows.push_back({double(m + 1), sp.lambdas(m)});
    write_csv(out / "eigenvalues.csv", "n,lambda", rows);

    json j = summary_skeleton(cfg, "spectrum");
    j["lambda1"] = fixed12(sp.lambdas(0));
    if (sp.count() >= 100 && sp.nodes() >= 400) {
      const GrowthFit g = fit_eigen_growth(sp, 10, 100, cfg.alpha / cfg.d);
      j["growth"] = {{"slope", fixed12(g.fit.slope)},
                     {"stderr", fixed12(g.fit.slope_stderr)},
                     {"ratio_min", fixed12(g.ratio_min)},
                     {"ratio_max", fixed12(g.ratio_max)},
                     {"expected", fixed12(cfg.alpha / cfg.d)}};
    }
    if (k == o.size()) {
      std::vector<std::vector<double>> trows;
      std::vector<double> ts = geomspace(0.05, 1.0, 13), trs;
      for (double t : ts) {
        trs.push_back(heat_trace(sp, t));
        trows.push_back({t, trs.back()});
      }
      write_csv(out / "trace.csv", "t,trace", trows);
      j["trace_slope"] = fixed12(fit_loglog(ts, trs).slope);
      j["trace_slope_expected"] = fixed12(-double(cfg.d) / cfg.alpha);
    }
    return j;
  }

  json groundstate() const {
    const DiscreteOperator o = op();
    const Grid& g = o.grid;
    const GroundState gs = ground_state_inverse_iteration(o, cfg.tol, 500);
    std::vector<std::vector<double>> rows;
    for (long i = 0; i < g.size(); ++i)
      rows.push_back({g.coords[i][0], cfg.d == 2 ? g.coords[i][1] : 0.0, gs.phi(i)});
    write_csv(out / "groundstate.csv", "x0,x1,phi", rows);

    const RieszKernel K = build_riesz_kernel(o);
    const RieszResidual res = riesz_residual(gs.phi, gs.lambda1, K, g);
    const LineFit dec = fit_decay(gs.phi, g, cfg.R / 8.0, cfg.R / 2.0, 20);

    json j = summary_skeleton(cfg, "groundstate");
    j["lambda1"] = fixed12(gs.lambda1);
    j["iterations"] = gs.iterations;
    j["decay_slope"] = fixed12(dec.slope);
    j["decay_expected"] = fixed12(cfg.alpha - cfg.d);
    j["riesz_residual_interior"] = fixed12(res.max_interior);
    if (cfg.d == 1) {
      const RieszResidual corr =
          riesz_residual_truncation_corrected(gs.phi, gs.lambda1, K, o);
      j["riesz_residual_interior_corrected"] = fixed12(corr.max_interior);
    }
    const BootstrapInfo bi = bootstrap_steps(cfg.alpha, cfg.beta, cfg.d);
    j["bootstrap_steps"] = bi.k;
    j["log_correction"] = bi.log_flag;
    return j;
  }

  json heatkernel() const {
    const DiscreteOperator o = op();
    const Grid& g = o.grid;
    const Spectrum sp = solve_spectrum(o, o.size());
    Eigen::VectorXd V;
    double expected;
    if (cfg.beta >= 2 * cfg.alpha) {
      V = sp.phis.col(0);  // phi^{(beta/2alpha) ^ 1} = phi
      expected = -double(cfg.d) / cfg.alpha;
    } else {
      V.resize(g.size());
      for (long i = 0; i < g.size(); ++i)
        V(i) = std::pow(1.0 + g.radii(i), cfg.alpha - cfg.d);
      expected = -(cfg.d + cfg.beta - 2 * cfg.alpha) / (cfg.beta - cfg.alpha);
    }
    const double floor = resolution_floor(g.h(), cfg.alpha);
    const SupRatioFit f = sup_ratio_fit(sp, V, geomspace(floor, 1.0, 8), floor);
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < f.t.size(); ++i) rows.push_back({f.t[i], f.m[i]});
    write_csv(out / "sup_ratio.csv", "t,m", rows);

    json j = summary_skeleton(cfg, "heatkernel");
    j["t_floor"] = fixed12(floor);
    j["slope"] = fixed12(f.fit.slope);
    j["slope_stderr"] = fixed12(f.fit.slope_stderr);
    j["slope_expected"] = fixed12(expected);
    const IuRatio iu = iu_min_ratio(kernel_eval(sp, 1.0), sp.phis.col(0));
    j["iu_t1"] = {{"min_ratio", fixed12(iu.min_ratio)},
                  {"max_ratio", fixed12(iu.max_ratio)}};
    return j;
  }

  json inequalities() const {
    const DiscreteOperator o = op();
    const Grid& g = o.grid;
    const TestFamily fam = build_test_family(g);
    json j = summary_skeleton(cfg, "inequalities");

    const RatioReport hardy = hardy_ratio(o, fam);
    j["hardy_max_ratio"] = fixed12(hardy.max_ratio);

    const Spectrum sp = solve_spectrum(o, o.size());
    Eigen::VectorXd V(g.size());
    const double p = std::min(cfg.beta / (2 * cfg.alpha), 1.0);
    for (long i = 0; i < g.size(); ++i) V(i) = std::pow(sp.phis.col(0)(i), p);

    const NashRegime regime =
        cfg.beta >= 2 * cfg.alpha ? NashRegime::HighBeta : NashRegime::MidBeta;
    const RatioReport nash = nash_ratio(o, fam, regime, cfg.beta, V);
    j["nash_regime"] = regime == NashRegime::HighBeta ? "high" : "mid";
    j["nash_max_ratio"] = fixed12(nash.max_ratio);

    const double gamma = 0.0;
    const RatioReport ckn = ckn_ratio(o, fam, ckn_tau(cfg.alpha, cfg.d, gamma), gamma);
    j["ckn_max_ratio"] = fixed12(ckn.max_ratio);

    j["lyapunov_violation"] =
        fixed12(lyapunov_check(sp, V, {0.1, 0.5, 1.0, 2.0}));

    const std::vector<double> s_list = geomspace(1e-2, 10.0, 16);
    const std::vector<double> be = super_poincare_empirical(o, fam, s_list);
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < s_list.size(); ++i) rows.push_back({s_list[i], be[i]});
    write_csv(out / "beta_emp.csv", "s,beta_emp", rows);
    j["beta0_predicted_slope"] =
        fixed12(beta0_predicted_slope(cfg.alpha, cfg.beta, cfg.d));
    return j;
  }

  json classify() const {
    const CompactnessVerdict v = classify_compactness(make_weight(cfg), cfg.alpha, cfg.d);
    json j = summary_skeleton(cfg, "classify");
    j["verdict"] = to_string(v.verdict);
    j["psi1_limit"] = fixed12(v.psi1_limit);
    j["integral_test_value"] = fixed12(v.integral_test_value);
    j["tail_decay_exponent"] = fixed12(v.tail_decay_exponent);
    j["sup_ratio_W_over_power"] = fixed12(v.sup_ratio_W_over_power);
    return j;
  }

  json falsify() const {
    const DiscreteOperator o = op();
    const std::vector<double> ls = geomspace(cfg.R / 32.0, cfg.R / 4.0, 8);
    const FalsifierSlopes s = falsifier_scalings(o, ls);
    json j = summary_skeleton(cfg, "falsify");
    j["mass_slope"] = fixed12(s.mass.slope);
    j["energy_slope"] = fixed12(s.energy.slope);
    j["energy_slope_expected"] = fixed12(cfg.d - cfg.alpha);
    j["psi_mass_slope"] = fixed12(s.psi_mass.slope);
    return j;
  }

  json mc_compare() const {
    const DiscreteOperator o = op();
    const Grid& g = o.grid;
    const Spectrum sp = solve_spectrum(o, o.size());
    const Point x0{0.0, 0.0};
    const PathEnsemble ens = simulate_ensemble(
        x0, cfg.d, make_weight(cfg), o.box_halfwidth(), cfg.alpha, cfg.mc_t,
        cfg.mc_paths, cfg.mc_s_end, cfg.mc_ds, cfg.seed);
    json j = summary_skeleton(cfg, "mc-compare");
    j["insufficient_horizon"] = ens.insufficient_horizon;
    json per_t = json::array();
    for (size_t k = 0; k < cfg.mc_t.size(); ++k) {
      const CompareResult r = empirical_compare(ens, sp, g, g.origin_index(),
                                                k, cfg.mc_cells);
      std::vector<std::vector<double>> rows;
      for (size_t c = 0; c < r.cell_centers.size(); ++c)
        rows.push_back({r.cell_centers[c], r.empirical_mass[c],
                        r.spectral_mass[c], r.mass_stderr[c]});
      write_csv(out / ("cells_t" + std::to_string(k) + ".csv"),
                "cell_center,empirical_mass,spectral_mass,stderr", rows);
      per_t.push_back({{"t", fixed12(cfg.mc_t[k])},
                       {"tv_distance", fixed12(r.tv)},
                       {"tv_stderr", fixed12(r.tv_stderr)},
                       {"survivors", r.survivors},
                       {"survival_empirical", fixed12(r.survival_emp)},
                       {"survival_spectral", fixed12(r.survival_spectral)}});
    }
    j["comparisons"] = per_t;
    return j;
  }

  json report_all() const {
    json j = summary_skeleton(cfg, "report-all");
    j["spectrum"] = spectrum();
    j["groundstate"] = groundstate();
    j["heatkernel"] = heatkernel();
    j["inequalities"] = inequalities();
    j["classify"] = classify();
    j["falsify"] = falsify();
    j["mc_compare"] = mc_compare();
    return j;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fracheat-lab: weighted fractional Laplacian experiments"};
  app.require_subcommand(1);
  Cfg cfg;

  std::string config_path;
  app.add_option("--config", config_path, "INI config file");
  // apply the config file first so command-line flags override it
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) config_path = argv[i + 1];
    else if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
  }
  if (!config_path.empty()) {
    try {
      apply_config(cfg, config_path);
    } catch (const std::exception& e) {
      json err = {{"error", "invalid config"}, {"detail", e.what()}};
      std::fprintf(stderr, "%s\n", err.dump().c_str());
      return 2;
    }
  }

  app.add_option("--grid.d", cfg.d, "dimension (1 or 2)")->capture_default_str();
  app.add_option("--grid.R", cfg.R, "box half-width")->capture_default_str();
  app.add_option("--grid.n", cfg.n, "nodes per axis (odd)")->capture_default_str();
  app.add_option("--frac.alpha", cfg.alpha, "stability index")->capture_default_str();
  app.add_option("--weight.variant", cfg.variant, "power | stretched")
      ->capture_default_str();
  app.add_option("--weight.beta", cfg.beta, "weight growth exponent (required)");
  app.add_option("--weight.delta", cfg.delta, "stretch parameter")->capture_default_str();
  app.add_option("--weight.c1", cfg.c1, "stretched prefactor")->capture_default_str();
  app.add_option("--weight.c3", cfg.c3, "stretched exponent constant")
      ->capture_default_str();
  app.add_option("--solver.k_eigs", cfg.k_eigs, "modes to keep (0 = all)")
      ->capture_default_str();
  app.add_option("--solver.tol", cfg.tol, "iteration tolerance")->capture_default_str();
  app.add_option("--mc.n_paths", cfg.mc_paths, "Monte Carlo paths")->capture_default_str();
  app.add_option("--mc.ds", cfg.mc_ds, "parent-time step")->capture_default_str();
  app.add_option("--mc.s_end", cfg.mc_s_end, "parent-time horizon")->capture_default_str();
  app.add_option("--mc.t_points", cfg.mc_t, "mu-times (sorted)")->capture_default_str();
  app.add_option("--mc.cells", cfg.mc_cells, "histogram cells")->capture_default_str();
  app.add_option("--seed", cfg.seed, "master RNG seed")->capture_default_str();
  app.add_option("--workers", cfg.workers, "parallelism cap")->capture_default_str();
  app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  bool print_config = false;
  app.add_flag("--print-config", print_config, "dump resolved config and exit");

  for (const char* name : {"spectrum", "groundstate", "heatkernel", "inequalities",
                           "classify", "falsify", "mc-compare", "report-all"})
    app.add_subcommand(name)->configurable(false)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    json err = {{"error", "invalid config"}, {"detail", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  }
  const std::string experiment = app.get_subcommands().front()->get_name();

  try {
    validate(cfg, experiment);
  } catch (const std::exception& e) {
    json err = {{"error", "invalid config"}, {"detail", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  }

  if (print_config) {
    std::printf("%s\n", config_json(cfg).dump(2).c_str());
    return 0;
  }

  try {
    Lab lab{cfg, fs::path(cfg.out)};
    fs::create_directories(lab.out);
    json j;
    if (experiment == "spectrum") j = lab.spectrum();
    else if (experiment == "groundstate") j = lab.groundstate();
    else if (experiment == "heatkernel") j = lab.heatkernel();
    else if (experiment == "inequalities") j = lab.inequalities();
    else if (experiment == "classify") j = lab.classify();
    else if (experiment == "falsify") j = lab.falsify();
    else if (experiment == "mc-compare") j = lab.mc_compare();
    else j = lab.report_all();
    write_json(lab.out / (experiment + ".json"), j);
    std::printf("%s\n", j.dump(2).c_str());
  } catch (const std::exception& e) {
    json err = {{"error", "numerical failure"}, {"detail", e.what()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 3;
  }
  return 0;
}
