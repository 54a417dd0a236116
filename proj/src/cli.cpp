#include "herald/cli.hpp"

#include "herald/analytic.hpp"
#include "herald/design.hpp"
#include "herald/detector.hpp"
#include "herald/figures.hpp"
#include "herald/noise_opt.hpp"
#include "herald/oracle.hpp"
#include "herald/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace herald {

namespace {

constexpr double kVerifyTol = 1e-6;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Fields = std::vector<std::pair<std::string, nlohmann::ordered_json>>;

struct DetectorFlags {
  std::string pnr = "ideal";
  std::optional<double> alpha;
  std::optional<double> delta0;
  std::optional<double> delta1;
  std::optional<double> delta2;
  std::optional<double> pd;
};

void add_detector_flags(CLI::App* cmd, DetectorFlags& f) {
  cmd->add_option("--pnr", f.pnr, "ideal or k=<SPD count>")->capture_default_str();
  cmd->add_option("--alpha", f.alpha, "PNR availability (decoupled detector)");
  cmd->add_option("--delta0", f.delta0, "zero-click noise probability (decoupled detector)");
  cmd->add_option("--delta1", f.delta1, "single-click noise probability (decoupled detector)");
  cmd->add_option("--delta2", f.delta2, "noise term of a signal click (decoupled detector)");
  cmd->add_option("--pd", f.pd, "dark-count probability per SPD, with --pnr k=<K>");
}

GeneralizedDetector build_detector(const DetectorFlags& f, double eta) {
  if (f.pnr == "ideal") {
    if (f.pd) throw UsageError("--pd needs --pnr k=<K>");
    const double alpha = f.alpha.value_or(1.0);
    const double d0 = f.delta0.value_or(0.0);
    const double d1 = f.delta1.value_or(0.0);
    double d2 = f.delta2.value_or(0.0);
    if (!f.delta2 && d1 > 0.0) d2 = default_delta2(alpha, d1);
    if (alpha >= 1.0) return GeneralizedDetector::perfect_pnr(d0, d1, d2);
    return GeneralizedDetector::decoupled(alpha, d0, d1, d2);
  }
  if (f.pnr.rfind("k=", 0) == 0) {
    if (f.alpha || f.delta0 || f.delta1 || f.delta2)
      throw UsageError("--pnr k=<K> derives alpha and the deltas; drop --alpha/--delta*");
    int K = 0;
    try {
      std::size_t pos = 0;
      K = std::stoi(f.pnr.substr(2), &pos);
      if (pos != f.pnr.size() - 2) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw UsageError("--pnr expects ideal or k=<positive integer>");
    }
    return GeneralizedDetector::from_model(DetectorModel(eta, f.pd.value_or(0.0), K));
  }
  throw UsageError("--pnr expects ideal or k=<positive integer>");
}

double effective_alpha(const GeneralizedDetector& d) { return d.ideal_pnr ? 1.0 : d.alpha; }

std::string format_short(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(6) << v;
  return os.str();
}

void print_fields(std::ostream& out, const Fields& fields, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : fields) j[k] = v;
    out << j.dump(2) << '\n';
  } else if (format == "csv") {
    Table t;
    t.rows.emplace_back();
    for (const auto& [k, v] : fields) {
      t.header.push_back(k);
      t.rows[0].push_back(v.get<double>());
    }
    write_csv(out, t);
  } else {
    std::size_t width = 0;
    for (const auto& f : fields) width = std::max(width, f.first.size());
    for (const auto& [k, v] : fields) {
      out << std::left << std::setw(static_cast<int>(width) + 2) << k;
      if (v.is_number_integer()) {
        out << v.get<long long>() << '\n';
      } else {
        out << format_short(v.get<double>()) << '\n';
      }
    }
  }
}

// ---- config file -----------------------------------------------------------

bool has_flag(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    if (key == "modes" && (a == "-M" || a.rfind("-M", 0) == 0)) return true;
  }
  return false;
}

// Appends flags from a flat JSON object for every key not given on the
// command line.
void merge_config(std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (auto it = args.begin(); it != args.end();) {
    if (*it == "--config") {
      if (std::next(it) == args.end()) throw UsageError("--config needs a path");
      path = *std::next(it);
      it = args.erase(it, it + 2);
    } else if (it->rfind("--config=", 0) == 0) {
      path = it->substr(9);
      it = args.erase(it);
    } else {
      ++it;
    }
  }
  if (!path) return;
  std::ifstream in(*path);
  if (!in) throw UsageError("cannot read config file " + *path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw UsageError("config file must hold a flat JSON object");
  const bool squeeze_given = has_flag(args, "mu") || has_flag(args, "lambda") || has_flag(args, "r");
  for (const auto& [key, value] : j.items()) {
    if (has_flag(args, key)) continue;
    if (squeeze_given && (key == "mu" || key == "lambda" || key == "r")) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + key);
    } else if (value.is_number()) {
      args.push_back("--" + key);
      args.push_back(value.is_number_float() ? format_number(value.get<double>()) : value.dump());
    } else if (value.is_string()) {
      args.push_back("--" + key);
      args.push_back(value.get<std::string>());
    } else {
      throw UsageError("config key '" + key + "' must be a scalar");
    }
  }
}

// ---- herald ------------------------------------------------------------------

struct HeraldFlags {
  int modes = 0;
  std::optional<double> mu;
  std::optional<double> lambda;
  std::optional<double> r;
  double eta = 1.0;
  DetectorFlags det;
  std::string format = "json";
  bool verify = false;
  int cutoff = 0;
};

int cmd_herald(const HeraldFlags& f, std::ostream& out, std::ostream& err) {
  if (!f.mu && !f.lambda && !f.r) throw UsageError("one of --mu, --lambda, --r is required");
  HeraldConfig cfg;
  cfg.M = f.modes;
  cfg.eta = f.eta;
  cfg.squeezing = f.mu ? SqueezingParam::from_mu(*f.mu)
                       : (f.lambda ? SqueezingParam::from_lambda(*f.lambda) : SqueezingParam::from_r(*f.r));
  cfg.detector = build_detector(f.det, f.eta);
  cfg.validate();

  const HeraldResult a = evaluate_herald(cfg);
  Fields fields{{"M", cfg.M},
                {"mu", cfg.squeezing.mu()},
                {"lambda", cfg.squeezing.lambda()},
                {"eta", cfg.eta},
                {"alpha", effective_alpha(cfg.detector)},
                {"delta0", cfg.detector.delta0},
                {"delta1", cfg.detector.delta1},
                {"delta2", cfg.detector.delta2},
                {"p_single", a.p_single},
                {"raw_single", a.raw_single},
                {"raw_prob", a.raw_prob},
                {"true_prob", a.true_prob},
                {"fidelity", a.fidelity},
                {"double_herald", a.p_single * a.p_single}};
  int code = kExitOk;
  if (f.verify) {
    HeraldResult o;
    try {
      o = oracle_herald(cfg, f.cutoff);
    } catch (const TruncationError& e) {
      err << "verify: " << e.what() << '\n';
      return kExitCheckFailed;
    }
    const double worst = std::max({std::abs(o.p_single - a.p_single), std::abs(o.raw_single - a.raw_single),
                                   std::abs(o.true_prob - a.true_prob), std::abs(o.fidelity - a.fidelity)});
    fields.insert(fields.end(), {{"oracle_p_single", o.p_single},
                                 {"oracle_raw_single", o.raw_single},
                                 {"oracle_true_prob", o.true_prob},
                                 {"oracle_fidelity", o.fidelity},
                                 {"max_delta", worst}});
    if (!(worst <= kVerifyTol)) {
      err << "verify: oracle disagrees with closed form by " << worst << '\n';
      code = kExitCheckFailed;
    }
  }
  print_fields(out, fields, f.format);
  return code;
}

// ---- multiplex ---------------------------------------------------------------

struct MultiplexFlags {
  std::string topology = "complete";
  int modes = 1;
  double eta = 1.0;
  DetectorFlags det;
  std::optional<double> fidelity_target;
  std::optional<double> eta_h;
  std::string format = "json";
};

int cmd_multiplex(const MultiplexFlags& f, std::ostream& out, std::ostream& err) {
  if (!f.fidelity_target) throw UsageError("--fidelity-target is required");
  if (!f.eta_h) throw UsageError("--eta-h is required");
  const GeneralizedDetector det = build_detector(f.det, f.eta);
  DesignQuery q;
  q.topology = f.topology == "bipartite" ? Topology::bipartite : Topology::complete;
  q.M = f.modes;
  q.eta = f.eta;
  q.alpha = effective_alpha(det);
  q.delta0 = det.delta0;
  q.delta1 = det.delta1;
  q.delta2 = det.delta2;
  q.fidelity_target = *f.fidelity_target;
  q.eta_h = *f.eta_h;
  const DesignResult r = plan_sources(q);
  if (!r.feasible) {
    err << "infeasible: fidelity target " << q.fidelity_target << " exceeds the reachable maximum "
        << r.fidelity_ceiling << '\n';
    return kExitInfeasible;
  }
  Fields fields{{"M", q.M},
                {"eta", q.eta},
                {"alpha", q.alpha},
                {"fidelity_target", q.fidelity_target},
                {"eta_h", q.eta_h},
                {"mu", r.mu},
                {"fidelity", r.fidelity},
                {"p_single", r.p_single},
                {"N_real", r.sources.real},
                {"N", r.sources.count}};
  if (q.topology == Topology::bipartite) fields.emplace_back("spectral_modes", r.sources.count / 2);
  print_fields(out, fields, f.format);
  return kExitOk;
}

// ---- figure ------------------------------------------------------------------

struct FigureFlags {
  std::string id;
  std::string out_path;
  int grid_size = 200;
};

int cmd_figure(const FigureFlags& f, std::ostream& out, std::ostream& err) {
  const auto& ids = figure_ids();
  if (std::find(ids.begin(), ids.end(), f.id) == ids.end()) throw UsageError("unknown figure id '" + f.id + "'");
  FigureOptions opts;
  opts.grid_size = f.grid_size;
  const Table table = figure_table(f.id, opts);
  if (f.out_path.empty()) {
    write_csv(out, table);
    return kExitOk;
  }
  std::ofstream file(f.out_path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "cannot open " << f.out_path << " for writing\n";
    return kExitUsage;
  }
  write_csv(file, table);
  return kExitOk;
}

// ---- oracle-check ------------------------------------------------------------

struct CheckFlags {
  int grid_size = 3;
  int cutoff = 0;
  std::uint64_t seed = 1;
};

struct ScenarioOutcome {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  std::string error;
  bool pass() const { return error.empty() && worst <= tolerance; }
};

std::string sci(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

template <class Fn>
ScenarioOutcome run_scenario(const std::string& name, double tol, Fn&& fn) {
  ScenarioOutcome o{name, 0.0, tol, {}};
  try {
    o.worst = fn();
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  return o;
}

double herald_grid(int grid_size, int cutoff) {
  std::vector<double> mus = grid_size == 3 ? std::vector<double>{0.01, 0.1, 0.3} : logspace(0.01, 0.3, grid_size);
  std::vector<HeraldConfig> configs;
  for (int M = 1; M <= 3; ++M)
    for (double mu : mus)
      for (double eta : {0.7, 0.9, 1.0}) {
        HeraldConfig cfg;
        cfg.M = M;
        cfg.eta = eta;
        cfg.squeezing = SqueezingParam::from_mu(mu);
        for (int K : {1, 3})
          for (double pd : {0.0, 1e-4}) {
            cfg.detector = GeneralizedDetector::from_model(DetectorModel(eta, pd, K));
            configs.push_back(cfg);
          }
        cfg.detector = GeneralizedDetector::perfect_pnr();
        configs.push_back(cfg);
      }
  std::vector<double> worst(configs.size(), 0.0);
  parallel_for(configs.size(), [&](std::size_t i) {
    const HeraldResult o = oracle_herald(configs[i], cutoff);
    const HeraldResult a = evaluate_herald(configs[i]);
    worst[i] = std::max({std::abs(o.true_prob - a.true_prob), std::abs(o.raw_single - a.raw_single),
                         std::abs(o.fidelity - a.fidelity)});
  });
  return *std::max_element(worst.begin(), worst.end());
}

int cmd_oracle_check(const CheckFlags& f, std::ostream& out) {
  if (f.grid_size < 2) throw UsageError("--grid-size must be at least 2");
  std::vector<ScenarioOutcome> results;
  results.push_back(run_scenario("herald-grid", 1e-6, [&] { return herald_grid(f.grid_size, f.cutoff); }));
  results.push_back(run_scenario("swap-herald", 1e-10, [] {
    const auto rep = oracle_swap_herald(0.2);
    double w = 0.0;
    for (const auto& p : rep.patterns)
      w = std::max({w, std::abs(p.overlap - 1.0), std::abs(p.bell_fraction - 0.5), std::abs(p.weight_ratio - 1.0)});
    return w;
  }));
  results.push_back(run_scenario("noon-swap", 1e-12, [] {
    const auto rep = oracle_noon_swap(4);
    return std::max({std::abs(rep.success_probability - 0.125), std::abs(rep.fidelity - 1.0),
                     rep.error_term_acceptance});
  }));
  results.push_back(run_scenario("four-photon", 1e-10, [] {
    double w = 0.0;
    for (double lambda : {0.1, 1.0 / 3.0}) w = std::max(w, std::abs(oracle_four_photon_fraction(lambda).fraction - 0.4));
    return w;
  }));
  results.push_back(run_scenario("symmetry", 1e-10, [&] {
    double w = 0.0;
    for (int N : {2, 3})
      for (std::uint64_t s = f.seed; s < f.seed + 3; ++s) w = std::max(w, oracle_symmetry(N, s, 0.2));
    return w;
  }));

  bool ok = true;
  for (const auto& r : results) {
    out << std::left << std::setw(14) << r.name << (r.pass() ? "PASS" : "FAIL") << "  worst " << sci(r.worst)
        << "  tol " << sci(r.tolerance);
    if (!r.error.empty()) out << "  error: " << r.error;
    out << '\n';
    ok = ok && r.pass();
  }
  out << (ok ? "all scenarios passed" : "oracle check failed") << '\n';
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design and verification tools for double-heralded SPDC pair sources", "herald"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.add_option("--config", "flat JSON file of flag values; command-line flags take precedence");

  const std::vector<std::string> formats{"json", "table", "csv"};

  HeraldFlags hf;
  auto* herald_cmd = app.add_subcommand("herald", "closed-form heralding rates and fidelity for one configuration");
  herald_cmd->add_option("-M,--modes", hf.modes, "TMSV sources per array")->required()->check(CLI::PositiveNumber);
  auto* o_mu = herald_cmd->add_option("--mu", hf.mu, "mean photon number per mode");
  auto* o_lambda = herald_cmd->add_option("--lambda", hf.lambda, "tanh^2 r");
  auto* o_r = herald_cmd->add_option("--r", hf.r, "squeezing parameter r");
  o_mu->excludes(o_lambda)->excludes(o_r);
  o_lambda->excludes(o_r);
  herald_cmd->add_option("--eta", hf.eta, "overall efficiency")->capture_default_str();
  add_detector_flags(herald_cmd, hf.det);
  herald_cmd->add_option("--format", hf.format)->check(CLI::IsMember(formats))->capture_default_str();
  herald_cmd->add_flag("--verify", hf.verify, "cross-check against the Fock-space oracle");
  herald_cmd->add_option("--cutoff", hf.cutoff, "oracle photon cutoff (default: automatic)");

  MultiplexFlags mf;
  auto* mux_cmd = app.add_subcommand("multiplex", "required number of multiplexed arrays");
  mux_cmd->add_option("--topology", mf.topology)
      ->check(CLI::IsMember({"complete", "bipartite"}))
      ->capture_default_str();
  mux_cmd->add_option("-M,--modes", mf.modes, "TMSV sources per array")->check(CLI::PositiveNumber)->capture_default_str();
  mux_cmd->add_option("--eta", mf.eta, "overall efficiency")->capture_default_str();
  add_detector_flags(mux_cmd, mf.det);
  mux_cmd->add_option("--fidelity-target", mf.fidelity_target, "target heralded pair fidelity");
  mux_cmd->add_option("--eta-h", mf.eta_h, "target double-herald probability");
  mux_cmd->add_option("--format", mf.format)->check(CLI::IsMember(formats))->capture_default_str();

  FigureFlags ff;
  auto* fig_cmd = app.add_subcommand("figure", "write figure data as CSV");
  fig_cmd->add_option("id", ff.id, "fig4, fig5, fig6, fig8, fig9 or fig10")->required();
  fig_cmd->add_option("--out", ff.out_path, "output path (default: stdout)");
  fig_cmd->add_option("--grid-size", ff.grid_size, "points per axis for fig6")->capture_default_str();

  CheckFlags cf;
  auto* check_cmd = app.add_subcommand("oracle-check", "run every oracle scenario against the closed forms");
  check_cmd->add_option("--grid-size", cf.grid_size, "mean photon number points in the herald grid")
      ->capture_default_str();
  check_cmd->add_option("--cutoff", cf.cutoff, "force the herald-grid photon cutoff");
  check_cmd->add_option("--seed", cf.seed, "first seed of the random unitaries")->capture_default_str();

  try {
    merge_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*herald_cmd) return cmd_herald(hf, out, err);
    if (*mux_cmd) return cmd_multiplex(mf, out, err);
    if (*fig_cmd) return cmd_figure(ff, out, err);
    return cmd_oracle_check(cf, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace herald
