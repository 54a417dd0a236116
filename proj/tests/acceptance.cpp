// Acceptance checks: one PASS/FAIL line per criterion.

#include "herald/analytic.hpp"
#include "herald/design.hpp"
#include "herald/detector.hpp"
#include "herald/multiplex.hpp"
#include "herald/noise_opt.hpp"
#include "herald/oracle.hpp"
#include "herald/parallel.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace herald;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const std::string& what) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what + (ok ? "" : " [miss]");
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome criterion1() {
  Outcome o;
  const double a = double_herald_prob_ideal(1, 0.5);
  const double b = double_herald_prob_ideal(2, 1.0 / 3.0);
  const double c = double_herald_prob_ideal(1000, 1.0 / 1001.0);
  const double rel = std::abs(c / std::exp(-2.0) - 1.0);
  note(o, std::abs(a - 0.0625) <= 1e-12, "M=1 " + fmt("%.15g", a));
  note(o, std::abs(b - std::pow(2.0 / 3.0, 6)) <= 1e-12, "M=2 " + fmt("%.15g", b));
  note(o, rel <= 2e-3, "M=1000 rel " + fmt("%.3e", rel));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = Clock::now();
  std::vector<HeraldConfig> configs;
  std::size_t model_points = 0;
  for (int M = 1; M <= 3; ++M)
    for (double mu : {0.01, 0.1, 0.3})
      for (double eta : {0.7, 0.9, 1.0}) {
        HeraldConfig cfg;
        cfg.M = M;
        cfg.eta = eta;
        cfg.squeezing = SqueezingParam::from_mu(mu);
        for (int K : {1, 3})
          for (double pd : {0.0, 1e-4}) {
            cfg.detector = GeneralizedDetector::from_model(DetectorModel(eta, pd, K));
            configs.push_back(cfg);
            ++model_points;
          }
        cfg.detector = GeneralizedDetector::perfect_pnr();
        configs.push_back(cfg);
      }
  // Default oracle cutoff (tail 1e-13), plus the smallest cutoff with tail below 1e-8 for reference.
  std::vector<std::array<double, 3>> err(configs.size());
  std::vector<double> loose(configs.size());
  std::vector<int> cutoffs(configs.size());
  std::vector<double> tails(configs.size());
  parallel_for(configs.size(), [&](std::size_t i) {
    const auto& cfg = configs[i];
    const double lambda = cfg.squeezing.lambda();
    cutoffs[i] = auto_cutoff(cfg.M, lambda, 1e-13);
    double kept = 0.0;
    for (int n = 0; n <= cutoffs[i] / 2; ++n) kept += pair_pmf(cfg.M, n, lambda);
    tails[i] = 1.0 - kept;
    const auto orc = oracle_herald(cfg, cutoffs[i]);
    const auto ana = evaluate_herald(cfg);
    err[i] = {std::abs(orc.true_prob - ana.true_prob), std::abs(orc.raw_single - ana.raw_single),
              std::abs(orc.fidelity - ana.fidelity)};
    const auto tight = oracle_herald(cfg, auto_cutoff(cfg.M, lambda, 1e-8));
    loose[i] = std::max({std::abs(tight.true_prob - ana.true_prob), std::abs(tight.raw_single - ana.raw_single),
                         std::abs(tight.fidelity - ana.fidelity)});
  });
  std::array<double, 3> worst{0, 0, 0};
  for (const auto& e : err)
    for (int k = 0; k < 3; ++k) worst[k] = std::max(worst[k], e[k]);
  const double elapsed = seconds_since(t0);
  note(o, model_points == 108, std::to_string(model_points) + " detector-model points + " +
                                   std::to_string(configs.size() - model_points) + " ideal-PNR points");
  note(o, *std::max_element(tails.begin(), tails.end()) < 1e-8,
       "tail " + fmt("%.1e", *std::max_element(tails.begin(), tails.end())));
  note(o, worst[0] <= 1e-6, "P " + fmt("%.2e", worst[0]));
  note(o, worst[1] <= 1e-6, "Pbar " + fmt("%.2e", worst[1]));
  note(o, worst[2] <= 1e-6, "F " + fmt("%.2e", worst[2]));
  note(o, elapsed < 60.0, "max cutoff " + std::to_string(*std::max_element(cutoffs.begin(), cutoffs.end())) +
                              ", " + fmt("%.1f s", elapsed));
  o.detail += "; at tail 1e-8 cutoff worst " + fmt("%.2e", *std::max_element(loose.begin(), loose.end()));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int K = 1; K <= 8; ++K)
    for (double eta : {0.1, 0.5, 0.8, 0.95, 1.0})
      for (double pd : {0.0, 1e-6, 1e-3, 0.01, 0.2}) {
        const DetectorModel model(eta, pd, K);
        const auto det = GeneralizedDetector::from_model(model);
        for (int n = 0; n <= 20; ++n) {
          worst = std::max(worst, std::abs(p_zero_click(det, eta, n) - click_pmf(model, 0, n)));
          worst = std::max(worst, std::abs(p_single_click(det, eta, n) - click_pmf(model, 1, n)));
        }
      }
  note(o, worst <= 1e-13, "closed forms vs chain " + fmt("%.2e", worst));
  const DetectorModel model(0.8, 0.01, 3);
  const std::int64_t shots = 1000000;
  double worst_sigma = 0.0;
  for (int n = 0; n <= 5; ++n) {
    const auto pmf = monte_carlo_clicks(model, n, shots, 1000 + static_cast<std::uint64_t>(n));
    for (int m = 0; m <= 3; ++m) {
      const double p = click_pmf(model, m, n);
      const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
      const double dev = std::abs(pmf[static_cast<std::size_t>(m)] - p);
      worst_sigma = std::max(worst_sigma, sigma > 0.0 ? dev / sigma : (dev > 0.0 ? INFINITY : 0.0));
    }
  }
  note(o, worst_sigma <= 4.0, "Monte Carlo " + fmt("%.2f sigma", worst_sigma));
  const double elapsed = seconds_since(t0);
  note(o, elapsed < 30.0, fmt("%.1f s", elapsed));
  return o;
}

Outcome criterion4() {
  Outcome o;
  auto count = [](double eta, double alpha, double F, double eta_h, int M, Topology t) {
    DesignQuery q;
    q.topology = t;
    q.M = M;
    q.eta = eta;
    q.alpha = alpha;
    q.fidelity_target = F;
    q.eta_h = eta_h;
    return plan_sources(q).sources;
  };
  struct Case {
    const char* name;
    double eta, alpha, F, eta_h;
    int M;
    Topology topology;
    int expected;
  };
  const Case cases[] = {
      {"eta=.9 F=.90 eta_h=.99", 0.9, 1.0, 0.90, 0.99, 1, Topology::complete, 44},
      {"eta=.95 F=.99 eta_h=.25", 0.95, 1.0, 0.99, 0.25, 1, Topology::complete, 22},
      {"alpha=1", 0.9, 1.0, 0.99, 0.5, 1, Topology::complete, 75},
      {"alpha=2/3", 0.9, 2.0 / 3.0, 0.99, 0.5, 1, Topology::complete, 114},
      {"alpha=0", 0.9, 0.0, 0.99, 0.5, 1, Topology::complete, 335},
      {"bipartite M=2 N/2", 0.9, 1.0, 0.99, 0.5, 2, Topology::bipartite, 41},
  };
  for (const auto& c : cases) {
    const auto s = count(c.eta, c.alpha, c.F, c.eta_h, c.M, c.topology);
    const int got = c.topology == Topology::bipartite ? s.count / 2 : s.count;
    note(o, std::abs(got - c.expected) <= 1,
         std::string(c.name) + " " + std::to_string(got) + " vs " + std::to_string(c.expected) + " (" +
             fmt("%.2f", c.topology == Topology::bipartite ? s.real / 2 : s.real) + ")");
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto rep = oracle_noon_swap(4);
  note(o, std::abs(rep.success_probability - 0.125) <= 1e-12, "success " + fmt("%.15g", rep.success_probability));
  note(o, std::abs(rep.fidelity - 1.0) <= 1e-10, "fidelity " + fmt("%.15g", rep.fidelity));
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (int N : {2, 3}) {
    std::vector<double> diff(20);
    parallel_for(diff.size(), [&](std::size_t s) { diff[s] = oracle_symmetry(N, 1 + s, 0.2); });
    const double worst = *std::max_element(diff.begin(), diff.end());
    note(o, worst <= 1e-10, "N=" + std::to_string(N) + " " + fmt("%.2e", worst));
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const double d1 = 1e-4;
  const double d2 = default_delta2(1.0, d1);
  const double bound = std::pow((1 - d2) / (d1 + 1 - d2), 2);
  const auto best = max_fidelity_noise(1, 1.0, 1.0, d1, d2);
  note(o, std::abs(best.fidelity - bound) <= 1e-6, "ceiling " + fmt("%.3e", std::abs(best.fidelity - bound)));

  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<int> modes(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int missing = 0;
  for (int i = 0; i < 200; ++i) {
    const int M = modes(rng);
    const double eta = 0.5 + 0.5 * unit(rng);
    const double alpha = unit(rng);
    const double delta1 = std::pow(10.0, -8.0 + 6.0 * unit(rng));
    const double delta2 = default_delta2(alpha, delta1);
    const auto mu0 = min_mu_noise(M, eta, alpha, delta1, delta2);
    auto f = [&](double mu) { return noisy_fidelity(M, eta, alpha, delta1, delta2, mu); };
    auto s = [&](double mu) { return noisy_fidelity_log_slope(M, eta, alpha, delta1, delta2, mu); };
    const double argmax = golden_section_argmax(f, 1e-10, 1e3, s).mu;
    if (!mu0) {
      ++missing;
      continue;
    }
    worst = std::max(worst, std::abs(*mu0 / argmax - 1.0));
  }
  note(o, missing == 0, std::to_string(200 - missing) + "/200 roots");
  note(o, worst <= 1e-7, "argmax rel " + fmt("%.2e", worst));
  return o;
}

Outcome criterion8() {
  Outcome o;
  double complete_rt = 0.0;
  double bipartite_rt = 0.0;
  double bisect = 0.0;
  for (double p : {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5})
    for (double eta_h : {0.25, 0.5, 0.8, 0.99}) {
      const auto c = complete_required_n(p, eta_h);
      complete_rt = std::max(complete_rt, std::abs(complete_prob(c.real, p) - eta_h));
      bisect = std::max(bisect, std::abs(c.real - complete_required_n_bisect(p, eta_h)));
      const auto b = bipartite_required_n(p, eta_h);
      bipartite_rt = std::max(bipartite_rt, std::abs(bipartite_prob_real(b.real, p) - eta_h));
    }
  note(o, complete_rt <= 1e-9, "complete " + fmt("%.2e", complete_rt));
  note(o, bipartite_rt <= 1e-9, "bipartite " + fmt("%.2e", bipartite_rt));
  note(o, bisect <= 1e-6, "Lambert vs bisection " + fmt("%.2e", bisect));
  return o;
}

Outcome criterion9() {
  Outcome o;
  for (double lambda : {0.1, 1.0 / 3.0}) {
    const double f = oracle_four_photon_fraction(lambda).fraction;
    note(o, std::abs(f - 0.4) <= 1e-10, "lambda=" + fmt("%.4g", lambda) + " " + fmt("%.2e", std::abs(f - 0.4)));
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
