#include "herald/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace herald {

namespace {

void require_modes(int M) {
  if (M < 1) throw std::invalid_argument("M must be at least 1");
}

void require_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}

double effective_alpha(const GeneralizedDetector& det) { return det.ideal_pnr ? 1.0 : det.alpha; }

// (1+eta mu)^M (1+alpha eta mu) / (1+mu)^(M+1), the square root of the
// noiseless fidelity.
double sqrt_fidelity_noiseless(int M, double eta, double alpha, double mu) {
  const double num = M * std::log1p(eta * mu) + std::log1p(alpha * eta * mu);
  return std::exp(num - (M + 1) * std::log1p(mu));
}

}  // namespace

SqueezingParam SqueezingParam::from_mu(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be finite and non-negative");
  return SqueezingParam(mu);
}

SqueezingParam SqueezingParam::from_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in [0,1)");
  return SqueezingParam(lambda / (1.0 - lambda));
}

SqueezingParam SqueezingParam::from_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be finite and non-negative");
  const double s = std::sinh(r);
  return SqueezingParam(s * s);
}

double SqueezingParam::lambda() const { return mu_ / (1.0 + mu_); }
double SqueezingParam::r() const { return std::asinh(std::sqrt(mu_)); }

void HeraldConfig::validate() const {
  require_modes(M);
  require_unit(eta, "eta");
  detector.validate();
}

double pair_pmf(int s, int n, double lambda) {
  if (s < 1) throw std::invalid_argument("s must be at least 1");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in [0,1)");
  if (n < 0) return 0.0;
  if (lambda == 0.0) return n == 0 ? 1.0 : 0.0;
  const double log_binom = std::lgamma(n + s) - std::lgamma(s) - std::lgamma(n + 1.0);
  if (n + s <= 60) {
    double c = 1.0;
    for (int i = 1; i < s; ++i) c = c * (n + i) / i;
    return c * std::pow(1.0 - lambda, s) * std::pow(lambda, n);
  }
  return std::exp(log_binom + s * std::log1p(-lambda) + n * std::log(lambda));
}

double herald_prob_ideal(int M, double lambda) {
  require_modes(M);
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in [0,1)");
  return M * std::pow(1.0 - lambda, M) * lambda;
}

double optimal_mu_ideal(int M) {
  require_modes(M);
  return 1.0 / M;
}

double double_herald_prob_ideal(int M, double lambda) {
  const double p = herald_prob_ideal(M, lambda);
  return p * p;
}

double double_herald_bound(int M) {
  require_modes(M);
  return std::pow(static_cast<double>(M) / (M + 1), 2 * M + 2);
}

double bell_success_fraction(int M) {
  if (M < 2) throw std::invalid_argument("Bell distribution needs M >= 2");
  return static_cast<double>(M - 1) / M;
}

double true_pair_prob(const HeraldConfig& cfg) {
  cfg.validate();
  const auto& d = cfg.detector;
  const double mu = cfg.squeezing.mu();
  const double eff = cfg.eta * (1.0 - d.delta2) + d.delta1 * (1.0 - cfg.eta);
  if (mu == 0.0 || eff == 0.0) return 0.0;
  const double nu0_pow = cfg.M == 1 ? 1.0 : std::pow(1.0 - d.delta0, 2 * cfg.M - 2);
  return nu0_pow * std::exp(2.0 * std::log(mu * eff) - (2 + 2 * cfg.M) * std::log1p(mu));
}

double raw_single_herald_prob(const HeraldConfig& cfg) {
  cfg.validate();
  const auto& d = cfg.detector;
  const double alpha = effective_alpha(d);
  const double x = cfg.eta * cfg.squeezing.mu();
  const double nu0_pow = cfg.M == 1 ? 1.0 : std::pow(1.0 - d.delta0, cfg.M - 1);
  const double num = (1.0 - d.delta2) * x + d.delta1 * (1.0 + alpha * x);
  const double den = std::pow(1.0 + x, cfg.M) * (1.0 + alpha * x);
  return nu0_pow * num / den;
}

double single_herald_prob(const HeraldConfig& cfg) { return cfg.M * raw_single_herald_prob(cfg); }

double heralded_fidelity(const HeraldConfig& cfg) {
  const double raw = raw_single_herald_prob(cfg);
  if (!(raw > 0.0)) throw std::domain_error("raw herald probability is zero; fidelity undefined");
  const auto& d = cfg.detector;
  const double alpha = effective_alpha(d);
  const double mu = cfg.squeezing.mu();
  const double x = cfg.eta * mu;
  // The (1-delta0) factors cancel between P and raw^2.
  const double prefactor = std::exp(2 * cfg.M * std::log1p(x) + 2.0 * std::log1p(alpha * x) -
                                    (2 + 2 * cfg.M) * std::log1p(mu));
  const double top = d.delta1 * (1.0 - cfg.eta) * mu + (1.0 - d.delta2) * x;
  const double bottom = d.delta1 * (1.0 + alpha * x) + (1.0 - d.delta2) * x;
  const double ratio = top / bottom;
  return prefactor * ratio * ratio;
}

HeraldResult evaluate_herald(const HeraldConfig& cfg) {
  HeraldResult r;
  r.raw_single = raw_single_herald_prob(cfg);
  r.p_single = cfg.M * r.raw_single;
  r.raw_prob = r.raw_single * r.raw_single;
  r.true_prob = true_pair_prob(cfg);
  r.fidelity = r.raw_prob > 0.0 ? heralded_fidelity(cfg) : 0.0;
  return r;
}

double fidelity_ideal_pnr(int M, double eta, double mu) {
  require_modes(M);
  const double s = sqrt_fidelity_noiseless(M, eta, 1.0, mu);
  return s * s;
}

double mu_max_pnr(int M, double eta, double F_target) {
  require_modes(M);
  require_unit(eta, "eta");
  if (!(F_target > 0.0 && F_target < 1.0)) throw std::invalid_argument("fidelity target must lie in (0,1)");
  const double cap = 1.0 / M;
  if (std::pow(eta, 2 + 2 * M) >= F_target) return cap;
  const double x = std::pow(F_target, 1.0 / (2 + 2 * M));
  return std::min((1.0 - x) / (x - eta), cap);
}

double mu_max_general(int M, double eta, double alpha, double F_target) {
  require_modes(M);
  require_unit(eta, "eta");
  require_unit(alpha, "alpha");
  if (!(F_target > 0.0 && F_target < 1.0)) throw std::invalid_argument("fidelity target must lie in (0,1)");
  const double target = std::sqrt(F_target);
  const double cap = 1.0 / M;
  if (sqrt_fidelity_noiseless(M, eta, alpha, cap) >= target) return cap;
  // alpha <= 1 lowers the fidelity curve, so the ideal-PNR root bounds this one.
  double lo = 0.0;
  double hi = std::min(cap, mu_max_pnr(M, eta, F_target));
  if (sqrt_fidelity_noiseless(M, eta, alpha, hi) >= target) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sqrt_fidelity_noiseless(M, eta, alpha, mid) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double mu_bound_pnr_availability(double alpha, double F_target) {
  require_unit(alpha, "alpha");
  if (!(F_target > 0.0 && F_target < 1.0)) throw std::invalid_argument("fidelity target must lie in (0,1)");
  const double s = std::sqrt(F_target);
  if (alpha >= s) throw std::domain_error("bound requires alpha < sqrt(F)");
  return (1.0 - s) / (s - alpha);
}

}  // namespace herald
