#include "herald/multiplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace herald {

namespace {

constexpr double kInvE = 0.36787944117144232159552377016146;
constexpr double kE = 2.71828182845904523536028747135266;
// Relative slack before rounding up, so an exact inverse of an integer N
// does not round to N + 1.
constexpr double kCeilSlack = 1e-9;

void require_open_unit(double x, const char* what) {
  if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument(std::string(what) + " must lie in (0,1)");
}

void require_prob(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
}

int ceil_with_slack(double x) { return static_cast<int>(std::ceil(x - kCeilSlack * std::abs(x))); }

double halley(double x, double w) {
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(w)) break;
  }
  return w;
}

}  // namespace

double MultiplexPlan::probability() const {
  return topology == Topology::complete ? complete_prob(N, p) : bipartite_prob(N, p);
}

double complete_prob(double N, double p) {
  if (!(N >= 2.0)) throw std::invalid_argument("complete topology needs N >= 2");
  require_prob(p);
  const double q = 1.0 - p;
  if (q == 0.0) return 1.0;
  return -std::expm1(N * std::log1p(-p)) - N * p * std::pow(q, N - 1.0);
}

double bipartite_prob(int N, double p) {
  if (N < 2 || N % 2 != 0) throw std::invalid_argument("bipartite topology needs an even N >= 2");
  return bipartite_prob_real(N, p);
}

double bipartite_prob_real(double N, double p) {
  if (!(N >= 2.0)) throw std::invalid_argument("bipartite topology needs N >= 2");
  require_prob(p);
  const double half = p == 1.0 ? 1.0 : -std::expm1(0.5 * N * std::log1p(-p));
  return half * half;
}

double lambert_w(LambertBranch branch, double x) {
  if (!std::isfinite(x)) throw std::domain_error("lambert_w argument must be finite");
  // Tolerate rounding in arguments computed as -exp(-1).
  if (x < -kInvE) {
    if (x < -kInvE * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()))
      throw std::domain_error("lambert_w argument below -1/e");
    return -1.0;
  }
  if (branch == LambertBranch::minus_one && x >= 0.0)
    throw std::domain_error("minus-one branch needs -1/e <= x < 0");
  if (x == -kInvE) return -1.0;
  if (branch == LambertBranch::principal && x == 0.0) return 0.0;

  double w;
  if (x < -0.25) {
    const double r = std::sqrt(std::max(0.0, 2.0 * (kE * x + 1.0)));
    if (r == 0.0) return -1.0;
    const double p = branch == LambertBranch::principal ? r : -r;
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (branch == LambertBranch::minus_one) {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  } else if (x < 3.0) {
    w = std::log1p(x);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  return halley(x, w);
}

RequiredSources complete_required_n(double p, double eta_h) {
  require_open_unit(p, "p");
  require_open_unit(eta_h, "eta_h");
  const double ln_q = std::log1p(-p);
  const double q = 1.0 - p;
  const double arg = (1.0 - eta_h) * ln_q * std::exp(ln_q / p) / p;
  if (!(arg >= -kInvE * (1.0 + 1e-12) && arg < 0.0))
    throw std::domain_error("Lambert argument outside [-1/e, 0)");
  const double w = lambert_w(LambertBranch::minus_one, arg);
  double n = w / ln_q - q / p;
  if (n < 2.0) n = 2.0;
#ifndef NDEBUG
  const double check = complete_required_n_bisect(p, eta_h);
  if (std::abs(check - n) > 1e-6 * std::max(1.0, n))
    throw std::logic_error("closed-form source count disagrees with bisection");
#endif
  return {n, std::max(2, ceil_with_slack(n))};
}

RequiredSources bipartite_required_n(double p, double eta_h) {
  require_open_unit(p, "p");
  require_open_unit(eta_h, "eta_h");
  double n = 2.0 * std::log1p(-std::sqrt(eta_h)) / std::log1p(-p);
  if (n < 2.0) n = 2.0;
  const int half = ceil_with_slack(0.5 * n);
  return {n, std::max(2, 2 * half)};
}

double complete_required_n_bisect(double p, double eta_h) {
  require_open_unit(p, "p");
  require_open_unit(eta_h, "eta_h");
  double lo = 2.0;
  if (complete_prob(lo, p) >= eta_h) return lo;
  double hi = 4.0;
  while (complete_prob(hi, p) < eta_h) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::domain_error("source count diverges");
  }
  for (int it = 0; it < 300 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (complete_prob(mid, p) < eta_h) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

RequiredSources required_n(Topology topology, double p, double eta_h) {
  return topology == Topology::complete ? complete_required_n(p, eta_h) : bipartite_required_n(p, eta_h);
}

}  // namespace herald
