#include "herald/noise_opt.hpp"

#include "herald/analytic.hpp"
#include "herald/detector.hpp"
#include "herald/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace herald {

namespace {

constexpr double kMuLo = 1e-10;
constexpr double kMuHi = 1e3;
constexpr int kScanPoints = 241;

void check_params(int M, double eta, double alpha, double delta1, double delta2) {
  if (M < 1) throw std::invalid_argument("M must be at least 1");
  for (double x : {eta, alpha, delta1, delta2}) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("detector and efficiency parameters must lie in [0,1]");
  }
  if (!(delta1 > 0.0)) throw std::invalid_argument("delta1 must be positive; without noise fidelity has no interior maximum");
}

double polish(const CubicProblem& c, double mu) {
  for (int it = 0; it < 8; ++it) {
    const double d = (3.0 * c.A * mu + 2.0 * c.B) * mu + c.C;
    if (d == 0.0) break;
    const double step = c.residual(mu) / d;
    const double next = mu - step;
    if (!std::isfinite(next)) break;
    if (std::abs(c.residual(next)) > std::abs(c.residual(mu))) break;
    mu = next;
    if (std::abs(step) <= 1e-16 * std::abs(mu)) break;
  }
  return mu;
}

}  // namespace

CubicProblem CubicProblem::build(int M, double eta, double alpha, double delta1, double delta2) {
  check_params(M, eta, alpha, delta1, delta2);
  CubicProblem c;
  c.M = M;
  c.eta = eta;
  c.alpha = alpha;
  c.delta1 = delta1;
  c.delta2 = delta2;
  c.beta = alpha + (1.0 - delta2) / delta1;
  const double e2 = eta * eta;
  const double miss = M * (1.0 - eta);
  c.A = alpha * e2 - c.beta * e2 * (1.0 - alpha * eta + alpha * miss);
  c.B = alpha * eta * (1.0 + 2.0 * eta - miss) - c.beta * eta * (1.0 - alpha * eta + miss);
  c.C = eta * (1.0 + 2.0 * alpha) - miss;
  if (c.A != 0.0) {
    const double a2 = c.A * c.A;
    c.u = c.C / (3.0 * c.A) - c.B * c.B / (9.0 * a2);
    c.v = c.B * c.B * c.B / (27.0 * a2 * c.A) - c.B * c.C / (6.0 * a2) + 1.0 / (2.0 * c.A);
    c.disc = c.u * c.u * c.u + c.v * c.v;
  }
  return c;
}

std::vector<double> CubicProblem::real_roots() const {
  std::vector<double> roots;
  if (A == 0.0) {
    if (B == 0.0) {
      if (C != 0.0) roots.push_back(-1.0 / C);
    } else {
      const double d = C * C - 4.0 * B;
      if (d >= 0.0) {
        const double q = -0.5 * (C + std::copysign(std::sqrt(d), C));
        roots.push_back(q / B);
        if (q != 0.0) roots.push_back(1.0 / q);
      }
    }
  } else {
    const double shift = B / (3.0 * A);
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      roots.push_back(std::cbrt(-v + s) + std::cbrt(-v - s) - shift);
    } else {
      const double r = std::sqrt(-u);
      const double phi = std::acos(std::clamp(-v / (r * r * r), -1.0, 1.0));
      for (int k = 0; k < 3; ++k)
        roots.push_back(2.0 * r * std::cos((phi + 2.0 * std::numbers::pi * k) / 3.0) - shift);
    }
  }
  for (auto& mu : roots) mu = polish(*this, mu);
  std::sort(roots.begin(), roots.end());
  return roots;
}

double noisy_fidelity(int M, double eta, double alpha, double delta1, double delta2, double mu) {
  HeraldConfig cfg;
  cfg.M = M;
  cfg.eta = eta;
  cfg.squeezing = SqueezingParam::from_mu(mu);
  cfg.detector = alpha >= 1.0 ? GeneralizedDetector::perfect_pnr(0.0, delta1, delta2)
                              : GeneralizedDetector::decoupled(alpha, 0.0, delta1, delta2);
  return heralded_fidelity(cfg);
}

double noisy_fidelity_log_slope(int M, double eta, double alpha, double delta1, double delta2, double mu) {
  const double x = eta * mu;
  const double bottom = delta1 * (1.0 + alpha * x) + (1.0 - delta2) * x;
  return 2.0 * M * eta / (1.0 + x) + 2.0 * alpha * eta / (1.0 + alpha * x) - (2.0 + 2.0 * M) / (1.0 + mu) +
         2.0 / mu - 2.0 * (delta1 * alpha * eta + (1.0 - delta2) * eta) / bottom;
}

std::optional<double> min_mu_noise(int M, double eta, double alpha, double delta1, double delta2) {
  const auto cubic = CubicProblem::build(M, eta, alpha, delta1, delta2);
  for (double mu : cubic.real_roots()) {
    if (mu > 0.0) return mu;
  }
  return std::nullopt;
}

FidelityMax golden_section_argmax(const std::function<double(double)>& f, double lo, double hi,
                                  const std::function<double(double)>& slope) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("golden-section bounds must satisfy 0 < lo < hi");
  const auto grid = logspace(lo, hi, kScanPoints);
  std::size_t best = 0;
  double best_f = f(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double fi = f(grid[i]);
    if (fi > best_f) {
      best_f = fi;
      best = i;
    }
  }
  double a = std::log(grid[best == 0 ? 0 : best - 1]);
  double b = std::log(grid[std::min(best + 1, grid.size() - 1)]);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(std::exp(c));
  double fd = f(std::exp(d));
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(std::exp(d));
    }
  }
  double x = std::exp(0.5 * (a + b));
  if (slope) {
    // Refine on the slope sign, which keeps full precision where f is flat.
    double l = std::exp(a - 1e-6);
    double h = std::exp(b + 1e-6);
    l = std::max(l, lo);
    h = std::min(h, hi);
    if (slope(l) > 0.0 && slope(h) < 0.0) {
      for (int it = 0; it < 200 && h - l > 1e-16 * h; ++it) {
        const double mid = 0.5 * (l + h);
        if (slope(mid) > 0.0) {
          l = mid;
        } else {
          h = mid;
        }
      }
      x = 0.5 * (l + h);
    }
  }
  FidelityMax out{x, f(x)};
  if (best_f > out.fidelity) out = {grid[best], best_f};
  return out;
}

FidelityMax max_fidelity_noise(int M, double eta, double alpha, double delta1, double delta2) {
  check_params(M, eta, alpha, delta1, delta2);
  auto f = [&](double mu) { return noisy_fidelity(M, eta, alpha, delta1, delta2, mu); };
  auto slope = [&](double mu) { return noisy_fidelity_log_slope(M, eta, alpha, delta1, delta2, mu); };
  const FidelityMax scan = golden_section_argmax(f, kMuLo, kMuHi, slope);
  if (const auto root = min_mu_noise(M, eta, alpha, delta1, delta2); root && *root >= kMuLo && *root <= kMuHi) {
    const double froot = f(*root);
    if (froot >= scan.fidelity - 1e-14) return {*root, froot};
  }
  return scan;
}

double default_delta2(double alpha, double delta1) { return coupled_delta2(alpha, delta1); }

FidelityGrid fidelity_contour_grid(int M, double alpha, const std::vector<double>& delta1s,
                                   const std::vector<double>& etas) {
  FidelityGrid grid;
  grid.M = M;
  grid.alpha = alpha;
  grid.etas = etas;
  grid.delta1s = delta1s;
  grid.values.assign(etas.size(), std::vector<double>(delta1s.size(), 0.0));
  grid.mus.assign(etas.size(), std::vector<double>(delta1s.size(), 0.0));
  std::vector<double> delta2s(delta1s.size());
  for (std::size_t j = 0; j < delta1s.size(); ++j) delta2s[j] = default_delta2(alpha, delta1s[j]);
  parallel_for(etas.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < delta1s.size(); ++j) {
      const auto best = max_fidelity_noise(M, etas[i], alpha, delta1s[j], delta2s[j]);
      grid.values[i][j] = best.fidelity;
      grid.mus[i][j] = best.mu;
    }
  });
  return grid;
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("logspace needs at least one point");
  if (!(lo > 0.0 && hi > 0.0)) throw std::invalid_argument("logspace bounds must be positive");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace herald
