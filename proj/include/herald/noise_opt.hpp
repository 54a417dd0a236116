#ifndef HERALD_NOISE_OPT_HPP
#define HERALD_NOISE_OPT_HPP

#include <functional>
#include <optional>
#include <vector>

namespace herald {

/// Stationarity condition of the noisy heralded fidelity in mu,
/// A mu^3 + B mu^2 + C mu + 1 = 0, with the Cardano intermediates of its
/// depressed form t^3 + 3u t + 2v = 0, mu = t - B/(3A).
struct CubicProblem {
  int M = 1;
  double eta = 1.0;
  double alpha = 1.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double beta = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double u = 0.0;
  double v = 0.0;
  double disc = 0.0;  // u^3 + v^2

  static CubicProblem build(int M, double eta, double alpha, double delta1, double delta2);

  double residual(double mu) const { return ((A * mu + B) * mu + C) * mu + 1.0; }
  /// All real roots, ascending. Uses Cardano when disc >= 0 and the
  /// trigonometric form otherwise; each root is Newton-polished.
  std::vector<double> real_roots() const;
};

struct FidelityMax {
  double mu = 0.0;
  double fidelity = 0.0;
};

/// Noisy heralded fidelity as a function of mu only; (1-delta0) cancels.
double noisy_fidelity(int M, double eta, double alpha, double delta1, double delta2, double mu);

/// d ln F / d mu of noisy_fidelity, evaluated directly from F.
double noisy_fidelity_log_slope(int M, double eta, double alpha, double delta1, double delta2, double mu);

/// Smallest positive root of the stationarity cubic; this is the mean
/// photon number at which fidelity peaks. Empty when no positive root exists,
/// in which case fidelity increases monotonically. Throws for delta1 <= 0.
std::optional<double> min_mu_noise(int M, double eta, double alpha, double delta1, double delta2);

/// Golden-section maximization of f over [lo, hi] in log(x), followed by
/// bisection on the sign of `slope` when provided.
FidelityMax golden_section_argmax(const std::function<double(double)>& f, double lo, double hi,
                                  const std::function<double(double)>& slope = {});

/// Global maximum fidelity over mu in [1e-10, 1e3]. The log-grid scan plus
/// golden-section search is the arbiter; the cubic root is used when it agrees.
FidelityMax max_fidelity_noise(int M, double eta, double alpha, double delta1, double delta2);

/// Grid of maximum fidelities, values[i][j] at (etas[i], delta1s[j]). delta2
/// follows the coupled K-SPD model for the given alpha.
struct FidelityGrid {
  int M = 1;
  double alpha = 1.0;
  std::vector<double> etas;
  std::vector<double> delta1s;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> mus;
};

FidelityGrid fidelity_contour_grid(int M, double alpha, const std::vector<double>& delta1s,
                                   const std::vector<double>& etas);

/// delta2 implied by delta1 under the coupled K-SPD relations.
double default_delta2(double alpha, double delta1);

/// n values log-spaced over [lo, hi], endpoints included.
std::vector<double> logspace(double lo, double hi, int n);

}  // namespace herald

#endif  // HERALD_NOISE_OPT_HPP
