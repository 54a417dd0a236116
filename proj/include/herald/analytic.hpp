#ifndef HERALD_ANALYTIC_HPP
#define HERALD_ANALYTIC_HPP

#include "herald/detector.hpp"

namespace herald {

/// Squeezing strength of one TMSV process. Stored as the mean photon number
/// per mode mu; lambda = tanh^2 r = mu/(1+mu) and r = asinh(sqrt(mu)) are views.
class SqueezingParam {
 public:
  static SqueezingParam from_mu(double mu);
  static SqueezingParam from_lambda(double lambda);
  static SqueezingParam from_r(double r);

  double mu() const { return mu_; }
  double lambda() const;
  double r() const;

 private:
  explicit SqueezingParam(double mu) : mu_(mu) {}
  double mu_ = 0.0;
};

/// One double-heralded M-TMSV configuration: two arrays of M identical TMSV
/// sources, heralding detectors on every signal mode, overall efficiency eta
/// from pair production to detection.
struct HeraldConfig {
  int M = 1;
  SqueezingParam squeezing = SqueezingParam::from_mu(0.0);
  GeneralizedDetector detector;
  double eta = 1.0;

  void validate() const;
};

struct HeraldResult {
  double p_single = 0.0;    // p_M: single-photon herald from one array, any detector
  double raw_single = 0.0;  // single click in one specified detector of one array
  double raw_prob = 0.0;    // raw_single^2: click pattern (k,l) across the two arrays
  double true_prob = 0.0;   // pattern (k,l) with exactly one pair in modes k and l
  double fidelity = 0.0;    // true_prob / raw_prob
};

/// Negative-binomial pair-number PMF of s independent TMSV processes:
/// C(n+s-1, s-1) (1-l)^s l^n.
double pair_pmf(int s, int n, double lambda);

/// p_M = M (1-l)^M l.
double herald_prob_ideal(int M, double lambda);

/// 1/M.
double optimal_mu_ideal(int M);

/// p_M^2.
double double_herald_prob_ideal(int M, double lambda);

/// Upper bound (M/(M+1))^(2M+2) on double_herald_prob_ideal.
double double_herald_bound(int M);

/// (M-1)/M; M >= 2.
double bell_success_fraction(int M);

/// True pair probability for one detector pair (k,l). The efficiency factor
/// is kept as (eta(1-delta2) + delta1(1-eta)) so eta = 0 is well defined.
double true_pair_prob(const HeraldConfig& cfg);

/// Probability of a single count in one specified signal mode of an array
/// with no counts in the other M-1 modes. Finite at mu = 0 when delta1 > 0.
double raw_single_herald_prob(const HeraldConfig& cfg);

/// M * raw_single_herald_prob.
double single_herald_prob(const HeraldConfig& cfg);

/// Heralded anti-correlated pair fidelity. Throws std::domain_error when the
/// raw herald probability vanishes.
double heralded_fidelity(const HeraldConfig& cfg);

/// All of the above in one struct.
HeraldResult evaluate_herald(const HeraldConfig& cfg);

/// Noiseless ideal-PNR fidelity ((1+eta mu)/(1+mu))^(2+2M).
double fidelity_ideal_pnr(int M, double eta, double mu);

/// Largest mu meeting F_target with ideal PNR and no noise, clamped to 1/M.
/// Returns 1/M when eta^(2+2M) >= F_target.
double mu_max_pnr(int M, double eta, double F_target);

/// Largest mu in (0, 1/M] with noiseless fidelity >= F_target for PNR
/// availability alpha. Bisection on the fidelity polynomial.
double mu_max_general(int M, double eta, double alpha, double F_target);

/// eta -> 1 bound (1-sqrt F)/(sqrt F - alpha); requires alpha < sqrt F.
double mu_bound_pnr_availability(double alpha, double F_target);

}  // namespace herald

#endif  // HERALD_ANALYTIC_HPP
