#ifndef HERALD_DETECTOR_HPP
#define HERALD_DETECTOR_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace herald {

/// Quasi photon-number-resolving detector: K ideal single-photon detectors
/// fed through a balanced 1xK splitter, behind a loss of efficiency eta_d,
/// each SPD dark-firing independently with probability p_d.
struct DetectorModel {
  double eta_d = 1.0;
  double p_d = 0.0;
  int K = 1;

  DetectorModel() = default;
  DetectorModel(double eta_d, double p_d, int K);

  double alpha() const;   // (K-1)/K
  double delta0() const;  // 1-(1-p_d)^K
  double delta1() const;  // K p_d (1-p_d)^(K-1)
  double delta2() const;  // 1-(1-p_d)^(K-1)
  double nu0() const { return 1.0 - delta0(); }
  double nu2() const { return 1.0 - delta2(); }
};

/// SPD array a generalized detector was derived from, kept so that
/// verification code can rebuild the full POVM.
struct SpdArray {
  int K = 1;
  double p_d = 0.0;
};

/// Detector described by four decoupled fitting parameters. Efficiency is not
/// part of the detector; callers pass the overall efficiency separately.
struct GeneralizedDetector {
  double alpha = 1.0;
  double delta0 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  bool ideal_pnr = true;
  std::optional<SpdArray> spd;

  static GeneralizedDetector from_model(const DetectorModel& model);
  /// alpha -> 1 limit with optional noise parameters.
  static GeneralizedDetector perfect_pnr(double delta0 = 0.0, double delta1 = 0.0, double delta2 = 0.0);
  static GeneralizedDetector decoupled(double alpha, double delta0, double delta1, double delta2);

  /// Throws std::invalid_argument when a parameter is outside [0,1] or
  /// alpha == 1 without the ideal-PNR flag.
  void validate() const;
};

/// Stirling number of the second kind S(n, m); 0 when m > n.
long double stirling2(int n, int m);

/// Probability that exactly m of K bins are occupied when n photons are
/// routed uniformly at random (no loss, no dark counts).
double click_pmf_lossless(int K, int m, int n);

/// Full dark-count x lossless x loss chain for an m-fold coincidence
/// given an n-photon Fock input.
double click_pmf(const DetectorModel& model, int m, int n);

/// Zero-click probability (1-delta0)(1-eta_d)^n.
double p_zero_click(const GeneralizedDetector& det, double eta_d, int n);

/// Single-click probability. Uses the alpha -> 1 form when det.ideal_pnr.
double p_single_click(const GeneralizedDetector& det, double eta_d, int n);

/// Empirical PMF over m = 0..K from `shots` simulated detections of an
/// n-photon Fock state. Shots are split across fixed shards with
/// independent seed sequences, so results do not depend on thread count.
std::vector<double> monte_carlo_clicks(const DetectorModel& model, int n, std::int64_t shots,
                                       std::uint64_t seed);

/// Upper bound alpha^(alpha/(1-alpha)) on delta1 for a K-SPD array, K >= 2.
double delta1_upper_bound(double alpha);

/// Coupled-model delta2 = 1-(1-delta0)^alpha with delta0 chosen on the
/// low-noise branch so that delta1 = [(1-delta0)^alpha-(1-delta0)]/(1-alpha).
/// For alpha == 1 the relation becomes delta1 = -(1-delta0) ln(1-delta0).
/// Throws when delta1 exceeds delta1_upper_bound(alpha).
double coupled_delta2(double alpha, double delta1);
/// The matching delta0 for coupled_delta2.
double coupled_delta0(double alpha, double delta1);

}  // namespace herald

#endif  // HERALD_DETECTOR_HPP
