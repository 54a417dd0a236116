#include "herald/detector.hpp"

#include "herald/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace herald {

namespace {

void check_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0,1]");
}

// C(n, k); multiplicative in extended precision, log-space above n = 60.
long double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  k = std::min(k, n - k);
  if (n > 60) {
    return std::exp(std::lgamma(static_cast<long double>(n) + 1) - std::lgamma(static_cast<long double>(k) + 1) -
                    std::lgamma(static_cast<long double>(n - k) + 1));
  }
  long double acc = 1.0L;
  for (int i = 1; i <= k; ++i) acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return acc;
}

// L^j_n = C(n,j) eta^j (1-eta)^(n-j)
long double loss_element(int j, int n, long double eta) {
  if (j < 0 || j > n) return 0.0L;
  if (eta == 0.0L) return j == 0 ? 1.0L : 0.0L;
  if (eta == 1.0L) return j == n ? 1.0L : 0.0L;
  if (n > 60) {
    return std::exp(std::log(binom(n, j)) + static_cast<long double>(j) * std::log(eta) +
                    static_cast<long double>(n - j) * std::log1p(-eta));
  }
  return binom(n, j) * std::pow(eta, j) * std::pow(1.0L - eta, n - j);
}

// D^m_{K,k} = C(K-k, m-k) p_d^(m-k) (1-p_d)^(K-m)
long double dark_element(int K, int m, int k, long double p_d) {
  if (k > m || m > K) return 0.0L;
  return binom(K - k, m - k) * std::pow(p_d, m - k) * std::pow(1.0L - p_d, K - m);
}

long double lossless(int K, int m, int n) {
  if (m < 0 || m > K || m > n) return (m == 0 && n == 0) ? 1.0L : 0.0L;
  // m! C(K,m) = K (K-1) ... (K-m+1)
  long double falling = 1.0L;
  for (int i = 0; i < m; ++i) falling *= static_cast<long double>(K - i);
  return falling * stirling2(n, m) / std::pow(static_cast<long double>(K), n);
}

// delta1 as a function of delta0 in the coupled model:
// [(1-x)^alpha - (1-x)]/(1-alpha), with the alpha -> 1 limit -(1-x) ln(1-x).
double coupled_delta1_of_delta0(double alpha, double x) {
  if (x >= 1.0) return alpha == 0.0 ? 1.0 : 0.0;
  const double log_nu = std::log1p(-x);
  if (alpha >= 1.0) return -(1.0 - x) * log_nu;
  return (1.0 - x) * std::expm1((alpha - 1.0) * log_nu) / (1.0 - alpha);
}

}  // namespace

DetectorModel::DetectorModel(double eta_d_, double p_d_, int K_) : eta_d(eta_d_), p_d(p_d_), K(K_) {
  check_unit(eta_d, "eta_d");
  check_unit(p_d, "p_d");
  if (K < 1) throw std::invalid_argument("K must be at least 1");
}

double DetectorModel::alpha() const { return static_cast<double>(K - 1) / static_cast<double>(K); }
double DetectorModel::delta0() const { return -std::expm1(K * std::log1p(-p_d)); }
double DetectorModel::delta1() const { return K * p_d * std::pow(1.0 - p_d, K - 1); }
double DetectorModel::delta2() const { return -std::expm1((K - 1) * std::log1p(-p_d)); }

GeneralizedDetector GeneralizedDetector::from_model(const DetectorModel& model) {
  GeneralizedDetector det;
  det.alpha = model.alpha();
  det.delta0 = model.delta0();
  det.delta1 = model.delta1();
  det.delta2 = model.delta2();
  det.ideal_pnr = false;
  det.spd = SpdArray{model.K, model.p_d};
  return det;
}

GeneralizedDetector GeneralizedDetector::perfect_pnr(double delta0, double delta1, double delta2) {
  GeneralizedDetector det;
  det.alpha = 1.0;
  det.delta0 = delta0;
  det.delta1 = delta1;
  det.delta2 = delta2;
  det.ideal_pnr = true;
  det.validate();
  return det;
}

GeneralizedDetector GeneralizedDetector::decoupled(double alpha, double delta0, double delta1, double delta2) {
  GeneralizedDetector det;
  det.alpha = alpha;
  det.delta0 = delta0;
  det.delta1 = delta1;
  det.delta2 = delta2;
  det.ideal_pnr = alpha >= 1.0;
  det.validate();
  return det;
}

void GeneralizedDetector::validate() const {
  check_unit(alpha, "alpha");
  check_unit(delta0, "delta0");
  check_unit(delta1, "delta1");
  check_unit(delta2, "delta2");
  if (alpha >= 1.0 && !ideal_pnr) throw std::invalid_argument("alpha = 1 requires the ideal-PNR form");
}

long double stirling2(int n, int m) {
  if (n < 0 || m < 0) throw std::invalid_argument("stirling2 arguments must be non-negative");
  if (m > n) return 0.0L;
  if (n == 0) return 1.0L;
  if (m == 0) return 0.0L;
  if (n <= 30) {
    // Exact integer recurrence S(n,m) = m S(n-1,m) + S(n-1,m-1).
    std::vector<unsigned __int128> row(static_cast<std::size_t>(m) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i) {
      for (int j = std::min(i, m); j >= 1; --j) row[j] = static_cast<unsigned __int128>(j) * row[j] + row[j - 1];
      row[0] = 0;
    }
    return static_cast<long double>(row[static_cast<std::size_t>(m)]);
  }
  // Same recurrence in extended precision; all terms are positive.
  std::vector<long double> row(static_cast<std::size_t>(m) + 1, 0.0L);
  row[0] = 1.0L;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, m); j >= 1; --j) row[j] = static_cast<long double>(j) * row[j] + row[j - 1];
    row[0] = 0.0L;
  }
  return row[static_cast<std::size_t>(m)];
}

double click_pmf_lossless(int K, int m, int n) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  return static_cast<double>(lossless(K, m, n));
}

double click_pmf(const DetectorModel& model, int m, int n) {
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  if (m < 0 || m > model.K) return 0.0;
  const long double eta = model.eta_d;
  const long double pd = model.p_d;
  long double acc = 0.0L;
  for (int k = 0; k <= m; ++k) {
    const long double d = dark_element(model.K, m, k, pd);
    if (d == 0.0L) continue;
    long double inner = 0.0L;
    for (int j = k; j <= n; ++j) inner += lossless(model.K, k, j) * loss_element(j, n, eta);
    acc += d * inner;
  }
  return static_cast<double>(acc);
}

double p_zero_click(const GeneralizedDetector& det, double eta_d, int n) {
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  return (1.0 - det.delta0) * std::pow(1.0 - eta_d, n);
}

double p_single_click(const GeneralizedDetector& det, double eta_d, int n) {
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  const double dark = det.delta1 * std::pow(1.0 - eta_d, n);
  if (det.ideal_pnr) {
    if (n == 0) return dark;
    return dark + n * (1.0 - det.delta2) * eta_d * std::pow(1.0 - eta_d, n - 1);
  }
  if (det.alpha >= 1.0) throw std::invalid_argument("alpha = 1 requires the ideal-PNR form");
  return dark + (1.0 - det.delta2) / (1.0 - det.alpha) *
                    (std::pow(1.0 - det.alpha * eta_d, n) - std::pow(1.0 - eta_d, n));
}

std::vector<double> monte_carlo_clicks(const DetectorModel& model, int n, std::int64_t shots,
                                       std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be at least 1");
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  constexpr std::size_t kShards = 64;
  const auto K = static_cast<std::size_t>(model.K);
  std::vector<std::vector<std::int64_t>> counts(kShards, std::vector<std::int64_t>(K + 1, 0));

  parallel_for(kShards, [&](std::size_t shard) {
    const std::int64_t begin = shots * static_cast<std::int64_t>(shard) / static_cast<std::int64_t>(kShards);
    const std::int64_t end = shots * static_cast<std::int64_t>(shard + 1) / static_cast<std::int64_t>(kShards);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(shard)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> port(0, K - 1);
    std::vector<char> fired(K);
    auto& local = counts[shard];
    for (std::int64_t s = begin; s < end; ++s) {
      std::fill(fired.begin(), fired.end(), 0);
      for (int photon = 0; photon < n; ++photon) {
        if (unit(rng) < model.eta_d) fired[port(rng)] = 1;
      }
      std::size_t m = 0;
      for (std::size_t k = 0; k < K; ++k) {
        if (!fired[k] && unit(rng) < model.p_d) fired[k] = 1;
        m += static_cast<std::size_t>(fired[k]);
      }
      ++local[m];
    }
  });

  std::vector<double> pmf(K + 1, 0.0);
  for (const auto& local : counts)
    for (std::size_t m = 0; m <= K; ++m) pmf[m] += static_cast<double>(local[m]);
  for (auto& p : pmf) p /= static_cast<double>(shots);
  return pmf;
}

double delta1_upper_bound(double alpha) {
  check_unit(alpha, "alpha");
  if (alpha >= 1.0) return std::exp(-1.0);
  if (alpha == 0.0) return 1.0;
  return std::pow(alpha, alpha / (1.0 - alpha));
}

double coupled_delta0(double alpha, double delta1) {
  check_unit(alpha, "alpha");
  check_unit(delta1, "delta1");
  if (delta1 > delta1_upper_bound(alpha) * (1.0 + 1e-15)) {
    throw std::invalid_argument("delta1 exceeds the K-SPD upper bound for this alpha");
  }
  // delta1 increases with delta0 on [0, 1 - nu*], nu* the maximizing nu.
  const double nu_star =
      alpha >= 1.0 ? std::exp(-1.0) : (alpha == 0.0 ? 0.0 : std::pow(alpha, 1.0 / (1.0 - alpha)));
  double lo = 0.0;
  double hi = 1.0 - nu_star;
  for (int it = 0; it < 400 && hi - lo > 1e-17 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (coupled_delta1_of_delta0(alpha, mid) < delta1) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double coupled_delta2(double alpha, double delta1) {
  const double delta0 = coupled_delta0(alpha, delta1);
  return -std::expm1(alpha * std::log1p(-delta0));
}

}  // namespace herald
