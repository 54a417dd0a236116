#include "herald/design.hpp"

#include "herald/analytic.hpp"
#include "herald/noise_opt.hpp"

#include <algorithm>
#include <stdexcept>

namespace herald {

namespace {

HeraldConfig make_config(const DesignQuery& q, double mu) {
  HeraldConfig cfg;
  cfg.M = q.M;
  cfg.eta = q.eta;
  cfg.squeezing = SqueezingParam::from_mu(mu);
  cfg.detector = q.alpha >= 1.0 ? GeneralizedDetector::perfect_pnr(q.delta0, q.delta1, q.delta2)
                                : GeneralizedDetector::decoupled(q.alpha, q.delta0, q.delta1, q.delta2);
  return cfg;
}

}  // namespace

DesignResult plan_sources(const DesignQuery& q) {
  if (q.M < 1) throw std::invalid_argument("M must be at least 1");
  if (!(q.fidelity_target > 0.0 && q.fidelity_target < 1.0))
    throw std::invalid_argument("fidelity target must lie in (0,1)");
  if (!(q.eta_h > 0.0 && q.eta_h < 1.0)) throw std::invalid_argument("eta_h must lie in (0,1)");
  make_config(q, 0.0).validate();

  DesignResult r;
  const double cap = 1.0 / q.M;
  double mu = mu_max_general(q.M, q.eta, q.alpha, q.fidelity_target);
  if (q.delta1 > 0.0) {
    const auto best = max_fidelity_noise(q.M, q.eta, q.alpha, q.delta1, q.delta2);
    r.fidelity_ceiling = best.fidelity;
    if (best.fidelity < q.fidelity_target) return r;
    // Noise only lowers fidelity, so the noiseless root bounds the noisy one.
    auto fid = [&](double m) { return heralded_fidelity(make_config(q, m)); };
    double lo = std::min(best.mu, cap);
    double hi = mu;
    if (fid(lo) < q.fidelity_target) return r;
    if (fid(hi) >= q.fidelity_target) {
      mu = hi;
    } else {
      for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (fid(mid) >= q.fidelity_target) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      mu = lo;
    }
  }
  const HeraldConfig cfg = make_config(q, mu);
  r.feasible = true;
  r.mu = mu;
  r.fidelity = heralded_fidelity(cfg);
  r.p_single = single_herald_prob(cfg);
  r.sources = required_n(q.topology, r.p_single, q.eta_h);
  return r;
}

}  // namespace herald
