#ifndef HERALD_DESIGN_HPP
#define HERALD_DESIGN_HPP

#include "herald/multiplex.hpp"

namespace herald {

/// Planner input: target fidelity and double-herald probability for N
/// multiplexed M-TMSV arrays with overall efficiency eta and detector
/// parameters (alpha, delta0, delta1, delta2).
struct DesignQuery {
  Topology topology = Topology::complete;
  int M = 1;
  double eta = 1.0;
  double alpha = 1.0;
  double delta0 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double fidelity_target = 0.99;
  double eta_h = 0.5;
};

struct DesignResult {
  bool feasible = false;
  double fidelity_ceiling = 1.0;  // best fidelity reachable with this noise
  double mu = 0.0;                // largest mu meeting the target, <= 1/M
  double fidelity = 0.0;          // fidelity at mu
  double p_single = 0.0;          // per-array herald probability at mu
  RequiredSources sources;
};

/// mu from the fidelity target, p_M = M * raw single-herald probability,
/// N from the topology's inversion. Infeasible when the target is above the
/// noise ceiling; sources are then left at zero.
DesignResult plan_sources(const DesignQuery& query);

}  // namespace herald

#endif  // HERALD_DESIGN_HPP
