#ifndef HERALD_MULTIPLEX_HPP
#define HERALD_MULTIPLEX_HPP

namespace herald {

enum class Topology { complete, bipartite };

enum class LambertBranch { principal, minus_one };

/// Planner query: N arrays, each heralding with probability p, aiming for a
/// double-herald probability eta_h.
struct MultiplexPlan {
  Topology topology = Topology::complete;
  int N = 2;
  double p = 0.0;
  double eta_h = 0.0;

  double q() const { return 1.0 - p; }
  /// Double-herald probability of this plan.
  double probability() const;
};

/// Source count solving a planner inversion. `real` is the continuous
/// solution; `count` is the smallest admissible integer (even for bipartite).
struct RequiredSources {
  double real = 0.0;
  int count = 0;
};

/// At least two of N arrays herald: 1 - q^N - N p q^(N-1). Accepts real N >= 2.
double complete_prob(double N, double p);

/// One herald in each half of N arrays: [1 - q^(N/2)]^2. Throws for odd N.
double bipartite_prob(int N, double p);
/// Continuous extension in N, used for round-trip checks.
double bipartite_prob_real(double N, double p);

/// Real Lambert W on the named branch. Throws std::domain_error outside the
/// branch domain.
double lambert_w(LambertBranch branch, double x);

/// Inverts complete_prob via the minus-one branch; real N is clamped to 2.
RequiredSources complete_required_n(double p, double eta_h);

/// 2 ln(1 - sqrt eta_h) / ln(1 - p); count rounded up to an even number.
RequiredSources bipartite_required_n(double p, double eta_h);

/// Direct bisection inversion of complete_prob on N in [2, inf).
double complete_required_n_bisect(double p, double eta_h);

RequiredSources required_n(Topology topology, double p, double eta_h);

}  // namespace herald

#endif  // HERALD_MULTIPLEX_HPP
