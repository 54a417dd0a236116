#ifndef HERALD_ORACLE_HPP
#define HERALD_ORACLE_HPP

#include "herald/analytic.hpp"
#include "herald/fock.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace herald {

/// Largest allowed 1 - <psi|psi> for a user-supplied cutoff.
inline constexpr double kOracleTailGuard = 1e-8;

/// Smallest even total-photon cutoff 2K such that s independent TMSV
/// factors at lambda have more than K pairs with probability below tail.
int auto_cutoff(int s, double lambda, double tail);

/// Brute-force heralding statistics for one configuration. Each M-TMSV array
/// is built in Fock space, its signal modes weighted by the detector POVM
/// (single click in signal mode 0, no click elsewhere) and traced out.
/// cutoff <= 0 selects one automatically; otherwise the truncated norm is
/// checked against kOracleTailGuard and TruncationError is thrown.
HeraldResult oracle_herald(const HeraldConfig& cfg, int cutoff = 0);

struct SwapPattern {
  std::string name;          // e.g. "a1b1": detected signal modes after the splitter
  double probability = 0.0;  // squared norm of the projected idler state
  double weight_ratio = 0.0; // probability / (lambda^2 (1-lambda)^4)
  double overlap = 0.0;      // |<expected|state>|^2 after normalization
  double bell_fraction = 0.0;
};

struct SwapHeraldReport {
  double lambda = 0.0;
  int cutoff = 0;
  std::array<SwapPattern, 4> patterns;
};

/// Two polarization-entangled sources, signal modes mixed on 50:50
/// splitters, one photon detected in an a-mode and one in a b-mode.
SwapHeraldReport oracle_swap_herald(double lambda, int cutoff = 0);

struct NoonSwapReport {
  double success_probability = 0.0;
  /// Minimum over accepted click patterns of the best Bell-state fidelity.
  double fidelity = 0.0;
  int accepted_patterns = 0;
  /// Accepted probability when each source is replaced by its error term.
  double error_term_acceptance = 0.0;
};

/// Entanglement swap of two anti-correlated pairs through splitters with
/// vacuum and a diagonal-basis partial Bell measurement.
NoonSwapReport oracle_noon_swap(int cutoff = 4);

struct FourPhotonReport {
  double fraction = 0.0;        // opposite-polarization share of the 4-photon mass
  double four_photon_mass = 0.0;
  double opposite_mass = 0.0;
};

FourPhotonReport oracle_four_photon_fraction(double lambda, int cutoff = 0);

/// max |difference| between U on the signal modes and U^T on the idler
/// modes of an N-fold TMSV product, U Haar-random from seed.
double oracle_symmetry(int N, std::uint64_t seed, double lambda, int cutoff = 0);
/// Same with an explicit row-major N x N matrix.
double oracle_symmetry_matrix(int N, const std::vector<Complex>& matrix, double lambda, int cutoff = 0);

}  // namespace herald

#endif  // HERALD_ORACLE_HPP
