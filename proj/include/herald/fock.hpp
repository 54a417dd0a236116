#ifndef HERALD_FOCK_HPP
#define HERALD_FOCK_HPP

#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace herald {

using Complex = std::complex<double>;

enum class Polarization : std::uint8_t { a, b };
enum class Role : std::uint8_t { signal, idler };

/// One optical mode of a multimode register. Ordering is lexicographic by
/// (source, polarization, role) and fixes the occupation-vector layout.
struct ModeLabel {
  int source = 0;
  Polarization pol = Polarization::a;
  Role role = Role::signal;

  auto operator<=>(const ModeLabel&) const = default;
  bool operator==(const ModeLabel&) const = default;

  std::string to_string() const;
};

inline ModeLabel signal_a(int src) { return {src, Polarization::a, Role::signal}; }
inline ModeLabel signal_b(int src) { return {src, Polarization::b, Role::signal}; }
inline ModeLabel idler_a(int src) { return {src, Polarization::a, Role::idler}; }
inline ModeLabel idler_b(int src) { return {src, Polarization::b, Role::idler}; }

/// Photon count per mode, in register order.
using Occupation = std::vector<int>;

/// Thrown when a truncated state cannot represent a request within its cutoff
/// or when truncation error exceeds a guard.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single-mode-matrix acting on a subset of modes.
///
/// Column i of `matrix` is the image of the i-th target mode's creation
/// operator: a_i^dag -> sum_j matrix(j, i) a_j^dag. Output modes reuse the
/// input labels.
class ModeUnitary {
 public:
  enum class Kind { beam_splitter_5050, pbs, diagonal_pbs, qft, hadamard, general };

  /// 50:50 splitter on (first, second): first -> (first+second)/sqrt2,
  /// second -> (first-second)/sqrt2.
  static ModeUnitary beam_splitter_5050(ModeLabel first, ModeLabel second);
  /// Polarizing splitter between two spatial ports. Targets are
  /// (a_1, b_1, a_2, b_2); a stays in its port, b swaps ports.
  static ModeUnitary pbs(ModeLabel a1, ModeLabel b1, ModeLabel a2, ModeLabel b2);
  /// Rotation of one spatial mode's (a, b) pair into the diagonal basis
  /// c = (a+b)/sqrt2, d = (a-b)/sqrt2; the a label carries c, the b label d.
  static ModeUnitary diagonal_pbs(ModeLabel a, ModeLabel b);
  static ModeUnitary qft(std::vector<ModeLabel> targets);
  /// Sylvester Hadamard; targets.size() must be a power of two.
  static ModeUnitary hadamard(std::vector<ModeLabel> targets);
  static ModeUnitary general(std::vector<ModeLabel> targets, std::vector<Complex> row_major);

  Kind kind() const { return kind_; }
  const std::vector<ModeLabel>& targets() const { return targets_; }
  std::size_t dim() const { return targets_.size(); }
  Complex operator()(std::size_t row, std::size_t col) const { return matrix_[row * dim() + col]; }

  /// max |(U^dag U - I)_{ij}|
  double unitarity_defect() const;
  ModeUnitary transposed() const;

 private:
  ModeUnitary(Kind kind, std::vector<ModeLabel> targets, std::vector<Complex> matrix);

  Kind kind_;
  std::vector<ModeLabel> targets_;
  std::vector<Complex> matrix_;
};

/// Complex amplitudes over a truncated multimode Fock basis.
///
/// Storage is sparse; absent occupations have zero amplitude. States may be
/// sub-normalized (e.g. after projection) and are never renormalized
/// implicitly.
class FockState {
 public:
  using Amplitudes = std::map<Occupation, Complex>;

  FockState(std::vector<ModeLabel> modes, int cutoff);

  const std::vector<ModeLabel>& modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  const Amplitudes& amplitudes() const { return amps_; }
  std::size_t size() const { return amps_.size(); }

  std::size_t index_of(const ModeLabel& mode) const;
  bool has_mode(const ModeLabel& mode) const;

  Complex amplitude(const Occupation& occ) const;
  /// Amplitude by mode -> count; unspecified modes are taken as empty.
  Complex amplitude(const std::map<ModeLabel, int>& pattern) const;
  void set_amplitude(const Occupation& occ, Complex value);
  void add_amplitude(const Occupation& occ, Complex value);

  double norm_squared() const;
  FockState scaled(Complex factor) const;
  FockState normalized() const;

  /// sum_x conj(this_x) other_x; registers must match.
  Complex inner(const FockState& other) const;
  /// max_x |this_x - other_x| over the union of supports.
  double max_abs_difference(const FockState& other) const;

  /// Total-photon-number marginal: entry n is the weight on occupations
  /// summing to n.
  std::vector<double> photon_number_distribution() const;

 private:
  std::vector<ModeLabel> modes_;
  int cutoff_;
  Amplitudes amps_;
};

/// Square matrix over occupation-vector pairs, stored sparsely.
class DensityOperator {
 public:
  using Key = std::pair<Occupation, Occupation>;
  using Entries = std::map<Key, Complex>;

  DensityOperator(std::vector<ModeLabel> modes, int cutoff);
  static DensityOperator from_pure(const FockState& state);

  const std::vector<ModeLabel>& modes() const { return modes_; }
  int cutoff() const { return cutoff_; }
  const Entries& entries() const { return entries_; }

  Complex element(const Occupation& row, const Occupation& col) const;
  void add(const Occupation& row, const Occupation& col, Complex value);

  double trace() const;
  /// tr(rho^2) / tr(rho)^2
  double purity() const;
  double hermiticity_defect() const;
  /// Smallest eigenvalue of the dense Hermitian part; intended for
  /// verification on small registers.
  double min_eigenvalue() const;

 private:
  std::vector<ModeLabel> modes_;
  int cutoff_;
  Entries entries_;
};

// ---- state construction ----------------------------------------------------

FockState vacuum(std::vector<ModeLabel> modes, int cutoff);

/// Applies a^dag on `mode`. Throws TruncationError if any term would exceed
/// the cutoff.
FockState apply_creation(const FockState& state, const ModeLabel& mode);

/// Builds a state from (mode -> count) patterns and amplitudes.
FockState from_terms(std::vector<ModeLabel> modes, int cutoff,
                     const std::vector<std::pair<std::map<ModeLabel, int>, Complex>>& terms);

/// Multiplies in a two-mode squeezed vacuum sum_k sqrt((1-l) l^k) |k,k>
/// on (signal, idler), truncated so every term respects the cutoff.
/// Both target modes must be empty in every stored term.
FockState apply_tmsv(const FockState& state, const ModeLabel& signal, const ModeLabel& idler,
                     double lambda);

FockState apply_unitary(const FockState& state, const ModeUnitary& unitary);

/// Projects onto the given occupations of the listed modes (unnormalized).
FockState project_pattern(const FockState& state, const std::map<ModeLabel, int>& pattern);

/// Weighting by a diagonal POVM element sum_n w(n)|n><n| on one mode.
///
/// Amplitudes are scaled by sqrt(w(n)), so that tracing the measured mode out
/// of the result yields tr_mode(E rho). Only meaningful once the measured mode
/// is traced out.
FockState apply_diagonal_povm(const FockState& state, const ModeLabel& mode,
                              std::span<const double> weights);

DensityOperator partial_trace(const FockState& state, const std::vector<ModeLabel>& keep);
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<ModeLabel>& keep);

/// <t| rho / tr(rho) |t> / <t|t>.
double fidelity_with(const DensityOperator& rho, const FockState& target);

/// Haar-random unitary on the given modes, deterministic in `seed`.
ModeUnitary random_unitary(std::vector<ModeLabel> targets, std::uint64_t seed);

}  // namespace herald

#endif  // HERALD_FOCK_HPP
