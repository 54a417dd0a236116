#include "herald/fock.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

namespace herald {

namespace {

constexpr double kUnitaryTol = 1e-12;

int total_photons(const Occupation& occ) { return std::accumulate(occ.begin(), occ.end(), 0); }

std::vector<ModeLabel> canonical_modes(std::vector<ModeLabel> modes) {
  std::sort(modes.begin(), modes.end());
  if (std::adjacent_find(modes.begin(), modes.end()) != modes.end()) {
    throw std::invalid_argument("duplicate mode label in register");
  }
  return modes;
}

std::vector<std::size_t> indices_of(const FockState& state, const std::vector<ModeLabel>& modes) {
  std::vector<std::size_t> out;
  out.reserve(modes.size());
  for (const auto& m : modes) out.push_back(state.index_of(m));
  return out;
}

}  // namespace

std::string ModeLabel::to_string() const {
  return std::string(pol == Polarization::a ? "a" : "b") + std::to_string(source) +
         (role == Role::signal ? "s" : "i");
}

// ---- ModeUnitary -------------------------------------------------------------

ModeUnitary::ModeUnitary(Kind kind, std::vector<ModeLabel> targets, std::vector<Complex> matrix)
    : kind_(kind), targets_(std::move(targets)), matrix_(std::move(matrix)) {
  if (targets_.empty()) throw std::invalid_argument("mode unitary needs at least one target");
  std::vector<ModeLabel> sorted = targets_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate target mode in unitary");
  }
  if (matrix_.size() != targets_.size() * targets_.size()) {
    throw std::invalid_argument("unitary matrix size does not match target count");
  }
  if (unitarity_defect() > kUnitaryTol) {
    throw std::invalid_argument("mode matrix is not unitary");
  }
}

ModeUnitary ModeUnitary::beam_splitter_5050(ModeLabel first, ModeLabel second) {
  const double s = std::numbers::sqrt2 / 2.0;
  return ModeUnitary(Kind::beam_splitter_5050, {first, second}, {s, s, s, -s});
}

ModeUnitary ModeUnitary::pbs(ModeLabel a1, ModeLabel b1, ModeLabel a2, ModeLabel b2) {
  // a_1 -> a_1, b_1 -> b_2, a_2 -> a_2, b_2 -> b_1
  std::vector<Complex> m{1, 0, 0, 0,  //
                         0, 0, 0, 1,  //
                         0, 0, 1, 0,  //
                         0, 1, 0, 0};
  return ModeUnitary(Kind::pbs, {a1, b1, a2, b2}, std::move(m));
}

ModeUnitary ModeUnitary::diagonal_pbs(ModeLabel a, ModeLabel b) {
  // a^dag = (c^dag + d^dag)/sqrt2, b^dag = (c^dag - d^dag)/sqrt2
  const double s = std::numbers::sqrt2 / 2.0;
  return ModeUnitary(Kind::diagonal_pbs, {a, b}, {s, s, s, -s});
}

ModeUnitary ModeUnitary::qft(std::vector<ModeLabel> targets) {
  const std::size_t n = targets.size();
  std::vector<Complex> m(n * n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
      m[j * n + k] = std::polar(norm, phase);
    }
  }
  return ModeUnitary(Kind::qft, std::move(targets), std::move(m));
}

ModeUnitary ModeUnitary::hadamard(std::vector<ModeLabel> targets) {
  const std::size_t n = targets.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("hadamard size must be a power of two");
  std::vector<Complex> m(n * n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      m[j * n + k] = (std::popcount(j & k) % 2 == 0) ? norm : -norm;
    }
  }
  return ModeUnitary(Kind::hadamard, std::move(targets), std::move(m));
}

ModeUnitary ModeUnitary::general(std::vector<ModeLabel> targets, std::vector<Complex> row_major) {
  return ModeUnitary(Kind::general, std::move(targets), std::move(row_major));
}

double ModeUnitary::unitarity_defect() const {
  const std::size_t n = dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += std::conj(matrix_[k * n + i]) * matrix_[k * n + j];
      if (i == j) acc -= 1.0;
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

ModeUnitary ModeUnitary::transposed() const {
  const std::size_t n = dim();
  std::vector<Complex> t(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[j * n + i] = matrix_[i * n + j];
  return ModeUnitary(Kind::general, targets_, std::move(t));
}

// ---- FockState ---------------------------------------------------------------

FockState::FockState(std::vector<ModeLabel> modes, int cutoff)
    : modes_(canonical_modes(std::move(modes))), cutoff_(cutoff) {
  if (cutoff_ < 1) throw std::invalid_argument("cutoff must be at least 1");
}

std::size_t FockState::index_of(const ModeLabel& mode) const {
  auto it = std::lower_bound(modes_.begin(), modes_.end(), mode);
  if (it == modes_.end() || *it != mode) {
    throw std::invalid_argument("mode " + mode.to_string() + " not in register");
  }
  return static_cast<std::size_t>(it - modes_.begin());
}

bool FockState::has_mode(const ModeLabel& mode) const {
  return std::binary_search(modes_.begin(), modes_.end(), mode);
}

Complex FockState::amplitude(const Occupation& occ) const {
  auto it = amps_.find(occ);
  return it == amps_.end() ? Complex{} : it->second;
}

Complex FockState::amplitude(const std::map<ModeLabel, int>& pattern) const {
  Occupation occ(modes_.size(), 0);
  for (const auto& [mode, n] : pattern) occ[index_of(mode)] = n;
  return amplitude(occ);
}

void FockState::set_amplitude(const Occupation& occ, Complex value) {
  if (occ.size() != modes_.size()) throw std::invalid_argument("occupation length mismatch");
  if (std::any_of(occ.begin(), occ.end(), [](int n) { return n < 0; })) {
    throw std::invalid_argument("negative occupation");
  }
  if (total_photons(occ) > cutoff_) throw TruncationError("occupation exceeds cutoff");
  if (value == Complex{}) {
    amps_.erase(occ);
  } else {
    amps_[occ] = value;
  }
}

void FockState::add_amplitude(const Occupation& occ, Complex value) {
  set_amplitude(occ, amplitude(occ) + value);
}

double FockState::norm_squared() const {
  double acc = 0.0;
  for (const auto& [occ, amp] : amps_) acc += std::norm(amp);
  return acc;
}

FockState FockState::scaled(Complex factor) const {
  FockState out(modes_, cutoff_);
  for (const auto& [occ, amp] : amps_) out.amps_.emplace(occ, amp * factor);
  return out;
}

FockState FockState::normalized() const {
  const double n2 = norm_squared();
  if (n2 <= 0.0) throw std::domain_error("cannot normalize a zero state");
  return scaled(1.0 / std::sqrt(n2));
}

Complex FockState::inner(const FockState& other) const {
  if (modes_ != other.modes_) throw std::invalid_argument("inner product of different registers");
  Complex acc = 0.0;
  for (const auto& [occ, amp] : amps_) acc += std::conj(amp) * other.amplitude(occ);
  return acc;
}

double FockState::max_abs_difference(const FockState& other) const {
  if (modes_ != other.modes_) throw std::invalid_argument("comparison of different registers");
  double worst = 0.0;
  for (const auto& [occ, amp] : amps_) worst = std::max(worst, std::abs(amp - other.amplitude(occ)));
  for (const auto& [occ, amp] : other.amps_) {
    if (!amps_.contains(occ)) worst = std::max(worst, std::abs(amp));
  }
  return worst;
}

std::vector<double> FockState::photon_number_distribution() const {
  std::vector<double> dist(static_cast<std::size_t>(cutoff_) + 1, 0.0);
  for (const auto& [occ, amp] : amps_) dist[static_cast<std::size_t>(total_photons(occ))] += std::norm(amp);
  return dist;
}

// ---- DensityOperator ---------------------------------------------------------

DensityOperator::DensityOperator(std::vector<ModeLabel> modes, int cutoff)
    : modes_(std::move(modes)), cutoff_(cutoff) {
  std::vector<ModeLabel> sorted = modes_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate mode label in register");
  }
  modes_ = std::move(sorted);
}

DensityOperator DensityOperator::from_pure(const FockState& state) {
  DensityOperator rho(state.modes(), state.cutoff());
  for (const auto& [x, ax] : state.amplitudes())
    for (const auto& [y, ay] : state.amplitudes()) rho.add(x, y, ax * std::conj(ay));
  return rho;
}

Complex DensityOperator::element(const Occupation& row, const Occupation& col) const {
  auto it = entries_.find({row, col});
  return it == entries_.end() ? Complex{} : it->second;
}

void DensityOperator::add(const Occupation& row, const Occupation& col, Complex value) {
  if (row.size() != modes_.size() || col.size() != modes_.size()) {
    throw std::invalid_argument("occupation length mismatch");
  }
  entries_[{row, col}] += value;
}

double DensityOperator::trace() const {
  double acc = 0.0;
  for (const auto& [key, v] : entries_)
    if (key.first == key.second) acc += v.real();
  return acc;
}

double DensityOperator::purity() const {
  // tr(rho^2) = sum_{xy} rho_xy rho_yx = sum |rho_xy|^2 for Hermitian rho
  double acc = 0.0;
  for (const auto& [key, v] : entries_) acc += std::norm(v);
  const double t = trace();
  return acc / (t * t);
}

double DensityOperator::hermiticity_defect() const {
  double worst = 0.0;
  for (const auto& [key, v] : entries_) {
    worst = std::max(worst, std::abs(v - std::conj(element(key.second, key.first))));
  }
  return worst;
}

double DensityOperator::min_eigenvalue() const {
  std::set<Occupation> basis;
  for (const auto& [key, v] : entries_) {
    basis.insert(key.first);
    basis.insert(key.second);
  }
  if (basis.empty()) return 0.0;
  std::map<Occupation, Eigen::Index> index;
  for (const auto& occ : basis) index.emplace(occ, static_cast<Eigen::Index>(index.size()));
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [key, v] : entries_) dense(index.at(key.first), index.at(key.second)) = v;
  const Eigen::MatrixXcd herm = 0.5 * (dense + dense.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// ---- operations --------------------------------------------------------------

FockState vacuum(std::vector<ModeLabel> modes, int cutoff) {
  if (modes.empty()) throw std::invalid_argument("vacuum needs at least one mode");
  FockState state(std::move(modes), cutoff);
  state.set_amplitude(Occupation(state.modes().size(), 0), 1.0);
  return state;
}

FockState apply_creation(const FockState& state, const ModeLabel& mode) {
  const std::size_t idx = state.index_of(mode);
  FockState out(state.modes(), state.cutoff());
  for (const auto& [occ, amp] : state.amplitudes()) {
    Occupation next = occ;
    next[idx] += 1;
    if (total_photons(next) > state.cutoff()) {
      throw TruncationError("creation operator exceeds cutoff");
    }
    out.add_amplitude(next, amp * std::sqrt(static_cast<double>(next[idx])));
  }
  return out;
}

FockState from_terms(std::vector<ModeLabel> modes, int cutoff,
                     const std::vector<std::pair<std::map<ModeLabel, int>, Complex>>& terms) {
  FockState state(std::move(modes), cutoff);
  for (const auto& [pattern, amp] : terms) {
    Occupation occ(state.modes().size(), 0);
    for (const auto& [mode, n] : pattern) occ[state.index_of(mode)] = n;
    state.add_amplitude(occ, amp);
  }
  return state;
}

FockState apply_tmsv(const FockState& state, const ModeLabel& signal, const ModeLabel& idler,
                     double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("squeezing lambda must lie in [0,1)");
  if (signal == idler) throw std::invalid_argument("signal and idler must differ");
  const std::size_t is = state.index_of(signal);
  const std::size_t ii = state.index_of(idler);
  FockState out(state.modes(), state.cutoff());
  const double vac = std::sqrt(1.0 - lambda);
  const double step = std::sqrt(lambda);
  for (const auto& [occ, amp] : state.amplitudes()) {
    if (occ[is] != 0 || occ[ii] != 0) throw std::invalid_argument("tmsv target modes are not in vacuum");
    const int base = total_photons(occ);
    Occupation next = occ;
    double coeff = vac;
    for (int k = 0; base + 2 * k <= state.cutoff(); ++k) {
      next[is] = k;
      next[ii] = k;
      out.add_amplitude(next, amp * coeff);
      coeff *= step;
      if (coeff == 0.0) break;
    }
  }
  return out;
}

FockState apply_unitary(const FockState& state, const ModeUnitary& unitary) {
  const auto targets = indices_of(state, unitary.targets());
  const std::size_t d = targets.size();

  // Image of |n> on the target modes, built recursively from
  // |n> = a_i^dag |n - e_i> / sqrt(n_i) and memoized per pattern.
  using Expansion = std::map<Occupation, Complex>;
  std::map<Occupation, Expansion> memo;
  memo[Occupation(d, 0)] = Expansion{{Occupation(d, 0), 1.0}};

  std::function<const Expansion&(const Occupation&)> image = [&](const Occupation& n) -> const Expansion& {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    std::size_t i = 0;
    while (n[i] == 0) ++i;
    Occupation lower = n;
    lower[i] -= 1;
    const Expansion& prev = image(lower);
    Expansion result;
    const double inv = 1.0 / std::sqrt(static_cast<double>(n[i]));
    for (const auto& [m, c] : prev) {
      for (std::size_t j = 0; j < d; ++j) {
        const Complex u = unitary(j, i);
        if (u == Complex{}) continue;
        Occupation raised = m;
        raised[j] += 1;
        result[raised] += c * u * std::sqrt(static_cast<double>(raised[j])) * inv;
      }
    }
    return memo.emplace(n, std::move(result)).first->second;
  };

  FockState out(state.modes(), state.cutoff());
  Occupation sub(d);
  for (const auto& [occ, amp] : state.amplitudes()) {
    for (std::size_t k = 0; k < d; ++k) sub[k] = occ[targets[k]];
    const Expansion& img = image(sub);
    Occupation next = occ;
    for (const auto& [m, c] : img) {
      if (std::abs(c) < 1e-300) continue;
      for (std::size_t k = 0; k < d; ++k) next[targets[k]] = m[k];
      out.add_amplitude(next, amp * c);
    }
  }
  return out;
}

FockState project_pattern(const FockState& state, const std::map<ModeLabel, int>& pattern) {
  std::vector<std::pair<std::size_t, int>> checks;
  for (const auto& [mode, n] : pattern) checks.emplace_back(state.index_of(mode), n);
  FockState out(state.modes(), state.cutoff());
  for (const auto& [occ, amp] : state.amplitudes()) {
    const bool match = std::all_of(checks.begin(), checks.end(),
                                   [&occ](const auto& c) { return occ[c.first] == c.second; });
    if (match) out.set_amplitude(occ, amp);
  }
  return out;
}

FockState apply_diagonal_povm(const FockState& state, const ModeLabel& mode,
                              std::span<const double> weights) {
  if (weights.size() < static_cast<std::size_t>(state.cutoff()) + 1) {
    throw std::invalid_argument("povm weights must cover every photon number up to the cutoff");
  }
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("povm weight outside [0,1]");
  }
  const std::size_t idx = state.index_of(mode);
  FockState out(state.modes(), state.cutoff());
  for (const auto& [occ, amp] : state.amplitudes()) {
    const double w = weights[static_cast<std::size_t>(occ[idx])];
    if (w > 0.0) out.set_amplitude(occ, amp * std::sqrt(w));
  }
  return out;
}

DensityOperator partial_trace(const FockState& state, const std::vector<ModeLabel>& keep) {
  DensityOperator probe(keep, state.cutoff());  // canonical order + duplicate check
  const auto kept = indices_of(state, probe.modes());
  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < state.modes().size(); ++i) {
    if (std::find(kept.begin(), kept.end(), i) == kept.end()) traced.push_back(i);
  }

  std::map<Occupation, std::vector<std::pair<Occupation, Complex>>> groups;
  for (const auto& [occ, amp] : state.amplitudes()) {
    Occupation k(kept.size()), t(traced.size());
    for (std::size_t i = 0; i < kept.size(); ++i) k[i] = occ[kept[i]];
    for (std::size_t i = 0; i < traced.size(); ++i) t[i] = occ[traced[i]];
    groups[std::move(t)].emplace_back(std::move(k), amp);
  }

  DensityOperator rho(probe.modes(), state.cutoff());
  for (const auto& [t, members] : groups) {
    for (const auto& [x, ax] : members)
      for (const auto& [y, ay] : members) rho.add(x, y, ax * std::conj(ay));
  }
  return rho;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<ModeLabel>& keep) {
  DensityOperator probe(keep, rho.cutoff());
  std::vector<std::size_t> kept;
  for (const auto& m : probe.modes()) {
    auto it = std::lower_bound(rho.modes().begin(), rho.modes().end(), m);
    if (it == rho.modes().end() || *it != m) throw std::invalid_argument("mode " + m.to_string() + " not in register");
    kept.push_back(static_cast<std::size_t>(it - rho.modes().begin()));
  }
  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < rho.modes().size(); ++i) {
    if (std::find(kept.begin(), kept.end(), i) == kept.end()) traced.push_back(i);
  }
  DensityOperator out(probe.modes(), rho.cutoff());
  for (const auto& [key, v] : rho.entries()) {
    const auto& [x, y] = key;
    bool diagonal_in_traced = std::all_of(traced.begin(), traced.end(), [&](std::size_t i) { return x[i] == y[i]; });
    if (!diagonal_in_traced) continue;
    Occupation kx(kept.size()), ky(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      kx[i] = x[kept[i]];
      ky[i] = y[kept[i]];
    }
    out.add(kx, ky, v);
  }
  return out;
}

double fidelity_with(const DensityOperator& rho, const FockState& target) {
  if (rho.modes() != target.modes()) throw std::invalid_argument("fidelity between different registers");
  const double tr = rho.trace();
  if (!(tr > 0.0)) throw std::domain_error("density operator has zero trace");
  const double tnorm = target.norm_squared();
  if (!(tnorm > 0.0)) throw std::domain_error("target state is zero");
  Complex acc = 0.0;
  for (const auto& [x, ax] : target.amplitudes())
    for (const auto& [y, ay] : target.amplitudes()) acc += std::conj(ax) * rho.element(x, y) * ay;
  return std::clamp(acc.real() / (tr * tnorm), 0.0, 1.0);
}

ModeUnitary random_unitary(std::vector<ModeLabel> targets, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(targets.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  std::vector<Complex> row_major(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) row_major[static_cast<std::size_t>(i * n + j)] = q(i, j);
  return ModeUnitary::general(std::move(targets), std::move(row_major));
}

}  // namespace herald
