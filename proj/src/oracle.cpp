#include "herald/oracle.hpp"

#include "herald/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace herald {

namespace {

constexpr double kAutoTail = 1e-13;

ModeLabel mode(int source, Polarization pol, Role role) { return ModeLabel{source, pol, role}; }

std::vector<double> clamp_weights(std::vector<double> w) {
  for (auto& x : w) x = std::clamp(x, 0.0, 1.0);
  return w;
}

struct ArrayTrace {
  double raw = 0.0;   // tr of the heralded idler operator
  double truth = 0.0; // its weight on one pair in the heralding slot
  double fidelity = 0.0;
};

// One M-TMSV array with polarization `pol`, heralded by a single click in
// signal mode `slot` and no click in the others.
ArrayTrace herald_array(const HeraldConfig& cfg, Polarization pol, int slot, int cutoff,
                        const std::vector<double>& w0, const std::vector<double>& w1, bool guard) {
  std::vector<ModeLabel> modes;
  std::vector<ModeLabel> idlers;
  for (int k = 0; k < cfg.M; ++k) {
    modes.push_back(mode(k, pol, Role::signal));
    modes.push_back(mode(k, pol, Role::idler));
    idlers.push_back(mode(k, pol, Role::idler));
  }
  FockState psi = vacuum(modes, cutoff);
  const double lambda = cfg.squeezing.lambda();
  for (int k = 0; k < cfg.M; ++k) psi = apply_tmsv(psi, mode(k, pol, Role::signal), mode(k, pol, Role::idler), lambda);
  const double missing = 1.0 - psi.norm_squared();
  if (guard && missing > kOracleTailGuard) {
    throw TruncationError("cutoff " + std::to_string(cutoff) + " leaves truncated mass " + std::to_string(missing) +
                          " above the oracle guard");
  }
  for (int k = 0; k < cfg.M; ++k) psi = apply_diagonal_povm(psi, mode(k, pol, Role::signal), k == slot ? w1 : w0);
  const DensityOperator rho = partial_trace(psi, idlers);

  ArrayTrace out;
  out.raw = rho.trace();
  Occupation one(static_cast<std::size_t>(cfg.M), 0);
  one[static_cast<std::size_t>(slot)] = 1;
  out.truth = rho.element(one, one).real();
  if (out.raw > 0.0) {
    FockState target(idlers, cutoff);
    target.set_amplitude(one, 1.0);
    out.fidelity = fidelity_with(rho, target);
  }
  return out;
}

FockState d_tmsv_pair(double lambda, int cutoff) {
  std::vector<ModeLabel> modes;
  for (int j = 1; j <= 2; ++j)
    for (auto pol : {Polarization::a, Polarization::b})
      for (auto role : {Role::signal, Role::idler}) modes.push_back(mode(j, pol, role));
  FockState psi = vacuum(modes, cutoff);
  for (int j = 1; j <= 2; ++j) {
    psi = apply_tmsv(psi, mode(j, Polarization::a, Role::signal), mode(j, Polarization::b, Role::idler), lambda);
    psi = apply_tmsv(psi, mode(j, Polarization::b, Role::signal), mode(j, Polarization::a, Role::idler), lambda);
  }
  return psi;
}

FockState mix_signals(const FockState& psi) {
  FockState out = apply_unitary(
      psi, ModeUnitary::beam_splitter_5050(mode(1, Polarization::a, Role::signal), mode(2, Polarization::a, Role::signal)));
  return apply_unitary(
      out, ModeUnitary::beam_splitter_5050(mode(1, Polarization::b, Role::signal), mode(2, Polarization::b, Role::signal)));
}

// Restricts `state` to the listed modes, keeping only terms whose other modes
// match `fixed`. Amplitudes are copied unchanged.
FockState conditional(const FockState& state, const std::vector<ModeLabel>& keep,
                      const std::map<ModeLabel, int>& fixed) {
  const FockState projected = project_pattern(state, fixed);
  FockState out(keep, state.cutoff());
  std::vector<std::size_t> idx;
  for (const auto& m : out.modes()) idx.push_back(state.index_of(m));
  for (const auto& [occ, amp] : projected.amplitudes()) {
    Occupation k(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) k[i] = occ[idx[i]];
    out.add_amplitude(k, amp);
  }
  return out;
}

double overlap(const FockState& a, const FockState& b) {
  const double na = a.norm_squared();
  const double nb = b.norm_squared();
  if (!(na > 0.0 && nb > 0.0)) return 0.0;
  return std::norm(a.inner(b)) / (na * nb);
}

FockState two_photon(const std::vector<ModeLabel>& modes, int cutoff,
                     const std::vector<std::pair<std::pair<ModeLabel, ModeLabel>, double>>& terms) {
  std::vector<std::pair<std::map<ModeLabel, int>, Complex>> t;
  for (const auto& [pair, c] : terms) {
    std::map<ModeLabel, int> pattern{{pair.first, 1}};
    pattern[pair.second] += 1;
    t.emplace_back(pattern, c);
  }
  return from_terms(modes, cutoff, t);
}

}  // namespace

int auto_cutoff(int s, double lambda, double tail) {
  if (s < 1) throw std::invalid_argument("need at least one squeezer");
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in [0,1)");
  if (!(tail > 0.0)) throw std::invalid_argument("tail must be positive");
  double pmf = std::pow(1.0 - lambda, s);
  double cum = pmf;
  int K = 0;
  while (1.0 - cum >= tail) {
    pmf *= lambda * (K + s) / (K + 1);
    cum += pmf;
    ++K;
    if (K > 5000) throw TruncationError("no practical cutoff for this squeezing");
  }
  return std::max(2, 2 * K);
}

HeraldResult oracle_herald(const HeraldConfig& cfg, int cutoff) {
  cfg.validate();
  const bool guard = cutoff > 0;
  if (!guard) cutoff = auto_cutoff(cfg.M, cfg.squeezing.lambda(), kAutoTail);

  std::vector<double> w0(static_cast<std::size_t>(cutoff) + 1);
  std::vector<double> w1(w0.size());
  const auto& det = cfg.detector;
  if (det.spd) {
    const DetectorModel model(cfg.eta, det.spd->p_d, det.spd->K);
    for (int n = 0; n <= cutoff; ++n) {
      w0[static_cast<std::size_t>(n)] = click_pmf(model, 0, n);
      w1[static_cast<std::size_t>(n)] = click_pmf(model, 1, n);
    }
  } else {
    for (int n = 0; n <= cutoff; ++n) {
      w0[static_cast<std::size_t>(n)] = p_zero_click(det, cfg.eta, n);
      w1[static_cast<std::size_t>(n)] = p_single_click(det, cfg.eta, n);
    }
  }
  w0 = clamp_weights(std::move(w0));
  w1 = clamp_weights(std::move(w1));

  const ArrayTrace a = herald_array(cfg, Polarization::a, 0, cutoff, w0, w1, guard);
  const ArrayTrace b = herald_array(cfg, Polarization::b, 0, cutoff, w0, w1, guard);

  HeraldResult r;
  r.raw_single = a.raw;
  r.p_single = a.raw;
  for (int k = 1; k < cfg.M; ++k) r.p_single += herald_array(cfg, Polarization::a, k, cutoff, w0, w1, guard).raw;
  r.raw_prob = a.raw * b.raw;
  r.true_prob = a.truth * b.truth;
  r.fidelity = a.fidelity * b.fidelity;
  return r;
}

SwapHeraldReport oracle_swap_herald(double lambda, int cutoff) {
  if (!(lambda > 0.0 && lambda <= 0.4)) throw std::invalid_argument("swap-herald oracle needs lambda in (0, 0.4]");
  if (cutoff <= 0) cutoff = 4;
  if (cutoff < 4) throw TruncationError("swap heralding needs a cutoff of at least 4 photons");
  const FockState psi = mix_signals(d_tmsv_pair(lambda, cutoff));

  const auto a1 = mode(1, Polarization::a, Role::idler);
  const auto b1 = mode(1, Polarization::b, Role::idler);
  const auto a2 = mode(2, Polarization::a, Role::idler);
  const auto b2 = mode(2, Polarization::b, Role::idler);
  const std::vector<ModeLabel> idlers{a1, b1, a2, b2};
  const double h = std::numbers::sqrt2 / 2.0;
  const FockState eps_p = two_photon(idlers, cutoff, {{{a1, b1}, h}, {{a2, b2}, h}});
  const FockState eps_m = two_photon(idlers, cutoff, {{{a1, b1}, h}, {{a2, b2}, -h}});
  const FockState psi_p = two_photon(idlers, cutoff, {{{a1, b2}, h}, {{b1, a2}, h}});
  const FockState psi_m = two_photon(idlers, cutoff, {{{a1, b2}, h}, {{b1, a2}, -h}});

  auto combine = [&](const FockState& e, const FockState& p, double sign) {
    FockState out(idlers, cutoff);
    for (const auto& [occ, amp] : e.amplitudes()) out.add_amplitude(occ, amp * h);
    for (const auto& [occ, amp] : p.amplitudes()) out.add_amplitude(occ, amp * (sign * h));
    return out;
  };

  struct Spec {
    const char* name;
    int a_port;
    int b_port;
    FockState expected;
  };
  const std::array<Spec, 4> specs{Spec{"a1b1", 1, 1, combine(eps_p, psi_p, 1.0)},
                                  Spec{"a2b2", 2, 2, combine(eps_p, psi_p, -1.0)},
                                  Spec{"a1b2", 1, 2, combine(eps_m, psi_m, 1.0)},
                                  Spec{"a2b1", 2, 1, combine(eps_m, psi_m, -1.0)}};

  SwapHeraldReport report;
  report.lambda = lambda;
  report.cutoff = cutoff;
  const double ref = lambda * lambda * std::pow(1.0 - lambda, 4);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::map<ModeLabel, int> fixed;
    for (int port = 1; port <= 2; ++port) {
      fixed[mode(port, Polarization::a, Role::signal)] = port == specs[i].a_port ? 1 : 0;
      fixed[mode(port, Polarization::b, Role::signal)] = port == specs[i].b_port ? 1 : 0;
    }
    const FockState heralded = conditional(psi, idlers, fixed);
    SwapPattern& out = report.patterns[i];
    out.name = specs[i].name;
    out.probability = heralded.norm_squared();
    out.weight_ratio = out.probability / ref;
    out.overlap = overlap(specs[i].expected, heralded);
    out.bell_fraction = overlap(psi_p, heralded) + overlap(psi_m, heralded);
  }
  return report;
}

NoonSwapReport oracle_noon_swap(int cutoff) {
  if (cutoff < 4) throw TruncationError("the Bell swap needs a cutoff of at least 4 photons");
  std::vector<ModeLabel> modes;
  for (int j = 1; j <= 4; ++j)
    for (auto pol : {Polarization::a, Polarization::b}) modes.push_back(mode(j, pol, Role::idler));
  auto A = [](int j) { return mode(j, Polarization::a, Role::idler); };
  auto B = [](int j) { return mode(j, Polarization::b, Role::idler); };

  auto measure = [&](FockState psi, NoonSwapReport* report) {
    for (auto pol : {Polarization::a, Polarization::b}) {
      psi = apply_unitary(psi, ModeUnitary::beam_splitter_5050(mode(3, pol, Role::idler), mode(4, pol, Role::idler)));
    }
    psi = apply_unitary(psi, ModeUnitary::diagonal_pbs(A(3), B(3)));
    psi = apply_unitary(psi, ModeUnitary::diagonal_pbs(A(4), B(4)));

    const std::vector<ModeLabel> kept{A(1), B(1), A(2), B(2)};
    const double h = std::numbers::sqrt2 / 2.0;
    const std::array<FockState, 4> bell{two_photon(kept, cutoff, {{{A(1), B(2)}, h}, {{B(1), A(2)}, h}}),
                                        two_photon(kept, cutoff, {{{A(1), B(2)}, h}, {{B(1), A(2)}, -h}}),
                                        two_photon(kept, cutoff, {{{A(1), A(2)}, h}, {{B(1), B(2)}, h}}),
                                        two_photon(kept, cutoff, {{{A(1), A(2)}, h}, {{B(1), B(2)}, -h}})};
    double accepted = 0.0;
    double worst = 1.0;
    int patterns = 0;
    // a-labels carry c, b-labels carry d after the diagonal splitters.
    for (int c_port = 3; c_port <= 4; ++c_port) {
      for (int d_port = 3; d_port <= 4; ++d_port) {
        std::map<ModeLabel, int> fixed{{A(3), 0}, {B(3), 0}, {A(4), 0}, {B(4), 0}};
        fixed[A(c_port)] = 1;
        fixed[B(d_port)] = 1;
        const FockState heralded = conditional(psi, kept, fixed);
        const double p = heralded.norm_squared();
        if (p <= 0.0) continue;
        accepted += p;
        ++patterns;
        double best = 0.0;
        for (const auto& b : bell) best = std::max(best, overlap(b, heralded));
        worst = std::min(worst, best);
      }
    }
    if (report) {
      report->success_probability = accepted;
      report->fidelity = patterns > 0 ? worst : 0.0;
      report->accepted_patterns = patterns;
    }
    return accepted;
  };

  NoonSwapReport report;
  FockState pairs = vacuum(modes, cutoff);
  for (const auto& m : {A(1), B(1), A(2), B(2)}) pairs = apply_creation(pairs, m);
  for (auto pol : {Polarization::a, Polarization::b}) {
    pairs = apply_unitary(pairs, ModeUnitary::beam_splitter_5050(mode(1, pol, Role::idler), mode(3, pol, Role::idler)));
    pairs = apply_unitary(pairs, ModeUnitary::beam_splitter_5050(mode(2, pol, Role::idler), mode(4, pol, Role::idler)));
  }
  measure(pairs, &report);

  // Both sources replaced by their error component (a_j b_j + a_k b_k)/sqrt2.
  const double h = std::numbers::sqrt2 / 2.0;
  std::vector<std::pair<std::map<ModeLabel, int>, Complex>> terms;
  for (int x : {1, 3})
    for (int y : {2, 4})
      terms.push_back({{{A(x), 1}, {B(x), 1}, {A(y), 1}, {B(y), 1}}, h * h});
  report.error_term_acceptance = measure(from_terms(modes, cutoff, terms), nullptr);
  return report;
}

FourPhotonReport oracle_four_photon_fraction(double lambda, int cutoff) {
  if (!(lambda > 0.0 && lambda <= 0.4)) throw std::invalid_argument("four-photon oracle needs lambda in (0, 0.4]");
  if (cutoff <= 0) cutoff = 4;
  if (cutoff < 4) throw TruncationError("four-photon terms need a cutoff of at least 4 photons");
  const FockState psi = mix_signals(d_tmsv_pair(lambda, cutoff));
  std::vector<std::size_t> sig_a;
  std::vector<std::size_t> sig_b;
  for (int j = 1; j <= 2; ++j) {
    sig_a.push_back(psi.index_of(mode(j, Polarization::a, Role::signal)));
    sig_b.push_back(psi.index_of(mode(j, Polarization::b, Role::signal)));
  }
  FourPhotonReport r;
  for (const auto& [occ, amp] : psi.amplitudes()) {
    int total = 0;
    for (int n : occ) total += n;
    if (total != 4) continue;
    const double w = std::norm(amp);
    r.four_photon_mass += w;
    int na = 0;
    int nb = 0;
    for (auto i : sig_a) na += occ[i];
    for (auto i : sig_b) nb += occ[i];
    if (na == 1 && nb == 1) r.opposite_mass += w;
  }
  r.fraction = r.four_photon_mass > 0.0 ? r.opposite_mass / r.four_photon_mass : 0.0;
  return r;
}

double oracle_symmetry_matrix(int N, const std::vector<Complex>& matrix, double lambda, int cutoff) {
  if (N < 1) throw std::invalid_argument("need at least one source");
  if (!(lambda >= 0.0 && lambda <= 0.3)) throw std::invalid_argument("symmetry oracle needs lambda in [0, 0.3]");
  if (matrix.size() != static_cast<std::size_t>(N * N)) throw std::invalid_argument("matrix must be N x N");
  if (cutoff <= 0) cutoff = auto_cutoff(N, lambda, 1e-12);
  std::vector<ModeLabel> modes;
  std::vector<ModeLabel> signals;
  std::vector<ModeLabel> idlers;
  for (int k = 0; k < N; ++k) {
    signals.push_back(mode(k, Polarization::a, Role::signal));
    idlers.push_back(mode(k, Polarization::a, Role::idler));
    modes.push_back(signals.back());
    modes.push_back(idlers.back());
  }
  FockState psi = vacuum(modes, cutoff);
  for (int k = 0; k < N; ++k) psi = apply_tmsv(psi, signals[static_cast<std::size_t>(k)], idlers[static_cast<std::size_t>(k)], lambda);

  std::vector<Complex> transposed(matrix.size());
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) transposed[static_cast<std::size_t>(j * N + i)] = matrix[static_cast<std::size_t>(i * N + j)];
  const FockState left = apply_unitary(psi, ModeUnitary::general(signals, matrix));
  const FockState right = apply_unitary(psi, ModeUnitary::general(idlers, transposed));
  return left.max_abs_difference(right);
}

double oracle_symmetry(int N, std::uint64_t seed, double lambda, int cutoff) {
  std::vector<ModeLabel> targets;
  for (int k = 0; k < N; ++k) targets.push_back(mode(k, Polarization::a, Role::signal));
  const ModeUnitary u = random_unitary(targets, seed);
  std::vector<Complex> m(static_cast<std::size_t>(N * N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) m[static_cast<std::size_t>(i * N + j)] = u(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return oracle_symmetry_matrix(N, m, lambda, cutoff);
}

}  // namespace herald
