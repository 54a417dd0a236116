#include "herald/figures.hpp"

#include "herald/analytic.hpp"
#include "herald/design.hpp"
#include "herald/multiplex.hpp"
#include "herald/noise_opt.hpp"
#include "herald/parallel.hpp"

#include <cmath>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace herald {

namespace {

// 0.5, 0.505, ..., 1 without accumulated rounding.
std::vector<double> efficiency_axis() {
  std::vector<double> etas;
  for (int i = 0; i <= 100; ++i) etas.push_back((100 + i) / 200.0);
  return etas;
}

Table fig4() {
  Table t{{"bipartite", "M", "lambda", "p_M", "N", "eta_h"}, {}};
  for (int bip = 0; bip <= 1; ++bip) {
    for (int M : {1, 2, 8}) {
      const double lambda = 1.0 / (M + 1);
      const double p = herald_prob_ideal(M, lambda);
      for (int N = 2; N <= 100; N += bip ? 2 : 1) {
        const double eta_h = bip ? bipartite_prob(N, p) : complete_prob(N, p);
        t.rows.push_back({static_cast<double>(bip), static_cast<double>(M), lambda, p, static_cast<double>(N), eta_h});
      }
    }
  }
  return t;
}

Table fig5() {
  Table t{{"M", "eta", "delta1", "delta2", "mu", "fidelity"}, {}};
  const auto mus = logspace(1e-8, 1e4, 241);
  for (double delta1 : {0.0, 1e-6, 1e-4}) {
    const double delta2 = delta1 > 0.0 ? default_delta2(1.0, delta1) : 0.0;
    for (double eta : {0.5, 0.9, 1.0}) {
      for (double mu : mus) {
        HeraldConfig cfg;
        cfg.M = 1;
        cfg.eta = eta;
        cfg.squeezing = SqueezingParam::from_mu(mu);
        cfg.detector = GeneralizedDetector::perfect_pnr(0.0, delta1, delta2);
        t.rows.push_back({1.0, eta, delta1, delta2, mu, heralded_fidelity(cfg)});
      }
    }
  }
  return t;
}

Table fig6(int n) {
  if (n < 2) throw std::invalid_argument("grid size must be at least 2");
  Table t{{"M", "eta", "delta1", "mu_star", "fidelity_max"}, {}};
  const auto etas = logspace(0.5, 1.0, n);
  const auto delta1s = logspace(1e-8, 1e-2, n);
  for (int M = 1; M <= 4; ++M) {
    const auto grid = fidelity_contour_grid(M, 1.0, delta1s, etas);
    for (std::size_t i = 0; i < etas.size(); ++i)
      for (std::size_t j = 0; j < delta1s.size(); ++j)
        t.rows.push_back({static_cast<double>(M), etas[i], delta1s[j], grid.mus[i][j], grid.values[i][j]});
  }
  return t;
}

// Rows for one planner sweep over efficiency, computed in parallel and
// assembled in order.
std::vector<std::vector<double>> sweep(const DesignQuery& base, const std::vector<double>& etas,
                                       const std::vector<double>& prefix) {
  std::vector<std::vector<double>> rows(etas.size());
  parallel_for(etas.size(), [&](std::size_t i) {
    DesignQuery q = base;
    q.eta = etas[i];
    const auto r = plan_sources(q);
    auto row = prefix;
    row.insert(row.end(), {etas[i], r.mu, r.p_single, r.sources.real, static_cast<double>(r.sources.count)});
    if (base.topology == Topology::bipartite) row.push_back(r.sources.count / 2.0);
    rows[i] = std::move(row);
  });
  return rows;
}

Table fig8() {
  Table t{{"fidelity", "eta_h", "eta", "mu", "p_M", "N_real", "N"}, {}};
  const auto etas = efficiency_axis();
  for (double F : {0.9, 0.99, 0.999}) {
    for (double eta_h : {0.25, 0.8, 0.99}) {
      DesignQuery q;
      q.fidelity_target = F;
      q.eta_h = eta_h;
      for (auto& row : sweep(q, etas, {F, eta_h})) t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table fig9() {
  Table t{{"alpha", "eta", "mu", "p_M", "N_real", "N"}, {}};
  const auto etas = efficiency_axis();
  for (double alpha : {0.0, 0.5, 2.0 / 3.0, 0.75, 0.9, 1.0}) {
    DesignQuery q;
    q.alpha = alpha;
    q.fidelity_target = 0.99;
    q.eta_h = 0.5;
    for (auto& row : sweep(q, etas, {alpha})) t.rows.push_back(std::move(row));
  }
  return t;
}

Table fig10() {
  Table t{{"M", "eta", "mu", "p_M", "N_real", "N", "spectral_modes"}, {}};
  const auto etas = efficiency_axis();
  for (int M : {1, 2, 4, 8}) {
    DesignQuery q;
    q.topology = Topology::bipartite;
    q.M = M;
    q.fidelity_target = 0.99;
    q.eta_h = 0.5;
    for (auto& row : sweep(q, etas, {static_cast<double>(M)})) t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig4", "fig5", "fig6", "fig8", "fig9", "fig10"};
  return ids;
}

Table figure_table(const std::string& id, const FigureOptions& options) {
  if (id == "fig4") return fig4();
  if (id == "fig5") return fig5();
  if (id == "fig6") return fig6(options.grid_size);
  if (id == "fig8") return fig8();
  if (id == "fig9") return fig9();
  if (id == "fig10") return fig10();
  throw std::invalid_argument("unknown figure id '" + id + "'");
}

std::string format_number(double value) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << value;
  return os.str();
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

}  // namespace herald
