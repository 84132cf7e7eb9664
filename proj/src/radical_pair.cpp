#include "qwalk/radical_pair.hpp"

#include <cmath>
#include <sstream>

namespace qwalk {

namespace {

// Positions within the fixed bases (1-based sites).
constexpr int kMinimalS = 1, kMinimalT = 2;
constexpr int kSiteS = 1, kSiteProductS = 2, kSiteT = 3, kSiteProductT = 4;
constexpr int kReducedN = 1, kReducedT = 2, kReducedS = 3;

void check_rates(const RPRates& rates) {
  if (!(rates.ks >= 0.0) || !(rates.kt >= 0.0) || !(rates.q_extra >= 0.0) ||
      !std::isfinite(rates.ks) || !std::isfinite(rates.kt) ||
      !std::isfinite(rates.q_extra)) {
    throw Error(Errc::bad_rates, "recombination rates must be finite and >= 0");
  }
}

// All matrices in the sandwich builders below are Hermitian with real
// coefficients, so each A rho B term pairs with B rho A under the adjoint.
void add_sandwich(std::vector<SandwichTerm>& terms, double coeff,
                  const Matrix& left, const Matrix& right) {
  terms.push_back({coeff * left, right});
}

void add_anticommutator(std::vector<SandwichTerm>& terms, double coeff,
                        const Matrix& p) {
  const Matrix id = Matrix::Identity(p.rows(), p.cols());
  terms.push_back({coeff * p, id});
  terms.push_back({id, coeff * p});
}

}  // namespace

Basis site_basis() {
  Basis basis(4);
  basis[0] = {1, "S", {1, 0, 0, 0}};
  basis[1] = {2, "P_S", {0, 1, 0, 0}};
  basis[2] = {3, "T", {0, 0, 1, 0}};
  basis[3] = {4, "P_T", {0, 0, 0, 1}};
  return basis;
}

Basis lumped_basis() {
  Basis basis(3);
  basis[0] = {1, "S", {}};
  basis[1] = {2, "P", {}};
  basis[2] = {3, "T", {}};
  return basis;
}

Basis minimal_basis() {
  Basis basis(2);
  basis[0] = {1, "S", {}};
  basis[1] = {2, "T", {}};
  return basis;
}

Basis reduced_basis() {
  Basis basis(3);
  basis[0] = {1, "N", {0, 0}};
  basis[1] = {2, "T", {0, 1}};
  basis[2] = {3, "S", {1, 0}};
  return basis;
}

Generator haberkorn(const RPRates& rates) {
  check_rates(rates);
  const Matrix qs = site_projector(kMinimalS, 2);
  const Matrix qt = site_projector(kMinimalT, 2);
  std::vector<SandwichTerm> terms;
  add_anticommutator(terms, -0.5 * rates.ks, qs);
  add_anticommutator(terms, -0.5 * rates.kt, qt);
  return Generator::from_sandwich_terms(2, std::move(terms));
}

Generator kominis(const RPRates& rates) {
  check_rates(rates);
  const Matrix qs = site_projector(kMinimalS, 2);
  const Matrix qt = site_projector(kMinimalT, 2);
  std::vector<SandwichTerm> terms;
  add_anticommutator(terms, -0.5 * rates.ks, qs);
  add_anticommutator(terms, -0.5 * rates.kt, qt);
  add_sandwich(terms, rates.ks, qs, qs);
  add_sandwich(terms, rates.kt, qt, qt);
  return Generator::from_sandwich_terms(2, std::move(terms));
}

KominisPopulation kominis_population_step(double population,
                                          const DensityOperator& rho,
                                          const RPRates& rates, double dt) {
  check_rates(rates);
  if (population < 0.0 || dt < 0.0) {
    throw Error(Errc::invalid_argument,
                "population and dt must be nonnegative");
  }
  if (rates.ks * dt > 1.0 || rates.kt * dt > 1.0) {
    throw Error(Errc::step_too_large, "rate*dt exceeds 1; shrink the step");
  }
  if (rho.dim() != 2) {
    throw Error(Errc::dimension_mismatch,
                "population step expects the two-state radical pair");
  }
  double p_s = rates.ks * rho.matrix()(0, 0).real() * dt;
  double p_t = rates.kt * rho.matrix()(1, 1).real() * dt;
  return {population * (1.0 - p_s - p_t)};
}

Generator jones_hore(const RPRates& rates) {
  check_rates(rates);
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix qs = site_projector(kMinimalS, 2);
  const Matrix qt = site_projector(kMinimalT, 2);
  std::vector<SandwichTerm> terms;
  add_sandwich(terms, -(rates.ks + rates.kt), id, id);
  add_sandwich(terms, rates.ks, qt, qt);
  add_sandwich(terms, rates.kt, qs, qs);
  return Generator::from_sandwich_terms(2, std::move(terms));
}

Generator qw_full(const RPRates& rates) {
  check_rates(rates);
  return Generator::amplitude_damping(kSiteProductS, kSiteS, rates.ks, 4) +
         Generator::amplitude_damping(kSiteProductT, kSiteT, rates.kt, 4);
}

Generator qw_reduced_minimal(const RPRates& rates) {
  check_rates(rates);
  const Matrix qs = site_projector(kMinimalS, 2);
  const Matrix qt = site_projector(kMinimalT, 2);
  const double cross = -0.5 * (rates.ks + rates.kt);
  std::vector<SandwichTerm> terms;
  add_sandwich(terms, -rates.ks, qs, qs);
  add_sandwich(terms, cross, qs, qt);
  add_sandwich(terms, cross, qt, qs);
  add_sandwich(terms, -rates.kt, qt, qt);
  return Generator::from_sandwich_terms(2, std::move(terms));
}

Matrix partial_trace_products(const Matrix& full) {
  if (full.rows() != 4 || full.cols() != 4) {
    throw Error(Errc::dimension_mismatch,
                "partial trace expects the four-site matrix");
  }
  // Single-walker occupation encoding: tracing over the product sites
  // keeps three product-space configurations; each contributes one
  // isometry-sandwich term V rho V'. Rows of V are the reduced basis
  // {N, T, S}, columns the sites {S, P_S, T, P_T}.
  using Proj = Eigen::Matrix<Complex, 3, 4>;
  static const Proj both_empty = [] {
    Proj v = Proj::Zero();
    v(kReducedS - 1, kSiteS - 1) = 1.0;
    v(kReducedT - 1, kSiteT - 1) = 1.0;
    return v;
  }();
  static const Proj walker_at_pt = [] {
    Proj v = Proj::Zero();
    v(kReducedN - 1, kSiteProductT - 1) = 1.0;
    return v;
  }();
  static const Proj walker_at_ps = [] {
    Proj v = Proj::Zero();
    v(kReducedN - 1, kSiteProductS - 1) = 1.0;
    return v;
  }();
  Matrix reduced = Matrix::Zero(3, 3);
  reduced += both_empty * full * both_empty.adjoint();
  reduced += walker_at_pt * full * walker_at_pt.adjoint();
  reduced += walker_at_ps * full * walker_at_ps.adjoint();
  return reduced;
}

Generator qw_reduced_null(const RPRates& rates) {
  check_rates(rates);
  const Matrix qs = site_projector(kReducedS, 3);
  const Matrix qt = site_projector(kReducedT, 3);
  const Matrix q_ns = site_transfer(kReducedN, kReducedS, 3);
  const Matrix q_nt = site_transfer(kReducedN, kReducedT, 3);
  const double cross = -0.5 * (rates.ks + rates.kt);
  std::vector<SandwichTerm> terms;
  terms.push_back({rates.ks * q_ns, q_ns.adjoint()});
  terms.push_back({rates.kt * q_nt, q_nt.adjoint()});
  add_sandwich(terms, -rates.ks, qs, qs);
  add_sandwich(terms, -rates.kt, qt, qt);
  add_sandwich(terms, cross, qs, qt);
  add_sandwich(terms, cross, qt, qs);
  return Generator::from_sandwich_terms(3, std::move(terms));
}

Generator symmetric_dephasing(double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) {
    throw Error(Errc::bad_rates, "dephasing rate must be finite and >= 0");
  }
  return Generator::dephasing(kSiteT, kSiteS, q, 4) +
         Generator::dephasing(kSiteS, kSiteT, q, 4);
}

Generator reduced_symmetric_dephasing(double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) {
    throw Error(Errc::bad_rates, "dephasing rate must be finite and >= 0");
  }
  const Matrix qs = site_projector(kReducedS, 3);
  const Matrix qt = site_projector(kReducedT, 3);
  std::vector<SandwichTerm> terms;
  add_sandwich(terms, -q, qs, qt);
  add_sandwich(terms, -q, qt, qs);
  return Generator::from_sandwich_terms(3, std::move(terms));
}

Generator kominis_via_dephasing(const RPRates& rates) {
  check_rates(rates);
  return Generator::dephasing(kMinimalT, kMinimalS, rates.ks, 2) +
         Generator::dephasing(kMinimalS, kMinimalT, rates.kt, 2);
}

Generator experiment_model(const RPRates& rates) {
  check_rates(rates);
  Generator g = qw_full(rates);
  g += Generator::dephasing(kSiteT, kSiteS, rates.q_extra, 4);
  if (rates.coherent) {
    g += Generator::unitary(kSiteS, kSiteT, rates.coherent->omega_s,
                            rates.coherent->omega_t,
                            rates.coherent->coupling, 4);
  }
  return g;
}

double st_dephasing_rate(const Generator& g, int s_site, int t_site) {
  const Eigen::Index dim = g.dim();
  if (s_site < 1 || s_site > dim || t_site < 1 || t_site > dim ||
      s_site == t_site) {
    throw Error(Errc::bad_indices, "coherence probe needs two distinct sites");
  }
  const Matrix probe = site_transfer(s_site, t_site, dim);
  Matrix derivative = act(g, probe);
  Complex factor = derivative(s_site - 1, t_site - 1);
  double residual =
      (derivative - factor * probe).cwiseAbs().maxCoeff();
  double scale = std::abs(factor) > 1.0 ? std::abs(factor) : 1.0;
  if (residual > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "coherence does not decay exponentially: off-probe residual "
        << residual;
    throw Error(Errc::not_exponential_coherence_decay, msg.str());
  }
  return -factor.real();
}

ConsistencyReport maeda_consistency_check(std::optional<double> measured_rate,
                                          double ks, double kt,
                                          double q_extra) {
  RPRates rates{ks, kt, q_extra, std::nullopt};
  check_rates(rates);
  if (measured_rate && !(*measured_rate >= 0.0)) {
    throw Error(Errc::bad_rates, "measured rate must be >= 0");
  }

  ConsistencyReport report;
  report.ks = ks;
  report.kt = kt;
  report.q_extra = q_extra;
  report.measured_rate = measured_rate;

  auto add = [&report, &measured_rate](std::string name, std::string display,
                                       const Generator& g, int s, int t) {
    OperatorRateEntry entry;
    entry.name = std::move(name);
    entry.display = std::move(display);
    entry.st_rate = st_dephasing_rate(g, s, t);
    entry.trace_preserving = is_trace_preserving(g);
    if (measured_rate) entry.consistent = entry.st_rate <= *measured_rate;
    report.entries.push_back(std::move(entry));
  };

  add("haberkorn", "Haberkorn", haberkorn(rates), kMinimalS, kMinimalT);
  add("kominis", "Kominis", kominis(rates), kMinimalS, kMinimalT);
  add("jones_hore", "Jones-Hore", jones_hore(rates), kMinimalS, kMinimalT);
  add("qw_full", "QuantumWalk", qw_full(rates), kSiteS, kSiteT);
  add("qw_reduced_null", "QW-null-state", qw_reduced_null(rates), kReducedS,
      kReducedT);
  if (q_extra > 0.0) {
    add("experiment_model", "QW+dephasing", experiment_model(rates), kSiteS,
        kSiteT);
  }
  return report;
}

}  // namespace qwalk
