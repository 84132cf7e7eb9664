#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qwalk/generators.hpp"

namespace qwalk {

/// Coherent singlet-triplet mixing parameters (rad/s).
struct CoherentParams {
  double omega_s = 0.0;
  double omega_t = 0.0;
  double coupling = 0.0;
};

/// Recombination rates (1/s) plus optional extras for the experiment model.
struct RPRates {
  double ks = 0.0;
  double kt = 0.0;
  double q_extra = 0.0;
  std::optional<CoherentParams> coherent;
};

/// Canonical bases. Site order:
///   site_basis():    S, P_S, T, P_T        (four-site reaction network)
///   lumped_basis():  S, P, T               (both products lumped into P)
///   minimal_basis(): S, T                  (radical pair only)
///   reduced_basis(): N, T, S               (null state first; occupation
///                                           bits are (n1, n3))
Basis site_basis();
Basis lumped_basis();
Basis minimal_basis();
Basis reduced_basis();

/// Conventional trace-decreasing reaction operator on {S, T}:
///   -1/2 kS {Q_S, rho} - 1/2 kT {Q_T, rho}.
Generator haberkorn(const RPRates& rates);

/// Trace-preserving variant: haberkorn plus kS Q_S rho Q_S + kT Q_T rho Q_T.
Generator kominis(const RPRates& rates);

struct KominisPopulation {
  double value = 0.0;
};

/// Companion bookkeeping for the trace-preserving operator:
///   N(t+dt) = N(t) [1 - kS rho_SS dt - kT rho_TT dt].
KominisPopulation kominis_population_step(double population,
                                          const DensityOperator& rho,
                                          const RPRates& rates, double dt);

/// Trace-decreasing operator with unit cross-term coefficients:
///   -(kS + kT) rho + kS Q_T rho Q_T + kT Q_S rho Q_S.
Generator jones_hore(const RPRates& rates);

/// Full four-site reaction operator: population transfer S -> P_S at kS
/// and T -> P_T at kT, with coherence decay as a consequence.
Generator qw_full(const RPRates& rates);

/// The {S, T} block of the full operator read off directly; algebraically
/// identical to haberkorn.
Generator qw_reduced_minimal(const RPRates& rates);

/// Trace over the product sites of a four-site matrix (state or
/// derivative), returning a 3x3 matrix over {N, T, S}. N is the
/// "neither singlet nor triplet" state; coherences to N vanish identically.
Matrix partial_trace_products(const Matrix& full);

/// Closed trace-preserving operator on {N, T, S}: populations drain from
/// S and T into N while the S-T coherence decays at (kS + kT)/2.
Generator qw_reduced_null(const RPRates& rates);

/// Two dephasing processes in opposite directions at one shared rate on
/// the four-site space: the S-T coherence decays at q, every other
/// coherence touching sites 1 or 3 at q/2.
Generator symmetric_dephasing(double q);

/// Partial trace of the symmetric dephasing: only the S-T coherence of the
/// reduced {N, T, S} state decays, at rate q.
Generator reduced_symmetric_dephasing(double q);

/// The trace-preserving operator recovered as two opposite-direction
/// dephasing processes with the recombination rates; matches kominis.
Generator kominis_via_dephasing(const RPRates& rates);

/// Reaction operator for the discrimination experiment: recombination at
/// (kS, kT), optional coherent S-T mixing, extra dephasing at q_extra.
Generator experiment_model(const RPRates& rates);

/// Exponential decay rate of the coherence between two sites, measured by
/// probing the generator with a coherence-only matrix (|s><t|). Throws
/// when the action is not proportional to the probe.
double st_dephasing_rate(const Generator& g, int s_site, int t_site);

struct OperatorRateEntry {
  std::string name;          // machine name, e.g. "jones_hore"
  std::string display;       // human name, e.g. "Jones-Hore"
  double st_rate = 0.0;      // 1/s
  bool trace_preserving = false;
  std::optional<bool> consistent;  // vs measured rate, when given
};

struct ConsistencyReport {
  double ks = 0.0;
  double kt = 0.0;
  double q_extra = 0.0;
  std::optional<double> measured_rate;
  std::vector<OperatorRateEntry> entries;
};

/// Per-operator singlet-triplet dephasing rates and, given a measured
/// rate, whether each one stays at or below it. A pure inequality check.
ConsistencyReport maeda_consistency_check(std::optional<double> measured_rate,
                                          double ks, double kt,
                                          double q_extra = 0.0);

}  // namespace qwalk
