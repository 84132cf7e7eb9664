#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "qwalk/densop.hpp"
#include "qwalk/maps.hpp"

namespace qwalk {

/// One-way population transfer k -> j at the given rate (1/s):
///   rate [ Q_jk rho Q_jk' - 1/2 Q_k rho - 1/2 rho Q_k ].
struct DampingTerm {
  int to = 0;    // 1-based target site j
  int from = 0;  // 1-based source site k
  double rate = 0.0;
};

/// Coherence decay at the given rate (1/s), projecting on site k:
///   rate [ Q_k rho Q_k - 1/2 Q_k rho - 1/2 rho Q_k ].
/// The second index carries the projector, so the index order matters.
struct DephasingTerm {
  int j = 0;
  int k = 0;
  double rate = 0.0;
};

/// Commutator part -i [H, rho] for the two-site Hamiltonian
/// H = omega_j Q_j + omega_k Q_k + coupling (Q_jk + Q_kj), hbar = 1.
struct UnitaryTerm {
  int j = 0;
  int k = 0;
  double omega_j = 0.0;
  double omega_k = 0.0;
  double coupling = 0.0;
};

/// General bilinear piece left * rho * right. Used for reaction operators
/// that are not plain damping/dephasing/unitary sums; builders keep the
/// term set closed under the adjoint so Hermiticity is preserved.
struct SandwichTerm {
  Matrix left;
  Matrix right;
};

/// Superoperator L with drho/dt = L rho, stored as a sum of primitive
/// terms. Values are immutable once built; copies share the lazily built
/// Liouvillian cache.
class Generator {
 public:
  static Generator zero(Eigen::Index dim);
  static Generator amplitude_damping(int to, int from, double rate,
                                     Eigen::Index dim);
  static Generator dephasing(int j, int k, double rate, Eigen::Index dim);
  static Generator unitary(int j, int k, double omega_j, double omega_k,
                           double coupling, Eigen::Index dim);
  static Generator from_sandwich_terms(Eigen::Index dim,
                                       std::vector<SandwichTerm> terms);

  Eigen::Index dim() const { return dim_; }
  bool empty() const {
    return damping_.empty() && dephasing_.empty() && unitary_.empty() &&
           sandwich_.empty();
  }

  Generator& operator+=(const Generator& other);
  friend Generator operator+(Generator lhs, const Generator& rhs) {
    lhs += rhs;
    return lhs;
  }

  const std::vector<DampingTerm>& damping_terms() const { return damping_; }
  const std::vector<DephasingTerm>& dephasing_terms() const {
    return dephasing_;
  }
  const std::vector<UnitaryTerm>& unitary_terms() const { return unitary_; }
  const std::vector<SandwichTerm>& sandwich_terms() const {
    return sandwich_;
  }

  /// dim^2 x dim^2 matrix acting on column-stacked states; built once per
  /// generator value and shared between copies. The reference stays valid
  /// for the lifetime of this generator (or any copy of it).
  const Matrix& liouvillian() const;

 private:
  explicit Generator(Eigen::Index dim);

  Eigen::Index dim_ = 0;
  std::vector<DampingTerm> damping_;
  std::vector<DephasingTerm> dephasing_;
  std::vector<UnitaryTerm> unitary_;
  std::vector<SandwichTerm> sandwich_;

  struct Cache {
    std::once_flag once;
    Matrix liouvillian;
  };
  std::shared_ptr<Cache> cache_;
};

/// drho/dt for an arbitrary complex matrix. Probing off the state manifold
/// is legitimate: generators are linear maps on matrices.
Matrix act(const Generator& g, const Matrix& rho);
Matrix act(const Generator& g, const DensityOperator& rho);

/// Column-stacking helpers; the Liouvillian follows this convention.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index dim);

struct Liouvillian {
  Matrix matrix;  // dim^2 x dim^2
};

Liouvillian to_liouvillian(const Generator& g);

/// d tr(rho)/dt vanishes for every input iff vec(1)' L = 0.
bool is_trace_preserving(const Generator& g, double tol = 1e-12);

/// rho(t) = unvec(exp(L t) vec(rho0)), symmetrized. The pre-symmetrization
/// Hermiticity defect is a diagnostic; above 1e-8 the propagation aborts.
DensityOperator propagate_exact(const Generator& g,
                                const DensityOperator& rho0, double t);

struct SampleDiagnostics {
  double trace = 0.0;
  double min_eigenvalue = 0.0;
  double hermiticity_defect = 0.0;  // before symmetrization
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<DensityOperator> snapshots;
  std::vector<SampleDiagnostics> diagnostics;
};

/// Exact propagation sampled at the given times (each must be >= 0,
/// strictly increasing).
TimeSeries propagate_exact_series(const Generator& g,
                                  const DensityOperator& rho0,
                                  const std::vector<double>& times);

struct StepwiseOptions {
  double max_rate = 0.0;  // largest rate entering the step map (1/s)
  double guard = 0.1;     // refuse steps with max_rate * dt above this
  int samples = 2;        // recorded snapshots, endpoints included
};

using StepMapBuilder = std::function<KrausMap(double)>;

/// First-order propagation: builds the one-step map once and applies it
/// repeatedly. t_final snaps to a whole number of steps. Global error is
/// O(dt) against propagate_exact.
TimeSeries propagate_stepwise(const StepMapBuilder& builder,
                              const DensityOperator& rho0, double t_final,
                              double dt, const StepwiseOptions& options = {});

/// Sum of generators: the reaction operator of a graph with several
/// concurrent processes. An empty list needs an explicit dimension.
Generator generator_of_composition(const std::vector<Generator>& parts,
                                   Eigen::Index dim = -1);

}  // namespace qwalk
