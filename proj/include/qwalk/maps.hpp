#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qwalk/densop.hpp"

namespace qwalk {

/// |to><from| on a dim-dimensional site basis (1-based site numbers).
Matrix site_transfer(int to, int from, Eigen::Index dim);
/// |site><site|.
Matrix site_projector(int site, Eigen::Index dim);
/// 1 - |site><site|.
Matrix site_complement(int site, Eigen::Index dim);

struct MapTolerances {
  double completeness = 1e-12;  // || sum K'K - 1 ||_max for preserving maps
  double prune = 1e-15;         // branches below this max-norm are dropped
  double unitarity = 1e-12;     // || U'U - 1 ||_max for unitary branches
};

/// A completely positive map in operator-sum form: rho -> sum_n K_n rho K_n'.
/// Each branch corresponds to one observable event over the map's duration.
/// Preserving maps satisfy the completeness condition sum_n K_n' K_n = 1.
class KrausMap {
 public:
  KrausMap(std::vector<Matrix> operators, std::vector<std::string> labels,
           double duration, bool preserving, const MapTolerances& tol = {});

  static KrausMap identity(Eigen::Index dim);

  Eigen::Index dim() const { return dim_; }
  Eigen::Index branch_count() const {
    return static_cast<Eigen::Index>(operators_.size());
  }
  const Matrix& op(Eigen::Index n) const;
  const std::vector<Matrix>& operators() const { return operators_; }
  const std::string& label(Eigen::Index n) const;
  const std::vector<std::string>& labels() const { return labels_; }
  double duration() const { return duration_; }
  bool preserving() const { return preserving_; }

  /// || sum K'K - 1 ||_max, measured at construction.
  double completeness_defect() const { return completeness_defect_; }

 private:
  Eigen::Index dim_ = 0;
  std::vector<Matrix> operators_;
  std::vector<std::string> labels_;
  double duration_ = 0.0;
  bool preserving_ = false;
  double completeness_defect_ = 0.0;
};

/// Population transfer from site k to site j with probability gamma.
/// Branches: "jump k->j" (sqrt(gamma) |j><k|) and "no jump". The subscript
/// order fixes the direction: swapping j and k reverses the process.
KrausMap amplitude_damping(int j, int k, double gamma, Eigen::Index dim,
                           double duration = 0.0);

/// Coherence decay between sites j and k with probability mu, leaving all
/// populations untouched. The projector acts on the second index k.
KrausMap dephasing(int j, int k, double mu, Eigen::Index dim,
                   double duration = 0.0);

/// Single-branch unitary exp(-i H dt) generated by the two-site Hamiltonian
/// H = omega_j |j><j| + omega_k |k><k| + coupling (|j><k| + |k><j|),
/// with hbar = 1 (omegas and coupling in rad/s).
KrausMap unitary_map(int j, int k, double omega_j, double omega_k,
                     double coupling, double dt, Eigen::Index dim);

/// Probability of finding the system at site j after time dt when it started
/// at site k under the two-site Hamiltonian above:
///   alpha = coupling^2 / (2 zeta^2) * [1 - cos(2 zeta dt)],
///   zeta  = sqrt((omega_k - omega_j)^2 + 4 coupling^2) / 2.
/// The zeta*dt -> 0 regime is evaluated by series expansion.
double transition_probability_alpha(int j, int k, double omega_j,
                                    double omega_k, double coupling,
                                    double dt);

/// Composition: inner acts first, then outer. Branches are all pairwise
/// operator products; all-zero products are pruned.
KrausMap compose(const KrausMap& outer, const KrausMap& inner);

/// sum_n K_n m K_n' on a raw matrix.
Matrix apply(const KrausMap& map, const Matrix& m);
/// Same, returning a validated state on the input's basis.
DensityOperator apply(const KrausMap& map, const DensityOperator& rho);

/// tr[K_n' K_n rho]: probability of observing branch n.
double branch_probability(const KrausMap& map, Eigen::Index n,
                          const DensityOperator& rho);

/// Unnormalized conditioned state K_n rho K_n' and its trace.
std::pair<DensityOperator, double> conditioned_state(const KrausMap& map,
                                                     Eigen::Index n,
                                                     const DensityOperator& rho);

struct ConditionedBranch {
  std::string label;
  DensityOperator state;  // subnormalized; weight is state.trace()
};

/// Branch decomposition of one step on the three-site graph where both
/// sites 1 and 3 drain into site 2 (rates k21, k23, probabilities k*dt).
/// Returns the "jump 1->2", "jump 3->2", and "no jump" conditioned states;
/// the no-jump branch reproduces evolution conditioned on no transition.
std::vector<ConditionedBranch> minimal_basis_conditionals(
    double k21, double k23, double dt, const DensityOperator& rho);

}  // namespace qwalk
