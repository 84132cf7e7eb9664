#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qwalk/error.hpp"

namespace qwalk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// One basis vector of a labelled basis. A label can carry up to three
/// facets of the same vector: a 1-based site number, an occupation
/// bit-vector (one bit per tracked mode, at most one set), and a display
/// name such as "S" or "P_T". Lookups match whichever facets are set.
///
/// Site numbers are 1-based in every public interface; matrix storage is
/// 0-based internally.
struct BasisLabel {
  int site = 0;                 // 1-based; 0 when unset
  std::string name;             // empty when unset
  std::vector<int> occupation;  // empty when unset

  static BasisLabel Site(int index) {
    BasisLabel l;
    l.site = index;
    return l;
  }
  static BasisLabel Occupation(std::vector<int> bits) {
    BasisLabel l;
    l.occupation = std::move(bits);
    return l;
  }
  static BasisLabel Named(std::string name) {
    BasisLabel l;
    l.name = std::move(name);
    return l;
  }
};

using Basis = std::vector<BasisLabel>;

/// Basis of dim anonymous sites named "psi1".."psiN".
Basis default_site_basis(Eigen::Index dim);

/// Checks sizes, 1..N site range, name/site uniqueness, and the
/// single-walker occupation rule. Throws on violation.
void validate_basis(const Basis& basis, Eigen::Index dim);

/// Resolves a query label against a basis, matching by name, then site,
/// then occupation. Throws Errc::unknown_label when nothing matches.
Eigen::Index resolve_label(const Basis& basis, const BasisLabel& query);

/// Acceptance thresholds for density-operator construction.
struct Tolerances {
  double hermiticity = 1e-12;     // max |rho_mn - conj(rho_nm)|
  double min_eigenvalue = 1e-10;  // eigenvalues >= -min_eigenvalue
  double trace_slack = 1e-12;     // trace within [-slack, 1 + slack]
  double unit_trace = 1e-10;      // |trace - 1| bound when normalized
};

/// Looser thresholds used for states coming out of long propagations,
/// where roundoff accumulates beyond construction-level accuracy.
Tolerances propagation_tolerances();

enum class TraceClass { normalized, subnormalized };

/// Validated density operator over a labelled basis. Immutable after
/// construction; safe to share across threads. Subnormalized operators
/// (trace < 1) are first-class: they appear as conditioned branch states
/// and under trace-decreasing evolution.
class DensityOperator {
 public:
  /// An empty basis stands for the default "psi1..psiN" site labels.
  DensityOperator(Matrix entries, Basis basis, TraceClass trace_class,
                  const Tolerances& tol = {});

  /// Convenience constructor with a default "psi1..psiN" basis.
  DensityOperator(Matrix entries, TraceClass trace_class,
                  const Tolerances& tol = {});

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  const Basis& basis() const { return basis_; }
  TraceClass trace_class() const { return trace_class_; }

  // Diagnostics recorded at construction.
  double trace() const { return trace_; }
  double min_eigenvalue() const { return min_eigenvalue_; }
  double hermiticity_defect() const { return hermiticity_defect_; }

 private:
  Matrix entries_;
  Basis basis_;
  TraceClass trace_class_;
  double trace_ = 0.0;
  double min_eigenvalue_ = 0.0;
  double hermiticity_defect_ = 0.0;
};

/// Validating constructor as a free function.
DensityOperator new_density(const Matrix& entries, const Basis& basis,
                            TraceClass trace_class, const Tolerances& tol = {});

/// <bra| rho |ket> with labels resolved against rho's basis.
Complex matrix_element(const DensityOperator& rho, const BasisLabel& bra,
                       const BasisLabel& ket);

/// max |m - m^dagger| over all entries.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Smallest eigenvalue of the Hermitian part (m + m^dagger)/2.
template <typename Derived>
double min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace qwalk
