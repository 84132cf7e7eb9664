#include "qwalk/densop.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace qwalk {

Basis default_site_basis(Eigen::Index dim) {
  Basis basis;
  basis.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index k = 0; k < dim; ++k) {
    BasisLabel label;
    label.site = static_cast<int>(k) + 1;
    label.name = "psi" + std::to_string(k + 1);
    basis.push_back(std::move(label));
  }
  return basis;
}

void validate_basis(const Basis& basis, Eigen::Index dim) {
  if (static_cast<Eigen::Index>(basis.size()) != dim) {
    throw Error(Errc::dimension_mismatch,
                "basis has " + std::to_string(basis.size()) +
                    " labels for dimension " + std::to_string(dim));
  }
  std::set<int> sites;
  std::set<std::string> names;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const BasisLabel& l = basis[i];
    if (l.site != 0) {
      if (l.site < 1 || l.site > static_cast<int>(dim)) {
        throw Error(Errc::bad_indices,
                    "basis label " + std::to_string(i) + " has site " +
                        std::to_string(l.site) + " outside 1.." +
                        std::to_string(dim));
      }
      if (!sites.insert(l.site).second) {
        throw Error(Errc::bad_indices, "duplicate site " +
                                           std::to_string(l.site) +
                                           " in basis");
      }
    }
    if (!l.name.empty() && !names.insert(l.name).second) {
      throw Error(Errc::bad_indices, "duplicate name '" + l.name +
                                         "' in basis");
    }
    if (!l.occupation.empty()) {
      int bits = 0;
      for (int b : l.occupation) {
        if (b != 0 && b != 1) {
          throw Error(Errc::bad_indices,
                      "occupation entries must be 0 or 1");
        }
        bits += b;
      }
      if (bits > 1) {
        throw Error(Errc::bad_indices,
                    "occupation label has more than one walker");
      }
    }
  }
}

Eigen::Index resolve_label(const Basis& basis, const BasisLabel& query) {
  if (!query.name.empty()) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (basis[i].name == query.name) return static_cast<Eigen::Index>(i);
    }
  }
  if (query.site != 0) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (basis[i].site == query.site) return static_cast<Eigen::Index>(i);
    }
  }
  if (!query.occupation.empty()) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (basis[i].occupation == query.occupation)
        return static_cast<Eigen::Index>(i);
    }
  }
  std::ostringstream msg;
  msg << "label not found in basis (";
  if (!query.name.empty()) msg << "name '" << query.name << "'";
  if (query.site != 0) msg << " site " << query.site;
  if (!query.occupation.empty()) msg << " occupation bits";
  msg << ")";
  throw Error(Errc::unknown_label, msg.str());
}

Tolerances propagation_tolerances() {
  Tolerances tol;
  tol.hermiticity = 1e-10;
  tol.min_eigenvalue = 1e-8;
  tol.trace_slack = 1e-8;
  tol.unit_trace = 1e-8;
  return tol;
}

DensityOperator::DensityOperator(Matrix entries, Basis basis,
                                 TraceClass trace_class,
                                 const Tolerances& tol)
    : entries_(std::move(entries)),
      basis_(std::move(basis)),
      trace_class_(trace_class) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw Error(Errc::dimension_mismatch,
                "density operator must be square and nonempty, got " +
                    std::to_string(entries_.rows()) + "x" +
                    std::to_string(entries_.cols()));
  }
  if (basis_.empty()) basis_ = default_site_basis(entries_.rows());
  validate_basis(basis_, entries_.rows());

  hermiticity_defect_ = qwalk::hermiticity_defect(entries_);
  if (hermiticity_defect_ > tol.hermiticity) {
    std::ostringstream msg;
    msg << "hermiticity defect " << hermiticity_defect_ << " exceeds "
        << tol.hermiticity;
    throw Error(Errc::non_hermitian, msg.str());
  }

  trace_ = entries_.trace().real();
  if (trace_ < -tol.trace_slack || trace_ > 1.0 + tol.trace_slack) {
    std::ostringstream msg;
    msg << "trace " << trace_ << " outside [0, 1]";
    throw Error(Errc::trace_out_of_range, msg.str());
  }
  if (trace_class_ == TraceClass::normalized &&
      std::abs(trace_ - 1.0) > tol.unit_trace) {
    std::ostringstream msg;
    msg << "normalized operator has trace " << trace_;
    throw Error(Errc::trace_out_of_range, msg.str());
  }

  min_eigenvalue_ = qwalk::min_eigenvalue(entries_);
  if (min_eigenvalue_ < -tol.min_eigenvalue) {
    std::ostringstream msg;
    msg << "minimum eigenvalue " << min_eigenvalue_ << " below -"
        << tol.min_eigenvalue;
    throw Error(Errc::negative_eigenvalue, msg.str());
  }
}

DensityOperator::DensityOperator(Matrix entries, TraceClass trace_class,
                                 const Tolerances& tol)
    : DensityOperator(std::move(entries), Basis{}, trace_class, tol) {}

DensityOperator new_density(const Matrix& entries, const Basis& basis,
                            TraceClass trace_class, const Tolerances& tol) {
  return DensityOperator(entries, basis, trace_class, tol);
}

Complex matrix_element(const DensityOperator& rho, const BasisLabel& bra,
                       const BasisLabel& ket) {
  Eigen::Index row = resolve_label(rho.basis(), bra);
  Eigen::Index col = resolve_label(rho.basis(), ket);
  return rho.matrix()(row, col);
}

}  // namespace qwalk
