#include "qwalk/maps.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace qwalk {

namespace {

void check_site_pair(int j, int k, Eigen::Index dim) {
  if (dim < 2) {
    throw Error(Errc::bad_indices, "need at least two sites, got dim " +
                                       std::to_string(dim));
  }
  if (j < 1 || j > dim || k < 1 || k > dim) {
    std::ostringstream msg;
    msg << "site pair (" << j << ", " << k << ") outside 1.." << dim;
    throw Error(Errc::bad_indices, msg.str());
  }
  if (j == k) {
    throw Error(Errc::bad_indices,
                "site pair must involve two distinct sites, got (" +
                    std::to_string(j) + ", " + std::to_string(k) + ")");
  }
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << what << " must lie in [0, 1], got " << p;
    throw Error(Errc::bad_probability, msg.str());
  }
}

}  // namespace

Matrix site_transfer(int to, int from, Eigen::Index dim) {
  Matrix m = Matrix::Zero(dim, dim);
  m(to - 1, from - 1) = 1.0;
  return m;
}

Matrix site_projector(int site, Eigen::Index dim) {
  Matrix m = Matrix::Zero(dim, dim);
  m(site - 1, site - 1) = 1.0;
  return m;
}

Matrix site_complement(int site, Eigen::Index dim) {
  Matrix m = Matrix::Identity(dim, dim);
  m(site - 1, site - 1) = 0.0;
  return m;
}

KrausMap::KrausMap(std::vector<Matrix> operators,
                   std::vector<std::string> labels, double duration,
                   bool preserving, const MapTolerances& tol)
    : operators_(std::move(operators)),
      labels_(std::move(labels)),
      duration_(duration),
      preserving_(preserving) {
  if (operators_.empty()) {
    throw Error(Errc::invalid_argument, "map needs at least one branch");
  }
  if (labels_.size() != operators_.size()) {
    throw Error(Errc::invalid_argument,
                "branch labels and operators differ in count");
  }
  if (duration_ < 0.0) {
    throw Error(Errc::invalid_argument, "map duration must be nonnegative");
  }
  dim_ = operators_.front().rows();
  for (const Matrix& k : operators_) {
    if (k.rows() != dim_ || k.cols() != dim_) {
      throw Error(Errc::dimension_mismatch,
                  "all branch operators must share one square dimension");
    }
  }
  if (preserving_) {
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (const Matrix& k : operators_) sum += k.adjoint() * k;
    completeness_defect_ =
        (sum - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
    if (completeness_defect_ > tol.completeness) {
      std::ostringstream msg;
      msg << "completeness defect " << completeness_defect_ << " exceeds "
          << tol.completeness;
      throw Error(Errc::bad_probability, msg.str());
    }
  }
}

KrausMap KrausMap::identity(Eigen::Index dim) {
  return KrausMap({Matrix::Identity(dim, dim)}, {"identity"}, 0.0, true);
}

const Matrix& KrausMap::op(Eigen::Index n) const {
  if (n < 0 || n >= branch_count()) {
    throw Error(Errc::branch_out_of_range,
                "branch " + std::to_string(n) + " of " +
                    std::to_string(branch_count()));
  }
  return operators_[static_cast<std::size_t>(n)];
}

const std::string& KrausMap::label(Eigen::Index n) const {
  if (n < 0 || n >= branch_count()) {
    throw Error(Errc::branch_out_of_range,
                "branch " + std::to_string(n) + " of " +
                    std::to_string(branch_count()));
  }
  return labels_[static_cast<std::size_t>(n)];
}

KrausMap amplitude_damping(int j, int k, double gamma, Eigen::Index dim,
                           double duration) {
  check_site_pair(j, k, dim);
  check_probability(gamma, "transfer probability");
  std::vector<Matrix> ops;
  ops.push_back(std::sqrt(gamma) * site_transfer(j, k, dim));
  ops.push_back(site_complement(k, dim) +
                std::sqrt(1.0 - gamma) * site_projector(k, dim));
  std::vector<std::string> labels = {
      "jump " + std::to_string(k) + "->" + std::to_string(j), "no jump"};
  return KrausMap(std::move(ops), std::move(labels), duration, true);
}

KrausMap dephasing(int j, int k, double mu, Eigen::Index dim,
                   double duration) {
  check_site_pair(j, k, dim);
  check_probability(mu, "dephasing probability");
  std::vector<Matrix> ops;
  ops.push_back(std::sqrt(mu) * site_projector(k, dim));
  ops.push_back(site_complement(k, dim) +
                std::sqrt(1.0 - mu) * site_projector(k, dim));
  std::vector<std::string> labels = {"kick " + std::to_string(k), "no kick"};
  return KrausMap(std::move(ops), std::move(labels), duration, true);
}

KrausMap unitary_map(int j, int k, double omega_j, double omega_k,
                     double coupling, double dt, Eigen::Index dim) {
  check_site_pair(j, k, dim);
  if (dt < 0.0) {
    throw Error(Errc::invalid_argument, "time step must be nonnegative");
  }
  Matrix h = omega_j * site_projector(j, dim) +
             omega_k * site_projector(k, dim) +
             coupling * (site_transfer(j, k, dim) + site_transfer(k, j, dim));
  Matrix u = (Complex(0.0, -dt) * h).exp();
  MapTolerances tol;
  double defect =
      (u.adjoint() * u - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (defect > tol.unitarity) {
    std::ostringstream msg;
    msg << "unitarity defect " << defect << " exceeds " << tol.unitarity;
    throw Error(Errc::numeric_failure, msg.str());
  }
  return KrausMap({std::move(u)}, {"unitary"}, dt, true);
}

double transition_probability_alpha(int j, int k, double omega_j,
                                    double omega_k, double coupling,
                                    double dt) {
  if (j < 1 || k < 1 || j == k) {
    throw Error(Errc::bad_indices,
                "need two distinct 1-based sites, got (" + std::to_string(j) +
                    ", " + std::to_string(k) + ")");
  }
  if (dt < 0.0) {
    throw Error(Errc::invalid_argument, "time must be nonnegative");
  }
  if (coupling == 0.0) return 0.0;
  double zeta = 0.5 * std::hypot(omega_k - omega_j, 2.0 * coupling);
  double x = 2.0 * zeta * dt;
  double alpha;
  if (x < 1e-6) {
    // 1 - cos(x) = x^2/2 - x^4/24 + ...
    double odt = coupling * dt;
    alpha = odt * odt * (1.0 - x * x / 12.0);
  } else {
    double r = coupling / zeta;
    alpha = 0.5 * r * r * (1.0 - std::cos(x));
  }
  if (alpha < 0.0) alpha = 0.0;
  if (alpha > 1.0) alpha = 1.0;
  return alpha;
}

KrausMap compose(const KrausMap& outer, const KrausMap& inner) {
  if (outer.dim() != inner.dim()) {
    throw Error(Errc::dimension_mismatch,
                "composed maps differ in dimension: " +
                    std::to_string(outer.dim()) + " vs " +
                    std::to_string(inner.dim()));
  }
  MapTolerances tol;
  std::vector<Matrix> ops;
  std::vector<std::string> labels;
  for (Eigen::Index m = 0; m < outer.branch_count(); ++m) {
    for (Eigen::Index n = 0; n < inner.branch_count(); ++n) {
      Matrix prod = outer.op(m) * inner.op(n);
      if (prod.cwiseAbs().maxCoeff() < tol.prune) continue;  // redundant branch
      ops.push_back(std::move(prod));
      labels.push_back(inner.label(n) + " then " + outer.label(m));
    }
  }
  if (ops.empty()) {
    // Every product vanished; keep the zero map explicit rather than empty.
    ops.push_back(Matrix::Zero(outer.dim(), outer.dim()));
    labels.push_back("null");
  }
  double duration =
      outer.duration() > inner.duration() ? outer.duration() : inner.duration();
  return KrausMap(std::move(ops), std::move(labels), duration,
                  outer.preserving() && inner.preserving());
}

Matrix apply(const KrausMap& map, const Matrix& m) {
  if (m.rows() != map.dim() || m.cols() != map.dim()) {
    throw Error(Errc::dimension_mismatch,
                "state dimension " + std::to_string(m.rows()) +
                    " does not match map dimension " +
                    std::to_string(map.dim()));
  }
  Matrix out = Matrix::Zero(map.dim(), map.dim());
  for (const Matrix& k : map.operators()) out += k * m * k.adjoint();
  return out;
}

DensityOperator apply(const KrausMap& map, const DensityOperator& rho) {
  Matrix out = qwalk::apply(map, rho.matrix());
  TraceClass cls = (map.preserving() &&
                    rho.trace_class() == TraceClass::normalized)
                       ? TraceClass::normalized
                       : TraceClass::subnormalized;
  return DensityOperator(std::move(out), rho.basis(), cls);
}

double branch_probability(const KrausMap& map, Eigen::Index n,
                          const DensityOperator& rho) {
  if (rho.dim() != map.dim()) {
    throw Error(Errc::dimension_mismatch,
                "state and map dimensions differ");
  }
  const Matrix& k = map.op(n);
  return (k.adjoint() * k * rho.matrix()).trace().real();
}

std::pair<DensityOperator, double> conditioned_state(
    const KrausMap& map, Eigen::Index n, const DensityOperator& rho) {
  if (rho.dim() != map.dim()) {
    throw Error(Errc::dimension_mismatch,
                "state and map dimensions differ");
  }
  const Matrix& k = map.op(n);
  Matrix out = k * rho.matrix() * k.adjoint();
  double weight = out.trace().real();
  return {DensityOperator(std::move(out), rho.basis(),
                          TraceClass::subnormalized),
          weight};
}

std::vector<ConditionedBranch> minimal_basis_conditionals(
    double k21, double k23, double dt, const DensityOperator& rho) {
  if (rho.dim() != 3) {
    throw Error(Errc::dimension_mismatch,
                "minimal-basis decomposition needs a three-site state");
  }
  if (k21 < 0.0 || k23 < 0.0 || dt < 0.0) {
    throw Error(Errc::bad_rates, "rates and dt must be nonnegative");
  }
  double g21 = k21 * dt;
  double g23 = k23 * dt;
  if (g21 > 1.0 || g23 > 1.0) {
    throw Error(Errc::bad_rates,
                "rate*dt exceeds 1; shrink the step");
  }

  // Exact branch operators of the composed map on the lumped graph.
  Matrix jump12 = std::sqrt(g21) * site_transfer(2, 1, 3);
  Matrix jump32 = std::sqrt(g23) * site_transfer(2, 3, 3);
  Matrix no_jump =
      (site_complement(3, 3) + std::sqrt(1.0 - g23) * site_projector(3, 3)) *
      (site_complement(1, 3) + std::sqrt(1.0 - g21) * site_projector(1, 3));

  auto branch = [&rho](std::string label, const Matrix& op) {
    Matrix out = op * rho.matrix() * op.adjoint();
    return ConditionedBranch{std::move(label),
                             DensityOperator(std::move(out), rho.basis(),
                                             TraceClass::subnormalized)};
  };
  std::vector<ConditionedBranch> branches;
  branches.push_back(branch("jump 1->2", jump12));
  branches.push_back(branch("jump 3->2", jump32));
  branches.push_back(branch("no jump", no_jump));
  return branches;
}

}  // namespace qwalk
