#include "qwalk/generators.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qwalk {

namespace {

void check_pair(int j, int k, Eigen::Index dim, const char* what) {
  if (j < 1 || j > dim || k < 1 || k > dim || j == k) {
    std::ostringstream msg;
    msg << what << " needs two distinct sites in 1.." << dim << ", got ("
        << j << ", " << k << ")";
    throw Error(Errc::bad_indices, msg.str());
  }
}

void check_rate(double rate, const char* what) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    std::ostringstream msg;
    msg << what << " must be a finite nonnegative rate, got " << rate;
    throw Error(Errc::bad_rates, msg.str());
  }
}

Matrix two_site_hamiltonian(const UnitaryTerm& t, Eigen::Index dim) {
  return t.omega_j * site_projector(t.j, dim) +
         t.omega_k * site_projector(t.k, dim) +
         t.coupling *
             (site_transfer(t.j, t.k, dim) + site_transfer(t.k, t.j, dim));
}

}  // namespace

Generator::Generator(Eigen::Index dim)
    : dim_(dim), cache_(std::make_shared<Cache>()) {
  if (dim_ < 1) {
    throw Error(Errc::invalid_argument,
                "generator dimension must be positive");
  }
}

Generator Generator::zero(Eigen::Index dim) { return Generator(dim); }

Generator Generator::amplitude_damping(int to, int from, double rate,
                                       Eigen::Index dim) {
  check_pair(to, from, dim, "population transfer");
  check_rate(rate, "transfer rate");
  Generator g(dim);
  g.damping_.push_back({to, from, rate});
  return g;
}

Generator Generator::dephasing(int j, int k, double rate, Eigen::Index dim) {
  check_pair(j, k, dim, "dephasing");
  check_rate(rate, "dephasing rate");
  Generator g(dim);
  g.dephasing_.push_back({j, k, rate});
  return g;
}

Generator Generator::unitary(int j, int k, double omega_j, double omega_k,
                             double coupling, Eigen::Index dim) {
  check_pair(j, k, dim, "coherent coupling");
  if (!std::isfinite(omega_j) || !std::isfinite(omega_k) ||
      !std::isfinite(coupling)) {
    throw Error(Errc::invalid_argument,
                "coherent parameters must be finite");
  }
  Generator g(dim);
  g.unitary_.push_back({j, k, omega_j, omega_k, coupling});
  return g;
}

Generator Generator::from_sandwich_terms(Eigen::Index dim,
                                         std::vector<SandwichTerm> terms) {
  Generator g(dim);
  for (const SandwichTerm& t : terms) {
    if (t.left.rows() != dim || t.left.cols() != dim ||
        t.right.rows() != dim || t.right.cols() != dim) {
      throw Error(Errc::dimension_mismatch,
                  "sandwich term does not match generator dimension");
    }
  }
  g.sandwich_ = std::move(terms);
  return g;
}

Generator& Generator::operator+=(const Generator& other) {
  if (other.dim_ != dim_) {
    throw Error(Errc::dimension_mismatch,
                "cannot sum generators of dimension " + std::to_string(dim_) +
                    " and " + std::to_string(other.dim_));
  }
  damping_.insert(damping_.end(), other.damping_.begin(),
                  other.damping_.end());
  dephasing_.insert(dephasing_.end(), other.dephasing_.begin(),
                    other.dephasing_.end());
  unitary_.insert(unitary_.end(), other.unitary_.begin(),
                  other.unitary_.end());
  sandwich_.insert(sandwich_.end(), other.sandwich_.begin(),
                   other.sandwich_.end());
  cache_ = std::make_shared<Cache>();  // terms changed; drop any built matrix
  return *this;
}

const Matrix& Generator::liouvillian() const {
  std::call_once(cache_->once, [this] {
    const Eigen::Index d = dim_;
    const Matrix id = Matrix::Identity(d, d);
    Matrix l = Matrix::Zero(d * d, d * d);
    auto sandwich = [&](const Matrix& left, const Matrix& right) {
      l += Eigen::kroneckerProduct(right.transpose(), left).eval();
    };
    for (const DampingTerm& t : damping_) {
      Matrix q = site_transfer(t.to, t.from, d);
      Matrix p = site_projector(t.from, d);
      sandwich(t.rate * q, q.adjoint());
      sandwich(-0.5 * t.rate * p, id);
      sandwich(id, -0.5 * t.rate * p);
    }
    for (const DephasingTerm& t : dephasing_) {
      Matrix p = site_projector(t.k, d);
      sandwich(t.rate * p, p);
      sandwich(-0.5 * t.rate * p, id);
      sandwich(id, -0.5 * t.rate * p);
    }
    for (const UnitaryTerm& t : unitary_) {
      Matrix h = two_site_hamiltonian(t, d);
      sandwich(Complex(0.0, -1.0) * h, id);
      sandwich(id, Complex(0.0, 1.0) * h);
    }
    for (const SandwichTerm& t : sandwich_) sandwich(t.left, t.right);
    cache_->liouvillian = std::move(l);
  });
  return cache_->liouvillian;
}

Matrix act(const Generator& g, const Matrix& rho) {
  const Eigen::Index d = g.dim();
  if (rho.rows() != d || rho.cols() != d) {
    throw Error(Errc::dimension_mismatch,
                "state dimension " + std::to_string(rho.rows()) +
                    " does not match generator dimension " +
                    std::to_string(d));
  }
  Matrix out = Matrix::Zero(d, d);
  for (const DampingTerm& t : g.damping_terms()) {
    Matrix q = site_transfer(t.to, t.from, d);
    Matrix p = site_projector(t.from, d);
    out += t.rate * (q * rho * q.adjoint() - 0.5 * (p * rho + rho * p));
  }
  for (const DephasingTerm& t : g.dephasing_terms()) {
    Matrix p = site_projector(t.k, d);
    out += t.rate * (p * rho * p - 0.5 * (p * rho + rho * p));
  }
  for (const UnitaryTerm& t : g.unitary_terms()) {
    Matrix h = two_site_hamiltonian(t, d);
    out += Complex(0.0, -1.0) * (h * rho - rho * h);
  }
  for (const SandwichTerm& t : g.sandwich_terms()) {
    out += t.left * rho * t.right;
  }
  return out;
}

Matrix act(const Generator& g, const DensityOperator& rho) {
  return act(g, rho.matrix());
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) {
    throw Error(Errc::dimension_mismatch, "vectorized length mismatch");
  }
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Liouvillian to_liouvillian(const Generator& g) {
  return Liouvillian{g.liouvillian()};
}

bool is_trace_preserving(const Generator& g, double tol) {
  const Matrix& l = g.liouvillian();
  Vector id_vec = vec(Matrix::Identity(g.dim(), g.dim()));
  Eigen::RowVectorXcd row = id_vec.adjoint() * l;
  double scale = l.cwiseAbs().maxCoeff();
  if (scale < 1.0) scale = 1.0;
  return row.cwiseAbs().maxCoeff() <= tol * scale;
}

namespace {

struct PropagatedSample {
  Matrix state;        // symmetrized
  double pre_defect;   // Hermiticity defect before symmetrization
};

PropagatedSample exponential_step(const Matrix& liouvillian,
                                  const Matrix& rho0, double t) {
  Matrix propagator = (liouvillian * t).exp();
  if (!propagator.allFinite()) {
    throw Error(Errc::non_convergent,
                "matrix exponential produced non-finite entries");
  }
  Matrix rho_t = unvec(propagator * vec(rho0), rho0.rows());
  double defect = hermiticity_defect(rho_t);
  if (defect > 1e-8) {
    std::ostringstream msg;
    msg << "propagated state lost Hermiticity (defect " << defect << ")";
    throw Error(Errc::numeric_failure, msg.str());
  }
  Matrix sym = 0.5 * (rho_t + rho_t.adjoint());
  return {std::move(sym), defect};
}

TraceClass propagated_class(const Generator& g, const DensityOperator& rho0) {
  return (rho0.trace_class() == TraceClass::normalized &&
          is_trace_preserving(g))
             ? TraceClass::normalized
             : TraceClass::subnormalized;
}

}  // namespace

DensityOperator propagate_exact(const Generator& g,
                                const DensityOperator& rho0, double t) {
  if (t < 0.0) {
    throw Error(Errc::invalid_argument, "propagation time must be >= 0");
  }
  if (rho0.dim() != g.dim()) {
    throw Error(Errc::dimension_mismatch,
                "state and generator dimensions differ");
  }
  PropagatedSample sample = exponential_step(g.liouvillian(), rho0.matrix(), t);
  return DensityOperator(std::move(sample.state), rho0.basis(),
                         propagated_class(g, rho0),
                         propagation_tolerances());
}

TimeSeries propagate_exact_series(const Generator& g,
                                  const DensityOperator& rho0,
                                  const std::vector<double>& times) {
  if (times.empty()) {
    throw Error(Errc::invalid_argument, "need at least one sample time");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] <= times[i - 1])) {
      throw Error(Errc::invalid_argument,
                  "sample times must be nonnegative and strictly increasing");
    }
  }
  if (rho0.dim() != g.dim()) {
    throw Error(Errc::dimension_mismatch,
                "state and generator dimensions differ");
  }
  const Matrix& l = g.liouvillian();
  TraceClass cls = propagated_class(g, rho0);
  TimeSeries series;
  series.times = times;
  series.snapshots.reserve(times.size());
  series.diagnostics.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    PropagatedSample sample = exponential_step(l, rho0.matrix(), times[i]);
    try {
      series.snapshots.emplace_back(std::move(sample.state), rho0.basis(),
                                    cls, propagation_tolerances());
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "sample " << i << " at t=" << times[i] << ": " << e.what();
      throw Error(e.code(), msg.str());
    }
    const DensityOperator& snap = series.snapshots.back();
    series.diagnostics.push_back(
        {snap.trace(), snap.min_eigenvalue(), sample.pre_defect});
  }
  return series;
}

TimeSeries propagate_stepwise(const StepMapBuilder& builder,
                              const DensityOperator& rho0, double t_final,
                              double dt, const StepwiseOptions& options) {
  if (dt <= 0.0 || t_final < 0.0) {
    throw Error(Errc::invalid_argument,
                "need dt > 0 and t_final >= 0");
  }
  if (options.max_rate * dt > options.guard) {
    std::ostringstream msg;
    msg << "step too large: max rate * dt = " << options.max_rate * dt
        << " exceeds guard " << options.guard;
    throw Error(Errc::step_too_large, msg.str());
  }
  KrausMap step = builder(dt);
  if (step.dim() != rho0.dim()) {
    throw Error(Errc::dimension_mismatch,
                "step map and state dimensions differ");
  }
  long n_steps = std::lround(t_final / dt);
  if (n_steps < 1) n_steps = 1;
  int samples = options.samples < 2 ? 2 : options.samples;

  std::vector<long> sample_steps;
  sample_steps.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    long s = std::lround(static_cast<double>(i) * static_cast<double>(n_steps) /
                         (samples - 1));
    if (sample_steps.empty() || s > sample_steps.back()) {
      sample_steps.push_back(s);
    }
  }

  TimeSeries series;
  TraceClass cls = (step.preserving() &&
                    rho0.trace_class() == TraceClass::normalized)
                       ? TraceClass::normalized
                       : TraceClass::subnormalized;
  Matrix state = rho0.matrix();
  std::size_t next = 0;
  for (long n = 0; n <= n_steps; ++n) {
    if (next < sample_steps.size() && sample_steps[next] == n) {
      double defect = hermiticity_defect(state);
      Matrix sym = 0.5 * (state + state.adjoint());
      try {
        series.snapshots.emplace_back(std::move(sym), rho0.basis(), cls,
                                      propagation_tolerances());
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "sample " << next << " at t=" << n * dt << ": " << e.what();
        throw Error(e.code(), msg.str());
      }
      const DensityOperator& snap = series.snapshots.back();
      series.times.push_back(n * dt);
      series.diagnostics.push_back(
          {snap.trace(), snap.min_eigenvalue(), defect});
      ++next;
    }
    if (n < n_steps) state = qwalk::apply(step, state);
  }
  return series;
}

Generator generator_of_composition(const std::vector<Generator>& parts,
                                   Eigen::Index dim) {
  if (parts.empty()) {
    if (dim < 1) {
      throw Error(Errc::invalid_argument,
                  "empty composition needs an explicit dimension");
    }
    return Generator::zero(dim);
  }
  Generator total = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) total += parts[i];
  return total;
}

}  // namespace qwalk
