#pragma once

// Dense complex linear algebra at desk scale (dimension <= 64): pure states,
// density operators, POVM effects, tensor products and Born-rule
// probabilities. Every value is immutable after construction and every
// operation is a pure function.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ontikit/errors.hpp"

namespace ontikit::qcore {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Construction-time tolerance: hermiticity, positivity, normalization.
inline constexpr double kElementTol = 1e-12;
// Aggregate tolerance for sums over many entries: POVM completeness,
// Born-rule boundary clamping.
inline constexpr double kAggregateTol = 1e-9;
inline constexpr int kMaxDim = 64;

inline double hermiticity_residual(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Kronecker product of coefficient vectors, row-major: the left factor
// carries the high-order index, entry (i*dim_b + j) = a[i]*b[j].
inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j)
      out(i * b.size() + j) = a(i) * b(j);
  return out;
}

class PureState {
public:
  explicit PureState(Vector amplitudes) : amps_(std::move(amplitudes)) {
    if (amps_.size() == 0)
      throw std::invalid_argument("PureState: amplitude vector is empty");
    if (amps_.size() > kMaxDim)
      throw std::invalid_argument("PureState: dimension exceeds " + std::to_string(kMaxDim));
    if (std::abs(amps_.norm() - 1.0) > kElementTol)
      throw std::invalid_argument("PureState: amplitudes are not unit norm");
  }

  static PureState basis(int dim, int index) {
    if (dim <= 0 || index < 0 || index >= dim)
      throw std::invalid_argument("PureState::basis: index out of range");
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return PureState(std::move(v));
  }

  int dim() const { return static_cast<int>(amps_.size()); }
  const Vector& amplitudes() const { return amps_; }
  Complex amplitude(int i) const { return amps_(i); }
  Matrix projector() const { return amps_ * amps_.adjoint(); }

private:
  Vector amps_;
};

class DensityOperator {
public:
  explicit DensityOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
      throw std::invalid_argument("DensityOperator: matrix must be square and nonempty");
    if (m_.rows() > kMaxDim)
      throw std::invalid_argument("DensityOperator: dimension exceeds " + std::to_string(kMaxDim));
    if (hermiticity_residual(m_) > kElementTol)
      throw std::invalid_argument("DensityOperator: matrix is not hermitian");
    if (std::abs(m_.trace().real() - 1.0) > kElementTol || std::abs(m_.trace().imag()) > kElementTol)
      throw std::invalid_argument("DensityOperator: trace differs from 1");
    if (hermitian_eigenvalues(m_).minCoeff() < -kElementTol)
      throw std::invalid_argument("DensityOperator: negative eigenvalue");
  }

  static DensityOperator pure(const PureState& s) { return DensityOperator(s.projector()); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

private:
  Matrix m_;
};

class Effect {
public:
  explicit Effect(Matrix m) : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.rows() != m_.cols())
      throw std::invalid_argument("Effect: matrix must be square and nonempty");
    if (m_.rows() > kMaxDim)
      throw std::invalid_argument("Effect: dimension exceeds " + std::to_string(kMaxDim));
    if (hermiticity_residual(m_) > kElementTol)
      throw std::invalid_argument("Effect: matrix is not hermitian");
    const Eigen::VectorXd eigs = hermitian_eigenvalues(m_);
    if (eigs.minCoeff() < -kElementTol || eigs.maxCoeff() > 1.0 + kElementTol)
      throw std::invalid_argument("Effect: eigenvalues outside [0, 1]");
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

private:
  Matrix m_;
};

// Validation report for a candidate POVM given as raw matrices, so that
// invalid inputs can be diagnosed rather than rejected at construction.
struct PovmReport {
  struct Violation {
    std::string invariant;  // "hermiticity" | "positivity" | "completeness"
    int effect_index;       // -1 for the aggregate completeness check
    double residual;
  };
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  double worst_residual() const {
    double w = 0.0;
    for (const auto& v : violations) w = std::max(w, v.residual);
    return w;
  }
};

inline PovmReport validate_povm(const std::vector<Matrix>& effects) {
  if (effects.empty())
    throw std::invalid_argument("validate_povm: empty effect list");
  const Eigen::Index d = effects.front().rows();
  for (const auto& e : effects)
    if (e.rows() != d || e.cols() != d)
      throw std::invalid_argument("validate_povm: effects must share one square dimension");

  PovmReport report;
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < effects.size(); ++k) {
    const double herm = hermiticity_residual(effects[k]);
    if (herm > kElementTol)
      report.violations.push_back({"hermiticity", static_cast<int>(k), herm});
    const double lo = hermitian_eigenvalues(0.5 * (effects[k] + effects[k].adjoint())).minCoeff();
    if (lo < -kElementTol)
      report.violations.push_back({"positivity", static_cast<int>(k), -lo});
    sum += effects[k];
  }
  const double completeness = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (completeness > kAggregateTol)
    report.violations.push_back({"completeness", -1, completeness});
  return report;
}

class Povm {
public:
  explicit Povm(std::vector<Effect> effects) : effects_(std::move(effects)) {
    if (effects_.empty()) throw std::invalid_argument("Povm: no effects");
    std::vector<Matrix> raw;
    raw.reserve(effects_.size());
    for (const auto& e : effects_) raw.push_back(e.matrix());
    const PovmReport report = validate_povm(raw);
    if (!report.valid())
      throw std::invalid_argument("Povm: invariant violated, worst residual " +
                                  std::to_string(report.worst_residual()));
  }

  int dim() const { return effects_.front().dim(); }
  int size() const { return static_cast<int>(effects_.size()); }
  const std::vector<Effect>& effects() const { return effects_; }
  const Effect& effect(int k) const { return effects_.at(static_cast<std::size_t>(k)); }

private:
  std::vector<Effect> effects_;
};

inline PureState tensor(const PureState& a, const PureState& b) {
  return PureState(kron(a.amplitudes(), b.amplitudes()));
}

// |<a|b>| in [0, 1].
inline double overlap(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("overlap: dimension mismatch");
  return std::min(std::abs(a.amplitudes().dot(b.amplitudes())), 1.0);
}

// Re <s|m|s> for an arbitrary square matrix; the raw expectation used by
// certificate verification and the exclusion solver.
inline double expectation(const PureState& s, const Matrix& m) {
  if (m.rows() != s.dim() || m.cols() != s.dim())
    throw std::invalid_argument("expectation: dimension mismatch");
  return (s.amplitudes().adjoint() * m * s.amplitudes())(0, 0).real();
}

inline double born_probability(const DensityOperator& rho, const Effect& e) {
  if (rho.dim() != e.dim())
    throw std::invalid_argument("born_probability: dimension mismatch");
  const double p = (rho.matrix() * e.matrix()).trace().real();
  if (p < -kAggregateTol || p > 1.0 + kAggregateTol)
    throw numeric_violation("born_probability: value " + std::to_string(p) +
                            " outside [0, 1] beyond tolerance");
  return std::min(std::max(p, 0.0), 1.0);
}

}  // namespace ontikit::qcore
