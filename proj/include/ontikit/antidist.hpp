#pragma once

// Antidistinguishability: the credence-level test, the four-state product
// set construction, and a numerical search for a conclusive-exclusion POVM.
// The solver parameterizes POVMs by unconstrained matrices M_k with
// E_k = S^{-1/2} M_k' M_k S^{-1/2}, S = sum_k M_k' M_k, and runs gradient
// descent with random restarts. Its output is never trusted directly:
// verify_certificate recomputes validity and residuals from scratch.

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontikit/ontmodel.hpp"
#include "ontikit/qcore.hpp"
#include "ontikit/rng.hpp"

namespace ontikit::antidist {

// Per-outcome exclusion: true when every outcome column of the credence
// table has an entry at or below zero_tol.
struct CredenceExclusion {
  bool antidistinguishable = false;
  std::vector<std::vector<int>> excluded_acts;  // per outcome, act indices
  int witness_outcome = -1;                     // when false: a column with no small entry
};

inline CredenceExclusion antidistinguishable_credences(const ontmodel::CredenceTable& cred,
                                                       double zero_tol = ontmodel::kZeroTol) {
  if (cred.acts.empty())
    throw std::invalid_argument("antidistinguishable_credences: no acts");
  CredenceExclusion result;
  result.antidistinguishable = true;
  result.excluded_acts.resize(cred.outcomes.size());
  for (std::size_t k = 0; k < cred.outcomes.size(); ++k) {
    for (std::size_t a = 0; a < cred.acts.size(); ++a)
      if (cred.rows[a][k] <= zero_tol)
        result.excluded_acts[k].push_back(static_cast<int>(a));
    if (result.excluded_acts[k].empty()) {
      result.antidistinguishable = false;
      if (result.witness_outcome < 0) result.witness_outcome = static_cast<int>(k);
    }
  }
  return result;
}

// The four product states [phi@phi, phi@psi, psi@phi, psi@psi], in this
// fixed order, on the doubled space.
inline std::vector<qcore::PureState> pbr_product_set(const qcore::PureState& phi,
                                                     const qcore::PureState& psi) {
  if (phi.dim() != psi.dim())
    throw std::invalid_argument("pbr_product_set: dimension mismatch");
  return {qcore::tensor(phi, phi), qcore::tensor(phi, psi), qcore::tensor(psi, phi),
          qcore::tensor(psi, psi)};
}

struct SolverConfig {
  int restarts = 100;
  int max_iterations = 5000;
  std::string step_schedule = "adaptive: grow 1.2x on accepted step, halve on rejection";
  double tol = 1e-6;  // residual target for certification
  std::uint64_t seed = 0;
};

// Candidate conclusive-exclusion measurement. Effects are raw matrices on
// purpose: tampered or numerically broken certificates must be
// representable so that verify_certificate can reject them.
struct ExclusionCertificate {
  std::vector<qcore::Matrix> effects;
  std::vector<int> excluded_state;  // per outcome, the state it claims to exclude
  double residual = 1.0;            // max over outcomes of <s_x(k)|E_k|s_x(k)>
};

struct SolverResult {
  ExclusionCertificate certificate;
  bool certified = false;
  int restarts_used = 0;
  std::uint64_t seed = 0;
};

struct VerifyReport {
  bool pass = false;
  bool povm_valid = false;
  bool assignment_total = false;  // every outcome names an in-range state
  double povm_residual = 0.0;
  double max_residual = 0.0;
  int worst_outcome = -1;
  std::string failure;
};

// Trust anchor: recomputes POVM validity and all residuals from the raw
// matrices, independent of any solver state.
inline VerifyReport verify_certificate(const std::vector<qcore::PureState>& states,
                                       const ExclusionCertificate& cert, double tol) {
  VerifyReport report;
  if (states.empty()) throw std::invalid_argument("verify_certificate: no states");
  if (cert.effects.empty()) {
    report.failure = "certificate has no effects";
    return report;
  }
  const int d = states.front().dim();
  for (const auto& s : states)
    if (s.dim() != d) throw std::invalid_argument("verify_certificate: state dimension mismatch");
  for (const auto& e : cert.effects)
    if (e.rows() != d || e.cols() != d)
      throw std::invalid_argument("verify_certificate: effect dimension mismatch");

  const qcore::PovmReport povm = qcore::validate_povm(cert.effects);
  report.povm_valid = povm.valid();
  report.povm_residual = povm.worst_residual();

  report.assignment_total = cert.excluded_state.size() == cert.effects.size();
  if (report.assignment_total)
    for (int x : cert.excluded_state)
      if (x < 0 || x >= static_cast<int>(states.size())) report.assignment_total = false;

  if (report.assignment_total) {
    for (std::size_t k = 0; k < cert.effects.size(); ++k) {
      const double p = qcore::expectation(states[static_cast<std::size_t>(cert.excluded_state[k])],
                                          cert.effects[k]);
      if (p > report.max_residual) {
        report.max_residual = p;
        report.worst_outcome = static_cast<int>(k);
      }
    }
  }

  report.pass = report.povm_valid && report.assignment_total && report.max_residual <= tol;
  if (!report.povm_valid)
    report.failure = "povm invalid, worst residual " + std::to_string(report.povm_residual);
  else if (!report.assignment_total)
    report.failure = "assignment does not cover every outcome";
  else if (!report.pass)
    report.failure = "residual " + std::to_string(report.max_residual) + " above " +
                     std::to_string(tol);
  return report;
}

namespace detail {

struct Objective {
  double sum = 0.0;       // sum of assigned exclusion probabilities
  double residual = 1.0;  // max of assigned exclusion probabilities
  bool degenerate = false;
};

// Shared per-evaluation state of the normalized parameterization.
struct Workspace {
  std::vector<qcore::Matrix> gram;  // T_k = M_k' M_k
  qcore::Matrix sqrt_inv;           // S^{-1/2}
  Eigen::MatrixXcd eigvecs;
  Eigen::VectorXd eigvals;
};

inline Objective evaluate(const std::vector<qcore::Matrix>& m,
                          const std::vector<qcore::Matrix>& targets, Workspace& ws) {
  const Eigen::Index d = m.front().rows();
  ws.gram.resize(m.size());
  qcore::Matrix s = qcore::Matrix::Zero(d, d);
  for (std::size_t k = 0; k < m.size(); ++k) {
    ws.gram[k] = m[k].adjoint() * m[k];
    s += ws.gram[k];
  }
  Eigen::SelfAdjointEigenSolver<qcore::Matrix> es(s);
  ws.eigvals = es.eigenvalues();
  ws.eigvecs = es.eigenvectors();
  Objective obj;
  if (ws.eigvals.minCoeff() <= 0.0 ||
      ws.eigvals.maxCoeff() / ws.eigvals.minCoeff() > 1e12) {
    obj.degenerate = true;
    return obj;
  }
  ws.sqrt_inv = ws.eigvecs * ws.eigvals.cwiseSqrt().cwiseInverse().asDiagonal() *
                ws.eigvecs.adjoint();
  obj.sum = 0.0;
  obj.residual = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const qcore::Matrix effect = ws.sqrt_inv * ws.gram[k] * ws.sqrt_inv;
    const double p = (effect * targets[k]).trace().real();
    obj.sum += p;
    obj.residual = std::max(obj.residual, p);
  }
  return obj;
}

// Gradient of sum_k tr(E_k P_k) with respect to the unconstrained M_k,
// through both the Gram factors and the S^{-1/2} normalization. The
// S-derivative solves the Sylvester relation dR R + R dR = dS in the
// eigenbasis of S.
inline std::vector<qcore::Matrix> gradient(const std::vector<qcore::Matrix>& m,
                                           const std::vector<qcore::Matrix>& targets,
                                           const Workspace& ws) {
  const Eigen::Index d = m.front().rows();
  const qcore::Matrix& q = ws.sqrt_inv;

  qcore::Matrix a = qcore::Matrix::Zero(d, d);
  for (std::size_t k = 0; k < m.size(); ++k) a += ws.gram[k] * q * targets[k];
  const qcore::Matrix c = q * (a + a.adjoint()) * q;

  // Entrywise divide in the eigenbasis by sqrt(lambda_r) + sqrt(lambda_c).
  qcore::Matrix c_eig = ws.eigvecs.adjoint() * c * ws.eigvecs;
  const Eigen::VectorXd roots = ws.eigvals.cwiseSqrt();
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index col = 0; col < d; ++col)
      c_eig(r, col) /= roots(r) + roots(col);
  const qcore::Matrix g = ws.eigvecs * c_eig * ws.eigvecs.adjoint();

  std::vector<qcore::Matrix> grad(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    const qcore::Matrix w_k = q * targets[k] * q - g;
    grad[k] = m[k] * w_k;
  }
  return grad;
}

inline ExclusionCertificate make_certificate(const std::vector<qcore::Matrix>& m,
                                             const std::vector<qcore::Matrix>& targets,
                                             const std::vector<int>& excluded_state,
                                             Workspace& ws) {
  ExclusionCertificate cert;
  cert.excluded_state = excluded_state;
  const Objective obj = evaluate(m, targets, ws);
  cert.residual = obj.residual;
  for (std::size_t k = 0; k < m.size(); ++k)
    cert.effects.push_back(ws.sqrt_inv * ws.gram[k] * ws.sqrt_inv);
  // Symmetrize away the last bits of rounding; the verifier checks
  // hermiticity at 1e-12.
  for (auto& e : cert.effects) e = 0.5 * (e + e.adjoint());
  return cert;
}

}  // namespace detail

// Minimizes the worst assigned exclusion probability over POVMs with
// n_outcomes effects. Outcome k is assigned to exclude state k mod n_states,
// so every outcome carries an exclusion claim; with the default
// n_outcomes == n_states this is the identity assignment. Certification
// requires the verified residual to reach config.tol. On failure the best
// certificate found is returned with no claim of infeasibility.
inline SolverResult find_antidistinguishing_measurement(
    const std::vector<qcore::PureState>& states, int n_outcomes, const SolverConfig& config) {
  if (states.empty())
    throw std::invalid_argument("find_antidistinguishing_measurement: no states");
  if (n_outcomes < 1)
    throw std::invalid_argument("find_antidistinguishing_measurement: n_outcomes < 1");
  if (config.restarts < 1 || config.tol <= 0.0)
    throw std::invalid_argument("find_antidistinguishing_measurement: bad config");
  const int d = states.front().dim();
  for (const auto& s : states)
    if (s.dim() != d)
      throw std::invalid_argument("find_antidistinguishing_measurement: state dims differ");

  std::vector<int> excluded_state(static_cast<std::size_t>(n_outcomes));
  std::vector<qcore::Matrix> targets(static_cast<std::size_t>(n_outcomes));
  for (int k = 0; k < n_outcomes; ++k) {
    excluded_state[static_cast<std::size_t>(k)] = k % static_cast<int>(states.size());
    targets[static_cast<std::size_t>(k)] =
        states[static_cast<std::size_t>(k % static_cast<int>(states.size()))].projector();
  }

  SolverResult result;
  result.seed = config.seed;
  detail::Workspace ws;
  std::uint64_t attempt = 0;
  bool have_best = false;

  for (int restart = 0; restart < config.restarts; ++restart) {
    // Draw initial matrices; a degenerate normalizer discards the draw and
    // re-seeds from the attempt counter.
    std::vector<qcore::Matrix> m(static_cast<std::size_t>(n_outcomes));
    detail::Objective obj;
    do {
      if (attempt > 1000ull * static_cast<std::uint64_t>(config.restarts))
        throw std::runtime_error(
            "find_antidistinguishing_measurement: cannot draw a non-degenerate start");
      Rng rng(splitmix64(config.seed + attempt));
      ++attempt;
      for (auto& mk : m) {
        mk.resize(d, d);
        for (Eigen::Index r = 0; r < d; ++r)
          for (Eigen::Index c = 0; c < d; ++c) mk(r, c) = rng.complex_gaussian();
      }
      obj = detail::evaluate(m, targets, ws);
    } while (obj.degenerate);

    double step = 0.1;
    for (int it = 0; it < config.max_iterations && obj.residual > config.tol; ++it) {
      const auto grad = detail::gradient(m, targets, ws);
      std::vector<qcore::Matrix> trial(m.size());
      for (std::size_t k = 0; k < m.size(); ++k) trial[k] = m[k] - step * grad[k];
      detail::Workspace trial_ws;
      const detail::Objective trial_obj = detail::evaluate(trial, targets, trial_ws);
      if (!trial_obj.degenerate && trial_obj.sum < obj.sum) {
        m = std::move(trial);
        ws = std::move(trial_ws);
        obj = trial_obj;
        step *= 1.2;
      } else {
        step *= 0.5;
        if (step < 1e-18) break;
      }
    }

    ExclusionCertificate cert = detail::make_certificate(m, targets, excluded_state, ws);
    result.restarts_used = restart + 1;
    const bool certifies =
        cert.residual <= config.tol && verify_certificate(states, cert, config.tol).pass;
    if (certifies || !have_best || cert.residual < result.certificate.residual) {
      result.certificate = std::move(cert);
      have_best = true;
    }
    if (certifies) {
      result.certified = true;
      break;
    }
  }
  return result;
}

inline SolverResult find_antidistinguishing_measurement(
    const std::vector<qcore::PureState>& states, const SolverConfig& config) {
  return find_antidistinguishing_measurement(states, static_cast<int>(states.size()), config);
}

}  // namespace ontikit::antidist
