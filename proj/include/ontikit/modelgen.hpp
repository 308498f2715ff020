#pragma once

// Seeded generators for random states, measurements and models. Preparation
// rows and response rows are drawn flat on the probability simplex;
// screening-valid response tables are act-independent by construction, so
// generated models always satisfy the meshing hypotheses they are meant to
// exercise. Joint-model generators cover three classes: product models,
// four-way disjoint supports, and models with exactly factorized
// posteriors at every composite state.

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "ontikit/ontmodel.hpp"
#include "ontikit/pbrpuc.hpp"
#include "ontikit/qcore.hpp"
#include "ontikit/rng.hpp"

namespace ontikit::modelgen {

inline qcore::PureState random_state(Rng& rng, int dim) {
  qcore::Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
  v.normalize();
  return qcore::PureState(std::move(v));
}

inline qcore::Matrix random_unitary(Rng& rng, int dim) {
  qcore::Matrix g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = rng.complex_gaussian();
  Eigen::HouseholderQR<qcore::Matrix> qr(g);
  qcore::Matrix q = qr.householderQ();
  // Fix the phase freedom so the result is a function of the input alone.
  const qcore::Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const qcore::Complex diag = r(c, c);
    if (std::abs(diag) > 0.0) q.col(c) *= diag / std::abs(diag);
  }
  return q;
}

// Rank-one projectors onto the columns of a random unitary.
inline qcore::Povm random_projective_basis(Rng& rng, int dim) {
  const qcore::Matrix u = random_unitary(rng, dim);
  std::vector<qcore::Effect> effects;
  effects.reserve(static_cast<std::size_t>(dim));
  for (int c = 0; c < dim; ++c) {
    qcore::Matrix proj = u.col(c) * u.col(c).adjoint();
    effects.emplace_back(0.5 * (proj + proj.adjoint()));
  }
  return qcore::Povm(std::move(effects));
}

inline std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
  return ids;
}

inline ontmodel::TheoryModel random_model(Rng& rng, int n_states, int n_acts, int n_outcomes,
                                          bool screening_valid) {
  ontmodel::TheoryModel model;
  model.ontic.states = numbered("w", n_states);
  model.acts = numbered("act", n_acts);
  model.outcomes = numbered("r", n_outcomes);
  model.preparations.acts = model.acts;
  for (int a = 0; a < n_acts; ++a) model.preparations.weights.push_back(rng.simplex(n_states));
  model.responses.acts = model.acts;
  model.responses.outcomes = model.outcomes;
  model.responses.states = model.ontic.states;
  if (screening_valid) {
    std::vector<std::vector<double>> shared;
    for (int w = 0; w < n_states; ++w) shared.push_back(rng.simplex(n_outcomes));
    model.responses.entries.assign(static_cast<std::size_t>(n_acts), shared);
  } else {
    for (int a = 0; a < n_acts; ++a) {
      std::vector<std::vector<double>> rows;
      for (int w = 0; w < n_states; ++w) rows.push_back(rng.simplex(n_outcomes));
      model.responses.entries.push_back(std::move(rows));
    }
  }
  model.validate();
  return model;
}

inline ontmodel::AgentState random_agent(Rng& rng, int n_theories, int n_states, int n_acts,
                                         int n_outcomes) {
  ontmodel::AgentState agent;
  const std::vector<double> weights = rng.simplex(n_theories);
  for (int t = 0; t < n_theories; ++t)
    agent.theories.push_back(
        {random_model(rng, n_states, n_acts, n_outcomes, true), weights[static_cast<std::size_t>(t)]});
  agent.act_prior = rng.simplex(n_acts);
  agent.validate();
  return agent;
}

// Act-independent response table over the given states for the four joint
// preparation pairs.
inline ontmodel::ResponseTable random_joint_responses(Rng& rng,
                                                      const std::vector<std::string>& states,
                                                      int n_outcomes) {
  ontmodel::ResponseTable table;
  table.acts = pbrpuc::prep_pair_ids();
  table.outcomes = numbered("r", n_outcomes);
  table.states = states;
  std::vector<std::vector<double>> shared;
  for (std::size_t w = 0; w < states.size(); ++w) shared.push_back(rng.simplex(n_outcomes));
  table.entries.assign(4, shared);
  return table;
}

// Two random two-act components combined into a product joint model;
// satisfies preparation independence by construction.
inline pbrpuc::JointModel random_product_joint(Rng& rng, int n1, int n2, int n_outcomes) {
  const ontmodel::TheoryModel m1 = random_model(rng, n1, 2, n_outcomes, true);
  ontmodel::TheoryModel m2 = random_model(rng, n2, 2, n_outcomes, true);
  m2.ontic.states = numbered("v", n2);
  m2.preparations.acts = m2.acts;
  m2.responses.states = m2.ontic.states;
  const auto labels = pbrpuc::product_labels(m1.ontic, m2.ontic);
  return pbrpuc::build_product_model(m1, m2, random_joint_responses(rng, labels, n_outcomes));
}

// Joint model whose four preparations occupy pairwise disjoint blocks of
// the composite space. The embedding is left undefined, so the model makes
// no product-structure claim.
inline pbrpuc::JointModel random_disjoint_joint(Rng& rng, int max_block, int n_outcomes) {
  pbrpuc::JointModel jm;
  jm.omega1.states = numbered("u", 2);
  jm.omega2.states = numbered("v", 2);
  std::array<int, 4> block_sizes;
  int total = 0;
  for (auto& b : block_sizes) {
    b = 1 + rng.uniform_int(max_block);
    total += b;
  }
  jm.omega12.states = numbered("w", total);
  jm.embedding.assign(4, -1);
  int offset = 0;
  for (int p = 0; p < 4; ++p) {
    std::vector<double> row(static_cast<std::size_t>(total), 0.0);
    const auto block = rng.simplex(block_sizes[static_cast<std::size_t>(p)]);
    for (int b = 0; b < block_sizes[static_cast<std::size_t>(p)]; ++b)
      row[static_cast<std::size_t>(offset + b)] = block[static_cast<std::size_t>(b)];
    offset += block_sizes[static_cast<std::size_t>(p)];
    jm.joint_prep[static_cast<std::size_t>(p)] = std::move(row);
  }
  jm.responses = random_joint_responses(rng, jm.omega12.states, n_outcomes);
  jm.validate();
  return jm;
}

// Joint model over the full 2x2 product whose posterior over preparation
// pairs factorizes exactly at every composite state. Per state we draw the
// posterior factors, then solve the four normalization constraints for the
// state marginal; draws whose marginal leaves the simplex are rejected.
inline std::optional<pbrpuc::JointModel> random_posterior_factorized_joint(Rng& rng,
                                                                           int n_outcomes) {
  constexpr int kStates = 4;
  std::array<double, kStates> alpha, beta;
  for (int w = 0; w < kStates; ++w) {
    alpha[static_cast<std::size_t>(w)] = rng.uniform(0.05, 0.95);
    beta[static_cast<std::size_t>(w)] = rng.uniform(0.05, 0.95);
  }
  // Row per preparation pair, column per state: 4 m(w) a_p(w) b_p(w) = 1.
  Eigen::Matrix4d coeffs;
  for (int p = 0; p < 4; ++p)
    for (int w = 0; w < kStates; ++w) {
      const double fa = pbrpuc::first_act(p) == 0 ? alpha[static_cast<std::size_t>(w)]
                                                  : 1.0 - alpha[static_cast<std::size_t>(w)];
      const double fb = pbrpuc::second_act(p) == 0 ? beta[static_cast<std::size_t>(w)]
                                                   : 1.0 - beta[static_cast<std::size_t>(w)];
      coeffs(p, w) = 4.0 * fa * fb;
    }
  const Eigen::Vector4d marginal = coeffs.fullPivLu().solve(Eigen::Vector4d::Ones());
  if ((coeffs * marginal - Eigen::Vector4d::Ones()).cwiseAbs().maxCoeff() > 1e-10)
    return std::nullopt;
  if (marginal.minCoeff() < 0.01) return std::nullopt;

  pbrpuc::JointModel jm;
  jm.omega1.states = numbered("u", 2);
  jm.omega2.states = numbered("v", 2);
  jm.omega12.states = pbrpuc::product_labels(jm.omega1, jm.omega2);
  jm.embedding = {0, 1, 2, 3};
  for (int p = 0; p < 4; ++p) {
    std::vector<double> row(kStates);
    for (int w = 0; w < kStates; ++w)
      row[static_cast<std::size_t>(w)] = marginal(w) * coeffs(p, w);
    // Rescale away the linear-solve residual so the row is a distribution.
    double total = 0.0;
    for (double v : row) total += v;
    for (double& v : row) v /= total;
    jm.joint_prep[static_cast<std::size_t>(p)] = std::move(row);
  }
  jm.responses = random_joint_responses(rng, jm.omega12.states, n_outcomes);
  jm.validate();
  return jm;
}

// A model satisfying preparation uninformativeness, drawn from the three
// construction classes that guarantee it.
inline pbrpuc::JointModel random_puc_joint(Rng& rng, int n_outcomes) {
  const int cls = rng.uniform_int(3);
  if (cls == 0) return random_product_joint(rng, 1 + rng.uniform_int(3), 1 + rng.uniform_int(3),
                                            n_outcomes);
  if (cls == 1) return random_disjoint_joint(rng, 3, n_outcomes);
  for (;;) {
    auto jm = random_posterior_factorized_joint(rng, n_outcomes);
    if (jm) return *jm;
  }
}

}  // namespace ontikit::modelgen
