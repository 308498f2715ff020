#pragma once

// Named fixture models.
//
//  g1  psi-ontic components and their product: one ontic state per
//      preparation act, delta preparation credences, responses equal to the
//      Born probabilities of a chosen readout. Predicted credences
//      reproduce the quantum credences exactly.
//  g2  product model whose component supports overlap on one state; the
//      audits diagnose its joint credences as not antidistinguishable.
//  g3  composite model with exactly factorized posteriors but correlated
//      joint preparations: passes the uninformativeness check while
//      failing no-correlations. Found once by seeded search (see
//      tools/g3_search.cpp) and committed here as literal data.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontikit/ontmodel.hpp"
#include "ontikit/pbrpuc.hpp"
#include "ontikit/qcore.hpp"

namespace ontikit::gallery {

// Two-state component reproducing the Born statistics of `readout`:
// prep(phi) = delta on l_phi, prep(psi) = delta on l_psi, responses
// act-independent with row(l_a) = Born probabilities for state a.
inline ontmodel::TheoryModel psi_ontic_component(const qcore::PureState& phi,
                                                 const qcore::PureState& psi,
                                                 const qcore::Povm& readout) {
  if (phi.dim() != psi.dim() || phi.dim() != readout.dim())
    throw std::invalid_argument("psi_ontic_component: dimension mismatch");
  ontmodel::TheoryModel model;
  model.ontic.states = {"l_phi", "l_psi"};
  model.acts = {"phi", "psi"};
  for (int k = 0; k < readout.size(); ++k) model.outcomes.push_back("r" + std::to_string(k));
  model.preparations.acts = model.acts;
  model.preparations.weights = {{1.0, 0.0}, {0.0, 1.0}};

  const auto born_row = [&readout](const qcore::PureState& s) {
    const qcore::DensityOperator rho = qcore::DensityOperator::pure(s);
    std::vector<double> row;
    double total = 0.0;
    for (const auto& e : readout.effects()) {
      row.push_back(qcore::born_probability(rho, e));
      total += row.back();
    }
    if (std::abs(total - 1.0) > qcore::kAggregateTol)
      throw std::invalid_argument("psi_ontic_component: readout rows do not normalize");
    for (double& v : row) v /= total;
    return row;
  };
  const std::vector<std::vector<double>> rows = {born_row(phi), born_row(psi)};
  model.responses.acts = model.acts;
  model.responses.outcomes = model.outcomes;
  model.responses.states = model.ontic.states;
  model.responses.entries = {rows, rows};
  model.validate();
  return model;
}

// g1: product of two psi-ontic components; joint responses at the embedded
// state (l_a, l_b) are the Born probabilities of the product state a@b
// under the joint readout on the doubled space.
inline pbrpuc::JointModel psi_ontic_joint(const qcore::PureState& phi,
                                          const qcore::PureState& psi,
                                          const qcore::Povm& joint_readout) {
  if (joint_readout.dim() != phi.dim() * psi.dim())
    throw std::invalid_argument("psi_ontic_joint: joint readout dimension mismatch");
  // A trivial single-outcome readout keeps the components self-contained.
  std::vector<qcore::Effect> identity;
  identity.emplace_back(qcore::Matrix::Identity(phi.dim(), phi.dim()));
  const qcore::Povm trivial(std::move(identity));
  const ontmodel::TheoryModel m1 = psi_ontic_component(phi, psi, trivial);
  const ontmodel::TheoryModel m2 = m1;

  ontmodel::ResponseTable responses;
  responses.acts = pbrpuc::prep_pair_ids();
  for (int k = 0; k < joint_readout.size(); ++k) responses.outcomes.push_back("r" + std::to_string(k));
  responses.states = pbrpuc::product_labels(m1.ontic, m2.ontic);
  const std::array<const qcore::PureState*, 2> by_act = {&phi, &psi};
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const qcore::PureState product = qcore::tensor(*by_act[static_cast<std::size_t>(i)],
                                                     *by_act[static_cast<std::size_t>(j)]);
      const qcore::DensityOperator rho = qcore::DensityOperator::pure(product);
      std::vector<double> row;
      double total = 0.0;
      for (const auto& e : joint_readout.effects()) {
        row.push_back(qcore::born_probability(rho, e));
        total += row.back();
      }
      if (std::abs(total - 1.0) > qcore::kAggregateTol)
        throw std::invalid_argument("psi_ontic_joint: readout rows do not normalize");
      for (double& v : row) v /= total;
      rows.push_back(std::move(row));
    }
  responses.entries.assign(4, rows);
  return pbrpuc::build_product_model(m1, m2, responses);
}

// g2: component supports overlap on the middle state, so the marginal
// supports of phi and psi cannot be disjoint; with full-support responses
// every outcome column of the joint credences stays positive.
inline pbrpuc::JointModel overlap_fixture() {
  ontmodel::TheoryModel component;
  component.ontic.states = {"a", "b", "c"};
  component.acts = {"phi", "psi"};
  component.outcomes = {"r0", "r1"};
  component.preparations.acts = component.acts;
  component.preparations.weights = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}};
  component.responses.acts = component.acts;
  component.responses.outcomes = component.outcomes;
  component.responses.states = component.ontic.states;
  const std::vector<std::vector<double>> rows = {{0.7, 0.3}, {0.5, 0.5}, {0.2, 0.8}};
  component.responses.entries = {rows, rows};
  component.validate();

  ontmodel::ResponseTable responses;
  responses.acts = pbrpuc::prep_pair_ids();
  responses.outcomes = {"r0", "r1"};
  responses.states = pbrpuc::product_labels(component.ontic, component.ontic);
  std::vector<std::vector<double>> joint_rows;
  for (std::size_t w = 0; w < responses.states.size(); ++w)
    joint_rows.push_back({0.25 + 0.05 * static_cast<double>(w % 4),
                          0.75 - 0.05 * static_cast<double>(w % 4)});
  responses.entries.assign(4, joint_rows);
  return pbrpuc::build_product_model(component, component, responses);
}

// Seed that produced the g3 instance below (see tools/g3_search.cpp;
// accepted at attempt 9 with uninformativeness gap 1.1e-16 and
// no-correlations gap 0.0945).
inline constexpr std::uint64_t kG3SearchSeed = 20260809ull;

inline pbrpuc::JointModel puc_not_pip_fixture() {
  pbrpuc::JointModel jm;
  jm.omega1.states = {"u0", "u1"};
  jm.omega2.states = {"v0", "v1"};
  jm.omega12.states = pbrpuc::product_labels(jm.omega1, jm.omega2);
  jm.embedding = {0, 1, 2, 3};
  jm.joint_prep = {{
      {0.42443337632525052, 0.34672088864172634, 0.0034089989118047687, 0.22543673612121831},
      {0.40913785620893461, 0.50700896484972457, 0.0088912476572714141, 0.074961931284069347},
      {0.78402152397180114, 0.10183362849949827, 0.025208758025015422, 0.08893608950368509},
      {0.75576734402167012, 0.14891102400747747, 0.065748718767991349, 0.029572913202861064},
  }};
  jm.responses.acts = pbrpuc::prep_pair_ids();
  jm.responses.outcomes = {"r0", "r1"};
  jm.responses.states = jm.omega12.states;
  const std::vector<std::vector<double>> rows = {
      {0.6130418799512655, 0.3869581200487345},
      {0.9489397407389604, 0.051060259261039666},
      {0.5362341222905137, 0.4637658777094863},
      {0.9047832785646324, 0.09521672143536766},
  };
  jm.responses.entries.assign(4, rows);
  jm.validate();
  return jm;
}

}  // namespace ontikit::gallery
