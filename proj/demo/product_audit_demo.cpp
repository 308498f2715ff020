// End-to-end walkthrough: solve for a conclusive-exclusion measurement on a
// tilted product set, wrap it into a psi-ontic joint model, and run both
// audits on the result.

#include <cstdio>
#include <iostream>

#include "ontikit/antidist.hpp"
#include "ontikit/gallery.hpp"
#include "ontikit/pbrpuc.hpp"
#include "ontikit/serialization.hpp"

int main() {
  using namespace ontikit;

  const qcore::PureState phi = qcore::PureState::basis(2, 0);
  qcore::Vector tilted(2);
  tilted << 0.5, std::sqrt(0.75);
  const qcore::PureState psi{std::move(tilted)};
  std::printf("overlap(phi, psi) = %.6f\n", qcore::overlap(phi, psi));

  antidist::SolverConfig config;
  config.restarts = 20;
  config.seed = 7;
  const auto states = antidist::pbr_product_set(phi, psi);
  const auto solved = antidist::find_antidistinguishing_measurement(states, config);
  std::printf("exclusion solver: residual=%.3e certified=%s restarts_used=%d\n",
              solved.certificate.residual, solved.certified ? "true" : "false",
              solved.restarts_used);
  if (!solved.certified) return 1;

  std::vector<qcore::Effect> effects;
  for (const auto& e : solved.certificate.effects) effects.emplace_back(e);
  const qcore::Povm readout{std::move(effects)};
  const pbrpuc::JointModel jm = gallery::psi_ontic_joint(phi, psi, readout);

  const pbrpuc::PrepScenario scenario;
  const auto pbr = pbrpuc::pbr_audit(jm, scenario, config.tol);
  const auto puc = pbrpuc::puc_audit(jm, scenario, config.tol);
  std::printf("pbr audit: h1=%d pip=%d support_disjoint=%d consistent=%d\n", pbr.h1, pbr.h2,
              pbr.support_disjoint, pbr.consistent);
  std::printf("puc audit: h1=%d puc=%d support_disjoint=%d consistent=%d\n", puc.h1, puc.h2,
              puc.support_disjoint, puc.consistent);

  std::cout << "joint model json:\n" << jsonio::joint_to_json(jm).dump(2) << "\n";
  return pbr.consistent && puc.consistent ? 0 : 1;
}
