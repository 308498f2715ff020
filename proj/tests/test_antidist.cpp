#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "ontikit/antidist.hpp"
#include "ontikit/modelgen.hpp"
#include "ontikit/qcore.hpp"
#include "ontikit/rng.hpp"

using namespace ontikit;
using antidist::SolverConfig;
using qcore::Matrix;
using qcore::PureState;
using qcore::Vector;

namespace {

PureState real_state(std::initializer_list<double> coeffs) {
  Vector v(static_cast<Eigen::Index>(coeffs.size()));
  Eigen::Index i = 0;
  for (double c : coeffs) v(i++) = c;
  v.normalize();
  return PureState(std::move(v));
}

// phi = |0>, psi tilted to the requested overlap.
std::vector<PureState> pbr_states(double target_overlap) {
  const PureState phi = PureState::basis(2, 0);
  const PureState psi = real_state({target_overlap, std::sqrt(1.0 - target_overlap * target_overlap)});
  return antidist::pbr_product_set(phi, psi);
}

}  // namespace

TEST_CASE("antidistinguishable_credences") {
  ontmodel::CredenceTable cred;
  cred.acts = {"A", "B"};
  cred.outcomes = {"r0", "r1"};

  SECTION("orthogonal-style table") {
    cred.rows = {{1.0, 0.0}, {0.0, 1.0}};
    const auto result = antidist::antidistinguishable_credences(cred);
    CHECK(result.antidistinguishable);
    CHECK(result.excluded_acts[0] == std::vector<int>{1});
    CHECK(result.excluded_acts[1] == std::vector<int>{0});
  }
  SECTION("a single act can never be excluded everywhere") {
    cred.acts = {"A"};
    cred.rows = {{0.4, 0.6}};
    const auto result = antidist::antidistinguishable_credences(cred);
    CHECK_FALSE(result.antidistinguishable);
    CHECK(result.witness_outcome >= 0);
  }
  SECTION("one zero per column suffices") {
    cred.acts = {"A", "B", "C", "D"};
    cred.outcomes = {"r0", "r1", "r2", "r3"};
    cred.rows = {{0.0, 0.4, 0.3, 0.3},
                 {0.4, 0.0, 0.3, 0.3},
                 {0.3, 0.4, 0.0, 0.3},
                 {0.3, 0.4, 0.3, 0.0}};
    const auto result = antidist::antidistinguishable_credences(cred);
    CHECK(result.antidistinguishable);
    for (int k = 0; k < 4; ++k) CHECK(result.excluded_acts[k] == std::vector<int>{k});
  }
}

TEST_CASE("pbr_product_set") {
  SECTION("computational basis inputs give the doubled basis") {
    const auto set = antidist::pbr_product_set(PureState::basis(2, 0), PureState::basis(2, 1));
    REQUIRE(set.size() == 4);
    for (int i = 0; i < 4; ++i)
      CHECK(qcore::overlap(set[i], PureState::basis(4, i)) == Catch::Approx(1.0).margin(1e-14));
  }
  SECTION("pairwise overlaps factorize") {
    const PureState phi = PureState::basis(2, 0);
    const PureState psi = real_state({1.0, 1.0});
    const auto set = antidist::pbr_product_set(phi, psi);
    const double o = qcore::overlap(phi, psi);
    // order: phi@phi, phi@psi, psi@phi, psi@psi
    CHECK(qcore::overlap(set[0], set[1]) == Catch::Approx(o).margin(1e-12));
    CHECK(qcore::overlap(set[0], set[3]) == Catch::Approx(o * o).margin(1e-12));
    CHECK(qcore::overlap(set[1], set[2]) == Catch::Approx(o * o).margin(1e-12));
  }
  SECTION("degenerate input yields four identical states") {
    const PureState phi = real_state({3.0, 4.0});
    const auto set = antidist::pbr_product_set(phi, phi);
    for (const auto& s : set)
      CHECK(qcore::overlap(s, set[0]) == Catch::Approx(1.0).margin(1e-14));
  }
  SECTION("dimension mismatch") {
    Rng rng(3);
    CHECK_THROWS_AS(
        antidist::pbr_product_set(PureState::basis(2, 0), modelgen::random_state(rng, 3)),
        std::invalid_argument);
  }
}

TEST_CASE("solver gradient matches central finite differences") {
  Rng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 2 + trial % 2;
    const int n = 2 + trial % 3;
    std::vector<Matrix> m(static_cast<std::size_t>(n));
    std::vector<Matrix> targets;
    for (int k = 0; k < n; ++k) {
      m[static_cast<std::size_t>(k)].resize(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          m[static_cast<std::size_t>(k)](r, c) = rng.complex_gaussian();
      targets.push_back(modelgen::random_state(rng, d).projector());
    }
    antidist::detail::Workspace ws;
    REQUIRE_FALSE(antidist::detail::evaluate(m, targets, ws).degenerate);
    const auto grad = antidist::detail::gradient(m, targets, ws);

    const double h = 1e-6;
    const auto objective = [&](const std::vector<Matrix>& mm) {
      antidist::detail::Workspace tmp;
      const auto obj = antidist::detail::evaluate(mm, targets, tmp);
      REQUIRE_FALSE(obj.degenerate);
      return obj.sum;
    };
    for (int k = 0; k < n; ++k)
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          for (int part = 0; part < 2; ++part) {
            const qcore::Complex delta = part == 0 ? qcore::Complex(h, 0.0)
                                                   : qcore::Complex(0.0, h);
            auto up = m, down = m;
            up[static_cast<std::size_t>(k)](r, c) += delta;
            down[static_cast<std::size_t>(k)](r, c) -= delta;
            const double fd = (objective(up) - objective(down)) / (2.0 * h);
            const double an = part == 0 ? 2.0 * grad[static_cast<std::size_t>(k)](r, c).real()
                                        : 2.0 * grad[static_cast<std::size_t>(k)](r, c).imag();
            CHECK(an == Catch::Approx(fd).margin(1e-5));
          }
        }
  }
}

TEST_CASE("solver certifies an orthogonal pair to near machine precision") {
  const std::vector<PureState> states = {PureState::basis(2, 0), PureState::basis(2, 1)};
  SolverConfig config;
  config.restarts = 8;
  config.tol = 1e-12;
  config.seed = 5;
  const auto result = antidist::find_antidistinguishing_measurement(states, config);
  REQUIRE(result.certified);
  CHECK(result.certificate.residual <= 1e-12);
  const auto verify = antidist::verify_certificate(states, result.certificate, 1e-12);
  CHECK(verify.pass);
  // The optimum swaps the projectors: effect k leaves no weight on state k.
  CHECK(qcore::expectation(states[0], result.certificate.effects[0]) <= 1e-12);
  CHECK(qcore::expectation(states[1], result.certificate.effects[1]) <= 1e-12);
}

TEST_CASE("a single state is never certified") {
  Rng rng(43);
  const std::vector<PureState> states = {modelgen::random_state(rng, 3)};
  SolverConfig config;
  config.restarts = 3;
  config.max_iterations = 300;
  config.seed = 7;
  for (int n_outcomes : {1, 2, 4}) {
    const auto result = antidist::find_antidistinguishing_measurement(states, n_outcomes, config);
    CHECK_FALSE(result.certified);
    // Completeness forces the exclusion probabilities to sum to 1 over the
    // outcomes, so the worst one is at least 1/n.
    CHECK(result.certificate.residual >= 1.0 / n_outcomes - 1e-9);
  }
}

TEST_CASE("product set below the critical overlap is certified and verified") {
  const auto states = pbr_states(0.3);
  SolverConfig config;
  config.restarts = 20;
  config.seed = 11;
  const auto result = antidist::find_antidistinguishing_measurement(states, config);
  REQUIRE(result.certified);
  CHECK(result.certificate.residual <= config.tol);
  CHECK(antidist::verify_certificate(states, result.certificate, config.tol).pass);

  SECTION("certified measurement induces antidistinguishable credences") {
    ontmodel::CredenceTable cred;
    cred.acts = {"phiphi", "phipsi", "psiphi", "psipsi"};
    for (std::size_t k = 0; k < result.certificate.effects.size(); ++k)
      cred.outcomes.push_back("r" + std::to_string(k));
    for (const auto& s : states) {
      std::vector<double> row;
      for (const auto& e : result.certificate.effects)
        row.push_back(qcore::expectation(s, e));
      cred.rows.push_back(std::move(row));
    }
    CHECK(antidist::antidistinguishable_credences(cred, config.tol).antidistinguishable);
  }
  SECTION("tampered certificates fail verification") {
    auto scaled = result.certificate;
    for (auto& e : scaled.effects) e *= 0.9;
    const auto verify = antidist::verify_certificate(states, scaled, config.tol);
    CHECK_FALSE(verify.pass);
    CHECK_FALSE(verify.povm_valid);

    auto permuted = result.certificate;
    std::rotate(permuted.excluded_state.begin(), permuted.excluded_state.begin() + 1,
                permuted.excluded_state.end());
    const auto verdict = antidist::verify_certificate(states, permuted, config.tol);
    CHECK_FALSE(verdict.pass);
    // Oracle: recompute the permuted residual directly from Born values.
    double expected = 0.0;
    for (std::size_t k = 0; k < permuted.effects.size(); ++k)
      expected = std::max(expected,
                          qcore::born_probability(
                              qcore::DensityOperator::pure(
                                  states[static_cast<std::size_t>(permuted.excluded_state[k])]),
                              qcore::Effect(permuted.effects[k])));
    CHECK(verdict.max_residual == Catch::Approx(expected).margin(1e-12));
    CHECK(verdict.max_residual > config.tol);
  }
  SECTION("residual is invariant under a joint unitary") {
    Rng rng(47);
    const Matrix u = modelgen::random_unitary(rng, 4);
    std::vector<PureState> rotated;
    for (const auto& s : states) {
      Vector v = u * s.amplitudes();
      v.normalize();
      rotated.emplace_back(std::move(v));
    }
    auto conjugated = result.certificate;
    for (auto& e : conjugated.effects) e = u * e * u.adjoint();
    const auto verify = antidist::verify_certificate(rotated, conjugated, config.tol);
    CHECK(verify.pass);
    CHECK(verify.max_residual ==
          Catch::Approx(antidist::verify_certificate(states, result.certificate, config.tol)
                            .max_residual)
              .margin(1e-9));
  }
}

TEST_CASE("solver is deterministic for a fixed config") {
  const auto states = pbr_states(0.4);
  SolverConfig config;
  config.restarts = 4;
  config.max_iterations = 400;
  config.seed = 99;
  const auto a = antidist::find_antidistinguishing_measurement(states, config);
  const auto b = antidist::find_antidistinguishing_measurement(states, config);
  CHECK(a.certified == b.certified);
  CHECK(a.restarts_used == b.restarts_used);
  CHECK(a.certificate.residual == b.certificate.residual);
  REQUIRE(a.certificate.effects.size() == b.certificate.effects.size());
  for (std::size_t k = 0; k < a.certificate.effects.size(); ++k)
    CHECK((a.certificate.effects[k] - b.certificate.effects[k]).cwiseAbs().maxCoeff() == 0.0);
}
