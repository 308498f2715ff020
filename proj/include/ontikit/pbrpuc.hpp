#pragma once

// Two-subsystem joint models over finite ontic spaces, the structural
// conditions on them (cartesian product inclusion, no correlations,
// preparation independence, preparation uninformativeness), and auditors
// that cross-check antidistinguishability of the four joint preparations
// against marginal support disjointness.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontikit/antidist.hpp"
#include "ontikit/ontmodel.hpp"

namespace ontikit::pbrpuc {

// Fixed order of the four joint preparation pairs.
inline constexpr std::array<const char*, 4> kPrepPairNames = {"phiphi", "phipsi", "psiphi",
                                                              "psipsi"};
// Subsystem act of each pair, 0 = phi, 1 = psi.
constexpr int first_act(int pair) { return pair >> 1; }
constexpr int second_act(int pair) { return pair & 1; }

inline std::vector<std::string> prep_pair_ids() {
  return {kPrepPairNames[0], kPrepPairNames[1], kPrepPairNames[2], kPrepPairNames[3]};
}

// Joint theory for two subsystems: an embedding of the product of the
// subsystem spaces into the composite space (possibly partial), the four
// joint preparation credences, and one joint readout.
struct JointModel {
  ontmodel::OnticSpace omega1, omega2, omega12;
  // embedding[i * |omega2| + j] = index into omega12, or -1 where undefined
  std::vector<int> embedding;
  std::array<std::vector<double>, 4> joint_prep;  // [pair][w12]
  ontmodel::ResponseTable responses;              // acts = prep pair names, over omega12

  int embed(int i, int j) const {
    return embedding[static_cast<std::size_t>(i) * omega2.states.size() +
                     static_cast<std::size_t>(j)];
  }

  void validate(int cap = ontmodel::kDefaultStateCap) const {
    omega1.validate(cap);
    omega2.validate(cap);
    omega12.validate(cap);
    if (embedding.size() != omega1.states.size() * omega2.states.size())
      throw std::invalid_argument("JointModel: embedding size mismatch");
    std::vector<int> hits(omega12.states.size(), 0);
    for (int target : embedding) {
      if (target < -1 || target >= omega12.size())
        throw std::invalid_argument("JointModel: embedding target out of range");
      if (target >= 0 && ++hits[static_cast<std::size_t>(target)] > 1)
        throw std::invalid_argument("JointModel: embedding is not injective");
    }
    for (int p = 0; p < 4; ++p) {
      if (static_cast<int>(joint_prep[p].size()) != omega12.size())
        throw std::invalid_argument("JointModel: joint preparation row length mismatch");
      ontmodel::detail::check_distribution(joint_prep[p],
                                           std::string("JointModel joint_prep[") +
                                               kPrepPairNames[p] + "]");
    }
    responses.validate();
    if (responses.acts != prep_pair_ids())
      throw std::invalid_argument("JointModel: response acts must be the four prep pairs");
    if (responses.states != omega12.states)
      throw std::invalid_argument("JointModel: response states inconsistent with omega12");
  }
};

// Uniform prior over the four preparation pairs: two independent fair dice.
struct PrepScenario {
  std::array<double, 4> prior{0.25, 0.25, 0.25, 0.25};

  void validate() const {
    for (double p : prior)
      if (p != 0.25)
        throw std::invalid_argument("PrepScenario: prior must be exactly uniform");
  }
};

struct CpaResult {
  bool holds = true;
  int missing_i = -1, missing_j = -1;  // first product pair without an image
};

// The embedded product covers all of omega1 x omega2. Injectivity of the
// embedding is rechecked here (cheaply, via a bitmask over the composite
// space) because a non-injective map makes the question meaningless.
inline CpaResult cpa_check(const JointModel& jm) {
  std::uint64_t seen = 0;
  CpaResult result;
  for (int i = 0; i < jm.omega1.size(); ++i)
    for (int j = 0; j < jm.omega2.size(); ++j) {
      const int target = jm.embed(i, j);
      if (target < 0) {
        result.holds = false;
        if (result.missing_i < 0) {
          result.missing_i = i;
          result.missing_j = j;
        }
        continue;
      }
      if (target >= 64)
        throw std::invalid_argument("cpa_check: composite space exceeds the state cap");
      const std::uint64_t bit = 1ull << target;
      if (seen & bit)
        throw std::invalid_argument("cpa_check: embedding is not injective");
      seen |= bit;
    }
  return result;
}

struct NcaResult {
  bool pass = false;
  std::string reason;      // empty when passing
  double outside_weight = 0.0;
  double max_gap = 0.0;    // worst |p(w1,w2) - p1(w1) p2(w2)|
  int gap_i = -1, gap_j = -1;
};

// Joint preparation credences concentrate on the embedded product and
// factorize across the subsystems there.
inline NcaResult nca_check(const JointModel& jm, int pair, double tol) {
  if (pair < 0 || pair > 3) throw std::invalid_argument("nca_check: pair out of range");
  NcaResult result;
  if (!cpa_check(jm).holds) {
    result.reason = "support outside product";
    return result;
  }
  const auto& prep = jm.joint_prep[static_cast<std::size_t>(pair)];

  const int n1 = jm.omega1.size(), n2 = jm.omega2.size();
  std::vector<double> pulled(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2), 0.0);
  double on_product = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const double w = prep[static_cast<std::size_t>(jm.embed(i, j))];
      pulled[static_cast<std::size_t>(i) * n2 + j] = w;
      on_product += w;
    }
  result.outside_weight = std::max(0.0, 1.0 - on_product);

  std::vector<double> p1(static_cast<std::size_t>(n1), 0.0);
  std::vector<double> p2(static_cast<std::size_t>(n2), 0.0);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      p1[static_cast<std::size_t>(i)] += pulled[static_cast<std::size_t>(i) * n2 + j];
      p2[static_cast<std::size_t>(j)] += pulled[static_cast<std::size_t>(i) * n2 + j];
    }
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const double gap = std::abs(pulled[static_cast<std::size_t>(i) * n2 + j] -
                                  p1[static_cast<std::size_t>(i)] * p2[static_cast<std::size_t>(j)]);
      if (gap > result.max_gap) {
        result.max_gap = gap;
        result.gap_i = i;
        result.gap_j = j;
      }
    }

  if (result.outside_weight > tol)
    result.reason = "support outside product";
  else if (result.max_gap > tol)
    result.reason = "correlated";
  else
    result.pass = true;
  return result;
}

struct PipResult {
  bool pass = false;
  bool cpa = false;
  std::array<NcaResult, 4> nca;
  int failing_pair = -1;  // first pair that fails the no-correlations check
};

inline PipResult pip_check(const JointModel& jm, const PrepScenario& scenario, double tol) {
  scenario.validate();
  PipResult result;
  result.cpa = cpa_check(jm).holds;
  result.pass = result.cpa;
  for (int p = 0; p < 4; ++p) {
    result.nca[static_cast<std::size_t>(p)] = nca_check(jm, p, tol);
    if (!result.nca[static_cast<std::size_t>(p)].pass && result.failing_pair < 0)
      result.failing_pair = p;
    result.pass = result.pass && result.nca[static_cast<std::size_t>(p)].pass;
  }
  return result;
}

struct PucResult {
  bool pass = false;
  double max_gap = 0.0;
  int worst_state = -1;  // index into omega12
};

// Given the composite ontic state, the posterior over the four preparation
// pairs must factorize: learning one subsystem's preparation says nothing
// about the other's.
inline PucResult puc_check(const JointModel& jm, const PrepScenario& scenario, double tol) {
  scenario.validate();
  PucResult result;
  for (int w = 0; w < jm.omega12.size(); ++w) {
    std::array<double, 4> q{};
    double marginal = 0.0;
    for (int p = 0; p < 4; ++p) {
      q[static_cast<std::size_t>(p)] =
          scenario.prior[static_cast<std::size_t>(p)] * jm.joint_prep[static_cast<std::size_t>(p)]
                                                                     [static_cast<std::size_t>(w)];
      marginal += q[static_cast<std::size_t>(p)];
    }
    if (marginal <= 0.0) continue;
    for (double& v : q) v /= marginal;
    // 2x2 marginals over (first act, second act)
    std::array<double, 2> qa{}, qb{};
    for (int p = 0; p < 4; ++p) {
      qa[static_cast<std::size_t>(first_act(p))] += q[static_cast<std::size_t>(p)];
      qb[static_cast<std::size_t>(second_act(p))] += q[static_cast<std::size_t>(p)];
    }
    for (int p = 0; p < 4; ++p) {
      const double gap = std::abs(q[static_cast<std::size_t>(p)] -
                                  qa[static_cast<std::size_t>(first_act(p))] *
                                      qb[static_cast<std::size_t>(second_act(p))]);
      if (gap > result.max_gap) {
        result.max_gap = gap;
        result.worst_state = w;
      }
    }
  }
  result.pass = result.max_gap <= tol;
  return result;
}

inline std::vector<std::string> product_labels(const ontmodel::OnticSpace& a,
                                               const ontmodel::OnticSpace& b) {
  std::vector<std::string> labels;
  labels.reserve(a.states.size() * b.states.size());
  for (const auto& la : a.states)
    for (const auto& lb : b.states) labels.push_back("(" + la + "," + lb + ")");
  return labels;
}

// Composite model with omega12 = omega1 x omega2 and joint preparations
// given by the product of the component preparation credences. Components
// must have exactly the two acts phi (index 0) and psi (index 1); the
// response table must be indexed by the four prep pairs over the product
// labels.
inline JointModel build_product_model(const ontmodel::TheoryModel& m1,
                                      const ontmodel::TheoryModel& m2,
                                      const ontmodel::ResponseTable& joint_responses) {
  m1.validate();
  m2.validate();
  if (m1.acts.size() != 2 || m2.acts.size() != 2)
    throw std::invalid_argument("build_product_model: components need exactly two acts");
  JointModel jm;
  jm.omega1 = m1.ontic;
  jm.omega2 = m2.ontic;
  jm.omega12.states = product_labels(m1.ontic, m2.ontic);
  const int n1 = jm.omega1.size(), n2 = jm.omega2.size();
  jm.embedding.resize(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      jm.embedding[static_cast<std::size_t>(i) * n2 + j] = i * n2 + j;
  for (int p = 0; p < 4; ++p) {
    const auto& prep1 = m1.preparations.row(first_act(p));
    const auto& prep2 = m2.preparations.row(second_act(p));
    auto& row = jm.joint_prep[static_cast<std::size_t>(p)];
    row.resize(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j)
        row[static_cast<std::size_t>(i) * n2 + j] =
            prep1[static_cast<std::size_t>(i)] * prep2[static_cast<std::size_t>(j)];
  }
  if (joint_responses.states != jm.omega12.states || joint_responses.acts != prep_pair_ids())
    throw std::invalid_argument("build_product_model: response table dimension mismatch");
  jm.responses = joint_responses;
  jm.validate();
  return jm;
}

// Predicted outcome credences of the four joint preparations.
inline ontmodel::CredenceTable joint_credence_table(const JointModel& jm) {
  ontmodel::CredenceTable table;
  table.acts = prep_pair_ids();
  table.outcomes = jm.responses.outcomes;
  for (int p = 0; p < 4; ++p) {
    std::vector<double> row(table.outcomes.size(), 0.0);
    for (int w = 0; w < jm.omega12.size(); ++w) {
      const double pw = jm.joint_prep[static_cast<std::size_t>(p)][static_cast<std::size_t>(w)];
      if (pw == 0.0) continue;
      for (std::size_t k = 0; k < row.size(); ++k)
        row[k] += pw * jm.responses.entries[static_cast<std::size_t>(p)]
                                           [static_cast<std::size_t>(w)][k];
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// Marginal preparation support of one subsystem act, pulled back through
// the embedding and unioned over the other subsystem's act choices.
inline std::vector<bool> marginal_support(const JointModel& jm, int subsystem, int act,
                                          double zero_tol) {
  const int n1 = jm.omega1.size(), n2 = jm.omega2.size();
  const int n = subsystem == 0 ? n1 : n2;
  std::vector<bool> support(static_cast<std::size_t>(n), false);
  for (int p = 0; p < 4; ++p) {
    if ((subsystem == 0 ? first_act(p) : second_act(p)) != act) continue;
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        const int target = jm.embed(i, j);
        if (target < 0) continue;
        if (jm.joint_prep[static_cast<std::size_t>(p)][static_cast<std::size_t>(target)] >
            zero_tol)
          support[static_cast<std::size_t>(subsystem == 0 ? i : j)] = true;
      }
  }
  return support;
}

// Report of one audit. consistent == false means the structural hypotheses
// held while the marginal supports overlapped, a configuration the meshing
// conditions rule out; the witness, when constructible, pins down the
// embedded state and outcome that realize the contradiction.
struct AuditReport {
  bool h1 = false;                // four joint credence rows antidistinguishable
  int h1_witness_outcome = -1;    // when !h1: outcome with four positive credences
  bool h2 = false;                // PIP for pbr_audit, PUC for puc_audit
  bool support_disjoint = false;  // phi/psi marginal supports disjoint on both subsystems
  bool consistent = true;
  bool has_witness = false;
  int witness_w1 = -1, witness_w2 = -1, witness_outcome = -1;
};

namespace detail {

inline AuditReport audit_common(const JointModel& jm, double zero_tol, bool h2) {
  AuditReport report;
  report.h2 = h2;

  const ontmodel::CredenceTable cred = joint_credence_table(jm);
  const antidist::CredenceExclusion exclusion =
      antidist::antidistinguishable_credences(cred, zero_tol);
  report.h1 = exclusion.antidistinguishable;
  report.h1_witness_outcome = exclusion.witness_outcome;

  report.support_disjoint = true;
  for (int subsystem = 0; subsystem < 2 && report.support_disjoint; ++subsystem) {
    const auto phi = marginal_support(jm, subsystem, 0, zero_tol);
    const auto psi = marginal_support(jm, subsystem, 1, zero_tol);
    for (std::size_t w = 0; w < phi.size(); ++w)
      if (phi[w] && psi[w]) report.support_disjoint = false;
  }

  report.consistent = !(report.h1 && report.h2 && !report.support_disjoint);
  if (!report.consistent) {
    // Look for an embedded state fed by all four preparations together with
    // an outcome every preparation pair responds to there.
    for (int i = 0; i < jm.omega1.size() && !report.has_witness; ++i)
      for (int j = 0; j < jm.omega2.size() && !report.has_witness; ++j) {
        const int target = jm.embed(i, j);
        if (target < 0) continue;
        bool all_fed = true;
        for (int p = 0; p < 4; ++p)
          all_fed = all_fed && jm.joint_prep[static_cast<std::size_t>(p)]
                                            [static_cast<std::size_t>(target)] > zero_tol;
        if (!all_fed) continue;
        for (std::size_t k = 0; k < jm.responses.outcomes.size(); ++k) {
          bool responds = true;
          for (int p = 0; p < 4; ++p)
            responds = responds && jm.responses.entries[static_cast<std::size_t>(p)]
                                                       [static_cast<std::size_t>(target)][k] >
                                       zero_tol;
          if (responds) {
            report.has_witness = true;
            report.witness_w1 = i;
            report.witness_w2 = j;
            report.witness_outcome = static_cast<int>(k);
            break;
          }
        }
      }
  }
  return report;
}

}  // namespace detail

inline AuditReport pbr_audit(const JointModel& jm, const PrepScenario& scenario,
                             double zero_tol = ontmodel::kZeroTol) {
  jm.validate();
  return detail::audit_common(jm, zero_tol, pip_check(jm, scenario, zero_tol).pass);
}

inline AuditReport puc_audit(const JointModel& jm, const PrepScenario& scenario,
                             double zero_tol = ontmodel::kZeroTol) {
  jm.validate();
  return detail::audit_common(jm, zero_tol, puc_check(jm, scenario, zero_tol).pass);
}

}  // namespace ontikit::pbrpuc
