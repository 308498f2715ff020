#pragma once

// Finite ontological models: preparation credences over a finite ontic
// space, response credences conditional on act and ontic state, act-outcome
// credence tables, and a Bayesian agent that mixes theories and
// conditionalizes on readout results. Event algebras are power sets
// throughout, so every support question is decidable by enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontikit/errors.hpp"
#include "ontikit/rng.hpp"

namespace ontikit::ontmodel {

// Row normalization tolerance at construction.
inline constexpr double kProbTol = 1e-12;
// Default threshold below which a credence counts as zero.
inline constexpr double kZeroTol = 1e-9;
inline constexpr int kDefaultStateCap = 64;

namespace detail {

inline int index_of(const std::vector<std::string>& ids, const std::string& id) {
  const auto it = std::find(ids.begin(), ids.end(), id);
  return it == ids.end() ? -1 : static_cast<int>(it - ids.begin());
}

inline int index_or_throw(const std::vector<std::string>& ids, const std::string& id,
                          const char* where) {
  const int i = index_of(ids, id);
  if (i < 0)
    throw std::invalid_argument(std::string(where) + ": unknown id '" + id + "'");
  return i;
}

inline void check_distribution(const std::vector<double>& row, const std::string& where) {
  double total = 0.0;
  for (double w : row) {
    if (w < -kProbTol)
      throw std::invalid_argument(where + ": negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kProbTol)
    throw std::invalid_argument(where + ": weights sum to " + std::to_string(total));
}

inline void check_unique(const std::vector<std::string>& ids, const std::string& where) {
  std::set<std::string> seen(ids.begin(), ids.end());
  if (seen.size() != ids.size())
    throw std::invalid_argument(where + ": duplicate ids");
}

}  // namespace detail

struct OnticSpace {
  std::vector<std::string> states;

  int size() const { return static_cast<int>(states.size()); }
  int index_of(const std::string& label) const { return detail::index_of(states, label); }

  void validate(int cap = kDefaultStateCap) const {
    if (states.empty())
      throw std::invalid_argument("OnticSpace: must contain at least one state");
    if (size() > cap)
      throw std::invalid_argument("OnticSpace: exceeds state cap " + std::to_string(cap));
    detail::check_unique(states, "OnticSpace");
  }
};

// Per act, the credence that performing the act leaves the system in each
// ontic state. One row per act, aligned with the act id list.
struct PreparationMap {
  std::vector<std::string> acts;
  std::vector<std::vector<double>> weights;

  const std::vector<double>& row(int act) const { return weights.at(static_cast<std::size_t>(act)); }

  void validate(int n_states) const {
    if (acts.size() != weights.size())
      throw std::invalid_argument("PreparationMap: act/row count mismatch");
    detail::check_unique(acts, "PreparationMap");
    for (std::size_t a = 0; a < weights.size(); ++a) {
      if (static_cast<int>(weights[a].size()) != n_states)
        throw std::invalid_argument("PreparationMap: row length mismatch for act " + acts[a]);
      detail::check_distribution(weights[a], "PreparationMap[" + acts[a] + "]");
    }
  }
};

// cr(outcome | act, state): entries[act][state][outcome]. For every
// (act, state) the outcome row is a distribution.
struct ResponseTable {
  std::vector<std::string> acts;
  std::vector<std::string> outcomes;
  std::vector<std::string> states;
  std::vector<std::vector<std::vector<double>>> entries;

  double entry(int act, int state, int outcome) const {
    return entries.at(act).at(state).at(outcome);
  }

  void validate() const {
    detail::check_unique(acts, "ResponseTable acts");
    detail::check_unique(outcomes, "ResponseTable outcomes");
    detail::check_unique(states, "ResponseTable states");
    if (outcomes.empty())
      throw std::invalid_argument("ResponseTable: no outcomes");
    if (entries.size() != acts.size())
      throw std::invalid_argument("ResponseTable: act dimension mismatch");
    for (std::size_t a = 0; a < entries.size(); ++a) {
      if (entries[a].size() != states.size())
        throw std::invalid_argument("ResponseTable: state dimension mismatch for act " + acts[a]);
      for (std::size_t w = 0; w < entries[a].size(); ++w) {
        if (entries[a][w].size() != outcomes.size())
          throw std::invalid_argument("ResponseTable: outcome dimension mismatch");
        detail::check_distribution(entries[a][w],
                                   "ResponseTable[" + acts[a] + "][" + states[w] + "]");
      }
    }
  }
};

// A finite theory: ontic space, preparation credences and response
// credences for one readout operation.
struct TheoryModel {
  OnticSpace ontic;
  std::vector<std::string> acts;
  std::vector<std::string> outcomes;
  PreparationMap preparations;
  ResponseTable responses;

  int act_index(const std::string& id) const {
    return detail::index_or_throw(acts, id, "TheoryModel");
  }

  void validate(int cap = kDefaultStateCap) const {
    ontic.validate(cap);
    if (acts.empty()) throw std::invalid_argument("TheoryModel: no acts");
    detail::check_unique(acts, "TheoryModel acts");
    detail::check_unique(outcomes, "TheoryModel outcomes");
    preparations.validate(ontic.size());
    responses.validate();
    if (preparations.acts != acts || responses.acts != acts)
      throw std::invalid_argument("TheoryModel: act ids inconsistent across tables");
    if (responses.outcomes != outcomes)
      throw std::invalid_argument("TheoryModel: outcome ids inconsistent across tables");
    if (responses.states != ontic.states)
      throw std::invalid_argument("TheoryModel: response states inconsistent with ontic space");
  }
};

// Act-outcome conditional credences cr(outcome | act); row-stochastic.
struct CredenceTable {
  std::vector<std::string> acts;
  std::vector<std::string> outcomes;
  std::vector<std::vector<double>> rows;

  double at(int act, int outcome) const { return rows.at(act).at(outcome); }

  void validate() const {
    detail::check_unique(acts, "CredenceTable acts");
    detail::check_unique(outcomes, "CredenceTable outcomes");
    if (rows.size() != acts.size())
      throw std::invalid_argument("CredenceTable: row count mismatch");
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (rows[a].size() != outcomes.size())
        throw std::invalid_argument("CredenceTable: row length mismatch");
      for (double v : rows[a])
        if (v < -kProbTol || v > 1.0 + kProbTol)
          throw std::invalid_argument("CredenceTable: entry outside [0, 1]");
      detail::check_distribution(rows[a], "CredenceTable[" + acts[a] + "]");
    }
  }
};

struct WeightedTheory {
  TheoryModel model;
  double weight = 0.0;
};

// Credences over theories plus the act prior (the die). An empty prior
// means the uniform die. All theories must share act and outcome ids.
struct AgentState {
  std::vector<WeightedTheory> theories;
  std::vector<double> act_prior;

  const std::vector<std::string>& acts() const { return theories.front().model.acts; }
  const std::vector<std::string>& outcomes() const { return theories.front().model.outcomes; }

  std::vector<double> effective_prior() const {
    if (!act_prior.empty()) return act_prior;
    const std::size_t n = acts().size();
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
  }

  void validate(int cap = kDefaultStateCap) const {
    if (theories.empty()) throw std::invalid_argument("AgentState: no theories");
    double total = 0.0;
    for (const auto& wt : theories) {
      wt.model.validate(cap);
      if (wt.weight < -kProbTol)
        throw std::invalid_argument("AgentState: negative theory weight");
      total += wt.weight;
    }
    if (std::abs(total - 1.0) > kProbTol)
      throw std::invalid_argument("AgentState: theory weights sum to " + std::to_string(total));
    for (const auto& wt : theories)
      if (wt.model.acts != acts() || wt.model.outcomes != outcomes())
        throw std::invalid_argument("AgentState: theories disagree on act/outcome ids");
    if (!act_prior.empty()) {
      if (act_prior.size() != acts().size())
        throw std::invalid_argument("AgentState: act prior length mismatch");
      detail::check_distribution(act_prior, "AgentState act prior");
    }
  }
};

// Expected outcome credences under one act: sum over ontic states of
// preparation weight times response credence.
inline std::vector<double> predicted_credence(const TheoryModel& model, int act) {
  if (act < 0 || act >= static_cast<int>(model.acts.size()))
    throw std::invalid_argument("predicted_credence: act index out of range");
  const auto& prep = model.preparations.row(act);
  const int n_out = static_cast<int>(model.outcomes.size());
  std::vector<double> cred(static_cast<std::size_t>(n_out), 0.0);
  for (int w = 0; w < model.ontic.size(); ++w) {
    const double pw = prep[static_cast<std::size_t>(w)];
    if (pw == 0.0) continue;
    for (int k = 0; k < n_out; ++k)
      cred[static_cast<std::size_t>(k)] += pw * model.responses.entries[act][w][k];
  }
  return cred;
}

inline std::vector<double> predicted_credence(const TheoryModel& model, const std::string& act) {
  return predicted_credence(model, detail::index_or_throw(model.acts, act, "predicted_credence"));
}

inline CredenceTable predicted_credence_table(const TheoryModel& model) {
  CredenceTable table;
  table.acts = model.acts;
  table.outcomes = model.outcomes;
  for (int a = 0; a < static_cast<int>(model.acts.size()); ++a)
    table.rows.push_back(predicted_credence(model, a));
  return table;
}

// Theory-weighted mixture of predicted credences.
inline std::vector<double> mixture_credence(const AgentState& agent, const std::string& act) {
  for (const auto& wt : agent.theories)
    if (wt.model.acts != agent.acts() || wt.model.outcomes != agent.outcomes())
      throw std::invalid_argument("mixture_credence: theories disagree on act/outcome ids");
  const int a = detail::index_or_throw(agent.acts(), act, "mixture_credence");
  std::vector<double> cred(agent.outcomes().size(), 0.0);
  for (const auto& wt : agent.theories) {
    const auto theory_cred = predicted_credence(wt.model, a);
    for (std::size_t k = 0; k < cred.size(); ++k)
      cred[k] += wt.weight * theory_cred[k];
  }
  return cred;
}

// Act-independence of the response table: the choice of act may influence
// the outcome only through the ontic state.
struct ScreeningReport {
  bool pass = true;
  double max_deviation = 0.0;
  std::string act_i, act_j, outcome, state;

  std::string witness() const {
    return "acts (" + act_i + ", " + act_j + "), outcome " + outcome + ", state " + state;
  }
};

inline ScreeningReport check_screening(const ResponseTable& responses, double tol = kZeroTol) {
  const int n_acts = static_cast<int>(responses.acts.size());
  if (n_acts < 2)
    throw precondition_error("check_screening: needs at least two acts");
  ScreeningReport report;
  for (int i = 0; i < n_acts; ++i)
    for (int j = i + 1; j < n_acts; ++j)
      for (std::size_t w = 0; w < responses.states.size(); ++w)
        for (std::size_t k = 0; k < responses.outcomes.size(); ++k) {
          const double dev = std::abs(responses.entries[i][w][k] - responses.entries[j][w][k]);
          if (dev > report.max_deviation) {
            report.max_deviation = dev;
            report.act_i = responses.acts[i];
            report.act_j = responses.acts[j];
            report.outcome = responses.outcomes[k];
            report.state = responses.states[w];
          }
        }
  report.pass = report.max_deviation <= tol;
  return report;
}

// Every outcome has (near-)zero credence under at least one of the two acts.
inline bool r_distinguishable(const CredenceTable& cred, const std::string& act_i,
                              const std::string& act_j, double zero_tol = kZeroTol) {
  const int i = detail::index_or_throw(cred.acts, act_i, "r_distinguishable");
  const int j = detail::index_or_throw(cred.acts, act_j, "r_distinguishable");
  for (std::size_t k = 0; k < cred.outcomes.size(); ++k)
    if (std::min(cred.rows[i][k], cred.rows[j][k]) > zero_tol) return false;
  return true;
}

// On a finite space with the power-set algebra, an event with credence 1
// under act i and credence 0 under act j exists exactly when the
// preparation supports are disjoint; the witness is the support of act i.
struct OnticDistinctness {
  bool distinct = false;
  std::vector<std::string> witness;  // support of prep(act_i)
};

inline OnticDistinctness ontically_distinct(const TheoryModel& model, const std::string& act_i,
                                            const std::string& act_j,
                                            double zero_tol = kZeroTol) {
  const int i = model.act_index(act_i);
  const int j = model.act_index(act_j);
  const auto& pi = model.preparations.row(i);
  const auto& pj = model.preparations.row(j);
  OnticDistinctness result;
  result.distinct = true;
  for (int w = 0; w < model.ontic.size(); ++w) {
    if (pi[static_cast<std::size_t>(w)] > zero_tol) {
      result.witness.push_back(model.ontic.states[static_cast<std::size_t>(w)]);
      if (pj[static_cast<std::size_t>(w)] > zero_tol) result.distinct = false;
    }
  }
  return result;
}

// For every act pair: readout distinguishability must imply disjoint
// preparation supports. Requires an act-independent response table; a
// violating pair would contradict the meshing conditions and signals a bug
// in the model or the generator that produced it.
struct Theorem1Report {
  struct PairStatus {
    std::string act_i, act_j;
    bool r_distinguishable = false;
    bool ontically_distinct = false;
    bool consistent = true;
  };
  std::vector<PairStatus> pairs;
  bool pass = true;

  std::vector<PairStatus> counterexamples() const {
    std::vector<PairStatus> bad;
    for (const auto& p : pairs)
      if (!p.consistent) bad.push_back(p);
    return bad;
  }
};

inline Theorem1Report theorem1_audit(const TheoryModel& model, double zero_tol = kZeroTol) {
  const ScreeningReport screening = check_screening(model.responses, zero_tol);
  if (!screening.pass)
    throw precondition_error("theorem1_audit: response table is act-dependent at " +
                             screening.witness() + " (deviation " +
                             std::to_string(screening.max_deviation) + ")");
  const CredenceTable cred = predicted_credence_table(model);
  Theorem1Report report;
  for (std::size_t i = 0; i < model.acts.size(); ++i)
    for (std::size_t j = i + 1; j < model.acts.size(); ++j) {
      Theorem1Report::PairStatus status;
      status.act_i = model.acts[i];
      status.act_j = model.acts[j];
      status.r_distinguishable = r_distinguishable(cred, status.act_i, status.act_j, zero_tol);
      status.ontically_distinct =
          ontically_distinct(model, status.act_i, status.act_j, zero_tol).distinct;
      status.consistent = !status.r_distinguishable || status.ontically_distinct;
      report.pass = report.pass && status.consistent;
      report.pairs.push_back(std::move(status));
    }
  return report;
}

// Joint posterior over (theory, act) pairs after observing one outcome.
struct Posterior {
  std::vector<std::vector<double>> weights;  // [theory][act]

  std::vector<double> act_marginal() const {
    std::vector<double> marginal(weights.front().size(), 0.0);
    for (const auto& row : weights)
      for (std::size_t a = 0; a < row.size(); ++a) marginal[a] += row[a];
    return marginal;
  }
};

inline Posterior conditionalize(const AgentState& agent, const std::string& outcome) {
  const int k = detail::index_or_throw(agent.outcomes(), outcome, "conditionalize");
  const std::vector<double> prior = agent.effective_prior();
  Posterior post;
  double marginal = 0.0;
  for (const auto& wt : agent.theories) {
    std::vector<double> row(agent.acts().size(), 0.0);
    for (std::size_t a = 0; a < row.size(); ++a) {
      const auto cred = predicted_credence(wt.model, static_cast<int>(a));
      row[a] = wt.weight * prior[a] * cred[static_cast<std::size_t>(k)];
      marginal += row[a];
    }
    post.weights.push_back(std::move(row));
  }
  if (marginal <= 0.0)
    throw conditioning_on_null("conditionalize: outcome '" + outcome +
                               "' has zero marginal likelihood");
  for (auto& row : post.weights)
    for (double& v : row) v /= marginal;
  return post;
}

// One simulated trial: the act rolled by the die, the ontic state and
// outcome drawn from the ground-truth model, and the agent's posterior.
// `conditioned` is false when the observed outcome had zero likelihood
// under the agent's own credences.
struct TrialRecord {
  int trial = 0;
  std::string act, state, outcome;
  bool conditioned = true;
  Posterior posterior;
};

inline std::vector<TrialRecord> simulate_run(const AgentState& agent,
                                             const TheoryModel& ground_truth,
                                             std::uint64_t seed, int n_trials) {
  if (n_trials < 1)
    throw std::invalid_argument("simulate_run: n_trials must be at least 1");
  if (ground_truth.acts != agent.acts() || ground_truth.outcomes != agent.outcomes())
    throw std::invalid_argument("simulate_run: ground truth and agent disagree on ids");
  const std::vector<double> prior = agent.effective_prior();
  Rng rng(seed);
  std::vector<TrialRecord> trace;
  trace.reserve(static_cast<std::size_t>(n_trials));
  for (int t = 0; t < n_trials; ++t) {
    TrialRecord rec;
    rec.trial = t;
    const int a = rng.sample_discrete(prior);
    const int w = rng.sample_discrete(ground_truth.preparations.row(a));
    const int k = rng.sample_discrete(ground_truth.responses.entries[a][w]);
    rec.act = ground_truth.acts[static_cast<std::size_t>(a)];
    rec.state = ground_truth.ontic.states[static_cast<std::size_t>(w)];
    rec.outcome = ground_truth.outcomes[static_cast<std::size_t>(k)];
    try {
      rec.posterior = conditionalize(agent, rec.outcome);
    } catch (const conditioning_on_null&) {
      rec.conditioned = false;
    }
    trace.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace ontikit::ontmodel
