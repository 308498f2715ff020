#pragma once

// JSON encodings. Complex numbers are [re, im] pairs and matrices are
// row-major nested arrays. Reports use insertion-ordered objects so emitted
// field order is stable across runs.

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ontikit/antidist.hpp"
#include "ontikit/ontmodel.hpp"
#include "ontikit/pbrpuc.hpp"
#include "ontikit/qcore.hpp"

namespace ontikit::jsonio {

using Json = nlohmann::ordered_json;

inline Json complex_to_json(const qcore::Complex& z) { return Json::array({z.real(), z.imag()}); }

inline qcore::Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("complex value must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json vector_to_json(const qcore::Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline qcore::Vector vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("state must be a nonempty array of [re, im] pairs");
  qcore::Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

inline Json matrix_to_json(const qcore::Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline qcore::Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a nested array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw std::invalid_argument("matrix rows must be nonempty arrays");
  qcore::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw std::invalid_argument("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
  }
  return m;
}

inline Json state_to_json(const qcore::PureState& s) { return vector_to_json(s.amplitudes()); }

inline qcore::PureState state_from_json(const Json& j) {
  return qcore::PureState(vector_from_json(j));
}

inline Json state_list_to_json(const std::vector<qcore::PureState>& states) {
  Json out = Json::array();
  for (const auto& s : states) out.push_back(state_to_json(s));
  return out;
}

inline std::vector<qcore::PureState> state_list_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("state list must be a nonempty array");
  std::vector<qcore::PureState> states;
  states.reserve(j.size());
  for (const auto& el : j) states.push_back(state_from_json(el));
  return states;
}

inline Json povm_to_json(const qcore::Povm& p) {
  Json out = Json::array();
  for (const auto& e : p.effects()) out.push_back(matrix_to_json(e.matrix()));
  return out;
}

inline qcore::Povm povm_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("povm must be a nonempty array");
  std::vector<qcore::Effect> effects;
  effects.reserve(j.size());
  for (const auto& el : j) effects.emplace_back(matrix_from_json(el));
  return qcore::Povm(std::move(effects));
}

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw std::invalid_argument(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::vector<std::string> string_list(const Json& j, const char* key) {
  const Json& arr = require(j, key);
  if (!arr.is_array()) throw std::invalid_argument(std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const auto& el : arr) out.push_back(el.get<std::string>());
  return out;
}

inline std::vector<double> weight_row(const Json& j, const std::string& context) {
  if (!j.is_array()) throw std::invalid_argument(context + " must be an array of weights");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& el : j) out.push_back(el.get<double>());
  return out;
}

}  // namespace detail

// {"ontic": [...], "acts": [...], "outcomes": [...],
//  "prep": {act: [weights]}, "response": {act: {state: [weights]}}}
inline Json model_to_json(const ontmodel::TheoryModel& model) {
  Json j;
  j["ontic"] = model.ontic.states;
  j["acts"] = model.acts;
  j["outcomes"] = model.outcomes;
  Json prep;
  for (std::size_t a = 0; a < model.acts.size(); ++a)
    prep[model.acts[a]] = model.preparations.weights[a];
  j["prep"] = std::move(prep);
  Json response;
  for (std::size_t a = 0; a < model.acts.size(); ++a) {
    Json by_state;
    for (std::size_t w = 0; w < model.ontic.states.size(); ++w)
      by_state[model.ontic.states[w]] = model.responses.entries[a][w];
    response[model.acts[a]] = std::move(by_state);
  }
  j["response"] = std::move(response);
  return j;
}

inline ontmodel::TheoryModel model_from_json(const Json& j) {
  ontmodel::TheoryModel model;
  model.ontic.states = detail::string_list(j, "ontic");
  model.acts = detail::string_list(j, "acts");
  model.outcomes = detail::string_list(j, "outcomes");
  const Json& prep = detail::require(j, "prep");
  model.preparations.acts = model.acts;
  for (const auto& act : model.acts)
    model.preparations.weights.push_back(
        detail::weight_row(detail::require(prep, act.c_str()), "prep '" + act + "'"));
  const Json& response = detail::require(j, "response");
  model.responses.acts = model.acts;
  model.responses.outcomes = model.outcomes;
  model.responses.states = model.ontic.states;
  for (const auto& act : model.acts) {
    const Json& by_state = detail::require(response, act.c_str());
    std::vector<std::vector<double>> rows;
    for (const auto& state : model.ontic.states)
      rows.push_back(detail::weight_row(detail::require(by_state, state.c_str()),
                                        "response '" + act + "'/'" + state + "'"));
    model.responses.entries.push_back(std::move(rows));
  }
  model.validate();
  return model;
}

// {"theories": [{"weight": w, "model": {...}}, ...],
//  "act_prior": [...]?, "ground_truth": {...}?}
struct AgentFile {
  ontmodel::AgentState agent;
  std::optional<ontmodel::TheoryModel> ground_truth;
};

inline Json agent_to_json(const ontmodel::AgentState& agent,
                          const std::optional<ontmodel::TheoryModel>& truth = std::nullopt) {
  Json j;
  Json theories = Json::array();
  for (const auto& wt : agent.theories) {
    Json entry;
    entry["weight"] = wt.weight;
    entry["model"] = model_to_json(wt.model);
    theories.push_back(std::move(entry));
  }
  j["theories"] = std::move(theories);
  if (!agent.act_prior.empty()) j["act_prior"] = agent.act_prior;
  if (truth) j["ground_truth"] = model_to_json(*truth);
  return j;
}

inline AgentFile agent_from_json(const Json& j) {
  AgentFile file;
  const Json& theories = detail::require(j, "theories");
  if (!theories.is_array() || theories.empty())
    throw std::invalid_argument("field 'theories' must be a nonempty array");
  for (const auto& entry : theories) {
    ontmodel::WeightedTheory wt;
    wt.weight = detail::require(entry, "weight").get<double>();
    wt.model = model_from_json(detail::require(entry, "model"));
    file.agent.theories.push_back(std::move(wt));
  }
  if (j.contains("act_prior"))
    file.agent.act_prior = detail::weight_row(j.at("act_prior"), "act_prior");
  file.agent.validate();
  if (j.contains("ground_truth")) file.ground_truth = model_from_json(j.at("ground_truth"));
  return file;
}

// Extends the model format: "ontic" holds the composite space, "response"
// is keyed by the four preparation pairs, and the product structure rides
// in "omega1", "omega2" and "embedding" ([w1, w2, w12] label triples).
inline Json joint_to_json(const pbrpuc::JointModel& jm) {
  Json j;
  j["ontic"] = jm.omega12.states;
  j["acts"] = pbrpuc::prep_pair_ids();
  j["outcomes"] = jm.responses.outcomes;
  j["omega1"] = jm.omega1.states;
  j["omega2"] = jm.omega2.states;
  Json embedding = Json::array();
  for (std::size_t i = 0; i < jm.omega1.states.size(); ++i)
    for (std::size_t k = 0; k < jm.omega2.states.size(); ++k) {
      const int target = jm.embed(static_cast<int>(i), static_cast<int>(k));
      if (target < 0) continue;
      embedding.push_back(Json::array({jm.omega1.states[i], jm.omega2.states[k],
                                       jm.omega12.states[static_cast<std::size_t>(target)]}));
    }
  j["embedding"] = std::move(embedding);
  Json joint_prep;
  for (int p = 0; p < 4; ++p)
    joint_prep[pbrpuc::kPrepPairNames[p]] = jm.joint_prep[static_cast<std::size_t>(p)];
  j["joint_prep"] = std::move(joint_prep);
  Json response;
  for (int p = 0; p < 4; ++p) {
    Json by_state;
    for (std::size_t w = 0; w < jm.omega12.states.size(); ++w)
      by_state[jm.omega12.states[w]] = jm.responses.entries[static_cast<std::size_t>(p)][w];
    response[pbrpuc::kPrepPairNames[p]] = std::move(by_state);
  }
  j["response"] = std::move(response);
  return j;
}

inline pbrpuc::JointModel joint_from_json(const Json& j) {
  pbrpuc::JointModel jm;
  jm.omega12.states = detail::string_list(j, "ontic");
  jm.omega1.states = detail::string_list(j, "omega1");
  jm.omega2.states = detail::string_list(j, "omega2");
  jm.embedding.assign(jm.omega1.states.size() * jm.omega2.states.size(), -1);
  const Json& embedding = detail::require(j, "embedding");
  if (!embedding.is_array()) throw std::invalid_argument("field 'embedding' must be an array");
  for (const auto& triple : embedding) {
    if (!triple.is_array() || triple.size() != 3)
      throw std::invalid_argument("embedding entries must be [w1, w2, w12] triples");
    const int i = jm.omega1.index_of(triple[0].get<std::string>());
    const int k = jm.omega2.index_of(triple[1].get<std::string>());
    const int target = jm.omega12.index_of(triple[2].get<std::string>());
    if (i < 0 || k < 0 || target < 0)
      throw std::invalid_argument("embedding refers to unknown state labels");
    jm.embedding[static_cast<std::size_t>(i) * jm.omega2.states.size() +
                 static_cast<std::size_t>(k)] = target;
  }
  const Json& joint_prep = detail::require(j, "joint_prep");
  for (int p = 0; p < 4; ++p)
    jm.joint_prep[static_cast<std::size_t>(p)] =
        detail::weight_row(detail::require(joint_prep, pbrpuc::kPrepPairNames[p]),
                           std::string("joint_prep '") + pbrpuc::kPrepPairNames[p] + "'");
  jm.responses.acts = pbrpuc::prep_pair_ids();
  jm.responses.outcomes = detail::string_list(j, "outcomes");
  jm.responses.states = jm.omega12.states;
  const Json& response = detail::require(j, "response");
  for (int p = 0; p < 4; ++p) {
    const Json& by_state = detail::require(response, pbrpuc::kPrepPairNames[p]);
    std::vector<std::vector<double>> rows;
    for (const auto& state : jm.omega12.states)
      rows.push_back(detail::weight_row(detail::require(by_state, state.c_str()),
                                        "response '" + state + "'"));
    jm.responses.entries.push_back(std::move(rows));
  }
  jm.validate();
  return jm;
}

// Certificates carry the candidate effects plus both views of the
// assignment: "excludes" maps each outcome to the state it claims to rule
// out, "assignment" maps each state to the first outcome excluding it
// (-1 when none does).
inline Json certificate_to_json(const antidist::ExclusionCertificate& cert, int n_states) {
  Json j;
  Json povm = Json::array();
  for (const auto& e : cert.effects) povm.push_back(matrix_to_json(e));
  j["povm"] = std::move(povm);
  j["excludes"] = cert.excluded_state;
  std::vector<int> assignment(static_cast<std::size_t>(n_states), -1);
  for (std::size_t k = 0; k < cert.excluded_state.size(); ++k) {
    const int s = cert.excluded_state[k];
    if (s >= 0 && s < n_states && assignment[static_cast<std::size_t>(s)] < 0)
      assignment[static_cast<std::size_t>(s)] = static_cast<int>(k);
  }
  j["assignment"] = assignment;
  j["residual"] = cert.residual;
  return j;
}

inline antidist::ExclusionCertificate certificate_from_json(const Json& j) {
  antidist::ExclusionCertificate cert;
  const Json& povm = detail::require(j, "povm");
  if (!povm.is_array() || povm.empty())
    throw std::invalid_argument("field 'povm' must be a nonempty array");
  for (const auto& el : povm) cert.effects.push_back(matrix_from_json(el));
  const Json& excludes = detail::require(j, "excludes");
  for (const auto& el : excludes) cert.excluded_state.push_back(el.get<int>());
  cert.residual = detail::require(j, "residual").get<double>();
  return cert;
}

}  // namespace ontikit::jsonio
