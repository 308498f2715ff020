// Command-line front end: loads model/state files, runs the checks, the
// exclusion solver and the agent simulator, and emits machine-readable
// reports. Exit codes are a stable contract:
//   0 pass, 1 parse error, 2 precondition failure, 3 counterexample,
//   4 internal inconsistency, 5 not certified.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ontikit/antidist.hpp"
#include "ontikit/ontmodel.hpp"
#include "ontikit/pbrpuc.hpp"
#include "ontikit/serialization.hpp"
#include "ontikit/version.hpp"

namespace {

using ontikit::jsonio::Json;

constexpr int kExitPass = 0;
constexpr int kExitParse = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitCounterexample = 3;
constexpr int kExitInconsistent = 4;
constexpr int kExitNotCertified = 5;

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out.good()) throw std::runtime_error("cannot open output file: " + out_path);
  out << text << "\n";
}

// Common report envelope; every report records the effective seed and
// tolerances even when the command ignores them.
Json envelope(const std::string& command, const std::string& input_path,
              const std::string& digest, std::uint64_t seed) {
  Json j;
  j["tool"] = "ontikit";
  j["version"] = ontikit::kVersion;
  j["command"] = command;
  j["input"] = input_path;
  j["input_digest"] = "fnv1a64:" + digest;
  j["seed"] = seed;
  return j;
}

std::string csv_escape(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Two-line CSV rendering of a flat subset of the report.
std::string csv_summary(const Json& report, const std::vector<std::string>& keys) {
  std::string header, values;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    header += keys[i];
    values += report.contains(keys[i]) ? csv_escape(report.at(keys[i])) : "";
    if (i + 1 < keys.size()) {
      header += ",";
      values += ",";
    }
  }
  return header + "\n" + values;
}

struct CommonOpts {
  std::string input;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  double zero_tol = ontikit::ontmodel::kZeroTol;
};

void emit(const Json& report, const std::vector<std::string>& csv_keys,
          const CommonOpts& opts) {
  if (opts.format == "csv-summary")
    write_output(csv_summary(report, csv_keys), opts.out);
  else
    write_output(report.dump(2), opts.out);
}

int run_theorem1(const CommonOpts& opts) {
  const std::string bytes = read_file(opts.input);
  const auto model = ontikit::jsonio::model_from_json(Json::parse(bytes));

  Json report = envelope("theorem1", opts.input, fnv1a64_hex(bytes), opts.seed);
  report["zero_tol"] = opts.zero_tol;

  const auto screening = ontikit::ontmodel::check_screening(model.responses, opts.zero_tol);
  Json sj;
  sj["pass"] = screening.pass;
  sj["max_deviation"] = screening.max_deviation;
  if (!screening.pass) {
    sj["witness"] = Json{{"act_i", screening.act_i},
                         {"act_j", screening.act_j},
                         {"outcome", screening.outcome},
                         {"state", screening.state}};
  }
  report["screening"] = std::move(sj);
  report["screening_pass"] = screening.pass;

  if (!screening.pass) {
    report["pass"] = false;
    emit(report, {"command", "version", "seed", "zero_tol", "input_digest", "screening_pass",
                  "pass"},
         opts);
    return kExitPrecondition;
  }

  const auto audit = ontikit::ontmodel::theorem1_audit(model, opts.zero_tol);
  Json pairs = Json::array();
  int counterexamples = 0;
  for (const auto& p : audit.pairs) {
    pairs.push_back(Json{{"act_i", p.act_i},
                         {"act_j", p.act_j},
                         {"r_distinguishable", p.r_distinguishable},
                         {"ontically_distinct", p.ontically_distinct},
                         {"consistent", p.consistent}});
    counterexamples += p.consistent ? 0 : 1;
  }
  report["pairs"] = std::move(pairs);
  report["counterexamples"] = counterexamples;
  report["pass"] = audit.pass;
  emit(report, {"command", "version", "seed", "zero_tol", "input_digest", "screening_pass",
                "counterexamples", "pass"},
       opts);
  return audit.pass ? kExitPass : kExitCounterexample;
}

int run_audit(const CommonOpts& opts, const std::string& mode) {
  const std::string bytes = read_file(opts.input);
  const auto jm = ontikit::jsonio::joint_from_json(Json::parse(bytes));
  const ontikit::pbrpuc::PrepScenario scenario;

  const auto audit = mode == "pip" ? ontikit::pbrpuc::pbr_audit(jm, scenario, opts.zero_tol)
                                   : ontikit::pbrpuc::puc_audit(jm, scenario, opts.zero_tol);

  Json report = envelope("audit", opts.input, fnv1a64_hex(bytes), opts.seed);
  report["zero_tol"] = opts.zero_tol;
  report["mode"] = mode;
  report["h1"] = audit.h1;
  if (!audit.h1 && audit.h1_witness_outcome >= 0)
    report["h1_witness_outcome"] = jm.responses.outcomes[static_cast<std::size_t>(
        audit.h1_witness_outcome)];
  report["h2_or_puc"] = audit.h2;
  report["support_disjoint"] = audit.support_disjoint;
  report["conclusion"] = audit.consistent ? "consistent" : "impossibility witness";
  if (audit.has_witness) {
    report["witness"] =
        Json{{"omega1", jm.omega1.states[static_cast<std::size_t>(audit.witness_w1)]},
             {"omega2", jm.omega2.states[static_cast<std::size_t>(audit.witness_w2)]},
             {"outcome", jm.responses.outcomes[static_cast<std::size_t>(audit.witness_outcome)]}};
  }
  emit(report, {"command", "version", "seed", "zero_tol", "input_digest", "mode", "h1",
                "h2_or_puc", "support_disjoint", "conclusion"},
       opts);
  return audit.consistent ? kExitPass : kExitCounterexample;
}

int run_antidist(const CommonOpts& opts, double solver_tol, int restarts) {
  const std::string bytes = read_file(opts.input);
  const auto states = ontikit::jsonio::state_list_from_json(Json::parse(bytes));

  // Degenerate inputs are legal but worth flagging before a long search.
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      if (ontikit::qcore::overlap(states[i], states[j]) >= 1.0 - 1e-9)
        std::cerr << "warning: states " << i << " and " << j
                  << " coincide up to phase; exclusion cannot reach zero\n";

  ontikit::antidist::SolverConfig config;
  config.restarts = restarts;
  config.tol = solver_tol;
  config.seed = opts.seed;
  const auto result = ontikit::antidist::find_antidistinguishing_measurement(states, config);
  const auto verify =
      ontikit::antidist::verify_certificate(states, result.certificate, config.tol);

  Json report = envelope("antidist", opts.input, fnv1a64_hex(bytes), opts.seed);
  report["solver_tol"] = config.tol;
  report["restarts"] = config.restarts;
  report["certified"] = result.certified;
  report["verified"] = verify.pass;
  report["residual"] = verify.assignment_total ? verify.max_residual
                                               : result.certificate.residual;
  report["restarts_used"] = result.restarts_used;
  report["certificate"] =
      ontikit::jsonio::certificate_to_json(result.certificate, static_cast<int>(states.size()));

  std::ostringstream summary;
  summary << "residual=" << report["residual"].get<double>()
          << " certified=" << (result.certified && verify.pass ? "true" : "false")
          << " restarts_used=" << result.restarts_used;
  std::cerr << summary.str() << "\n";

  emit(report, {"command", "version", "seed", "solver_tol", "restarts", "input_digest",
                "certified", "verified", "residual", "restarts_used"},
       opts);

  if (result.certified && verify.pass) return kExitPass;
  if (result.certified && !verify.pass) return kExitInconsistent;
  return kExitNotCertified;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run_simulate(const CommonOpts& opts, int trials) {
  const std::string bytes = read_file(opts.input);
  const auto file = ontikit::jsonio::agent_from_json(Json::parse(bytes));
  const ontikit::ontmodel::TheoryModel truth =
      file.ground_truth ? *file.ground_truth : file.agent.theories.front().model;

  const auto trace = ontikit::ontmodel::simulate_run(file.agent, truth, opts.seed, trials);

  std::ostringstream csv;
  csv << "trial,act,ontic,outcome,flag";
  for (std::size_t t = 0; t < file.agent.theories.size(); ++t)
    for (const auto& act : file.agent.acts()) csv << ",post_T" << t << "_" << act;
  csv << "\n";
  int flagged = 0;
  for (const auto& rec : trace) {
    csv << rec.trial << "," << rec.act << "," << rec.state << "," << rec.outcome << ","
        << (rec.conditioned ? 0 : 1);
    for (std::size_t t = 0; t < file.agent.theories.size(); ++t)
      for (std::size_t a = 0; a < file.agent.acts().size(); ++a) {
        csv << ",";
        if (rec.conditioned) csv << format_double(rec.posterior.weights[t][a]);
      }
    csv << "\n";
    flagged += rec.conditioned ? 0 : 1;
  }
  // The trace is the artifact; the reproducibility envelope goes to stderr.
  std::cerr << "simulate seed=" << opts.seed << " trials=" << trials << " flagged=" << flagged
            << " input_digest=fnv1a64:" << fnv1a64_hex(bytes) << " version=" << ontikit::kVersion
            << "\n";
  std::string text = csv.str();
  text.pop_back();  // write_output appends the final newline
  write_output(text, opts.out);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ontikit: finite ontological-model checks, conclusive-exclusion solving, and "
               "credence simulation"};
  app.require_subcommand(1);

  CommonOpts opts;
  double solver_tol = 1e-6;
  int restarts = 100;
  int trials = 1000;
  std::string mode = "pip";

  auto add_common = [&opts](CLI::App* cmd, bool with_out = true) {
    cmd->add_option("--input", opts.input, "input file")->required();
    cmd->add_option("--seed", opts.seed, "random seed recorded in the report");
    cmd->add_option("--zero-tol", opts.zero_tol, "threshold for zero credence");
    if (with_out) cmd->add_option("--out", opts.out, "output file (default stdout)");
    cmd->add_option("--format", opts.format, "report format: json | csv-summary")
        ->check(CLI::IsMember({"json", "csv-summary"}));
  };

  CLI::App* theorem1 = app.add_subcommand(
      "theorem1", "check screening and the distinguishability-to-distinctness implication");
  add_common(theorem1);

  CLI::App* antidist = app.add_subcommand(
      "antidist", "search for a conclusive-exclusion measurement for a state list");
  add_common(antidist);
  antidist->add_option("--solver-tol", solver_tol, "residual target for certification");
  antidist->add_option("--restarts", restarts, "number of random restarts");

  CLI::App* audit =
      app.add_subcommand("audit", "audit a joint model against the support-disjointness theorems");
  add_common(audit);
  audit->add_option("--mode", mode, "pip | puc")->check(CLI::IsMember({"pip", "puc"}));

  CLI::App* simulate =
      app.add_subcommand("simulate", "run seeded trials of an agent and write the CSV trace");
  add_common(simulate);
  simulate->add_option("--trials", trials, "number of trials");

  CLI11_PARSE(app, argc, argv);

  try {
    if (theorem1->parsed()) return run_theorem1(opts);
    if (antidist->parsed()) return run_antidist(opts, solver_tol, restarts);
    if (audit->parsed()) return run_audit(opts, mode);
    if (simulate->parsed()) return run_simulate(opts, trials);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "parse error in " << opts.input << ": " << e.what() << "\n";
    return kExitParse;
  } catch (const ontikit::precondition_error& e) {
    std::cerr << "precondition failure: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitParse;
}
