// Copyright 2026 The fairscore Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
//   fairscore [--quiet] [--verify] [--renormalize] <command> ...
//
//   audit   INSTANCE [--scores TABLE] [--report PATH]
//   two-pop INSTANCE OUT
//   remove  INSTANCE OUT [--partition auto|FILE] [--lp-dump PATH]
//   inverse INSTANCE OUT --epsilon E [--partition auto|FILE] [--lp-dump PATH]
//   synth   OUT [--cells C] [--pops N] [--seed S] [--separation D]
//
// Exit codes: 0 success, 2 unreadable or invalid input, 3 two-pop on an
// instance without exactly two populations, 4 forward LP infeasible,
// 5 LP unbounded, 6 --verify found a disagreement with the brute-force
// oracle.
//
// Commands that write a score table also write OUT.report.json. The gaps in
// every report are recomputed from the file that was just written.

#ifndef FAIRSCORE_TOOLS_CLI_HPP_
#define FAIRSCORE_TOOLS_CLI_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairscore/fairscore.hpp"

namespace fairscore::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 2,
  kNeedTwoPopulations = 3,
  kInfeasible = 4,
  kUnbounded = 5,
  kVerifyFailed = 6,
};

inline constexpr double kVerifySlack = 1e-6;

struct RunReport {
  std::string command;
  std::size_t cells = 0;
  std::size_t populations = 0;
  std::size_t groups = 0;
  AuditReport pre;
  std::optional<AuditReport> post;
  std::optional<double> k;
  std::optional<double> gamma;
  std::optional<double> epsilon;
  std::optional<double> correction_sup_norm;
  std::optional<std::size_t> bonus_cells;  // two-pop: cells with u = +1
  std::string status = "ok";
  std::size_t iterations = 0;
  std::optional<std::string> verify;
  double wall_seconds = 0.0;
};

namespace detail {

inline Json audit_json(const AuditReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row = Json::object();
    row["name"] = r.name;
    row["average"] = r.average;
    row["target"] = r.target;
    row["gap"] = r.gap;
    rows.push_back(std::move(row));
  }
  Json out = Json::object();
  out["populations"] = std::move(rows);
  out["max_abs_gap"] = report.max_abs_gap;
  return out;
}

inline void audit_text(std::ostream& out, const char* label,
                       const AuditReport& report) {
  out << label << ":\n";
  for (const auto& r : report.rows) {
    out << "  " << std::left << std::setw(16) << r.name << std::right
        << " average " << format_number(r.average) << "  target "
        << format_number(r.target) << "  gap " << format_number(r.gap) << '\n';
  }
  out << "  max |gap| " << format_number(report.max_abs_gap) << '\n';
}

}  // namespace detail

inline Json report_to_json(const RunReport& report) {
  Json doc = Json::object();
  doc["command"] = report.command;
  Json input = Json::object();
  input["cells"] = report.cells;
  input["populations"] = report.populations;
  input["groups"] = report.groups;
  doc["input"] = std::move(input);
  doc["pre"] = detail::audit_json(report.pre);
  if (report.post) doc["post"] = detail::audit_json(*report.post);
  Json correction = Json::object();
  if (report.k) correction["k"] = *report.k;
  if (report.bonus_cells) correction["bonus_cells"] = *report.bonus_cells;
  if (report.gamma) correction["gamma"] = *report.gamma;
  if (report.epsilon) correction["epsilon"] = *report.epsilon;
  if (report.correction_sup_norm) {
    correction["sup_norm"] = *report.correction_sup_norm;
  }
  doc["correction"] = std::move(correction);
  Json solver = Json::object();
  solver["status"] = report.status;
  solver["iterations"] = report.iterations;
  doc["solver"] = std::move(solver);
  if (report.verify) doc["verify"] = *report.verify;
  doc["wall_seconds"] = report.wall_seconds;
  return doc;
}

inline void report_to_text(std::ostream& out, const RunReport& report) {
  out << report.command << ": " << report.cells << " cells, "
      << report.populations << " populations";
  if (report.groups > 0) out << ", " << report.groups << " groups";
  out << '\n';
  detail::audit_text(out, report.post ? "before" : "averages", report.pre);
  if (report.post) detail::audit_text(out, "after", *report.post);
  if (report.k) out << "k = " << format_number(*report.k) << '\n';
  if (report.bonus_cells) {
    out << "bonus on " << *report.bonus_cells << " of " << report.cells
        << " cells, malus on the rest\n";
  }
  if (report.epsilon) out << "epsilon = " << format_number(*report.epsilon) << '\n';
  if (report.gamma) out << "gamma = " << format_number(*report.gamma) << '\n';
  if (report.correction_sup_norm) {
    out << "max |correction| = " << format_number(*report.correction_sup_norm)
        << '\n';
  }
  if (report.command != "audit") {
    out << "solver: " << report.status << " after " << report.iterations
        << " iterations\n";
  }
  if (report.verify) out << "verify: " << *report.verify << '\n';
  out << "wall time " << std::fixed << std::setprecision(3)
      << report.wall_seconds << " s\n";
  out << std::defaultfloat << std::setprecision(6);
}

// Every population's target set to the mean of the current averages; used
// when an instance carries no targets.
inline TargetVector grand_mean_targets(const Instance& inst,
                                       const ScoreTable& scores) {
  double mean = 0.0;
  for (const auto& p : inst.populations) {
    mean += population_average(inst.space, p, scores);
  }
  mean /= static_cast<double>(inst.populations.size());
  return TargetVector{std::vector<double>(inst.populations.size(), mean)};
}

namespace detail {

struct Globals {
  bool quiet = false;
  bool verify = false;
  bool renormalize = false;
};

class Failure {
 public:
  Failure(int code, std::string message)
      : code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

inline Instance load_valid_instance(const std::string& path,
                                    const Globals& globals) {
  Instance inst;
  try {
    inst = read_instance(path);
  } catch (const InstanceError& e) {
    throw Failure(kInvalidInput, e.what());
  }
  if (globals.renormalize) renormalize(inst.space, inst.populations);
  const auto report =
      validate_instance(inst.space, inst.populations, inst.scores);
  if (!report.ok()) {
    std::string message = path + ": invalid instance";
    for (const auto& v : report.violations) message += "\n  " + v;
    throw Failure(kInvalidInput, message);
  }
  if (inst.targets && inst.targets->size() != inst.populations.size()) {
    throw Failure(kInvalidInput,
                  path + ": " + std::to_string(inst.targets->size()) +
                      " targets for " + std::to_string(inst.populations.size()) +
                      " populations");
  }
  if (inst.targets) {
    for (double y : inst.targets->y) {
      if (!std::isfinite(y)) throw Failure(kInvalidInput, path + ": non-finite target");
    }
  }
  return inst;
}

inline Partition choose_partition(const Instance& inst,
                                  const std::string& flag) {
  if (flag.empty()) {
    return inst.partition ? *inst.partition
                          : Partition::Singletons(inst.space.size());
  }
  if (flag == "auto") return Partition::Singletons(inst.space.size());
  try {
    return parse_partition(read_text_file(flag), inst.space.size());
  } catch (const InstanceError& e) {
    throw Failure(kInvalidInput, flag + ": " + e.what());
  }
}

// Writes the table, reads it back and audits what is actually on disk.
inline ScoreTable emit_table(const std::string& path, const Instance& inst,
                             const ScoreTable& table) {
  try {
    write_text_file(path, serialize_score_table(inst.space, table));
    return parse_score_table(read_text_file(path), inst.space);
  } catch (const InstanceError& e) {
    throw Failure(kInvalidInput, e.what());
  }
}

inline void finish(const RunReport& report, const std::string& json_path,
                   const Globals& globals, std::ostream& out) {
  if (!json_path.empty()) {
    try {
      write_text_file(json_path, to_json_text(report_to_json(report)));
    } catch (const InstanceError& e) {
      throw Failure(kInvalidInput, e.what());
    }
  }
  if (!globals.quiet) report_to_text(out, report);
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

inline void dump_model(const std::string& path, const LpModel& model) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Failure(kInvalidInput, path + ": cannot write LP listing");
  write_lp_listing(out, model);
}

struct AuditArgs {
  std::string instance;
  std::string scores;
  std::string report;
};

inline int cmd_audit(const AuditArgs& args, const Globals& globals,
                     std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Instance inst = load_valid_instance(args.instance, globals);
  ScoreTable scores = inst.scores;
  if (!args.scores.empty()) {
    try {
      scores = parse_score_table(read_text_file(args.scores), inst.space);
    } catch (const InstanceError& e) {
      throw Failure(kInvalidInput, args.scores + ": " + e.what());
    }
  }
  const TargetVector targets =
      inst.targets ? *inst.targets : grand_mean_targets(inst, scores);
  RunReport report;
  report.command = "audit";
  report.cells = inst.space.size();
  report.populations = inst.populations.size();
  report.pre = audit(inst.space, inst.populations, scores, targets);
  report.wall_seconds = seconds_since(start);
  finish(report, args.report, globals, out);
  return kOk;
}

struct TwoPopArgs {
  std::string instance;
  std::string out;
};

inline int cmd_two_pop(const TwoPopArgs& args, const Globals& globals,
                       std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Instance inst = load_valid_instance(args.instance, globals);
  if (inst.populations.size() != 2) {
    throw Failure(kNeedTwoPopulations,
                  "two-pop needs exactly 2 populations, instance has " +
                      std::to_string(inst.populations.size()));
  }
  const auto& p1 = inst.populations[0];
  const auto& p2 = inst.populations[1];
  const TwoPopSolution sol = solve_two_pop(inst.space, p1, p2, inst.scores);
  const ScoreTable written = emit_table(args.out, inst, sol.h);

  RunReport report;
  report.command = "two-pop";
  report.cells = inst.space.size();
  report.populations = 2;
  report.groups = 2;
  report.pre = audit(inst.space, inst.populations, inst.scores,
                     grand_mean_targets(inst, inst.scores));
  report.post = audit(inst.space, inst.populations, written,
                      grand_mean_targets(inst, written));
  report.k = sol.k;
  report.bonus_cells = static_cast<std::size_t>(
      std::count(sol.u.values.begin(), sol.u.values.end(), 1.0));
  report.correction_sup_norm = sup_norm_distance(written, inst.scores);
  report.status = "closed form";

  int code = kOk;
  if (globals.verify) {
    try {
      const auto verdict = verify_two_pop_optimality(inst.space, p1, p2,
                                                     inst.scores, sol.k);
      report.verify = verdict.optimal ? "optimal (" + verdict.reason + ")"
                                      : "FAILED: " + verdict.reason;
      if (!verdict.optimal) code = kVerifyFailed;
    } catch (const GridCapExceeded&) {
      report.verify = "skipped (instance too large for exhaustive search)";
    }
  }
  report.wall_seconds = seconds_since(start);
  finish(report, args.out + ".report.json", globals, out);
  return code;
}

struct CorrectArgs {
  std::string instance;
  std::string out;
  std::string partition;
  std::string lp_dump;
  double epsilon = -1.0;
};

inline std::string verify_forward(const Instance& inst,
                                  const Partition& partition,
                                  const CorrectionResult& result, int& code) {
  try {
    const GridSpec grid = default_forward_grid(inst.space, inst.populations,
                                               result.residuals, partition);
    const auto oracle = brute_force_forward(inst.space, inst.populations,
                                            result.residuals, partition, grid);
    const bool lp_optimal = result.lp.status == LpStatus::kOptimal;
    if (!oracle && !lp_optimal) return "agrees (no flat correction exists)";
    if (!oracle || !lp_optimal) {
      code = kVerifyFailed;
      return oracle ? "FAILED: oracle found a correction the LP missed"
                    : "FAILED: oracle found no grid correction";
    }
    const double gamma = result.bonus_malus.gamma;
    const double slack = oracle->resolution + kVerifySlack;
    if (oracle->best < gamma - kVerifySlack || oracle->best > gamma + slack) {
      code = kVerifyFailed;
      return "FAILED: oracle best " + format_number(oracle->best) +
             " vs LP gamma " + format_number(gamma);
    }
    return "agrees (oracle best " + format_number(oracle->best) +
           ", grid resolution " + format_number(oracle->resolution) + ")";
  } catch (const GridCapExceeded&) {
    return "skipped (instance too large for exhaustive search)";
  }
}

inline std::string verify_inverse(const Instance& inst,
                                  const Partition& partition,
                                  const CorrectionResult& result,
                                  double epsilon, int& code) {
  try {
    GridSpec grid;
    grid.lo = -std::max(epsilon, 1.0);
    grid.hi = std::max(epsilon, 1.0);
    const auto oracle = brute_force_inverse(
        inst.space, inst.populations, result.residuals, partition, epsilon, grid);
    const double gamma = result.bonus_malus.gamma;
    if (oracle.best < gamma - kVerifySlack ||
        oracle.best > gamma + oracle.resolution + kVerifySlack) {
      code = kVerifyFailed;
      return "FAILED: oracle best " + format_number(oracle.best) +
             " vs LP gamma " + format_number(gamma);
    }
    return "agrees (oracle best " + format_number(oracle.best) +
           ", grid resolution " + format_number(oracle.resolution) + ")";
  } catch (const GridCapExceeded&) {
    return "skipped (instance too large for exhaustive search)";
  }
}

inline int cmd_correct(bool inverse, const CorrectArgs& args,
                       const Globals& globals, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (inverse && !(args.epsilon >= 0.0 && std::isfinite(args.epsilon))) {
    throw Failure(kInvalidInput, "--epsilon must be a finite value >= 0");
  }
  const Instance inst = load_valid_instance(args.instance, globals);
  if (!inst.targets) {
    throw Failure(kInvalidInput,
                  args.instance + ": instance has no \"targets\"");
  }
  const Partition partition = choose_partition(inst, args.partition);
  if (partition.cells() != inst.space.size()) {
    throw Failure(kInvalidInput, "partition does not cover the instance cells");
  }

  const CorrectionResult result =
      inverse ? minimize_discrimination(inst.space, inst.populations,
                                        inst.scores, *inst.targets, partition,
                                        args.epsilon)
              : remove_discrimination(inst.space, inst.populations,
                                      inst.scores, *inst.targets, partition);
  dump_model(args.lp_dump, result.model);

  RunReport report;
  report.command = inverse ? "inverse" : "remove";
  report.cells = inst.space.size();
  report.populations = inst.populations.size();
  report.groups = partition.groups();
  report.pre = audit(inst.space, inst.populations, inst.scores, *inst.targets);
  report.status = to_string(result.lp.status);
  report.iterations = result.lp.iterations;
  if (inverse) report.epsilon = args.epsilon;

  int code = kOk;
  std::string failure;
  if (result.lp.status == LpStatus::kInfeasible) {
    code = kInfeasible;
    failure =
        "targets unreachable by any flat correction on this partition "
        "(no correction constant on each group hits every target); "
        "try a finer partition or the inverse command";
  } else if (result.lp.status == LpStatus::kUnbounded) {
    code = kUnbounded;
    failure = "LP unbounded; the input is malformed";
  } else {
    const ScoreTable written = emit_table(args.out, inst, *result.corrected);
    report.post = audit(inst.space, inst.populations, written, *inst.targets);
    report.gamma = result.bonus_malus.gamma;
    report.correction_sup_norm = sup_norm_distance(written, inst.scores);
  }

  if (globals.verify) {
    int verify_code = kOk;
    report.verify =
        inverse ? verify_inverse(inst, partition, result, args.epsilon, verify_code)
                : verify_forward(inst, partition, result, verify_code);
    if (code == kOk) code = verify_code;
  }
  report.wall_seconds = seconds_since(start);
  finish(report, args.out + ".report.json", globals, out);
  if (!failure.empty()) throw Failure(code, failure);
  return code;
}

struct SynthArgs {
  std::string out;
  long long cells = 50;
  long long pops = 2;
  std::uint64_t seed = 1;
  double separation = 0.2;
};

inline int cmd_synth(const SynthArgs& args, const Globals& globals,
                     std::ostream& out) {
  if (args.cells < 1 || args.pops < 1) {
    throw Failure(kInvalidInput, "synth: --cells and --pops must be >= 1");
  }
  SynthOptions options;
  options.cells = static_cast<std::size_t>(args.cells);
  options.populations = static_cast<std::size_t>(args.pops);
  options.seed = args.seed;
  options.separation = args.separation;
  Instance inst;
  try {
    inst = generate_synthetic(options);
  } catch (const std::invalid_argument& e) {
    throw Failure(kInvalidInput, e.what());
  }
  try {
    write_text_file(args.out, serialize_instance(inst));
  } catch (const InstanceError& e) {
    throw Failure(kInvalidInput, e.what());
  }
  if (!globals.quiet) {
    out << "synth: wrote " << args.out << " (" << options.cells << " cells, "
        << options.populations << " populations, seed " << options.seed
        << ")\n";
  }
  return kOk;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Post-process score tables to remove average-score gaps "
               "between populations"};
  app.name("fairscore");
  app.fallthrough();
  app.require_subcommand(1);

  detail::Globals globals;
  app.add_flag("--quiet,-q", globals.quiet, "Suppress the text report");
  app.add_flag("--verify", globals.verify,
               "Cross-check small instances against the brute-force oracle");
  app.add_flag("--renormalize", globals.renormalize,
               "Rescale densities to unit mass instead of rejecting them");

  detail::AuditArgs audit_args;
  auto* audit_cmd = app.add_subcommand("audit", "Report averages and gaps");
  audit_cmd->add_option("instance", audit_args.instance, "Instance file")
      ->required();
  audit_cmd->add_option("--scores", audit_args.scores,
                        "Audit this score table instead of the instance scores");
  audit_cmd->add_option("--report", audit_args.report, "Write the JSON report here");

  detail::TwoPopArgs two_pop_args;
  auto* two_pop_cmd =
      app.add_subcommand("two-pop", "Closed-form equalization of two populations");
  two_pop_cmd->add_option("instance", two_pop_args.instance, "Instance file")
      ->required();
  two_pop_cmd->add_option("out", two_pop_args.out, "Output score table")
      ->required();

  detail::CorrectArgs remove_args;
  auto* remove_cmd = app.add_subcommand(
      "remove", "Hit every target with the smallest flat correction");
  remove_cmd->add_option("instance", remove_args.instance, "Instance file")
      ->required();
  remove_cmd->add_option("out", remove_args.out, "Output score table")
      ->required();
  remove_cmd->add_option("--partition", remove_args.partition,
                         "auto (one group per cell) or a JSON file of group indices");
  remove_cmd->add_option("--lp-dump", remove_args.lp_dump,
                         "Write a plain-text listing of the LP");

  detail::CorrectArgs inverse_args;
  auto* inverse_cmd = app.add_subcommand(
      "inverse", "Minimize the worst target gap with corrections bounded by epsilon");
  inverse_cmd->add_option("instance", inverse_args.instance, "Instance file")
      ->required();
  inverse_cmd->add_option("out", inverse_args.out, "Output score table")
      ->required();
  inverse_cmd->add_option("--epsilon", inverse_args.epsilon,
                          "Largest allowed change of any score")
      ->required();
  inverse_cmd->add_option("--partition", inverse_args.partition,
                          "auto (one group per cell) or a JSON file of group indices");
  inverse_cmd->add_option("--lp-dump", inverse_args.lp_dump,
                          "Write a plain-text listing of the LP");

  detail::SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Write a seeded synthetic instance");
  synth_cmd->add_option("out", synth_args.out, "Output instance file")->required();
  synth_cmd->add_option("--cells", synth_args.cells, "Number of cells");
  synth_cmd->add_option("--pops", synth_args.pops, "Number of populations");
  synth_cmd->add_option("--seed", synth_args.seed, "Random seed");
  synth_cmd->add_option("--separation", synth_args.separation,
                        "Distance between neighbouring population centers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*audit_cmd) return detail::cmd_audit(audit_args, globals, out);
    if (*two_pop_cmd) return detail::cmd_two_pop(two_pop_args, globals, out);
    if (*remove_cmd) return detail::cmd_correct(false, remove_args, globals, out);
    if (*inverse_cmd) return detail::cmd_correct(true, inverse_args, globals, out);
    if (*synth_cmd) return detail::cmd_synth(synth_args, globals, out);
  } catch (const detail::Failure& f) {
    err << "fairscore: " << f.message() << '\n';
    return f.code();
  } catch (const std::exception& e) {
    err << "fairscore: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace fairscore::cli

#endif  // FAIRSCORE_TOOLS_CLI_HPP_
