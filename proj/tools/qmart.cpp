#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qmart/decomp.hpp"
#include "qmart/scenario.hpp"
#include "qmart/verify.hpp"

using nlohmann::json;
using namespace qmart;

namespace {

// exit codes: 0 success, 1 postcondition/validation failure, 2 usage/parse error
struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string scenario_path;
  std::string process_name;
  std::string cut_labels;
  std::string subfiltration_name;
  std::string out_path;
  bool brute_force = false;
  std::uint64_t seed = 0;
  int trials = 0;
  int outcomes = 4;
  int indices = 4;
};

struct Check {
  std::string name;
  bool ok;
  std::string detail;
};

std::vector<std::string> split_labels(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

const AdaptedProcess& pick_process(const Scenario& s, const std::string& name) {
  if (name.empty()) throw UsageError("--process is required");
  auto it = s.processes.find(name);
  if (it == s.processes.end()) throw UsageError("unknown process '" + name + "'");
  return it->second;
}

Cut pick_cut(const Scenario& s, const std::string& labels) {
  if (labels.empty()) return Cut::full(*s.space);
  try {
    return Cut::from_labels(*s.space, split_labels(labels));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

int emit(const Options& opt, const json& report, bool ok) {
  const std::string text = report.dump(2) + "\n";
  if (opt.out_path.empty()) {
    std::cout << text;
  } else {
    write_text_atomic(opt.out_path, text);
  }
  return ok ? 0 : 1;
}

int emit_report(const Options& opt, const std::string& command, const Scenario* scenario,
                json inputs, json result, const std::vector<Check>& checks) {
  json report;
  report["command"] = command;
  if (scenario) report["digest"] = scenario_digest(*scenario);
  report["inputs"] = std::move(inputs);
  report["result"] = std::move(result);
  json jchecks = json::array();
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.ok;
    json jc;
    jc["name"] = c.name;
    jc["ok"] = c.ok;
    jc["detail"] = c.detail;
    jchecks.push_back(std::move(jc));
  }
  report["checks"] = std::move(jchecks);
  report["ok"] = ok;
  return emit(opt, report, ok);
}

int cmd_validate(const Options& opt) {
  std::ifstream in(opt.scenario_path);
  if (!in) throw ParseError("cannot open '" + opt.scenario_path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what());
  }
  std::vector<std::string> violations;
  Scenario s = scenario_from_json(j, violations);
  json result;
  result["violations"] = violations;
  return emit_report(opt, "validate", violations.empty() ? &s : nullptr,
                     json{{"scenario", opt.scenario_path}}, result,
                     {{"invariants", violations.empty(),
                       violations.empty() ? "all invariants hold"
                                          : std::to_string(violations.size()) + " violation(s)"}});
}

int cmd_variation(const Options& opt, const Scenario& s) {
  const AdaptedProcess& x = pick_process(s, opt.process_name);
  const Cut cut = pick_cut(s, opt.cut_labels);
  const RandomVariable v = d_variation(x, cut);
  json result;
  result["cut"] = cut.labels(*s.space);
  result["variation"] = rv_json(v);
  result["expectation"] = expectation(*s.space, v).str();
  bool nonneg = true;
  for (const auto& r : v) nonneg = nonneg && r.sign() >= 0;
  return emit_report(opt, "variation", &s,
                     json{{"scenario", opt.scenario_path}, {"process", opt.process_name}},
                     result, {{"variation_nonnegative", nonneg, ""}});
}

int cmd_norm(const Options& opt, const Scenario& s) {
  const AdaptedProcess& x = pick_process(s, opt.process_name);
  const Rat fast = q_norm(x);
  json result;
  result["value"] = fast.str();
  std::vector<Check> checks;
  if (opt.brute_force) {
    const BruteForceResult bf = brute_force_q_norm(x);
    result["argmax_cut"] = bf.argmax.labels(*s.space);
    result["brute_force_value"] = bf.value.str();
    checks.push_back({"fast_path_equals_brute_force", fast == bf.value,
                      fast.str() + " vs " + bf.value.str()});
  }
  return emit_report(opt, "norm", &s,
                     json{{"scenario", opt.scenario_path},
                          {"process", opt.process_name},
                          {"brute_force", opt.brute_force}},
                     result, checks);
}

int cmd_measure(const Options& opt, const Scenario& s) {
  const AdaptedProcess& x = pick_process(s, opt.process_name);
  const DoleansMeasure m = doleans_of(x);
  const ProcessClass c = classify(x);
  json result;
  result["atoms"] = measure_json(m);
  result["total_variation"] = total_variation(m).str();
  result["total_mass"] = total_mass(m).str();
  std::vector<Check> checks;
  checks.push_back({"isometry", total_variation(m) == c.q_norm,
                    "total variation " + total_variation(m).str() + " vs q_norm " +
                        c.q_norm.str()});
  checks.push_back({"nonnegative_iff_supermartingale",
                    is_nonnegative(m) == c.supermartingale, ""});
  checks.push_back({"zero_iff_martingale", is_zero(m) == c.martingale, ""});
  return emit_report(opt, "measure", &s,
                     json{{"scenario", opt.scenario_path}, {"process", opt.process_name}},
                     result, checks);
}

int cmd_jordan(const Options& opt, const Scenario& s) {
  const AdaptedProcess& x = pick_process(s, opt.process_name);
  const DoleansMeasure m = doleans_of(x);
  const auto [plus, minus] = jordan(m);
  json result;
  result["positive"] = measure_json(plus);
  result["negative"] = measure_json(minus);
  result["total_variation"] = total_variation(m).str();
  std::vector<Check> checks;
  bool recombines = true;
  for (std::size_t t = 0; t < m.atom_values.size(); ++t)
    for (std::size_t i = 0; i < m.atom_values[t].size(); ++i)
      recombines = recombines && (plus.atom_values[t][i] - minus.atom_values[t][i] ==
                                  m.atom_values[t][i]);
  checks.push_back({"recombination", recombines, ""});
  checks.push_back({"variation_additivity",
                    total_variation(m) == total_mass(plus) + total_mass(minus), ""});
  checks.push_back({"parts_nonnegative", is_nonnegative(plus) && is_nonnegative(minus), ""});
  return emit_report(opt, "jordan", &s,
                     json{{"scenario", opt.scenario_path}, {"process", opt.process_name}},
                     result, checks);
}

int cmd_riesz(const Options& opt, const Scenario& s) {
  const AdaptedProcess& x = pick_process(s, opt.process_name);
  const RieszDecomposition rz = riesz(x);
  const ProcessClass cm = classify(rz.martingale);
  const ProcessClass cb = classify(rz.quasi_potential);
  json result;
  result["martingale"] = process_json(rz.martingale);
  result["quasi_potential"] = process_json(rz.quasi_potential);
  result["martingale_class"] = class_json(cm);
  result["quasi_potential_class"] = class_json(cb);
  std::vector<Check> checks;
  checks.push_back({"reconstruction", rz.martingale + rz.quasi_potential == x, ""});
  checks.push_back({"martingale_flag", cm.martingale, ""});
  checks.push_back({"quasi_potential_flag", cb.quasi_potential, ""});
  return emit_report(opt, "riesz", &s,
                     json{{"scenario", opt.scenario_path}, {"process", opt.process_name}},
                     result, checks);
}

int cmd_rao(const Options& opt, const Scenario& s) {
  const AdaptedProcess& x = pick_process(s, opt.process_name);
  const RaoDecomposition rd = rao(x);
  const ProcessClass cp = classify(rd.pos_part);
  const ProcessClass cn = classify(rd.neg_part);
  const ProcessClass cx = classify(x);
  json result;
  result["pos_part"] = process_json(rd.pos_part);
  result["neg_part"] = process_json(rd.neg_part);
  result["pos_class"] = class_json(cp);
  result["neg_class"] = class_json(cn);
  result["certificate"] = json{{"input", rd.norm_certificate.input.str()},
                               {"pos", rd.norm_certificate.pos.str()},
                               {"neg", rd.norm_certificate.neg.str()}};
  std::vector<Check> checks;
  checks.push_back({"reconstruction", rd.pos_part - rd.neg_part == x, ""});
  checks.push_back(
      {"parts_positive_supermartingales",
       cp.positive && cp.supermartingale && cn.positive && cn.supermartingale, ""});
  if (cx.quasi_potential)
    checks.push_back({"parts_potentials", cp.potential && cn.potential, ""});
  checks.push_back({"norm_additivity",
                    rd.norm_certificate.input ==
                        rd.norm_certificate.pos + rd.norm_certificate.neg,
                    rd.norm_certificate.input.str() + " = " + rd.norm_certificate.pos.str() +
                        " + " + rd.norm_certificate.neg.str()});
  return emit_report(opt, "rao", &s,
                     json{{"scenario", opt.scenario_path}, {"process", opt.process_name}},
                     result, checks);
}

int cmd_doob_meyer(const Options& opt, const Scenario& s) {
  const AdaptedProcess& x = pick_process(s, opt.process_name);
  const ProcessClass cx = classify(x);
  if (!cx.positive)
    throw Error("doob-meyer requires a positive supermartingale: process is not positive");
  if (!cx.supermartingale)
    throw Error("doob-meyer requires a positive supermartingale: process is not a "
                "supermartingale");

  // a general positive supermartingale goes through riesz first; its
  // quasi-potential part is a potential
  const bool routed = !cx.quasi_potential;
  json result;
  const AdaptedProcess* target = &x;
  RieszDecomposition rz;
  if (routed) {
    rz = riesz(x);
    target = &rz.quasi_potential;
    result["martingale_part"] = process_json(rz.martingale);
  }
  result["routed_through_riesz"] = routed;

  const DoobMeyerDecomposition dm = doob_meyer(*target);
  const ProcessClass ca = classify(dm.compensator);
  result["terminal"] = rv_json(dm.terminal);
  result["compensator"] = process_json(dm.compensator);
  result["compensator_class"] = class_json(ca);

  std::vector<Check> checks;
  bool recon = true;
  for (IndexPos t = 0; t < s.space->num_indices(); ++t) {
    const RandomVariable ce = conditional_expectation(*s.space, dm.terminal, t);
    for (OutcomeId w = 0; w < s.space->num_outcomes(); ++w)
      recon = recon &&
              (target->values[t][w] == ce[w] - dm.compensator.values[t][w]);
  }
  checks.push_back({"reconstruction", recon, ""});
  checks.push_back({"compensator_increasing", ca.increasing, ""});
  const NaturalCheck nc = is_natural(dm.compensator, 64, opt.seed);
  checks.push_back({"compensator_natural", nc.natural && nc.integral_ok,
                    "predicate and 64 seeded integral pairs"});
  bool terminal_nonneg = true;
  for (const auto& v : dm.terminal) terminal_nonneg = terminal_nonneg && v.sign() >= 0;
  checks.push_back({"terminal_nonnegative", terminal_nonneg, ""});
  return emit_report(opt, "doob-meyer", &s,
                     json{{"scenario", opt.scenario_path},
                          {"process", opt.process_name},
                          {"seed", opt.seed}},
                     result, checks);
}

int cmd_project(const Options& opt, const Scenario& s) {
  const AdaptedProcess& x = pick_process(s, opt.process_name);
  if (opt.subfiltration_name.empty()) throw UsageError("--subfiltration is required");
  auto it = s.subfiltrations.find(opt.subfiltration_name);
  if (it == s.subfiltrations.end())
    throw UsageError("unknown subfiltration '" + opt.subfiltration_name + "'");
  const AdaptedProcess projected = stricker_projection(x, it->second);
  const Rat norm_in = q_norm(x);
  const Rat norm_out = q_norm(projected);
  json result;
  result["projected"] = process_json(projected);
  result["q_norm_input"] = norm_in.str();
  result["q_norm_projected"] = norm_out.str();
  std::vector<Check> checks;
  checks.push_back(
      {"adapted_to_subfiltration", validate_process(projected).empty(), ""});
  checks.push_back({"norm_contraction", norm_out <= norm_in,
                    norm_out.str() + " <= " + norm_in.str()});
  return emit_report(opt, "project", &s,
                     json{{"scenario", opt.scenario_path},
                          {"process", opt.process_name},
                          {"subfiltration", opt.subfiltration_name}},
                     result, checks);
}

int cmd_check(const Options& opt) {
  SuiteOptions so;
  so.params.seed = opt.seed;
  so.params.num_outcomes = opt.outcomes;
  so.params.num_indices = opt.indices;
  so.trials = opt.trials;
  const SuiteReport report = run_suite(so);
  json jreport;
  jreport["command"] = "check";
  jreport["inputs"] = json{{"seed", opt.seed},
                           {"trials", opt.trials},
                           {"outcomes", opt.outcomes},
                           {"indices", opt.indices}};
  jreport["result"] = report.to_json();
  jreport["ok"] = report.ok();
  return emit(opt, jreport, report.ok());
}

int cmd_gen(const Options& opt) {
  GenParams p;
  p.seed = opt.seed;
  p.num_outcomes = opt.outcomes;
  p.num_indices = opt.indices;
  Scenario s;
  s.space = gen_space(p);
  Rng mix(p.seed ^ 0xC0FFEEull);
  for (ProcessKind kind :
       {ProcessKind::martingale, ProcessKind::positive_supermartingale, ProcessKind::potential,
        ProcessKind::quasimartingale, ProcessKind::natural_increasing}) {
    GenParams pk = p;
    pk.seed = mix.next();
    s.processes.emplace(to_string(kind), gen_process(pk, kind, s.space));
  }
  GenParams pg = p;
  pg.seed = mix.next();
  s.subfiltrations.emplace("G", gen_subfiltration(pg, s.space));

  const std::string text = scenario_to_json(s).dump(2) + "\n";
  if (opt.out_path.empty()) {
    std::cout << text;
  } else {
    write_text_atomic(opt.out_path, text);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasimartingale analysis on finite filtered probability spaces"};
  app.require_subcommand(1);
  Options opt;

  const auto add_scenario = [&](CLI::App* cmd, bool required = true) {
    auto* o = cmd->add_option("--scenario", opt.scenario_path, "scenario file (JSON)");
    if (required) o->required();
  };
  const auto add_process = [&](CLI::App* cmd) {
    cmd->add_option("--process", opt.process_name, "process name in the scenario")->required();
  };
  const auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt.out_path, "write the report to this path");
  };

  auto* validate = app.add_subcommand("validate", "check every scenario invariant");
  add_scenario(validate);
  add_out(validate);

  auto* variation = app.add_subcommand("variation", "d-variation of a process along a cut");
  add_scenario(variation);
  add_process(variation);
  variation->add_option("--cut", opt.cut_labels, "comma-separated index labels (default: full)");
  add_out(variation);

  auto* norm = app.add_subcommand("norm", "quasimartingale norm");
  add_scenario(norm);
  add_process(norm);
  norm->add_flag("--brute-force", opt.brute_force, "also enumerate all cuts");
  add_out(norm);

  auto* measure = app.add_subcommand("measure", "Doleans measure atoms of a process");
  add_scenario(measure);
  add_process(measure);
  add_out(measure);

  auto* jordan_cmd = app.add_subcommand("jordan", "Jordan decomposition of the measure");
  add_scenario(jordan_cmd);
  add_process(jordan_cmd);
  add_out(jordan_cmd);

  auto* riesz_cmd = app.add_subcommand("riesz", "martingale + quasi-potential split");
  add_scenario(riesz_cmd);
  add_process(riesz_cmd);
  add_out(riesz_cmd);

  auto* rao_cmd = app.add_subcommand("rao", "difference of positive supermartingales");
  add_scenario(rao_cmd);
  add_process(rao_cmd);
  add_out(rao_cmd);

  auto* dm_cmd = app.add_subcommand("doob-meyer", "compensator of a positive supermartingale");
  add_scenario(dm_cmd);
  add_process(dm_cmd);
  dm_cmd->add_option("--seed", opt.seed, "seed for the naturalness cross-check");
  add_out(dm_cmd);

  auto* project = app.add_subcommand("project", "conditional projection onto a subfiltration");
  add_scenario(project);
  add_process(project);
  project->add_option("--subfiltration", opt.subfiltration_name, "subfiltration name")
      ->required();
  add_out(project);

  auto* check = app.add_subcommand("check", "run the seeded invariant suite");
  check->add_option("--seed", opt.seed, "base seed");
  check->add_option("--trials", opt.trials, "number of random instances")->required();
  check->add_option("--outcomes", opt.outcomes, "maximum outcomes per instance");
  check->add_option("--indices", opt.indices, "maximum indices per instance");
  add_out(check);

  auto* gen = app.add_subcommand("gen", "write a generated scenario file");
  gen->add_option("--seed", opt.seed, "seed");
  gen->add_option("--outcomes", opt.outcomes, "number of outcomes");
  gen->add_option("--indices", opt.indices, "number of indices");
  add_out(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(opt);
    if (check->parsed()) return cmd_check(opt);
    if (gen->parsed()) return cmd_gen(opt);

    const Scenario s = load_scenario(opt.scenario_path);
    if (variation->parsed()) return cmd_variation(opt, s);
    if (norm->parsed()) return cmd_norm(opt, s);
    if (measure->parsed()) return cmd_measure(opt, s);
    if (jordan_cmd->parsed()) return cmd_jordan(opt, s);
    if (riesz_cmd->parsed()) return cmd_riesz(opt, s);
    if (rao_cmd->parsed()) return cmd_rao(opt, s);
    if (dm_cmd->parsed()) return cmd_doob_meyer(opt, s);
    if (project->parsed()) return cmd_project(opt, s);
    std::cerr << "error: no command\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
