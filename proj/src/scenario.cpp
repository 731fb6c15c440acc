#include "qmart/scenario.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace qmart {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<std::string> string_array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of strings");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_string()) throw ParseError(where + ": expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Rat rat_at(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a rational string");
  try {
    return Rat::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
}

std::vector<Partition> parse_filtration(const json& j, const std::string& where,
                                        const std::vector<std::string>& outcomes) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of partitions");
  std::map<std::string, OutcomeId> pos;
  for (OutcomeId w = 0; w < outcomes.size(); ++w) pos.emplace(outcomes[w], w);

  std::vector<Partition> filtration;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const auto& jp = j.at(t);
    const std::string pwhere = where + "[" + std::to_string(t) + "]";
    if (!jp.is_array()) throw ParseError(pwhere + ": expected an array of blocks");
    Partition part;
    for (std::size_t b = 0; b < jp.size(); ++b) {
      const auto ids = string_array(jp.at(b), pwhere + "[" + std::to_string(b) + "]");
      std::vector<OutcomeId> block;
      for (const auto& id : ids) {
        auto it = pos.find(id);
        if (it == pos.end())
          throw ParseError(pwhere + ": unknown outcome '" + id + "'");
        block.push_back(it->second);
      }
      part.push_back(std::move(block));
    }
    filtration.push_back(std::move(part));
  }
  return filtration;
}

json filtration_json(const FilteredSpace& space, const std::vector<Partition>& filtration) {
  json out = json::array();
  for (const auto& part : filtration) {
    json jp = json::array();
    for (const auto& block : part) {
      json jb = json::array();
      for (OutcomeId w : block) jb.push_back(space.outcomes()[w]);
      jp.push_back(std::move(jb));
    }
    out.push_back(std::move(jp));
  }
  return out;
}

} // namespace

Scenario scenario_from_json(const json& j) {
  std::vector<std::string> violations;
  Scenario s = scenario_from_json(j, violations);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return s;
}

Scenario scenario_from_json(const json& j, std::vector<std::string>& out_violations) {
  if (!j.is_object()) throw ParseError("scenario must be a JSON object");

  const auto outcomes = string_array(require(j, "outcomes"), "outcomes");
  const auto indices = string_array(require(j, "indices"), "indices");

  const json& jprob = require(j, "prob");
  if (!jprob.is_array()) throw ParseError("prob: expected an array of rational strings");
  std::vector<Rat> prob;
  for (std::size_t i = 0; i < jprob.size(); ++i)
    prob.push_back(rat_at(jprob.at(i), "prob[" + std::to_string(i) + "]"));

  auto filtration = parse_filtration(require(j, "filtration"), "filtration", outcomes);

  Scenario s;
  auto space = std::make_shared<FilteredSpace>(outcomes, std::move(prob), indices,
                                               std::move(filtration));
  std::vector<std::string> violations = validate_space(*space).violations;
  s.space = space;

  if (j.contains("processes")) {
    const json& jprocs = j.at("processes");
    if (!jprocs.is_object()) throw ParseError("processes: expected an object");
    for (const auto& [name, jmat] : jprocs.items()) {
      const std::string where = "processes['" + name + "']";
      if (!jmat.is_array()) throw ParseError(where + ": expected an array per index");
      AdaptedProcess x{s.space, {}};
      for (std::size_t t = 0; t < jmat.size(); ++t) {
        const auto& jrow = jmat.at(t);
        const std::string rwhere = where + "[" + std::to_string(t) + "]";
        if (!jrow.is_array()) throw ParseError(rwhere + ": expected an array per outcome");
        RandomVariable row;
        for (std::size_t w = 0; w < jrow.size(); ++w)
          row.push_back(rat_at(jrow.at(w), rwhere + "[" + std::to_string(w) + "]"));
        x.values.push_back(std::move(row));
      }
      if (violations.empty()) {
        for (const auto& v : validate_process(x))
          violations.push_back("process '" + name + "': " + v);
      }
      s.processes.emplace(name, std::move(x));
    }
  }

  if (j.contains("subfiltrations")) {
    const json& jsubs = j.at("subfiltrations");
    if (!jsubs.is_object()) throw ParseError("subfiltrations: expected an object");
    for (const auto& [name, jfil] : jsubs.items()) {
      auto sub_filtration =
          parse_filtration(jfil, "subfiltrations['" + name + "']", outcomes);
      auto sub = std::make_shared<FilteredSpace>(outcomes, space->prob(), indices,
                                                 std::move(sub_filtration));
      if (violations.empty()) {
        for (const auto& v : validate_space(*sub).violations)
          violations.push_back("subfiltration '" + name + "': " + v);
        // blockwise coarsening against the main filtration
        for (IndexPos t = 0; t < space->num_indices() && violations.empty(); ++t) {
          for (const auto& g_block : sub->partition(t)) {
            std::vector<bool> member(space->num_outcomes(), false);
            for (OutcomeId w : g_block) member[w] = true;
            for (OutcomeId w : g_block) {
              for (OutcomeId peer : space->partition(t)[space->block_of(t, w)]) {
                if (!member[peer]) {
                  violations.push_back("subfiltration '" + name + "': block at index " +
                                       space->indices()[t] +
                                       " is not a union of blocks of the filtration");
                  break;
                }
              }
            }
          }
        }
      }
      s.subfiltrations.emplace(name, std::move(sub));
    }
  }

  out_violations.insert(out_violations.end(), violations.begin(), violations.end());
  return s;
}

json scenario_to_json(const Scenario& s) {
  const auto& space = *s.space;
  json j;
  j["outcomes"] = space.outcomes();
  json jprob = json::array();
  for (const auto& p : space.prob()) jprob.push_back(p.str());
  j["prob"] = std::move(jprob);
  j["indices"] = space.indices();
  j["filtration"] = filtration_json(space, space.filtration());

  if (!s.processes.empty()) {
    json jprocs = json::object();
    for (const auto& [name, x] : s.processes) jprocs[name] = process_json(x);
    j["processes"] = std::move(jprocs);
  }
  if (!s.subfiltrations.empty()) {
    json jsubs = json::object();
    for (const auto& [name, g] : s.subfiltrations)
      jsubs[name] = filtration_json(space, g->filtration());
    j["subfiltrations"] = std::move(jsubs);
  }
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what());
  }
  return scenario_from_json(j);
}

std::string fnv1a64_hex(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string scenario_digest(const Scenario& s) {
  return fnv1a64_hex(scenario_to_json(s).dump());
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp + "'");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

json rv_json(const RandomVariable& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

json process_json(const AdaptedProcess& x) {
  json out = json::array();
  for (const auto& slice : x.values) out.push_back(rv_json(slice));
  return out;
}

json measure_json(const DoleansMeasure& x) {
  const auto& space = *x.space;
  json out = json::array();
  for (IndexPos t = 0; t + 1 < space.num_indices(); ++t) {
    const auto& part = space.partition(t);
    for (BlockId b = 0; b < part.size(); ++b) {
      json atom;
      json block = json::array();
      for (OutcomeId w : part[b]) block.push_back(space.outcomes()[w]);
      atom["block"] = std::move(block);
      atom["interval"] = json::array({space.indices()[t], space.indices()[t + 1]});
      atom["value"] = x.atom_values[t][b].str();
      out.push_back(std::move(atom));
    }
  }
  return out;
}

json class_json(const ProcessClass& c) {
  json j;
  j["martingale"] = c.martingale;
  j["supermartingale"] = c.supermartingale;
  j["positive"] = c.positive;
  j["increasing"] = c.increasing;
  j["natural"] = c.natural;
  j["quasi_potential"] = c.quasi_potential;
  j["potential"] = c.potential;
  j["q_norm"] = c.q_norm.str();
  return j;
}

} // namespace qmart
