#ifndef QMART_SCENARIO_HPP
#define QMART_SCENARIO_HPP

#include <map>
#include <string>

#include <json.hpp>

#include "qmart/doleans.hpp"
#include "qmart/process.hpp"

namespace qmart {

/// A scenario file: one space, named processes on it, and optional
/// named subfiltrations (same outcomes, probabilities and indices,
/// blockwise-coarser partitions).
struct Scenario {
  SpacePtr space;
  std::map<std::string, AdaptedProcess> processes;
  std::map<std::string, SpacePtr> subfiltrations;
};

/// Builds and fully validates a scenario. Structural problems (wrong
/// JSON types, malformed rationals) throw ParseError; well-formed input
/// that violates model invariants throws ValidationError carrying every
/// violation.
Scenario scenario_from_json(const nlohmann::json& j);

/// Same, but collects invariant violations instead of throwing
/// ValidationError. ParseError is still thrown on structural problems.
Scenario scenario_from_json(const nlohmann::json& j, std::vector<std::string>& violations);

/// Canonical form: rationals in lowest terms, block members in outcome
/// order, blocks ordered by smallest member, names sorted.
nlohmann::json scenario_to_json(const Scenario& s);

Scenario load_scenario(const std::string& path);

/// FNV-1a 64-bit content hash of the canonicalized scenario, hex.
std::string scenario_digest(const Scenario& s);

std::string fnv1a64_hex(const std::string& data);

/// Writes via a temp file and rename so readers never see a partial
/// report.
void write_text_atomic(const std::string& path, const std::string& content);

nlohmann::json rv_json(const RandomVariable& v);
nlohmann::json process_json(const AdaptedProcess& x);
/// Atom records sorted by index position, then block's smallest member.
nlohmann::json measure_json(const DoleansMeasure& x);
nlohmann::json class_json(const ProcessClass& c);

} // namespace qmart

#endif
