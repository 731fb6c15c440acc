#ifndef QMART_VERIFY_HPP
#define QMART_VERIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmart/decomp.hpp"
#include "qmart/scenario.hpp"

namespace qmart {

/// Knobs for the seeded generators. Everything downstream is a pure
/// function of these fields. The documented operating envelope is
/// 2..16 outcomes and 2..8 indices; smaller values are accepted (a
/// single-index space is legal and makes every norm zero).
struct GenParams {
  std::uint64_t seed = 0;
  int num_outcomes = 4;
  int num_indices = 4;
  int value_bound = 8; // numerators in [-bound, bound], denominators in [1, bound]
};

enum class ProcessKind {
  martingale,
  positive_supermartingale,
  potential,
  quasimartingale,
  natural_increasing,
};

std::string_view to_string(ProcessKind kind);

struct BruteForceResult {
  Rat value;
  Cut argmax;
};

/// The norm by enumeration of all nonempty cuts. Ties prefer the
/// largest cut, then the lexicographically smallest label sequence.
/// Guarded to at most 20 indices.
BruteForceResult brute_force_q_norm(const AdaptedProcess& x);

/// Random space: positive rational probabilities normalized to sum 1,
/// refining partitions grown by successive splitting from the trivial
/// partition.
SpacePtr gen_space(const GenParams& p);

/// Random process of the requested kind on the space; the classify
/// flags of the kind hold by construction.
AdaptedProcess gen_process(const GenParams& p, ProcessKind kind, SpacePtr space);

/// Random subfiltration of the space: per index, a coarsening of the
/// space's partition, refining along the index list.
SpacePtr gen_subfiltration(const GenParams& p, const SpacePtr& space);

/// The four canonical worked examples. Each scenario carries a single
/// process named "X"; E3 also carries the subfiltration "G" that is
/// trivial from its second index on.
Scenario fixture_e1();       // two-point martingale
Scenario fixture_e2();       // positive supermartingale
Scenario fixture_e2_prime(); // potential
Scenario fixture_e3();       // quasi-potential with sign-changing measure
std::vector<std::pair<std::string, Scenario>> canonical_fixtures();

/// Test-harness corruption hook for proving the suite detects defects.
enum class Mutation { none, flip_doleans_sign };

struct Counterexample {
  std::string instance; // fixture name or "trial k"
  std::string detail;
  nlohmann::json scenario;
};

struct InvariantResult {
  std::string name;
  int pass = 0;
  int fail = 0;
  std::optional<Counterexample> first_failure;
};

struct SuiteReport {
  std::vector<InvariantResult> invariants;
  int total_pass = 0;
  int total_fail = 0;

  bool ok() const { return total_fail == 0; }
  const InvariantResult* find(std::string_view name) const;
  nlohmann::json to_json() const;
};

struct SuiteOptions {
  GenParams params;
  int trials = 0;
  bool fixtures = false;
  Mutation mutation = Mutation::none;
};

/// Runs every module invariant over the requested instances: the four
/// canonical fixtures when `fixtures` is set, then `trials` seeded
/// random instances. Deterministic given the options.
SuiteReport run_suite(const SuiteOptions& options);
SuiteReport run_suite(const GenParams& p, int trials);

} // namespace qmart

#endif
