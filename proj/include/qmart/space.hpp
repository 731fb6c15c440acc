#ifndef QMART_SPACE_HPP
#define QMART_SPACE_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qmart/rational.hpp"

namespace qmart {

using OutcomeId = std::uint32_t;
using IndexPos = std::uint32_t;
using BlockId = std::uint32_t;

inline constexpr std::uint32_t kNoBlock = UINT32_MAX;

/// One value per outcome, in outcome-list order.
using RandomVariable = std::vector<Rat>;

/// A partition of the outcome set into blocks (the atoms of one
/// sigma-algebra of the filtration).
using Partition = std::vector<std::vector<OutcomeId>>;

/// Unconstrained function of (index, outcome): values[t][omega].
/// No adaptedness is required; this is the argument of projection.
using PathFunction = std::vector<RandomVariable>;

/// Finite filtered probability space: outcomes with strictly positive
/// probabilities, linearly ordered index labels (list order), and one
/// refining partition per index.
///
/// The constructor normalizes partitions to canonical form (block
/// members ascending, blocks ordered by smallest member) and builds
/// lookup tables; it does not enforce the semantic invariants. Run
/// validate_space before trusting a space built from external data.
class FilteredSpace {
public:
  FilteredSpace(std::vector<std::string> outcomes, std::vector<Rat> prob,
                std::vector<std::string> indices, std::vector<Partition> filtration);

  std::size_t num_outcomes() const { return outcomes_.size(); }
  std::size_t num_indices() const { return indices_.size(); }

  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<std::string>& indices() const { return indices_; }
  const std::vector<Rat>& prob() const { return prob_; }
  const Rat& prob(OutcomeId w) const { return prob_[w]; }
  const std::vector<Partition>& filtration() const { return filtration_; }
  const Partition& partition(IndexPos t) const { return filtration_[t]; }

  BlockId block_of(IndexPos t, OutcomeId w) const { return block_of_[t][w]; }
  const Rat& block_prob(IndexPos t, BlockId b) const { return block_prob_[t][b]; }

  /// Label lookups; throw Error on unknown labels.
  OutcomeId outcome_pos(std::string_view id) const;
  IndexPos index_pos(std::string_view label) const;

  /// True when y is constant on every block of the partition at t.
  bool is_measurable(IndexPos t, const RandomVariable& y) const;

private:
  std::vector<std::string> outcomes_;
  std::vector<Rat> prob_;
  std::vector<std::string> indices_;
  std::vector<Partition> filtration_;

  std::vector<std::vector<BlockId>> block_of_;  // [t][omega]
  std::vector<std::vector<Rat>> block_prob_;    // [t][block]
  std::unordered_map<std::string, OutcomeId> outcome_pos_;
  std::unordered_map<std::string, IndexPos> index_pos_;
};

using SpacePtr = std::shared_ptr<const FilteredSpace>;

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every FilteredSpace invariant and reports all violations with
/// their coordinates: positivity and normalization of prob, partition
/// coverage and disjointness, refinement down the index list, duplicate
/// labels, dimension mismatches.
ValidationReport validate_space(const FilteredSpace& space);

/// A finite cut of the index set: strictly increasing index positions.
struct Cut {
  std::vector<IndexPos> pos;

  static Cut full(const FilteredSpace& space);
  /// Resolves labels against the space; throws Error when a label is
  /// unknown or the list is empty or not strictly increasing.
  static Cut from_labels(const FilteredSpace& space, std::span<const std::string> labels);

  std::size_t segments() const { return pos.empty() ? 0 : pos.size() - 1; }
  std::vector<std::string> labels(const FilteredSpace& space) const;

  friend bool operator==(const Cut& a, const Cut& b) = default;
};

/// Throws Error unless cut is nonempty, strictly increasing, and within
/// the space's index range.
void check_cut(const FilteredSpace& space, const Cut& cut);

/// An element of the simple predictable class on a cut's grid: one
/// coefficient per interval ]d_n, d_{n+1}], measurable at the left index.
struct SimplePredictable {
  Cut cut;
  std::vector<RandomVariable> coefficients; // one per segment
};

/// P(Y): expectation under the space's probabilities.
Rat expectation(const FilteredSpace& space, const RandomVariable& y);

/// P(Y | F_t): blockwise weighted average, constant on each block.
RandomVariable conditional_expectation(const FilteredSpace& space, const RandomVariable& y,
                                       IndexPos t);
RandomVariable conditional_expectation(const FilteredSpace& space, const RandomVariable& y,
                                       std::string_view index_label);

/// Projection onto the cut's predictable grid: the coefficient on
/// ]d_n, d_{n+1}] is P(U at d_{n+1} | F at d_n).
SimplePredictable project_simple(const FilteredSpace& space, const PathFunction& u,
                                 const Cut& cut);

/// Point evaluation of a simple predictable function. Returns the
/// coefficient of the unique interval ]d_n, d_{n+1}] containing t, or 0
/// when t is outside every interval (in particular at the cut's first
/// label).
Rat evaluate_simple(const FilteredSpace& space, const SimplePredictable& f, OutcomeId w,
                    IndexPos t);
Rat evaluate_simple(const FilteredSpace& space, const SimplePredictable& f,
                    std::string_view outcome_id, std::string_view index_label);

/// Lifts a simple predictable function to the full grid as a
/// PathFunction (zero outside its intervals).
PathFunction lift_simple(const FilteredSpace& space, const SimplePredictable& f);

} // namespace qmart

#endif
