#ifndef QMART_TESTS_ORACLE_HPP
#define QMART_TESTS_ORACLE_HPP

// Independent brute-force routines used to freeze expected values and to
// cross-check the library. Everything here recomputes from first
// principles (direct sums, naive enumeration) and deliberately avoids
// the library's computation paths.

#include <map>
#include <utility>
#include <vector>

#include "qmart/doleans.hpp"
#include "qmart/process.hpp"

namespace oracle {

using qmart::AdaptedProcess;
using qmart::BlockId;
using qmart::DoleansMeasure;
using qmart::FilteredSpace;
using qmart::IndexPos;
using qmart::OutcomeId;
using qmart::RandomVariable;
using qmart::Rat;

Rat expect(const FilteredSpace& space, const RandomVariable& y);

/// Blockwise average by scanning the partition for the block, no lookup
/// tables.
RandomVariable cond_exp(const FilteredSpace& space, const RandomVariable& y, IndexPos t);

/// Literal variation formula along the positions of `cut`.
RandomVariable variation(const AdaptedProcess& x, const std::vector<IndexPos>& cut);

/// Naive sup over every nonempty subset of indices, recomputing the
/// variation from scratch per cut. Ties prefer larger, then
/// lexicographically smaller cuts.
std::pair<Rat, std::vector<IndexPos>> qnorm_all_cuts(const AdaptedProcess& x);

/// Atom values P(1_B (X_t - X_{t+1})) by direct summation, keyed by
/// (left index, block id in the space's partition order).
std::map<std::pair<IndexPos, BlockId>, Rat> doleans_atoms(const AdaptedProcess& x);

/// Classical compensator: cumulative conditional one-step drifts.
AdaptedProcess doob_compensator(const AdaptedProcess& x);

/// Closed form of the measure marginal on one outcome:
/// p(w) * sum over steps of atom(block of w) / P(block of w).
Rat marginal_direct(const DoleansMeasure& x, OutcomeId w);

} // namespace oracle

#endif
