#ifndef QMART_DOLEANS_HPP
#define QMART_DOLEANS_HPP

#include <utility>

#include "qmart/process.hpp"

namespace qmart {

/// Signed measure on the predictable grid, stored on its atoms: one
/// rational per (block of the left index's partition, consecutive index
/// interval). atom_values[t][b] is the mass of block b of partition t
/// on the interval from index t to index t+1. Every coarser rectangle
/// evaluates by summation.
struct DoleansMeasure {
  SpacePtr space;
  std::vector<std::vector<Rat>> atom_values; // [t in 0..T-2][block of partition t]
};

bool operator==(const DoleansMeasure& a, const DoleansMeasure& b);
DoleansMeasure operator+(const DoleansMeasure& a, const DoleansMeasure& b);
DoleansMeasure operator*(const Rat& c, const DoleansMeasure& x);

DoleansMeasure zero_measure(SpacePtr space);
bool is_zero(const DoleansMeasure& x);
bool is_nonnegative(const DoleansMeasure& x);

/// The measure of a process: the atom on (B, interval t..t+1) carries
/// P(1_B * (X_t - X_{t+1})). Linear in X; zero exactly for martingales;
/// nonnegative exactly for supermartingales.
DoleansMeasure doleans_of(const AdaptedProcess& x);

/// Measure of the rectangle F x ]from, to] where F must be a union of
/// blocks at index `from`. Zero when from == to. Throws Error when F is
/// not measurable at `from` or to < from.
Rat evaluate_rectangle(const DoleansMeasure& x, const std::vector<OutcomeId>& f, IndexPos from,
                       IndexPos to);

/// x applied to an arbitrary path function: project U onto the full cut
/// and pair the coefficients against the atoms blockwise.
Rat evaluate_general(const DoleansMeasure& x, const PathFunction& u);

/// Sum of |atom value| over the whole grid.
Rat total_variation(const DoleansMeasure& x);

/// Sum of atom values over the whole grid.
Rat total_mass(const DoleansMeasure& x);

/// Atomwise positive and negative parts; first plus, then minus.
std::pair<DoleansMeasure, DoleansMeasure> jordan(const DoleansMeasure& x);

/// The unique quasi-potential with this measure: the slice at index t is
/// the density of F -> x(F x ]t, max]) against P, blockwise; the
/// terminal slice is identically zero.
AdaptedProcess process_of(const DoleansMeasure& x);

/// The marginal on single outcomes, computed by evaluating x on the
/// indicator path function of {omega} x Delta. Sums to the total mass.
std::vector<Rat> marginal(const DoleansMeasure& x);

} // namespace qmart

#endif
