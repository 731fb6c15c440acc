#ifndef QMART_DECOMP_HPP
#define QMART_DECOMP_HPP

#include <string>

#include "qmart/doleans.hpp"

namespace qmart {

/// X = martingale + quasi_potential, the unique such split.
struct RieszDecomposition {
  AdaptedProcess martingale;
  AdaptedProcess quasi_potential;
};

/// X = pos_part - neg_part with both positive supermartingales and
/// additive norms. The certificate records (norm of X, of pos, of neg).
struct RaoDecomposition {
  AdaptedProcess pos_part;
  AdaptedProcess neg_part;
  struct Certificate {
    Rat input;
    Rat pos;
    Rat neg;
  } norm_certificate;
};

/// Potential X = P(terminal | F_t) - compensator_t with the compensator
/// increasing and natural and the terminal variable nonnegative.
struct DoobMeyerDecomposition {
  RandomVariable terminal;
  AdaptedProcess compensator;
};

/// Martingale part: the conditional expectations of the terminal slice.
/// Quasi-potential part: the remainder.
RieszDecomposition riesz(const AdaptedProcess& x);

/// Jordan parts of the measure give the potential parts; the positive
/// and negative parts of the terminal slice give the martingale parts.
RaoDecomposition rao(const AdaptedProcess& x);

/// Requires a potential; throws Error naming the violated predicate
/// otherwise.
DoobMeyerDecomposition doob_meyer(const AdaptedProcess& x);

/// P(X_t | G_t) on a subfiltration G of X's space. G must share
/// outcomes, probabilities and index labels, and each G-partition must
/// be coarsened by the corresponding partition of X's space.
AdaptedProcess stricker_projection(const AdaptedProcess& x, SpacePtr g);

struct MinimalityReport {
  bool ok = false;
  std::string violation; // first violated slice inequality, empty when ok
};

/// Checks that an alternative decomposition dominates the canonical Rao
/// decomposition: Y_pos - rao(X).pos_part and Y_neg - rao(X).neg_part
/// must be positive supermartingales (potentials when the inputs are
/// potentials). Throws Error when the inputs do not decompose X or are
/// not positive supermartingales.
MinimalityReport check_rao_minimality(const AdaptedProcess& x, const AdaptedProcess& y_pos,
                                      const AdaptedProcess& y_neg);

} // namespace qmart

#endif
