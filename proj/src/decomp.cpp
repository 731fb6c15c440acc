#include "qmart/decomp.hpp"

namespace qmart {

namespace {

AdaptedProcess martingale_of_terminal(SpacePtr space, const RandomVariable& terminal) {
  AdaptedProcess m{space, {}};
  m.values.reserve(space->num_indices());
  for (IndexPos t = 0; t < space->num_indices(); ++t)
    m.values.push_back(conditional_expectation(*space, terminal, t));
  return m;
}

std::string slice_coords(const FilteredSpace& space, IndexPos t, OutcomeId w) {
  return "index " + space.indices()[t] + ", outcome '" + space.outcomes()[w] + "'";
}

} // namespace

RieszDecomposition riesz(const AdaptedProcess& x) {
  if (!x.space) throw Error("process has no space");
  const IndexPos last = static_cast<IndexPos>(x.space->num_indices() - 1);
  AdaptedProcess m = martingale_of_terminal(x.space, x.values[last]);
  return {m, x - m};
}

RaoDecomposition rao(const AdaptedProcess& x) {
  if (!x.space) throw Error("process has no space");
  const auto [x_plus, x_minus] = jordan(doleans_of(x));
  const AdaptedProcess b_pos = process_of(x_plus);
  const AdaptedProcess b_neg = process_of(x_minus);

  const IndexPos last = static_cast<IndexPos>(x.space->num_indices() - 1);
  const RandomVariable& terminal = x.values[last];
  RandomVariable term_pos(terminal.size()), term_neg(terminal.size());
  for (std::size_t w = 0; w < terminal.size(); ++w) {
    term_pos[w] = terminal[w].pos_part();
    term_neg[w] = terminal[w].neg_part();
  }

  RaoDecomposition out{martingale_of_terminal(x.space, term_pos) + b_pos,
                       martingale_of_terminal(x.space, term_neg) + b_neg,
                       {}};
  out.norm_certificate.input = q_norm(x);
  out.norm_certificate.pos = q_norm(out.pos_part);
  out.norm_certificate.neg = q_norm(out.neg_part);
  return out;
}

DoobMeyerDecomposition doob_meyer(const AdaptedProcess& x) {
  const ProcessClass cls = classify(x);
  if (!cls.positive) throw Error("doob_meyer requires a potential: process is not positive");
  if (!cls.supermartingale)
    throw Error("doob_meyer requires a potential: process is not a supermartingale");
  if (!cls.quasi_potential)
    throw Error("doob_meyer requires a potential: terminal slice is not zero");

  const auto& space = *x.space;
  const DoleansMeasure measure = doleans_of(x);

  // compensator increments are the atom densities of the left index,
  // so each increment is measurable one step ahead
  AdaptedProcess a = zero_process(x.space);
  for (IndexPos t = 0; t + 1 < space.num_indices(); ++t) {
    const auto& part = space.partition(t);
    for (BlockId b = 0; b < part.size(); ++b) {
      const Rat inc = measure.atom_values[t][b] / space.block_prob(t, b);
      for (OutcomeId w : part[b]) a.values[t + 1][w] = a.values[t][w] + inc;
    }
  }

  const std::vector<Rat> marg = marginal(measure);
  RandomVariable terminal(space.num_outcomes());
  for (OutcomeId w = 0; w < space.num_outcomes(); ++w) terminal[w] = marg[w] / space.prob(w);

  return {std::move(terminal), std::move(a)};
}

AdaptedProcess stricker_projection(const AdaptedProcess& x, SpacePtr g) {
  if (!x.space || !g) throw Error("process or subfiltration has no space");
  const auto& f_space = *x.space;
  if (g->outcomes() != f_space.outcomes() || g->indices() != f_space.indices() ||
      !(g->prob() == f_space.prob()))
    throw Error("not a subfiltration: outcomes, probabilities and indices must match");

  for (IndexPos t = 0; t < f_space.num_indices(); ++t) {
    for (const auto& g_block : g->partition(t)) {
      std::vector<bool> member(f_space.num_outcomes(), false);
      for (OutcomeId w : g_block) member[w] = true;
      for (OutcomeId w : g_block) {
        for (OutcomeId peer : f_space.partition(t)[f_space.block_of(t, w)]) {
          if (!member[peer])
            throw Error("not a subfiltration: a block at index " + f_space.indices()[t] +
                        " is not a union of blocks of the finer filtration");
        }
      }
    }
  }

  AdaptedProcess out{g, {}};
  out.values.reserve(f_space.num_indices());
  for (IndexPos t = 0; t < f_space.num_indices(); ++t)
    out.values.push_back(conditional_expectation(*g, x.values[t], t));
  return out;
}

MinimalityReport check_rao_minimality(const AdaptedProcess& x, const AdaptedProcess& y_pos,
                                      const AdaptedProcess& y_neg) {
  if (x.space != y_pos.space || x.space != y_neg.space)
    throw Error("processes live on different spaces");
  const auto& space = *x.space;

  for (IndexPos t = 0; t < space.num_indices(); ++t) {
    for (OutcomeId w = 0; w < space.num_outcomes(); ++w) {
      if (!(y_pos.values[t][w] - y_neg.values[t][w] == x.values[t][w]))
        throw Error("inputs do not decompose X at " + slice_coords(space, t, w));
    }
  }
  const ProcessClass cls_pos = classify(y_pos);
  if (!cls_pos.positive || !cls_pos.supermartingale)
    throw Error("Y_pos is not a positive supermartingale");
  const ProcessClass cls_neg = classify(y_neg);
  if (!cls_neg.positive || !cls_neg.supermartingale)
    throw Error("Y_neg is not a positive supermartingale");

  const RaoDecomposition canonical = rao(x);
  const bool want_potentials = cls_pos.potential && cls_neg.potential;

  MinimalityReport report;
  report.ok = true;

  const auto examine = [&](const AdaptedProcess& y, const AdaptedProcess& part,
                           const char* name) {
    if (!report.ok) return;
    const AdaptedProcess diff = y - part;
    for (IndexPos t = 0; t < space.num_indices() && report.ok; ++t) {
      for (OutcomeId w = 0; w < space.num_outcomes(); ++w) {
        if (diff.values[t][w].sign() < 0) {
          report.ok = false;
          report.violation = std::string(name) + " - rao part is negative at " +
                             slice_coords(space, t, w);
          return;
        }
      }
    }
    for (IndexPos t = 0; t + 1 < space.num_indices() && report.ok; ++t) {
      const RandomVariable ce = conditional_expectation(space, diff.values[t + 1], t);
      for (OutcomeId w = 0; w < space.num_outcomes(); ++w) {
        if (diff.values[t][w] < ce[w]) {
          report.ok = false;
          report.violation = std::string(name) +
                             " - rao part fails the supermartingale inequality at " +
                             slice_coords(space, t, w);
          return;
        }
      }
    }
    if (want_potentials && report.ok) {
      const IndexPos last = static_cast<IndexPos>(space.num_indices() - 1);
      for (OutcomeId w = 0; w < space.num_outcomes(); ++w) {
        if (!diff.values[last][w].is_zero()) {
          report.ok = false;
          report.violation = std::string(name) + " - rao part is not a potential at " +
                             slice_coords(space, last, w);
          return;
        }
      }
    }
  };

  examine(y_pos, canonical.pos_part, "Y_pos");
  examine(y_neg, canonical.neg_part, "Y_neg");
  return report;
}

} // namespace qmart
