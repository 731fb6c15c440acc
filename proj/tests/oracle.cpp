#include "oracle.hpp"

#include <algorithm>

namespace oracle {

Rat expect(const FilteredSpace& space, const RandomVariable& y) {
  Rat total;
  for (OutcomeId w = 0; w < space.num_outcomes(); ++w) total += space.prob(w) * y[w];
  return total;
}

RandomVariable cond_exp(const FilteredSpace& space, const RandomVariable& y, IndexPos t) {
  RandomVariable out(space.num_outcomes());
  for (OutcomeId w = 0; w < space.num_outcomes(); ++w) {
    for (const auto& block : space.partition(t)) {
      if (std::find(block.begin(), block.end(), w) == block.end()) continue;
      Rat num, den;
      for (OutcomeId v : block) {
        num += space.prob(v) * y[v];
        den += space.prob(v);
      }
      out[w] = num / den;
      break;
    }
  }
  return out;
}

RandomVariable variation(const AdaptedProcess& x, const std::vector<IndexPos>& cut) {
  const auto& space = *x.space;
  RandomVariable total(space.num_outcomes());
  for (std::size_t n = 0; n + 1 < cut.size(); ++n) {
    const RandomVariable ce = cond_exp(space, x.values[cut[n + 1]], cut[n]);
    for (OutcomeId w = 0; w < space.num_outcomes(); ++w) {
      const Rat diff = x.values[cut[n]][w] - ce[w];
      total[w] += diff.sign() < 0 ? -diff : diff;
    }
  }
  return total;
}

std::pair<Rat, std::vector<IndexPos>> qnorm_all_cuts(const AdaptedProcess& x) {
  const std::size_t t_count = x.space->num_indices();
  Rat best;
  std::vector<IndexPos> best_cut;
  for (std::uint32_t mask = 1; mask < (1u << t_count); ++mask) {
    std::vector<IndexPos> cut;
    for (IndexPos t = 0; t < t_count; ++t)
      if (mask & (1u << t)) cut.push_back(t);
    const Rat value = expect(*x.space, variation(x, cut));
    bool take = best_cut.empty() || value > best;
    if (!take && value == best) {
      take = cut.size() > best_cut.size() ||
             (cut.size() == best_cut.size() &&
              std::lexicographical_compare(cut.begin(), cut.end(), best_cut.begin(),
                                           best_cut.end()));
    }
    if (take) {
      best = value;
      best_cut = cut;
    }
  }
  return {best, best_cut};
}

std::map<std::pair<IndexPos, BlockId>, Rat> doleans_atoms(const AdaptedProcess& x) {
  const auto& space = *x.space;
  std::map<std::pair<IndexPos, BlockId>, Rat> atoms;
  for (IndexPos t = 0; t + 1 < space.num_indices(); ++t) {
    const auto& part = space.partition(t);
    for (BlockId b = 0; b < part.size(); ++b) {
      Rat mass;
      for (OutcomeId w : part[b])
        mass += space.prob(w) * (x.values[t][w] - x.values[t + 1][w]);
      atoms[{t, b}] = mass;
    }
  }
  return atoms;
}

AdaptedProcess doob_compensator(const AdaptedProcess& x) {
  const auto& space = *x.space;
  AdaptedProcess b = qmart::zero_process(x.space);
  for (IndexPos t = 0; t + 1 < space.num_indices(); ++t) {
    const RandomVariable ce = cond_exp(space, x.values[t + 1], t);
    for (OutcomeId w = 0; w < space.num_outcomes(); ++w)
      b.values[t + 1][w] = b.values[t][w] + x.values[t][w] - ce[w];
  }
  return b;
}

Rat marginal_direct(const DoleansMeasure& x, OutcomeId w) {
  const auto& space = *x.space;
  Rat sum;
  for (IndexPos t = 0; t + 1 < space.num_indices(); ++t) {
    const BlockId b = space.block_of(t, w);
    sum += x.atom_values[t][b] / space.block_prob(t, b);
  }
  return space.prob(w) * sum;
}

} // namespace oracle
