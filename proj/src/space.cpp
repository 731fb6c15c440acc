#include "qmart/space.hpp"

#include <algorithm>
#include <set>

namespace qmart {

FilteredSpace::FilteredSpace(std::vector<std::string> outcomes, std::vector<Rat> prob,
                             std::vector<std::string> indices,
                             std::vector<Partition> filtration)
    : outcomes_(std::move(outcomes)),
      prob_(std::move(prob)),
      indices_(std::move(indices)),
      filtration_(std::move(filtration)) {
  const std::size_t m = outcomes_.size();

  for (auto& part : filtration_) {
    for (auto& block : part) std::sort(block.begin(), block.end());
    std::sort(part.begin(), part.end(),
              [](const auto& a, const auto& b) {
                if (a.empty() || b.empty()) return a.size() < b.size();
                return a.front() < b.front();
              });
  }

  block_of_.resize(filtration_.size());
  block_prob_.resize(filtration_.size());
  for (std::size_t t = 0; t < filtration_.size(); ++t) {
    block_of_[t].assign(m, kNoBlock);
    block_prob_[t].assign(filtration_[t].size(), Rat());
    for (BlockId b = 0; b < filtration_[t].size(); ++b) {
      for (OutcomeId w : filtration_[t][b]) {
        if (w >= m) continue; // out-of-range members are reported by validate_space
        if (block_of_[t][w] == kNoBlock) block_of_[t][w] = b;
        if (w < prob_.size()) block_prob_[t][b] += prob_[w];
      }
    }
  }

  for (OutcomeId w = 0; w < m; ++w) outcome_pos_.emplace(outcomes_[w], w);
  for (IndexPos t = 0; t < indices_.size(); ++t) index_pos_.emplace(indices_[t], t);
}

OutcomeId FilteredSpace::outcome_pos(std::string_view id) const {
  auto it = outcome_pos_.find(std::string(id));
  if (it == outcome_pos_.end()) throw Error("unknown outcome '" + std::string(id) + "'");
  return it->second;
}

IndexPos FilteredSpace::index_pos(std::string_view label) const {
  auto it = index_pos_.find(std::string(label));
  if (it == index_pos_.end()) throw Error("unknown index label '" + std::string(label) + "'");
  return it->second;
}

bool FilteredSpace::is_measurable(IndexPos t, const RandomVariable& y) const {
  for (const auto& block : filtration_[t]) {
    for (std::size_t i = 1; i < block.size(); ++i) {
      if (!(y[block[i]] == y[block[0]])) return false;
    }
  }
  return true;
}

ValidationReport validate_space(const FilteredSpace& space) {
  ValidationReport report;
  auto add = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

  const auto& outcomes = space.outcomes();
  const auto& indices = space.indices();
  const auto& prob = space.prob();
  const auto& filtration = space.filtration();
  const std::size_t m = outcomes.size();
  const std::size_t t_count = indices.size();

  if (m == 0) add("outcome list is empty");
  if (t_count == 0) add("index list is empty");

  {
    std::set<std::string> seen;
    for (const auto& id : outcomes)
      if (!seen.insert(id).second) add("duplicate outcome id '" + id + "'");
  }
  {
    std::set<std::string> seen;
    for (const auto& label : indices)
      if (!seen.insert(label).second) add("duplicate index label '" + label + "'");
  }

  if (prob.size() != m) {
    add("prob has " + std::to_string(prob.size()) + " entries for " + std::to_string(m) +
        " outcomes");
  } else {
    Rat sum;
    for (OutcomeId w = 0; w < m; ++w) {
      if (!(prob[w] > Rat(0)))
        add("probability of outcome '" + outcomes[w] + "' is " + prob[w].str() +
            " (must be > 0)");
      sum += prob[w];
    }
    if (!(sum == Rat(1))) add("probabilities sum to " + sum.str() + " ≠ 1");
  }

  if (filtration.size() != t_count) {
    add("filtration has " + std::to_string(filtration.size()) + " partitions for " +
        std::to_string(t_count) + " indices");
    return report; // per-index checks below assume aligned lists
  }

  for (IndexPos t = 0; t < t_count; ++t) {
    const auto& part = filtration[t];
    std::vector<int> hits(m, 0);
    for (const auto& block : part) {
      if (block.empty()) add("empty block in partition at index " + indices[t]);
      for (OutcomeId w : block) {
        if (w >= m) {
          add("partition at index " + indices[t] + " references outcome position " +
              std::to_string(w) + " out of range");
        } else {
          ++hits[w];
        }
      }
    }
    for (OutcomeId w = 0; w < m; ++w) {
      if (hits[w] == 0)
        add("partition at index " + indices[t] + " does not cover outcome '" + outcomes[w] +
            "'");
      if (hits[w] > 1)
        add("outcome '" + outcomes[w] + "' appears in more than one block of index " +
            indices[t]);
    }
  }

  // refinement: every block at t+1 must sit inside a single block at t
  for (IndexPos t = 0; t + 1 < t_count; ++t) {
    bool refines = true;
    for (const auto& block : filtration[t + 1]) {
      BlockId parent = kNoBlock;
      for (OutcomeId w : block) {
        if (w >= m) continue;
        const BlockId p = space.block_of(t, w);
        if (parent == kNoBlock) parent = p;
        if (p == kNoBlock || p != parent) refines = false;
      }
    }
    if (!refines)
      add("partition at index " + indices[t + 1] + " does not refine index " + indices[t]);
  }

  return report;
}

Cut Cut::full(const FilteredSpace& space) {
  Cut cut;
  cut.pos.resize(space.num_indices());
  for (IndexPos t = 0; t < space.num_indices(); ++t) cut.pos[t] = t;
  return cut;
}

Cut Cut::from_labels(const FilteredSpace& space, std::span<const std::string> labels) {
  if (labels.empty()) throw Error("cut is empty");
  Cut cut;
  cut.pos.reserve(labels.size());
  for (const auto& label : labels) cut.pos.push_back(space.index_pos(label));
  for (std::size_t i = 1; i < cut.pos.size(); ++i) {
    if (cut.pos[i] <= cut.pos[i - 1])
      throw Error("cut labels must be strictly increasing: '" + labels[i] + "' follows '" +
                  labels[i - 1] + "'");
  }
  return cut;
}

std::vector<std::string> Cut::labels(const FilteredSpace& space) const {
  std::vector<std::string> out;
  out.reserve(pos.size());
  for (IndexPos t : pos) out.push_back(space.indices()[t]);
  return out;
}

void check_cut(const FilteredSpace& space, const Cut& cut) {
  if (cut.pos.empty()) throw Error("cut is empty");
  for (std::size_t i = 0; i < cut.pos.size(); ++i) {
    if (cut.pos[i] >= space.num_indices())
      throw Error("cut position " + std::to_string(cut.pos[i]) + " out of range");
    if (i > 0 && cut.pos[i] <= cut.pos[i - 1]) throw Error("cut is not strictly increasing");
  }
}

Rat expectation(const FilteredSpace& space, const RandomVariable& y) {
  if (y.size() != space.num_outcomes()) throw Error("random variable has wrong length");
  Rat sum;
  for (OutcomeId w = 0; w < y.size(); ++w) sum += space.prob(w) * y[w];
  return sum;
}

RandomVariable conditional_expectation(const FilteredSpace& space, const RandomVariable& y,
                                       IndexPos t) {
  if (t >= space.num_indices()) throw Error("index position out of range");
  if (y.size() != space.num_outcomes()) throw Error("random variable has wrong length");
  RandomVariable out(space.num_outcomes());
  const auto& part = space.partition(t);
  for (BlockId b = 0; b < part.size(); ++b) {
    Rat acc;
    for (OutcomeId w : part[b]) acc += space.prob(w) * y[w];
    const Rat value = acc / space.block_prob(t, b);
    for (OutcomeId w : part[b]) out[w] = value;
  }
  return out;
}

RandomVariable conditional_expectation(const FilteredSpace& space, const RandomVariable& y,
                                       std::string_view index_label) {
  return conditional_expectation(space, y, space.index_pos(index_label));
}

SimplePredictable project_simple(const FilteredSpace& space, const PathFunction& u,
                                 const Cut& cut) {
  check_cut(space, cut);
  if (u.size() != space.num_indices()) throw Error("path function has wrong index extent");
  SimplePredictable f;
  f.cut = cut;
  f.coefficients.reserve(cut.segments());
  for (std::size_t n = 0; n + 1 < cut.pos.size(); ++n) {
    f.coefficients.push_back(conditional_expectation(space, u[cut.pos[n + 1]], cut.pos[n]));
  }
  return f;
}

Rat evaluate_simple(const FilteredSpace& space, const SimplePredictable& f, OutcomeId w,
                    IndexPos t) {
  check_cut(space, f.cut);
  if (w >= space.num_outcomes()) throw Error("outcome position out of range");
  if (t >= space.num_indices()) throw Error("index position out of range");
  for (std::size_t n = 0; n + 1 < f.cut.pos.size(); ++n) {
    if (f.cut.pos[n] < t && t <= f.cut.pos[n + 1]) return f.coefficients[n][w];
  }
  return Rat();
}

Rat evaluate_simple(const FilteredSpace& space, const SimplePredictable& f,
                    std::string_view outcome_id, std::string_view index_label) {
  return evaluate_simple(space, f, space.outcome_pos(outcome_id),
                         space.index_pos(index_label));
}

PathFunction lift_simple(const FilteredSpace& space, const SimplePredictable& f) {
  PathFunction u(space.num_indices(), RandomVariable(space.num_outcomes()));
  for (IndexPos t = 0; t < space.num_indices(); ++t) {
    for (OutcomeId w = 0; w < space.num_outcomes(); ++w) {
      u[t][w] = evaluate_simple(space, f, w, t);
    }
  }
  return u;
}

} // namespace qmart
