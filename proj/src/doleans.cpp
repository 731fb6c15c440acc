#include "qmart/doleans.hpp"

namespace qmart {

namespace {

void check_measure(const DoleansMeasure& x) {
  if (!x.space) throw Error("measure has no space");
  const std::size_t t_count = x.space->num_indices();
  if (x.atom_values.size() + 1 != t_count && !(t_count == 1 && x.atom_values.empty()))
    throw Error("measure grid does not match the space");
}

void check_same_space(const DoleansMeasure& a, const DoleansMeasure& b) {
  if (a.space != b.space) throw Error("measures live on different spaces");
}

} // namespace

bool operator==(const DoleansMeasure& a, const DoleansMeasure& b) {
  return a.space == b.space && a.atom_values == b.atom_values;
}

DoleansMeasure operator+(const DoleansMeasure& a, const DoleansMeasure& b) {
  check_same_space(a, b);
  DoleansMeasure out{a.space, a.atom_values};
  for (std::size_t t = 0; t < out.atom_values.size(); ++t)
    for (std::size_t i = 0; i < out.atom_values[t].size(); ++i)
      out.atom_values[t][i] += b.atom_values[t][i];
  return out;
}

DoleansMeasure operator*(const Rat& c, const DoleansMeasure& x) {
  DoleansMeasure out{x.space, x.atom_values};
  for (auto& row : out.atom_values)
    for (auto& v : row) v *= c;
  return out;
}

DoleansMeasure zero_measure(SpacePtr space) {
  DoleansMeasure x{space, {}};
  for (IndexPos t = 0; t + 1 < space->num_indices(); ++t)
    x.atom_values.emplace_back(space->partition(t).size(), Rat());
  return x;
}

bool is_zero(const DoleansMeasure& x) {
  for (const auto& row : x.atom_values)
    for (const auto& v : row)
      if (!v.is_zero()) return false;
  return true;
}

bool is_nonnegative(const DoleansMeasure& x) {
  for (const auto& row : x.atom_values)
    for (const auto& v : row)
      if (v.sign() < 0) return false;
  return true;
}

DoleansMeasure doleans_of(const AdaptedProcess& x) {
  if (!x.space) throw Error("process has no space");
  const auto& space = *x.space;
  DoleansMeasure out{x.space, {}};
  for (IndexPos t = 0; t + 1 < space.num_indices(); ++t) {
    const auto& part = space.partition(t);
    std::vector<Rat> row(part.size());
    for (BlockId b = 0; b < part.size(); ++b) {
      Rat acc;
      for (OutcomeId w : part[b])
        acc += space.prob(w) * (x.values[t][w] - x.values[t + 1][w]);
      row[b] = std::move(acc);
    }
    out.atom_values.push_back(std::move(row));
  }
  return out;
}

Rat evaluate_rectangle(const DoleansMeasure& x, const std::vector<OutcomeId>& f, IndexPos from,
                       IndexPos to) {
  check_measure(x);
  const auto& space = *x.space;
  if (from >= space.num_indices() || to >= space.num_indices())
    throw Error("index position out of range");
  if (to < from) throw Error("rectangle interval is reversed");

  std::vector<bool> member(space.num_outcomes(), false);
  for (OutcomeId w : f) {
    if (w >= space.num_outcomes()) throw Error("outcome position out of range");
    member[w] = true;
  }
  for (const auto& block : space.partition(from)) {
    std::size_t inside = 0;
    for (OutcomeId w : block) inside += member[w] ? 1 : 0;
    if (inside != 0 && inside != block.size())
      throw Error("set is not measurable at index " + space.indices()[from]);
  }

  // partitions refine, so membership of a later block is decided by any
  // representative
  Rat sum;
  for (IndexPos t = from; t < to; ++t) {
    const auto& part = space.partition(t);
    for (BlockId b = 0; b < part.size(); ++b)
      if (member[part[b].front()]) sum += x.atom_values[t][b];
  }
  return sum;
}

Rat evaluate_general(const DoleansMeasure& x, const PathFunction& u) {
  check_measure(x);
  const auto& space = *x.space;
  const SimplePredictable projected = project_simple(space, u, Cut::full(space));
  Rat sum;
  for (IndexPos t = 0; t + 1 < space.num_indices(); ++t) {
    const auto& part = space.partition(t);
    for (BlockId b = 0; b < part.size(); ++b)
      sum += projected.coefficients[t][part[b].front()] * x.atom_values[t][b];
  }
  return sum;
}

Rat total_variation(const DoleansMeasure& x) {
  Rat sum;
  for (const auto& row : x.atom_values)
    for (const auto& v : row) sum += v.abs();
  return sum;
}

Rat total_mass(const DoleansMeasure& x) {
  Rat sum;
  for (const auto& row : x.atom_values)
    for (const auto& v : row) sum += v;
  return sum;
}

std::pair<DoleansMeasure, DoleansMeasure> jordan(const DoleansMeasure& x) {
  DoleansMeasure plus{x.space, x.atom_values};
  DoleansMeasure minus{x.space, x.atom_values};
  for (std::size_t t = 0; t < x.atom_values.size(); ++t) {
    for (std::size_t i = 0; i < x.atom_values[t].size(); ++i) {
      plus.atom_values[t][i] = x.atom_values[t][i].pos_part();
      minus.atom_values[t][i] = x.atom_values[t][i].neg_part();
    }
  }
  return {std::move(plus), std::move(minus)};
}

AdaptedProcess process_of(const DoleansMeasure& x) {
  check_measure(x);
  const auto& space = *x.space;
  const std::size_t t_count = space.num_indices();
  AdaptedProcess out = zero_process(x.space);

  for (IndexPos t = 0; t + 1 < t_count; ++t) {
    const auto& part = space.partition(t);
    for (BlockId b = 0; b < part.size(); ++b) {
      const Rat value =
          evaluate_rectangle(x, part[b], t, static_cast<IndexPos>(t_count - 1)) /
          space.block_prob(t, b);
      for (OutcomeId w : part[b]) out.values[t][w] = value;
    }
  }
  return out;
}

std::vector<Rat> marginal(const DoleansMeasure& x) {
  check_measure(x);
  const auto& space = *x.space;
  std::vector<Rat> out(space.num_outcomes());
  for (OutcomeId w = 0; w < space.num_outcomes(); ++w) {
    PathFunction indicator(space.num_indices(), RandomVariable(space.num_outcomes()));
    for (IndexPos t = 0; t < space.num_indices(); ++t) indicator[t][w] = Rat(1);
    out[w] = evaluate_general(x, indicator);
  }
  return out;
}

} // namespace qmart
