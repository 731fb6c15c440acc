#include "qmart/process.hpp"

#include <algorithm>

#include "qmart/rng.hpp"

namespace qmart {

namespace {

std::string format_block(const FilteredSpace& space, IndexPos t, BlockId b) {
  std::string s = "{";
  const auto& block = space.partition(t)[b];
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (i > 0) s += ",";
    s += space.outcomes()[block[i]];
  }
  return s + "}";
}

void check_same_space(const AdaptedProcess& a, const AdaptedProcess& b) {
  if (a.space != b.space) throw Error("processes live on different spaces");
}

void check_process(const AdaptedProcess& x) {
  if (!x.space) throw Error("process has no space");
  if (x.values.size() != x.space->num_indices())
    throw Error("process has wrong number of slices");
}

} // namespace

std::vector<std::string> validate_process(const AdaptedProcess& x) {
  std::vector<std::string> violations;
  if (!x.space) return {"process has no space"};
  const auto& space = *x.space;
  if (x.values.size() != space.num_indices()) {
    violations.push_back("process has " + std::to_string(x.values.size()) + " slices for " +
                         std::to_string(space.num_indices()) + " indices");
    return violations;
  }
  for (IndexPos t = 0; t < space.num_indices(); ++t) {
    if (x.values[t].size() != space.num_outcomes()) {
      violations.push_back("slice at index " + space.indices()[t] + " has wrong length");
      continue;
    }
    const auto& part = space.partition(t);
    for (BlockId b = 0; b < part.size(); ++b) {
      const auto& block = part[b];
      for (std::size_t i = 1; i < block.size(); ++i) {
        if (!(x.values[t][block[i]] == x.values[t][block[0]])) {
          violations.push_back("slice at index " + space.indices()[t] +
                               " is not constant on block " + format_block(space, t, b));
          break;
        }
      }
    }
  }
  return violations;
}

AdaptedProcess operator+(const AdaptedProcess& a, const AdaptedProcess& b) {
  check_same_space(a, b);
  AdaptedProcess out{a.space, a.values};
  for (std::size_t t = 0; t < out.values.size(); ++t)
    for (std::size_t w = 0; w < out.values[t].size(); ++w) out.values[t][w] += b.values[t][w];
  return out;
}

AdaptedProcess operator-(const AdaptedProcess& a, const AdaptedProcess& b) {
  check_same_space(a, b);
  AdaptedProcess out{a.space, a.values};
  for (std::size_t t = 0; t < out.values.size(); ++t)
    for (std::size_t w = 0; w < out.values[t].size(); ++w) out.values[t][w] -= b.values[t][w];
  return out;
}

AdaptedProcess operator*(const Rat& c, const AdaptedProcess& x) {
  AdaptedProcess out{x.space, x.values};
  for (auto& slice : out.values)
    for (auto& v : slice) v *= c;
  return out;
}

bool operator==(const AdaptedProcess& a, const AdaptedProcess& b) {
  return a.space == b.space && a.values == b.values;
}

AdaptedProcess zero_process(SpacePtr space) {
  const std::size_t t_count = space->num_indices();
  const std::size_t m = space->num_outcomes();
  return AdaptedProcess{std::move(space), std::vector<RandomVariable>(t_count, RandomVariable(m))};
}

RandomVariable d_variation(const AdaptedProcess& x, const Cut& cut) {
  check_process(x);
  check_cut(*x.space, cut);
  RandomVariable v(x.space->num_outcomes());
  for (std::size_t n = 0; n + 1 < cut.pos.size(); ++n) {
    const RandomVariable ce = conditional_expectation(*x.space, x.values[cut.pos[n + 1]], cut.pos[n]);
    for (OutcomeId w = 0; w < v.size(); ++w) v[w] += (x.values[cut.pos[n]][w] - ce[w]).abs();
  }
  return v;
}

Rat q_norm(const AdaptedProcess& x) {
  check_process(x);
  return expectation(*x.space, d_variation(x, Cut::full(*x.space)));
}

RandomVariable conditional_variation(const AdaptedProcess& x, const Cut& cut, IndexPos t) {
  check_process(x);
  check_cut(*x.space, cut);
  if (cut.pos.front() != t)
    throw Error("conditioning index must be the cut's first label");
  return conditional_expectation(*x.space, d_variation(x, cut), t);
}

ProcessClass classify(const AdaptedProcess& x) {
  check_process(x);
  const auto& space = *x.space;
  const std::size_t t_count = space.num_indices();
  const std::size_t m = space.num_outcomes();

  ProcessClass c;
  c.martingale = true;
  c.supermartingale = true;
  for (IndexPos t = 0; t + 1 < t_count; ++t) {
    const RandomVariable ce = conditional_expectation(space, x.values[t + 1], t);
    for (OutcomeId w = 0; w < m; ++w) {
      if (!(x.values[t][w] == ce[w])) c.martingale = false;
      if (x.values[t][w] < ce[w]) c.supermartingale = false;
    }
  }

  c.positive = true;
  for (const auto& slice : x.values)
    for (const auto& v : slice)
      if (v.sign() < 0) c.positive = false;

  c.increasing = true;
  for (const auto& v : x.values[0])
    if (!v.is_zero()) c.increasing = false;
  for (IndexPos t = 0; t + 1 < t_count && c.increasing; ++t) {
    for (OutcomeId w = 0; w < m; ++w) {
      if (x.values[t][w].sign() < 0 || x.values[t + 1][w] < x.values[t][w]) {
        c.increasing = false;
        break;
      }
    }
  }

  c.natural = c.increasing;
  for (IndexPos t = 0; t + 1 < t_count && c.natural; ++t) {
    RandomVariable inc(m);
    for (OutcomeId w = 0; w < m; ++w) inc[w] = x.values[t + 1][w] - x.values[t][w];
    if (!space.is_measurable(t, inc)) c.natural = false;
  }

  c.quasi_potential = true;
  for (const auto& v : x.values[t_count - 1])
    if (!v.is_zero()) c.quasi_potential = false;

  c.potential = c.positive && c.supermartingale && c.quasi_potential;
  c.q_norm = q_norm(x);
  return c;
}

RandomVariable stieltjes_integral(const SimplePredictable& f, const AdaptedProcess& a) {
  check_process(a);
  check_cut(*a.space, f.cut);
  RandomVariable out(a.space->num_outcomes());
  for (std::size_t n = 0; n + 1 < f.cut.pos.size(); ++n) {
    const auto& hi = a.values[f.cut.pos[n + 1]];
    const auto& lo = a.values[f.cut.pos[n]];
    for (OutcomeId w = 0; w < out.size(); ++w)
      out[w] += f.coefficients[n][w] * (hi[w] - lo[w]);
  }
  return out;
}

namespace {

// P(b * integral of f dA) against P(integral of P^full(b) * f dA).
// The projected integrand on ]d_t, d_{t+1}] is P(b | F_t) * f(., d_{t+1}).
bool natural_identity_holds(const AdaptedProcess& a, const RandomVariable& b,
                            const SimplePredictable& f, Rat& lhs, Rat& rhs) {
  const auto& space = *a.space;
  const std::size_t m = space.num_outcomes();

  RandomVariable integral = stieltjes_integral(f, a);
  RandomVariable weighted(m);
  for (OutcomeId w = 0; w < m; ++w) weighted[w] = b[w] * integral[w];
  lhs = expectation(space, weighted);

  SimplePredictable projected;
  projected.cut = Cut::full(space);
  for (IndexPos t = 0; t + 1 < space.num_indices(); ++t) {
    RandomVariable coeff = conditional_expectation(space, b, t);
    for (OutcomeId w = 0; w < m; ++w) coeff[w] *= evaluate_simple(space, f, w, t + 1);
    projected.coefficients.push_back(std::move(coeff));
  }
  rhs = expectation(space, stieltjes_integral(projected, a));
  return lhs == rhs;
}

SimplePredictable random_simple_predictable(const FilteredSpace& space, Rng& rng, int bound) {
  const std::size_t t_count = space.num_indices();
  SimplePredictable f;
  if (t_count == 1) {
    f.cut.pos = {0};
    return f;
  }
  std::vector<IndexPos> all(t_count);
  for (IndexPos t = 0; t < t_count; ++t) all[t] = t;
  rng.shuffle(all);
  const std::size_t size = 2 + rng.below(t_count - 1);
  f.cut.pos.assign(all.begin(), all.begin() + size);
  std::sort(f.cut.pos.begin(), f.cut.pos.end());
  for (std::size_t n = 0; n + 1 < f.cut.pos.size(); ++n) {
    RandomVariable coeff(space.num_outcomes());
    for (const auto& block : space.partition(f.cut.pos[n])) {
      const Rat v = rng.rat(bound);
      for (OutcomeId w : block) coeff[w] = v;
    }
    f.coefficients.push_back(std::move(coeff));
  }
  return f;
}

} // namespace

NaturalCheck is_natural(const AdaptedProcess& a, int trials, std::uint64_t seed) {
  check_process(a);
  if (!classify(a).increasing) throw Error("is_natural requires an increasing process");
  const auto& space = *a.space;
  const std::size_t m = space.num_outcomes();
  const std::size_t t_count = space.num_indices();

  NaturalCheck result;
  result.natural = true;
  result.integral_ok = true;

  for (IndexPos t = 0; t + 1 < t_count; ++t) {
    RandomVariable inc(m);
    for (OutcomeId w = 0; w < m; ++w) inc[w] = a.values[t + 1][w] - a.values[t][w];
    if (space.is_measurable(t, inc)) continue;
    result.natural = false;

    // deterministic witness: an outcome whose increment differs from its
    // block average, probed with b = its indicator and f = 1 on the step
    const RandomVariable avg = conditional_expectation(space, inc, t);
    for (OutcomeId w = 0; w < m && !result.witness; ++w) {
      if (inc[w] == avg[w]) continue;
      NaturalWitness witness;
      witness.b.assign(m, Rat());
      witness.b[w] = Rat(1);
      witness.f.cut.pos = {t, t + 1};
      witness.f.coefficients = {RandomVariable(m, Rat(1))};
      natural_identity_holds(a, witness.b, witness.f, witness.lhs, witness.rhs);
      result.integral_ok = false;
      result.witness = std::move(witness);
    }
    break;
  }

  Rng rng(seed);
  for (int k = 0; k < trials; ++k) {
    RandomVariable b(m);
    for (auto& v : b) v = rng.rat(8);
    SimplePredictable f = random_simple_predictable(space, rng, 8);
    Rat lhs, rhs;
    if (!natural_identity_holds(a, b, f, lhs, rhs)) {
      result.integral_ok = false;
      if (!result.witness) result.witness = NaturalWitness{b, f, lhs, rhs};
    }
  }
  return result;
}

} // namespace qmart
