#include "qmart/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "qmart/rng.hpp"

namespace qmart {

std::string_view to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::martingale: return "martingale";
    case ProcessKind::positive_supermartingale: return "positive_supermartingale";
    case ProcessKind::potential: return "potential";
    case ProcessKind::quasimartingale: return "quasimartingale";
    case ProcessKind::natural_increasing: return "natural_increasing";
  }
  return "unknown";
}

BruteForceResult brute_force_q_norm(const AdaptedProcess& x) {
  if (!x.space) throw Error("process has no space");
  const auto& space = *x.space;
  const std::size_t t_count = space.num_indices();
  if (t_count > 20)
    throw Error("index count " + std::to_string(t_count) + " exceeds the brute-force guard (20)");

  // expected segment costs P(|X_i - P(X_j | F_i)|) for every index pair
  std::vector<std::vector<Rat>> seg(t_count, std::vector<Rat>(t_count));
  for (IndexPos i = 0; i < t_count; ++i) {
    for (IndexPos j = i + 1; j < t_count; ++j) {
      const RandomVariable ce = conditional_expectation(space, x.values[j], i);
      RandomVariable gap(space.num_outcomes());
      for (OutcomeId w = 0; w < gap.size(); ++w) gap[w] = (x.values[i][w] - ce[w]).abs();
      seg[i][j] = expectation(space, gap);
    }
  }

  BruteForceResult best;
  bool have_best = false;
  std::vector<IndexPos> pos;
  for (std::uint32_t mask = 1; mask < (1u << t_count); ++mask) {
    pos.clear();
    for (IndexPos t = 0; t < t_count; ++t)
      if (mask & (1u << t)) pos.push_back(t);
    Rat value;
    for (std::size_t n = 0; n + 1 < pos.size(); ++n) value += seg[pos[n]][pos[n + 1]];

    bool better = false;
    if (!have_best || value > best.value) {
      better = true;
    } else if (value == best.value) {
      if (pos.size() > best.argmax.pos.size()) {
        better = true;
      } else if (pos.size() == best.argmax.pos.size()) {
        better = std::lexicographical_compare(pos.begin(), pos.end(), best.argmax.pos.begin(),
                                              best.argmax.pos.end());
      }
    }
    if (better) {
      best.value = value;
      best.argmax.pos = pos;
      have_best = true;
    }
  }
  return best;
}

SpacePtr gen_space(const GenParams& p) {
  Rng rng(p.seed);
  const int m = std::max(1, p.num_outcomes);
  const int t_count = std::max(1, p.num_indices);
  const int bound = std::max(1, p.value_bound);

  std::vector<std::string> outcomes, indices;
  for (int w = 0; w < m; ++w) outcomes.push_back("w" + std::to_string(w + 1));
  for (int t = 0; t < t_count; ++t) indices.push_back("t" + std::to_string(t + 1));

  std::vector<Rat> prob(m);
  Rat sum;
  for (auto& q : prob) {
    q = rng.pos_rat(bound);
    sum += q;
  }
  for (auto& q : prob) q /= sum;

  Partition current(1);
  for (int w = 0; w < m; ++w) current[0].push_back(static_cast<OutcomeId>(w));

  const auto split_once = [&]() {
    std::vector<std::size_t> candidates;
    for (std::size_t b = 0; b < current.size(); ++b)
      if (current[b].size() >= 2) candidates.push_back(b);
    if (candidates.empty()) return;
    const std::size_t b = candidates[rng.below(candidates.size())];
    std::vector<OutcomeId> members = current[b];
    rng.shuffle(members);
    const std::size_t cutpoint = 1 + rng.below(members.size() - 1);
    current[b].assign(members.begin(), members.begin() + cutpoint);
    current.push_back({members.begin() + cutpoint, members.end()});
  };

  std::vector<Partition> filtration;
  for (int t = 0; t < t_count; ++t) {
    const std::uint64_t splits = (t == 0) ? (rng.coin() ? rng.below(2) : 0) : rng.below(3);
    for (std::uint64_t s = 0; s < splits; ++s) split_once();
    filtration.push_back(current);
  }

  return std::make_shared<FilteredSpace>(std::move(outcomes), std::move(prob),
                                         std::move(indices), std::move(filtration));
}

namespace {

RandomVariable measurable_draw(const FilteredSpace& space, IndexPos t, Rng& rng, int bound,
                               bool nonneg) {
  RandomVariable v(space.num_outcomes());
  for (const auto& block : space.partition(t)) {
    const Rat value = nonneg ? rng.nonneg_rat(bound) : rng.rat(bound);
    for (OutcomeId w : block) v[w] = value;
  }
  return v;
}

AdaptedProcess gen_with(Rng& rng, ProcessKind kind, const SpacePtr& space, int bound) {
  const auto& sp = *space;
  const std::size_t t_count = sp.num_indices();
  AdaptedProcess x = zero_process(space);
  const IndexPos last = static_cast<IndexPos>(t_count - 1);

  switch (kind) {
    case ProcessKind::martingale: {
      x.values[last] = measurable_draw(sp, last, rng, bound, false);
      for (IndexPos t = last; t > 0; --t)
        x.values[t - 1] = conditional_expectation(sp, x.values[t], t - 1);
      break;
    }
    case ProcessKind::positive_supermartingale:
    case ProcessKind::potential: {
      if (kind == ProcessKind::positive_supermartingale)
        x.values[last] = measurable_draw(sp, last, rng, bound, true);
      for (IndexPos t = last; t > 0; --t) {
        const RandomVariable ce = conditional_expectation(sp, x.values[t], t - 1);
        const RandomVariable slack = measurable_draw(sp, t - 1, rng, bound, true);
        for (OutcomeId w = 0; w < ce.size(); ++w) x.values[t - 1][w] = ce[w] + slack[w];
      }
      break;
    }
    case ProcessKind::natural_increasing: {
      for (IndexPos t = 0; t + 1 < t_count; ++t) {
        const RandomVariable inc = measurable_draw(sp, t, rng, bound, true);
        for (OutcomeId w = 0; w < inc.size(); ++w)
          x.values[t + 1][w] = x.values[t][w] + inc[w];
      }
      break;
    }
    case ProcessKind::quasimartingale: {
      const AdaptedProcess m = gen_with(rng, ProcessKind::martingale, space, bound);
      const AdaptedProcess up = gen_with(rng, ProcessKind::natural_increasing, space, bound);
      const AdaptedProcess down = gen_with(rng, ProcessKind::natural_increasing, space, bound);
      x = m + up - down;
      break;
    }
  }
  return x;
}

} // namespace

AdaptedProcess gen_process(const GenParams& p, ProcessKind kind, SpacePtr space) {
  Rng rng(p.seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(kind) + 1)));
  return gen_with(rng, kind, space, std::max(1, p.value_bound));
}

SpacePtr gen_subfiltration(const GenParams& p, const SpacePtr& space) {
  Rng rng(p.seed ^ 0x5DEECE66Dull);
  const auto& sp = *space;
  const std::size_t m = sp.num_outcomes();

  Partition current(1);
  for (OutcomeId w = 0; w < m; ++w) current[0].push_back(w);

  std::vector<Partition> filtration;
  for (IndexPos t = 0; t < sp.num_indices(); ++t) {
    Partition next;
    for (const auto& g_block : current) {
      // the fine blocks inside this block, grouped at random
      std::vector<BlockId> children;
      for (OutcomeId w : g_block) {
        const BlockId b = sp.block_of(t, w);
        if (std::find(children.begin(), children.end(), b) == children.end())
          children.push_back(b);
      }
      rng.shuffle(children);
      const std::size_t groups = 1 + rng.below(children.size());
      std::vector<std::vector<OutcomeId>> buckets(groups);
      for (std::size_t i = 0; i < children.size(); ++i) {
        const auto& fine = sp.partition(t)[children[i]];
        auto& bucket = buckets[i % groups];
        bucket.insert(bucket.end(), fine.begin(), fine.end());
      }
      for (auto& bucket : buckets)
        if (!bucket.empty()) next.push_back(std::move(bucket));
    }
    current = next;
    filtration.push_back(current);
  }
  return std::make_shared<FilteredSpace>(sp.outcomes(), sp.prob(), sp.indices(),
                                         std::move(filtration));
}

namespace {

SpacePtr two_point_space(std::vector<std::string> indices, std::vector<Partition> filtration) {
  return std::make_shared<FilteredSpace>(std::vector<std::string>{"a", "b"},
                                         std::vector<Rat>{Rat(1, 2), Rat(1, 2)},
                                         std::move(indices), std::move(filtration));
}

Scenario two_point_fixture(std::vector<RandomVariable> values) {
  Scenario s;
  s.space = two_point_space({"1", "2"}, {Partition{{0, 1}}, Partition{{0}, {1}}});
  s.processes.emplace("X", AdaptedProcess{s.space, std::move(values)});
  return s;
}

SpacePtr trivial_subfiltration(const SpacePtr& space) {
  Partition trivial(1);
  for (OutcomeId w = 0; w < space->num_outcomes(); ++w) trivial[0].push_back(w);
  return std::make_shared<FilteredSpace>(
      space->outcomes(), space->prob(), space->indices(),
      std::vector<Partition>(space->num_indices(), trivial));
}

} // namespace

Scenario fixture_e1() { return two_point_fixture({{Rat(1), Rat(1)}, {Rat(2), Rat(0)}}); }
Scenario fixture_e2() { return two_point_fixture({{Rat(1), Rat(1)}, {Rat(1), Rat(0)}}); }
Scenario fixture_e2_prime() { return two_point_fixture({{Rat(1), Rat(1)}, {Rat(0), Rat(0)}}); }

Scenario fixture_e3() {
  Scenario s;
  s.space = two_point_space({"1", "2", "3"},
                            {Partition{{0, 1}}, Partition{{0}, {1}}, Partition{{0}, {1}}});
  s.processes.emplace(
      "X", AdaptedProcess{s.space,
                          {{Rat(0), Rat(0)}, {Rat(1), Rat(-1)}, {Rat(0), Rat(0)}}});
  s.subfiltrations.emplace("G", trivial_subfiltration(s.space));
  return s;
}

std::vector<std::pair<std::string, Scenario>> canonical_fixtures() {
  return {{"E1", fixture_e1()},
          {"E2", fixture_e2()},
          {"E2'", fixture_e2_prime()},
          {"E3", fixture_e3()}};
}

const InvariantResult* SuiteReport::find(std::string_view name) const {
  for (const auto& r : invariants)
    if (r.name == name) return &r;
  return nullptr;
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json j;
  nlohmann::json inv = nlohmann::json::array();
  for (const auto& r : invariants) {
    nlohmann::json e;
    e["name"] = r.name;
    e["pass"] = r.pass;
    e["fail"] = r.fail;
    if (r.first_failure) {
      nlohmann::json c;
      c["instance"] = r.first_failure->instance;
      c["detail"] = r.first_failure->detail;
      c["scenario"] = r.first_failure->scenario;
      e["counterexample"] = std::move(c);
    } else {
      e["counterexample"] = nullptr;
    }
    inv.push_back(std::move(e));
  }
  j["invariants"] = std::move(inv);
  j["total_pass"] = total_pass;
  j["total_fail"] = total_fail;
  j["ok"] = ok();
  return j;
}

namespace {

const char* const kInvariantNames[] = {
    "space.tower",
    "space.linearity",
    "space.averaging",
    "space.projection",
    "space.refinement_consistency",
    "process.domination",
    "process.refinement_monotonicity",
    "process.seminorm",
    "process.supermartingale_variation",
    "process.natural_equivalence",
    "norm.fast_path_vs_brute_force",
    "doleans.isometry",
    "doleans.linearity",
    "doleans.kernel",
    "doleans.round_trip",
    "doleans.local_variation",
    "doleans.interval_additivity",
    "decomp.riesz",
    "decomp.rao",
    "decomp.rao_minimality",
    "decomp.doob_meyer",
    "decomp.stricker",
    "verify.generator_contracts",
};

struct Instance {
  std::string name;
  Scenario scenario;
  SpacePtr g; // stricker target
  std::uint64_t seed = 0;
  std::vector<std::pair<ProcessKind, GenParams>> gen_specs; // empty for fixtures
};

using CheckBody = std::function<std::optional<std::string>()>;

class SuiteCtx {
public:
  explicit SuiteCtx(Mutation mutation) : mutation_(mutation) {
    for (const char* name : kInvariantNames) {
      index_.emplace(name, results_.size());
      results_.push_back(InvariantResult{name, 0, 0, std::nullopt});
    }
  }

  DoleansMeasure measure_of(const AdaptedProcess& x) const {
    DoleansMeasure m = doleans_of(x);
    if (mutation_ == Mutation::flip_doleans_sign) m = Rat(-1) * m;
    return m;
  }

  void run(const char* invariant, const Instance& inst, const CheckBody& body) {
    auto& r = results_[index_.at(invariant)];
    std::optional<std::string> failure;
    try {
      failure = body();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    if (!failure) {
      ++r.pass;
    } else {
      ++r.fail;
      if (!r.first_failure)
        r.first_failure =
            Counterexample{inst.name, *failure, scenario_to_json(inst.scenario)};
    }
  }

  SuiteReport finish() && {
    SuiteReport report;
    report.invariants = std::move(results_);
    for (const auto& r : report.invariants) {
      report.total_pass += r.pass;
      report.total_fail += r.fail;
    }
    return report;
  }

private:
  Mutation mutation_;
  std::vector<InvariantResult> results_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

RandomVariable random_rv(const FilteredSpace& space, Rng& rng, int bound) {
  RandomVariable v(space.num_outcomes());
  for (auto& x : v) x = rng.rat(bound);
  return v;
}

PathFunction random_path(const FilteredSpace& space, Rng& rng, int bound) {
  PathFunction u(space.num_indices());
  for (auto& row : u) row = random_rv(space, rng, bound);
  return u;
}

Cut random_cut(const FilteredSpace& space, Rng& rng, std::size_t min_size) {
  const std::size_t t_count = space.num_indices();
  std::vector<IndexPos> all(t_count);
  for (IndexPos t = 0; t < t_count; ++t) all[t] = t;
  if (t_count <= min_size) return Cut{all};
  rng.shuffle(all);
  const std::size_t size = min_size + rng.below(t_count - min_size + 1);
  Cut cut;
  cut.pos.assign(all.begin(), all.begin() + size);
  std::sort(cut.pos.begin(), cut.pos.end());
  return cut;
}

SimplePredictable random_simple(const FilteredSpace& space, Rng& rng, int bound) {
  SimplePredictable f;
  f.cut = random_cut(space, rng, space.num_indices() >= 2 ? 2 : 1);
  for (std::size_t n = 0; n + 1 < f.cut.pos.size(); ++n)
    f.coefficients.push_back(measurable_draw(space, f.cut.pos[n], rng, bound, false));
  return f;
}

std::string coords(const FilteredSpace& space, IndexPos t, OutcomeId w) {
  return "index " + space.indices()[t] + ", outcome '" + space.outcomes()[w] + "'";
}

std::optional<std::string> expect_eq(const FilteredSpace& space, const RandomVariable& a,
                                     const RandomVariable& b, const std::string& what,
                                     IndexPos t = 0) {
  for (OutcomeId w = 0; w < a.size(); ++w) {
    if (!(a[w] == b[w]))
      return what + ": " + a[w].str() + " != " + b[w].str() + " at " + coords(space, t, w);
  }
  return std::nullopt;
}

std::optional<std::string> expect_ge(const FilteredSpace& space, const RandomVariable& a,
                                     const RandomVariable& b, const std::string& what) {
  for (OutcomeId w = 0; w < a.size(); ++w) {
    if (a[w] < b[w])
      return what + ": " + a[w].str() + " < " + b[w].str() + " at outcome '" +
             space.outcomes()[w] + "'";
  }
  return std::nullopt;
}

std::optional<std::string> expect_eq_process(const AdaptedProcess& a, const AdaptedProcess& b,
                                             const std::string& what) {
  const auto& space = *a.space;
  for (IndexPos t = 0; t < space.num_indices(); ++t) {
    if (auto bad = expect_eq(space, a.values[t], b.values[t], what, t)) return bad;
  }
  return std::nullopt;
}

// Classical construction used as the uniqueness oracle: compensator by
// direct conditional expectations of the one-step drifts.
AdaptedProcess doob_compensator_oracle(const AdaptedProcess& x) {
  const auto& space = *x.space;
  AdaptedProcess b = zero_process(x.space);
  for (IndexPos t = 0; t + 1 < space.num_indices(); ++t) {
    const RandomVariable ce = conditional_expectation(space, x.values[t + 1], t);
    for (OutcomeId w = 0; w < space.num_outcomes(); ++w)
      b.values[t + 1][w] = b.values[t][w] + (x.values[t][w] - ce[w]);
  }
  return b;
}

void run_instance(SuiteCtx& ctx, const Instance& inst) {
  const auto& space = *inst.scenario.space;
  const SpacePtr space_ptr = inst.scenario.space;
  const std::size_t t_count = space.num_indices();
  const int bound = 8;

  std::vector<std::pair<std::string, const AdaptedProcess*>> procs;
  for (const auto& [name, proc] : inst.scenario.processes) procs.emplace_back(name, &proc);

  const auto seed_for = [&](std::uint64_t salt) { return inst.seed ^ (salt * 0x9E3779B97F4A7C15ull + salt); };

  ctx.run("space.tower", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(1));
    for (int rep = 0; rep < 3; ++rep) {
      const RandomVariable y = random_rv(space, rng, bound);
      const IndexPos t1 = static_cast<IndexPos>(rng.below(t_count));
      const IndexPos t2 = static_cast<IndexPos>(t1 + rng.below(t_count - t1));
      const RandomVariable outer = conditional_expectation(
          space, conditional_expectation(space, y, t2), t1);
      if (auto bad = expect_eq(space, outer, conditional_expectation(space, y, t1),
                               "tower property", t1))
        return bad;
    }
    return std::nullopt;
  });

  ctx.run("space.linearity", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(2));
    const RandomVariable y = random_rv(space, rng, bound);
    const RandomVariable z = random_rv(space, rng, bound);
    const Rat a = rng.rat(bound), b = rng.rat(bound);
    const IndexPos t = static_cast<IndexPos>(rng.below(t_count));
    RandomVariable combo(space.num_outcomes());
    for (OutcomeId w = 0; w < combo.size(); ++w) combo[w] = a * y[w] + b * z[w];
    const RandomVariable lhs = conditional_expectation(space, combo, t);
    const RandomVariable ey = conditional_expectation(space, y, t);
    const RandomVariable ez = conditional_expectation(space, z, t);
    RandomVariable rhs(space.num_outcomes());
    for (OutcomeId w = 0; w < rhs.size(); ++w) rhs[w] = a * ey[w] + b * ez[w];
    if (auto bad = expect_eq(space, lhs, rhs, "conditional expectation linearity", t))
      return bad;
    RandomVariable abs_y(space.num_outcomes());
    for (OutcomeId w = 0; w < abs_y.size(); ++w) abs_y[w] = y[w].abs();
    const RandomVariable pos = conditional_expectation(space, abs_y, t);
    return expect_ge(space, pos, RandomVariable(space.num_outcomes()),
                     "conditional expectation positivity");
  });

  ctx.run("space.averaging", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(3));
    const RandomVariable y = random_rv(space, rng, bound);
    const IndexPos t = static_cast<IndexPos>(rng.below(t_count));
    const Rat lhs = expectation(space, conditional_expectation(space, y, t));
    const Rat rhs = expectation(space, y);
    if (!(lhs == rhs))
      return "averaging: P(P(Y|F)) = " + lhs.str() + " != P(Y) = " + rhs.str();
    return std::nullopt;
  });

  ctx.run("space.projection", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(4));
    // idempotence on predictable inputs
    const SimplePredictable f = random_simple(space, rng, bound);
    const SimplePredictable again = project_simple(space, lift_simple(space, f), f.cut);
    for (std::size_t n = 0; n < f.coefficients.size(); ++n) {
      if (auto bad = expect_eq(space, again.coefficients[n], f.coefficients[n],
                               "projection idempotence", f.cut.pos[n]))
        return bad;
    }
    // linearity in the path function
    const PathFunction u = random_path(space, rng, bound);
    const PathFunction v = random_path(space, rng, bound);
    const Rat a = rng.rat(bound), b = rng.rat(bound);
    PathFunction combo(t_count, RandomVariable(space.num_outcomes()));
    for (IndexPos t = 0; t < t_count; ++t)
      for (OutcomeId w = 0; w < space.num_outcomes(); ++w)
        combo[t][w] = a * u[t][w] + b * v[t][w];
    const Cut cut = random_cut(space, rng, 1);
    const SimplePredictable pc = project_simple(space, combo, cut);
    const SimplePredictable pu = project_simple(space, u, cut);
    const SimplePredictable pv = project_simple(space, v, cut);
    for (std::size_t n = 0; n < pc.coefficients.size(); ++n) {
      RandomVariable rhs(space.num_outcomes());
      for (OutcomeId w = 0; w < rhs.size(); ++w)
        rhs[w] = a * pu.coefficients[n][w] + b * pv.coefficients[n][w];
      if (auto bad =
              expect_eq(space, pc.coefficients[n], rhs, "projection linearity", cut.pos[n]))
        return bad;
    }
    return std::nullopt;
  });

  ctx.run("space.refinement_consistency", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(5));
    const SimplePredictable f = random_simple(space, rng, bound);
    // refine the cut with extra labels
    Cut fine = f.cut;
    for (IndexPos t = 0; t < t_count; ++t) {
      if (std::find(fine.pos.begin(), fine.pos.end(), t) == fine.pos.end() && rng.coin())
        fine.pos.push_back(t);
    }
    std::sort(fine.pos.begin(), fine.pos.end());
    const PathFunction lifted = lift_simple(space, f);
    const SimplePredictable projected = project_simple(space, lifted, fine);
    for (IndexPos t = f.cut.pos.front() + 1; t <= f.cut.pos.back(); ++t) {
      for (OutcomeId w = 0; w < space.num_outcomes(); ++w) {
        const Rat got = evaluate_simple(space, projected, w, t);
        const Rat want = lifted[t][w];
        if (!(got == want))
          return "refinement consistency: " + got.str() + " != " + want.str() + " at " +
                 coords(space, t, w);
      }
    }
    return std::nullopt;
  });

  ctx.run("process.domination", inst, [&]() -> std::optional<std::string> {
    if (t_count < 2) return std::nullopt;
    Rng rng(seed_for(6));
    for (const auto& [name, proc] : procs) {
      const Cut fine = random_cut(space, rng, 2);
      const Cut coarse{{fine.pos.front(), fine.pos.back()}};
      const RandomVariable lhs = conditional_variation(*proc, fine, fine.pos.front());
      const RandomVariable rhs = d_variation(*proc, coarse);
      if (auto bad = expect_ge(space, lhs, rhs, "domination for process '" + name + "'"))
        return bad;
    }
    return std::nullopt;
  });

  ctx.run("process.refinement_monotonicity", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(7));
    for (const auto& [name, proc] : procs) {
      const Cut fine = random_cut(space, rng, 1);
      Cut sub;
      sub.pos.push_back(fine.pos.front());
      for (std::size_t i = 1; i < fine.pos.size(); ++i)
        if (rng.coin()) sub.pos.push_back(fine.pos[i]);
      const RandomVariable big = conditional_variation(*proc, fine, fine.pos.front());
      const RandomVariable small = conditional_variation(*proc, sub, sub.pos.front());
      if (auto bad = expect_ge(space, big, small,
                               "refinement monotonicity for process '" + name + "'"))
        return bad;
      // hence the expected variation is maximal at the full cut
      const Rat full = expectation(space, d_variation(*proc, Cut::full(space)));
      const Rat part = expectation(space, d_variation(*proc, fine));
      if (full < part)
        return "full-cut maximality: P(V^d) = " + part.str() + " exceeds P(V^full) = " +
               full.str() + " for process '" + name + "'";
    }
    return std::nullopt;
  });

  ctx.run("process.seminorm", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(8));
    for (std::size_t i = 0; i < procs.size(); ++i) {
      const AdaptedProcess& x = *procs[i].second;
      const AdaptedProcess& y = *procs[(i + 1) % procs.size()].second;
      const Rat nx = q_norm(x), ny = q_norm(y), nsum = q_norm(x + y);
      if (nsum > nx + ny)
        return "triangle inequality: " + nsum.str() + " > " + nx.str() + " + " + ny.str();
      const Rat c = rng.rat(bound);
      const Rat scaled = q_norm(c * x);
      if (!(scaled == c.abs() * nx))
        return "homogeneity: |" + c.str() + "|*" + nx.str() + " != " + scaled.str();
      if ((nx == Rat(0)) != classify(x).martingale)
        return "kernel: q_norm zero must characterize martingales (process '" +
               procs[i].first + "')";
    }
    return std::nullopt;
  });

  ctx.run("process.supermartingale_variation", inst, [&]() -> std::optional<std::string> {
    for (const auto& [name, proc] : procs) {
      if (!classify(*proc).supermartingale) continue;
      RandomVariable signed_sum(space.num_outcomes());
      for (IndexPos t = 0; t + 1 < t_count; ++t) {
        const RandomVariable ce = conditional_expectation(space, proc->values[t + 1], t);
        for (OutcomeId w = 0; w < space.num_outcomes(); ++w)
          signed_sum[w] += proc->values[t][w] - ce[w];
      }
      const RandomVariable v = d_variation(*proc, Cut::full(space));
      if (auto bad = expect_eq(space, v, signed_sum,
                               "signed variation identity for supermartingale '" + name + "'"))
        return bad;
    }
    return std::nullopt;
  });

  ctx.run("process.natural_equivalence", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(9));
    for (const auto& [name, proc] : procs) {
      if (!classify(*proc).increasing) continue;
      const NaturalCheck nc = is_natural(*proc, 16, rng.next());
      if (nc.natural != nc.integral_ok)
        return "predicate and integral form disagree on process '" + name + "'";
      if (!nc.natural && !nc.witness)
        return "missing witness for non-natural process '" + name + "'";
    }
    // a deliberately non-predictable increasing process, when the
    // filtration strictly refines somewhere
    for (IndexPos t = 0; t + 1 < t_count; ++t) {
      const auto& part = space.partition(t);
      for (const auto& block : part) {
        if (block.size() < 2) continue;
        const BlockId child0 = space.block_of(t + 1, block.front());
        bool splits = false;
        for (OutcomeId w : block) splits |= space.block_of(t + 1, w) != child0;
        if (!splits) continue;
        AdaptedProcess bad_a = zero_process(space_ptr);
        for (IndexPos s = t + 1; s < t_count; ++s)
          for (OutcomeId w : space.partition(t + 1)[child0]) bad_a.values[s][w] = Rat(1);
        const NaturalCheck nc = is_natural(bad_a, 8, rng.next());
        if (nc.natural) return "non-predictable increments misclassified as natural";
        if (nc.integral_ok) return "integral form missed a non-natural process";
        if (!nc.witness) return "no witness for the constructed non-natural process";
        return std::nullopt;
      }
    }
    return std::nullopt;
  });

  ctx.run("norm.fast_path_vs_brute_force", inst, [&]() -> std::optional<std::string> {
    for (const auto& [name, proc] : procs) {
      const Rat fast = q_norm(*proc);
      const BruteForceResult bf = brute_force_q_norm(*proc);
      if (!(fast == bf.value))
        return "q_norm fast path " + fast.str() + " != brute force " + bf.value.str() +
               " for process '" + name + "'";
      const Rat at_argmax = expectation(space, d_variation(*proc, bf.argmax));
      if (!(at_argmax == bf.value))
        return "argmax cut does not attain the reported value for process '" + name + "'";
    }
    return std::nullopt;
  });

  ctx.run("doleans.isometry", inst, [&]() -> std::optional<std::string> {
    for (const auto& [name, proc] : procs) {
      const DoleansMeasure x = ctx.measure_of(*proc);
      const Rat tv = total_variation(x);
      const Rat norm = q_norm(*proc);
      if (!(tv == norm))
        return "total variation " + tv.str() + " != q_norm " + norm.str() +
               " for process '" + name + "'";
      const bool nonneg = is_nonnegative(x);
      const bool supermart = classify(*proc).supermartingale;
      if (nonneg != supermart)
        return std::string("positivity correspondence: measure ") +
               (nonneg ? "nonnegative" : "has a negative atom") + " but process is " +
               (supermart ? "" : "not ") + "a supermartingale ('" + name + "')";
    }
    return std::nullopt;
  });

  ctx.run("doleans.linearity", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(10));
    const AdaptedProcess& x = *procs[0].second;
    const AdaptedProcess& y = *procs[procs.size() / 2].second;
    const Rat a = rng.rat(bound), b = rng.rat(bound);
    const DoleansMeasure lhs = ctx.measure_of(a * x + b * y);
    const DoleansMeasure rhs = a * ctx.measure_of(x) + b * ctx.measure_of(y);
    if (!(lhs == rhs)) return std::string("measure linearity violated");
    return std::nullopt;
  });

  ctx.run("doleans.kernel", inst, [&]() -> std::optional<std::string> {
    for (const auto& [name, proc] : procs) {
      if (is_zero(ctx.measure_of(*proc)) != classify(*proc).martingale)
        return "zero measure must characterize martingales (process '" + name + "')";
    }
    return std::nullopt;
  });

  ctx.run("doleans.round_trip", inst, [&]() -> std::optional<std::string> {
    for (const auto& [name, proc] : procs) {
      const AdaptedProcess b = riesz(*proc).quasi_potential;
      if (auto bad = expect_eq_process(process_of(ctx.measure_of(b)), b,
                                       "process_of(doleans_of) on the quasi-potential of '" +
                                           name + "'"))
        return bad;
      const DoleansMeasure x = ctx.measure_of(*proc);
      if (!(doleans_of(process_of(x)) == x))
        return "doleans_of(process_of(x)) != x for process '" + name + "'";
    }
    return std::nullopt;
  });

  ctx.run("doleans.local_variation", inst, [&]() -> std::optional<std::string> {
    for (const auto& [name, proc] : procs) {
      const DoleansMeasure x = ctx.measure_of(*proc);
      for (IndexPos t = 0; t + 1 < t_count; ++t) {
        Rat local;
        for (const auto& v : x.atom_values[t]) local += v.abs();
        const RandomVariable ce = conditional_expectation(space, proc->values[t + 1], t);
        RandomVariable gap(space.num_outcomes());
        for (OutcomeId w = 0; w < gap.size(); ++w)
          gap[w] = (proc->values[t][w] - ce[w]).abs();
        const Rat expected = expectation(space, gap);
        if (!(local == expected))
          return "local variation " + local.str() + " != " + expected.str() +
                 " on the step from index " + space.indices()[t] + " ('" + name + "')";
      }
    }
    return std::nullopt;
  });

  ctx.run("doleans.interval_additivity", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(11));
    const AdaptedProcess& proc = *procs[0].second;
    const DoleansMeasure x = ctx.measure_of(proc);
    IndexPos t1 = static_cast<IndexPos>(rng.below(t_count));
    IndexPos t2 = static_cast<IndexPos>(rng.below(t_count));
    IndexPos t3 = static_cast<IndexPos>(rng.below(t_count));
    if (t1 > t2) std::swap(t1, t2);
    if (t2 > t3) std::swap(t2, t3);
    if (t1 > t2) std::swap(t1, t2);
    std::vector<OutcomeId> f;
    for (const auto& block : space.partition(t1))
      if (rng.coin()) f.insert(f.end(), block.begin(), block.end());
    if (f.empty()) f = space.partition(t1)[0];
    const Rat whole = evaluate_rectangle(x, f, t1, t3);
    const Rat first = evaluate_rectangle(x, f, t1, t2);
    const Rat second = evaluate_rectangle(x, f, t2, t3);
    if (!(whole == first + second))
      return "interval additivity: " + whole.str() + " != " + first.str() + " + " +
             second.str();
    if (!(evaluate_rectangle(x, f, t1, t1) == Rat(0)))
      return std::string("empty interval must have measure zero");
    // the marginal sums to the total mass
    Rat marg_sum;
    for (const auto& v : marginal(x)) marg_sum += v;
    if (!(marg_sum == total_mass(x)))
      return "marginal sums to " + marg_sum.str() + " != total mass " +
             total_mass(x).str();
    return std::nullopt;
  });

  ctx.run("decomp.riesz", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(12));
    for (const auto& [name, proc] : procs) {
      const RieszDecomposition rz = riesz(*proc);
      if (auto bad = expect_eq_process(rz.martingale + rz.quasi_potential, *proc,
                                       "riesz reconstruction of '" + name + "'"))
        return bad;
      const ProcessClass cm = classify(rz.martingale);
      const ProcessClass cb = classify(rz.quasi_potential);
      if (!cm.martingale) return "riesz martingale part fails the flag ('" + name + "')";
      if (!cb.quasi_potential)
        return "riesz quasi-potential part fails the flag ('" + name + "')";
      const ProcessClass cx = classify(*proc);
      if (cx.supermartingale != cb.potential)
        return "supermartingale iff potential part failed ('" + name + "')";
      if (cx.supermartingale && cx.positive && !cm.positive)
        return "positive supermartingale must have a positive martingale part ('" + name +
               "')";
      // uniqueness: a nonzero martingale perturbation breaks the flag
      GenParams pn;
      pn.seed = rng.next();
      pn.value_bound = bound;
      for (int attempt = 0; attempt < 3; ++attempt) {
        AdaptedProcess n = gen_process(pn, ProcessKind::martingale, space_ptr);
        pn.seed = rng.next();
        if (n == zero_process(space_ptr)) continue;
        if (classify(rz.quasi_potential + n).quasi_potential)
          return "perturbed quasi-potential part kept the flag ('" + name + "')";
        break;
      }
    }
    return std::nullopt;
  });

  ctx.run("decomp.rao", inst, [&]() -> std::optional<std::string> {
    for (const auto& [name, proc] : procs) {
      const RaoDecomposition rd = rao(*proc);
      if (auto bad = expect_eq_process(rd.pos_part - rd.neg_part, *proc,
                                       "rao reconstruction of '" + name + "'"))
        return bad;
      const ProcessClass cp = classify(rd.pos_part);
      const ProcessClass cn = classify(rd.neg_part);
      if (!cp.positive || !cp.supermartingale)
        return "rao pos_part is not a positive supermartingale ('" + name + "')";
      if (!cn.positive || !cn.supermartingale)
        return "rao neg_part is not a positive supermartingale ('" + name + "')";
      const ProcessClass cx = classify(*proc);
      if (cx.quasi_potential && (!cp.potential || !cn.potential))
        return "rao parts of a quasi-potential must be potentials ('" + name + "')";
      if (!(rd.norm_certificate.input == rd.norm_certificate.pos + rd.norm_certificate.neg))
        return "norm certificate " + rd.norm_certificate.input.str() +
               " != " + rd.norm_certificate.pos.str() + " + " + rd.norm_certificate.neg.str() +
               " ('" + name + "')";
      if (!(rd.norm_certificate.input == cx.q_norm))
        return "norm certificate does not match q_norm ('" + name + "')";
      // consistency with riesz and the jordan parts
      const auto [x_plus, x_minus] = jordan(ctx.measure_of(*proc));
      if (auto bad = expect_eq_process(riesz(rd.pos_part).quasi_potential, process_of(x_plus),
                                       "rao/riesz consistency (positive part) of '" + name +
                                           "'"))
        return bad;
      if (auto bad = expect_eq_process(riesz(rd.neg_part).quasi_potential,
                                       process_of(x_minus),
                                       "rao/riesz consistency (negative part) of '" + name +
                                           "'"))
        return bad;
    }
    return std::nullopt;
  });

  ctx.run("decomp.rao_minimality", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(13));
    const AdaptedProcess& x = *procs[0].second;
    const RaoDecomposition rd = rao(x);
    const MinimalityReport trivial = check_rao_minimality(x, rd.pos_part, rd.neg_part);
    if (!trivial.ok) return "canonical decomposition rejected: " + trivial.violation;
    GenParams ps;
    ps.seed = rng.next();
    ps.value_bound = bound;
    const AdaptedProcess s = gen_process(ps, ProcessKind::potential, space_ptr);
    const MinimalityReport shifted =
        check_rao_minimality(x, rd.pos_part + s, rd.neg_part + s);
    if (!shifted.ok) return "shifted decomposition rejected: " + shifted.violation;
    return std::nullopt;
  });

  ctx.run("decomp.doob_meyer", inst, [&]() -> std::optional<std::string> {
    Rng rng(seed_for(14));
    std::vector<std::pair<std::string, AdaptedProcess>> potentials;
    for (const auto& [name, proc] : procs)
      if (classify(*proc).potential) potentials.emplace_back(name, *proc);
    {
      const AdaptedProcess b = riesz(*procs[0].second).quasi_potential;
      const RaoDecomposition rd = rao(b);
      potentials.emplace_back("rao_pos(" + procs[0].first + ")", rd.pos_part);
      potentials.emplace_back("rao_neg(" + procs[0].first + ")", rd.neg_part);
    }
    for (const auto& [name, pot] : potentials) {
      const DoobMeyerDecomposition dm = doob_meyer(pot);
      for (IndexPos t = 0; t < t_count; ++t) {
        const RandomVariable ce = conditional_expectation(space, dm.terminal, t);
        RandomVariable recon(space.num_outcomes());
        for (OutcomeId w = 0; w < recon.size(); ++w)
          recon[w] = ce[w] - dm.compensator.values[t][w];
        if (auto bad = expect_eq(space, pot.values[t], recon,
                                 "doob-meyer reconstruction of '" + name + "'", t))
          return bad;
      }
      const ProcessClass ca = classify(dm.compensator);
      if (!ca.increasing) return "compensator is not increasing ('" + name + "')";
      if (!ca.natural) return "compensator is not natural ('" + name + "')";
      for (const auto& v : dm.compensator.values[0])
        if (!v.is_zero()) return "compensator does not start at zero ('" + name + "')";
      for (const auto& v : dm.terminal)
        if (v.sign() < 0) return "terminal variable is negative ('" + name + "')";
      const NaturalCheck nc = is_natural(dm.compensator, 64, rng.next());
      if (!nc.natural || !nc.integral_ok)
        return "compensator failed the naturalness cross-check ('" + name + "')";
      // uniqueness against the classical construction
      const AdaptedProcess oracle = doob_compensator_oracle(pot);
      if (auto bad = expect_eq_process(dm.compensator, oracle,
                                       "compensator vs classical construction for '" + name +
                                           "'"))
        return bad;
      const RandomVariable n_terminal = oracle.values[t_count - 1];
      for (IndexPos t = 0; t < t_count; ++t) {
        const RandomVariable lhs = conditional_expectation(space, n_terminal, t);
        const RandomVariable rhs = conditional_expectation(space, dm.terminal, t);
        if (auto bad = expect_eq(space, lhs, rhs,
                                 "conditional expectations of the terminal variable for '" +
                                     name + "'",
                                 t))
          return bad;
      }
    }
    return std::nullopt;
  });

  ctx.run("decomp.stricker", inst, [&]() -> std::optional<std::string> {
    const SpacePtr g = inst.g ? inst.g : trivial_subfiltration(space_ptr);
    for (const auto& [name, proc] : procs) {
      const AdaptedProcess projected = stricker_projection(*proc, g);
      if (const auto violations = validate_process(projected); !violations.empty())
        return "projection of '" + name + "' is not adapted: " + violations.front();
      const Rat norm_g = q_norm(projected);
      const Rat norm_f = q_norm(*proc);
      if (norm_g > norm_f)
        return "stricker contraction failed for '" + name + "': " + norm_g.str() + " > " +
               norm_f.str();
      const AdaptedProcess identity = stricker_projection(*proc, space_ptr);
      if (!(identity == *proc))
        return "projection onto the identical filtration changed '" + name + "'";
    }
    return std::nullopt;
  });

  ctx.run("verify.generator_contracts", inst, [&]() -> std::optional<std::string> {
    for (const auto& [name, proc] : procs) {
      if (const auto violations = validate_process(*proc); !violations.empty())
        return "process '" + name + "' is not adapted: " + violations.front();
    }
    for (const auto& [kind, params] : inst.gen_specs) {
      const std::string name(to_string(kind));
      const AdaptedProcess& proc = inst.scenario.processes.at(name);
      const ProcessClass c = classify(proc);
      switch (kind) {
        case ProcessKind::martingale:
          if (!c.martingale || !(c.q_norm == Rat(0)))
            return "generated martingale fails its flags";
          break;
        case ProcessKind::positive_supermartingale:
          if (!c.positive || !c.supermartingale)
            return "generated positive supermartingale fails its flags";
          break;
        case ProcessKind::potential:
          if (!c.potential) return "generated potential fails its flag";
          break;
        case ProcessKind::natural_increasing:
          if (!c.increasing || !c.natural)
            return "generated natural increasing process fails its flags";
          break;
        case ProcessKind::quasimartingale:
          break; // every adapted process is one; adaptedness checked above
      }
      if (!(gen_process(params, kind, space_ptr) == proc))
        return "generator is not deterministic for kind '" + name + "'";
    }
    return std::nullopt;
  });
}

Instance make_fixture_instance(const std::string& name, Scenario scenario) {
  Instance inst;
  inst.name = name;
  inst.scenario = std::move(scenario);
  auto it = inst.scenario.subfiltrations.find("G");
  inst.g = it == inst.scenario.subfiltrations.end()
               ? trivial_subfiltration(inst.scenario.space)
               : it->second;
  inst.seed = 0xF1; // fixture auxiliary draws are shared and fixed
  return inst;
}

Instance make_trial_instance(const GenParams& base, int k) {
  Instance inst;
  inst.name = "trial " + std::to_string(k);

  Rng meta(base.seed ^ (0x51ED270B5ull * (static_cast<std::uint64_t>(k) + 1)));
  GenParams p = base;
  p.seed = meta.next();
  const int max_m = std::max(1, base.num_outcomes);
  const int max_t = std::max(1, base.num_indices);
  p.num_outcomes = max_m <= 2 ? max_m : static_cast<int>(2 + meta.below(max_m - 1));
  p.num_indices = max_t <= 2 ? max_t : static_cast<int>(2 + meta.below(max_t - 1));

  inst.scenario.space = gen_space(p);
  for (ProcessKind kind :
       {ProcessKind::martingale, ProcessKind::positive_supermartingale, ProcessKind::potential,
        ProcessKind::quasimartingale, ProcessKind::natural_increasing}) {
    GenParams pk = p;
    pk.seed = meta.next();
    inst.scenario.processes.emplace(to_string(kind),
                                    gen_process(pk, kind, inst.scenario.space));
    inst.gen_specs.emplace_back(kind, pk);
  }
  GenParams pg = p;
  pg.seed = meta.next();
  inst.g = gen_subfiltration(pg, inst.scenario.space);
  inst.scenario.subfiltrations.emplace("G", inst.g);
  inst.seed = meta.next();
  return inst;
}

} // namespace

SuiteReport run_suite(const SuiteOptions& options) {
  SuiteCtx ctx(options.mutation);
  if (options.fixtures) {
    for (auto& [name, scenario] : canonical_fixtures())
      run_instance(ctx, make_fixture_instance(name, std::move(scenario)));
  }
  for (int k = 0; k < options.trials; ++k)
    run_instance(ctx, make_trial_instance(options.params, k));
  return std::move(ctx).finish();
}

SuiteReport run_suite(const GenParams& p, int trials) {
  return run_suite(SuiteOptions{p, trials, false, Mutation::none});
}

} // namespace qmart
