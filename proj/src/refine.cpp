//===- refine.cpp - Bounded refinement checking ----------------------------===//
//
// Part of the termcanon project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "canon/refine.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace canon {

namespace {

struct SplitMix64 {
  uint64_t state;
  uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

uint64_t mix(uint64_t a, uint64_t b) {
  SplitMix64 m{a ^ (b * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull)};
  return m.next();
}

int64_t sample_in(SplitMix64 &rng, int64_t lo, int64_t hi) {
  uint64_t span = (uint64_t)hi - (uint64_t)lo;
  if (span == UINT64_MAX)
    return (int64_t)rng.next();
  return lo + (int64_t)(rng.next() % (span + 1));
}

/// One parameter index or leaf id referenced by the terms under check.
struct Slot {
  bool is_leaf = false;
  uint32_t key = 0;
  bool in_e1 = false;
  bool in_e2 = false;
  std::vector<Stamp> stamps;

  // Candidate pools (deduplicated across stamps).
  std::vector<Value> exact;   // full range enumerations of exhaustive widths
  std::vector<Value> corners; // corner values of sampled widths
  std::vector<Value> randoms; // seeded random values of sampled widths
};

using SlotMap = std::map<std::pair<bool, uint32_t>, Slot>;

void collect_slots(const Term &t, bool from_e1, SlotMap &slots) {
  if (t.kind() == TermKind::Parameter || t.kind() == TermKind::Leaf) {
    bool is_leaf = t.kind() == TermKind::Leaf;
    Slot &s = slots[{is_leaf, t.index()}];
    s.is_leaf = is_leaf;
    s.key = t.index();
    (from_e1 ? s.in_e1 : s.in_e2) = true;
    bool seen = std::any_of(s.stamps.begin(), s.stamps.end(),
                            [&t](const Stamp &x) { return x == t.stamp(); });
    if (!seen)
      s.stamps.push_back(t.stamp());
  }
  for (const auto &c : t.children())
    collect_slots(*c, from_e1, slots);
}

bool has_width(const std::vector<unsigned> &ws, unsigned w) {
  return std::find(ws.begin(), ws.end(), w) != ws.end();
}

void build_pools(Slot &s, const CheckConfig &cfg) {
  std::set<std::pair<unsigned, uint64_t>> seen_exact, seen_corner;
  auto push = [](std::vector<Value> &pool,
                 std::set<std::pair<unsigned, uint64_t>> &seen, Value v) {
    if (seen.emplace(v.width(), v.bits()).second)
      pool.push_back(v);
  };

  for (const Stamp &st : s.stamps) {
    if (!st.is_integer())
      continue;
    unsigned w = st.width();
    uint64_t span = (uint64_t)st.hi() - (uint64_t)st.lo();
    bool exhaustive = has_width(cfg.exhaustive_widths, w) &&
                      span < CheckConfig::kMaxExhaustiveContexts;
    if (exhaustive) {
      for (uint64_t off = 0; off <= span; ++off)
        push(s.exact, seen_exact,
             Value::of_signed(w, st.lo() + (int64_t)off));
    } else {
      for (int64_t c : {int64_t{0}, int64_t{1}, int64_t{-1}, min_signed(w),
                        max_signed(w), st.lo(), st.hi()})
        if (st.lo() <= c && c <= st.hi())
          push(s.corners, seen_corner, Value::of_signed(w, c));
      SplitMix64 rng{mix(cfg.rng_seed,
                         mix(s.is_leaf ? 0x1eafull : 0x9a7a,
                             mix(s.key, mix(w, (uint64_t)st.lo() ^
                                                   (uint64_t)st.hi()))))};
      for (unsigned i = 0; i < cfg.samples_per_width; ++i)
        s.randoms.push_back(Value::of_signed(w, sample_in(rng, st.lo(), st.hi())));
    }
  }
}

struct PlannedSlot {
  const Slot *slot;
  bool exhaustive;
};

struct FamilyPlan {
  std::vector<PlannedSlot> exh;
  std::vector<PlannedSlot> samp;
  uint64_t exh_product = 1;
  bool corner_cross = false;
  uint64_t corner_block = 0;
  uint64_t random_block = 0;
  size_t params_len = 0;
};

constexpr uint64_t kCornerCrossCap = 1024;

FamilyPlan plan_family(const std::vector<const Slot *> &slots,
                       const CheckConfig &cfg) {
  FamilyPlan plan;
  for (const Slot *s : slots) {
    if (s->is_leaf)
      ;
    else
      plan.params_len = std::max(plan.params_len, (size_t)s->key + 1);
    bool exhaustive = !s->exact.empty() && s->corners.empty();
    (exhaustive ? plan.exh : plan.samp).push_back({s, exhaustive});
  }

  auto mul_sat = [](uint64_t a, uint64_t b) {
    return (b != 0 && a > UINT64_MAX / b) ? UINT64_MAX : a * b;
  };
  // Largest exhaustive slots degrade to sampling when the cross-product
  // would exceed the cap.
  std::sort(plan.exh.begin(), plan.exh.end(),
            [](const PlannedSlot &a, const PlannedSlot &b) {
              if (a.slot->exact.size() != b.slot->exact.size())
                return a.slot->exact.size() < b.slot->exact.size();
              return std::make_pair(a.slot->is_leaf, a.slot->key) <
                     std::make_pair(b.slot->is_leaf, b.slot->key);
            });
  for (;;) {
    plan.exh_product = 1;
    for (const auto &ps : plan.exh)
      plan.exh_product = mul_sat(plan.exh_product, ps.slot->exact.size());
    if (plan.exh_product <= CheckConfig::kMaxExhaustiveContexts ||
        plan.exh.empty())
      break;
    plan.samp.push_back(plan.exh.back());
    plan.samp.back().exhaustive = false;
    plan.exh.pop_back();
  }

  if (!plan.samp.empty()) {
    uint64_t cross = 1;
    for (const auto &ps : plan.samp) {
      size_t pool = ps.slot->corners.empty() ? ps.slot->exact.size()
                                             : ps.slot->corners.size();
      cross = mul_sat(cross, std::max<size_t>(pool, 1));
    }
    plan.corner_cross = cross <= kCornerCrossCap;
    if (plan.corner_cross) {
      plan.corner_block = cross;
    } else {
      uint64_t longest = 1;
      for (const auto &ps : plan.samp) {
        size_t pool = ps.slot->corners.empty() ? ps.slot->exact.size()
                                               : ps.slot->corners.size();
        longest = std::max<uint64_t>(longest, pool);
      }
      plan.corner_block = longest;
    }
    bool any_randoms = std::any_of(
        plan.samp.begin(), plan.samp.end(),
        [](const PlannedSlot &ps) { return !ps.slot->randoms.empty(); });
    plan.random_block = any_randoms ? cfg.samples_per_width : 0;

    // Keep the overall budget bounded when exhaustive and sampled slots mix.
    uint64_t allowed =
        std::max<uint64_t>(8, CheckConfig::kMaxExhaustiveContexts /
                                  std::max<uint64_t>(plan.exh_product, 1));
    if (plan.corner_block + plan.random_block > allowed) {
      if (plan.corner_cross) {
        plan.corner_cross = false;
        uint64_t longest = 1;
        for (const auto &ps : plan.samp) {
          size_t pool = ps.slot->corners.empty() ? ps.slot->exact.size()
                                                 : ps.slot->corners.size();
          longest = std::max<uint64_t>(longest, pool);
        }
        plan.corner_block = longest;
      }
      plan.corner_block = std::min(plan.corner_block, allowed);
      plan.random_block = std::min(plan.random_block,
                                   allowed - plan.corner_block);
    }
  }
  return plan;
}

const std::vector<Value> &corner_pool(const PlannedSlot &ps) {
  return ps.slot->corners.empty() ? ps.slot->exact : ps.slot->corners;
}

/// Enumerates the family's contexts in canonical order, invoking fn for
/// each; fn returns false to stop. Returns false when stopped early.
template <typename Fn>
bool enumerate_contexts(const FamilyPlan &plan, Fn &&fn) {
  EvalContext ctx;
  ctx.params.assign(plan.params_len, Value::of(64, 0));

  uint64_t sampled_block = plan.samp.empty()
                               ? 1
                               : plan.corner_block + plan.random_block;
  for (uint64_t i = 0; i < plan.exh_product; ++i) {
    uint64_t rest = i;
    for (const auto &ps : plan.exh) {
      size_t n = ps.slot->exact.size();
      const Value &v = ps.slot->exact[rest % n];
      rest /= n;
      if (ps.slot->is_leaf)
        ctx.method_state[ps.slot->key] = v;
      else
        ctx.params[ps.slot->key] = v;
    }
    for (uint64_t j = 0; j < sampled_block; ++j) {
      if (!plan.samp.empty()) {
        if (j < plan.corner_block) {
          uint64_t r = j;
          for (const auto &ps : plan.samp) {
            const std::vector<Value> &pool = corner_pool(ps);
            size_t n = std::max<size_t>(pool.size(), 1);
            const Value &v = pool.empty() ? Value::of(64, 0) : pool[r % n];
            if (plan.corner_cross)
              r /= n;
            if (ps.slot->is_leaf)
              ctx.method_state[ps.slot->key] = v;
            else
              ctx.params[ps.slot->key] = v;
          }
        } else {
          uint64_t r = j - plan.corner_block;
          for (const auto &ps : plan.samp) {
            const std::vector<Value> &pool = ps.slot->randoms.empty()
                                                 ? corner_pool(ps)
                                                 : ps.slot->randoms;
            size_t n = std::max<size_t>(pool.size(), 1);
            const Value &v = pool.empty() ? Value::of(64, 0) : pool[r % n];
            if (ps.slot->is_leaf)
              ctx.method_state[ps.slot->key] = v;
            else
              ctx.params[ps.slot->key] = v;
          }
        }
      }
      if (!fn(ctx))
        return false;
    }
  }
  return true;
}

} // namespace

std::string Counterexample::to_string() const {
  std::string s;
  if (!instantiation.empty())
    s += "instantiation " + canon::to_string(instantiation) + " ";
  s += "context " + context.to_string();
  s += " lhs=" + lhs_result.to_string();
  s += " rhs=" + rhs_result.to_string();
  return s;
}

Verdict refines(const TermPtr &e1, const TermPtr &e2, const CheckConfig &cfg) {
  assert(e1 && e2 && e1->is_ground() && e2->is_ground());

  SlotMap slots;
  collect_slots(*e1, true, slots);
  collect_slots(*e2, false, slots);
  for (auto &[key, slot] : slots)
    build_pools(slot, cfg);

  uint64_t constraining = 0;
  std::optional<Counterexample> violation;

  auto run = [&](const std::vector<const Slot *> &subset) {
    FamilyPlan plan = plan_family(subset, cfg);
    enumerate_contexts(plan, [&](const EvalContext &ctx) {
      EvalResult r1 = evaluate(ctx, *e1);
      if (!r1.defined())
        return true; // no constraint in this context
      ++constraining;
      EvalResult r2 = evaluate(ctx, *e2);
      if (r2.defined() && r2.value() == r1.value())
        return true;
      violation = Counterexample{{}, ctx, r1, r2};
      return false;
    });
  };

  std::vector<const Slot *> all;
  std::vector<const Slot *> only_e1;
  bool extra_in_e2 = false;
  for (const auto &[key, slot] : slots) {
    all.push_back(&slot);
    if (slot.in_e1)
      only_e1.push_back(&slot);
    else
      extra_in_e2 = true;
  }

  // Contexts shaped to e1 alone come first: they expose right sides that
  // demand parameters or leaves e1 never needed.
  if (extra_in_e2)
    run(only_e1);
  if (!violation)
    run(all);

  if (violation)
    return Verdict::counterexample(std::move(*violation));
  if (constraining == 0)
    return Verdict::inapplicable(
        "the left term is not defined in any enumerated context");
  return Verdict::verified(constraining);
}

namespace {

enum class VarNeed { Free, ConstOnly };

std::vector<TermPtr> var_candidates(uint32_t idx, uint32_t leaf_id,
                                    unsigned width, VarNeed need,
                                    const CheckConfig &cfg) {
  std::vector<TermPtr> out;
  unsigned w = width;
  if (need != VarNeed::ConstOnly) {
    out.push_back(Term::parameter(idx, Stamp::integer_full(w)));
    if (w > 1) {
      out.push_back(Term::parameter(idx, Stamp::integer(w, min_signed(w), -1)));
      out.push_back(Term::parameter(idx, Stamp::integer(w, 0, max_signed(w))));
    } else {
      out.push_back(Term::parameter(idx, Stamp::integer(1, -1, -1)));
      out.push_back(Term::parameter(idx, Stamp::integer(1, 0, 0)));
    }
  }
  // Corner constants.
  std::set<std::pair<unsigned, uint64_t>> seen;
  for (int64_t c :
       {int64_t{0}, int64_t{1}, int64_t{-1}, min_signed(w), max_signed(w)}) {
    Value v = Value::of_signed(w, c);
    if (seen.emplace(v.width(), v.bits()).second)
      out.push_back(Term::constant(v));
  }
  if (need != VarNeed::ConstOnly && cfg.max_instantiation_depth >= 2) {
    out.push_back(Term::leaf(leaf_id, Stamp::integer_full(w)));
    out.push_back(Term::binary(BinaryOp::Add,
                               Term::parameter(idx, Stamp::integer_full(w)),
                               Term::constant(Value::of(w, 1))));
    out.push_back(
        Term::unary(UnaryOp::Neg, Term::parameter(idx, Stamp::integer_full(w))));
  }
  return out;
}

void collect_const_metavar_names(const Term &t, std::set<std::string> &out) {
  if (t.kind() == TermKind::ConstMetaVar)
    out.insert(t.var_name());
  for (const auto &c : t.children())
    collect_const_metavar_names(*c, out);
}

// Generated instantiations must not collide with parameters or leaves the
// pattern itself mentions.
void max_slot_keys(const Term &t, uint32_t &max_param, uint32_t &max_leaf) {
  if (t.kind() == TermKind::Parameter)
    max_param = std::max(max_param, t.index() + 1);
  if (t.kind() == TermKind::Leaf)
    max_leaf = std::max(max_leaf, t.index() + 1);
  for (const auto &c : t.children())
    max_slot_keys(*c, max_param, max_leaf);
}

} // namespace

Verdict check_rule_soundness(const RewriteRule &rule, const CheckConfig &cfg) {
  std::vector<std::string> vars = collect_vars(*rule.lhs);
  std::set<std::string> const_only;
  collect_const_metavar_names(*rule.lhs, const_only);
  collect_const_metavar_names(*rule.rhs, const_only);

  uint32_t param_base = 0, leaf_base = 0;
  max_slot_keys(*rule.lhs, param_base, leaf_base);
  max_slot_keys(*rule.rhs, param_base, leaf_base);

  uint64_t total_contexts = 0;
  uint64_t applicable = 0;

  std::vector<unsigned> widths = cfg.exhaustive_widths;
  widths.insert(widths.end(), cfg.sample_widths.begin(),
                cfg.sample_widths.end());

  for (unsigned w : widths) {
    // Candidate pools for this width, one per variable.
    std::vector<std::vector<TermPtr>> pools;
    std::vector<size_t> pair_pool_size; // stamps + constants only
    for (size_t i = 0; i < vars.size(); ++i) {
      VarNeed need = const_only.count(vars[i]) ? VarNeed::ConstOnly
                                               : VarNeed::Free;
      pools.push_back(var_candidates(param_base + (uint32_t)i,
                                     leaf_base + 1000 + (uint32_t)i, w, need,
                                     cfg));
      size_t stamps = need == VarNeed::ConstOnly ? 0 : 3;
      size_t consts = pools.back().size() - stamps -
                      (need != VarNeed::ConstOnly &&
                               cfg.max_instantiation_depth >= 2
                           ? 3
                           : 0);
      pair_pool_size.push_back(stamps + consts);
    }

    std::set<std::vector<size_t>> tried;
    std::vector<std::vector<size_t>> assignments;
    std::vector<size_t> baseline(vars.size(), 0);
    auto add = [&](std::vector<size_t> a) {
      if (tried.insert(a).second)
        assignments.push_back(std::move(a));
    };
    add(baseline);
    for (size_t i = 0; i < vars.size(); ++i)
      for (size_t c = 1; c < pools[i].size(); ++c) {
        auto a = baseline;
        a[i] = c;
        add(a);
      }
    for (size_t i = 0; i < vars.size(); ++i)
      for (size_t j = i + 1; j < vars.size(); ++j)
        for (size_t ci = 0; ci < pair_pool_size[i]; ++ci)
          for (size_t cj = 0; cj < pair_pool_size[j]; ++cj) {
            auto a = baseline;
            a[i] = ci;
            a[j] = cj;
            add(a);
          }

    for (const auto &a : assignments) {
      Substitution s;
      for (size_t i = 0; i < vars.size(); ++i)
        s[vars[i]] = pools[i][a[i]];
      if (rule.cond && !eval_condition(*rule.cond, s))
        continue;
      ++applicable;
      TermPtr lhs_g = substitute(rule.lhs, s);
      TermPtr rhs_g = lhs_g ? substitute(rule.rhs, s) : nullptr;
      if (!lhs_g || !rhs_g)
        continue; // zero_like width unresolvable; the rule never fires here
      Verdict v = refines(lhs_g, rhs_g, cfg);
      switch (v.kind()) {
      case Verdict::Kind::Counterexample: {
        Counterexample ce = v.counterexample();
        ce.instantiation = s;
        return Verdict::counterexample(std::move(ce));
      }
      case Verdict::Kind::VerifiedBounded:
        total_contexts += v.contexts_checked();
        break;
      case Verdict::Kind::Inapplicable:
        break; // vacuous instantiation
      }
    }
  }

  if (applicable == 0)
    return Verdict::inapplicable(
        "no generated instantiation satisfies the rule condition");
  if (total_contexts == 0)
    return Verdict::inapplicable(
        "the rule's left side is never defined in enumerated contexts");
  return Verdict::verified(total_contexts);
}

Verdict check_monotone(const TermPtr &outer_with_hole, const TermPtr &e1,
                       const TermPtr &e2, const CheckConfig &cfg) {
  std::vector<std::string> holes = collect_vars(*outer_with_hole);
  if (holes.size() != 1)
    throw RuleError("the outer context must contain exactly one hole variable");
  Substitution s1{{holes[0], e1}}, s2{{holes[0], e2}};
  return refines(substitute(outer_with_hole, s1),
                 substitute(outer_with_hole, s2), cfg);
}

std::string report_line(const RuleReport &r) {
  std::string line = "RULE " + r.name + ": ";
  if (!r.termination.decreases && !r.unchecked)
    return line + "FAIL termination: " + r.termination.describe();
  switch (r.soundness.kind()) {
  case Verdict::Kind::VerifiedBounded:
    line += "PASS(" + std::to_string(r.soundness.contexts_checked()) +
            " contexts)";
    break;
  case Verdict::Kind::Counterexample:
    line += "FAIL " + r.soundness.counterexample().to_string();
    break;
  case Verdict::Kind::Inapplicable:
    line += "INAPPLICABLE " + r.soundness.reason();
    break;
  }
  if (!r.termination.decreases && r.unchecked)
    line += " [UNCHECKED: termination not proven: " +
            r.termination.describe() + "]";
  return line;
}

std::vector<RuleReport> verify_phases(const std::vector<Phase> &phases,
                                      const CheckConfig &cfg) {
  std::vector<RuleReport> out;
  for (const Phase &phase : phases) {
    for (const RewriteRule &rule : phase.rules) {
      RuleReport r;
      r.name = rule.name;
      r.unchecked = rule.unchecked;
      r.termination = check_termination(rule, phase.measure);
      r.soundness = check_rule_soundness(rule, cfg);
      out.push_back(std::move(r));
    }
  }
  return out;
}

} // namespace canon
