#pragma once

// Inductive towers of Razak blocks built from the corrected family, and the
// product criterion on the fraction of coordinate-type eigenmaps.

#include "razak_forge/arith.hpp"
#include "razak_forge/blocks.hpp"
#include "razak_forge/parallel.hpp"
#include "razak_forge/solve.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace razak_forge {

/// u_i = u_const + u_per_k * k_i, with a fixed s_i.
struct GrowthPolicy {
  Int u_const = 0;
  Int u_per_k = 1;
  Int s = 1;

  Int u_for(const Int& k) const { return u_const + u_per_k * k; }

  /// Canonical spelling, e.g. "u=k", "u=2k", "u=1", "u=k+1,s=2".
  std::string name() const {
    std::string u;
    if (u_per_k != 0) u = (u_per_k == 1 ? std::string() : u_per_k.str()) + "k";
    if (u_const != 0) u += (u.empty() ? "" : "+") + u_const.str();
    if (u.empty()) u = "0";
    std::string out = "u=" + u;
    if (s != 1) out += ",s=" + s.str();
    return out;
  }

  friend bool operator==(const GrowthPolicy&, const GrowthPolicy&) = default;
};

/// Parses "u=<c>", "u=k", "u=<c>k", "u=<c>k+<d>", each optionally followed by ",s=<c>".
inline GrowthPolicy parse_policy(const std::string& text) {
  GrowthPolicy g{0, 0, 1};
  bool have_u = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("policy: expected key=value in '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "u") {
      const auto kpos = value.find('k');
      if (kpos == std::string::npos) {
        g.u_const = parse_int(value);
      } else {
        const std::string mult = value.substr(0, kpos);
        g.u_per_k = mult.empty() ? Int(1) : parse_int(mult);
        const std::string rest = value.substr(kpos + 1);
        if (!rest.empty()) {
          if (rest[0] != '+') throw std::invalid_argument("policy: malformed u term '" + value + "'");
          g.u_const = parse_int(rest.substr(1));
        }
      }
      have_u = true;
    } else if (key == "s") {
      g.s = parse_int(value);
    } else {
      throw std::invalid_argument("policy: unknown key '" + key + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (!have_u) throw std::invalid_argument("policy: missing u=...");
  if (g.s < 1 || g.u_const < 0 || g.u_per_k < 0 || (g.u_const == 0 && g.u_per_k == 0)) {
    throw std::invalid_argument("policy: u and s must be >= 1 for every k >= 1");
  }
  return g;
}

struct StageChoice {
  Int s;
  Int u;
};

/// Which eigenmaps count toward d_i.
enum class DPolicy { coordinate_only, include_flipped };

inline std::string to_string(DPolicy d) {
  return d == DPolicy::coordinate_only ? "coordinate_only" : "include_flipped";
}

struct Schedule {
  Int k1 = 1;
  std::variant<GrowthPolicy, std::vector<StageChoice>> choices = GrowthPolicy{};
  DPolicy d_policy = DPolicy::include_flipped;
  CountPolicy count_policy = CountPolicy::min_based;

  StageChoice choice_at(std::size_t i, const Int& k) const {
    if (const auto* g = std::get_if<GrowthPolicy>(&choices)) return {g->s, g->u_for(k)};
    const auto& list = std::get<std::vector<StageChoice>>(choices);
    if (i >= list.size()) throw std::invalid_argument("schedule: explicit stage list is shorter than requested");
    return list[i];
  }
};

struct Stage {
  std::size_t index = 1;
  /// Number of consecutive base stages composed into this one.
  std::size_t span = 1;
  Int k, l;
  /// Matrix size m_i of A_i (m_1 = 1).
  Int m;
  /// Multiplicity of the connecting map, so m_{i+1} = m_i * m_factor.
  Int m_factor;
  Int p, r;
  std::optional<Int> s, u, q;
  Int a0, a1, b0, b1;
  Int unflipped, flipped;
  Int d;
  /// Dimension of the cube Y_i.
  Int cube_dim;
  Rational f;

  MapCounts counts() const { return {p, r, m_factor, unflipped, flipped, a0, a1, b0, b1}; }
  friend bool operator==(const Stage&, const Stage&) = default;
};

inline Int d_for(DPolicy policy, const Int& unflipped, const Int& flipped) {
  return policy == DPolicy::coordinate_only ? unflipped : Int(unflipped + flipped);
}

/// Stages 1..n. Stage i uses family(s_i, k_i, u_i); k_{i+1} = l_i,
/// m_{i+1} = m_i * (k_i^2 + 3k_i + 1) s_i and D_{i+1} = D_i * d_i.
inline std::vector<Stage> build(const Schedule& schedule, std::size_t n) {
  if (n < 1) throw std::invalid_argument("tower build: need at least one stage");
  if (schedule.k1 < 1) throw std::invalid_argument("tower build: k1 must be >= 1");
  std::vector<Stage> out;
  out.reserve(n);
  Int k = schedule.k1;
  Int m = 1;
  Int cube = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [s, u] = schedule.choice_at(i, k);
    const CorrectedInstance x = family(s, k, u);
    const auto coords = coordinate_counts(x.a0, x.a1, x.b0, x.b1, schedule.count_policy);
    Stage st;
    st.index = i + 1;
    st.k = x.k;
    st.l = x.l;
    st.m = m;
    st.m_factor = x.m;
    st.p = x.p;
    st.r = x.r;
    st.s = x.s;
    st.u = u;
    st.q = x.q;
    st.a0 = x.a0;
    st.a1 = x.a1;
    st.b0 = x.b0;
    st.b1 = x.b1;
    st.unflipped = coords.unflipped;
    st.flipped = coords.flipped;
    st.d = d_for(schedule.d_policy, coords.unflipped, coords.flipped);
    st.cube_dim = cube;
    st.f = make_rational(st.d, st.p);
    out.push_back(st);
    m *= x.m;
    cube *= st.d;
    k = x.l;
  }
  return out;
}

/// Groups consecutive stages g at a time and composes their connecting maps at
/// the count level. Under coordinate_only the composite d is its unflipped
/// count (pairs of flips become coordinate projections); under include_flipped
/// it is the full coordinate count, which multiplies. g = 1 returns the input.
inline std::vector<Stage> telescope(const std::vector<Stage>& stages, std::size_t g,
                                    DPolicy policy = DPolicy::include_flipped) {
  if (g == 0) throw std::invalid_argument("telescope: group size must be >= 1");
  if (g == 1) return stages;
  if (stages.size() % g != 0) {
    throw std::invalid_argument("telescope: group size must divide the number of stages");
  }
  std::vector<Stage> out;
  Int cube = stages.empty() ? Int(1) : stages.front().cube_dim;
  for (std::size_t start = 0; start < stages.size(); start += g) {
    const Stage& first = stages[start];
    MapCounts c = first.counts();
    for (std::size_t j = start + 1; j < start + g; ++j) {
      if (stages[j].k != stages[j - 1].l) throw std::invalid_argument("telescope: stages are not chained");
      c = compose_counts(stages[j].counts(), c);
    }
    Stage st;
    st.index = start / g + 1;
    st.span = g * first.span;
    st.k = first.k;
    st.l = stages[start + g - 1].l;
    st.m = first.m;
    st.m_factor = c.m;
    st.p = c.p;
    st.r = c.r;
    st.a0 = c.a0;
    st.a1 = c.a1;
    st.b0 = c.b0;
    st.b1 = c.b1;
    st.unflipped = c.unflipped;
    st.flipped = c.flipped;
    st.d = d_for(policy, c.unflipped, c.flipped);
    st.cube_dim = cube;
    st.f = make_rational(st.d, st.p);
    cube *= st.d;
    out.push_back(st);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Product criterion

/// same: factors d_i / p_i. offset: factors d_{i+1} / p_i.
enum class IndexMode { same, offset };

inline std::string to_string(IndexMode m) { return m == IndexMode::same ? "same" : "offset"; }

enum class PerforationVerdict { certified_positive, inconclusive, certified_not_applicable };

inline std::string to_string(PerforationVerdict v) {
  switch (v) {
    case PerforationVerdict::certified_positive:
      return "certified_positive";
    case PerforationVerdict::inconclusive:
      return "inconclusive";
    case PerforationVerdict::certified_not_applicable:
      return "certified_not_applicable";
  }
  return "inconclusive";
}

struct ReportOptions {
  IndexMode index = IndexMode::same;
  /// Largest ratio of consecutive deficits accepted for tail certification.
  Rational rho_ceiling = make_rational(1, 2);
};

struct PerforationReport {
  IndexMode index = IndexMode::same;
  std::vector<Rational> factors;
  std::vector<Rational> deficits;
  /// deficits[i+1] / deficits[i]
  std::vector<Rational> ratios;
  Rational partial_product = 1;
  Rational deficit_sum = 0;
  /// Both index conventions, whichever drives the verdict.
  Rational same_index_product = 1;
  Rational offset_index_product = 1;
  Rational rho_ceiling;
  std::optional<Rational> rho;
  std::optional<Rational> tail_bound;
  std::optional<Rational> lower_bound;
  PerforationVerdict verdict = PerforationVerdict::inconclusive;
  std::string note;

  friend bool operator==(const PerforationReport&, const PerforationReport&) = default;
};

/// Exact partial product of the coordinate fractions with a tail certificate:
/// if every consecutive deficit ratio is at most rho <= rho_ceiling < 1, the
/// deficits beyond the window sum to at most x_N * rho / (1 - rho), and
/// prod(1 - x_j) >= 1 - sum(x_j) bounds the tail. The ratio bound is observed
/// on the computed window only.
inline PerforationReport perforation_report(const std::vector<Stage>& stages, const ReportOptions& opt = {}) {
  PerforationReport rep;
  rep.index = opt.index;
  rep.rho_ceiling = opt.rho_ceiling;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    rep.same_index_product *= make_rational(stages[i].d, stages[i].p);
    if (i + 1 < stages.size()) rep.offset_index_product *= make_rational(stages[i + 1].d, stages[i].p);
  }
  if (stages.empty()) {
    rep.offset_index_product = 1;
  }
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (opt.index == IndexMode::same) {
      rep.factors.push_back(make_rational(stages[i].d, stages[i].p));
    } else if (i + 1 < stages.size()) {
      rep.factors.push_back(make_rational(stages[i + 1].d, stages[i].p));
    }
  }
  for (const auto& f : rep.factors) {
    rep.partial_product *= f;
    rep.deficits.push_back(1 - f);
    rep.deficit_sum += 1 - f;
  }

  for (const auto& st : stages) {
    if (st.p <= 1) {
      rep.verdict = PerforationVerdict::certified_not_applicable;
      rep.note = "stage " + std::to_string(st.index) + " has p <= 1";
      return rep;
    }
  }
  if (stages.size() < 3 || rep.deficits.size() < 2) {
    rep.note = "insufficient stages for a ratio bound (need at least 3)";
    return rep;
  }
  for (const auto& x : rep.deficits) {
    if (x >= 1) {
      rep.note = "a factor is zero; the product vanishes";
      return rep;
    }
    if (x <= 0) {
      rep.note = "a factor is >= 1; deficits are not positive";
      return rep;
    }
  }
  Rational rho = 0;
  for (std::size_t i = 0; i + 1 < rep.deficits.size(); ++i) {
    rep.ratios.push_back(rep.deficits[i + 1] / rep.deficits[i]);
    if (rep.ratios.back() > rho) rho = rep.ratios.back();
  }
  rep.rho = rho;
  if (rho > opt.rho_ceiling || rho >= 1) {
    rep.note = "deficit ratio " + to_string(rho) + " exceeds ceiling " + to_string(opt.rho_ceiling);
    return rep;
  }
  rep.tail_bound = rep.deficits.back() * rho / (1 - rho);
  if (*rep.tail_bound >= 1) {
    rep.note = "tail bound is not below 1";
    return rep;
  }
  rep.lower_bound = rep.partial_product * (1 - *rep.tail_bound);
  if (*rep.lower_bound > 0) {
    rep.verdict = PerforationVerdict::certified_positive;
    rep.note = "ratio bound observed over the computed window";
  }
  return rep;
}

struct PolicyOutcome {
  GrowthPolicy policy;
  std::vector<Stage> stages;
  PerforationReport report;
};

struct ScheduleSearch {
  std::size_t best = 0;
  std::vector<PolicyOutcome> outcomes;

  const PolicyOutcome& best_outcome() const { return outcomes.at(best); }
};

/// Evaluates every policy and selects the largest certified lower bound;
/// ties and the all-inconclusive case go to the earliest policy.
inline ScheduleSearch search_schedule(const Int& k1, std::size_t n, const std::vector<GrowthPolicy>& policies,
                                      DPolicy d_policy = DPolicy::include_flipped, const ReportOptions& opt = {},
                                      std::size_t workers = default_workers()) {
  if (policies.empty()) throw std::invalid_argument("search_schedule: empty policy space");
  using Indexed = std::pair<std::size_t, PolicyOutcome>;
  auto results = parallel_collect<Indexed>(policies.size(), workers, [&](std::size_t i, auto& sink) {
    Schedule sched{k1, policies[i], d_policy};
    auto stages = build(sched, n);
    auto report = perforation_report(stages, opt);
    sink.push_back({i, PolicyOutcome{policies[i], std::move(stages), std::move(report)}});
  });
  std::sort(results.begin(), results.end(), [](const Indexed& a, const Indexed& b) { return a.first < b.first; });
  ScheduleSearch out;
  std::optional<Rational> best_bound;
  for (auto& [i, outcome] : results) {
    const auto& rep = outcome.report;
    if (rep.verdict == PerforationVerdict::certified_positive && (!best_bound || *rep.lower_bound > *best_bound)) {
      best_bound = rep.lower_bound;
      out.best = i;
    }
    out.outcomes.push_back(std::move(outcome));
  }
  return out;
}

}  // namespace razak_forge
