#pragma once

// The corrected solution family, its symbolic certificate, and bounded
// enumeration of the unital and corrected systems.

#include "razak_forge/arith.hpp"
#include "razak_forge/instance.hpp"
#include "razak_forge/parallel.hpp"
#include "razak_forge/poly.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace razak_forge {

/// The three-parameter solution family, s, k, u >= 1.
inline CorrectedInstance family(const Int& s, const Int& k, const Int& u) {
  if (s < 1 || k < 1 || u < 1) {
    throw std::invalid_argument("family: s, k, u must all be >= 1");
  }
  CorrectedInstance x;
  x.k = k;
  x.l = k + 1 + 2 * u;
  x.m = (k * k + 3 * k + 1) * s;
  x.a0 = (k + 1) * (k + 1 + u) * s;
  x.a1 = k * s * u;
  x.b0 = (k + 1) * s * u;
  x.b1 = k * (k + 2 + u) * s;
  x.r = (k * k + 2 * k + k * u - u) * s;
  x.q = k * s;
  x.p = (k * k + 2 * k * u + 3 * k + 3 * u + 2) * s;
  x.s = s;
  return x;
}

/// Family fields as polynomials in Z[k, s, u], keyed by system variable name.
inline std::map<std::string, MultiPoly> family_polynomials() {
  static const VariableSet V{"k", "s", "u"};
  const MultiPoly k = MultiPoly::variable(V, "k");
  const MultiPoly s = MultiPoly::variable(V, "s");
  const MultiPoly u = MultiPoly::variable(V, "u");
  const Int one = 1, two = 2, three = 3;
  return {
      {"k", k},
      {"l", k + one + two * u},
      {"m", (k * k + three * k + one) * s},
      {"a0", (k + one) * (k + one + u) * s},
      {"a1", k * s * u},
      {"b0", (k + one) * s * u},
      {"b1", k * (k + two + u) * s},
      {"r", (k * k + two * k + k * u - u) * s},
      {"q", k * s},
      {"p", (k * k + two * k * u + three * k + three * u + two) * s},
      {"s", s},
  };
}

struct FamilyCertificate {
  /// Residuals after substitution, in equation_names() order.
  std::vector<NamedPoly> residuals;

  bool all_zero() const {
    return std::all_of(residuals.begin(), residuals.end(), [](const NamedPoly& r) { return r.poly.is_zero(); });
  }

  /// Number of distinct equations (count, size, weight_y0, weight_y1) whose
  /// residuals are all zero; the two count residuals form one equation.
  int equations_certified() const {
    auto zero = [this](const std::string& n) {
      for (const auto& r : residuals) {
        if (r.name == n) return r.poly.is_zero();
      }
      return false;
    };
    return (zero("count_y0") && zero("count_y1") ? 1 : 0) + (zero("size") ? 1 : 0) + (zero("weight_y0") ? 1 : 0) +
           (zero("weight_y1") ? 1 : 0);
  }

  static constexpr int equation_count = 4;
};

inline FamilyCertificate verify_family_symbolic() {
  const auto images = family_polynomials();
  const VariableSet& target = images.at("k").variables();
  FamilyCertificate cert;
  for (const auto& [name, residual] : system_residuals()) {
    cert.residuals.push_back({name, residual.substitute(images, target)});
  }
  return cert;
}

struct FamilySweep {
  std::int64_t bound = 0;
  std::int64_t total = 0;
  std::int64_t passed = 0;
  /// (s, k, u) triples whose instance failed verification.
  std::vector<std::array<std::int64_t, 3>> failures;
};

/// Verifies family(s, k, u) for every s, k, u in [1, bound].
inline FamilySweep sweep_family(std::int64_t bound) {
  if (bound < 1) {
    throw std::invalid_argument("sweep_family: bound must be >= 1");
  }
  FamilySweep out;
  out.bound = bound;
  for (std::int64_t s = 1; s <= bound; ++s) {
    for (std::int64_t k = 1; k <= bound; ++k) {
      for (std::int64_t u = 1; u <= bound; ++u) {
        ++out.total;
        if (verify_instance(family(s, k, u)).ok) {
          ++out.passed;
        } else {
          out.failures.push_back({s, k, u});
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bounded enumeration

enum class System { unital, corrected };

inline std::string to_string(System s) { return s == System::unital ? "unital" : "corrected"; }

struct Range {
  Int lo;
  Int hi;

  bool contains(const Int& v) const { return lo <= v && v <= hi; }
  Int width() const { return hi < lo ? Int(0) : Int(hi - lo + 1); }
};

/// Inclusive ranges. k, l, m, s drive the search grid; the rest only filter.
struct SearchBounds {
  Range k{1, 1};
  Range l{1, 1};
  Range m{1, 1};
  Range s{0, 0};
  std::optional<Range> p, r, q, a0, a1, b0, b1;

  /// Refuse searches whose estimated work exceeds this.
  Int work_limit = 200'000'000;
};

class WorkLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void validate(const SearchBounds& b) {
  auto check = [](const char* name, const Range& r, int min_lo) {
    if (r.lo < min_lo) {
      throw std::invalid_argument(std::string("bounds: ") + name + " lower bound must be >= " + std::to_string(min_lo));
    }
    if (r.hi < r.lo) {
      throw std::invalid_argument(std::string("bounds: ") + name + " has an empty range");
    }
  };
  check("k", b.k, 1);
  check("l", b.l, 1);
  check("m", b.m, 1);
  check("s", b.s, 0);
  const std::pair<const char*, const std::optional<Range>*> derived[] = {
      {"p", &b.p}, {"r", &b.r}, {"q", &b.q}, {"a0", &b.a0}, {"a1", &b.a1}, {"b0", &b.b0}, {"b1", &b.b1}};
  for (const auto& [name, r] : derived) {
    if (*r) check(name, **r, 0);
  }
}

inline bool within(const std::optional<Range>& r, const Int& v) { return !r || r->contains(v); }

struct GridPoint {
  Int k, l, s, m;
};

inline std::vector<GridPoint> grid_of(const SearchBounds& b) {
  std::vector<GridPoint> grid;
  for (Int k = b.k.lo; k <= b.k.hi; ++k)
    for (Int l = b.l.lo; l <= b.l.hi; ++l)
      for (Int s = b.s.lo; s <= b.s.hi; ++s)
        for (Int m = b.m.lo; m <= b.m.hi; ++m) grid.push_back({k, l, s, m});
  return grid;
}

}  // namespace detail

/// Estimated number of inner iterations for a search.
inline Int estimated_work(System system, const SearchBounds& b) {
  Int grid = b.k.width() * b.l.width() * b.s.width() * b.m.width();
  if (system == System::corrected) {
    grid *= b.m.hi + 1;
  }
  return grid;
}

inline void check_work(System system, const SearchBounds& b) {
  detail::validate(b);
  const Int work = estimated_work(system, b);
  if (work > b.work_limit) {
    throw WorkLimitExceeded("enumeration refused: estimated work " + work.str() + " exceeds limit " +
                            b.work_limit.str());
  }
}

/// All unital solutions within the bounds, sorted canonically. At most one
/// solution exists per (k, l, s, m): p is forced by the size equation and the
/// counts by the two weight equations.
inline std::vector<UnitalInstance> enumerate_unital(const SearchBounds& b, std::size_t workers = default_workers()) {
  check_work(System::unital, b);
  const auto grid = detail::grid_of(b);
  auto out = parallel_collect<UnitalInstance>(grid.size(), workers, [&](std::size_t i, auto& sink) {
    const auto& [k, l, s, m] = grid[i];
    if ((m * (l + 1)) % (k + 1) != 0) return;
    const Int p = m * (l + 1) / (k + 1);
    const Int slack = m - s * (k + 1);
    if (slack < 0) return;
    const Int A = p - s * l;
    const Int B = p - s * (l + 1);
    if (A < 0 || B < 0) return;
    const Int a1 = slack * l - k * A;
    const Int a0 = A - a1;
    const Int b1 = slack * (l + 1) - k * B;
    const Int b0 = B - b1;
    if (a0 < 0 || a1 < 0 || b0 < 0 || b1 < 0) return;
    if (!detail::within(b.p, p) || !detail::within(b.a0, a0) || !detail::within(b.a1, a1) ||
        !detail::within(b.b0, b0) || !detail::within(b.b1, b1) || !detail::within(b.r, 0) ||
        !detail::within(b.q, 0)) {
      return;
    }
    UnitalInstance x{k, l, m, p, s, a0, a1, b0, b1};
    if (b0 != 0 || a0 != m) {
      throw std::logic_error("unital solution violates b0 = 0, a0 = m: k=" + k.str() + " l=" + l.str() +
                             " m=" + m.str() + " s=" + s.str());
    }
    sink.push_back(std::move(x));
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// All corrected solutions within the bounds, sorted canonically. For each
/// (k, l, s, m, q) the admissible p form an interval cut out by the sign
/// conditions on a0, a1, b0, b1 and r.
inline std::vector<CorrectedInstance> enumerate_corrected(const SearchBounds& b,
                                                          std::size_t workers = default_workers()) {
  check_work(System::corrected, b);
  const auto grid = detail::grid_of(b);
  auto out = parallel_collect<CorrectedInstance>(grid.size(), workers, [&](std::size_t i, auto& sink) {
    const auto& [k, l, s, m] = grid[i];
    const Int total = m * (l + 1);
    const Int free_slack = m - s * (k + 1);
    if (free_slack < 0) return;
    Int q_lo = b.q ? max(b.q->lo, Int(0)) : Int(0);
    Int q_hi = b.q ? min(b.q->hi, free_slack) : free_slack;
    for (Int q = q_lo; q <= q_hi; ++q) {
      const Int T = free_slack - q;
      Int p_lo = max(Int(1), s * l + ceil_div(T * l, k + 1));
      p_lo = max(p_lo, s * (l + 1) + ceil_div(T * (l + 1), k + 1));
      Int p_hi = floor_div(total, k + 1);
      p_hi = min(p_hi, s * l + floor_div(T * l, k));
      p_hi = min(p_hi, s * (l + 1) + floor_div(T * (l + 1), k));
      if (b.p) {
        p_lo = max(p_lo, b.p->lo);
        p_hi = min(p_hi, b.p->hi);
      }
      if (b.r) {
        p_lo = max(p_lo, ceil_div(total - b.r->hi, k + 1));
        p_hi = min(p_hi, floor_div(total - b.r->lo, k + 1));
      }
      for (Int p = p_lo; p <= p_hi; ++p) {
        const Int r = total - p * (k + 1);
        const Int A = p - s * l;
        const Int B = p - s * (l + 1);
        const Int a1 = T * l - k * A;
        const Int a0 = A - a1;
        const Int b1 = T * (l + 1) - k * B;
        const Int b0 = B - b1;
        if (!detail::within(b.a0, a0) || !detail::within(b.a1, a1) || !detail::within(b.b0, b0) ||
            !detail::within(b.b1, b1)) {
          continue;
        }
        sink.push_back(CorrectedInstance{k, l, m, p, r, s, q, a0, a1, b0, b1});
      }
    }
  });
  std::sort(out.begin(), out.end());
  return out;
}

using EnumerationResult = std::variant<std::vector<UnitalInstance>, std::vector<CorrectedInstance>>;

inline EnumerationResult enumerate(System system, const SearchBounds& b, std::size_t workers = default_workers()) {
  if (system == System::unital) return enumerate_unital(b, workers);
  return enumerate_corrected(b, workers);
}

}  // namespace razak_forge
