#pragma once

// Parameter tuples for diagonal connecting maps between Razak blocks and the
// admissibility equations they must satisfy.
//
// Symbols: source block parameter k, target block parameter l, multiplicity m,
// eigenmap count p, zero-block size r, free-point count s, slack q, and the
// endpoint counts a0, a1 (images of y0 at x0, x1) and b0, b1 (images of y1).
//
//   count_y0:  p = a0 + a1 + s*l
//   count_y1:  p = b0 + b1 + s*(l+1)
//   size:      p*(k+1) + r = m*(l+1)
//   weight_y0: k*a0 + (k+1)*a1 = (m - s*(k+1) - q) * l
//   weight_y1: k*b0 + (k+1)*b1 = (m - s*(k+1) - q) * (l+1)
//
// The unital system is the case r = q = 0.

#include "razak_forge/arith.hpp"
#include "razak_forge/poly.hpp"

#include <string>
#include <tuple>
#include <vector>

namespace razak_forge {

struct CorrectedInstance {
  Int k, l, m, p, r, s, q, a0, a1, b0, b1;

  auto key() const { return std::tie(k, l, m, s, a0, a1, b0, b1, p, r, q); }
  friend bool operator==(const CorrectedInstance& a, const CorrectedInstance& b) { return a.key() == b.key(); }
  friend bool operator<(const CorrectedInstance& a, const CorrectedInstance& b) { return a.key() < b.key(); }
};

struct UnitalInstance {
  Int k, l, m, p, s, a0, a1, b0, b1;

  auto key() const { return std::tie(k, l, m, s, a0, a1, b0, b1, p); }
  friend bool operator==(const UnitalInstance& a, const UnitalInstance& b) { return a.key() == b.key(); }
  friend bool operator<(const UnitalInstance& a, const UnitalInstance& b) { return a.key() < b.key(); }

  CorrectedInstance as_corrected() const { return {k, l, m, p, Int(0), s, Int(0), a0, a1, b0, b1}; }
};

/// One failed equation (or sign constraint) with both sides evaluated.
struct EquationFailure {
  std::string equation;
  Int lhs;
  Int rhs;

  friend bool operator==(const EquationFailure&, const EquationFailure&) = default;
};

struct Verdict {
  bool ok = true;
  std::vector<EquationFailure> failures;
};

inline const std::vector<std::string>& equation_names() {
  static const std::vector<std::string> names{"count_y0", "count_y1", "size", "weight_y0", "weight_y1"};
  return names;
}

/// Checks the five equations directly, plus nonnegativity of every field and
/// positivity of k and l.
inline Verdict verify_instance(const CorrectedInstance& x) {
  Verdict v;
  auto expect = [&v](const char* name, const Int& lhs, const Int& rhs) {
    if (lhs != rhs) {
      v.ok = false;
      v.failures.push_back({name, lhs, rhs});
    }
  };
  auto at_least = [&v](const char* name, const Int& value, int bound) {
    if (value < bound) {
      v.ok = false;
      v.failures.push_back({std::string(name) + ">=" + std::to_string(bound), value, Int(bound)});
    }
  };
  at_least("k", x.k, 1);
  at_least("l", x.l, 1);
  at_least("m", x.m, 1);
  at_least("p", x.p, 1);
  at_least("r", x.r, 0);
  at_least("s", x.s, 0);
  at_least("q", x.q, 0);
  at_least("a0", x.a0, 0);
  at_least("a1", x.a1, 0);
  at_least("b0", x.b0, 0);
  at_least("b1", x.b1, 0);

  const Int slack = x.m - x.s * (x.k + 1) - x.q;
  expect("count_y0", x.p, x.a0 + x.a1 + x.s * x.l);
  expect("count_y1", x.p, x.b0 + x.b1 + x.s * (x.l + 1));
  expect("size", x.p * (x.k + 1) + x.r, x.m * (x.l + 1));
  expect("weight_y0", x.k * x.a0 + (x.k + 1) * x.a1, slack * x.l);
  expect("weight_y1", x.k * x.b0 + (x.k + 1) * x.b1, slack * (x.l + 1));
  return v;
}

inline Verdict verify_instance(const UnitalInstance& x) { return verify_instance(x.as_corrected()); }

/// Variables of the symbolic system, in canonical (sorted) order.
inline const VariableSet& system_variables() {
  static const VariableSet vars{"a0", "a1", "b0", "b1", "k", "l", "m", "p", "q", "r", "s"};
  return vars;
}

struct NamedPoly {
  std::string name;
  MultiPoly poly;
};

/// Residual polynomials lhs - rhs of the five equations, in equation_names() order.
inline std::vector<NamedPoly> system_residuals() {
  const auto& V = system_variables();
  auto v = [&V](const char* n) { return MultiPoly::variable(V, n); };
  const MultiPoly a0 = v("a0"), a1 = v("a1"), b0 = v("b0"), b1 = v("b1");
  const MultiPoly k = v("k"), l = v("l"), m = v("m"), p = v("p"), q = v("q"), r = v("r"), s = v("s");
  const MultiPoly one = MultiPoly::constant(V, 1);
  const MultiPoly slack = m - s * (k + one) - q;
  return {
      {"count_y0", p - (a0 + a1 + s * l)},
      {"count_y1", p - (b0 + b1 + s * (l + one))},
      {"size", p * (k + one) + r - m * (l + one)},
      {"weight_y0", k * a0 + (k + one) * a1 - slack * l},
      {"weight_y1", k * b0 + (k + one) * b1 - slack * (l + one)},
  };
}

}  // namespace razak_forge
