#pragma once

// Sparse multivariate polynomials with exact coefficients, stored in a
// canonical form so that equality of stored terms is equality of polynomials.

#include "razak_forge/arith.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace razak_forge {

/// Ordered variable names. Names are sorted lexicographically and unique, so
/// two sets built from the same names in any order compare equal.
class VariableSet {
 public:
  VariableSet(std::initializer_list<std::string> names) : VariableSet(std::vector<std::string>(names)) {}

  explicit VariableSet(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
      throw std::invalid_argument("VariableSet: duplicate variable name");
    }
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
  }

  std::size_t size() const { return names_->size(); }
  const std::vector<std::string>& names() const { return *names_; }

  std::size_t index_of(const std::string& name) const {
    const auto it = std::lower_bound(names_->begin(), names_->end(), name);
    if (it == names_->end() || *it != name) {
      throw std::invalid_argument("unknown variable '" + name + "'");
    }
    return static_cast<std::size_t>(it - names_->begin());
  }

  bool contains(const std::string& name) const {
    return std::binary_search(names_->begin(), names_->end(), name);
  }

  friend bool operator==(const VariableSet& a, const VariableSet& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

enum class PolyOp { add, sub, mul };

template <class Coeff>
class BasicMultiPoly {
 public:
  using Exponents = std::vector<std::uint32_t>;
  using Terms = std::map<Exponents, Coeff>;

  explicit BasicMultiPoly(VariableSet vars) : vars_(std::move(vars)) {}

  static BasicMultiPoly constant(const VariableSet& vars, const Coeff& c) {
    BasicMultiPoly out(vars);
    out.add_term(Exponents(vars.size(), 0), c);
    return out;
  }

  static BasicMultiPoly variable(const VariableSet& vars, const std::string& name) {
    BasicMultiPoly out(vars);
    Exponents e(vars.size(), 0);
    e[vars.index_of(name)] = 1;
    out.add_term(std::move(e), Coeff(1));
    return out;
  }

  const VariableSet& variables() const { return vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Highest total degree; -1 for the zero polynomial.
  int total_degree() const {
    int best = -1;
    for (const auto& [e, c] : terms_) {
      int d = 0;
      for (auto x : e) d += static_cast<int>(x);
      best = std::max(best, d);
    }
    return best;
  }

  BasicMultiPoly operator-() const {
    BasicMultiPoly out = *this;
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
  }

  BasicMultiPoly& operator+=(const BasicMultiPoly& rhs) {
    require_same_vars(rhs);
    for (const auto& [e, c] : rhs.terms_) add_term(e, c);
    return *this;
  }

  BasicMultiPoly& operator-=(const BasicMultiPoly& rhs) {
    require_same_vars(rhs);
    for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
    return *this;
  }

  BasicMultiPoly& operator*=(const BasicMultiPoly& rhs) {
    *this = *this * rhs;
    return *this;
  }

  friend BasicMultiPoly operator+(BasicMultiPoly a, const BasicMultiPoly& b) { return a += b; }
  friend BasicMultiPoly operator-(BasicMultiPoly a, const BasicMultiPoly& b) { return a -= b; }

  friend BasicMultiPoly operator*(const BasicMultiPoly& a, const BasicMultiPoly& b) {
    a.require_same_vars(b);
    BasicMultiPoly out(a.vars_);
    Exponents e(a.vars_.size());
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }

  friend BasicMultiPoly operator+(BasicMultiPoly a, const Coeff& c) { return a += constant(a.vars_, c); }
  friend BasicMultiPoly operator+(const Coeff& c, BasicMultiPoly a) { return a += constant(a.vars_, c); }
  friend BasicMultiPoly operator-(BasicMultiPoly a, const Coeff& c) { return a -= constant(a.vars_, c); }
  friend BasicMultiPoly operator-(const Coeff& c, const BasicMultiPoly& a) { return constant(a.vars_, c) - a; }
  friend BasicMultiPoly operator*(const Coeff& c, const BasicMultiPoly& a) { return constant(a.vars_, c) * a; }
  friend BasicMultiPoly operator*(const BasicMultiPoly& a, const Coeff& c) { return constant(a.vars_, c) * a; }

  friend bool operator==(const BasicMultiPoly& a, const BasicMultiPoly& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  /// Evaluates at an assignment covering every variable that occurs in a term.
  template <class Assignment>
  Coeff eval(const Assignment& assignment) const {
    std::vector<std::optional<Coeff>> values(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      const auto it = assignment.find(vars_.names()[i]);
      if (it != assignment.end()) values[i] = Coeff(it->second);
    }
    Coeff total(0);
    for (const auto& [e, c] : terms_) {
      Coeff term = c;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!values[i]) {
          throw std::invalid_argument("poly eval: no binding for variable '" + vars_.names()[i] + "'");
        }
        for (std::uint32_t j = 0; j < e[i]; ++j) term *= *values[i];
      }
      total += term;
    }
    return total;
  }

  /// Replaces each variable by a polynomial over `target`. Variables missing
  /// from `images` must not occur in any term.
  template <class Images>
  BasicMultiPoly substitute(const Images& images, const VariableSet& target) const {
    std::vector<std::optional<BasicMultiPoly>> img(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      const auto it = images.find(vars_.names()[i]);
      if (it != images.end()) {
        if (!(it->second.variables() == target)) {
          throw std::invalid_argument("poly substitute: image over a different variable set");
        }
        img[i] = it->second;
      }
    }
    BasicMultiPoly out(target);
    for (const auto& [e, c] : terms_) {
      BasicMultiPoly term = constant(target, c);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!img[i]) {
          throw std::invalid_argument("poly substitute: no image for variable '" + vars_.names()[i] + "'");
        }
        for (std::uint32_t j = 0; j < e[i]; ++j) term = term * *img[i];
      }
      out += term;
    }
    return out;
  }

  /// Human-readable form, highest exponent vectors first, e.g. "k^2 + 2*k + 1".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      const bool negative = c < 0;
      const Coeff mag = negative ? Coeff(-c) : c;
      if (first) {
        if (negative) out += "-";
      } else {
        out += negative ? " - " : " + ";
      }
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += vars_.names()[i];
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      if (mono.empty()) {
        out += razak_forge::to_string(Int(mag));
      } else if (mag == 1) {
        out += mono;
      } else {
        out += razak_forge::to_string(Int(mag)) + "*" + mono;
      }
    }
    return out;
  }

 private:
  void require_same_vars(const BasicMultiPoly& other) const {
    if (!(vars_ == other.vars_)) {
      throw std::invalid_argument("poly: variable-set mismatch");
    }
  }

  void add_term(const Exponents& e, const Coeff& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  VariableSet vars_;
  Terms terms_;
};

using MultiPoly = BasicMultiPoly<Int>;

template <class Coeff>
BasicMultiPoly<Coeff> combine(const BasicMultiPoly<Coeff>& p, const BasicMultiPoly<Coeff>& q, PolyOp op) {
  switch (op) {
    case PolyOp::add:
      return p + q;
    case PolyOp::sub:
      return p - q;
    case PolyOp::mul:
      return p * q;
  }
  throw std::invalid_argument("combine: unknown op");
}

template <class Coeff>
bool is_zero(const BasicMultiPoly<Coeff>& p) {
  return p.is_zero();
}

}  // namespace razak_forge
