#pragma once

// Combinatorial model of diagonal maps between generalized Razak blocks.
//
// A block R(X, k) sits inside C(X, M_{k+1}); X contains a cube [0,1]^D whose
// all-zeros corner is x0 and all-ones corner is x1. A diagonal map is recorded
// by its eigenmaps Y -> X (only their behaviour at the marked points y0, y1
// matters here) together with the size r of the appended zero block.

#include "razak_forge/arith.hpp"
#include "razak_forge/instance.hpp"
#include "razak_forge/poly.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace razak_forge {

struct BlockParams {
  Int k;
  /// Dimension D of the cube [0,1]^D inside X.
  Int cube_dim = 1;

  Int fiber_size() const { return k + 1; }
  friend bool operator==(const BlockParams&, const BlockParams&) = default;
};

/// Image of a marked point: x0, x1, or the free point z_j (1-based j).
class EndpointImage {
 public:
  enum class Tag { x0, x1, free };

  static EndpointImage x0() { return EndpointImage(Tag::x0, 0); }
  static EndpointImage x1() { return EndpointImage(Tag::x1, 0); }
  static EndpointImage free(std::size_t j) {
    if (j == 0) throw std::invalid_argument("EndpointImage: free-point indices are 1-based");
    return EndpointImage(Tag::free, j);
  }

  Tag tag() const { return tag_; }
  std::size_t free_index() const { return index_; }
  bool is_free() const { return tag_ == Tag::free; }

  std::string to_string() const {
    switch (tag_) {
      case Tag::x0:
        return "x0";
      case Tag::x1:
        return "x1";
      case Tag::free:
        break;
    }
    return "z" + std::to_string(index_);
  }

  friend bool operator==(const EndpointImage&, const EndpointImage&) = default;

 private:
  EndpointImage(Tag t, std::size_t j) : tag_(t), index_(j) {}
  Tag tag_;
  std::size_t index_;
};

/// Coordinate projection onto block `axis` of the codomain cube, optionally
/// composed with t -> 1 - t.
struct Coord {
  std::size_t axis = 0;
  bool flipped = false;
  friend bool operator==(const Coord&, const Coord&) = default;
};

/// An eigenmap factoring through an interval; only its endpoint images are kept.
struct Path {
  EndpointImage e0;
  EndpointImage e1;
  friend bool operator==(const Path&, const Path&) = default;
};

class Eigenmap {
 public:
  Eigenmap(Coord c) : kind_(c) {}  // NOLINT(google-explicit-constructor)
  Eigenmap(Path p) : kind_(p) {}   // NOLINT(google-explicit-constructor)

  bool is_coord() const { return std::holds_alternative<Coord>(kind_); }
  const Coord& coord() const { return std::get<Coord>(kind_); }
  const Path& path() const { return std::get<Path>(kind_); }

  EndpointImage endpoint0() const {
    if (is_coord()) return coord().flipped ? EndpointImage::x1() : EndpointImage::x0();
    return path().e0;
  }
  EndpointImage endpoint1() const {
    if (is_coord()) return coord().flipped ? EndpointImage::x0() : EndpointImage::x1();
    return path().e1;
  }

  friend bool operator==(const Eigenmap&, const Eigenmap&) = default;

 private:
  std::variant<Coord, Path> kind_;
};

/// The data of D_{alpha_1..alpha_p; r} : R(X, k) -> R(Y, l) (x) M_m.
/// Size identity: m*(l+1) = p*(k+1) + r.
class EigenmapInventory {
 public:
  EigenmapInventory(BlockParams source, Int target_ell, std::size_t target_blocks, Int multiplicity,
                    std::size_t free_points, std::vector<Eigenmap> eigenmaps, Int zero_block)
      : source_(std::move(source)),
        target_ell_(std::move(target_ell)),
        target_blocks_(target_blocks),
        multiplicity_(std::move(multiplicity)),
        free_points_(free_points),
        eigenmaps_(std::move(eigenmaps)),
        zero_block_(std::move(zero_block)) {
    if (source_.k < 1 || source_.cube_dim < 1) {
      throw std::invalid_argument("inventory: source block needs k >= 1 and cube_dim >= 1");
    }
    if (target_ell_ < 1 || multiplicity_ < 1 || target_blocks_ < 1) {
      throw std::invalid_argument("inventory: target l, multiplicity and target_blocks must be >= 1");
    }
    if (eigenmaps_.empty()) {
      throw std::invalid_argument("inventory: at least one eigenmap is required");
    }
    if (zero_block_ < 0) {
      throw std::invalid_argument("inventory: zero block must be >= 0");
    }
    if (multiplicity_ * (target_ell_ + 1) != p() * source_.fiber_size() + zero_block_) {
      throw std::invalid_argument("inventory: size identity m*(l+1) = p*(k+1) + r fails");
    }
    for (const auto& e : eigenmaps_) {
      if (e.is_coord()) {
        if (e.coord().axis >= target_blocks_) {
          throw std::invalid_argument("inventory: coordinate axis out of range");
        }
      } else {
        for (const auto& end : {e.path().e0, e.path().e1}) {
          if (end.is_free() && end.free_index() > free_points_) {
            throw std::invalid_argument("inventory: free point index exceeds declared free-point count");
          }
        }
      }
    }
  }

  const BlockParams& source() const { return source_; }
  const Int& target_ell() const { return target_ell_; }
  /// Number of coordinate blocks; the codomain cube has dimension cube_dim * target_blocks.
  std::size_t target_blocks() const { return target_blocks_; }
  Int target_cube_dim() const { return source_.cube_dim * target_blocks_; }
  const Int& multiplicity() const { return multiplicity_; }
  std::size_t free_points() const { return free_points_; }
  const std::vector<Eigenmap>& eigenmaps() const { return eigenmaps_; }
  Int p() const { return Int(eigenmaps_.size()); }
  const Int& zero_block() const { return zero_block_; }

  friend bool operator==(const EigenmapInventory&, const EigenmapInventory&) = default;

 private:
  BlockParams source_;
  Int target_ell_;
  std::size_t target_blocks_;
  Int multiplicity_;
  std::size_t free_points_;
  std::vector<Eigenmap> eigenmaps_;
  Int zero_block_;
};

struct EndpointProfile {
  Int a0, a1, b0, b1;
  std::size_t s = 0;
  std::vector<Int> free_y0;
  std::vector<Int> free_y1;

  friend bool operator==(const EndpointProfile&, const EndpointProfile&) = default;
};

/// Counts of endpoint images at y0 and y1, with multiplicity.
inline EndpointProfile profile_of(const EigenmapInventory& inv) {
  EndpointProfile out;
  out.s = inv.free_points();
  out.free_y0.assign(out.s, Int(0));
  out.free_y1.assign(out.s, Int(0));
  for (const auto& e : inv.eigenmaps()) {
    const auto at0 = e.endpoint0();
    const auto at1 = e.endpoint1();
    switch (at0.tag()) {
      case EndpointImage::Tag::x0:
        ++out.a0;
        break;
      case EndpointImage::Tag::x1:
        ++out.a1;
        break;
      case EndpointImage::Tag::free:
        ++out.free_y0[at0.free_index() - 1];
        break;
    }
    switch (at1.tag()) {
      case EndpointImage::Tag::x0:
        ++out.b0;
        break;
      case EndpointImage::Tag::x1:
        ++out.b1;
        break;
      case EndpointImage::Tag::free:
        ++out.free_y1[at1.free_index() - 1];
        break;
    }
  }
  return out;
}

/// Everything the admissibility test needs besides the profile.
struct AdmissibilityContext {
  Int k, l, m, p;
};

struct AdmissibilityVerdict {
  bool admissible = false;
  std::optional<Int> q_witness;
  std::vector<EquationFailure> violations;
};

/// Admissibility of an endpoint profile: every free point is hit l times at y0
/// and l+1 times at y1, the counts add up to p at both ends, and some
/// q in [0, m - s(k+1)] satisfies both weight equations. The weight equation
/// at y0 pins q uniquely (l >= 1), so the returned witness is also the smallest.
inline AdmissibilityVerdict check_admissible(const EndpointProfile& prof, const AdmissibilityContext& ctx) {
  AdmissibilityVerdict v;
  const Int& k = ctx.k;
  const Int& l = ctx.l;
  const Int s(prof.s);
  for (std::size_t j = 0; j < prof.s; ++j) {
    const std::string label = "z" + std::to_string(j + 1);
    if (j < prof.free_y0.size() && prof.free_y0[j] != l) {
      v.violations.push_back({"free_mult_y0[" + label + "]", prof.free_y0[j], l});
    }
    if (j < prof.free_y1.size() && prof.free_y1[j] != l + 1) {
      v.violations.push_back({"free_mult_y1[" + label + "]", prof.free_y1[j], l + 1});
    }
  }
  if (prof.free_y0.size() != prof.s || prof.free_y1.size() != prof.s) {
    v.violations.push_back({"free_point_count", Int(prof.free_y0.size()), s});
  }
  if (ctx.p != prof.a0 + prof.a1 + s * l) {
    v.violations.push_back({"count_y0", ctx.p, prof.a0 + prof.a1 + s * l});
  }
  if (ctx.p != prof.b0 + prof.b1 + s * (l + 1)) {
    v.violations.push_back({"count_y1", ctx.p, prof.b0 + prof.b1 + s * (l + 1)});
  }

  const Int free_slack = ctx.m - s * (k + 1);
  const Int w0 = k * prof.a0 + (k + 1) * prof.a1;
  const Int w1 = k * prof.b0 + (k + 1) * prof.b1;
  std::optional<Int> q;
  if (w0 % l == 0) {
    const Int candidate = free_slack - w0 / l;
    if (candidate >= 0 && candidate <= free_slack) q = candidate;
  }
  if (!q) {
    Int nearest = free_slack - floor_div(w0, l);
    nearest = max(Int(0), min(nearest, max(free_slack, Int(0))));
    v.violations.push_back({"weight_y0", w0, (free_slack - nearest) * l});
  } else if (w1 != (free_slack - *q) * (l + 1)) {
    v.violations.push_back({"weight_y1", w1, (free_slack - *q) * (l + 1)});
  }
  v.admissible = v.violations.empty();
  if (v.admissible) v.q_witness = q;
  return v;
}

inline AdmissibilityVerdict check_admissible(const EigenmapInventory& inv) {
  return check_admissible(profile_of(inv),
                          {inv.source().k, inv.target_ell(), inv.multiplicity(), inv.p()});
}

/// How many coordinate-type eigenmaps a profile supports. min_based counts
/// maps that hit both marked points correctly; max_based is the permissive
/// upper count used for exploration only.
enum class CountPolicy { min_based, max_based };

struct CoordinateCounts {
  Int unflipped;
  Int flipped;
  Int total() const { return unflipped + flipped; }
};

inline CoordinateCounts coordinate_counts(const Int& a0, const Int& a1, const Int& b0, const Int& b1,
                                          CountPolicy policy = CountPolicy::min_based) {
  if (policy == CountPolicy::min_based) return {min(a0, b1), min(a1, b0)};
  return {max(a0, b1), max(a1, b0)};
}

/// Largest inventory synthesize_inventory will materialize.
inline constexpr std::size_t kMaxMaterializedEigenmaps = 50'000'000;

/// Realizes a verified instance as an explicit inventory: min(a0, b1) unflipped
/// and min(a1, b0) flipped coordinate maps on distinct axes, then Path maps
/// matching the leftover endpoint demands. Path demands are paired greedily,
/// largest remaining demand first on each side, ties to the lower index
/// (order x0, x1, z1, ..., zs).
inline EigenmapInventory synthesize_inventory(const CorrectedInstance& inst, const Int& source_cube_dim = 1) {
  const Verdict ok = verify_instance(inst);
  if (!ok.ok) {
    throw std::invalid_argument("synthesize_inventory: instance fails verification (" + ok.failures.front().equation +
                                ")");
  }
  if (inst.p > Int(kMaxMaterializedEigenmaps) || inst.s > Int(kMaxMaterializedEigenmaps)) {
    throw std::invalid_argument("synthesize_inventory: instance too large to materialize");
  }
  const auto coords = coordinate_counts(inst.a0, inst.a1, inst.b0, inst.b1);
  const auto unflipped = static_cast<std::size_t>(coords.unflipped);
  const auto flipped = static_cast<std::size_t>(coords.flipped);
  const auto s = static_cast<std::size_t>(inst.s);

  std::vector<Eigenmap> maps;
  maps.reserve(static_cast<std::size_t>(inst.p));
  std::size_t axis = 0;
  for (std::size_t i = 0; i < unflipped; ++i) maps.emplace_back(Coord{axis++, false});
  for (std::size_t i = 0; i < flipped; ++i) maps.emplace_back(Coord{axis++, true});

  // Node order: x0, x1, z1..zs.
  auto node = [](std::size_t i) {
    if (i == 0) return EndpointImage::x0();
    if (i == 1) return EndpointImage::x1();
    return EndpointImage::free(i - 1);
  };
  std::vector<Int> left{inst.a0 - coords.unflipped, inst.a1 - coords.flipped};
  std::vector<Int> right{inst.b0 - coords.flipped, inst.b1 - coords.unflipped};
  for (std::size_t j = 0; j < s; ++j) {
    left.push_back(inst.l);
    right.push_back(inst.l + 1);
  }
  Int left_total = 0, right_total = 0;
  for (const auto& d : left) left_total += d;
  for (const auto& d : right) right_total += d;
  if (left_total != right_total || left_total != inst.p - coords.total()) {
    throw std::logic_error("synthesize_inventory: endpoint demands are not realizable");
  }

  auto largest = [](const std::vector<Int>& d) {
    return static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
  };
  while (left_total > 0) {
    const std::size_t i = largest(left);
    const std::size_t j = largest(right);
    const Int n = min(left[i], right[j]);
    for (Int t = 0; t < n; ++t) maps.emplace_back(Path{node(i), node(j)});
    left[i] -= n;
    right[j] -= n;
    left_total -= n;
  }

  return EigenmapInventory(BlockParams{inst.k, source_cube_dim}, inst.l, std::max<std::size_t>(1, axis), inst.m, s,
                           std::move(maps), inst.r);
}

// ---------------------------------------------------------------------------
// Composition

/// Count-level summary of a diagonal map, enough to compose without
/// materializing eigenmaps.
struct MapCounts {
  Int p, r, m;
  Int unflipped, flipped;
  Int a0, a1, b0, b1;

  friend bool operator==(const MapCounts&, const MapCounts&) = default;
};

inline MapCounts counts_of(const EigenmapInventory& inv) {
  const auto prof = profile_of(inv);
  MapCounts c{inv.p(), inv.zero_block(), inv.multiplicity(), 0, 0, prof.a0, prof.a1, prof.b0, prof.b1};
  for (const auto& e : inv.eigenmaps()) {
    if (!e.is_coord()) continue;
    if (e.coord().flipped) {
      ++c.flipped;
    } else {
      ++c.unflipped;
    }
  }
  return c;
}

/// Counts of outer o inner. Flip parity: two flips make an unflipped map.
/// Endpoints: y0 of the outer map lands at y0 (a0_o times) or y1 (a1_o times)
/// of the inner domain, and is then carried by the inner endpoint data.
inline MapCounts compose_counts(const MapCounts& outer, const MapCounts& inner) {
  MapCounts c;
  c.p = outer.p * inner.p;
  c.r = outer.p * inner.r + outer.r * inner.m;
  c.m = outer.m * inner.m;
  c.unflipped = outer.unflipped * inner.unflipped + outer.flipped * inner.flipped;
  c.flipped = outer.unflipped * inner.flipped + outer.flipped * inner.unflipped;
  c.a0 = outer.a0 * inner.a0 + outer.a1 * inner.b0;
  c.a1 = outer.a0 * inner.a1 + outer.a1 * inner.b1;
  c.b0 = outer.b0 * inner.a0 + outer.b1 * inner.b0;
  c.b1 = outer.b0 * inner.a1 + outer.b1 * inner.b1;
  return c;
}

/// Composite diagonal map outer o inner. Eigenmaps are inner_i o outer_j,
/// listed outer-major. A composite sends a marked point to x0/x1 only through
/// marked points of the middle space; where an outer map lands on a free point
/// w of the middle space, the composite endpoint is the fresh free point
/// labelled s_inner + i*s_outer + w.
inline EigenmapInventory compose(const EigenmapInventory& outer, const EigenmapInventory& inner) {
  if (inner.target_ell() != outer.source().k) {
    throw std::invalid_argument("compose: inner target l must equal outer source k");
  }
  if (outer.source().cube_dim != inner.target_cube_dim()) {
    throw std::invalid_argument("compose: outer source cube dimension must equal inner target cube dimension");
  }
  const std::size_t s_in = inner.free_points();
  const std::size_t s_out = outer.free_points();
  const std::size_t blocks_in = inner.target_blocks();
  const auto& alphas = inner.eigenmaps();

  auto carry = [&](std::size_t i, const EndpointImage& middle) {
    switch (middle.tag()) {
      case EndpointImage::Tag::x0:
        return alphas[i].endpoint0();
      case EndpointImage::Tag::x1:
        return alphas[i].endpoint1();
      case EndpointImage::Tag::free:
        break;
    }
    return EndpointImage::free(s_in + i * s_out + middle.free_index());
  };

  std::vector<Eigenmap> maps;
  maps.reserve(outer.eigenmaps().size() * alphas.size());
  for (const auto& beta : outer.eigenmaps()) {
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const auto& alpha = alphas[i];
      if (alpha.is_coord() && beta.is_coord()) {
        maps.emplace_back(Coord{beta.coord().axis * blocks_in + alpha.coord().axis,
                                alpha.coord().flipped != beta.coord().flipped});
      } else {
        maps.emplace_back(Path{carry(i, beta.endpoint0()), carry(i, beta.endpoint1())});
      }
    }
  }
  return EigenmapInventory(inner.source(), outer.target_ell(), blocks_in * outer.target_blocks(),
                           inner.multiplicity() * outer.multiplicity(), s_in + alphas.size() * s_out, std::move(maps),
                           outer.p() * inner.zero_block() + outer.zero_block() * inner.multiplicity());
}

// ---------------------------------------------------------------------------
// Obstruction for unital maps

/// target - sum(multiplier_i * residual_i) == 0 identically, so the residuals
/// vanishing forces target == 0.
struct ObstructionIdentity {
  std::string conclusion;
  MultiPoly target;
  std::vector<std::pair<std::string, MultiPoly>> combination;
  MultiPoly remainder;
  /// The same fact written as one explicit expression.
  MultiPoly expanded;

  bool certified() const { return remainder.is_zero() && expanded.is_zero(); }
};

struct ObstructionCertificate {
  ObstructionIdentity b0_vanishes;
  ObstructionIdentity a0_equals_m;

  bool certified() const { return b0_vanishes.certified() && a0_equals_m.certified(); }
};

/// For unital maps (r = q = 0) the equations force b0 = 0 and a0 = m.
inline ObstructionCertificate derive_unital_obstruction() {
  const auto& V = system_variables();
  auto v = [&V](const char* n) { return MultiPoly::variable(V, n); };
  const MultiPoly zero(V);
  const MultiPoly one = MultiPoly::constant(V, 1);

  std::map<std::string, MultiPoly> unital;
  for (const auto& name : V.names()) unital.emplace(name, v(name.c_str()));
  unital.insert_or_assign("q", zero);
  unital.insert_or_assign("r", zero);

  std::map<std::string, MultiPoly> res;
  for (const auto& [name, poly] : system_residuals()) res.emplace(name, poly.substitute(unital, V));

  const MultiPoly a0 = v("a0"), a1 = v("a1"), b0 = v("b0"), b1 = v("b1");
  const MultiPoly k = v("k"), l = v("l"), m = v("m"), s = v("s");

  auto build = [&](std::string conclusion, MultiPoly target, const char* count, const char* weight,
                   MultiPoly expanded) {
    ObstructionIdentity id{std::move(conclusion), target, {}, zero, std::move(expanded)};
    id.combination = {{"size", one}, {count, -(k + one)}, {weight, -one}};
    MultiPoly sum(V);
    for (const auto& [name, mult] : id.combination) sum += mult * res.at(name);
    id.remainder = target - sum;
    return id;
  };

  ObstructionCertificate cert{
      build("b0 = 0", b0, "count_y1", "weight_y1",
            (b0 + b1 + s * (l + one)) * (k + one) - (k * b0 + (k + one) * b1) - s * (k + one) * (l + one) - b0),
      build("a0 = m", a0 - m, "count_y0", "weight_y0",
            (a0 + a1 + s * l) * (k + one) - (k * a0 + (k + one) * a1) - s * l * (k + one) - a0),
  };
  return cert;
}

}  // namespace razak_forge
