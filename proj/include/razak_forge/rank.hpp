#pragma once

// Rank functions of positive elements sampled on a cube lattice, pushed through
// diagonal maps. Comparing ranks pointwise gives the necessary side of Cuntz
// comparison only.

#include "razak_forge/arith.hpp"
#include "razak_forge/blocks.hpp"
#include "razak_forge/tower.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace razak_forge {

/// Lattice {0, 1/(g-1), ..., 1}^dim. Odd g keeps t -> 1 - t on the lattice.
class Grid {
 public:
  static constexpr std::size_t kMaxPoints = 20'000'000;

  Grid(std::size_t dim, std::size_t resolution) : dim_(dim), resolution_(resolution) {
    if (dim_ < 1) throw std::invalid_argument("grid: dimension must be >= 1");
    if (resolution_ < 3 || resolution_ % 2 == 0) {
      throw std::invalid_argument("grid: resolution must be odd and >= 3 so that t -> 1 - t is exact");
    }
    points_ = 1;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (points_ > kMaxPoints / resolution_) throw std::invalid_argument("grid: too many points");
      points_ *= resolution_;
    }
  }

  std::size_t dim() const { return dim_; }
  std::size_t resolution() const { return resolution_; }
  std::size_t size() const { return points_; }

  /// Row-major: the last coordinate varies fastest.
  std::size_t index_of(const std::vector<std::size_t>& coords) const {
    if (coords.size() != dim_) throw std::invalid_argument("grid: point has wrong dimension");
    std::size_t idx = 0;
    for (auto c : coords) {
      if (c >= resolution_) throw std::invalid_argument("grid: coordinate out of range");
      idx = idx * resolution_ + c;
    }
    return idx;
  }

  std::vector<std::size_t> coords_of(std::size_t idx) const {
    std::vector<std::size_t> c(dim_);
    for (std::size_t i = dim_; i-- > 0;) {
      c[i] = idx % resolution_;
      idx /= resolution_;
    }
    return c;
  }

  std::size_t origin() const { return 0; }
  std::size_t far_corner() const { return points_ - 1; }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t dim_;
  std::size_t resolution_;
  std::size_t points_ = 1;
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("rank value overflow");
  return out;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("rank value overflow");
  return out;
}

}  // namespace detail

class RankFunction {
 public:
  RankFunction(Grid grid, std::vector<std::uint64_t> values, std::uint64_t fiber_bound)
      : grid_(grid), values_(std::move(values)), fiber_bound_(fiber_bound) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("rank function: value count does not match grid");
    for (auto v : values_) {
      if (v > fiber_bound_) throw std::invalid_argument("rank function: value exceeds fiber bound");
    }
  }

  static RankFunction constant(const Grid& grid, std::uint64_t value, std::uint64_t fiber_bound) {
    return RankFunction(grid, std::vector<std::uint64_t>(grid.size(), value), fiber_bound);
  }

  const Grid& grid() const { return grid_; }
  const std::vector<std::uint64_t>& values() const { return values_; }
  std::uint64_t fiber_bound() const { return fiber_bound_; }
  std::uint64_t operator[](std::size_t idx) const { return values_.at(idx); }
  std::uint64_t at(const std::vector<std::size_t>& coords) const { return values_[grid_.index_of(coords)]; }

  friend RankFunction operator+(const RankFunction& a, const RankFunction& b) {
    if (!(a.grid_ == b.grid_)) throw std::invalid_argument("rank function sum: grid mismatch");
    std::vector<std::uint64_t> v(a.values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = detail::checked_add(a.values_[i], b.values_[i]);
    return RankFunction(a.grid_, std::move(v), detail::checked_add(a.fiber_bound_, b.fiber_bound_));
  }

  friend bool operator==(const RankFunction&, const RankFunction&) = default;

 private:
  Grid grid_;
  std::vector<std::uint64_t> values_;
  std::uint64_t fiber_bound_;
};

/// mult_a * a(y) <= mult_b * b(y) at every grid point.
inline bool rank_leq(const RankFunction& a, const RankFunction& b, std::pair<std::uint64_t, std::uint64_t> mult = {1, 1}) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("rank_leq: grid mismatch");
  for (std::size_t i = 0; i < a.grid().size(); ++i) {
    if (detail::checked_mul(mult.first, a[i]) > detail::checked_mul(mult.second, b[i])) return false;
  }
  return true;
}

/// Where Path eigenmaps and free points sit in the domain grid.
struct PushforwardPlan {
  /// Domain grid point for each free point z_j (index j-1).
  std::vector<std::vector<std::size_t>> free_points;
  /// Interior evaluation point for each eigenmap; only read for Path maps.
  std::vector<std::optional<std::vector<std::size_t>>> path_points;
};

/// Fiber bound of D(f) for f with fiber bound F: each copy of the domain
/// fiber (size k+1) becomes m*(l+1)/(k+1) times as large.
inline std::uint64_t pushforward_fiber_bound(std::uint64_t fiber_bound, const EigenmapInventory& inv) {
  const Int fiber = inv.source().fiber_size();
  if (Int(fiber_bound) % fiber != 0) {
    throw std::invalid_argument("pushforward: fiber bound must be a multiple of k+1");
  }
  const Int bound = Int(fiber_bound) / fiber * inv.multiplicity() * (inv.target_ell() + 1);
  const auto narrow = to_int64(bound);
  if (!narrow) throw std::overflow_error("pushforward: fiber bound overflow");
  return static_cast<std::uint64_t>(*narrow);
}

/// Rank of D(f) at y: sum over eigenmaps of f(alpha(y)); the zero block adds 0.
/// Coordinate maps read their block of y (flipped: c -> g-1-c on every axis).
/// Path maps read the designated point of their endpoint image at y0 and y1
/// and their interior point elsewhere.
inline RankFunction pushforward(const RankFunction& f, const EigenmapInventory& inv, const PushforwardPlan& plan) {
  const Grid& dom = f.grid();
  if (Int(dom.dim()) != inv.source().cube_dim) {
    throw std::invalid_argument("pushforward: rank function grid dimension does not match the source cube");
  }
  const std::size_t D = dom.dim();
  const std::size_t g = dom.resolution();
  const Grid cod(D * inv.target_blocks(), g);
  const std::uint64_t bound = pushforward_fiber_bound(f.fiber_bound(), inv);

  if (plan.free_points.size() != inv.free_points()) {
    throw std::invalid_argument("pushforward: plan must place every free point");
  }
  std::vector<std::size_t> free_idx;
  for (const auto& pt : plan.free_points) free_idx.push_back(dom.index_of(pt));
  auto endpoint_idx = [&](const EndpointImage& e) {
    switch (e.tag()) {
      case EndpointImage::Tag::x0:
        return dom.origin();
      case EndpointImage::Tag::x1:
        return dom.far_corner();
      case EndpointImage::Tag::free:
        break;
    }
    return free_idx.at(e.free_index() - 1);
  };

  struct PathEval {
    std::size_t at_y0, at_y1, interior;
  };
  std::vector<Coord> coords;
  std::vector<PathEval> paths;
  for (std::size_t i = 0; i < inv.eigenmaps().size(); ++i) {
    const auto& e = inv.eigenmaps()[i];
    if (e.is_coord()) {
      coords.push_back(e.coord());
      continue;
    }
    if (i >= plan.path_points.size() || !plan.path_points[i]) {
      throw std::invalid_argument("pushforward: Path eigenmap " + std::to_string(i) + " has no designated point");
    }
    paths.push_back({endpoint_idx(e.path().e0), endpoint_idx(e.path().e1), dom.index_of(*plan.path_points[i])});
  }

  std::vector<std::uint64_t> out(cod.size(), 0);
  std::vector<std::size_t> y(cod.dim(), 0);
  for (std::size_t idx = 0; idx < cod.size(); ++idx) {
    std::uint64_t total = 0;
    for (const auto& c : coords) {
      std::size_t x = 0;
      for (std::size_t j = 0; j < D; ++j) {
        const std::size_t v = y[c.axis * D + j];
        x = x * g + (c.flipped ? g - 1 - v : v);
      }
      total = detail::checked_add(total, f[x]);
    }
    const bool at_y0 = idx == cod.origin();
    const bool at_y1 = idx == cod.far_corner();
    for (const auto& pe : paths) {
      total = detail::checked_add(total, f[at_y0 ? pe.at_y0 : at_y1 ? pe.at_y1 : pe.interior]);
    }
    out[idx] = total;
    for (std::size_t j = cod.dim(); j-- > 0;) {
      if (++y[j] < g) break;
      y[j] = 0;
    }
  }
  return RankFunction(cod, std::move(out), bound);
}

struct DemoReport {
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  /// (k+1) rank(a) <= k rank(b) everywhere.
  bool perforation_inequality = false;
  /// rank(a) <= n rank(b) everywhere.
  bool dominated_by_n = false;
  /// A grid point where rank(a) > n rank(b), when one exists.
  std::optional<std::size_t> domination_violation;
  std::string disclaimer;
};

inline constexpr const char* kRankDisclaimer =
    "rank comparison is necessary, not sufficient: rank(a) <= n rank(b) holding everywhere does not show "
    "[a] <= n[b]; ruling that out needs a topological obstruction this model does not compute";

/// Rank-level view of (k+1)[a] <= k[b] versus [a] <= n[b] at one tower stage.
inline DemoReport perforation_rank_demo(const Stage& stage, std::uint64_t k, std::uint64_t n, const RankFunction& a,
                                        const RankFunction& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("rank demo: witnesses live on different grids");
  if (Int(a.grid().dim()) != stage.cube_dim) {
    throw std::invalid_argument("rank demo: witness grid dimension must equal the stage cube dimension " +
                                stage.cube_dim.str());
  }
  DemoReport rep;
  rep.k = k;
  rep.n = n;
  rep.perforation_inequality = rank_leq(a, b, {detail::checked_add(k, 1), k});
  rep.dominated_by_n = true;
  for (std::size_t i = 0; i < a.grid().size(); ++i) {
    if (a[i] > detail::checked_mul(n, b[i])) {
      rep.dominated_by_n = false;
      rep.domination_violation = i;
      break;
    }
  }
  rep.disclaimer = kRankDisclaimer;
  return rep;
}

}  // namespace razak_forge
