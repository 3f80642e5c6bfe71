#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symdyn/group.hpp"
#include "symdyn/shift.hpp"
#include "symdyn/surd.hpp"

namespace symdyn {

/// A slope p/q in [0,1] in lowest terms, with the continued fraction it was
/// read from.
struct Slope {
  std::int64_t p = 0;
  std::int64_t q = 1;
  std::vector<std::int64_t> continued_fraction;

  static Slope rational(std::int64_t p, std::int64_t q);
  /// "p/q", or a decimal which is replaced by its last continued-fraction
  /// convergent with denominator ≤ max_denominator.
  static Slope parse(std::string_view text, std::int64_t max_denominator = std::int64_t{1} << 31);
  static Slope from_real(double alpha, std::int64_t max_denominator = std::int64_t{1} << 31);

  Rational value() const { return Rational(p, q); }
  std::string to_string() const { return std::to_string(p) + "/" + std::to_string(q); }
  /// ⌊α·m⌋
  std::int64_t floor_times(std::int64_t m) const;
};

using Adjacency = std::vector<std::vector<std::size_t>>;

/// Greedy maximal r-separating subset of `points` (visited in the given
/// order) for the graph metric of `graph`.
std::vector<std::size_t> greedy_rnet(const Adjacency& graph, std::span<const std::size_t> points,
                                     std::size_t r);

/// BFS distances from `source` in `graph`, truncated at `limit` (SIZE_MAX beyond).
std::vector<std::size_t> graph_distances(const Adjacency& graph, std::size_t source,
                                         std::size_t limit = SIZE_MAX);

struct ForestLevel {
  std::vector<std::size_t> centers;  // A_n, canonical order, window indices
  std::vector<std::size_t> leaf_parent;  // p_n for every window element
  Adjacency graph;                       // Γ_n on window indices (empty rows off A_n)
};

/// Covering forest on a window: nested 2-separating, 2-covering levels with
/// parent maps and quotient graphs.
class CoveringForest {
 public:
  CoveringForest(std::shared_ptr<const Window> window, std::vector<ForestLevel> levels);

  const Window& window() const { return *window_; }
  const std::shared_ptr<const Window>& window_ptr() const { return window_; }
  /// Number of levels above the leaves.
  std::size_t height() const { return levels_.size() - 1; }
  const ForestLevel& level(std::size_t n) const { return levels_.at(n); }
  const std::vector<std::size_t>& centers(std::size_t n) const { return levels_.at(n).centers; }
  bool is_center(std::size_t n, std::size_t g) const;

  /// p_{n+1}(g) for g ∈ A_n.
  std::size_t step_parent(std::size_t n, std::size_t g) const;
  /// C_n(g), leaves in canonical order.
  const std::vector<std::size_t>& cluster(std::size_t n, std::size_t g) const;
  /// Level-(n−1) centers whose parent is g ∈ A_n, canonical order.
  std::vector<std::size_t> children(std::size_t n, std::size_t g) const;

  /// Cluster radius ½(5^n − 1).
  static std::size_t cluster_radius(std::size_t n);
  /// A level-n cluster is interior when B(g, ½(5^n − 1) + 1) lies in the
  /// window, i.e. |g| + ½(5^n − 1) < R.
  bool is_interior(std::size_t n, std::size_t g) const;

 private:
  std::shared_ptr<const Window> window_;
  std::vector<ForestLevel> levels_;
  std::vector<std::vector<std::vector<std::size_t>>> clusters_;  // [n][g]
};

CoveringForest build_forest(std::shared_ptr<const Window> window, std::size_t levels);

/// Depth-first leaf order below a top-level center; children canonical.
std::vector<std::size_t> convex_enumeration(const CoveringForest& forest, std::size_t top_center);

/// w_k = ⌊(k+1)α⌋ − ⌊kα⌋ for k in [begin, end).
std::vector<std::uint8_t> sturmian(const Slope& alpha, std::int64_t begin, std::int64_t end);

/// Sturmian word along the convex enumeration of each top-level component,
/// k = 0 at the first leaf of every component.
WindowConfig fill_density(const CoveringForest& forest, const Slope& alpha);

struct ClusterCheck {
  std::size_t level = 0;
  std::size_t center = 0;  // window index
  std::size_t size = 0;
  std::int64_t floor = 0;  // ⌊α|C|⌋
  std::size_t ones = 0;
  bool interior = false;
  bool pass = false;
};

struct AggregateCheck {
  std::size_t level = 0;
  std::size_t centers = 0;  // |V|
  std::size_t leaves = 0;   // |U|
  std::size_t ones = 0;
  Rational density;
  Rational deviation;  // |dens − α|
  Rational bound;      // |V|/|U|
  bool pass = false;
};

struct Condition1Report {
  std::vector<ClusterCheck> clusters;
  std::vector<AggregateCheck> aggregates;
  std::size_t interior_failures = 0;
  std::size_t exterior_failures = 0;
  bool pass() const;
};

/// Condition (1) on every cluster of levels 1..height, plus the aggregate
/// bound over the union of interior clusters at each level.
Condition1Report verify_condition1(const WindowConfig& x, const CoveringForest& forest,
                                   const Slope& alpha);

struct ForbiddenCheck {
  bool hypothesis = false;  // 2n|∂_{K_n}F| < |F|
  bool allowed = true;
  std::size_t boundary = 0;
  std::size_t size = 0;
  Rational density;
  Rational deviation;
};

/// The X_α rule for one support: forbidden only when the boundary hypothesis
/// holds and |dens − α| > 1/n. K_n = B(1_G, 5^n).
ForbiddenCheck forbidden_check(const WindowConfig& x, std::span<const Element> F,
                               const Slope& alpha, std::size_t n);

struct DensitySample {
  std::string descriptor;
  std::size_t size = 0;
  std::size_t ones = 0;
  Rational density;
};

struct DensityReport {
  std::vector<DensitySample> samples;
  Rational max_deviation;  // against the reference slope
  std::string slope;
};

struct NamedSet {
  std::string descriptor;
  std::vector<Element> elements;
};

/// B(1_G, r) for r in [r_min, r_max].
std::vector<NamedSet> ball_sequence(const Window& window, std::size_t r_min, std::size_t r_max);

DensityReport measure_density(const WindowConfig& x, std::span<const NamedSet> sets,
                              const Slope& reference);

}  // namespace symdyn
