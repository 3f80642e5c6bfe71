#include "symdyn/density.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "symdyn/errors.hpp"

namespace symdyn {

namespace {

std::int64_t floor_div(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<std::int64_t>(q);
}

std::vector<std::int64_t> continued_fraction_of(std::int64_t p, std::int64_t q) {
  std::vector<std::int64_t> cf;
  while (q != 0) {
    cf.push_back(p / q);
    auto r = p % q;
    p = q;
    q = r;
  }
  return cf;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError("malformed slope '" + std::string(whole) + "'");
  }
  return v;
}

Rational abs_diff(const Rational& a, const Rational& b) {
  Rational d = a - b;
  if (sgn(d) < 0) d = -d;
  return d;
}

}  // namespace

Slope Slope::rational(std::int64_t p, std::int64_t q) {
  if (q <= 0 || p < 0 || p > q) {
    throw InputError("slope " + std::to_string(p) + "/" + std::to_string(q) + " outside [0,1]");
  }
  auto g = std::gcd(p, q);
  Slope s;
  s.p = p / g;
  s.q = q / g;
  s.continued_fraction = continued_fraction_of(s.p, s.q);
  return s;
}

Slope Slope::parse(std::string_view text, std::int64_t max_denominator) {
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    return rational(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  }
  double value = 0;
  try {
    std::size_t used = 0;
    value = std::stod(std::string(text), &used);
    if (used != text.size()) throw InputError("");
  } catch (const std::exception&) {
    throw InputError("malformed slope '" + std::string(text) + "'");
  }
  return from_real(value, max_denominator);
}

Slope Slope::from_real(double alpha, std::int64_t max_denominator) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("slope outside [0,1]");
  // Convergents h/k of the continued fraction of alpha.
  std::int64_t h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  std::vector<std::int64_t> cf;
  double x = alpha;
  for (int iter = 0; iter < 64; ++iter) {
    double a_real = std::floor(x);
    if (a_real > 4e18) break;
    auto a = static_cast<std::int64_t>(a_real);
    __int128 h = static_cast<__int128>(a) * h_prev + h_prev2;
    __int128 k = static_cast<__int128>(a) * k_prev + k_prev2;
    if (k > max_denominator) break;
    cf.push_back(a);
    h_prev2 = h_prev;
    k_prev2 = k_prev;
    h_prev = static_cast<std::int64_t>(h);
    k_prev = static_cast<std::int64_t>(k);
    double frac = x - a_real;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  Slope s = rational(h_prev, k_prev);
  s.continued_fraction = std::move(cf);
  return s;
}

std::int64_t Slope::floor_times(std::int64_t m) const {
  return floor_div(static_cast<__int128>(p) * m, q);
}

std::vector<std::size_t> graph_distances(const Adjacency& graph, std::size_t source,
                                         std::size_t limit) {
  std::vector<std::size_t> dist(graph.size(), SIZE_MAX);
  std::vector<std::size_t> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto v = queue[head];
    if (dist[v] == limit) continue;
    for (auto u : graph[v]) {
      if (dist[u] != SIZE_MAX) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  return dist;
}

namespace {

// Vertices within `r` of `source`, with their distances, reusing a stamp buffer.
struct LocalBfs {
  explicit LocalBfs(std::size_t n) : stamp(n, 0), dist(n, 0) {}

  template <typename Visit>
  void run(const Adjacency& graph, std::size_t source, std::size_t r, Visit visit) {
    ++round;
    queue.assign(1, source);
    stamp[source] = round;
    dist[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      auto v = queue[head];
      visit(v, dist[v]);
      if (dist[v] == r) continue;
      for (auto u : graph[v]) {
        if (stamp[u] == round) continue;
        stamp[u] = round;
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }

  std::vector<std::size_t> stamp, dist, queue;
  std::size_t round = 0;
};

}  // namespace

std::vector<std::size_t> greedy_rnet(const Adjacency& graph, std::span<const std::size_t> points,
                                     std::size_t r) {
  std::vector<char> covered(graph.size(), 0);
  std::vector<std::size_t> net;
  LocalBfs bfs(graph.size());
  for (auto p : points) {
    if (covered[p]) continue;
    net.push_back(p);
    bfs.run(graph, p, r, [&](std::size_t v, std::size_t) { covered[v] = 1; });
  }
  return net;
}

CoveringForest::CoveringForest(std::shared_ptr<const Window> window,
                               std::vector<ForestLevel> levels)
    : window_(std::move(window)), levels_(std::move(levels)) {
  if (levels_.empty()) throw InputError("a forest needs at least the leaf level");
  const auto n = window_->size();
  clusters_.resize(levels_.size());
  for (std::size_t lv = 0; lv < levels_.size(); ++lv) {
    if (levels_[lv].leaf_parent.size() != n) throw InputError("parent map is not total");
    clusters_[lv].resize(n);
    for (auto h : window_->canonical_order()) {
      clusters_[lv][levels_[lv].leaf_parent[h]].push_back(h);
    }
  }
}

bool CoveringForest::is_center(std::size_t n, std::size_t g) const {
  return n < levels_.size() && g < window_->size() && levels_[n].leaf_parent[g] == g;
}

std::size_t CoveringForest::step_parent(std::size_t n, std::size_t g) const {
  return levels_.at(n + 1).leaf_parent[g];
}

const std::vector<std::size_t>& CoveringForest::cluster(std::size_t n, std::size_t g) const {
  return clusters_.at(n).at(g);
}

std::vector<std::size_t> CoveringForest::children(std::size_t n, std::size_t g) const {
  std::vector<std::size_t> out;
  if (n == 0) return out;
  for (auto h : levels_.at(n - 1).centers) {
    if (levels_[n].leaf_parent[h] == g) out.push_back(h);
  }
  return out;
}

std::size_t CoveringForest::cluster_radius(std::size_t n) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < n; ++i) p *= 5;
  return (p - 1) / 2;
}

bool CoveringForest::is_interior(std::size_t n, std::size_t g) const {
  return window_->depth(g) + cluster_radius(n) < window_->radius();
}

CoveringForest build_forest(std::shared_ptr<const Window> window, std::size_t levels) {
  const auto size = window->size();
  std::vector<ForestLevel> out;
  ForestLevel base;
  base.centers = window->canonical_order();
  base.leaf_parent.resize(size);
  std::iota(base.leaf_parent.begin(), base.leaf_parent.end(), std::size_t{0});
  base.graph = window->adjacency();
  out.push_back(std::move(base));

  LocalBfs bfs(size);
  for (std::size_t n = 0; n < levels; ++n) {
    const auto& cur = out.back();
    ForestLevel next;
    next.centers = greedy_rnet(cur.graph, cur.centers, 2);
    if (next.centers.empty()) {
      throw ResourceError("level " + std::to_string(n + 1) + " of the forest is empty");
    }
    std::vector<char> is_next(size, 0);
    for (auto c : next.centers) is_next[c] = 1;

    std::vector<std::size_t> step(size, SIZE_MAX);
    for (auto g : cur.centers) {
      if (is_next[g]) {
        step[g] = g;
        continue;
      }
      std::size_t at_one = SIZE_MAX, at_two = SIZE_MAX;
      bfs.run(cur.graph, g, 2, [&](std::size_t v, std::size_t d) {
        if (!is_next[v]) return;
        if (d == 1) at_one = v;
        if (d == 2 && (at_two == SIZE_MAX || window->rank(v) < window->rank(at_two))) at_two = v;
      });
      step[g] = at_one != SIZE_MAX ? at_one : at_two;
      if (step[g] == SIZE_MAX) {
        throw std::logic_error("net is not 2-covering at level " + std::to_string(n + 1));
      }
    }
    next.leaf_parent.resize(size);
    for (std::size_t h = 0; h < size; ++h) next.leaf_parent[h] = step[cur.leaf_parent[h]];

    next.graph.resize(size);
    for (std::size_t u = 0; u < size; ++u) {
      for (auto v : window->neighbors(u)) {
        auto a = next.leaf_parent[u], b = next.leaf_parent[v];
        if (a != b) next.graph[a].push_back(b);
      }
    }
    for (auto& adj : next.graph) {
      std::sort(adj.begin(), adj.end());
      adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    out.push_back(std::move(next));
  }
  return {std::move(window), std::move(out)};
}

std::vector<std::size_t> convex_enumeration(const CoveringForest& forest, std::size_t top_center) {
  const auto top = forest.height();
  if (!forest.is_center(top, top_center)) {
    throw InputError("element " + std::to_string(top_center) + " is not a top-level center");
  }
  std::vector<std::size_t> order;
  auto walk = [&](auto&& self, std::size_t n, std::size_t g) -> void {
    if (n == 0) {
      order.push_back(g);
      return;
    }
    for (auto c : forest.children(n, g)) self(self, n - 1, c);
  };
  walk(walk, top, top_center);
  return order;
}

std::vector<std::uint8_t> sturmian(const Slope& alpha, std::int64_t begin, std::int64_t end) {
  std::vector<std::uint8_t> out;
  if (end <= begin) return out;
  out.reserve(static_cast<std::size_t>(end - begin));
  auto prev = alpha.floor_times(begin);
  for (auto k = begin; k < end; ++k) {
    auto next = alpha.floor_times(k + 1);
    out.push_back(static_cast<std::uint8_t>(next - prev));
    prev = next;
  }
  return out;
}

WindowConfig fill_density(const CoveringForest& forest, const Slope& alpha) {
  const auto& window = forest.window();
  if (alpha.p == 0 || alpha.p == alpha.q) {
    return WindowConfig::constant(forest.window_ptr(), 2, alpha.p == 0 ? 0 : 1);
  }
  std::vector<Symbol> symbols(window.size(), 0);
  for (auto top : forest.centers(forest.height())) {
    auto leaves = convex_enumeration(forest, top);
    auto bits = sturmian(alpha, 0, static_cast<std::int64_t>(leaves.size()));
    for (std::size_t k = 0; k < leaves.size(); ++k) symbols[leaves[k]] = bits[k];
  }
  return {forest.window_ptr(), 2, std::move(symbols)};
}

bool Condition1Report::pass() const {
  return interior_failures == 0 &&
         std::all_of(aggregates.begin(), aggregates.end(), [](const auto& a) { return a.pass; });
}

Condition1Report verify_condition1(const WindowConfig& x, const CoveringForest& forest,
                                   const Slope& alpha) {
  const auto& window = forest.window();
  if (!(x.group() == window.group()) || x.radius() != window.radius()) {
    throw InputError("configuration window does not match the forest window");
  }
  Condition1Report report;
  const Rational a = alpha.value();
  for (std::size_t n = 1; n <= forest.height(); ++n) {
    AggregateCheck agg;
    agg.level = n;
    for (auto g : forest.centers(n)) {
      const auto& leaves = forest.cluster(n, g);
      ClusterCheck c;
      c.level = n;
      c.center = g;
      c.size = leaves.size();
      c.floor = alpha.floor_times(static_cast<std::int64_t>(c.size));
      for (auto h : leaves) c.ones += x.at(h) == 1 ? 1 : 0;
      auto ones = static_cast<std::int64_t>(c.ones);
      c.pass = c.floor <= ones && ones <= c.floor + 1;
      c.interior = forest.is_interior(n, g);
      if (!c.pass) ++(c.interior ? report.interior_failures : report.exterior_failures);
      if (c.interior) {
        ++agg.centers;
        agg.leaves += c.size;
        agg.ones += c.ones;
      }
      report.clusters.push_back(c);
    }
    if (agg.leaves > 0) {
      agg.density = Rational(static_cast<unsigned long>(agg.ones), static_cast<unsigned long>(agg.leaves));
      agg.density.canonicalize();
      agg.deviation = abs_diff(agg.density, a);
      agg.bound = Rational(static_cast<unsigned long>(agg.centers), static_cast<unsigned long>(agg.leaves));
      agg.bound.canonicalize();
      agg.pass = agg.deviation <= agg.bound;
    } else {
      agg.pass = true;
    }
    report.aggregates.push_back(std::move(agg));
  }
  return report;
}

ForbiddenCheck forbidden_check(const WindowConfig& x, std::span<const Element> F,
                               const Slope& alpha, std::size_t n) {
  if (n == 0) throw InputError("n must be positive");
  if (F.empty()) throw InputError("empty support");
  const auto& group = x.group();
  for (const auto& g : F) {
    if (!x.window().contains(g)) throw InputError("support escapes the window");
  }
  std::size_t radius = 1;
  for (std::size_t i = 0; i < n; ++i) radius *= 5;
  auto K = group.ball(group.identity(), radius);
  auto parts = interior_and_boundary(group, F, K.members);

  ForbiddenCheck out;
  out.size = F.size();
  out.boundary = parts.boundary.size();
  std::size_t ones = 0;
  for (const auto& g : F) ones += x.at(g) == 1 ? 1 : 0;
  out.density = Rational(static_cast<unsigned long>(ones), static_cast<unsigned long>(F.size()));
  out.density.canonicalize();
  out.deviation = abs_diff(out.density, alpha.value());
  out.hypothesis = 2 * n * out.boundary < out.size;
  out.allowed = !out.hypothesis || out.deviation <= Rational(1, static_cast<unsigned long>(n));
  return out;
}

std::vector<NamedSet> ball_sequence(const Window& window, std::size_t r_min, std::size_t r_max) {
  if (r_max > window.radius()) throw InputError("ball sequence escapes the window");
  std::vector<NamedSet> out;
  for (auto r = r_min; r <= r_max; ++r) {
    NamedSet s{"B(e," + std::to_string(r) + ")", {}};
    for (auto i : window.canonical_order()) {
      if (window.depth(i) > r) break;
      s.elements.push_back(window.element(i));
    }
    out.push_back(std::move(s));
  }
  return out;
}

DensityReport measure_density(const WindowConfig& x, std::span<const NamedSet> sets,
                              const Slope& reference) {
  DensityReport report;
  report.slope = reference.to_string();
  report.max_deviation = 0;
  const Rational a = reference.value();
  for (const auto& set : sets) {
    if (set.elements.empty()) throw InputError("empty set " + set.descriptor);
    DensitySample s{set.descriptor, set.elements.size(), 0, {}};
    for (const auto& g : set.elements) {
      auto idx = x.window().find(g);
      if (!idx) throw InputError("set " + set.descriptor + " escapes the window");
      s.ones += x.at(*idx) == 1 ? 1 : 0;
    }
    s.density = Rational(static_cast<unsigned long>(s.ones), static_cast<unsigned long>(s.size));
    s.density.canonicalize();
    auto dev = abs_diff(s.density, a);
    if (dev > report.max_deviation) report.max_deviation = dev;
    report.samples.push_back(std::move(s));
  }
  return report;
}

}  // namespace symdyn
