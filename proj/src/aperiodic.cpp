#include "symdyn/aperiodic.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "symdyn/errors.hpp"

namespace symdyn {

TSets build_t_sets(const GroupModel& group, std::size_t c, std::size_t i_max) {
  if (c == 0 || i_max == 0) throw InputError("C and the level count must be positive");
  BfsEnumerator order(group);
  TSets out{c, {}};
  for (std::size_t i = 1; i <= i_max; ++i) {
    try {
      Element s = order.at(i);
      TSetEntry entry{s, {}};
      std::unordered_set<Element, ElementHash> members, shifted;
      const std::size_t target = c * i;
      for (std::size_t k = 0; entry.set.size() < target; ++k) {
        Element t = order.at(k);
        Element st = group.multiply(s, t);
        if (shifted.contains(t) || members.contains(st)) continue;
        members.insert(t);
        shifted.insert(st);
        entry.set.push_back(std::move(t));
      }
      out.entries.push_back(std::move(entry));
    } catch (const ResourceError& e) {
      throw ResourceError("T-set level " + std::to_string(i) + " not completed: " + e.what());
    }
  }
  return out;
}

bool check_t_sets(const GroupModel& group, const TSets& tsets) {
  for (std::size_t i = 1; i <= tsets.levels(); ++i) {
    const auto& entry = tsets.level(i);
    if (entry.set.size() != tsets.c * i || group.is_identity(entry.shift)) return false;
    std::unordered_set<Element, ElementHash> members(entry.set.begin(), entry.set.end());
    if (members.size() != entry.set.size()) return false;
    for (const auto& t : entry.set) {
      if (members.contains(group.multiply(entry.shift, t))) return false;
    }
  }
  return true;
}

namespace {

// Window indices of gT_n followed by g s_n T_n, or nullopt if any falls outside.
std::optional<std::vector<std::size_t>> event_support(const Window& w, const Element& g,
                                                      std::span<const Element> paired) {
  std::vector<std::size_t> out;
  out.reserve(paired.size());
  for (const auto& u : paired) {
    auto idx = w.find(w.group().multiply(g, u));
    if (!idx) return std::nullopt;
    out.push_back(*idx);
  }
  return out;
}

std::vector<Element> paired_support(const GroupModel& group, const TSetEntry& entry) {
  std::vector<Element> paired = entry.set;
  for (const auto& t : entry.set) paired.push_back(group.multiply(entry.shift, t));
  return paired;
}

}  // namespace

LLLInstance build_2coloring_instance(const Window& window, const TSets& tsets, std::size_t n_max) {
  if (n_max == 0 || n_max > tsets.levels()) {
    throw InputError("requested " + std::to_string(n_max) + " levels but only " +
                     std::to_string(tsets.levels()) + " T-sets are available");
  }
  const auto& group = window.group();
  LLLInstance inst;
  inst.alphabet.assign(window.size(), 2);
  inst.variable_names.reserve(window.size());
  for (const auto& g : window.elements()) inst.variable_names.push_back(group.format(g));

  for (std::size_t n = 1; n <= n_max; ++n) {
    auto paired = paired_support(group, tsets.level(n));
    const auto exponent = static_cast<long>(tsets.c * n);
    mpz_class denominator;
    mpz_ui_pow_ui(denominator.get_mpz_t(), 2, static_cast<unsigned long>(exponent));
    Rational mu(mpz_class(1), denominator);
    QSqrt2 weight = QSqrt2::pow2_half(-exponent);
    for (auto gi : window.canonical_order()) {
      const auto& g = window.element(gi);
      auto support = event_support(window, g, paired);
      if (!support) continue;
      BadEvent e;
      e.id = inst.events.size();
      e.label = "n=" + std::to_string(n) + " g=" + group.format(g);
      e.level = static_cast<int>(n);
      e.support = std::move(*support);
      e.probability = mu;
      e.weight = weight;
      e.violated.kind = EventPredicate::Kind::halves_equal;
      inst.events.push_back(std::move(e));
    }
  }
  if (inst.events.empty()) {
    inst.warnings.push_back("no event fits the window; the instance is vacuous");
  }
  return inst;
}

DistinctNeighborhoodReport verify_distinct_neighborhood(const WindowConfig& x, const TSets& tsets,
                                                        std::size_t n_max) {
  const auto& window = x.window();
  DistinctNeighborhoodReport report;
  n_max = std::min(n_max, tsets.levels());
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto paired = paired_support(window.group(), tsets.level(n));
    const auto half = tsets.level(n).set.size();
    for (auto gi : window.canonical_order()) {
      const auto& g = window.element(gi);
      auto support = event_support(window, g, paired);
      if (!support) continue;
      ++report.pairs_checked;
      bool equal = true;
      for (std::size_t k = 0; k < half && equal; ++k) {
        equal = x.at((*support)[k]) == x.at((*support)[half + k]);
      }
      if (equal) report.violations.emplace_back(n, g);
    }
  }
  return report;
}

WindowConfig assignment_to_config(std::shared_ptr<const Window> window, Symbol alphabet,
                                  const Assignment& a) {
  return {std::move(window), alphabet, a};
}

PathWindow::PathWindow(std::size_t vertex_count,
                       std::span<const std::pair<std::size_t, std::size_t>> edges)
    : adjacency_(vertex_count) {
  for (auto [u, v] : edges) {
    if (u >= vertex_count || v >= vertex_count) throw InputError("edge endpoint out of range");
    if (u == v) throw InputError("self-loop in path window");
    if (!adjacent(u, v)) {
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

PathWindow::PathWindow(const Window& window) : adjacency_(window.adjacency()) {}

bool PathWindow::adjacent(std::size_t u, std::size_t v) const {
  const auto& adj = adjacency_[u];
  return std::find(adj.begin(), adj.end(), v) != adj.end();
}

std::size_t PathWindow::edge_count() const {
  std::size_t total = 0;
  for (const auto& adj : adjacency_) total += adj.size();
  return total / 2;
}

std::size_t for_each_odd_path(const PathWindow& w, std::size_t max_half, const PathVisitor& visit,
                              std::size_t budget) {
  const std::size_t max_vertices = 2 * max_half;
  std::vector<std::size_t> path;
  std::vector<char> on_path(w.size(), 0);
  std::size_t emitted = 0;
  bool stopped = false;

  // Explicit DFS stack of (vertex, next neighbor position).
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t start = 0; start < w.size() && !stopped; ++start) {
    path.assign(1, start);
    on_path[start] = 1;
    stack.assign(1, {start, 0});
    while (!stack.empty() && !stopped) {
      auto& [v, next] = stack.back();
      const auto& adj = w.neighbors(v);
      if (path.size() < max_vertices && next < adj.size()) {
        auto u = adj[next++];
        if (on_path[u]) continue;
        path.push_back(u);
        on_path[u] = 1;
        stack.emplace_back(u, 0);
        if (path.size() % 2 == 0 && path.front() < path.back()) {
          if (emitted >= budget) {
            throw ResourceError("odd path budget " + std::to_string(budget) +
                                " exceeded; partial count " + std::to_string(emitted));
          }
          ++emitted;
          if (!visit(path)) stopped = true;
        }
        continue;
      }
      on_path[v] = 0;
      path.pop_back();
      stack.pop_back();
    }
    for (auto v : path) on_path[v] = 0;
  }
  return emitted;
}

std::vector<std::vector<std::size_t>> enumerate_odd_paths(const PathWindow& w, std::size_t max_half,
                                                          std::size_t budget) {
  std::vector<std::vector<std::size_t>> out;
  for_each_odd_path(
      w, max_half,
      [&](std::span<const std::size_t> p) {
        out.emplace_back(p.begin(), p.end());
        return true;
      },
      budget);
  return out;
}

std::optional<std::vector<std::size_t>> find_vertex_square(std::span<const Symbol> coloring,
                                                           const PathWindow& w,
                                                           std::size_t max_half) {
  if (coloring.size() != w.size()) throw InputError("coloring is not total on the path window");
  std::optional<std::vector<std::size_t>> found;
  for_each_odd_path(w, max_half, [&](std::span<const std::size_t> p) {
    const auto n = p.size() / 2;
    for (std::size_t i = 0; i < n; ++i) {
      if (coloring[p[i]] != coloring[p[i + n]]) return true;
    }
    found.emplace(p.begin(), p.end());
    return false;
  });
  return found;
}

mpz_class squarefree_dependency_bound(std::size_t n, std::size_t j, std::size_t generator_count) {
  mpz_class base(static_cast<unsigned long>(2 * generator_count));
  mpz_class power;
  mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(2 * j));
  return mpz_class(static_cast<unsigned long>(4 * n * j)) * power;
}

LLLInstance build_squarefree_instance(const PathWindow& w, Symbol alphabet, std::size_t max_half,
                                      std::size_t generator_count, std::size_t budget) {
  if (alphabet < 2) throw InputError("square-free colorings need at least 2 colors");
  if (generator_count == 0) throw InputError("generator count must be positive");
  LLLInstance inst;
  inst.alphabet.assign(w.size(), alphabet);
  for (std::size_t v = 0; v < w.size(); ++v) inst.variable_names.push_back("v" + std::to_string(v));
  auto bound = squarefree_alphabet_bound(generator_count);
  if (mpz_class(static_cast<unsigned long>(alphabet)) < bound) {
    inst.warnings.push_back("alphabet " + std::to_string(alphabet) + " is below " +
                            bound.get_str() + " = 2^19·|S|²; the local lemma may not apply");
  }
  const mpz_class a(static_cast<unsigned long>(alphabet));
  const mpz_class base(static_cast<unsigned long>(8 * generator_count * generator_count));
  std::vector<Rational> mu, weight;
  for (std::size_t n = 0; n <= max_half; ++n) {
    mpz_class an, bn;
    mpz_pow_ui(an.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(bn.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(n));
    mu.emplace_back(mpz_class(1), an);
    weight.emplace_back(mpz_class(1), bn);
  }
  for_each_odd_path(
      w, max_half,
      [&](std::span<const std::size_t> p) {
        const auto n = p.size() / 2;
        BadEvent e;
        e.id = inst.events.size();
        e.level = static_cast<int>(n);
        e.support.assign(p.begin(), p.end());
        std::ostringstream label;
        label << "path";
        for (auto v : p) label << ' ' << v;
        e.label = label.str();
        e.probability = mu[n];
        e.weight = QSqrt2(weight[n]);
        e.violated.kind = EventPredicate::Kind::halves_equal;
        inst.events.push_back(std::move(e));
        return true;
      },
      budget);
  return inst;
}

bool is_simple(std::span<const Element> vertices) {
  std::unordered_set<Element, ElementHash> seen;
  for (const auto& v : vertices) {
    if (!seen.insert(v).second) return false;
  }
  return true;
}

std::optional<WitnessPath> witness_path(const GroupModel& group, const Word& g_word) {
  const Element g = group.canonicalize(g_word);
  if (group.is_identity(g)) return std::nullopt;

  WitnessPath out;
  Element best_u = group.identity();
  Element best_core = g;
  if (group.kind() == GroupKind::integer_lattice) {
    out.exact = true;
  } else if (group.kind() == GroupKind::free_group) {
    // Cyclic reduction: peel u off w = u·core·u⁻¹.
    Word w = group.normal_word(g);
    std::size_t k = 0;
    while (2 * k + 2 <= w.size() && w[k] == -w[w.size() - 1 - k]) ++k;
    best_u = group.canonicalize(Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k)));
    best_core = group.canonicalize(Word(w.begin() + static_cast<std::ptrdiff_t>(k),
                                        w.end() - static_cast<std::ptrdiff_t>(k)));
    out.search_bound = k;
    out.exact = true;
  } else {
    const std::size_t bound = 2 * g_word.size() + 2;
    const Ball conjugators = group.ball(group.identity(), bound);
    // Conjugates longer than |g| never beat u = ε, so lengths are only needed
    // inside B(1, |g|).
    const std::size_t g_length = group.length(g);
    const Ball short_ball = group.ball(group.identity(), g_length);
    std::unordered_map<Element, std::size_t, ElementHash> short_length;
    for (std::size_t i = 0; i < short_ball.members.size(); ++i) {
      short_length.emplace(short_ball.members[i], short_ball.distance[i]);
    }

    std::size_t best_length = g_length;
    for (const auto& u : conjugators.members) {
      if (best_length == 1) break;
      Element h = group.multiply(group.multiply(group.inverse(u), g), u);
      auto it = short_length.find(h);
      if (it == short_length.end() || it->second >= best_length) continue;
      best_length = it->second;
      best_u = u;
      best_core = std::move(h);
    }
    out.search_bound = bound;
  }

  out.conjugator = best_u;
  out.core = group.geodesic_word(best_core);
  const auto n = out.core.size();
  Element v = group.identity();
  out.vertices.push_back(v);
  for (std::size_t i = 0; i < n; ++i) {
    v = group.right_multiply(v, out.core[i]);
    out.vertices.push_back(v);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    v = group.right_multiply(v, out.core[i]);
    out.vertices.push_back(v);
  }
  if (!is_simple(out.vertices)) {
    throw InconclusiveError("walk for " + group.format_word(g_word) + " repeats a vertex" +
                            (out.exact ? std::string(" although the core is minimal")
                                       : "; core minimal only within conjugator bound " +
                                             std::to_string(out.search_bound)));
  }
  return out;
}

std::string witness_to_dot(const GroupModel& group, const WitnessPath& path) {
  std::ostringstream dot;
  auto conj = group.format(path.conjugator);
  dot << "graph witness {\n";
  dot << "  label=\"core " << group.format_word(path.core) << ", conjugator "
      << (conj.empty() ? "e" : conj) << "\";\n";
  for (std::size_t i = 0; i < path.vertices.size(); ++i) {
    auto name = group.format(path.vertices[i]);
    dot << "  v" << i << " [label=\"" << (name.empty() ? "e" : name) << "\"];\n";
  }
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    dot << "  v" << i << " -- v" << i + 1 << ";\n";
  }
  dot << "}\n";
  return dot.str();
}

}  // namespace symdyn
