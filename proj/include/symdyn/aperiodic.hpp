#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symdyn/group.hpp"
#include "symdyn/lll.hpp"
#include "symdyn/shift.hpp"

namespace symdyn {

// ---------------------------------------------------------------------------
// Distinct-neighborhood 2-colorings

struct TSetEntry {
  Element shift;             // s_i
  std::vector<Element> set;  // T_i, in admission order
};

/// Test sets T_i with |T_i| = C·i and T_i ∩ s_i T_i = ∅, where s_1, s_2, ...
/// is the BFS enumeration of G with the identity skipped.
struct TSets {
  std::size_t c = 0;
  std::vector<TSetEntry> entries;  // entries[i - 1] holds level i

  std::size_t levels() const { return entries.size(); }
  const TSetEntry& level(std::size_t i) const { return entries.at(i - 1); }
};

/// Greedy BFS-order choice of the test sets. ResourceError naming the level
/// when the enumeration cap is hit first.
TSets build_t_sets(const GroupModel& group, std::size_t c, std::size_t i_max);

/// True when every entry has the prescribed size and T_i ∩ s_i T_i = ∅.
bool check_t_sets(const GroupModel& group, const TSets& tsets);

/// Binary variables on the window; one event A_{n,g} per level n ≤ n_max and
/// g with gT_n ∪ g s_n T_n inside the window. Support is gT_n followed by
/// g s_n T_n so the violation is "halves equal"; μ = 2^{-Cn}, x = 2^{-Cn/2}.
LLLInstance build_2coloring_instance(const Window& window, const TSets& tsets, std::size_t n_max);

struct DistinctNeighborhoodReport {
  std::vector<std::pair<std::size_t, Element>> violations;  // (n, g)
  std::size_t pairs_checked = 0;
  bool clean() const { return violations.empty(); }
};

/// Every (n, g) with both translates inside the window and x|_{gT_n} equal to
/// x|_{g s_n T_n} under t ↦ s_n t.
DistinctNeighborhoodReport verify_distinct_neighborhood(const WindowConfig& x, const TSets& tsets,
                                                        std::size_t n_max);

/// Wraps a resampled assignment of a window instance as a configuration.
WindowConfig assignment_to_config(std::shared_ptr<const Window> window, Symbol alphabet,
                                  const Assignment& a);

// ---------------------------------------------------------------------------
// Square-free vertex colorings

/// A simple undirected graph; built from a window's Cayley graph or by hand.
class PathWindow {
 public:
  PathWindow(std::size_t vertex_count, std::span<const std::pair<std::size_t, std::size_t>> edges);
  explicit PathWindow(const Window& window);

  std::size_t size() const { return adjacency_.size(); }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_[v]; }
  bool adjacent(std::size_t u, std::size_t v) const;
  std::size_t edge_count() const;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
};

inline constexpr std::size_t kDefaultPathBudget = 10'000'000;

using PathVisitor = std::function<bool(std::span<const std::size_t>)>;

/// Streams every simple path with 2n vertices, n ≤ max_half, once up to
/// reversal (emitted with first vertex < last vertex). The visitor returns
/// false to stop early. Returns the number of paths emitted; throws
/// ResourceError carrying the partial count beyond `budget`.
std::size_t for_each_odd_path(const PathWindow& w, std::size_t max_half, const PathVisitor& visit,
                              std::size_t budget = kDefaultPathBudget);

std::vector<std::vector<std::size_t>> enumerate_odd_paths(const PathWindow& w, std::size_t max_half,
                                                          std::size_t budget = kDefaultPathBudget);

/// First enumerated path v_1..v_{2n} with x_{v_i} = x_{v_{i+n}}; nullopt
/// certifies square-freeness up to length 2·max_half − 1.
std::optional<std::vector<std::size_t>> find_vertex_square(std::span<const Symbol> coloring,
                                                           const PathWindow& w,
                                                           std::size_t max_half);

/// One event per odd path of length 2n − 1 ≤ 2L − 1 with μ = |A|^{-n} and
/// x = (8|S|²)^{-n}.
LLLInstance build_squarefree_instance(const PathWindow& w, Symbol alphabet, std::size_t max_half,
                                      std::size_t generator_count,
                                      std::size_t budget = kDefaultPathBudget);

/// 4nj(2|S|)^{2j}, the bound on paths of length 2j − 1 meeting one of length 2n − 1.
mpz_class squarefree_dependency_bound(std::size_t n, std::size_t j, std::size_t generator_count);

// ---------------------------------------------------------------------------
// Witness paths for nontrivial stabilizer elements

struct WitnessPath {
  Element conjugator;             // u, with g = u w u^{-1}
  Word core;                      // w, of minimal length within the bound
  std::vector<Element> vertices;  // v_0 .. v_{2n-1}
  std::size_t search_bound = 0;   // |u| ranged over [0, search_bound]
  bool exact = false;             // minimal over all conjugators (Z^d, free groups)
};

/// nullopt when the word represents the identity. Lattices and free groups
/// get the exact minimal conjugate (g itself, resp. cyclic reduction); other
/// groups search u over B(1, 2|g_word| + 2). ResourceError when that ball
/// exceeds the cap; InconclusiveError when the walk built from the
/// bounded-minimal core repeats a vertex.
std::optional<WitnessPath> witness_path(const GroupModel& group, const Word& g_word);

bool is_simple(std::span<const Element> vertices);

std::string witness_to_dot(const GroupModel& group, const WitnessPath& path);

}  // namespace symdyn
