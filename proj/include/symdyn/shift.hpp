#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symdyn/group.hpp"
#include "symdyn/surd.hpp"

namespace symdyn {

using Symbol = std::uint32_t;

/// Finite support-to-symbol map anchored at the identity. Cells are kept in
/// canonical element order and supports are duplicate-free.
class Pattern {
 public:
  Pattern() = default;
  Pattern(const GroupModel& group, std::vector<std::pair<Element, Symbol>> cells);

  std::size_t size() const { return support_.size(); }
  bool empty() const { return support_.empty(); }
  const std::vector<Element>& support() const { return support_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::optional<Symbol> at(const Element& g) const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  std::vector<Element> support_;
  std::vector<Symbol> symbols_;
};

/// A total coloring of the window B(1_G, R).
class WindowConfig {
 public:
  WindowConfig(std::shared_ptr<const Window> window, Symbol alphabet_size,
               std::vector<Symbol> symbols);
  static WindowConfig constant(std::shared_ptr<const Window> window, Symbol alphabet_size,
                               Symbol value);

  const Window& window() const { return *window_; }
  const std::shared_ptr<const Window>& window_ptr() const { return window_; }
  const GroupModel& group() const { return window_->group(); }
  std::size_t radius() const { return window_->radius(); }
  Symbol alphabet_size() const { return alphabet_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  Symbol at(std::size_t index) const { return symbols_[index]; }
  Symbol at(const Element& g) const { return symbols_[window_->index_of(g)]; }

  /// The restriction of the configuration to a subset of the window.
  Pattern restrict_to(std::span<const Element> support) const;

  friend bool operator==(const WindowConfig& a, const WindowConfig& b) {
    return a.window_->group() == b.window_->group() && a.radius() == b.radius() &&
           a.alphabet_ == b.alphabet_ && a.symbols_ == b.symbols_;
  }

 private:
  std::shared_ptr<const Window> window_;
  Symbol alphabet_;
  std::vector<Symbol> symbols_;
};

/// (word, symbol) tuples; words are kept as text and parsed on checking.
struct PatternCoding {
  std::vector<std::pair<std::string, Symbol>> tuples;
};

struct CodingCheck {
  std::optional<Pattern> pattern;                          // when consistent
  std::optional<std::pair<std::size_t, std::size_t>> witness;  // when not
  bool consistent() const { return pattern.has_value(); }
};

/// dens(1, P) = |{g : P_g = 1}| / |supp P|.
Rational pattern_density(const Pattern& p);

struct InteriorBoundary {
  std::vector<Element> interior;  // Int(F, K)
  std::vector<Element> boundary;  // ∂_K F
};

/// Partitions F into Int(F,K) = {g ∈ F : gK ⊆ F} and its complement in F,
/// preserving the order of F.
InteriorBoundary interior_and_boundary(const GroupModel& group, std::span<const Element> F,
                                       std::span<const Element> K);

CodingCheck coding_check(const GroupModel& group, const PatternCoding& coding);

/// Encodes a pattern as a coding of normal-form words.
PatternCoding encode(const GroupModel& group, const Pattern& p);

/// Left translates g with g·supp(p) inside the window and matching symbols,
/// in canonical order of g. Translates leaving the window are skipped.
std::vector<Element> pattern_occurrences(const WindowConfig& x, const Pattern& p);

/// Left translate g·F of a set of elements.
std::vector<Element> translate(const GroupModel& group, const Element& g,
                               std::span<const Element> F);

}  // namespace symdyn
