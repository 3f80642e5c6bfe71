#include "symdyn/shift.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "symdyn/errors.hpp"

namespace symdyn {

Pattern::Pattern(const GroupModel& group, std::vector<std::pair<Element, Symbol>> cells) {
  std::sort(cells.begin(), cells.end(), [&](const auto& a, const auto& b) {
    return group.canonical_less(a.first, b.first);
  });
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cells[i].first == cells[i - 1].first) {
      throw InputError("pattern support has a repeated element " + group.format(cells[i].first));
    }
  }
  support_.reserve(cells.size());
  symbols_.reserve(cells.size());
  for (auto& [g, a] : cells) {
    support_.push_back(std::move(g));
    symbols_.push_back(a);
  }
}

std::optional<Symbol> Pattern::at(const Element& g) const {
  auto it = std::find(support_.begin(), support_.end(), g);
  if (it == support_.end()) return std::nullopt;
  return symbols_[static_cast<std::size_t>(it - support_.begin())];
}

WindowConfig::WindowConfig(std::shared_ptr<const Window> window, Symbol alphabet_size,
                           std::vector<Symbol> symbols)
    : window_(std::move(window)), alphabet_(alphabet_size), symbols_(std::move(symbols)) {
  if (alphabet_ == 0) throw InputError("alphabet size must be positive");
  if (symbols_.size() != window_->size()) {
    throw InputError("configuration is not total on the window");
  }
  for (auto a : symbols_) {
    if (a >= alphabet_) throw InputError("symbol " + std::to_string(a) + " outside alphabet");
  }
}

WindowConfig WindowConfig::constant(std::shared_ptr<const Window> window, Symbol alphabet_size,
                                    Symbol value) {
  auto n = window->size();
  return {std::move(window), alphabet_size, std::vector<Symbol>(n, value)};
}

Pattern WindowConfig::restrict_to(std::span<const Element> support) const {
  std::vector<std::pair<Element, Symbol>> cells;
  cells.reserve(support.size());
  for (const auto& g : support) cells.emplace_back(g, at(g));
  return {group(), std::move(cells)};
}

Rational pattern_density(const Pattern& p) {
  if (p.empty()) throw InputError("density of an empty support is undefined");
  auto ones = std::count(p.symbols().begin(), p.symbols().end(), Symbol{1});
  Rational d(static_cast<long>(ones), static_cast<unsigned long>(p.size()));
  d.canonicalize();
  return d;
}

std::vector<Element> translate(const GroupModel& group, const Element& g,
                               std::span<const Element> F) {
  std::vector<Element> out;
  out.reserve(F.size());
  for (const auto& h : F) out.push_back(group.multiply(g, h));
  return out;
}

InteriorBoundary interior_and_boundary(const GroupModel& group, std::span<const Element> F,
                                       std::span<const Element> K) {
  std::unordered_set<Element, ElementHash> members(F.begin(), F.end());
  InteriorBoundary out;
  for (const auto& g : F) {
    bool inside = std::all_of(K.begin(), K.end(),
                              [&](const Element& k) { return members.contains(group.multiply(g, k)); });
    (inside ? out.interior : out.boundary).push_back(g);
  }
  return out;
}

CodingCheck coding_check(const GroupModel& group, const PatternCoding& coding) {
  std::unordered_map<Element, std::size_t, ElementHash> first;
  std::vector<std::pair<Element, Symbol>> cells;
  for (std::size_t i = 0; i < coding.tuples.size(); ++i) {
    const auto& [word, symbol] = coding.tuples[i];
    Element g = group.parse_element(word);
    auto [it, fresh] = first.emplace(g, i);
    if (fresh) {
      cells.emplace_back(std::move(g), symbol);
      continue;
    }
    if (coding.tuples[it->second].second != symbol) {
      return {std::nullopt, std::make_pair(it->second, i)};
    }
  }
  return {Pattern(group, std::move(cells)), std::nullopt};
}

PatternCoding encode(const GroupModel& group, const Pattern& p) {
  PatternCoding c;
  for (std::size_t i = 0; i < p.size(); ++i) {
    c.tuples.emplace_back(group.format(p.support()[i]), p.symbols()[i]);
  }
  return c;
}

std::vector<Element> pattern_occurrences(const WindowConfig& x, const Pattern& p) {
  const auto& w = x.window();
  const auto& group = w.group();
  std::vector<Element> out;
  for (auto gi : w.canonical_order()) {
    const auto& g = w.element(gi);
    bool match = true;
    for (std::size_t j = 0; j < p.size() && match; ++j) {
      auto idx = w.find(group.multiply(g, p.support()[j]));
      match = idx && x.at(*idx) == p.symbols()[j];
    }
    if (match) out.push_back(g);
  }
  return out;
}

}  // namespace symdyn
