#include "symdyn/group.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <string>
#include <unordered_set>

#include "symdyn/errors.hpp"

namespace symdyn {

std::size_t ElementHash::operator()(const Element& g) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto v : g.nf) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

namespace {

std::vector<std::string> letter_labels(int count, bool xyz) {
  std::vector<std::string> labels;
  if (xyz && count <= 3) {
    for (int i = 0; i < count; ++i) labels.emplace_back(1, static_cast<char>('x' + i));
    return labels;
  }
  if (count > 26) throw InputError("at most 26 generators are supported");
  for (int i = 0; i < count; ++i) labels.emplace_back(1, static_cast<char>('a' + i));
  return labels;
}

// Z/2 * Z/3 block codes
constexpr std::int64_t kA = 0;

void push_z2z3(std::vector<std::int64_t>& nf, std::int64_t code) {
  if (nf.empty()) {
    nf.push_back(code);
    return;
  }
  auto& top = nf.back();
  if (code == kA) {
    if (top == kA) {
      nf.pop_back();
    } else {
      nf.push_back(kA);
    }
    return;
  }
  if (top == kA) {
    nf.push_back(code);
    return;
  }
  auto merged = (top + code) % 3;
  if (merged == 0) {
    nf.pop_back();
  } else {
    top = merged;
  }
}

void push_free(std::vector<std::int64_t>& nf, std::int64_t letter) {
  if (!nf.empty() && nf.back() == -letter) {
    nf.pop_back();
  } else {
    nf.push_back(letter);
  }
}

std::int64_t z2z3_code(Letter l) {
  switch (l) {
    case 1:
    case -1:
      return kA;
    case 2:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

GroupModel::GroupModel(GroupKind kind, int dimension, std::vector<std::string> labels)
    : kind_(kind), dimension_(dimension), labels_(std::move(labels)) {}

GroupModel GroupModel::integer_lattice(int dimension) {
  if (dimension < 1) throw InputError("lattice dimension must be positive");
  return {GroupKind::integer_lattice, dimension, letter_labels(dimension, true)};
}

GroupModel GroupModel::free_group(int rank) {
  if (rank < 1) throw InputError("free group rank must be positive");
  return {GroupKind::free_group, rank, letter_labels(rank, false)};
}

GroupModel GroupModel::z2_free_z3() { return {GroupKind::free_product_z2_z3, 2, {"a", "b"}}; }

GroupModel GroupModel::heisenberg() { return {GroupKind::heisenberg, 2, {"x", "y"}}; }

GroupModel GroupModel::parse(std::string_view spec) {
  auto parse_positive = [&](std::string_view digits) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || value < 1) {
      throw InputError("malformed group spec '" + std::string(spec) + "'");
    }
    return value;
  };
  if (spec.starts_with("z^")) return integer_lattice(parse_positive(spec.substr(2)));
  if (spec.starts_with("free:")) return free_group(parse_positive(spec.substr(5)));
  if (spec == "z2*z3") return z2_free_z3();
  if (spec == "heisenberg") return heisenberg();
  throw InputError("unknown group spec '" + std::string(spec) + "'");
}

std::string GroupModel::spec() const {
  switch (kind_) {
    case GroupKind::integer_lattice:
      return "z^" + std::to_string(dimension_);
    case GroupKind::free_group:
      return "free:" + std::to_string(dimension_);
    case GroupKind::free_product_z2_z3:
      return "z2*z3";
    case GroupKind::heisenberg:
      return "heisenberg";
  }
  return {};
}

GroupModel GroupModel::with_ball_cap(std::size_t cap) const {
  GroupModel copy = *this;
  copy.ball_cap_ = cap;
  return copy;
}

std::vector<Letter> GroupModel::letters() const {
  std::vector<Letter> out;
  for (int i = 1; i <= static_cast<int>(labels_.size()); ++i) {
    out.push_back(i);
    out.push_back(-i);
  }
  return out;
}

void GroupModel::check_letter(Letter letter) const {
  if (letter == 0 || std::abs(letter) > static_cast<int>(labels_.size())) {
    throw InputError("unknown generator index " + std::to_string(letter));
  }
}

Element GroupModel::identity() const {
  switch (kind_) {
    case GroupKind::integer_lattice:
      return {std::vector<std::int64_t>(static_cast<std::size_t>(dimension_), 0)};
    case GroupKind::heisenberg:
      return {{0, 0, 0}};
    default:
      return {};
  }
}

Element GroupModel::right_multiply(const Element& g, Letter letter) const {
  check_letter(letter);
  Element out = g;
  switch (kind_) {
    case GroupKind::integer_lattice:
      out.nf[static_cast<std::size_t>(std::abs(letter) - 1)] += letter > 0 ? 1 : -1;
      break;
    case GroupKind::free_group:
      push_free(out.nf, letter);
      break;
    case GroupKind::free_product_z2_z3:
      push_z2z3(out.nf, z2z3_code(letter));
      break;
    case GroupKind::heisenberg:
      // (a,b,c)(a',b',c') = (a+a', b+b', c+c'-a'b)
      if (std::abs(letter) == 1) {
        std::int64_t step = letter > 0 ? 1 : -1;
        out.nf[0] += step;
        out.nf[2] -= step * g.nf[1];
      } else {
        out.nf[1] += letter > 0 ? 1 : -1;
      }
      break;
  }
  return out;
}

Element GroupModel::generator(Letter letter) const { return right_multiply(identity(), letter); }

Element GroupModel::canonicalize(const Word& word) const {
  Element g = identity();
  for (Letter l : word) g = right_multiply(g, l);
  return g;
}

Element GroupModel::multiply(const Element& g, const Element& h) const {
  Element out = g;
  switch (kind_) {
    case GroupKind::integer_lattice:
      for (std::size_t i = 0; i < out.nf.size(); ++i) out.nf[i] += h.nf[i];
      break;
    case GroupKind::free_group:
      for (auto l : h.nf) push_free(out.nf, l);
      break;
    case GroupKind::free_product_z2_z3:
      for (auto c : h.nf) push_z2z3(out.nf, c);
      break;
    case GroupKind::heisenberg:
      out.nf[0] = g.nf[0] + h.nf[0];
      out.nf[1] = g.nf[1] + h.nf[1];
      out.nf[2] = g.nf[2] + h.nf[2] - h.nf[0] * g.nf[1];
      break;
  }
  return out;
}

Element GroupModel::inverse(const Element& g) const {
  Element out;
  switch (kind_) {
    case GroupKind::integer_lattice:
      out = g;
      for (auto& v : out.nf) v = -v;
      break;
    case GroupKind::free_group:
      out.nf.assign(g.nf.rbegin(), g.nf.rend());
      for (auto& v : out.nf) v = -v;
      break;
    case GroupKind::free_product_z2_z3:
      out.nf.assign(g.nf.rbegin(), g.nf.rend());
      for (auto& v : out.nf) v = v == kA ? kA : 3 - v;
      break;
    case GroupKind::heisenberg: {
      auto a = g.nf[0], b = g.nf[1], c = g.nf[2];
      out.nf = {-a, -b, -a * b - c};
      break;
    }
  }
  return out;
}

std::size_t GroupModel::length(const Element& g) const {
  switch (kind_) {
    case GroupKind::integer_lattice: {
      std::size_t total = 0;
      for (auto v : g.nf) total += static_cast<std::size_t>(std::llabs(v));
      return total;
    }
    case GroupKind::free_group:
    case GroupKind::free_product_z2_z3:
      return g.nf.size();
    case GroupKind::heisenberg:
      return heisenberg_length(g);
  }
  return 0;
}

std::size_t GroupModel::heisenberg_length(const Element& g) const {
  if (g == identity()) return 0;
  std::unordered_set<Element, ElementHash> seen{identity()};
  std::vector<Element> frontier{identity()};
  auto all = letters();
  for (std::size_t depth = 1; !frontier.empty(); ++depth) {
    std::vector<Element> next;
    for (const auto& h : frontier) {
      for (Letter l : all) {
        Element k = right_multiply(h, l);
        if (k == g) return depth;
        if (seen.insert(k).second) next.push_back(std::move(k));
      }
    }
    if (seen.size() > ball_cap_) {
      throw ResourceError("heisenberg length search exceeded ball cap " + std::to_string(ball_cap_));
    }
    frontier = std::move(next);
  }
  return 0;
}

bool GroupModel::canonical_less(const Element& g, const Element& h) const {
  auto lg = length(g), lh = length(h);
  if (lg != lh) return lg < lh;
  return g.nf < h.nf;
}

std::vector<Element> GroupModel::neighbors(const Element& g) const {
  std::vector<Element> out;
  for (Letter l : letters()) {
    Element h = right_multiply(g, l);
    if (h == g) continue;
    if (std::find(out.begin(), out.end(), h) == out.end()) out.push_back(std::move(h));
  }
  return out;
}

Ball GroupModel::ball(const Element& center, std::size_t radius) const {
  Ball b{center, radius, {center}, {0}};
  std::unordered_set<Element, ElementHash> seen{center};
  auto all = letters();
  for (std::size_t head = 0; head < b.members.size(); ++head) {
    if (b.distance[head] == radius) continue;
    for (Letter l : all) {
      Element h = right_multiply(b.members[head], l);
      if (!seen.insert(h).second) continue;
      if (b.members.size() >= ball_cap_) {
        throw ResourceError("ball of radius " + std::to_string(radius) + " exceeds cap " +
                            std::to_string(ball_cap_));
      }
      b.distance.push_back(b.distance[head] + 1);
      b.members.push_back(std::move(h));
    }
  }
  return b;
}

Word GroupModel::normal_word(const Element& g) const {
  Word w;
  switch (kind_) {
    case GroupKind::integer_lattice:
      for (std::size_t i = 0; i < g.nf.size(); ++i) {
        Letter l = static_cast<Letter>(i + 1) * (g.nf[i] < 0 ? -1 : 1);
        w.insert(w.end(), static_cast<std::size_t>(std::llabs(g.nf[i])), l);
      }
      break;
    case GroupKind::free_group:
      for (auto v : g.nf) w.push_back(static_cast<Letter>(v));
      break;
    case GroupKind::free_product_z2_z3:
      for (auto v : g.nf) w.push_back(v == kA ? 1 : (v == 1 ? 2 : -2));
      break;
    case GroupKind::heisenberg: {
      auto a = g.nf[0], b = g.nf[1], c = g.nf[2];
      w.insert(w.end(), static_cast<std::size_t>(std::llabs(a)), a < 0 ? -1 : 1);
      w.insert(w.end(), static_cast<std::size_t>(std::llabs(b)), b < 0 ? -2 : 2);
      const Word z{1, 2, -1, -2};
      const Word z_inv{2, 1, -2, -1};
      for (std::int64_t i = 0; i < std::llabs(c); ++i) {
        const Word& block = c > 0 ? z : z_inv;
        w.insert(w.end(), block.begin(), block.end());
      }
      break;
    }
  }
  return w;
}

Word GroupModel::geodesic_word(const Element& g) const {
  if (kind_ != GroupKind::heisenberg) return normal_word(g);
  if (g == identity()) return {};
  struct Step {
    std::size_t parent;
    Letter letter;
  };
  std::vector<Element> order{identity()};
  std::vector<Step> steps{{0, 0}};
  std::unordered_set<Element, ElementHash> seen{identity()};
  auto all = letters();
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (Letter l : all) {
      Element h = right_multiply(order[head], l);
      if (!seen.insert(h).second) continue;
      order.push_back(h);
      steps.push_back({head, l});
      if (h == g) {
        Word w;
        for (std::size_t at = order.size() - 1; at != 0; at = steps[at].parent) {
          w.push_back(steps[at].letter);
        }
        std::reverse(w.begin(), w.end());
        return w;
      }
      if (order.size() > ball_cap_) {
        throw ResourceError("geodesic search exceeded ball cap " + std::to_string(ball_cap_));
      }
    }
  }
  return {};
}

Word GroupModel::parse_word(std::string_view text) const {
  Word w;
  std::size_t i = 0;
  auto starts = [&](std::string_view tok) { return text.substr(i).starts_with(tok); };
  while (i < text.size()) {
    char ch = text[i];
    if (ch == ' ' || ch == '\t' || ch == '.' || ch == '*') {
      ++i;
      continue;
    }
    auto lower = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    auto it = std::find(labels_.begin(), labels_.end(), std::string(1, lower));
    if (it == labels_.end()) {
      throw InputError("unknown generator label '" + std::string(1, ch) + "' for group " + spec());
    }
    Letter l = static_cast<Letter>(it - labels_.begin() + 1);
    if (std::isupper(static_cast<unsigned char>(ch))) l = -l;
    ++i;
    std::int64_t power = 1;
    if (starts("^")) {
      ++i;
      bool negative = false;
      if (i < text.size() && text[i] == '-') {
        negative = true;
        ++i;
      }
      std::size_t begin = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (begin == i) throw InputError("malformed exponent in word '" + std::string(text) + "'");
      power = std::stoll(std::string(text.substr(begin, i - begin)));
      if (negative) power = -power;
    } else if (starts("'")) {
      ++i;
      power = -1;
    } else if (starts("⁻¹")) {  // ⁻¹
      i += std::string_view("⁻¹").size();
      power = -1;
    }
    if (power < 0) {
      l = -l;
      power = -power;
    }
    w.insert(w.end(), static_cast<std::size_t>(power), l);
  }
  return w;
}

std::string GroupModel::format_word(const Word& word) const {
  std::string out;
  for (Letter l : word) {
    check_letter(l);
    char c = labels_[static_cast<std::size_t>(std::abs(l) - 1)][0];
    out.push_back(l > 0 ? c : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

Window::Window(GroupModel group, std::size_t radius)
    : group_(std::move(group)), radius_(radius), ball_(group_.ball(group_.identity(), radius)) {
  const auto n = ball_.members.size();
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) index_.emplace(ball_.members[i], i);
  adjacency_.resize(n);
  auto all = group_.letters();
  for (std::size_t i = 0; i < n; ++i) {
    for (Letter l : all) {
      auto it = index_.find(group_.right_multiply(ball_.members[i], l));
      if (it == index_.end() || it->second == i) continue;
      auto& adj = adjacency_[i];
      if (std::find(adj.begin(), adj.end(), it->second) == adj.end()) adj.push_back(it->second);
    }
  }
  canonical_.resize(n);
  std::iota(canonical_.begin(), canonical_.end(), std::size_t{0});
  std::stable_sort(canonical_.begin(), canonical_.end(), [&](std::size_t a, std::size_t b) {
    if (ball_.distance[a] != ball_.distance[b]) return ball_.distance[a] < ball_.distance[b];
    return ball_.members[a].nf < ball_.members[b].nf;
  });
  rank_.resize(n);
  for (std::size_t r = 0; r < n; ++r) rank_[canonical_[r]] = r;
}

std::optional<std::size_t> Window::find(const Element& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Window::index_of(const Element& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) throw InputError("element outside window");
  return it->second;
}

BfsEnumerator::BfsEnumerator(const GroupModel& group) : group_(&group) {
  order_.push_back(group.identity());
  seen_.emplace(order_.front(), 0);
}

const Element& BfsEnumerator::at(std::size_t k) {
  auto all = group_->letters();
  while (order_.size() <= k) {
    if (head_ >= order_.size()) throw ResourceError("group enumeration exhausted");
    Element g = order_[head_++];
    for (Letter l : all) {
      Element h = group_->right_multiply(g, l);
      if (seen_.contains(h)) continue;
      if (order_.size() >= group_->ball_cap()) {
        throw ResourceError("enumeration exceeds cap " + std::to_string(group_->ball_cap()));
      }
      seen_.emplace(h, order_.size());
      order_.push_back(std::move(h));
    }
  }
  return order_[k];
}

}  // namespace symdyn
