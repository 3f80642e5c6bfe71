#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace symdyn {

enum class GroupKind { integer_lattice, free_group, free_product_z2_z3, heisenberg };

// A letter is a 1-based generator index with a sign: +i is s_i, -i is s_i^{-1}.
using Letter = int;
using Word = std::vector<Letter>;

/// Group element in the normal form of its group kind:
///   lattice        coordinate vector
///   free group     freely reduced letters
///   Z/2 * Z/3      block codes, 0 = a, 1 = b, 2 = b^2, alternating a / b-block
///   Heisenberg     (a, b, c) for x^a y^b z^c with z = [x, y]
/// Raw comparison is structural; use GroupModel::canonical_less for the
/// (length, normal form) order.
struct Element {
  std::vector<std::int64_t> nf;

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
  std::size_t operator()(const Element& g) const noexcept;
};

inline constexpr std::size_t kDefaultBallCap = 1'000'000;

struct Ball;

class GroupModel {
 public:
  static GroupModel integer_lattice(int dimension);
  static GroupModel free_group(int rank);
  static GroupModel z2_free_z3();
  static GroupModel heisenberg();

  /// Parses `z^d`, `free:k`, `z2*z3` or `heisenberg`.
  static GroupModel parse(std::string_view spec);

  GroupKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  std::string spec() const;
  const std::vector<std::string>& generators() const { return labels_; }
  std::size_t generator_count() const { return labels_.size(); }

  std::size_t ball_cap() const { return ball_cap_; }
  GroupModel with_ball_cap(std::size_t cap) const;

  /// Letters in BFS expansion order: s_1, s_1^{-1}, s_2, s_2^{-1}, ...
  std::vector<Letter> letters() const;

  Element identity() const;
  Element generator(Letter letter) const;
  Element canonicalize(const Word& word) const;
  Element multiply(const Element& g, const Element& h) const;
  Element right_multiply(const Element& g, Letter letter) const;
  Element inverse(const Element& g) const;
  bool is_identity(const Element& g) const { return g == identity(); }

  /// Word-metric length |g|. Heisenberg lengths come from a BFS bounded by
  /// ball_cap(); exceeding it throws ResourceError.
  std::size_t length(const Element& g) const;
  std::size_t distance(const Element& g, const Element& h) const {
    return length(multiply(inverse(g), h));
  }

  /// Order on (length, normal form).
  bool canonical_less(const Element& g, const Element& h) const;

  /// Distinct elements {gs, gs^{-1}}, self-loops removed, in letter order.
  std::vector<Element> neighbors(const Element& g) const;

  Ball ball(const Element& center, std::size_t radius) const;

  /// The normal-form word (geodesic except for Heisenberg).
  Word normal_word(const Element& g) const;
  /// A shortest word for g.
  Word geodesic_word(const Element& g) const;

  /// Words are runs of generator labels; an uppercase label, a trailing
  /// "^-1", "'" or "⁻¹" denotes the inverse. Spaces are ignored.
  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& word) const;
  Element parse_element(std::string_view text) const { return canonicalize(parse_word(text)); }
  std::string format(const Element& g) const { return format_word(normal_word(g)); }

  friend bool operator==(const GroupModel& a, const GroupModel& b) {
    return a.kind_ == b.kind_ && a.dimension_ == b.dimension_;
  }

 private:
  GroupModel(GroupKind kind, int dimension, std::vector<std::string> labels);
  void check_letter(Letter letter) const;
  std::size_t heisenberg_length(const Element& g) const;

  GroupKind kind_;
  int dimension_;
  std::vector<std::string> labels_;
  std::size_t ball_cap_ = kDefaultBallCap;
};

/// B(center, radius) with members in BFS order from the center.
struct Ball {
  Element center;
  std::size_t radius = 0;
  std::vector<Element> members;
  std::vector<std::size_t> distance;  // d(center, members[i])
};

/// The ball B(1_G, R) with an index, Cayley adjacency restricted to the ball
/// and the canonical (length, normal form) order. Shared immutably between
/// configurations, forests and instances built on the same window.
class Window {
 public:
  Window(GroupModel group, std::size_t radius);

  static std::shared_ptr<const Window> make(const GroupModel& group, std::size_t radius) {
    return std::make_shared<const Window>(group, radius);
  }

  const GroupModel& group() const { return group_; }
  std::size_t radius() const { return radius_; }
  std::size_t size() const { return ball_.members.size(); }
  const Element& element(std::size_t i) const { return ball_.members[i]; }
  const std::vector<Element>& elements() const { return ball_.members; }
  /// Distance from the identity.
  std::size_t depth(std::size_t i) const { return ball_.distance[i]; }
  std::optional<std::size_t> find(const Element& g) const;
  bool contains(const Element& g) const { return index_.contains(g); }
  std::size_t index_of(const Element& g) const;

  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_[i]; }
  const std::vector<std::vector<std::size_t>>& adjacency() const { return adjacency_; }

  /// Window indices in canonical order.
  const std::vector<std::size_t>& canonical_order() const { return canonical_; }
  std::size_t rank(std::size_t i) const { return rank_[i]; }

 private:
  GroupModel group_;
  std::size_t radius_;
  Ball ball_;
  std::unordered_map<Element, std::size_t, ElementHash> index_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::size_t> canonical_;
  std::vector<std::size_t> rank_;
};

/// Incremental BFS enumeration of G from the identity; the k-th element is
/// the k-th member of every large enough Ball at the identity.
class BfsEnumerator {
 public:
  explicit BfsEnumerator(const GroupModel& group);
  /// Element number k (0 is the identity). Throws ResourceError past ball_cap().
  const Element& at(std::size_t k);

 private:
  const GroupModel* group_;
  std::vector<Element> order_;
  std::unordered_map<Element, std::size_t, ElementHash> seen_;
  std::size_t head_ = 0;
};

}  // namespace symdyn
