#include <doctest.h>

#include <unordered_map>

#include "oracles.hpp"
#include "symdyn/errors.hpp"
#include "symdyn/group.hpp"

using namespace symdyn;

namespace {

std::set<std::string> formatted(const GroupModel& g, const std::vector<Element>& xs) {
  std::set<std::string> out;
  for (const auto& x : xs) out.insert(g.format(x));
  return out;
}

}  // namespace

TEST_CASE("canonical forms of small words") {
  auto f2 = GroupModel::free_group(2);
  CHECK(f2.format(f2.parse_element("a a⁻¹ b")) == "b");
  CHECK(f2.parse_element("a a⁻¹ b") == f2.parse_element("b"));

  auto z2 = GroupModel::integer_lattice(2);
  CHECK(z2.parse_element("x y x⁻¹").nf == std::vector<std::int64_t>{0, 1});

  auto h = GroupModel::heisenberg();
  CHECK(h.parse_element("x y x⁻¹ y⁻¹").nf == std::vector<std::int64_t>{0, 0, 1});
  CHECK(h.parse_element("xyXY") == h.parse_element("x y x^-1 y'"));
}

TEST_CASE("word syntax") {
  auto f2 = GroupModel::free_group(2);
  CHECK(f2.parse_word("a^3B") == Word{1, 1, 1, -2});
  CHECK(f2.parse_word("b^-2") == Word{-2, -2});
  CHECK(f2.parse_word("") == Word{});
  CHECK(f2.format_word({1, -2, -2}) == "aBB");
  CHECK_THROWS_AS(f2.parse_word("ac"), InputError);
  CHECK_THROWS_AS(GroupModel::parse("free:0"), InputError);
  CHECK_THROWS_AS(GroupModel::parse("klein"), InputError);

  auto z5 = GroupModel::parse("z^5");
  CHECK(z5.generators() == std::vector<std::string>{"a", "b", "c", "d", "e"});
  CHECK(GroupModel::parse("z^2").generators() == std::vector<std::string>{"x", "y"});
  for (const char* spec : {"z^1", "z^3", "free:3", "z2*z3", "heisenberg"}) {
    CHECK(GroupModel::parse(spec).spec() == spec);
  }
}

TEST_CASE("ball sizes") {
  auto z2 = GroupModel::integer_lattice(2);
  CHECK(z2.ball(z2.identity(), 1).members.size() == 5);
  auto f2 = GroupModel::free_group(2);
  CHECK(f2.ball(f2.identity(), 2).members.size() == 17);
  auto zz = GroupModel::z2_free_z3();
  auto b = zz.ball(zz.identity(), 1);
  CHECK(std::set<Element>(b.members.begin(), b.members.end()) ==
        std::set<Element>{zz.identity(), zz.parse_element("a"), zz.parse_element("b"), zz.parse_element("bb")});
  CHECK(zz.format(zz.parse_element("bb")) == "B");

  for (std::size_t r = 0; r <= 20; ++r) {
    CHECK(z2.ball(z2.identity(), r).members.size() == 2 * r * r + 2 * r + 1);
  }
}

TEST_CASE("neighbors") {
  auto z1 = GroupModel::integer_lattice(1);
  CHECK(formatted(z1, z1.neighbors(z1.identity())) == std::set<std::string>{"x", "X"});
  auto zz = GroupModel::z2_free_z3();
  CHECK(formatted(zz, zz.neighbors(zz.identity())) == std::set<std::string>{"a", "b", "B"});
  CHECK(zz.neighbors(zz.identity()).size() == 3);
  auto f2 = GroupModel::free_group(2);
  CHECK(formatted(f2, f2.neighbors(f2.parse_element("a"))) == std::set<std::string>{"", "aa", "ab", "aB"});
}

TEST_CASE("canonicalization agrees with faithful models on all words up to length 6") {
  for (const auto& g : oracle::builtin_groups()) {
    if (g.generator_count() > 2) continue;
    CAPTURE(g.spec());
    std::map<oracle::Key, Element> by_value;
    std::map<Element, oracle::Key> by_element;
    bool consistent = true;
    oracle::for_each_word(g, 6, [&](const Word& w) {
      auto e = g.canonicalize(w);
      auto k = oracle::evaluate(g, w);
      auto [it1, new1] = by_value.emplace(k, e);
      auto [it2, new2] = by_element.emplace(e, k);
      if (!(it1->second == e) || it2->second != k) consistent = false;
      if (!(g.canonicalize(g.normal_word(e)) == e)) consistent = false;
    });
    CHECK(consistent);
    CHECK(by_value.size() == by_element.size());
  }
}

TEST_CASE("canonicalize is a homomorphism on words up to length 3") {
  for (const auto& g : oracle::builtin_groups()) {
    CAPTURE(g.spec());
    std::vector<Word> words;
    oracle::for_each_word(g, 3, [&](const Word& w) { words.push_back(w); });
    std::size_t bad = 0;
    for (const auto& u : words) {
      auto cu = g.canonicalize(u);
      for (const auto& v : words) {
        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        if (!(g.canonicalize(uv) == g.multiply(cu, g.canonicalize(v)))) ++bad;
      }
      if (!g.is_identity(g.multiply(cu, g.inverse(cu)))) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("balls match brute-force word enumeration") {
  for (const auto& g : oracle::builtin_groups()) {
    CAPTURE(g.spec());
    const std::size_t r = g.generator_count() > 2 ? 3 : 4;
    auto lengths = oracle::word_lengths(g, r);
    auto ball = g.ball(g.identity(), r);
    REQUIRE(ball.members.size() == lengths.size());
    for (std::size_t i = 0; i < ball.members.size(); ++i) {
      auto key = oracle::evaluate(g, g.normal_word(ball.members[i]));
      REQUIRE(lengths.count(key) == 1);
      CHECK(lengths[key] == ball.distance[i]);
      CHECK(g.length(ball.members[i]) == ball.distance[i]);
      CHECK(g.geodesic_word(ball.members[i]).size() == ball.distance[i]);
      CHECK(g.canonicalize(g.geodesic_word(ball.members[i])) == ball.members[i]);
      if (i > 0) CHECK(ball.distance[i - 1] <= ball.distance[i]);
    }
  }
}

TEST_CASE("off-center balls are translates") {
  auto f2 = GroupModel::free_group(2);
  auto g = f2.parse_element("aB");
  auto b = f2.ball(g, 2);
  auto b0 = f2.ball(f2.identity(), 2);
  std::set<Element> expect, got(b.members.begin(), b.members.end());
  for (const auto& h : b0.members) expect.insert(f2.multiply(g, h));
  CHECK(expect == got);
  for (std::size_t i = 0; i < b.members.size(); ++i) CHECK(f2.distance(g, b.members[i]) == b.distance[i]);
}

TEST_CASE("word metric is symmetric and satisfies the triangle inequality on B(1,4)") {
  for (const auto& g : oracle::builtin_groups()) {
    CAPTURE(g.spec());
    const std::size_t r = g.generator_count() > 2 ? 3 : 4;
    auto ball = g.ball(g.identity(), r).members;
    auto table = g.ball(g.identity(), 2 * r);
    std::unordered_map<Element, std::size_t, ElementHash> len;
    for (std::size_t i = 0; i < table.members.size(); ++i) len[table.members[i]] = table.distance[i];
    const auto n = ball.size();
    std::vector<std::size_t> d(n * n);
    std::size_t asym = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        d[i * n + j] = len.at(g.multiply(g.inverse(ball[i]), ball[j]));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(g.length(ball[i]) == g.length(g.inverse(ball[i])));
      for (std::size_t j = 0; j < n; ++j) asym += d[i * n + j] != d[j * n + i];
    }
    CHECK(asym == 0);
    std::size_t triangle = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) triangle += d[i * n + k] > d[i * n + j] + d[j * n + k];
    CHECK(triangle == 0);
  }
}

TEST_CASE("balls grow strictly") {
  for (const auto& g : oracle::builtin_groups()) {
    CAPTURE(g.spec());
    std::size_t prev = 0;
    for (std::size_t r = 0; r <= 5; ++r) {
      auto size = g.ball(g.identity(), r).members.size();
      CHECK(size > prev);
      prev = size;
    }
  }
}

TEST_CASE("ball cap") {
  auto f2 = GroupModel::free_group(2).with_ball_cap(100);
  CHECK_NOTHROW(f2.ball(f2.identity(), 3));
  CHECK_THROWS_AS(f2.ball(f2.identity(), 4), ResourceError);
}

TEST_CASE("window index, adjacency and canonical order") {
  for (const auto& g : oracle::builtin_groups()) {
    CAPTURE(g.spec());
    Window w(g, 3);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w.index_of(w.element(i)) != i) ++bad;
      for (auto j : w.neighbors(i)) {
        const auto& back = w.neighbors(j);
        if (std::find(back.begin(), back.end(), i) == back.end()) ++bad;
        if (g.distance(w.element(i), w.element(j)) != 1) ++bad;
      }
    }
    CHECK(bad == 0);
    const auto& order = w.canonical_order();
    REQUIRE(order.size() == w.size());
    for (std::size_t r = 1; r < order.size(); ++r) {
      CHECK(g.canonical_less(w.element(order[r - 1]), w.element(order[r])));
      CHECK(w.rank(order[r]) == r);
    }
    CHECK_FALSE(w.contains(g.ball(g.identity(), 4).members.back()));
  }
}

TEST_CASE("BFS enumeration follows ball order") {
  for (const auto& g : oracle::builtin_groups()) {
    auto ball = g.ball(g.identity(), 3);
    BfsEnumerator e(g);
    for (std::size_t k = 0; k < ball.members.size(); ++k) CHECK(e.at(k) == ball.members[k]);
  }
}
