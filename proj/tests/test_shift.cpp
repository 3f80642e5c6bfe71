#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "symdyn/errors.hpp"
#include "symdyn/shift.hpp"

using namespace symdyn;

namespace {

std::vector<Element> line(const GroupModel& z, std::int64_t lo, std::int64_t hi) {
  std::vector<Element> out;
  for (auto i = lo; i <= hi; ++i) out.push_back(Element{{i}});
  return out;
}

Pattern pattern_of(const GroupModel& g, const std::vector<Element>& support, const std::vector<Symbol>& symbols) {
  std::vector<std::pair<Element, Symbol>> cells;
  for (std::size_t i = 0; i < support.size(); ++i) cells.emplace_back(support[i], symbols[i]);
  return {g, cells};
}

// Window over Z^1 radius r with symbols listed from -r to r.
WindowConfig z_window(std::size_t r, const std::string& bits) {
  auto w = Window::make(GroupModel::integer_lattice(1), r);
  std::vector<Symbol> symbols(w->size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    symbols[w->index_of(Element{{static_cast<std::int64_t>(k) - static_cast<std::int64_t>(r)}})] = bits[k] - '0';
  }
  return {w, 2, symbols};
}

// Double loop over all positions and all support cells.
std::set<Element> naive_occurrences(const WindowConfig& x, const Pattern& p) {
  const auto& g = x.group();
  std::set<Element> out;
  for (const auto& pos : x.window().elements()) {
    bool ok = true;
    for (std::size_t i = 0; i < p.size() && ok; ++i) {
      auto cell = g.multiply(pos, p.support()[i]);
      if (!x.window().contains(cell) || x.at(cell) != p.symbols()[i]) ok = false;
    }
    if (ok) out.insert(pos);
  }
  return out;
}

}  // namespace

TEST_CASE("pattern density") {
  auto z = GroupModel::integer_lattice(1);
  CHECK(pattern_density(pattern_of(z, line(z, 0, 4), {1, 0, 1, 0, 0})) == Rational(2, 5));
  CHECK(pattern_density(pattern_of(z, line(z, -3, 3), {1, 1, 1, 1, 1, 1, 1})) == 1);

  auto z2 = GroupModel::integer_lattice(2);
  auto ball = z2.ball(z2.identity(), 2).members;
  REQUIRE(ball.size() == 13);
  std::vector<Symbol> sym;
  for (const auto& g : ball) sym.push_back(z2.length(g) == 1 ? 1 : 0);
  CHECK(pattern_density(pattern_of(z2, ball, sym)) == Rational(4, 13));

  CHECK_THROWS_AS(pattern_density(Pattern{}), InputError);
}

TEST_CASE("complement density") {
  std::mt19937_64 rng(7);
  auto f2 = GroupModel::free_group(2);
  auto ball = f2.ball(f2.identity(), 3).members;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Symbol> s, t;
    for (std::size_t i = 0; i < ball.size(); ++i) {
      s.push_back(rng() & 1);
      t.push_back(1 - s.back());
    }
    CHECK(pattern_density(pattern_of(f2, ball, t)) == 1 - pattern_density(pattern_of(f2, ball, s)));
  }
}

TEST_CASE("patterns reject repeated cells and sort canonically") {
  auto f2 = GroupModel::free_group(2);
  CHECK_THROWS_AS(Pattern(f2, {{f2.parse_element("a"), 0}, {f2.parse_element("abB"), 1}}), InputError);
  Pattern p(f2, {{f2.parse_element("ab"), 1}, {f2.identity(), 0}, {f2.parse_element("B"), 1}});
  REQUIRE(p.size() == 3);
  CHECK(p.support()[0] == f2.identity());
  CHECK(p.at(f2.parse_element("B")) == Symbol{1});
  CHECK_FALSE(p.at(f2.parse_element("a")).has_value());
}

TEST_CASE("window configurations validate their symbols") {
  auto w = Window::make(GroupModel::integer_lattice(2), 1);
  CHECK_THROWS_AS(WindowConfig(w, 2, {0, 1, 0}), InputError);
  CHECK_THROWS_AS(WindowConfig(w, 2, {0, 1, 2, 0, 0}), InputError);
  auto x = WindowConfig::constant(w, 3, 2);
  CHECK(x.at(Element{{0, 1}}) == 2);
}

TEST_CASE("interior and boundary") {
  auto z2 = GroupModel::integer_lattice(2);
  std::vector<Element> square;
  for (std::int64_t i = -1; i <= 1; ++i)
    for (std::int64_t j = -1; j <= 1; ++j) square.push_back(Element{{i, j}});
  auto k1 = z2.ball(z2.identity(), 1).members;
  auto ib = interior_and_boundary(z2, square, k1);
  CHECK(ib.interior == std::vector<Element>{Element{{0, 0}}});
  CHECK(ib.boundary.size() == 8);

  std::vector<Element> one{z2.identity()};
  auto trivial = interior_and_boundary(z2, square, one);
  CHECK(trivial.interior == square);
  CHECK(trivial.boundary.empty());

  auto z = GroupModel::integer_lattice(1);
  auto seg = line(z, 0, 9);
  auto k2 = z.ball(z.identity(), 2).members;
  auto ib1 = interior_and_boundary(z, seg, k2);
  CHECK(ib1.interior == line(z, 2, 7));
  CHECK(ib1.boundary.size() == 4);
}

TEST_CASE("interior is antitone in K") {
  std::mt19937_64 rng(11);
  for (const auto& g : {GroupModel::integer_lattice(2), GroupModel::free_group(2), GroupModel::heisenberg()}) {
    auto ball = g.ball(g.identity(), 4).members;
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Element> F, K, K2;
      for (const auto& h : ball) {
        if (rng() % 3 != 0) F.push_back(h);
        if (g.length(h) <= 2 && rng() % 4 == 0) K.push_back(h);
      }
      K2 = K;
      for (const auto& h : ball)
        if (g.length(h) <= 2 && rng() % 4 == 0) K2.push_back(h);
      auto small = interior_and_boundary(g, F, K).interior;
      auto big = interior_and_boundary(g, F, K2).interior;
      std::set<Element> s(small.begin(), small.end());
      for (const auto& h : big) CHECK(s.count(h) == 1);
      auto ib = interior_and_boundary(g, F, K);
      CHECK(ib.interior.size() + ib.boundary.size() == F.size());
    }
  }
}

TEST_CASE("coding consistency") {
  auto f2 = GroupModel::free_group(2);
  auto ok = coding_check(f2, {{{"a", 1}, {"aa⁻¹a", 1}}});
  REQUIRE(ok.consistent());
  CHECK(ok.pattern->support() == std::vector<Element>{f2.parse_element("a")});
  CHECK(ok.pattern->symbols() == std::vector<Symbol>{1});

  auto z2 = GroupModel::integer_lattice(2);
  auto bad = coding_check(z2, {{{"xy", 0}, {"yx", 1}}});
  CHECK_FALSE(bad.consistent());
  REQUIRE(bad.witness.has_value());
  CHECK(*bad.witness == std::pair<std::size_t, std::size_t>{0, 1});

  auto zz = GroupModel::z2_free_z3();
  auto fp = coding_check(zz, {{{"aa", 0}, {"", 0}, {"b", 1}}});
  REQUIRE(fp.consistent());
  CHECK(fp.pattern->support() == std::vector<Element>{zz.identity(), zz.parse_element("b")});

  CHECK_THROWS_AS(coding_check(f2, {{{"q", 0}}}), InputError);
}

TEST_CASE("coding round trip") {
  std::mt19937_64 rng(3);
  for (const auto& g : oracle::builtin_groups()) {
    auto ball = g.ball(g.identity(), 2).members;
    std::vector<Symbol> s;
    for (std::size_t i = 0; i < ball.size(); ++i) s.push_back(rng() % 3);
    auto p = pattern_of(g, ball, s);
    auto back = coding_check(g, encode(g, p));
    REQUIRE(back.consistent());
    CHECK(*back.pattern == p);
  }
}

TEST_CASE("pattern occurrences") {
  auto w = Window::make(GroupModel::integer_lattice(1), 3);
  auto zero = WindowConfig::constant(w, 2, 0);
  const auto& z = w->group();
  CHECK(pattern_occurrences(zero, pattern_of(z, {z.identity()}, {0})).size() == w->size());
  CHECK(pattern_occurrences(zero, pattern_of(z, {z.identity()}, {1})).empty());

  auto x = z_window(5, "00100100100");
  auto p = pattern_of(x.group(), line(x.group(), 0, 3), {1, 0, 0, 1});
  auto found = pattern_occurrences(x, p);
  CHECK(std::set<Element>(found.begin(), found.end()) == std::set<Element>{Element{{-3}}, Element{{0}}});
  CHECK(found.front() == Element{{0}});
}

TEST_CASE("pattern occurrences match a naive double loop") {
  std::mt19937_64 rng(5);
  for (const auto& g : {GroupModel::integer_lattice(2), GroupModel::free_group(2), GroupModel::z2_free_z3(),
                        GroupModel::heisenberg()}) {
    CAPTURE(g.spec());
    auto w = Window::make(g, 4);
    auto small = g.ball(g.identity(), 1).members;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Symbol> s(w->size());
      for (auto& v : s) v = rng() % 2;
      WindowConfig x(w, 2, s);
      std::vector<Element> support;
      for (const auto& h : small)
        if (rng() % 2) support.push_back(h);
      if (support.empty()) support.push_back(small.back());
      std::vector<Symbol> ps;
      for (std::size_t i = 0; i < support.size(); ++i) ps.push_back(rng() % 2);
      auto p = pattern_of(g, support, ps);
      auto got = pattern_occurrences(x, p);
      CHECK(std::set<Element>(got.begin(), got.end()) == naive_occurrences(x, p));
      for (std::size_t i = 1; i < got.size(); ++i) CHECK(g.canonical_less(got[i - 1], got[i]));
    }
  }
}
