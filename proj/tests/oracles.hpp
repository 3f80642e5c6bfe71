// Independent reference implementations used only by the tests.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "symdyn/group.hpp"

namespace oracle {

using symdyn::GroupKind;
using symdyn::GroupModel;
using symdyn::Letter;
using symdyn::Word;
using Key = std::vector<long long>;

using Mat2 = std::array<long long, 4>;
using Mat3 = std::array<long long, 9>;

inline Mat2 mul(const Mat2& p, const Mat2& q) {
  return {p[0] * q[0] + p[1] * q[2], p[0] * q[1] + p[1] * q[3], p[2] * q[0] + p[3] * q[2],
          p[2] * q[1] + p[3] * q[3]};
}

inline Mat3 mul(const Mat3& p, const Mat3& q) {
  Mat3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[3 * i + j] += p[3 * i + k] * q[3 * k + j];
  return r;
}

// Value of a word in a faithful model of the group:
//   Z^d          coordinate sum
//   free group   stack free reduction
//   Z/2 * Z/3    PSL(2, Z) with a = [[0,-1],[1,0]], b = [[0,-1],[1,1]], sign-normalized
//   Heisenberg   unipotent 3x3 integer matrices
inline Key evaluate(const GroupModel& g, const Word& w) {
  switch (g.kind()) {
    case GroupKind::integer_lattice: {
      Key v(g.dimension(), 0);
      for (Letter l : w) v[std::abs(l) - 1] += l > 0 ? 1 : -1;
      return v;
    }
    case GroupKind::free_group: {
      Key st;
      for (Letter l : w) {
        if (!st.empty() && st.back() == -l) {
          st.pop_back();
        } else {
          st.push_back(l);
        }
      }
      return st;
    }
    case GroupKind::free_product_z2_z3: {
      const Mat2 a{0, -1, 1, 0}, b{0, -1, 1, 1}, binv{1, 1, -1, 0};
      Mat2 m{1, 0, 0, 1};
      for (Letter l : w) m = mul(m, std::abs(l) == 1 ? a : (l > 0 ? b : binv));
      auto first = std::find_if(m.begin(), m.end(), [](long long e) { return e != 0; });
      if (*first < 0)
        for (auto& e : m) e = -e;
      return Key(m.begin(), m.end());
    }
    case GroupKind::heisenberg: {
      const Mat3 x{1, 1, 0, 0, 1, 0, 0, 0, 1}, xi{1, -1, 0, 0, 1, 0, 0, 0, 1};
      const Mat3 y{1, 0, 0, 0, 1, 1, 0, 0, 1}, yi{1, 0, 0, 0, 1, -1, 0, 0, 1};
      Mat3 m{1, 0, 0, 0, 1, 0, 0, 0, 1};
      for (Letter l : w) m = mul(m, l == 1 ? x : l == -1 ? xi : l == 2 ? y : yi);
      return {m[1], m[5], m[2]};
    }
  }
  return {};
}

inline std::vector<Letter> all_letters(const GroupModel& g) {
  std::vector<Letter> out;
  for (int i = 1; i <= static_cast<int>(g.generator_count()); ++i) {
    out.push_back(i);
    out.push_back(-i);
  }
  return out;
}

// Every formal word of length <= n over the generators and their inverses.
inline void for_each_word(const GroupModel& g, std::size_t n, const std::function<void(const Word&)>& f) {
  auto letters = all_letters(g);
  Word w;
  std::function<void()> rec = [&] {
    f(w);
    if (w.size() == n) return;
    for (Letter l : letters) {
      w.push_back(l);
      rec();
      w.pop_back();
    }
  };
  rec();
}

// Shortest word length of every value reachable with words of length <= n.
inline std::map<Key, std::size_t> word_lengths(const GroupModel& g, std::size_t n) {
  std::map<Key, std::size_t> out;
  for_each_word(g, n, [&](const Word& w) {
    auto k = evaluate(g, w);
    auto it = out.find(k);
    if (it == out.end() || it->second > w.size()) out[k] = w.size();
  });
  return out;
}

inline std::vector<GroupModel> builtin_groups() {
  return {GroupModel::integer_lattice(1), GroupModel::integer_lattice(2), GroupModel::integer_lattice(3),
          GroupModel::free_group(2), GroupModel::free_group(3), GroupModel::z2_free_z3(),
          GroupModel::heisenberg()};
}

}  // namespace oracle
