#include "symdyn/lll.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace symdyn {

bool EventPredicate::operator()(std::span<const Symbol> values) const {
  switch (kind) {
    case Kind::halves_equal: {
      auto half = values.size() / 2;
      return std::equal(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(half),
                        values.begin() + static_cast<std::ptrdiff_t>(half));
    }
    case Kind::all_equal:
      return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>{}) ==
             values.end();
    case Kind::forbidden:
      return std::any_of(patterns.begin(), patterns.end(), [&](const auto& p) {
        return std::equal(p.begin(), p.end(), values.begin(), values.end());
      });
  }
  return false;
}

void validate(const LLLInstance& inst) {
  if (inst.variable_names.size() != inst.alphabet.size()) {
    throw InputError("variable names and alphabets differ in length");
  }
  for (auto a : inst.alphabet) {
    if (a == 0) throw InputError("variable with empty alphabet");
  }
  std::set<std::size_t> ids;
  for (const auto& e : inst.events) {
    if (!ids.insert(e.id).second) throw InputError("duplicate event id " + std::to_string(e.id));
    if (e.weight.sign() <= 0 || compare(e.weight, QSqrt2(1)) >= 0) {
      throw InputError("event " + std::to_string(e.id) + " has weight " + e.weight.to_string() +
                       " outside (0,1)");
    }
    if (sgn(e.probability) < 0 || e.probability > 1) {
      throw InputError("event " + std::to_string(e.id) + " has probability outside [0,1]");
    }
    for (auto v : e.support) {
      if (v >= inst.variable_count()) {
        throw InputError("event " + std::to_string(e.id) + " references unknown variable");
      }
    }
    if (e.violated.kind == EventPredicate::Kind::halves_equal && e.support.size() % 2 != 0) {
      throw InputError("event " + std::to_string(e.id) + " has an odd halves_equal support");
    }
  }
}

namespace {

std::vector<std::vector<std::size_t>> events_by_variable(const LLLInstance& inst) {
  std::vector<std::vector<std::size_t>> by_var(inst.variable_count());
  for (std::size_t e = 0; e < inst.events.size(); ++e) {
    for (auto v : inst.events[e].support) {
      auto& list = by_var[v];
      if (list.empty() || list.back() != e) list.push_back(e);
    }
  }
  return by_var;
}

bool evaluate(const BadEvent& e, const Assignment& a, std::vector<Symbol>& buffer) {
  buffer.clear();
  for (auto v : e.support) buffer.push_back(a[v]);
  return e.violated(buffer);
}

// Portable uniform draw in [0, bound).
Symbol uniform_symbol(std::mt19937_64& rng, Symbol bound) {
  if (bound <= 1) return 0;
  const std::uint64_t b = bound;
  const std::uint64_t threshold = (0 - b) % b;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return static_cast<Symbol>(r % b);
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> dependency_graph(const LLLInstance& inst) {
  auto by_var = events_by_variable(inst);
  std::vector<std::vector<std::size_t>> graph(inst.events.size());
  std::vector<std::size_t> stamp(inst.events.size(), SIZE_MAX);
  for (std::size_t e = 0; e < inst.events.size(); ++e) {
    stamp[e] = e;
    for (auto v : inst.events[e].support) {
      for (auto f : by_var[v]) {
        if (stamp[f] == e) continue;
        stamp[f] = e;
        graph[e].push_back(f);
      }
    }
    std::sort(graph[e].begin(), graph[e].end());
  }
  return graph;
}

std::vector<std::map<int, std::size_t>> level_dependency_counts(const LLLInstance& inst) {
  auto graph = dependency_graph(inst);
  std::vector<std::map<int, std::size_t>> counts(inst.events.size());
  for (std::size_t e = 0; e < graph.size(); ++e) {
    for (auto f : graph[e]) ++counts[e][inst.events[f].level];
  }
  return counts;
}

Verdict verify_condition(const LLLInstance& inst) {
  validate(inst);
  auto graph = dependency_graph(inst);
  Verdict verdict;
  verdict.margins.reserve(inst.events.size());
  // (1 − x)^k is shared by many events; memoize on (x, k).
  std::map<QSqrt2, std::map<std::size_t, QSqrt2>, QSqrt2KeyLess> powers;
  for (std::size_t e = 0; e < inst.events.size(); ++e) {
    const auto& event = inst.events[e];
    std::map<QSqrt2, std::size_t, QSqrt2KeyLess> classes;
    for (auto f : graph[e]) ++classes[inst.events[f].weight];
    QSqrt2 rhs = event.weight;
    for (const auto& [w, k] : classes) {
      auto& cache = powers[w];
      auto it = cache.find(k);
      if (it == cache.end()) it = cache.emplace(k, (QSqrt2(1) - w).pow(k)).first;
      rhs *= it->second;
    }
    QSqrt2 margin = rhs - QSqrt2(event.probability);
    if (margin.sign() < 0) verdict.holds = false;
    verdict.margins.push_back({event.id, graph[e].size(), std::move(rhs), std::move(margin)});
  }
  return verdict;
}

bool avoids_all(const LLLInstance& inst, const Assignment& a) {
  std::vector<Symbol> buffer;
  return std::none_of(inst.events.begin(), inst.events.end(),
                      [&](const BadEvent& e) { return evaluate(e, a, buffer); });
}

ResampleRun resample(const LLLInstance& inst, std::uint64_t seed, std::size_t cap) {
  validate(inst);
  std::mt19937_64 rng(seed);
  ResampleRun run;
  run.assignment.resize(inst.variable_count());
  for (std::size_t v = 0; v < inst.variable_count(); ++v) {
    run.assignment[v] = uniform_symbol(rng, inst.alphabet[v]);
  }
  auto by_var = events_by_variable(inst);
  std::vector<Symbol> buffer;
  std::set<std::pair<std::size_t, std::size_t>> violated;  // (id, position)
  for (std::size_t e = 0; e < inst.events.size(); ++e) {
    if (evaluate(inst.events[e], run.assignment, buffer)) violated.emplace(inst.events[e].id, e);
  }
  std::vector<std::size_t> stamp(inst.events.size(), SIZE_MAX);
  while (!violated.empty()) {
    if (run.trace.size() >= cap) {
      throw NonterminatingError("resampling exceeded cap " + std::to_string(cap), run.trace);
    }
    auto [id, pos] = *violated.begin();
    const auto& event = inst.events[pos];
    for (auto v : event.support) run.assignment[v] = uniform_symbol(rng, inst.alphabet[v]);
    run.trace.push_back(id);
    const auto step = run.trace.size();
    for (auto v : event.support) {
      for (auto f : by_var[v]) {
        if (stamp[f] == step) continue;
        stamp[f] = step;
        std::pair key{inst.events[f].id, f};
        if (evaluate(inst.events[f], run.assignment, buffer)) {
          violated.insert(key);
        } else {
          violated.erase(key);
        }
      }
    }
  }
  return run;
}

std::optional<bool> audit_probability(const LLLInstance& inst, const BadEvent& event,
                                      unsigned max_bits) {
  double bits = 0;
  for (auto v : event.support) bits += std::log2(static_cast<double>(inst.alphabet[v]));
  if (bits > max_bits + 1e-9) return std::nullopt;
  std::vector<Symbol> values(event.support.size(), 0);
  std::uint64_t total = 0, bad = 0;
  for (;;) {
    ++total;
    if (event.violated(values)) ++bad;
    std::size_t i = 0;
    for (; i < values.size(); ++i) {
      if (++values[i] < inst.alphabet[event.support[i]]) break;
      values[i] = 0;
    }
    if (i == values.size()) break;
  }
  Rational measured(mpz_class(static_cast<unsigned long>(bad)),
                    mpz_class(static_cast<unsigned long>(total)));
  measured.canonicalize();
  return measured == event.probability;
}

bool aperiodic_constant_holds(std::uint64_t c) {
  QSqrt2 s = QSqrt2::pow2_half(static_cast<long>(c));
  QSqrt2 lhs = QSqrt2(static_cast<long>(16 * c)) * s;
  QSqrt2 d = s - QSqrt2(1);
  return compare(d * d, lhs) >= 0;
}

double aperiodic_constant_value(std::uint64_t c) {
  double s = std::exp2(static_cast<double>(c) / 2.0);
  return 16.0 * static_cast<double>(c) * s / ((s - 1) * (s - 1));
}

std::uint64_t aperiodic_constant_scan(std::uint64_t c_max) {
  if (c_max < 1) throw InputError("c_max must be at least 1");
  for (std::uint64_t c = 1; c <= c_max; ++c) {
    if (aperiodic_constant_holds(c)) return c;
  }
  throw NotFoundError("no C <= " + std::to_string(c_max) + " satisfies the inequality");
}

Rational dyadic_series_partial_sum(unsigned n) {
  Rational sum(0);
  Rational term_weight(1, 2);
  for (unsigned j = 1; j <= n; ++j) {
    sum += Rational(j) * term_weight;
    term_weight /= 2;
  }
  sum.canonicalize();
  return sum;
}

Rational dyadic_series_limit() {
  Rational r(1, 2);
  Rational one_minus = 1 - r;
  Rational limit = r / (one_minus * one_minus);
  limit.canonicalize();
  return limit;
}

mpz_class squarefree_alphabet_bound(std::uint64_t s) {
  if (s < 1) throw InputError("generator count must be positive");
  Rational exponent = 8 * dyadic_series_limit();
  exponent.canonicalize();
  if (exponent.get_den() != 1) throw std::logic_error("series exponent is not an integer");
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 2, exponent.get_num().get_ui());
  mpz_class sz(static_cast<unsigned long>(s));
  return 8 * sz * sz * power;
}

}  // namespace symdyn
